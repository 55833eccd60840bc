"""Figure rendering for run reports. All output goes to files, never a display."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .estimator import convergence, step_deltas


def save_deficiency_figure(state_or_history, references, labels, path):
    """Per-step distance of the estimate to each reference direction."""
    dist = convergence(state_or_history, references)
    steps = np.arange(1, dist.shape[0] + 1)
    fig, ax = plt.subplots(figsize=(7.0, 4.0))
    for r, label in enumerate(labels):
        ax.plot(steps, dist[:, r], marker="o", markersize=3, label=label)
    ax.set_xlabel("step")
    ax.set_ylabel("distance to reference")
    ax.set_title("Estimate deficiency by step")
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def save_convergence_figure(state_or_history, path, window: int = 5,
                            eps_mean: float = 0.02, eps_std: float = 0.02):
    """Angular shift between consecutive estimates, with the stop threshold."""
    deltas = step_deltas(state_or_history)
    steps = np.arange(2, deltas.shape[0] + 2)
    fig, ax = plt.subplots(figsize=(7.0, 4.0))
    ax.plot(steps, deltas, marker="o", markersize=3, label="shift (rad)")
    ax.axhline(eps_mean, linestyle="--", linewidth=1.0, color="tab:red",
               label=f"mean threshold {eps_mean:g}")
    ax.set_xlabel("step")
    ax.set_ylabel("estimate shift (rad)")
    ax.set_title(f"Estimate convergence (stop window {window})")
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
