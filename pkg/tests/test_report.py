import numpy as np

from planfit import ExperimentConfig, run_experiment, unlv
from planfit.report import save_convergence_figure, save_deficiency_figure

PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


def _state():
    return run_experiment(ExperimentConfig(source="fixture")).state


def test_deficiency_figure_written(tmp_path):
    out = tmp_path / "deficiency.png"
    refs = [unlv((-0.22485951, 0.9743912)), unlv((-1.0, 1.0))]
    save_deficiency_figure(_state(), refs, ["truth", "diagonal"], out)
    data = out.read_bytes()
    assert data[:8] == PNG_MAGIC
    assert len(data) > 1000


def test_convergence_figure_written(tmp_path):
    out = tmp_path / "convergence.png"
    save_convergence_figure(_state(), out)
    data = out.read_bytes()
    assert data[:8] == PNG_MAGIC
    assert len(data) > 1000


def test_figures_accept_history_list(tmp_path):
    history = [np.array([1.0, 0.0]), np.array([0.8, 0.6]), np.array([0.6, 0.8])]
    save_convergence_figure(history, tmp_path / "c.png")
    save_deficiency_figure(history, [unlv((0.0, 1.0))], ["up"], tmp_path / "d.png")
    assert (tmp_path / "c.png").exists()
    assert (tmp_path / "d.png").exists()
