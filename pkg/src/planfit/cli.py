"""Command line front end.

Subcommands mirror the library pipeline: solve an instance, reduce its
costs, classify a situation's region, build the tangent-polygon situation,
run the estimator over an observation log, run a full experiment, or serve
the HTTP API. --json switches any subcommand to machine-readable output;
validation failures exit with code 2 and the error class name on stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from .core import Dms, TransportInstance, plan_cost
from .errors import PlanfitError, ShapeError
from .estimator import (
    EstimateState,
    estimate,
    estimate_records,
    ingest,
    read_observation_log,
    should_stop,
)
from .lpsolve import solve_max
from .reduction import build_constraints, reconstruct_plan, reduce_objective
from .simulation import (
    ExperimentConfig,
    run_experiment,
    write_result_csv,
    write_result_json,
)
from .spectrum import classify_tr, informativeness_report, polygon_dms, report_csv


def _load_json(arg: str) -> dict:
    text = arg
    if not arg.lstrip().startswith(("{", "[")):
        text = Path(arg).read_text(encoding="utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ShapeError(f"not valid JSON: {exc}") from exc


def _dms_from_payload(payload: dict) -> Dms:
    try:
        return Dms(payload["supply"], payload["demand"])
    except KeyError as exc:
        raise ShapeError(f"missing field {exc} in situation JSON") from exc


def _emit(args, payload: dict, text_lines: list[str]) -> None:
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        for line in text_lines:
            print(line)


def _fmt_vec(v, nd: int = 6) -> str:
    return "(" + ", ".join(f"{float(x):.{nd}f}" for x in v) + ")"


def cmd_solve(args) -> int:
    payload = _load_json(args.instance)
    try:
        inst = TransportInstance(
            np.array(payload["costs"], dtype=float),
            payload["supply"], payload["demand"],
        )
    except KeyError as exc:
        raise ShapeError(f"missing field {exc} in instance JSON") from exc
    objective = reduce_objective(inst)
    lpp = build_constraints(inst.dms)
    sol = solve_max(lpp, objective.ctilde.ravel())
    plan = reconstruct_plan(inst.dms, sol.vertex.point)
    cost = plan_cost(inst, plan)
    out = {
        "plan": plan.x.tolist(),
        "free_vars": sol.vertex.point.tolist(),
        "active_pair": list(sol.active_pair) if sol.active_pair else None,
        "raw_cost": cost.raw,
        "normalized_cost": cost.normalized,
    }
    lines = ["plan:"]
    lines += ["  " + "  ".join(f"{v:10.3f}" for v in row) for row in plan.x]
    lines.append(f"free vars: {_fmt_vec(sol.vertex.point)}")
    if sol.active_pair:
        lines.append(f"active pair: {sol.active_pair[0]}-{sol.active_pair[1]}")
    lines.append(f"raw cost: {cost.raw:.6f}")
    lines.append(f"normalized cost: {cost.normalized:.6f}")
    _emit(args, out, lines)
    return 0


def cmd_reduce(args) -> int:
    payload = _load_json(args.costs)
    costs = payload["costs"] if isinstance(payload, dict) else payload
    objective = reduce_objective(np.array(costs, dtype=float))
    direction = objective.direction
    out = {
        "ctilde": objective.ctilde.ravel().tolist(),
        "unlv": direction.e.tolist(),
    }
    lines = [
        f"ctilde: {_fmt_vec(objective.ctilde.ravel(), 3)}",
        f"unlv:   {_fmt_vec(direction.e)}",
    ]
    _emit(args, out, lines)
    return 0


def cmd_classify(args) -> int:
    dms = _dms_from_payload(_load_json(args.dms))
    cls = classify_tr(dms)
    out = {
        "active_constraints": list(cls.active_constraints),
        "vertex_ranks": list(cls.vertex_ranks),
        "general_rank": cls.general_rank,
        "average_rank": cls.average_rank,
        "average_weight": cls.average_weight,
        "type_id": cls.type_id,
        "group_id": cls.group_id,
    }
    lines = [f"active: {{{', '.join(str(i) for i in cls.active_constraints)}}}"]
    if cls.vertex_ranks:
        lines.append(
            f"ranks: {'-'.join(str(r) for r in cls.vertex_ranks)}"
            f"  general {cls.general_rank}  average {cls.average_rank:.3f}"
        )
        lines.append(f"average weight: {cls.average_weight:.3f}")
    if cls.type_id is not None:
        lines.append(f"type: {cls.type_id} (group {cls.group_id})")
    _emit(args, out, lines)
    return 0


def cmd_polygon(args) -> int:
    dms = polygon_dms(args.m, args.n, args.rho)
    out = {"supply": dms.supply.tolist(), "demand": dms.demand.tolist()}
    _emit(args, out, [
        f"supply: {_fmt_vec(dms.supply)}",
        f"demand: {_fmt_vec(dms.demand)}",
    ])
    return 0


def cmd_catalogue(args) -> int:
    rows = informativeness_report(args.m, args.n)
    if args.json:
        print(json.dumps([{
            "type_id": r.type_id,
            "active": list(r.active),
            "vertex_ranks": list(r.vertex_ranks),
            "general_rank": r.general_rank,
            "average_rank": r.average_rank,
            "average_weight": r.average_weight,
            "group_id": r.group_id,
        } for r in rows], indent=2))
    else:
        sys.stdout.write(report_csv(rows))
    return 0


def cmd_estimate(args) -> int:
    observations = read_observation_log(args.log)
    state = EstimateState(d=2, window=args.window)
    for obs in observations:
        ingest(state, obs)
    final = estimate(state)
    stop = should_stop(state)
    records = estimate_records(state)
    out = {
        "steps": state.count,
        "final_estimate": final.e.tolist(),
        "stop": stop.stop,
        "mean_delta": stop.mean_delta,
        "std_delta": stop.std_delta,
        "trace": records,
    }
    lines = [
        f"step {r['step']:3d}: estimate "
        + (_fmt_vec(r["e"]) if r["e"] else "(undefined)")
        for r in records
    ]
    lines.append(f"final: {_fmt_vec(final.e)}  stop: {stop.stop}")
    if args.out:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        with open(outdir / "trace.csv", "w", encoding="utf-8") as fh:
            fh.write("step,est_x,est_y,sum_x,sum_y\n")
            for r in records:
                e = r["e"] or ["", ""]
                fh.write(f"{r['step']},{e[0]},{e[1]},{r['sums'][0]},{r['sums'][1]}\n")
        from .report import save_convergence_figure

        save_convergence_figure(state, outdir / "convergence.png")
        lines.append(f"wrote {outdir / 'trace.csv'} and {outdir / 'convergence.png'}")
    _emit(args, out, lines)
    return 0


def cmd_simulate(args) -> int:
    config = ExperimentConfig(
        m=args.m,
        n=args.n,
        source="fixture" if args.fixture else "generated",
        steps=args.steps,
        value_range=tuple(args.range),
        seed=args.seed,
        window=args.window,
        observation_source=args.observations,
        truth_costs=(
            np.array(_load_json(args.costs)["costs"], dtype=float)
            if args.costs else None
        ),
        truth_unlv=np.array(args.truth_unlv) if args.truth_unlv else None,
    )
    result = run_experiment(config)
    from .simulation import result_summary

    summary = result_summary(result)
    lines = [
        f"steps: {summary['steps']}  source: {summary['source']}",
        f"final estimate: {_fmt_vec(summary['final_estimate'])}",
        f"truth:          {_fmt_vec(summary['truth'])}",
        f"effectiveness: {summary['effectiveness']:.3f}",
        f"stopping step: {summary['stopping_step']}",
    ]
    if args.out:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        write_result_csv(result, outdir / "result.csv")
        write_result_json(result, outdir / "result.json")
        from .report import save_convergence_figure, save_deficiency_figure

        refs = [result.truth]
        labels = ["true direction"]
        save_convergence_figure(result.state, outdir / "convergence.png")
        save_deficiency_figure(result.state, refs, labels, outdir / "deficiency.png")
        lines.append(f"wrote result.csv, result.json and figures to {outdir}")
    _emit(args, summary, lines)
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(args.data_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="planfit",
        description="Learn a planner's hidden objective direction from observed choices",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve one instance (costs + situation)")
    p.add_argument("instance", help="JSON file or literal with costs, supply, demand")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("reduce", help="reduce a cost matrix to its direction")
    p.add_argument("costs", help="JSON file or literal with a costs matrix")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("classify", help="classify a situation's feasible region")
    p.add_argument("--dms", required=True, help="JSON file or literal with supply, demand")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("polygon", help="build the tangent-polygon situation")
    p.add_argument("m", type=int)
    p.add_argument("n", type=int)
    p.add_argument("rho", type=float)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_polygon)

    p = sub.add_parser("catalogue", help="print the region-type catalogue")
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_catalogue)

    p = sub.add_parser("estimate", help="run the estimator over an observation log")
    p.add_argument("log", help="CSV file with situations and chosen points")
    p.add_argument("--window", type=int, default=None)
    p.add_argument("--out", default=None, help="directory for trace.csv and figures")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("simulate", help="run a full experiment")
    p.add_argument("--fixture", action="store_true", help="use the bundled study data")
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--steps", type=int, default=25)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--range", type=int, nargs=2, default=(1, 100),
                   metavar=("LO", "HI"))
    p.add_argument("--window", type=int, default=None)
    p.add_argument("--observations", choices=("recorded", "derived"), default=None,
                   help="fixture only: replay recorded observations or re-derive them")
    p.add_argument("--costs", default=None, help="JSON file with the true cost matrix")
    p.add_argument("--truth-unlv", type=float, nargs=2, default=None,
                   metavar=("X", "Y"))
    p.add_argument("--out", default=None, help="directory for result files and figures")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("serve", help="serve the HTTP API")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int,
                   default=int(os.environ.get("PLANFIT_PORT", "8000")))
    p.add_argument("--data-dir",
                   default=os.environ.get("PLANFIT_DATA_DIR", "planfit_data"))
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except PlanfitError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"FileNotFoundError: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
