"""Command-line driver: ``hybridfs {distances,relation,select,evaluate}``.

Reports are JSON by default and echo every parameter. Feature indices are
1-based in all output. Exit codes: 0 success, 2 usage error, 3 data error,
4 solver budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from collections.abc import Sequence
from typing import Any

import numpy as np

from . import __version__
from .data import DataError, HybridInformationSystem, SchemaError, partition_by_decision, read_dataset
from .distance import compute_stats, decompose
from .evaluation import evaluate_subset
from .model import ModelMode, prune_dominated_rows
from .relation import (
    FuzzyRelationMatrix,
    class_approximations,
    dependency,
    gaussian_relation,
    lower_relation,
    upper_relation,
)
from .solvers import (
    DEFAULT_DELTA_GRID,
    SOLVERS,
    BlackHoleParams,
    BudgetExceededError,
    best_sweep_point,
    delta_sweep,
    prepare_problem,
    solve,
)
from .validation import check_sigma

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_BUDGET = 0, 2, 3, 4


class UsageError(Exception):
    pass


def _matrix(values: np.ndarray) -> list[list[float | None]]:
    return [[None if math.isnan(v) else float(v) for v in row] for row in np.asarray(values)]


def _load(args) -> HybridInformationSystem:
    if not args.schema or not args.data:
        raise UsageError("--schema and --data are required")
    return read_dataset(args.data, args.schema)


def _sigma(args) -> float:
    try:
        return check_sigma(args.sigma, args.sigma2)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _read_matrix(path: str) -> np.ndarray:
    with open(path, encoding="utf-8", newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].startswith("#")]
    try:
        values = np.array([[float(v) for v in r] for r in rows])
    except ValueError as exc:
        raise DataError(f"relation matrix {path}: {exc}") from None
    if values.ndim != 2 or values.shape[0] != values.shape[1]:
        raise DataError(f"relation matrix {path} must be square")
    return values


def cmd_distances(args) -> dict[str, Any]:
    his = _load(args)
    stats = compute_stats(his)
    decomp = decompose(his, stats)
    payload: dict[str, Any] = {
        "n": his.n,
        "attributes": stats.to_dict(his.names),
        "hd": _matrix(decomp.hd),
    }
    if args.decomposition:
        payload["decomposition"] = [
            {"pair": [int(i) + 1, int(j) + 1], "sq": [float(v) for v in row]}
            for (i, j), row in zip(decomp.pairs, decomp.sq)
        ]
    return payload


def cmd_relation(args) -> dict[str, Any]:
    sigma = _sigma(args)
    his = None
    if args.relation_matrix:
        R = FuzzyRelationMatrix(_read_matrix(args.relation_matrix), kind="given")
    else:
        his = _load(args)
        R = gaussian_relation(decompose(his, compute_stats(his)).hd, sigma)
    payload: dict[str, Any] = {"relation": _matrix(R.values)}
    if args.upper:
        payload["upper"] = _matrix(upper_relation(R).values)
    if args.lower:
        payload["lower"] = _matrix(lower_relation(R).values)
    if args.approximations:
        if his is None:
            his = _load(args)
        partition = partition_by_decision(his)
        if partition.n != R.n:
            raise DataError(f"relation has {R.n} objects but the dataset has {partition.n}")
        approx = class_approximations(R, partition)
        payload["classes"] = list(partition.labels)
        payload["lower_approximation"] = _matrix(approx.lower)
        payload["upper_approximation"] = _matrix(approx.upper)
        payload["positive_region"] = [float(v) for v in approx.positive_region()]
        payload["dependency"] = dependency(approx)
    return payload


def cmd_select(args) -> dict[str, Any]:
    his = _load(args)
    sigma = _sigma(args)
    if args.sweep == (args.delta is not None):
        raise UsageError("give exactly one of --delta or --sweep")
    if args.delta is not None and not 0.0 <= args.delta <= 1.0:
        raise UsageError(f"--delta must lie in [0, 1], got {args.delta}")
    params = BlackHoleParams(population=args.pop, max_iterations=args.iters, seed=args.seed)
    problem = prepare_problem(his, sigma, args.mode)
    payload: dict[str, Any] = {"features": his.names, "mode": args.mode, "sigma": sigma}
    warnings = []
    if args.sweep:
        points = delta_sweep(problem, DEFAULT_DELTA_GRID, args.solver, params, args.max_exact)
        best = best_sweep_point(points)
        payload["sweep"] = [pt.to_dict() for pt in points]
        payload["best_delta"] = None if best is None else best.delta
        payload["result"] = None if best is None else best.result.to_dict()
        warnings += [f"delta={pt.delta} gives a degenerate model" for pt in points if pt.model.degenerate]
        model = None if best is None else best.model
    else:
        model = problem.model(args.delta)
        if args.prune:
            model = prune_dominated_rows(model)
        result = solve(model, args.solver, params, args.max_exact)
        if model.degenerate:
            warnings.append(f"delta={args.delta} gives a degenerate model")
        payload.update(delta=args.delta, theta=model.theta if math.isfinite(model.theta) else None,
                       rows=model.n_rows, result=result.to_dict())
    payload["warnings"] = warnings
    if args.dump_model and model is not None:
        with open(args.dump_model, "w", encoding="utf-8") as fh:
            json.dump(model.to_dict(), fh)
    return payload


def _parse_mask(args, m: int) -> np.ndarray:
    if (args.mask is None) == (args.from_select is None):
        raise UsageError("give exactly one of --mask or --from-select")
    if args.mask is not None:
        try:
            selected = [int(tok) for tok in args.mask.split(",") if tok.strip()]
        except ValueError:
            raise UsageError(f"--mask must be comma-separated 1-based indices, got {args.mask!r}") from None
    else:
        with open(args.from_select, encoding="utf-8") as fh:
            report = json.load(fh)
        # A select report nests the solver output under result.result.
        result = (report.get("result") or {}).get("result") or {}
        if "selected" not in result:
            raise DataError(f"{args.from_select} holds no selection result")
        selected = [int(k) for k in result["selected"]]
    if not selected:
        raise UsageError("the mask selects no features")
    if any(not 1 <= k <= m for k in selected):
        raise UsageError(f"feature indices must lie in 1..{m}")
    mask = np.zeros(m, dtype=np.int8)
    mask[[k - 1 for k in selected]] = 1
    return mask


def cmd_evaluate(args) -> dict[str, Any]:
    his = _load(args)
    mask = _parse_mask(args, his.m)
    report = evaluate_subset(his, mask, args.folds, args.knn_k, args.seed, args.positive_label)
    return {"selected": [int(k) + 1 for k in np.flatnonzero(mask)], "metrics": report.to_dict()}


COMMANDS = {
    "distances": cmd_distances,
    "relation": cmd_relation,
    "select": cmd_select,
    "evaluate": cmd_evaluate,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--schema", help="JSON schema file")
    common.add_argument("--data", help="CSV dataset")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--output", help="write the report here instead of stdout")
    width = common.add_mutually_exclusive_group()
    width.add_argument("--sigma", type=float, help="kernel width (default 0.2)")
    width.add_argument("--sigma2", type=float, help="squared kernel width")

    parser = argparse.ArgumentParser(prog="hybridfs", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("distances", parents=[common], help="hybrid distance matrix")
    p.add_argument("--decomposition", action="store_true", help="include per-attribute squared distances")

    p = sub.add_parser("relation", parents=[common], help="kernel relation and approximations")
    p.add_argument("--upper", action="store_true")
    p.add_argument("--lower", action="store_true")
    p.add_argument("--approximations", action="store_true", help="class approximations and dependency")
    p.add_argument("--relation-matrix", help="CSV relation to use instead of computing one")

    p = sub.add_parser("select", parents=[common], help="solve the selection model")
    p.add_argument("--delta", type=float)
    p.add_argument("--sweep", action="store_true", help="delta = 0.0, 0.1, ..., 0.9")
    p.add_argument("--mode", choices=[m.value for m in ModelMode], default="normal")
    p.add_argument("--solver", choices=SOLVERS, default="exact")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--pop", type=int, default=30)
    p.add_argument("--iters", type=int, default=500)
    p.add_argument("--max-exact", type=int, default=25, help="exact solver feature budget")
    p.add_argument("--prune", action="store_true", help="drop dominated constraint rows first")
    p.add_argument("--dump-model", help="write the (best) model as JSON")

    p = sub.add_parser("evaluate", parents=[common], help="k-fold KNN scores of a feature subset")
    p.add_argument("--mask", help="comma-separated 1-based feature indices")
    p.add_argument("--from-select", help="read the subset from a select report")
    p.add_argument("--folds", type=int, default=5)
    p.add_argument("--knn-k", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--positive-label")
    return parser


def _csv_report(report: dict[str, Any]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    blocks = [
        (key, report["result"][key])
        for key in ("hd", "relation", "upper", "lower", "lower_approximation", "upper_approximation")
        if key in report["result"]
    ]
    if not blocks:
        raise UsageError(f"--format csv only applies to matrix output, not {report['command']!r}")
    for name, rows in blocks:
        buf.write(f"# {name}\n")
        for row in rows:
            writer.writerow(["" if v is None else repr(v) for v in row])
    return buf.getvalue()


def run(argv: Sequence[str] | None = None) -> tuple[int, str]:
    """Execute one command; returns ``(exit_code, rendered_report)``."""
    parser = build_parser()
    args = parser.parse_args(argv)
    config = {k: v for k, v in sorted(vars(args).items()) if k != "output"}
    start = time.perf_counter()
    try:
        result = COMMANDS[args.command](args)
        report = {
            "tool": "hybridfs",
            "version": __version__,
            "command": args.command,
            "config": config,
            "result": result,
        }
        text = _csv_report(report) if args.format == "csv" else None
    except UsageError as exc:
        parser.exit(EXIT_USAGE, f"hybridfs: error: {exc}\n")
    except BudgetExceededError as exc:
        print(f"hybridfs: solver budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET, ""
    except (DataError, SchemaError, OSError, ValueError) as exc:
        print(f"hybridfs: data error: {exc}", file=sys.stderr)
        return EXIT_DATA, ""
    if text is None:
        report["wall_time"] = round(time.perf_counter() - start, 6)
        text = json.dumps(report, indent=2) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
        return EXIT_OK, ""
    return EXIT_OK, text


def main(argv: Sequence[str] | None = None) -> int:
    code, text = run(argv)
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
