"""Solvers for :class:`~hybridfs.model.SelectionModel`.

All solvers are deterministic. The black-hole search draws from NumPy's
PCG64 generator (``numpy.random.default_rng(seed)``), whose streams are
reproducible across platforms.
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from typing import Any

import numpy as np

from .data import HybridInformationSystem, cross_class_pairs, partition_by_decision
from .distance import DistanceDecomposition, compute_stats, decompose
from .model import (
    FEASIBILITY_EPS,
    ModelMode,
    SelectionModel,
    build_model,
    is_feasible,
)
from .relation import FuzzyRelationMatrix, gaussian_relation, upper_relation

__all__ = [
    "SOLVERS",
    "BudgetExceededError",
    "SolveResult",
    "BlackHoleParams",
    "solve_exact",
    "solve_greedy",
    "solve_blackhole",
    "solve",
    "reverse_delete",
    "SelectionProblem",
    "prepare_problem",
    "SweepPoint",
    "DEFAULT_DELTA_GRID",
    "delta_sweep",
    "best_sweep_point",
]

SOLVERS = ("exact", "greedy", "blackhole")
DEFAULT_DELTA_GRID = tuple(round(0.1 * i, 1) for i in range(10))


class BudgetExceededError(RuntimeError):
    """The exact solver was asked to enumerate beyond its budget."""


@dataclass(frozen=True, eq=False)
class SolveResult:
    mask: np.ndarray
    objective: int
    feasible: bool
    solver: str
    seed: int | None = None
    iterations_used: int = 0
    proven_optimal: bool = False

    @property
    def selected(self) -> list[int]:
        """0-based indices of the selected features."""
        return np.flatnonzero(self.mask).tolist()

    def to_dict(self) -> dict[str, Any]:
        # Feature indices are 1-based in serialized output.
        return {
            "solver": self.solver,
            "selected": [k + 1 for k in self.selected],
            "mask": [int(v) for v in self.mask],
            "objective": self.objective,
            "feasible": self.feasible,
            "proven_optimal": self.proven_optimal,
            "seed": self.seed,
            "iterations_used": self.iterations_used,
        }

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SolveResult):
            return NotImplemented
        return self.to_dict() == other.to_dict()


@dataclass(frozen=True)
class BlackHoleParams:
    population: int = 30
    max_iterations: int = 500
    seed: int = 0
    binarization_threshold: float = 0.5

    def __post_init__(self) -> None:
        if self.population < 2:
            raise ValueError(f"population must be >= 2, got {self.population}")
        if self.max_iterations < 1:
            raise ValueError(f"max_iterations must be >= 1, got {self.max_iterations}")
        if not 0.0 < self.binarization_threshold < 1.0:
            raise ValueError("binarization_threshold must lie in (0, 1)")


def _row_slack(model: SelectionModel) -> float:
    return model.theta - FEASIBILITY_EPS


def _feasible_many(model: SelectionModel, masks: np.ndarray) -> np.ndarray:
    """Feasibility of each row of a 0/1 matrix of masks."""
    if model.n_rows == 0:
        return np.ones(masks.shape[0], dtype=bool)
    lhs = masks @ model.rows.T
    return (lhs >= _row_slack(model)).all(axis=1)


def reverse_delete(model: SelectionModel, mask, order: Iterable[int] | None = None) -> np.ndarray:
    """Drop features one by one while the mask stays feasible.

    Visits selected features in ``order`` (default: descending index). The
    result is 1-minimal: no single remaining feature can be dropped.
    """
    chi = np.asarray(mask, dtype=np.int8).copy()
    if order is None:
        order = sorted(np.flatnonzero(chi).tolist(), reverse=True)
    for k in order:
        if not chi[k]:
            continue
        chi[k] = 0
        if not is_feasible(model, chi)[0]:
            chi[k] = 1
    return chi


def solve_exact(model: SelectionModel, max_features: int = 25, chunk: int = 4_000_000) -> SolveResult:
    """Enumerate masks by increasing size; the first size with a feasible mask is optimal.

    Among equally small feasible masks the lexicographically smallest mask
    vector wins, so the whole size level is scanned before returning.

    Raises
    ------
    BudgetExceededError
        If ``model.p > max_features``.
    """
    p = model.p
    if p > max_features:
        raise BudgetExceededError(
            f"exact search over {p} features exceeds the budget of {max_features}"
        )
    zeros = np.zeros(p, dtype=np.int8)
    if model.n_rows == 0:
        return SolveResult(zeros, 0, True, "exact", proven_optimal=True)
    if not is_feasible(model, np.ones(p, dtype=np.int8))[0]:
        return SolveResult(np.ones(p, dtype=np.int8), p, False, "exact")

    batch = max(1, chunk // max(1, model.n_rows))
    evaluated = 0
    for size in range(p + 1):
        combos = itertools.combinations(range(p), size)
        best: tuple[int, ...] | None = None
        while True:
            block = list(itertools.islice(combos, batch))
            if not block:
                break
            masks = np.zeros((len(block), p), dtype=np.int8)
            if size:
                masks[np.arange(len(block))[:, None], np.asarray(block)] = 1
            evaluated += len(block)
            for r in np.flatnonzero(_feasible_many(model, masks.astype(float))):
                cand = tuple(masks[r].tolist())
                if best is None or cand < best:
                    best = cand
        if best is not None:
            mask = np.asarray(best, dtype=np.int8)
            return SolveResult(mask, size, True, "exact", iterations_used=evaluated, proven_optimal=True)
    raise AssertionError("all-ones mask is feasible, enumeration must succeed")


def solve_greedy(model: SelectionModel) -> SolveResult:
    """Add the feature that most reduces the summed row deficit, then reverse-delete."""
    p = model.p
    chi = np.zeros(p, dtype=np.int8)
    if model.n_rows == 0:
        return SolveResult(chi, 0, True, "greedy")
    order: list[int] = []
    lhs = np.zeros(model.n_rows)
    steps = 0
    while True:
        deficit = model.theta - lhs
        deficit[lhs >= _row_slack(model)] = 0.0
        if not (deficit > 0).any():
            break
        scores = np.minimum(model.rows, deficit[:, None]).sum(axis=0)
        scores[chi == 1] = -1.0
        k = int(np.argmax(scores))
        if scores[k] <= 0:
            break
        chi[k] = 1
        order.append(k)
        lhs += model.rows[:, k]
        steps += 1
    feasible = is_feasible(model, chi)[0]
    if feasible:
        chi = reverse_delete(model, chi, order=reversed(order))
    return SolveResult(chi, int(chi.sum()), feasible, "greedy", iterations_used=steps)


def solve_blackhole(model: SelectionModel, params: BlackHoleParams | None = None) -> SolveResult:
    """Binary black-hole search with a violation penalty.

    Stars live in ``[0, 1]^p`` and read as masks through a threshold. Fitness
    is ``sum(mask) + (p + 1) * violated_rows`` so any feasible mask beats any
    infeasible one. Each iteration pulls every star towards the black hole
    (the best star) by a per-dimension uniform fraction; stars that land
    inside the event horizon ``f_BH / sum(f)`` are re-drawn at random.
    """
    params = params or BlackHoleParams()
    p = model.p
    if model.n_rows == 0:
        return SolveResult(np.zeros(p, dtype=np.int8), 0, True, "blackhole", seed=params.seed)

    rng = np.random.default_rng(params.seed)
    thr = params.binarization_threshold
    penalty = p + 1
    slack = _row_slack(model)
    rows_t = model.rows.T

    def fitness(pos: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        masks = (pos > thr).astype(float)
        viol = ((masks @ rows_t) < slack).sum(axis=1)
        return masks.sum(axis=1) + penalty * viol, masks

    stars = rng.random((params.population, p))
    fit, masks = fitness(stars)
    bh = int(np.argmin(fit))
    best_fit, best_mask = float(fit[bh]), masks[bh].copy()

    used = 0
    for it in range(1, params.max_iterations + 1):
        used = it
        pull = rng.random((params.population, p))
        moved = stars + pull * (stars[bh] - stars)
        moved[bh] = stars[bh]
        stars = moved
        fit, masks = fitness(stars)
        cand = int(np.argmin(fit))
        if fit[cand] < fit[bh]:
            bh = cand
        if fit[bh] < best_fit:
            best_fit, best_mask = float(fit[bh]), masks[bh].copy()
        if best_fit == 0:
            break

        total = float(fit.sum())
        radius = float(fit[bh]) / total if total > 0 else 0.0
        dist = np.linalg.norm(stars - stars[bh], axis=1)
        swallowed = np.flatnonzero(dist < radius)
        swallowed = swallowed[swallowed != bh]
        if swallowed.size:
            stars[swallowed] = rng.random((swallowed.size, p))
            fit_new, masks_new = fitness(stars[swallowed])
            fit[swallowed] = fit_new
            masks[swallowed] = masks_new
            cand = int(np.argmin(fit))
            if fit[cand] < fit[bh]:
                bh = cand
            if fit[bh] < best_fit:
                best_fit, best_mask = float(fit[bh]), masks[bh].copy()

    chi = best_mask.astype(np.int8)
    feasible = is_feasible(model, chi)[0]
    if feasible:
        chi = reverse_delete(model, chi)
    return SolveResult(chi, int(chi.sum()), feasible, "blackhole", seed=params.seed, iterations_used=used)


def solve(
    model: SelectionModel,
    solver: str = "exact",
    params: BlackHoleParams | None = None,
    max_features: int = 25,
) -> SolveResult:
    if solver == "exact":
        return solve_exact(model, max_features=max_features)
    if solver == "greedy":
        return solve_greedy(model)
    if solver == "blackhole":
        return solve_blackhole(model, params)
    raise ValueError(f"unknown solver {solver!r}; choose from {SOLVERS}")


@dataclass(frozen=True, eq=False)
class SelectionProblem:
    """Everything needed to build a model for any ``delta`` on one table."""

    decomp: DistanceDecomposition
    relation: FuzzyRelationMatrix
    pairs: tuple[tuple[int, int], ...]
    sigma: float
    mode: ModelMode
    feature_names: tuple[str, ...]

    def model(self, delta: float) -> SelectionModel:
        return build_model(
            self.decomp, self.relation, self.pairs, delta, self.sigma, self.mode, self.feature_names
        )


def prepare_problem(
    his: HybridInformationSystem, sigma: float, mode: ModelMode | str = ModelMode.NORMAL
) -> SelectionProblem:
    """Distances, the mode's filtering relation and the cross-class pairs of ``his``."""
    mode = ModelMode(mode)
    stats = compute_stats(his)
    pairs = tuple(cross_class_pairs(partition_by_decision(his)))
    if mode is ModelMode.NORMAL:
        decomp = decompose(his, stats, pairs)
        relation = gaussian_relation(decomp.hd, sigma)
    else:
        decomp = decompose(his, stats)
        relation = upper_relation(gaussian_relation(decomp.hd, sigma))
    return SelectionProblem(decomp, relation, pairs, float(sigma), mode, tuple(his.names))


@dataclass(frozen=True, eq=False)
class SweepPoint:
    delta: float
    model: SelectionModel
    result: SolveResult

    def to_dict(self) -> dict[str, Any]:
        return {
            "delta": self.delta,
            "theta": self.model.theta if math.isfinite(self.model.theta) else None,
            "rows": self.model.n_rows,
            "degenerate": self.model.degenerate,
            **self.result.to_dict(),
        }


def delta_sweep(
    problem: SelectionProblem,
    grid: Sequence[float] = DEFAULT_DELTA_GRID,
    solver: str = "exact",
    params: BlackHoleParams | None = None,
    max_features: int = 25,
) -> list[SweepPoint]:
    """Build and solve one model per ``delta`` in ``grid``, in grid order."""
    out = []
    for delta in grid:
        if not 0.0 <= delta < 1.0:
            raise ValueError(f"sweep values must lie in [0, 1), got {delta}")
        model = problem.model(delta)
        out.append(SweepPoint(float(delta), model, solve(model, solver, params, max_features)))
    return out


def best_sweep_point(points: Sequence[SweepPoint]) -> SweepPoint | None:
    """Smallest feasible non-empty selection; ties go to the larger ``delta``.

    Empty selections (e.g. at ``delta = 0`` where no pair is constrained) are
    skipped since they cannot be used downstream.
    """
    usable = [pt for pt in points if pt.result.feasible and pt.result.objective > 0]
    if not usable:
        return None
    return min(usable, key=lambda pt: (pt.result.objective, -pt.delta))
