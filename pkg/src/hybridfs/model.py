"""Binary feature-selection model built from cross-class pair similarities.

A pair of objects from different decision classes whose similarity is at
most ``delta`` must stay that dissimilar after selection:

    exp(-sum_k chi_k d_k^2 / (2 sigma^2)) <= delta
    <=>  sum_k chi_k d_k^2 >= -2 sigma^2 ln(delta) = theta

and the objective minimizes the number of selected features.
"""

from __future__ import annotations

import enum
import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .distance import DistanceDecomposition

__all__ = [
    "FEASIBILITY_EPS",
    "ModelMode",
    "SelectionModel",
    "split_g1_g2",
    "threshold",
    "build_model",
    "is_feasible",
    "violated_rows",
    "objective",
    "prune_dominated_rows",
]

FEASIBILITY_EPS = 1e-9


class ModelMode(str, enum.Enum):
    NORMAL = "normal"
    OPTIMISTIC = "optimistic"


def _check_delta(delta: float) -> float:
    delta = float(delta)
    if not 0.0 <= delta <= 1.0:
        raise ValueError(f"delta must lie in [0, 1], got {delta}")
    return delta


def split_g1_g2(
    R, pairs: Sequence[tuple[int, int]], delta: float
) -> tuple[list[tuple[int, int]], list[tuple[int, int]]]:
    """Split cross-class pairs into ``R <= delta`` (constrained) and ``R > delta`` (ignored)."""
    delta = _check_delta(delta)
    M = np.asarray(R, dtype=float)
    g1, g2 = [], []
    for i, j in pairs:
        value = M[i, j]
        if np.isnan(value):
            raise ValueError(f"relation value for pair ({i}, {j}) is undefined")
        (g1 if value <= delta else g2).append((int(i), int(j)))
    return g1, g2


def threshold(sigma: float, delta: float) -> float:
    """``-2 sigma^2 ln(delta)``; ``inf`` at ``delta == 0``."""
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    delta = _check_delta(delta)
    if delta == 0.0:
        return math.inf
    return -2.0 * sigma * sigma * math.log(delta)


@dataclass(frozen=True, eq=False)
class SelectionModel:
    """Covering-style constraints ``rows @ chi >= theta`` over binary ``chi``.

    ``pairs[r]`` is the (0-based) object pair behind ``rows[r]``. The model is
    ``degenerate`` when ``delta`` is 0 or 1.
    """

    rows: np.ndarray
    theta: float
    pairs: tuple[tuple[int, int], ...]
    delta: float
    sigma: float
    mode: ModelMode = ModelMode.NORMAL
    feature_names: tuple[str, ...] | None = None
    degenerate: bool = field(init=False)

    def __post_init__(self) -> None:
        rows = np.array(self.rows, dtype=float)
        if rows.ndim != 2:
            raise ValueError("rows must be a 2-D array")
        if len(self.pairs) != rows.shape[0]:
            raise ValueError("one pair per row is required")
        if (rows < 0).any():
            raise ValueError("row coefficients must be non-negative")
        rows.setflags(write=False)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "pairs", tuple((int(i), int(j)) for i, j in self.pairs))
        object.__setattr__(self, "mode", ModelMode(self.mode))
        object.__setattr__(self, "degenerate", self.delta in (0.0, 1.0))

    @property
    def p(self) -> int:
        return self.rows.shape[1]

    @property
    def n_rows(self) -> int:
        return self.rows.shape[0]

    def to_dict(self) -> dict[str, Any]:
        return {
            "p": self.p,
            "theta": self.theta if math.isfinite(self.theta) else None,
            "delta": self.delta,
            "sigma": self.sigma,
            "mode": self.mode.value,
            "pairs": [list(pair) for pair in self.pairs],
            "rows": self.rows.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> SelectionModel:
        p = int(data["p"])
        rows = np.asarray(data["rows"], dtype=float).reshape(-1, p)
        theta = math.inf if data["theta"] is None else float(data["theta"])
        return cls(
            rows=rows,
            theta=theta,
            pairs=tuple(tuple(pair) for pair in data["pairs"]),
            delta=float(data["delta"]),
            sigma=float(data["sigma"]),
            mode=ModelMode(data["mode"]),
        )


def build_model(
    decomp: DistanceDecomposition,
    R,
    pairs: Sequence[tuple[int, int]],
    delta: float,
    sigma: float,
    mode: ModelMode | str = ModelMode.NORMAL,
    feature_names: Sequence[str] | None = None,
) -> SelectionModel:
    """Assemble the model from cross-class ``pairs`` filtered by relation ``R``.

    ``R`` is the kernel relation in normal mode and its upper approximation in
    optimistic mode; either way the rows are the raw squared distances of
    ``decomp``.
    """
    theta = threshold(sigma, delta)
    g1, _ = split_g1_g2(R, pairs, delta)
    rows = decomp.rows_for(g1) if g1 else np.zeros((0, decomp.m))
    return SelectionModel(
        rows=rows,
        theta=theta,
        pairs=tuple(g1),
        delta=float(delta),
        sigma=float(sigma),
        mode=ModelMode(mode),
        feature_names=None if feature_names is None else tuple(feature_names),
    )


def _mask_array(model: SelectionModel, mask) -> np.ndarray:
    chi = np.asarray(mask)
    if chi.shape != (model.p,):
        raise ValueError(f"mask must have length {model.p}, got shape {chi.shape}")
    if not np.isin(chi, (0, 1)).all():
        raise ValueError("mask entries must be 0 or 1")
    return chi.astype(float)


def violated_rows(model: SelectionModel, mask) -> list[int]:
    chi = _mask_array(model, mask)
    if model.n_rows == 0:
        return []
    lhs = model.rows @ chi
    return np.flatnonzero(lhs < model.theta - FEASIBILITY_EPS).tolist()


def is_feasible(model: SelectionModel, mask) -> tuple[bool, list[int]]:
    """Feasibility of ``mask`` and the indices of any violated rows."""
    bad = violated_rows(model, mask)
    return not bad, bad


def objective(mask) -> int:
    return int(np.asarray(mask).sum())


def prune_dominated_rows(model: SelectionModel) -> SelectionModel:
    """Drop rows implied by another row.

    Every row shares ``theta`` and coefficients are non-negative, so a row
    that is elementwise >= some other row is satisfied whenever that row is.
    Of identical rows the first is kept.
    """
    rows = model.rows
    order = np.arange(model.n_rows)
    keep = []
    for r in range(model.n_rows):
        below = (rows[r] >= rows).all(axis=1)
        strict = (rows[r] > rows).any(axis=1)
        below[r] = False
        if not (below & (strict | (order < r))).any():
            keep.append(r)
    return SelectionModel(
        rows=rows[keep],
        theta=model.theta,
        pairs=tuple(model.pairs[r] for r in keep),
        delta=model.delta,
        sigma=model.sigma,
        mode=model.mode,
        feature_names=model.feature_names,
    )
