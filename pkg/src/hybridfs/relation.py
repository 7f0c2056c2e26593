"""Gaussian-kernel fuzzy relations and fuzzy-rough approximations over them.

Product t-norm ``T_p(a, b) = a * b`` and its dual conorm
``S_p(a, b) = a + b - a * b`` are used throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .data import DecisionPartition

__all__ = [
    "FuzzyRelationMatrix",
    "DecisionApproximation",
    "TransitivityCheck",
    "t_product",
    "s_product",
    "gaussian_relation",
    "check_tp_transitivity",
    "upper_relation",
    "lower_relation",
    "class_approximations",
    "dependency",
]

_KINDS = ("kernel", "upper", "lower", "given")


def t_product(a, b):
    return np.multiply(a, b)


def s_product(a, b):
    return np.add(a, b) - np.multiply(a, b)


@dataclass(frozen=True, eq=False)
class FuzzyRelationMatrix:
    """An n x n relation with values in [0, 1] and a note on how it was built.

    ``kind`` is one of ``"kernel"``, ``"upper"``, ``"lower"`` or ``"given"``
    (supplied from outside, e.g. a printed matrix).
    """

    values: np.ndarray
    sigma: float | None = None
    kind: str = "given"

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=float)
        if values.ndim != 2 or values.shape[0] != values.shape[1]:
            raise ValueError(f"relation must be a square matrix, got shape {values.shape}")
        if self.kind not in _KINDS:
            raise ValueError(f"kind must be one of {_KINDS}, got {self.kind!r}")
        finite = values[~np.isnan(values)]
        if finite.size and (finite.min() < 0.0 or finite.max() > 1.0):
            raise ValueError("relation values must lie in [0, 1]")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.values if dtype is None else self.values.astype(dtype)

    def __getitem__(self, key):
        return self.values[key]

    def is_reflexive(self, tol: float = 0.0) -> bool:
        return bool(np.all(np.abs(np.diag(self.values) - 1.0) <= tol))

    def is_symmetric(self, tol: float = 0.0) -> bool:
        return bool(np.all(np.abs(self.values - self.values.T) <= tol))


def _as_matrix(R) -> np.ndarray:
    arr = np.asarray(R, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"relation must be a square matrix, got shape {arr.shape}")
    return arr


def gaussian_relation(hd, sigma: float) -> FuzzyRelationMatrix:
    """``exp(-hd**2 / (2 sigma**2))`` elementwise.

    NaN entries of ``hd`` (pairs that were never decomposed) stay NaN.
    """
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    dist = _as_matrix(hd)
    values = np.exp(-(dist * dist) / (2.0 * sigma * sigma))
    return FuzzyRelationMatrix(values, sigma=float(sigma), kind="kernel")


class TransitivityCheck(NamedTuple):
    passed: bool
    worst_violation: float
    triple: tuple[int, int, int] | None


def check_tp_transitivity(R, tol: float = 1e-12) -> TransitivityCheck:
    """Check ``R(x, y) * R(y, z) <= R(x, z) + tol`` over all triples.

    ``worst_violation`` is the largest ``R(x, y) R(y, z) - R(x, z)`` found
    (may be negative when every triple passes with room); ``triple`` is the
    0-based ``(x, y, z)`` where it occurs, or ``None`` when the check passes.
    """
    M = _as_matrix(R)
    n = M.shape[0]
    worst, where = -np.inf, None
    for x in range(n):
        # gap[y, z] = R(x, y) R(y, z) - R(x, z)
        gap = M[x][:, None] * M - M[x][None, :]
        flat = int(np.argmax(gap))
        if gap.flat[flat] > worst:
            worst = float(gap.flat[flat])
            where = (x, *divmod(flat, n))
    passed = worst <= tol
    return TransitivityCheck(passed, worst, None if passed else where)


def upper_relation(R) -> FuzzyRelationMatrix:
    """One sup-product composition: ``max_y R(i, y) * R(y, j)``."""
    M = _as_matrix(R)
    out = np.empty_like(M)
    for i in range(M.shape[0]):
        out[i] = (M[i][:, None] * M).max(axis=0)
    return FuzzyRelationMatrix(out, getattr(R, "sigma", None), "upper")


def lower_relation(R) -> FuzzyRelationMatrix:
    """``min_y S_p(1 - R(i, y), R(y, j))``; bounded above by ``R`` but not an equivalence."""
    M = _as_matrix(R)
    out = np.empty_like(M)
    for i in range(M.shape[0]):
        out[i] = s_product((1.0 - M[i])[:, None], M).min(axis=0)
    return FuzzyRelationMatrix(out, getattr(R, "sigma", None), "lower")


@dataclass(frozen=True, eq=False)
class DecisionApproximation:
    """``lower[x, j]`` and ``upper[x, j]`` memberships of object x in class j."""

    lower: np.ndarray
    upper: np.ndarray
    labels: tuple[str, ...]

    def positive_region(self) -> np.ndarray:
        return self.lower.max(axis=1)


def class_approximations(R, partition: DecisionPartition) -> DecisionApproximation:
    """Lower and upper approximations of each crisp decision class.

    The lower membership of x in class j is the smallest dissimilarity
    ``1 - R(x, y)`` to any object y outside the class (1 if the class is the
    whole universe); the upper membership is the largest similarity to a
    class member.
    """
    M = _as_matrix(R)
    n = M.shape[0]
    if n != partition.n:
        raise ValueError(f"relation has {n} objects, partition has {partition.n}")
    lower = np.empty((n, partition.r))
    upper = np.empty((n, partition.r))
    for j, members in enumerate(partition.classes):
        inside = np.zeros(n, dtype=bool)
        inside[list(members)] = True
        upper[:, j] = M[:, inside].max(axis=1)
        if inside.all():
            lower[:, j] = 1.0
        else:
            lower[:, j] = (1.0 - M[:, ~inside]).min(axis=1)
    return DecisionApproximation(lower, upper, partition.labels)


def dependency(approx: DecisionApproximation) -> float:
    """Sigma-count of the positive region divided by the number of objects."""
    pos = approx.positive_region()
    return float(pos.sum() / pos.size)
