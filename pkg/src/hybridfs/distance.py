"""Per-attribute distances for mixed-kind data and their Euclidean aggregation.

Every attribute contributes a dimensionless distance:

* boolean / categorical: 0 on a match, 1 otherwise;
* real: ``|u - v| / (4 * sigma)`` with ``sigma`` the column's sample std;
* set-valued: ``1 - |u & v| / s`` with ``s`` the largest observed set size;
* linguistic: the real-valued rule applied to term centroids.

The hybrid distance of two objects is the root of the summed squares.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from typing import Any

import numpy as np

from .data import AttributeKind, HybridInformationSystem
from .linguistic import TermTable

__all__ = [
    "AttributeStats",
    "DistanceDecomposition",
    "compute_stats",
    "bd",
    "rd",
    "sd",
    "ld",
    "pair_sq",
    "decompose",
    "hd_matrix",
    "distances_between",
]


@dataclass(frozen=True)
class AttributeStats:
    """Scale statistics per attribute (``None`` where a kind needs none)."""

    sigma: tuple[float | None, ...]
    max_cardinality: tuple[int | None, ...]

    def to_dict(self, names: Sequence[str]) -> list[dict[str, Any]]:
        return [
            {"name": name, "sigma": s, "max_cardinality": c}
            for name, s, c in zip(names, self.sigma, self.max_cardinality)
        ]


def _numeric_column(his: HybridInformationSystem, k: int) -> np.ndarray:
    attr = his.attributes[k]
    col = his.column(k)
    if attr.kind is AttributeKind.LINGUISTIC:
        return np.array([attr.terms.centroid_of(v) for v in col], dtype=float)
    return np.asarray(col, dtype=float)


def compute_stats(his: HybridInformationSystem) -> AttributeStats:
    """Sample standard deviation (``ddof=1``) for real and linguistic columns,
    largest set size for set-valued ones."""
    sigma: list[float | None] = []
    card: list[int | None] = []
    for k, attr in enumerate(his.attributes):
        if attr.kind in (AttributeKind.REAL, AttributeKind.LINGUISTIC):
            sigma.append(float(np.std(_numeric_column(his, k), ddof=1)))
            card.append(None)
        elif attr.kind is AttributeKind.SET_VALUED:
            sigma.append(None)
            card.append(max(len(v) for v in his.column(k)))
        else:
            sigma.append(None)
            card.append(None)
    return AttributeStats(tuple(sigma), tuple(card))


def bd(u: Any, v: Any) -> float:
    return 0.0 if u == v else 1.0


def rd(u: float, v: float, sigma: float) -> float:
    if sigma < 0:
        raise ValueError(f"sigma must be non-negative, got {sigma}")
    if sigma == 0:
        # Within one table a zero spread means every value is equal.
        if u != v:
            raise ValueError("sigma is 0 but the values differ; sigma must come from this column")
        return 0.0
    return abs(u - v) / (4.0 * sigma)


def sd(u: frozenset, v: frozenset, s: int) -> float:
    if s < 1:
        raise ValueError(f"max cardinality must be >= 1, got {s}")
    return 1.0 - len(u & v) / s


def ld(u: str, v: str, table: TermTable, sigma: float) -> float:
    return rd(table.centroid_of(u), table.centroid_of(v), sigma)


def pair_sq(
    attributes: Sequence,
    stats: AttributeStats,
    left: Sequence[Sequence[Any]],
    right: Sequence[Sequence[Any]],
    li: np.ndarray,
    rj: np.ndarray,
    features: Sequence[int] | None = None,
) -> np.ndarray:
    """Squared per-attribute distances for the record pairs ``(left[li], right[rj])``.

    Returns an array of shape ``(len(li), len(features))``. ``left`` and
    ``right`` may be the same record list. Scale statistics always come from
    ``stats``; an attribute whose ``sigma`` is 0 contributes nothing.
    """
    li = np.asarray(li, dtype=np.intp)
    rj = np.asarray(rj, dtype=np.intp)
    ks = range(len(attributes)) if features is None else [int(k) for k in features]
    out = np.zeros((li.size, len(ks)))
    for col, k in enumerate(ks):
        attr = attributes[k]
        lv = [rec[k] for rec in left]
        rv = lv if right is left else [rec[k] for rec in right]
        kind = attr.kind
        if kind in (AttributeKind.REAL, AttributeKind.LINGUISTIC):
            if kind is AttributeKind.LINGUISTIC:
                a = np.array([attr.terms.centroid_of(v) for v in lv])
                b = a if rv is lv else np.array([attr.terms.centroid_of(v) for v in rv])
            else:
                a = np.asarray(lv, dtype=float)
                b = a if rv is lv else np.asarray(rv, dtype=float)
            sigma = stats.sigma[k]
            if sigma is None or sigma < 0:
                raise ValueError(f"attribute {attr.name!r} has no valid sigma")
            d = np.abs(a[li] - b[rj]) / (4.0 * sigma) if sigma > 0 else np.zeros(li.size)
        elif kind is AttributeKind.SET_VALUED:
            s = stats.max_cardinality[k]
            if s is None or s < 1:
                raise ValueError(f"attribute {attr.name!r} has no valid max cardinality")
            elements = sorted(frozenset().union(*lv, *rv))
            pos = {e: i for i, e in enumerate(elements)}
            a = np.zeros((len(lv), len(elements)), dtype=bool)
            for i, val in enumerate(lv):
                a[i, [pos[e] for e in val]] = True
            if rv is lv:
                b = a
            else:
                b = np.zeros((len(rv), len(elements)), dtype=bool)
                for i, val in enumerate(rv):
                    b[i, [pos[e] for e in val]] = True
            inter = (a[li] & b[rj]).sum(axis=1)
            d = 1.0 - inter / s
        else:
            codes: dict[Any, int] = {}
            a = np.array([codes.setdefault(v, len(codes)) for v in lv])
            b = a if rv is lv else np.array([codes.setdefault(v, len(codes)) for v in rv])
            d = (a[li] != b[rj]).astype(float)
        out[:, col] = d * d
    return out


def _accumulate(sq: np.ndarray) -> np.ndarray:
    # Fixed left-to-right order over attributes keeps results independent of batching.
    total = np.zeros(sq.shape[0])
    for k in range(sq.shape[1]):
        total += sq[:, k]
    return np.sqrt(total)


@dataclass(frozen=True, eq=False)
class DistanceDecomposition:
    """Squared per-attribute distances for a list of object pairs.

    ``sq[p, k]`` belongs to pair ``pairs[p]`` and attribute ``k``. ``hd`` is
    the n x n hybrid distance matrix: zero diagonal, symmetric, and NaN at
    off-diagonal positions whose pair was not decomposed.
    """

    pairs: np.ndarray
    sq: np.ndarray
    hd: np.ndarray

    def __post_init__(self) -> None:
        lookup = {(int(i), int(j)): p for p, (i, j) in enumerate(self.pairs)}
        object.__setattr__(self, "_lookup", lookup)

    @property
    def n(self) -> int:
        return self.hd.shape[0]

    @property
    def m(self) -> int:
        return self.sq.shape[1]

    def index_of(self, i: int, j: int) -> int:
        i, j = (i, j) if i < j else (j, i)
        return self._lookup[(int(i), int(j))]

    def row(self, i: int, j: int) -> np.ndarray:
        return self.sq[self.index_of(i, j)]

    def rows_for(self, pairs: Sequence[tuple[int, int]]) -> np.ndarray:
        idx = [self.index_of(i, j) for i, j in pairs]
        return self.sq[idx].reshape(len(idx), self.m)


def decompose(
    his: HybridInformationSystem,
    stats: AttributeStats,
    pairs: Sequence[tuple[int, int]] | np.ndarray | None = None,
) -> DistanceDecomposition:
    """Per-attribute squared distances for ``pairs`` (default: every ``i < j`` pair)."""
    n = his.n
    if pairs is None:
        iu, ju = np.triu_indices(n, k=1)
        arr = np.column_stack([iu, ju]).astype(np.intp)
    else:
        arr = np.asarray(pairs, dtype=np.intp).reshape(-1, 2)
        arr = np.sort(arr, axis=1)
        if arr.size and ((arr[:, 0] == arr[:, 1]).any() or arr.min() < 0 or arr.max() >= n):
            raise ValueError("pairs must index distinct objects within the table")
    sq = pair_sq(his.attributes, stats, his.records, his.records, arr[:, 0], arr[:, 1])
    dist = _accumulate(sq)
    hd = np.full((n, n), np.nan)
    np.fill_diagonal(hd, 0.0)
    hd[arr[:, 0], arr[:, 1]] = dist
    hd[arr[:, 1], arr[:, 0]] = dist
    return DistanceDecomposition(arr, sq, hd)


def hd_matrix(his: HybridInformationSystem, stats: AttributeStats | None = None) -> np.ndarray:
    """Full symmetric hybrid distance matrix with zero diagonal."""
    if stats is None:
        stats = compute_stats(his)
    return decompose(his, stats).hd


def distances_between(
    left: HybridInformationSystem | Sequence[Sequence[Any]],
    right: HybridInformationSystem,
    stats: AttributeStats,
    features: Sequence[int] | None = None,
) -> np.ndarray:
    """Hybrid distances from every object of ``left`` to every object of ``right``.

    ``left`` is a table with the same attributes as ``right`` or a plain
    sequence of already-typed records. ``stats`` is typically computed on
    ``right`` (the training side) only.
    """
    if isinstance(left, HybridInformationSystem):
        if left.attributes != right.attributes:
            raise ValueError("both tables must share the same attributes")
        left = left.records
    n_left = len(left)
    li, rj = np.meshgrid(np.arange(n_left), np.arange(right.n), indexing="ij")
    sq = pair_sq(right.attributes, stats, left, right.records, li.ravel(), rj.ravel(), features)
    return _accumulate(sq).reshape(n_left, right.n)
