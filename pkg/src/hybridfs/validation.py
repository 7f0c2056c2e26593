"""Input checks shared by the estimators and the command line."""

from __future__ import annotations

import math
from collections.abc import Sequence
from typing import Any

import numpy as np

from .data import Attribute, AttributeKind, DataError, HybridInformationSystem, Schema

__all__ = [
    "check_sigma",
    "check_delta",
    "check_mask",
    "resolve_attributes",
    "as_records",
    "as_hybrid_table",
]


def check_sigma(sigma: float | None = None, sigma2: float | None = None, default: float = 0.2) -> float:
    """Kernel width from either ``sigma`` or its square; ``default`` if neither is given."""
    if sigma is not None and sigma2 is not None:
        raise ValueError("give sigma or sigma2, not both")
    if sigma2 is not None:
        if not (isinstance(sigma2, (int, float)) and sigma2 > 0 and math.isfinite(sigma2)):
            raise ValueError(f"sigma2 must be a positive number, got {sigma2!r}")
        return math.sqrt(sigma2)
    if sigma is None:
        sigma = default
    if not (isinstance(sigma, (int, float)) and sigma > 0 and math.isfinite(sigma)):
        raise ValueError(f"sigma must be a positive number, got {sigma!r}")
    return float(sigma)


def check_delta(delta: float) -> float:
    if not (isinstance(delta, (int, float)) and 0.0 <= delta <= 1.0):
        raise ValueError(f"delta must lie in [0, 1], got {delta!r}")
    return float(delta)


def check_mask(mask: Any, p: int, allow_empty: bool = False) -> np.ndarray:
    """Return ``mask`` as a 0/1 ``int8`` vector of length ``p``."""
    chi = np.asarray(mask)
    if chi.dtype == bool:
        chi = chi.astype(np.int8)
    if chi.shape != (p,):
        raise ValueError(f"mask must have length {p}, got shape {chi.shape}")
    if not np.isin(chi, (0, 1)).all():
        raise ValueError("mask entries must be 0 or 1")
    if not allow_empty and not chi.any():
        raise ValueError("mask selects no features")
    return chi.astype(np.int8)


def resolve_attributes(
    attributes: Schema | Sequence[Attribute] | None, n_features: int, names: Sequence[str] | None = None
) -> tuple[Attribute, ...]:
    """Attribute descriptors for ``n_features`` columns; all real-valued when not given."""
    if attributes is None:
        names = list(names) if names is not None else [f"x{k}" for k in range(n_features)]
        return tuple(Attribute(str(name), AttributeKind.REAL) for name in names)
    if isinstance(attributes, Schema):
        attributes = attributes.attributes
    attributes = tuple(attributes)
    if not all(isinstance(a, Attribute) for a in attributes):
        raise TypeError("attributes must be Attribute instances or a Schema")
    if len(attributes) != n_features:
        raise ValueError(f"X has {n_features} features but {len(attributes)} attributes were given")
    return attributes


def _rows(X: Any) -> tuple[list[list[Any]], list[str] | None]:
    columns = getattr(X, "columns", None)
    if columns is not None and hasattr(X, "itertuples"):
        rows = [list(r) for r in X.itertuples(index=False, name=None)]
        return rows, [str(c) for c in columns]
    arr = np.asarray(X, dtype=object)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-D array, got {arr.ndim}-D input")
    return arr.tolist(), None


def as_records(X: Any, attributes: Sequence[Attribute]) -> list[tuple[Any, ...]]:
    """Coerce a 2-D array-like into typed records for ``attributes``."""
    rows, _ = _rows(X)
    out = []
    for i, row in enumerate(rows):
        if len(row) != len(attributes):
            raise DataError(f"expected {len(attributes)} values, got {len(row)}", row=i)
        rec = []
        for attr, value in zip(attributes, row):
            try:
                rec.append(attr.coerce(value))
            except ValueError as exc:
                raise DataError(str(exc), row=i, column=attr.name) from None
        out.append(tuple(rec))
    return out


def as_hybrid_table(
    X: Any,
    y: Any = None,
    attributes: Schema | Sequence[Attribute] | None = None,
) -> HybridInformationSystem:
    """Build a :class:`HybridInformationSystem` from estimator-style ``X, y``.

    ``X`` may already be a table, in which case ``y`` must be omitted.
    """
    if isinstance(X, HybridInformationSystem):
        if y is not None:
            raise ValueError("y must be None when X is a HybridInformationSystem")
        return X
    if y is None:
        raise ValueError("y is required")
    rows, names = _rows(X)
    if not rows:
        raise ValueError("X has no rows")
    attrs = resolve_attributes(attributes, len(rows[0]), names)
    labels = [str(v) for v in np.asarray(y, dtype=object).ravel()]
    if len(labels) != len(rows):
        raise ValueError(f"X has {len(rows)} rows but y has {len(labels)} labels")
    decision = attributes.decision if isinstance(attributes, Schema) else "decision"
    return HybridInformationSystem(attrs, as_records(rows, attrs), labels, decision)
