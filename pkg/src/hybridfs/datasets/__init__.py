"""Bundled example tables.

``flu``
    Seven patients described by a linguistic illness rate, a boolean pain
    flag, a real fever temperature and a set of syndromes; three classes.
``zoo_synthetic``
    A zoo-sized synthetic table (101 animals, 15 boolean traits plus a leg
    count, 7 classes) produced by :func:`make_zoo_like` with seed 0.
"""

from __future__ import annotations

import csv
import io
from importlib import resources

import numpy as np

from ..data import Attribute, AttributeKind, HybridInformationSystem, Schema, load_dataset, parse_schema

__all__ = ["load_flu", "load_zoo_synthetic", "make_zoo_like", "data_path"]


def data_path(name: str):
    """Path-like handle to a bundled file, e.g. ``data_path("flu.csv")``."""
    return resources.files(__name__).joinpath(name)


def _load(stem: str) -> HybridInformationSystem:
    schema = parse_schema(data_path(f"{stem}_schema.json").read_text(encoding="utf-8"))
    return load_dataset(data_path(f"{stem}.csv").read_text(encoding="utf-8"), schema)


def load_flu() -> HybridInformationSystem:
    return _load("flu")


def load_zoo_synthetic() -> HybridInformationSystem:
    return _load("zoo_synthetic")


# Class sizes of the UCI zoo data.
_ZOO_CLASS_SIZES = (41, 20, 5, 13, 4, 8, 10)
_ZOO_TRAITS = (
    "hair", "feathers", "eggs", "milk", "airborne", "aquatic", "predator", "toothed",
    "backbone", "breathes", "venomous", "fins", "tail", "domestic", "catsize",
)


def make_zoo_like(seed: int = 0, flip: float = 0.03) -> tuple[Schema, str]:
    """Generate the synthetic zoo table as ``(schema, csv_text)``.

    Each class has a boolean prototype; five traits are fully determined by
    the class, seven follow it loosely and three are noise. Class-determined
    traits are flipped with probability ``flip``. The leg count is drawn
    from a small class-specific set.
    """
    rng = np.random.default_rng(seed)
    n_classes = len(_ZOO_CLASS_SIZES)
    # Seven distinct codes on the first three traits make classes separable.
    codes = np.array([[(c >> b) & 1 for b in range(3)] for c in range(1, n_classes + 1)])
    prototypes = np.column_stack([codes, rng.integers(0, 2, size=(n_classes, 2))])
    loose = rng.integers(0, 2, size=(n_classes, 7))
    legs_by_class = [(4,), (2,), (0, 4), (0,), (4,), (6,), (0, 2, 4, 8)]

    header = [*_ZOO_TRAITS, "legs", "type"]
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    for cls, size in enumerate(_ZOO_CLASS_SIZES):
        for _ in range(size):
            strict = prototypes[cls] ^ (rng.random(5) < flip)
            fuzzy = np.where(rng.random(7) < 0.85, loose[cls], 1 - loose[cls])
            noise = rng.integers(0, 2, size=3)
            traits = np.concatenate([strict, fuzzy, noise])
            legs = rng.choice(legs_by_class[cls])
            writer.writerow(
                ["Yes" if t else "No" for t in traits] + [f"{float(legs)}", f"class{cls + 1}"]
            )
    attributes = tuple(Attribute(t, AttributeKind.BOOLEAN) for t in _ZOO_TRAITS) + (
        Attribute("legs", AttributeKind.REAL),
    )
    return Schema(attributes, "type"), out.getvalue()
