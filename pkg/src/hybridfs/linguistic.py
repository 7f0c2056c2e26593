"""Trapezoidal fuzzy numbers and centroid defuzzification of linguistic terms."""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass

__all__ = [
    "TrapezoidalFuzzyNumber",
    "TermTable",
    "membership",
    "centroid",
    "defuzzify_column",
]


@dataclass(frozen=True)
class TrapezoidalFuzzyNumber:
    """Fuzzy number ``(a, b, c, d)`` with core ``[b, c]`` and support ``[a, d]``.

    Raises
    ------
    ValueError
        If the corners are not ordered ``a <= b <= c <= d``.
    """

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self) -> None:
        for name in ("a", "b", "c", "d"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if not self.a <= self.b:
            raise ValueError(f"trapezoid requires a <= b, got a={self.a}, b={self.b}")
        if not self.b <= self.c:
            raise ValueError(f"trapezoid requires b <= c, got b={self.b}, c={self.c}")
        if not self.c <= self.d:
            raise ValueError(f"trapezoid requires c <= d, got c={self.c}, d={self.d}")

    @property
    def is_triangular(self) -> bool:
        return self.b == self.c

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.a, self.b, self.c, self.d)

    def __call__(self, t: float) -> float:
        return membership(self, t)


def membership(tfn: TrapezoidalFuzzyNumber, t: float) -> float:
    """Membership degree of ``t``: rises on ``[a, b]``, 1 on ``[b, c]``, falls on ``[c, d]``.

    The plateau is closed, so a vertical flank (``a == b`` or ``c == d``)
    assigns 1 to its boundary point.
    """
    a, b, c, d = tfn.as_tuple()
    if b <= t <= c:
        return 1.0
    if a < t < b:
        return (t - a) / (b - a)
    if c < t < d:
        return (d - t) / (d - c)
    return 0.0


def centroid(tfn: TrapezoidalFuzzyNumber) -> float:
    """Crisp representative ``(3a + b + 3c + 2d) / 9``.

    This closed form is used as-is; it is not the area centroid of the
    membership function (for ``(0, 1, 1, 3)`` it gives 10/9, not 4/3).
    """
    a, b, c, d = tfn.as_tuple()
    return (3.0 * a + b + 3.0 * c + 2.0 * d) / 9.0


class TermTable(Mapping[str, TrapezoidalFuzzyNumber]):
    """Ordered mapping of linguistic labels to trapezoids with cached centroids."""

    def __init__(
        self,
        terms: Mapping[str, TrapezoidalFuzzyNumber | Iterable[float]] | None = None,
    ) -> None:
        self._terms: dict[str, TrapezoidalFuzzyNumber] = {}
        self._centroids: dict[str, float] = {}
        for label, spec in (terms or {}).items():
            tfn = spec if isinstance(spec, TrapezoidalFuzzyNumber) else TrapezoidalFuzzyNumber(*spec)
            label = str(label)
            self._terms[label] = tfn
            self._centroids[label] = centroid(tfn)

    def __getitem__(self, label: str) -> TrapezoidalFuzzyNumber:
        return self._terms[label]

    def __iter__(self) -> Iterator[str]:
        return iter(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, TermTable):
            return list(self._terms.items()) == list(other._terms.items())
        return NotImplemented

    def __hash__(self) -> int:
        return hash(tuple(self._terms.items()))

    def __repr__(self) -> str:
        body = ", ".join(f"{k}={v.as_tuple()}" for k, v in self._terms.items())
        return f"TermTable({body})"

    def centroid_of(self, label: str) -> float:
        try:
            return self._centroids[label]
        except KeyError:
            raise KeyError(f"unknown linguistic label {label!r}; known: {list(self._terms)}") from None

    def to_dict(self) -> dict[str, list[float]]:
        return {k: list(v.as_tuple()) for k, v in self._terms.items()}


def defuzzify_column(values: Iterable[str], table: TermTable) -> list[float]:
    """Map each linguistic label to its cached centroid."""
    return [table.centroid_of(v) for v in values]
