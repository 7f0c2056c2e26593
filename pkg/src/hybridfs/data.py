"""Typed tables of mixed-kind attributes, schema parsing and CSV ingestion."""

from __future__ import annotations

import csv
import enum
import io
import itertools
import json
import math
import os
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from typing import Any, TextIO

import numpy as np

from .linguistic import TermTable, TrapezoidalFuzzyNumber

__all__ = [
    "AttributeKind",
    "Attribute",
    "Schema",
    "SchemaError",
    "DataError",
    "HybridInformationSystem",
    "DecisionPartition",
    "parse_schema",
    "load_schema",
    "load_dataset",
    "read_dataset",
    "to_csv",
    "partition_by_decision",
    "cross_class_pairs",
]


class SchemaError(ValueError):
    """Malformed or inconsistent schema document."""


class DataError(ValueError):
    """A dataset cell or row that does not fit its schema."""

    def __init__(self, message: str, row: int | None = None, column: str | None = None):
        where = []
        if row is not None:
            where.append(f"row {row}")
        if column is not None:
            where.append(f"column {column!r}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)
        self.row = row
        self.column = column


class AttributeKind(str, enum.Enum):
    BOOLEAN = "boolean"
    CATEGORICAL = "categorical"
    REAL = "real"
    SET_VALUED = "set"
    LINGUISTIC = "linguistic"


# Python type each kind's values carry once loaded.
_VALUE_TYPES = {
    AttributeKind.BOOLEAN: bool,
    AttributeKind.CATEGORICAL: str,
    AttributeKind.REAL: float,
    AttributeKind.SET_VALUED: frozenset,
    AttributeKind.LINGUISTIC: str,
}


@dataclass(frozen=True)
class Attribute:
    """One condition attribute: a name, a kind and kind-specific parsing options.

    ``domain`` only applies to set-valued attributes; when it is ``None`` the
    domain is the union of observed elements. ``terms`` is required for
    linguistic attributes.
    """

    name: str
    kind: AttributeKind = AttributeKind.REAL
    true_token: str = "Yes"
    false_token: str = "No"
    set_delimiter: str = ";"
    domain: frozenset[str] | None = None
    terms: TermTable | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", AttributeKind(self.kind))
        if self.kind is AttributeKind.LINGUISTIC and not self.terms:
            raise SchemaError(f"linguistic attribute {self.name!r} needs a non-empty term table")
        if self.kind is not AttributeKind.LINGUISTIC and self.terms is not None:
            raise SchemaError(f"attribute {self.name!r} of kind {self.kind.value} cannot carry terms")
        if self.domain is not None:
            if self.kind is not AttributeKind.SET_VALUED:
                raise SchemaError(f"attribute {self.name!r}: 'domain' only applies to set attributes")
            object.__setattr__(self, "domain", frozenset(str(v) for v in self.domain))
        if self.kind is AttributeKind.BOOLEAN and self.true_token == self.false_token:
            raise SchemaError(f"attribute {self.name!r}: true and false tokens must differ")

    def parse(self, cell: str) -> Any:
        """Parse one raw CSV cell into this attribute's value type."""
        text = cell.strip()
        if text == "":
            raise ValueError("missing value")
        kind = self.kind
        if kind is AttributeKind.BOOLEAN:
            if text == self.true_token:
                return True
            if text == self.false_token:
                return False
            raise ValueError(
                f"expected {self.true_token!r} or {self.false_token!r}, got {text!r}"
            )
        if kind is AttributeKind.REAL:
            try:
                value = float(text)
            except ValueError:
                raise ValueError(f"not a real number: {text!r}") from None
            if not math.isfinite(value):
                raise ValueError(f"non-finite real value: {text!r}")
            return value
        if kind is AttributeKind.SET_VALUED:
            elements = frozenset(e.strip() for e in text.strip("{}").split(self.set_delimiter))
            elements = frozenset(e for e in elements if e)
            if not elements:
                raise ValueError("empty set value")
            return elements
        if kind is AttributeKind.LINGUISTIC and text not in self.terms:
            raise ValueError(f"unknown linguistic label {text!r}")
        return text

    def format(self, value: Any) -> str:
        """Inverse of :meth:`parse`."""
        kind = self.kind
        if kind is AttributeKind.BOOLEAN:
            return self.true_token if value else self.false_token
        if kind is AttributeKind.REAL:
            return repr(float(value))
        if kind is AttributeKind.SET_VALUED:
            return self.set_delimiter.join(sorted(value))
        return str(value)

    def coerce(self, value: Any) -> Any:
        """Accept an already-typed value (or a raw string) for this attribute."""
        if isinstance(value, str):
            return self.parse(value)
        kind = self.kind
        if kind is AttributeKind.BOOLEAN:
            if isinstance(value, (bool, np.bool_)) or value in (0, 1):
                return bool(value)
        elif kind is AttributeKind.REAL:
            if isinstance(value, (int, float, np.integer, np.floating)) and not isinstance(value, bool):
                value = float(value)
                if not math.isfinite(value):
                    raise ValueError(f"non-finite real value: {value!r}")
                return value
        elif kind is AttributeKind.SET_VALUED:
            if isinstance(value, (set, frozenset, list, tuple)) and len(value) > 0:
                return frozenset(str(v) for v in value)
        elif value is not None and not (isinstance(value, float) and math.isnan(value)):
            return self.parse(str(value))
        raise ValueError(f"value {value!r} does not fit {kind.value} attribute")

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"name": self.name, "kind": self.kind.value}
        if self.kind is AttributeKind.BOOLEAN:
            out["true_token"] = self.true_token
            out["false_token"] = self.false_token
        if self.kind is AttributeKind.SET_VALUED:
            out["set_delimiter"] = self.set_delimiter
            if self.domain is not None:
                out["domain"] = sorted(self.domain)
        if self.terms is not None:
            out["terms"] = self.terms.to_dict()
        return out


@dataclass(frozen=True)
class Schema:
    attributes: tuple[Attribute, ...]
    decision: str

    @property
    def names(self) -> list[str]:
        return [a.name for a in self.attributes]

    def to_dict(self) -> dict[str, Any]:
        return {"attributes": [a.to_dict() for a in self.attributes], "decision": self.decision}


_SCHEMA_KEYS = {"name", "kind", "true_token", "false_token", "set_delimiter", "domain", "terms"}


def parse_schema(document: str | Mapping[str, Any]) -> Schema:
    """Parse a JSON schema document (text or already-decoded mapping).

    Raises
    ------
    SchemaError
        On malformed JSON, unknown kinds, duplicate names or disordered
        trapezoid corners.
    """
    if isinstance(document, str):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"schema is not valid JSON: {exc}") from None
    if not isinstance(document, Mapping):
        raise SchemaError("schema must be a JSON object")
    raw_attrs = document.get("attributes")
    decision = document.get("decision")
    if not isinstance(raw_attrs, list) or not raw_attrs:
        raise SchemaError("schema needs a non-empty 'attributes' list")
    if not isinstance(decision, str) or not decision:
        raise SchemaError("schema needs a 'decision' column name")

    attributes = []
    seen = {decision}
    for pos, raw in enumerate(raw_attrs):
        if not isinstance(raw, Mapping):
            raise SchemaError(f"attribute #{pos} must be an object")
        unknown = set(raw) - _SCHEMA_KEYS
        if unknown:
            raise SchemaError(f"attribute #{pos}: unknown keys {sorted(unknown)}")
        name = raw.get("name")
        if not isinstance(name, str) or not name:
            raise SchemaError(f"attribute #{pos} needs a string 'name'")
        if name in seen:
            raise SchemaError(f"duplicate attribute name {name!r}")
        seen.add(name)
        try:
            kind = AttributeKind(raw.get("kind"))
        except ValueError:
            raise SchemaError(f"attribute {name!r}: unknown kind {raw.get('kind')!r}") from None

        terms = None
        if "terms" in raw:
            if not isinstance(raw["terms"], Mapping):
                raise SchemaError(f"attribute {name!r}: 'terms' must be an object")
            parsed = {}
            for label, corners in raw["terms"].items():
                if not isinstance(corners, list) or len(corners) != 4:
                    raise SchemaError(f"attribute {name!r}: term {label!r} needs [a, b, c, d]")
                try:
                    parsed[label] = TrapezoidalFuzzyNumber(*(float(v) for v in corners))
                except (TypeError, ValueError) as exc:
                    raise SchemaError(f"attribute {name!r}: term {label!r}: {exc}") from None
            terms = TermTable(parsed)

        options = {k: raw[k] for k in ("true_token", "false_token", "set_delimiter") if k in raw}
        for key, val in options.items():
            if not isinstance(val, str) or not val:
                raise SchemaError(f"attribute {name!r}: {key} must be a non-empty string")
        if options.get("set_delimiter") == ",":
            raise SchemaError(f"attribute {name!r}: set delimiter must differ from the CSV comma")
        domain = raw.get("domain")
        if domain is not None and not isinstance(domain, list):
            raise SchemaError(f"attribute {name!r}: 'domain' must be a list")
        attributes.append(Attribute(name=name, kind=kind, domain=domain, terms=terms, **options))
    return Schema(tuple(attributes), decision)


def load_schema(path: str | os.PathLike[str]) -> Schema:
    with open(path, encoding="utf-8") as fh:
        return parse_schema(fh.read())


@dataclass(frozen=True)
class DecisionPartition:
    """Decision classes ``D_1..D_r`` in first-appearance order."""

    labels: tuple[str, ...]
    classes: tuple[tuple[int, ...], ...]
    n: int

    def __post_init__(self) -> None:
        members = sorted(itertools.chain.from_iterable(self.classes))
        if members != list(range(self.n)):
            raise ValueError("decision classes must partition 0..n-1")
        if any(len(c) == 0 for c in self.classes):
            raise ValueError("decision classes must be non-empty")

    @property
    def r(self) -> int:
        return len(self.classes)

    def class_of(self) -> np.ndarray:
        """Class number of each object."""
        out = np.empty(self.n, dtype=np.intp)
        for j, members in enumerate(self.classes):
            out[list(members)] = j
        return out

    def membership(self, j: int) -> np.ndarray:
        """Crisp membership vector of class ``j``."""
        out = np.zeros(self.n)
        out[list(self.classes[j])] = 1.0
        return out


@dataclass(frozen=True, eq=False)
class HybridInformationSystem:
    """Objects described by typed condition attributes plus a decision label.

    Records hold loaded Python values: ``bool`` for boolean attributes,
    ``str`` for categorical and linguistic ones, ``float`` for real ones and
    ``frozenset`` of ``str`` for set-valued ones.
    """

    attributes: tuple[Attribute, ...]
    records: tuple[tuple[Any, ...], ...]
    decision: tuple[str, ...]
    decision_name: str = "decision"
    _class_index: dict[str, tuple[int, ...]] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "attributes", tuple(self.attributes))
        object.__setattr__(self, "records", tuple(tuple(r) for r in self.records))
        object.__setattr__(self, "decision", tuple(str(d) for d in self.decision))
        m = len(self.attributes)
        if m < 1:
            raise DataError("at least one condition attribute is required")
        if len(self.records) < 2:
            raise DataError(f"at least 2 objects are required, got {len(self.records)}")
        if len(self.decision) != len(self.records):
            raise DataError("decision column length differs from the number of records")
        names = [a.name for a in self.attributes]
        if len(set(names)) != m:
            raise DataError("attribute names must be unique")
        for i, rec in enumerate(self.records):
            if len(rec) != m:
                raise DataError(f"expected {m} values, got {len(rec)}", row=i)
            for attr, value in zip(self.attributes, rec):
                _check_value(attr, value, i)
        index: dict[str, list[int]] = {}
        for i, label in enumerate(self.decision):
            index.setdefault(label, []).append(i)
        object.__setattr__(self, "_class_index", {k: tuple(v) for k, v in index.items()})

    @property
    def n(self) -> int:
        return len(self.records)

    @property
    def m(self) -> int:
        return len(self.attributes)

    @property
    def names(self) -> list[str]:
        return [a.name for a in self.attributes]

    @property
    def class_index(self) -> dict[str, tuple[int, ...]]:
        return dict(self._class_index)

    def column(self, k: int) -> list[Any]:
        return [rec[k] for rec in self.records]

    def set_domain(self, k: int) -> frozenset[str]:
        """Declared domain of set attribute ``k``, or the union of observed elements."""
        attr = self.attributes[k]
        if attr.kind is not AttributeKind.SET_VALUED:
            raise ValueError(f"attribute {attr.name!r} is not set-valued")
        if attr.domain is not None:
            return attr.domain
        return frozenset().union(*self.column(k))

    def subset(self, indices: Sequence[int]) -> HybridInformationSystem:
        """Rows ``indices`` (in the given order) as a new system."""
        idx = [int(i) for i in indices]
        return HybridInformationSystem(
            self.attributes,
            [self.records[i] for i in idx],
            [self.decision[i] for i in idx],
            self.decision_name,
        )

    def select_attributes(self, features: Iterable[int]) -> HybridInformationSystem:
        ks = [int(k) for k in features]
        return HybridInformationSystem(
            [self.attributes[k] for k in ks],
            [[rec[k] for k in ks] for rec in self.records],
            self.decision,
            self.decision_name,
        )

    @property
    def schema(self) -> Schema:
        return Schema(self.attributes, self.decision_name)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, HybridInformationSystem):
            return NotImplemented
        return (
            self.attributes == other.attributes
            and self.records == other.records
            and self.decision == other.decision
            and self.decision_name == other.decision_name
        )

    __hash__ = None  # type: ignore[assignment]


def _check_value(attr: Attribute, value: Any, row: int) -> None:
    expected = _VALUE_TYPES[attr.kind]
    ok = isinstance(value, expected)
    if attr.kind is AttributeKind.REAL:
        ok = ok and math.isfinite(value)
    if not ok:
        raise DataError(
            f"value {value!r} is not a {attr.kind.value} value", row=row, column=attr.name
        )
    if attr.kind is AttributeKind.SET_VALUED:
        if not value or not all(isinstance(e, str) for e in value):
            raise DataError("set values must be non-empty sets of labels", row=row, column=attr.name)
        if attr.domain is not None and not value <= attr.domain:
            extra = sorted(value - attr.domain)
            raise DataError(f"elements {extra} outside declared domain", row=row, column=attr.name)
    elif attr.kind is AttributeKind.LINGUISTIC and value not in attr.terms:
        raise DataError(f"unknown linguistic label {value!r}", row=row, column=attr.name)


def load_dataset(rows: str | TextIO, schema: Schema) -> HybridInformationSystem:
    """Load comma-delimited text with a header row into a typed system.

    ``rows`` is either the CSV text itself or an open text stream. Row
    numbers in error messages are 1-based data rows (the header is row 0).
    """
    stream = io.StringIO(rows) if isinstance(rows, str) else rows
    reader = csv.reader(stream)
    try:
        header = [h.strip() for h in next(reader)]
    except StopIteration:
        raise DataError("dataset is empty") from None
    if schema.decision not in header:
        raise DataError(f"decision column {schema.decision!r} absent from header")
    positions = {}
    for attr in schema.attributes:
        if attr.name not in header:
            raise DataError(f"schema attribute {attr.name!r} absent from header")
        positions[attr.name] = header.index(attr.name)
    dec_pos = header.index(schema.decision)

    records, decision = [], []
    for row_no, cells in enumerate(reader, start=1):
        if not cells or all(not c.strip() for c in cells):
            continue
        if len(cells) != len(header):
            raise DataError(f"expected {len(header)} cells, got {len(cells)}", row=row_no)
        rec = []
        for attr in schema.attributes:
            try:
                value = attr.parse(cells[positions[attr.name]])
            except ValueError as exc:
                raise DataError(str(exc), row=row_no, column=attr.name) from None
            if (
                attr.kind is AttributeKind.SET_VALUED
                and attr.domain is not None
                and not value <= attr.domain
            ):
                raise DataError(
                    f"elements {sorted(value - attr.domain)} outside declared domain",
                    row=row_no,
                    column=attr.name,
                )
            rec.append(value)
        label = cells[dec_pos].strip()
        if not label:
            raise DataError("missing value", row=row_no, column=schema.decision)
        records.append(rec)
        decision.append(label)
    if len(records) < 2:
        raise DataError(f"at least 2 data rows are required, got {len(records)}")
    return HybridInformationSystem(schema.attributes, records, decision, schema.decision)


def read_dataset(
    path: str | os.PathLike[str], schema: Schema | str | os.PathLike[str]
) -> HybridInformationSystem:
    """Read a CSV file, with ``schema`` given as a :class:`Schema` or a schema path."""
    if not isinstance(schema, Schema):
        schema = load_schema(schema)
    with open(path, encoding="utf-8", newline="") as fh:
        return load_dataset(fh, schema)


def to_csv(his: HybridInformationSystem) -> str:
    """Serialize back to CSV text that :func:`load_dataset` reads losslessly."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([*his.names, his.decision_name])
    for rec, label in zip(his.records, his.decision):
        writer.writerow([a.format(v) for a, v in zip(his.attributes, rec)] + [label])
    return buf.getvalue()


def partition_by_decision(his: HybridInformationSystem) -> DecisionPartition:
    index = his.class_index
    return DecisionPartition(tuple(index), tuple(index.values()), his.n)


def cross_class_pairs(partition: DecisionPartition) -> list[tuple[int, int]]:
    """Unordered pairs ``(i, j)``, ``i < j``, whose objects lie in different classes."""
    cls = partition.class_of()
    return [
        (i, j)
        for i, j in itertools.combinations(range(partition.n), 2)
        if cls[i] != cls[j]
    ]
