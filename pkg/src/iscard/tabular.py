"""Tabular data ingestion and the typed column model.

Covers CSV upload (RFC 4180, UTF-8 with optional BOM), user-generated
tables, automatic column type detection, and manual type overrides.
Column types form a closed three-kind vocabulary: categorical, ordered
categorical, and numerical. Ordered detection is dictionary-based; the
vocabularies live in ``data/ordinal_dictionaries.json`` and can be edited
without code changes.

Tables are immutable values: every operation returns a new table.
"""

import csv
import io
import json
import re
from dataclasses import dataclass, replace
from enum import Enum
from importlib import resources
from typing import Iterable, NamedTuple, Sequence


MAX_INGEST_BYTES = 10 * 1024 * 1024
MAX_COLUMNS = 100
MAX_ROWS = 100_000

_NUMBER_RE = re.compile(r"^[+-]?(?:\d+\.?\d*|\.\d+)$")


class ColumnType(str, Enum):
    CATEGORICAL = "categorical"
    CATEGORICAL_ORDERED = "categoricalOrdered"
    NUMERICAL = "numerical"


# ---------------------------------------------------------------------------
# Errors
# ---------------------------------------------------------------------------

class TableError(Exception):
    """Base class for table ingestion/validation failures."""

    code = "tableError"


class EmptyInput(TableError):
    code = "emptyInput"

    def __init__(self) -> None:
        super().__init__("input contains no header row")


class EncodingError(TableError):
    code = "encodingError"

    def __init__(self, detail: str) -> None:
        super().__init__(f"input is not valid UTF-8: {detail}")


class RaggedRows(TableError):
    code = "raggedRows"

    def __init__(self, row_index: int, expected: int, actual: int) -> None:
        self.row_index = row_index
        super().__init__(
            f"row {row_index} has {actual} cells, expected {expected}"
        )


class DuplicateColumn(TableError):
    code = "duplicateColumn"

    def __init__(self, name: str) -> None:
        self.name = name
        super().__init__(f"duplicate column name: {name!r}")


class InvalidColumnName(TableError):
    code = "invalidColumnName"

    def __init__(self, position: int) -> None:
        super().__init__(f"column {position} has an empty name")


class UnknownColumn(TableError):
    code = "unknownColumn"

    def __init__(self, name: str) -> None:
        self.name = name
        super().__init__(f"unknown column: {name!r}")


class IncompatibleValues(TableError):
    """A requested column type does not fit the column's values."""

    code = "incompatibleValues"

    def __init__(self, column: str, target: ColumnType, cells: Sequence[str]) -> None:
        self.column = column
        self.target = target
        self.cells = list(cells)
        shown = ", ".join(repr(c) for c in self.cells[:5])
        super().__init__(
            f"column {column!r} cannot be typed {target.value}: offending cells [{shown}]"
        )


class OrderDictionaryMissing(TableError):
    code = "orderDictionaryMissing"

    def __init__(self, column: str) -> None:
        self.column = column
        super().__init__(
            f"column {column!r}: ordered categorical type requires an order dictionary"
        )


class TooLarge(TableError):
    code = "tooLarge"

    def __init__(self, what: str, limit: int) -> None:
        super().__init__(f"input exceeds the {what} limit of {limit}")


# ---------------------------------------------------------------------------
# Ordinal dictionaries
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OrdinalDictionary:
    name: str
    values: tuple[str, ...]  # lowercase, in sort order


def _load_ordinal_dictionaries() -> tuple[OrdinalDictionary, ...]:
    raw = resources.files("iscard.data").joinpath("ordinal_dictionaries.json").read_text("utf-8")
    doc = json.loads(raw)
    out = []
    for entry in doc["dictionaries"]:
        values = tuple(v.casefold() for v in entry["values"])
        if len(set(values)) != len(values):
            raise ValueError(f"ordinal dictionary {entry['name']!r} has duplicate values")
        out.append(OrdinalDictionary(name=entry["name"], values=values))
    return tuple(out)


ORDINAL_DICTIONARIES: tuple[OrdinalDictionary, ...] = _load_ordinal_dictionaries()


def is_missing(cell: str) -> bool:
    """Missing means empty after trimming whitespace."""
    return cell.strip() == ""


def parses_as_number(cell: str) -> bool:
    """Decimal number: optional sign, digits, at most one decimal point.

    No exponents, no thousands separators, no inf/nan.
    """
    return _NUMBER_RE.match(cell.strip()) is not None


def match_order_dictionary(values: Iterable[str]) -> list[str] | None:
    """Return the single dictionary covering all values, or None.

    Matching is case-insensitive over the non-missing distinct values.
    Ambiguous columns (covered by more than one dictionary) do not match.
    """
    distinct = {v.strip().casefold() for v in values if not is_missing(v)}
    if not distinct:
        return None
    matches = [d for d in ORDINAL_DICTIONARIES if distinct.issubset(d.values)]
    if len(matches) == 1:
        return list(matches[0].values)
    return None


def infer_column_type(values: Sequence[str]) -> tuple[ColumnType, list[str] | None]:
    """Detect a column's type from its cell values.

    Precedence: numerical first (a column of numbers is never treated as a
    category dictionary match), then ordered-dictionary lookup, then plain
    categorical. An all-missing column falls back to categorical.
    """
    present = [v for v in values if not is_missing(v)]
    if not present:
        return ColumnType.CATEGORICAL, None
    if all(parses_as_number(v) for v in present):
        return ColumnType.NUMERICAL, None
    dictionary = match_order_dictionary(present)
    if dictionary is not None:
        return ColumnType.CATEGORICAL_ORDERED, dictionary
    return ColumnType.CATEGORICAL, None


# ---------------------------------------------------------------------------
# DataTable
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Column:
    name: str
    type: ColumnType
    inferred: bool


class DataSignature(NamedTuple):
    """Per-type column counts; the key for data-driven idiom compatibility."""

    n_categorical: int
    n_ordered: int
    n_numerical: int


@dataclass(frozen=True)
class DataTable:
    """A named, typed table of text cells.

    ``order_dictionaries`` maps each ordered-categorical column name to the
    value list governing its sort order. ``warnings`` carries non-fatal
    ingestion notes (e.g. an all-missing column defaulted to categorical).
    """

    columns: tuple[Column, ...]
    rows: tuple[tuple[str, ...], ...]
    order_dictionaries: dict[str, tuple[str, ...]]
    dataset_id: str = ""
    warnings: tuple[str, ...] = ()

    def column_names(self) -> list[str]:
        return [c.name for c in self.columns]

    def column(self, name: str) -> Column:
        for c in self.columns:
            if c.name == name:
                return c
        raise UnknownColumn(name)

    def column_index(self, name: str) -> int:
        for i, c in enumerate(self.columns):
            if c.name == name:
                return i
        raise UnknownColumn(name)

    def column_values(self, name: str) -> list[str]:
        i = self.column_index(name)
        return [row[i] for row in self.rows]


def _check_values(column: str, target: ColumnType, values: Sequence[str],
                  order_dictionary: Sequence[str] | None) -> list[str] | None:
    """Return the order dictionary to store (ordered type only).

    Raises IncompatibleValues / OrderDictionaryMissing on a bad fit.
    """
    present = [v for v in values if not is_missing(v)]
    if target is ColumnType.NUMERICAL:
        bad = [v for v in present if not parses_as_number(v)]
        if bad:
            raise IncompatibleValues(column, target, bad)
        return None
    if target is ColumnType.CATEGORICAL_ORDERED:
        if order_dictionary is None:
            raise OrderDictionaryMissing(column)
        normalized = [v.casefold() for v in order_dictionary]
        if len(set(normalized)) != len(normalized):
            raise IncompatibleValues(column, target, list(order_dictionary))
        members = set(normalized)
        bad = sorted({v for v in present if v.strip().casefold() not in members})
        if bad:
            raise IncompatibleValues(column, target, bad)
        return list(order_dictionary)
    return None


def _validate_header(names: Sequence[str]) -> None:
    seen: set[str] = set()
    for i, name in enumerate(names, start=1):
        if name.strip() == "":
            raise InvalidColumnName(i)
        if name in seen:
            raise DuplicateColumn(name)
        seen.add(name)
    if len(names) > MAX_COLUMNS:
        raise TooLarge("column", MAX_COLUMNS)


def parse_csv(content: bytes) -> DataTable:
    """Parse an uploaded CSV (RFC 4180) and infer every column's type.

    The first record is the header. All columns come back with
    ``inferred=True``; the caller/store assigns ``dataset_id``.
    """
    if len(content) > MAX_INGEST_BYTES:
        raise TooLarge("byte", MAX_INGEST_BYTES)
    try:
        text = content.decode("utf-8-sig")
    except UnicodeDecodeError as exc:
        raise EncodingError(str(exc)) from exc

    reader = csv.reader(io.StringIO(text, newline=""))
    records = list(reader)
    if not records:
        raise EmptyInput()

    header = records[0]
    if header == [] or all(cell.strip() == "" for cell in header):
        raise EmptyInput()
    _validate_header(header)

    rows: list[tuple[str, ...]] = []
    for index, record in enumerate(records[1:], start=1):
        if len(record) != len(header):
            raise RaggedRows(index, len(header), len(record))
        rows.append(tuple(record))
    if len(rows) > MAX_ROWS:
        raise TooLarge("row", MAX_ROWS)

    columns: list[Column] = []
    dictionaries: dict[str, tuple[str, ...]] = {}
    warnings: list[str] = []
    for i, name in enumerate(header):
        values = [row[i] for row in rows]
        ctype, dictionary = infer_column_type(values)
        if not any(not is_missing(v) for v in values):
            warnings.append(f"column {name!r} has no values; defaulted to categorical")
        columns.append(Column(name=name, type=ctype, inferred=True))
        if dictionary is not None:
            dictionaries[name] = tuple(dictionary)

    return DataTable(
        columns=tuple(columns),
        rows=tuple(rows),
        order_dictionaries=dictionaries,
        warnings=tuple(warnings),
    )


def serialize_csv(table: DataTable) -> bytes:
    """Write the table back to RFC 4180 CSV (UTF-8, no BOM)."""
    buf = io.StringIO(newline="")
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(table.column_names())
    writer.writerows(table.rows)
    return buf.getvalue().encode("utf-8")


def set_column_type(table: DataTable, column: str, ctype: ColumnType,
                    order_dictionary: Sequence[str] | None = None) -> DataTable:
    """Manually retype one column; marks it ``inferred=False``."""
    idx = table.column_index(column)
    values = table.column_values(column)
    stored = _check_values(column, ctype, values, order_dictionary)

    columns = list(table.columns)
    columns[idx] = Column(name=column, type=ctype, inferred=False)
    dictionaries = dict(table.order_dictionaries)
    dictionaries.pop(column, None)
    if stored is not None:
        dictionaries[column] = tuple(stored)
    return replace(table, columns=tuple(columns), order_dictionaries=dictionaries)


@dataclass(frozen=True)
class ColumnDef:
    """A user-declared column for table generation."""

    name: str
    type: ColumnType
    order_dictionary: tuple[str, ...] | None = None


def generate_table(columns: Sequence[ColumnDef],
                   rows: Sequence[Sequence[str]]) -> DataTable:
    """Build a table from user-declared columns and row values.

    All columns come back with ``inferred=False``; each column's values are
    validated against its declared type.
    """
    _validate_header([c.name for c in columns])

    checked_rows: list[tuple[str, ...]] = []
    for index, record in enumerate(rows, start=1):
        if len(record) != len(columns):
            raise RaggedRows(index, len(columns), len(record))
        checked_rows.append(tuple(str(v) for v in record))
    if len(checked_rows) > MAX_ROWS:
        raise TooLarge("row", MAX_ROWS)

    out_columns: list[Column] = []
    dictionaries: dict[str, tuple[str, ...]] = {}
    for i, spec in enumerate(columns):
        values = [row[i] for row in checked_rows]
        stored = _check_values(spec.name, spec.type, values, spec.order_dictionary)
        out_columns.append(Column(name=spec.name, type=spec.type, inferred=False))
        if stored is not None:
            dictionaries[spec.name] = tuple(stored)

    return DataTable(
        columns=tuple(out_columns),
        rows=tuple(checked_rows),
        order_dictionaries=dictionaries,
    )


def data_signature(table: DataTable) -> DataSignature:
    """Count columns by type."""
    counts = {t: 0 for t in ColumnType}
    for c in table.columns:
        counts[c.type] += 1
    return DataSignature(
        n_categorical=counts[ColumnType.CATEGORICAL],
        n_ordered=counts[ColumnType.CATEGORICAL_ORDERED],
        n_numerical=counts[ColumnType.NUMERICAL],
    )


def schema_document(table: DataTable) -> dict:
    """The persisted/wire Data Abstraction: per-column schema plus warnings."""
    cols = []
    for c in table.columns:
        entry: dict = {"name": c.name, "type": c.type.value, "inferred": c.inferred}
        if c.name in table.order_dictionaries:
            entry["orderDictionary"] = list(table.order_dictionaries[c.name])
        cols.append(entry)
    return {
        "columns": cols,
        "rowCount": len(table.rows),
        "warnings": list(table.warnings),
    }


def table_from_schema(csv_bytes: bytes, schema: dict) -> DataTable:
    """Rebuild a typed table from stored CSV bytes plus its schema sidecar."""
    parsed = parse_csv(csv_bytes)
    if [c["name"] for c in schema["columns"]] != parsed.column_names():
        raise TableError("schema sidecar does not match the stored CSV header")
    table = parsed
    for entry in schema["columns"]:
        ctype = ColumnType(entry["type"])
        if entry.get("inferred", False):
            # Inference is deterministic; re-derived type must agree.
            if table.column(entry["name"]).type is not ctype:
                raise TableError(
                    f"stored schema for column {entry['name']!r} disagrees with inference"
                )
            continue
        table = set_column_type(table, entry["name"], ctype, entry.get("orderDictionary"))
    return replace(table, warnings=tuple(schema.get("warnings", ())))
