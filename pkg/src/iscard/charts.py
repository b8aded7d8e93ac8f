"""Renderer-independent chart specifications.

Turns (idiom, table, validated bindings) into a neutral JSON document the
UI preview and the CLI export both consume. Conventions that the input
data does not determine are fixed here: category order (order dictionary
for ordered columns, first appearance otherwise), mean-aggregation of
duplicate categories, pairwise dropping of missing cells (gap markers for
line idioms), square-root histogram binning, and linearly interpolated
quartiles for box plots.
"""

import json
import math
from bisect import bisect_right
from dataclasses import dataclass
from typing import Sequence

from .cards import BindingSet, IdiomKind
from .catalog import MappingConfig, default_config
from .jsonutil import canonical_json
from .recommender import Violation, validate_binding
from .tabular import ColumnType, DataTable, is_missing

SPEC_VERSION = 1

Point = float | int | None | tuple


class ChartSpecError(Exception):
    pass


class InvalidBinding(ChartSpecError):
    def __init__(self, violations: Sequence[Violation]) -> None:
        self.violations = tuple(violations)
        lines = "; ".join(v.message for v in violations)
        super().__init__(f"bindings do not validate: {lines}")


class NegativePieValue(ChartSpecError):
    def __init__(self, label: str, value: float) -> None:
        super().__init__(f"slice {label!r} has negative value {value}")


@dataclass(frozen=True)
class Axis:
    label: str
    value_kind: str  # categorical | categoricalOrdered | numerical | bins | count | statistic


@dataclass(frozen=True)
class Series:
    name: str
    points: tuple[Point, ...]


@dataclass(frozen=True)
class Slice:
    label: str
    value: float | int


@dataclass(frozen=True)
class ChartSpec:
    idiom: IdiomKind
    title: str
    x_axis: Axis
    y_axis: Axis
    categories: tuple[str, ...] = ()
    series: tuple[Series, ...] = ()
    slices: tuple[Slice, ...] = ()
    notes: tuple[str, ...] = ()


def _num(cell: str) -> float | int:
    value = float(cell.strip())
    return int(value) if value.is_integer() else value


def _mean(values: list[float | int]) -> float | int:
    value = sum(values) / len(values)
    return int(value) if float(value).is_integer() else value


def _fmt(value: float | int) -> str:
    return f"{value:g}"


def _category_order(table: DataTable, column: str) -> list[str]:
    """Distinct category cell values in display order (missing skipped)."""
    values = [v for v in table.column_values(column) if not is_missing(v)]
    distinct = list(dict.fromkeys(values))
    dictionary = table.order_dictionaries.get(column)
    if dictionary is not None:
        index = {v: i for i, v in enumerate(dictionary)}
        distinct.sort(key=lambda v: index[v.strip().casefold()])
    return distinct


def _grouped_values(table: DataTable, x_col: str, y_col: str) -> dict[str, list[float | int]]:
    xi = table.column_index(x_col)
    yi = table.column_index(y_col)
    groups: dict[str, list[float | int]] = {}
    for row in table.rows:
        if is_missing(row[xi]):
            continue
        groups.setdefault(row[xi], [])
        if not is_missing(row[yi]):
            groups[row[xi]].append(_num(row[yi]))
    return groups


def _category_chart(kind: IdiomKind, table: DataTable, x_col: str,
                    y_cols: Sequence[str], title: str, gaps: bool) -> ChartSpec:
    categories = _category_order(table, x_col)
    grouped = {y: _grouped_values(table, x_col, y) for y in y_cols}

    aggregated = any(len(vals) > 1 for per in grouped.values() for vals in per.values())
    notes: list[str] = []
    if aggregated:
        notes.append(f"duplicate {x_col!r} values aggregated by mean")

    if not gaps:
        kept = [c for c in categories if all(grouped[y].get(c) for y in y_cols)]
        dropped = len(categories) - len(kept)
        if dropped:
            notes.append(f"dropped {dropped} categor{'y' if dropped == 1 else 'ies'} with missing values")
        categories = kept

    series = []
    for y in y_cols:
        points: list[Point] = []
        for c in categories:
            values = grouped[y].get(c, [])
            points.append(_mean(values) if values else None)
        series.append(Series(name=y, points=tuple(points)))

    x_kind = table.column(x_col).type.value
    return ChartSpec(
        idiom=kind,
        title=title,
        x_axis=Axis(label=x_col, value_kind=x_kind),
        y_axis=Axis(label=", ".join(y_cols), value_kind="numerical"),
        categories=tuple(categories),
        series=tuple(series),
        notes=tuple(notes),
    )


def _point_chart(kind: IdiomKind, table: DataTable, bindings: BindingSet,
                 title: str) -> ChartSpec:
    x_col = bindings.columns("x")[0]
    y_col = bindings.columns("y")[0]
    size = bindings.columns("size")
    color = bindings.columns("color")
    size_col = size[0] if size else None
    color_col = color[0] if color else None

    xi = table.column_index(x_col)
    yi = table.column_index(y_col)
    si = table.column_index(size_col) if size_col else None
    ci = table.column_index(color_col) if color_col else None

    points: list[Point] = []
    for row in table.rows:
        numeric_cells = [row[xi], row[yi]] + ([row[si]] if si is not None else [])
        if any(is_missing(cell) for cell in numeric_cells):
            continue
        point = [_num(cell) for cell in numeric_cells]
        if ci is not None:
            point.append(row[ci].strip())
        points.append(tuple(point))

    layout = "[x, y" + (", size" if size_col else "") + (", label" if color_col else "") + "]"
    notes = []
    if size_col or color_col:
        notes.append(f"point arrays: {layout}")
        if color_col:
            notes.append(f"point labels from column {color_col!r}")

    return ChartSpec(
        idiom=kind,
        title=title,
        x_axis=Axis(label=x_col, value_kind="numerical"),
        y_axis=Axis(label=y_col, value_kind="numerical"),
        series=(Series(name=y_col, points=tuple(points)),),
        notes=tuple(notes),
    )


def _pie_chart(kind: IdiomKind, table: DataTable, bindings: BindingSet,
               title: str) -> ChartSpec:
    label_col = bindings.columns("label")[0]
    value_col = bindings.columns("value")[0]
    li = table.column_index(label_col)
    vi = table.column_index(value_col)

    totals: dict[str, float | int] = {}
    counts: dict[str, int] = {}
    dropped = 0
    for row in table.rows:
        if is_missing(row[li]) or is_missing(row[vi]):
            dropped += 1
            continue
        value = _num(row[vi])
        if value < 0:
            raise NegativePieValue(row[li], value)
        totals[row[li]] = totals.get(row[li], 0) + value
        counts[row[li]] = counts.get(row[li], 0) + 1

    order = _category_order(table, label_col)
    slices = tuple(Slice(label=c, value=totals[c]) for c in order if c in totals)

    notes = []
    if any(n > 1 for n in counts.values()):
        notes.append(f"duplicate {label_col!r} values aggregated by sum")
    if dropped:
        notes.append(f"dropped {dropped} row(s) with missing label or value")

    return ChartSpec(
        idiom=kind,
        title=title,
        x_axis=Axis(label=label_col, value_kind=table.column(label_col).type.value),
        y_axis=Axis(label=value_col, value_kind="numerical"),
        slices=slices,
        notes=tuple(notes),
    )


def _histogram(table: DataTable, bindings: BindingSet, title: str) -> ChartSpec:
    value_col = bindings.columns("value")[0]
    values = [_num(v) for v in table.column_values(value_col) if not is_missing(v)]

    categories: list[str] = []
    counts: list[int] = []
    if values:
        lo, hi = min(values), max(values)
        if lo == hi:
            categories = [f"[{_fmt(lo)}, {_fmt(hi)}]"]
            counts = [len(values)]
        else:
            k = math.ceil(math.sqrt(len(values)))
            # Last edge pinned to the exact max so the closed last bin catches it.
            edges = [lo + i * (hi - lo) / k for i in range(k)] + [hi]
            counts = [0] * k
            for v in values:
                idx = min(bisect_right(edges, v) - 1, k - 1)
                counts[idx] += 1
            for i in range(k):
                close = "]" if i == k - 1 else ")"
                categories.append(f"[{_fmt(edges[i])}, {_fmt(edges[i + 1])}{close}")

    return ChartSpec(
        idiom=IdiomKind.HISTOGRAM,
        title=title,
        x_axis=Axis(label=value_col, value_kind="bins"),
        y_axis=Axis(label="frequency", value_kind="count"),
        categories=tuple(categories),
        series=(Series(name=value_col, points=tuple(counts)),),
    )


def _quantile(sorted_values: Sequence[float | int], q: float) -> float | int:
    """Linearly interpolated quantile over the inclusive range (type 7)."""
    n = len(sorted_values)
    if n == 1:
        return sorted_values[0]
    h = (n - 1) * q
    lo = math.floor(h)
    hi = min(lo + 1, n - 1)
    value = sorted_values[lo] + (sorted_values[hi] - sorted_values[lo]) * (h - lo)
    return int(value) if float(value).is_integer() else value


FIVE_NUMBER_LABELS = ("min", "q1", "median", "q3", "max")


def _box_plot(table: DataTable, bindings: BindingSet, title: str) -> ChartSpec:
    value_cols = bindings.columns("value")
    series = []
    notes = []
    for col in value_cols:
        values = sorted(_num(v) for v in table.column_values(col) if not is_missing(v))
        if not values:
            notes.append(f"column {col!r} skipped: no values")
            continue
        points = tuple(_quantile(values, q) for q in (0.0, 0.25, 0.5, 0.75, 1.0))
        series.append(Series(name=col, points=points))

    return ChartSpec(
        idiom=IdiomKind.BOX_PLOT,
        title=title,
        x_axis=Axis(label="statistic", value_kind="statistic"),
        y_axis=Axis(label=", ".join(value_cols), value_kind="numerical"),
        categories=FIVE_NUMBER_LABELS,
        series=tuple(series),
        notes=tuple(notes),
    )


def _heatmap(table: DataTable, bindings: BindingSet, title: str) -> ChartSpec:
    row_col = bindings.columns("row")[0]
    col_col = bindings.columns("column")[0]
    value_col = bindings.columns("value")[0]
    ri = table.column_index(row_col)
    ci = table.column_index(col_col)
    vi = table.column_index(value_col)

    row_order = _category_order(table, row_col)
    col_order = _category_order(table, col_col)

    cells: dict[tuple[str, str], list[float | int]] = {}
    pairs: dict[tuple[str, str], int] = {}
    for row in table.rows:
        if is_missing(row[ri]) or is_missing(row[ci]):
            continue
        key = (row[ri], row[ci])
        pairs[key] = pairs.get(key, 0) + 1
        if not is_missing(row[vi]):
            cells.setdefault(key, []).append(_num(row[vi]))

    series = []
    for r in row_order:
        points: list[Point] = []
        for c in col_order:
            values = cells.get((r, c))
            points.append(_mean(values) if values else None)
        series.append(Series(name=r, points=tuple(points)))

    notes = [f"cell values from column {value_col!r}"]
    if any(n > 1 for n in pairs.values()):
        notes.append("duplicate (row, column) pairs aggregated by mean")

    return ChartSpec(
        idiom=IdiomKind.HEATMAP,
        title=title,
        x_axis=Axis(label=col_col, value_kind=table.column(col_col).type.value),
        y_axis=Axis(label=row_col, value_kind=table.column(row_col).type.value),
        categories=tuple(col_order),
        series=tuple(series),
        notes=tuple(notes),
    )


_CATEGORY_IDIOMS = {IdiomKind.BAR, IdiomKind.GROUPED_BAR, IdiomKind.STACKED_BAR, IdiomKind.RADAR}
_LINE_IDIOMS = {IdiomKind.LINE, IdiomKind.MULTI_LINE, IdiomKind.AREA}


def build_chart_spec(kind: IdiomKind, table: DataTable, bindings: BindingSet,
                     title: str, config: MappingConfig | None = None) -> ChartSpec:
    """Build the neutral chart document for a validated binding.

    Raises InvalidBinding when the bindings do not validate against the
    idiom's channel requirements, and NegativePieValue for pie/donut data
    with negative slice values.
    """
    config = config or default_config()
    kind = IdiomKind(kind)
    report = validate_binding(kind, table, bindings, config=config)
    if not report.valid:
        raise InvalidBinding(report.violations)

    if kind in _CATEGORY_IDIOMS:
        return _category_chart(kind, table, bindings.columns("x")[0],
                               bindings.columns("y"), title, gaps=False)
    if kind in _LINE_IDIOMS:
        return _category_chart(kind, table, bindings.columns("x")[0],
                               bindings.columns("y"), title, gaps=True)
    if kind in (IdiomKind.SCATTER, IdiomKind.BUBBLE):
        return _point_chart(kind, table, bindings, title)
    if kind in (IdiomKind.PIE, IdiomKind.DONUT):
        return _pie_chart(kind, table, bindings, title)
    if kind is IdiomKind.HISTOGRAM:
        return _histogram(table, bindings, title)
    if kind is IdiomKind.BOX_PLOT:
        return _box_plot(table, bindings, title)
    return _heatmap(table, bindings, title)


# ---------------------------------------------------------------------------
# Canonical JSON document
# ---------------------------------------------------------------------------

def _point_to_json(point: Point):
    if isinstance(point, tuple):
        return list(point)
    return point


def chart_spec_document(spec: ChartSpec) -> dict:
    return {
        "specVersion": SPEC_VERSION,
        "idiom": spec.idiom.value,
        "title": spec.title,
        "xAxis": {"label": spec.x_axis.label, "valueKind": spec.x_axis.value_kind},
        "yAxis": {"label": spec.y_axis.label, "valueKind": spec.y_axis.value_kind},
        "categories": list(spec.categories),
        "series": [{"name": s.name, "points": [_point_to_json(p) for p in s.points]} for s in spec.series],
        "slices": [{"label": s.label, "value": s.value} for s in spec.slices],
        "notes": list(spec.notes),
    }


def serialize_chart_spec(spec: ChartSpec) -> str:
    """Canonical JSON text: sorted keys, compact, byte-stable."""
    return canonical_json(chart_spec_document(spec))


def parse_chart_spec(text: str) -> ChartSpec:
    doc = json.loads(text)
    if doc.get("specVersion") != SPEC_VERSION:
        raise ChartSpecError(f"unsupported specVersion: {doc.get('specVersion')!r}")

    def point(p):
        return tuple(p) if isinstance(p, list) else p

    return ChartSpec(
        idiom=IdiomKind(doc["idiom"]),
        title=doc["title"],
        x_axis=Axis(label=doc["xAxis"]["label"], value_kind=doc["xAxis"]["valueKind"]),
        y_axis=Axis(label=doc["yAxis"]["label"], value_kind=doc["yAxis"]["valueKind"]),
        categories=tuple(doc["categories"]),
        series=tuple(Series(name=s["name"], points=tuple(point(p) for p in s["points"]))
                     for s in doc["series"]),
        slices=tuple(Slice(label=s["label"], value=s["value"]) for s in doc["slices"]),
        notes=tuple(doc["notes"]),
    )
