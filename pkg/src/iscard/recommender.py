"""Idiom recommendation and data-to-channel binding validation.

Two rule tables drive recommendations: a task-to-idiom shortlist (which
idioms suit which analysis task) and the per-idiom channel requirements
(which column types each visual channel admits). Task recommendations are
a direct table lookup. Data recommendations are computed by channel
satisfiability: an idiom fits a table when some assignment of distinct
columns can fill every channel's minimum requirement. Recommendations
annotate the full catalog, they never filter it.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Mapping, Sequence

from .cards import BindingSet, IdiomKind, TaskKind
from .catalog import ChannelRequirement, IdiomCatalogEntry, MappingConfig, default_config
from .tabular import ColumnType, DataSignature, DataTable


class Level(str, Enum):
    RECOMMENDED = "recommended"
    PARTIALLY_COMPATIBLE = "partiallyCompatible"
    NOT_RECOMMENDED = "notRecommended"


_LEVEL_RANK = {Level.RECOMMENDED: 0, Level.PARTIALLY_COMPATIBLE: 1, Level.NOT_RECOMMENDED: 2}


@dataclass(frozen=True)
class Recommendation:
    kind: IdiomKind
    level: Level
    reasons: tuple[str, ...]


class UnknownTask(ValueError):
    def __init__(self, value: object) -> None:
        super().__init__(f"unknown task: {value!r}")


class UnknownIdiom(ValueError):
    def __init__(self, value: object) -> None:
        super().__init__(f"unknown idiom: {value!r}")


class NoInput(ValueError):
    def __init__(self) -> None:
        super().__init__("recommendation needs a task and/or a data signature")


@dataclass(frozen=True)
class Violation:
    channel: str
    rule: str  # unknownChannel | unknownColumn | duplicateColumn | arity | type
    message: str
    column: str | None = None


@dataclass(frozen=True)
class BindingReport:
    valid: bool
    violations: tuple[Violation, ...] = ()


def _coerce_task(task: TaskKind | str) -> TaskKind:
    if isinstance(task, TaskKind):
        return task
    try:
        return TaskKind(task)
    except ValueError as exc:
        raise UnknownTask(task) from exc


def _coerce_idiom(kind: IdiomKind | str) -> IdiomKind:
    if isinstance(kind, IdiomKind):
        return kind
    try:
        return IdiomKind(kind)
    except ValueError as exc:
        raise UnknownIdiom(kind) from exc


def channel_requirements(kind: IdiomKind | str,
                         config: MappingConfig | None = None) -> tuple[ChannelRequirement, ...]:
    """The catalog's channel requirements for one idiom."""
    config = config or default_config()
    return config.entry(_coerce_idiom(kind)).channels


# ---------------------------------------------------------------------------
# Binding validation
# ---------------------------------------------------------------------------

def _describe_types(types: Sequence[ColumnType]) -> str:
    names = {
        ColumnType.CATEGORICAL: "categorical",
        ColumnType.CATEGORICAL_ORDERED: "ordered categorical",
        ColumnType.NUMERICAL: "numerical",
    }
    return " or ".join(names[t] for t in types)


def validate_binding(kind: IdiomKind | str, table: DataTable, bindings: BindingSet,
                     config: MappingConfig | None = None) -> BindingReport:
    """Check a binding set against an idiom's channel requirements.

    Violations are the return value, not faults: every required channel must
    be filled within its arity, every assigned column must exist and carry
    an admissible type, no column may serve two channels, and no assignment
    may target a channel the idiom does not have.
    """
    config = config or default_config()
    entry = config.entry(_coerce_idiom(kind))
    violations: list[Violation] = []

    column_types = {c.name: c.type for c in table.columns}

    seen: dict[str, str] = {}  # column -> first channel that claimed it
    for channel_name, columns in bindings.assignments:
        requirement = entry.channel(channel_name)
        if requirement is None:
            violations.append(Violation(
                channel=channel_name,
                rule="unknownChannel",
                message=f"{entry.label} has no channel {channel_name!r}",
            ))
            continue
        for column in columns:
            if column in seen and seen[column] != channel_name:
                violations.append(Violation(
                    channel=channel_name,
                    rule="duplicateColumn",
                    column=column,
                    message=f"column {column!r} is already assigned to channel {seen[column]!r}",
                ))
                continue
            seen[column] = channel_name
            ctype = column_types.get(column)
            if ctype is None:
                violations.append(Violation(
                    channel=channel_name,
                    rule="unknownColumn",
                    column=column,
                    message=f"column {column!r} does not exist in the dataset",
                ))
            elif not requirement.admits(ctype):
                violations.append(Violation(
                    channel=channel_name,
                    rule="type",
                    column=column,
                    message=(
                        f"channel {channel_name!r} admits {_describe_types(requirement.admissible_types)} "
                        f"columns; {column!r} is {_describe_types([ctype])}"
                    ),
                ))

    for requirement in entry.channels:
        count = len(bindings.columns(requirement.name))
        if not requirement.within_arity(count):
            bound = "unbounded" if requirement.max_columns is None else requirement.max_columns
            violations.append(Violation(
                channel=requirement.name,
                rule="arity",
                message=(
                    f"channel {requirement.name!r} needs between {requirement.min_columns} "
                    f"and {bound} column(s); got {count}"
                ),
            ))

    return BindingReport(valid=not violations, violations=tuple(violations))


# ---------------------------------------------------------------------------
# Data-driven compatibility (channel satisfiability)
# ---------------------------------------------------------------------------

def _type_counts(signature: DataSignature) -> dict[ColumnType, int]:
    return {
        ColumnType.CATEGORICAL: signature.n_categorical,
        ColumnType.CATEGORICAL_ORDERED: signature.n_ordered,
        ColumnType.NUMERICAL: signature.n_numerical,
    }


def _satisfiability(entry: IdiomCatalogEntry,
                    counts: Mapping[ColumnType, int]) -> tuple[bool, str]:
    """Decide whether distinct columns can fill every channel minimum.

    Feasibility of this assignment problem reduces to a cut condition over
    the three column types: for every subset S of types, the joint demand of
    channels admitting only types in S must not exceed the column supply in
    S. With integral supplies and demands the condition is exact.
    """
    types = list(ColumnType)
    for mask in range(1, 2 ** len(types)):
        subset = {t for i, t in enumerate(types) if mask >> i & 1}
        needy = [ch for ch in entry.channels
                 if ch.min_columns > 0 and set(ch.admissible_types) <= subset]
        demand = sum(ch.min_columns for ch in needy)
        supply = sum(counts[t] for t in subset)
        if demand > supply:
            kinds = _describe_types(sorted(subset, key=types.index))
            if len(needy) == 1:
                ch = needy[0]
                return False, (
                    f"channel {ch.name!r} needs {ch.min_columns} {_describe_types(ch.admissible_types)} "
                    f"column(s); the table has {supply}"
                )
            names = ", ".join(repr(ch.name) for ch in needy)
            return False, (
                f"channels {names} together need {demand} {kinds} column(s); "
                f"the table has {supply}"
            )
    return True, "the table's columns can fill every required channel"


def _ordered(recommendations: list[Recommendation],
             config: MappingConfig) -> list[Recommendation]:
    return sorted(
        recommendations,
        key=lambda r: (_LEVEL_RANK[r.level], config.catalog_index(r.kind)),
    )


def recommend_by_task(task: TaskKind | str,
                      config: MappingConfig | None = None) -> list[Recommendation]:
    """Annotate the full catalog with task suitability (table lookup)."""
    config = config or default_config()
    task = _coerce_task(task)
    label = config.task_entry(task).label
    shortlist = set(config.task_idioms[task])
    out = []
    for entry in config.idioms:
        if entry.kind in shortlist:
            out.append(Recommendation(
                kind=entry.kind,
                level=Level.RECOMMENDED,
                reasons=(f"{entry.label} suits the task '{label}'",),
            ))
        else:
            out.append(Recommendation(
                kind=entry.kind,
                level=Level.NOT_RECOMMENDED,
                reasons=(f"not in the idiom shortlist for task '{label}'",),
            ))
    return _ordered(out, config)


def recommend_by_data(signature: DataSignature | Sequence[int],
                      table: DataTable | None = None,
                      config: MappingConfig | None = None) -> list[Recommendation]:
    """Annotate the full catalog with data compatibility.

    An idiom is recommended when at least one assignment of the table's
    columns satisfies all of its channel requirements. Columns of the same
    type are interchangeable here, so only the signature matters; passing
    ``table`` additionally asserts the signature belongs to it.
    """
    config = config or default_config()
    signature = DataSignature(*signature)
    if table is not None:
        from .tabular import data_signature

        if data_signature(table) != signature:
            raise ValueError("signature does not match the supplied table")
    counts = _type_counts(signature)
    out = []
    for entry in config.idioms:
        feasible, reason = _satisfiability(entry, counts)
        level = Level.RECOMMENDED if feasible else Level.NOT_RECOMMENDED
        out.append(Recommendation(kind=entry.kind, level=level, reasons=(reason,)))
    return _ordered(out, config)


def recommend(task: TaskKind | str | None = None,
              signature: DataSignature | Sequence[int] | None = None,
              config: MappingConfig | None = None) -> list[Recommendation]:
    """Combined recommendation over a task and/or a data signature.

    With one input this delegates. With both, an idiom is recommended only
    when both inputs agree; a single-side match is partially compatible,
    with reasons naming which input matched.
    """
    config = config or default_config()
    if task is None and signature is None:
        raise NoInput()
    if signature is None:
        return recommend_by_task(task, config)
    if task is None:
        return recommend_by_data(signature, config=config)

    by_task = {r.kind: r for r in recommend_by_task(task, config)}
    by_data = {r.kind: r for r in recommend_by_data(signature, config=config)}
    out = []
    for entry in config.idioms:
        t = by_task[entry.kind]
        d = by_data[entry.kind]
        t_hit = t.level is Level.RECOMMENDED
        d_hit = d.level is Level.RECOMMENDED
        if t_hit and d_hit:
            level = Level.RECOMMENDED
        elif t_hit or d_hit:
            level = Level.PARTIALLY_COMPATIBLE
        else:
            level = Level.NOT_RECOMMENDED
        reasons = tuple(f"task: {r}" for r in t.reasons) + tuple(f"data: {r}" for r in d.reasons)
        out.append(Recommendation(kind=entry.kind, level=level, reasons=reasons))
    return _ordered(out, config)


def recommendations_document(recommendations: Sequence[Recommendation]) -> list[dict]:
    """Wire shape shared by the API and the CLI's JSON mode."""
    return [
        {"idiom": r.kind.value, "level": r.level.value, "reasons": list(r.reasons)}
        for r in recommendations
    ]
