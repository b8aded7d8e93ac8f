"""Indicator card domain model and its order-free lifecycle.

A card pairs a goal/question with an indicator described by three
independently optional parts: an analysis task (why), a dataset reference
(what), and a chart idiom with channel bindings (how). Parts can be set in
any order; completeness is recomputed from the card's current state, never
from the order in which parts arrived.

Cards are immutable snapshots: every operation returns a new card.
"""

import uuid
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from enum import Enum
from typing import Any, Mapping

from .tabular import DataTable, UnknownColumn


class TaskKind(str, Enum):
    """Closed vocabulary of analysis tasks (the why)."""

    COMPARISON = "comparison"
    TREND_OVER_TIME = "trendOverTime"
    DISTRIBUTION = "distribution"
    PART_TO_WHOLE = "partToWhole"
    CORRELATION = "correlation"
    RANKING = "ranking"
    DEVIATION = "deviation"


class IdiomKind(str, Enum):
    """Closed vocabulary of chart idioms (the how)."""

    BAR = "bar"
    GROUPED_BAR = "groupedBar"
    STACKED_BAR = "stackedBar"
    LINE = "line"
    MULTI_LINE = "multiLine"
    AREA = "area"
    SCATTER = "scatter"
    BUBBLE = "bubble"
    PIE = "pie"
    DONUT = "donut"
    HISTOGRAM = "histogram"
    BOX_PLOT = "boxPlot"
    HEATMAP = "heatmap"
    RADAR = "radar"


@dataclass(frozen=True)
class TaskAbstraction:
    """A catalog entry for one analysis task."""

    task: TaskKind
    label: str
    description: str


class BindingError(ValueError):
    """Structurally invalid binding set (duplicates within a channel)."""


@dataclass(frozen=True)
class BindingSet:
    """Data-to-channel assignments: channel name -> ordered column names."""

    assignments: tuple[tuple[str, tuple[str, ...]], ...]

    @classmethod
    def of(cls, mapping: Mapping[str, Any]) -> "BindingSet":
        pairs = []
        for channel, columns in mapping.items():
            cols = tuple(columns)
            if len(set(cols)) != len(cols):
                raise BindingError(
                    f"channel {channel!r} assigns the same column more than once"
                )
            pairs.append((channel, cols))
        return cls(assignments=tuple(pairs))

    def as_dict(self) -> dict[str, list[str]]:
        return {channel: list(cols) for channel, cols in self.assignments}

    def columns(self, channel: str) -> tuple[str, ...]:
        for name, cols in self.assignments:
            if name == channel:
                return cols
        return ()

    def all_columns(self) -> list[str]:
        return [c for _, cols in self.assignments for c in cols]


class CardStatus(str, Enum):
    DRAFT = "draft"
    COMPLETE = "complete"


@dataclass(frozen=True)
class IndicatorCard:
    id: str
    name: str
    created_at: datetime
    updated_at: datetime
    goal: str = ""
    question: str = ""
    task: TaskKind | None = None
    dataset_id: str | None = None
    idiom: IdiomKind | None = None
    bindings: BindingSet | None = None
    status: CardStatus = CardStatus.DRAFT


@dataclass(frozen=True)
class Completeness:
    status: CardStatus
    missing: tuple[str, ...] = ()


# Field names a patch may touch, in the order missing-parts are reported.
PATCHABLE_FIELDS = ("name", "goal", "question", "task", "dataset_id", "idiom", "bindings")


def _now() -> datetime:
    """UTC wall clock at second precision."""
    return datetime.now(timezone.utc).replace(microsecond=0)


def create_card(name: str) -> IndicatorCard:
    """Start a fresh draft card; every indicator part is unset."""
    now = _now()
    return IndicatorCard(id=uuid.uuid4().hex, name=name, created_at=now, updated_at=now)


def card_completeness(card: IndicatorCard, table: DataTable | None = None,
                      config: Any = None) -> Completeness:
    """Evaluate the completeness invariant and name every unmet part.

    A card is complete when its name is nonempty, an idiom and a dataset are
    set, and the bindings validate against the idiom's channel requirements
    for that dataset. ``table`` is the resolved dataset (None when the card
    has no dataset or it cannot be resolved). A task is never required.
    """
    missing: list[str] = []
    if card.name.strip() == "":
        missing.append("name")
    if card.idiom is None:
        missing.append("idiom")
    if card.dataset_id is None:
        missing.append("dataset")
    bindings_ok = False
    if card.idiom is not None and card.bindings is not None and table is not None:
        from .recommender import validate_binding  # runtime import; recommender depends on this module

        bindings_ok = validate_binding(card.idiom, table, card.bindings, config=config).valid
    if not bindings_ok:
        missing.append("bindings")
    if missing:
        return Completeness(status=CardStatus.DRAFT, missing=tuple(missing))
    return Completeness(status=CardStatus.COMPLETE)


def update_card(card: IndicatorCard, patch: Mapping[str, Any],
                table: DataTable | None = None, config: Any = None) -> IndicatorCard:
    """Replace the patched fields and recompute status.

    Only the seven patchable fields may appear; setting any one part never
    requires another to be present. ``table`` is the dataset the resulting
    card references (if resolvable) and is used to re-validate bindings.

    Raises UnknownColumn when the resulting bindings name columns absent
    from the resolved dataset.
    """
    unknown = set(patch) - set(PATCHABLE_FIELDS)
    if unknown:
        raise ValueError(f"patch touches unknown fields: {sorted(unknown)}")

    changes: dict[str, Any] = dict(patch)
    updated = replace(card, **changes)

    if updated.bindings is not None and table is not None:
        known = set(table.column_names())
        for column in updated.bindings.all_columns():
            if column not in known:
                raise UnknownColumn(column)

    completeness = card_completeness(updated, table=table, config=config)
    now = max(_now(), card.updated_at, card.created_at)
    return replace(updated, status=completeness.status, updated_at=now)


# ---------------------------------------------------------------------------
# JSON document codec (persistence format == API wire shape)
# ---------------------------------------------------------------------------

def _format_ts(ts: datetime) -> str:
    return ts.astimezone(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def _parse_ts(text: str) -> datetime:
    return datetime.strptime(text, "%Y-%m-%dT%H:%M:%SZ").replace(tzinfo=timezone.utc)


def card_to_document(card: IndicatorCard) -> dict:
    """Canonical JSON document for a card."""
    return {
        "id": card.id,
        "name": card.name,
        "goal": card.goal,
        "question": card.question,
        "task": card.task.value if card.task else None,
        "datasetId": card.dataset_id,
        "idiom": card.idiom.value if card.idiom else None,
        "bindings": card.bindings.as_dict() if card.bindings else None,
        "status": card.status.value,
        "createdAt": _format_ts(card.created_at),
        "updatedAt": _format_ts(card.updated_at),
    }


def card_from_document(doc: Mapping[str, Any]) -> IndicatorCard:
    bindings = doc.get("bindings")
    return IndicatorCard(
        id=doc["id"],
        name=doc.get("name", ""),
        goal=doc.get("goal", ""),
        question=doc.get("question", ""),
        task=TaskKind(doc["task"]) if doc.get("task") else None,
        dataset_id=doc.get("datasetId"),
        idiom=IdiomKind(doc["idiom"]) if doc.get("idiom") else None,
        bindings=BindingSet.of(bindings) if bindings else None,
        status=CardStatus(doc.get("status", "draft")),
        created_at=_parse_ts(doc["createdAt"]),
        updated_at=_parse_ts(doc["updatedAt"]),
    )
