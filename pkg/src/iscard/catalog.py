"""Loading and validation of the idiom/task mapping configuration.

The task vocabulary, the idiom catalog with per-channel requirements, and
the task-to-idiom suitability edges all ship as one declarative JSON file
(``data/mapping_config.json``). Deployments may point the service at an
edited copy; the file is validated on load and swapped in atomically as a
whole.
"""

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .cards import IdiomKind, TaskAbstraction, TaskKind
from .tabular import ColumnType


class ConfigError(ValueError):
    """The mapping configuration violates its schema."""


@dataclass(frozen=True)
class ChannelRequirement:
    """What one visual channel of an idiom accepts.

    ``max_columns=None`` means unbounded. ``admissible_types`` is kept in
    declaration order for stable wire output.
    """

    name: str
    min_columns: int
    max_columns: int | None
    admissible_types: tuple[ColumnType, ...]
    required: bool

    def admits(self, ctype: ColumnType) -> bool:
        return ctype in self.admissible_types

    def within_arity(self, count: int) -> bool:
        if count < self.min_columns:
            return False
        return self.max_columns is None or count <= self.max_columns


@dataclass(frozen=True)
class IdiomCatalogEntry:
    kind: IdiomKind
    label: str
    illustration_ref: str
    channels: tuple[ChannelRequirement, ...]

    def channel(self, name: str) -> ChannelRequirement | None:
        for ch in self.channels:
            if ch.name == name:
                return ch
        return None


@dataclass(frozen=True)
class MappingConfig:
    """The validated rule tables, immutable after load."""

    version: int
    tasks: tuple[TaskAbstraction, ...]
    task_illustrations: dict[TaskKind, str]
    idioms: tuple[IdiomCatalogEntry, ...]
    task_idioms: dict[TaskKind, tuple[IdiomKind, ...]]

    def entry(self, kind: IdiomKind) -> IdiomCatalogEntry:
        for e in self.idioms:
            if e.kind is kind:
                return e
        raise KeyError(kind)

    def task_entry(self, task: TaskKind) -> TaskAbstraction:
        for t in self.tasks:
            if t.task is task:
                return t
        raise KeyError(task)

    def catalog_index(self, kind: IdiomKind) -> int:
        for i, e in enumerate(self.idioms):
            if e.kind is kind:
                return i
        raise KeyError(kind)


def _parse_channel(raw: dict, idiom: str) -> ChannelRequirement:
    try:
        name = raw["name"]
        min_columns = int(raw["minColumns"])
        max_columns = raw["maxColumns"]
        types = tuple(ColumnType(t) for t in raw["admissibleTypes"])
        required = bool(raw["required"])
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"idiom {idiom!r}: malformed channel entry: {exc}") from exc
    if max_columns is not None:
        max_columns = int(max_columns)
        if min_columns > max_columns:
            raise ConfigError(f"idiom {idiom!r}, channel {name!r}: minColumns > maxColumns")
    if min_columns < 0:
        raise ConfigError(f"idiom {idiom!r}, channel {name!r}: negative minColumns")
    if required and min_columns < 1:
        raise ConfigError(f"idiom {idiom!r}, channel {name!r}: required channel needs minColumns >= 1")
    if not types:
        raise ConfigError(f"idiom {idiom!r}, channel {name!r}: empty admissibleTypes")
    return ChannelRequirement(
        name=name,
        min_columns=min_columns,
        max_columns=max_columns,
        admissible_types=types,
        required=required,
    )


def _parse_config(doc: dict) -> MappingConfig:
    version = int(doc.get("version", 0))
    if version != 1:
        raise ConfigError(f"unsupported mapping config version: {version}")

    tasks: list[TaskAbstraction] = []
    illustrations: dict[TaskKind, str] = {}
    for raw in doc.get("tasks", []):
        try:
            kind = TaskKind(raw["task"])
        except (KeyError, ValueError) as exc:
            raise ConfigError(f"malformed task entry: {raw!r}") from exc
        label = raw.get("label", "")
        description = raw.get("description", "")
        if not label or not description:
            raise ConfigError(f"task {kind.value!r}: label and description must be nonempty")
        tasks.append(TaskAbstraction(task=kind, label=label, description=description))
        illustrations[kind] = raw.get("illustrationRef", "")
    task_kinds = [t.task for t in tasks]
    if sorted(task_kinds, key=lambda k: k.value) != sorted(TaskKind, key=lambda k: k.value):
        raise ConfigError("task list must cover every task kind exactly once")

    idioms: list[IdiomCatalogEntry] = []
    for raw in doc.get("idioms", []):
        try:
            kind = IdiomKind(raw["idiom"])
        except (KeyError, ValueError) as exc:
            raise ConfigError(f"malformed idiom entry: {raw!r}") from exc
        channels = tuple(_parse_channel(ch, kind.value) for ch in raw.get("channels", []))
        names = [c.name for c in channels]
        if len(set(names)) != len(names):
            raise ConfigError(f"idiom {kind.value!r}: duplicate channel names")
        if not any(c.required for c in channels):
            raise ConfigError(f"idiom {kind.value!r}: needs at least one required channel")
        idioms.append(
            IdiomCatalogEntry(
                kind=kind,
                label=raw.get("label", kind.value),
                illustration_ref=raw.get("illustrationRef", ""),
                channels=channels,
            )
        )
    idiom_kinds = [e.kind for e in idioms]
    if sorted(idiom_kinds, key=lambda k: k.value) != sorted(IdiomKind, key=lambda k: k.value):
        raise ConfigError("idiom catalog must cover every idiom kind exactly once")

    edges: dict[TaskKind, tuple[IdiomKind, ...]] = {}
    raw_edges = doc.get("taskIdioms", {})
    for task_value, idiom_values in raw_edges.items():
        try:
            task = TaskKind(task_value)
            kinds = tuple(IdiomKind(v) for v in idiom_values)
        except ValueError as exc:
            raise ConfigError(f"malformed taskIdioms entry {task_value!r}") from exc
        if len(set(kinds)) != len(kinds):
            raise ConfigError(f"taskIdioms for {task_value!r} lists an idiom twice")
        edges[task] = kinds
    for task in TaskKind:
        edges.setdefault(task, ())

    return MappingConfig(
        version=version,
        tasks=tuple(tasks),
        task_illustrations=illustrations,
        idioms=tuple(idioms),
        task_idioms=edges,
    )


def load_mapping_config(path: str | Path | None = None) -> MappingConfig:
    """Load the mapping config from ``path``, or the packaged default."""
    if path is None:
        raw = resources.files("iscard.data").joinpath("mapping_config.json").read_text("utf-8")
    else:
        raw = Path(path).read_text("utf-8")
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"mapping config is not valid JSON: {exc}") from exc
    return _parse_config(doc)


_DEFAULT: MappingConfig | None = None


def default_config() -> MappingConfig:
    """The packaged mapping config, loaded once."""
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = load_mapping_config()
    return _DEFAULT
