"""Filesystem persistence for cards and datasets.

Layout under one root directory:

    cards/<card-id>.json          one canonical card document per card
    datasets/<dataset-id>/
        data.csv                  dataset bytes exactly as uploaded
        schema.json               typed-column sidecar (the Data Abstraction)
    index.json                    listing cache, rebuildable from cards/

Writes are atomic (temp file + rename) so a crash mid-save never corrupts
an existing document. Mutations are serialized behind one in-process lock;
reads work off immutable snapshots.
"""

import json
import logging
import os
import re
import threading
import uuid
from dataclasses import dataclass
from pathlib import Path

from .cards import IndicatorCard, card_from_document, card_to_document
from .jsonutil import canonical_json_bytes
from .tabular import DataTable, schema_document, serialize_csv, table_from_schema

logger = logging.getLogger(__name__)

_SAFE_ID_RE = re.compile(r"^[A-Za-z0-9_-]{1,64}$")


class StoreError(Exception):
    code = "storeError"


class NotFound(StoreError):
    code = "notFound"

    def __init__(self, kind: str, item_id: str) -> None:
        self.kind = kind
        self.item_id = item_id
        super().__init__(f"{kind} {item_id!r} not found")


class ReferencedDataset(StoreError):
    code = "referencedDataset"

    def __init__(self, dataset_id: str, card_ids: list[str]) -> None:
        super().__init__(
            f"dataset {dataset_id!r} is referenced by card(s) {', '.join(card_ids)}"
        )


class IOFailure(StoreError):
    code = "ioFailure"

    def __init__(self, detail: str) -> None:
        super().__init__(f"storage failure: {detail}")


@dataclass(frozen=True)
class CardSummary:
    id: str
    name: str
    idiom: str | None
    updated_at: str  # ISO-8601

    def as_dict(self) -> dict:
        return {"id": self.id, "name": self.name, "idiom": self.idiom,
                "updatedAt": self.updated_at}


def _atomic_write(path: Path, data: bytes) -> None:
    tmp = path.with_name(f"{path.name}.tmp-{uuid.uuid4().hex}")
    try:
        with open(tmp, "wb") as fh:
            fh.write(data)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)
    except OSError as exc:
        tmp.unlink(missing_ok=True)
        raise IOFailure(str(exc)) from exc


def _check_id(kind: str, item_id: str) -> None:
    if not _SAFE_ID_RE.match(item_id or ""):
        raise NotFound(kind, item_id)


class Store:
    def __init__(self, root: str | Path) -> None:
        self.root = Path(root)
        self.cards_dir = self.root / "cards"
        self.datasets_dir = self.root / "datasets"
        self.index_path = self.root / "index.json"
        self.cards_dir.mkdir(parents=True, exist_ok=True)
        self.datasets_dir.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()

    # -- cards --------------------------------------------------------------

    def save_card(self, card: IndicatorCard) -> IndicatorCard:
        """Persist a card; its referenced dataset must exist (or be unset)."""
        _check_id("card", card.id)
        if card.dataset_id is not None and not self.dataset_exists(card.dataset_id):
            raise NotFound("dataset", card.dataset_id)
        with self._lock:
            doc = card_to_document(card)
            _atomic_write(self.cards_dir / f"{card.id}.json", canonical_json_bytes(doc))
            entries = [e for e in self._load_index() if e["id"] != card.id]
            entries.append({"id": doc["id"], "name": doc["name"],
                            "idiom": doc["idiom"], "updatedAt": doc["updatedAt"]})
            self._write_index(self._sorted_entries(entries))
        return card

    def load_card(self, card_id: str) -> IndicatorCard:
        _check_id("card", card_id)
        path = self.cards_dir / f"{card_id}.json"
        if not path.exists():
            raise NotFound("card", card_id)
        card = card_from_document(json.loads(path.read_text("utf-8")))
        if self.is_dangling(card):
            logger.warning("card %s references missing dataset %s", card.id, card.dataset_id)
        return card

    def delete_card(self, card_id: str) -> None:
        _check_id("card", card_id)
        path = self.cards_dir / f"{card_id}.json"
        if not path.exists():
            raise NotFound("card", card_id)
        with self._lock:
            path.unlink()
            self._write_index([e for e in self._load_index() if e["id"] != card_id])

    def list_cards(self) -> list[CardSummary]:
        """Summaries ordered by most recent update first."""
        try:
            entries = json.loads(self.index_path.read_text("utf-8"))
        except (OSError, json.JSONDecodeError):
            with self._lock:
                entries = self._scan_cards()
                self._write_index(entries)
        return [CardSummary(id=e["id"], name=e["name"], idiom=e["idiom"],
                            updated_at=e["updatedAt"]) for e in entries]

    def is_dangling(self, card: IndicatorCard) -> bool:
        return card.dataset_id is not None and not self.dataset_exists(card.dataset_id)

    # -- datasets -----------------------------------------------------------

    def save_dataset(self, table: DataTable, csv_bytes: bytes | None = None) -> str:
        """Store a dataset and return its fresh id.

        ``csv_bytes`` preserves upload bytes exactly; generated tables are
        serialized to CSV here.
        """
        dataset_id = uuid.uuid4().hex
        directory = self.datasets_dir / dataset_id
        with self._lock:
            directory.mkdir(parents=True, exist_ok=True)
            _atomic_write(directory / "data.csv",
                          csv_bytes if csv_bytes is not None else serialize_csv(table))
            _atomic_write(directory / "schema.json",
                          canonical_json_bytes(schema_document(table)))
        return dataset_id

    def update_dataset_schema(self, dataset_id: str, table: DataTable) -> None:
        """Rewrite a dataset's schema sidecar (manual type overrides)."""
        _check_id("dataset", dataset_id)
        directory = self.datasets_dir / dataset_id
        if not directory.exists():
            raise NotFound("dataset", dataset_id)
        with self._lock:
            _atomic_write(directory / "schema.json",
                          canonical_json_bytes(schema_document(table)))

    def load_dataset(self, dataset_id: str) -> DataTable:
        _check_id("dataset", dataset_id)
        directory = self.datasets_dir / dataset_id
        csv_path = directory / "data.csv"
        schema_path = directory / "schema.json"
        if not csv_path.exists() or not schema_path.exists():
            raise NotFound("dataset", dataset_id)
        table = table_from_schema(csv_path.read_bytes(),
                                  json.loads(schema_path.read_text("utf-8")))
        return DataTable(
            columns=table.columns,
            rows=table.rows,
            order_dictionaries=table.order_dictionaries,
            dataset_id=dataset_id,
            warnings=table.warnings,
        )

    def dataset_csv_bytes(self, dataset_id: str) -> bytes:
        _check_id("dataset", dataset_id)
        path = self.datasets_dir / dataset_id / "data.csv"
        if not path.exists():
            raise NotFound("dataset", dataset_id)
        return path.read_bytes()

    def dataset_exists(self, dataset_id: str) -> bool:
        if not _SAFE_ID_RE.match(dataset_id or ""):
            return False
        return (self.datasets_dir / dataset_id / "data.csv").exists()

    def delete_dataset(self, dataset_id: str) -> None:
        """Remove a dataset; refused while any card references it."""
        _check_id("dataset", dataset_id)
        directory = self.datasets_dir / dataset_id
        if not directory.exists():
            raise NotFound("dataset", dataset_id)
        referencing = [c.id for c in map(self._read_card_file, self._card_paths())
                       if c is not None and c.dataset_id == dataset_id]
        if referencing:
            raise ReferencedDataset(dataset_id, referencing)
        with self._lock:
            for child in directory.iterdir():
                child.unlink()
            directory.rmdir()

    # -- index --------------------------------------------------------------

    def rebuild_index(self) -> list[CardSummary]:
        """Recompute index.json from the cards directory."""
        with self._lock:
            entries = self._scan_cards()
            self._write_index(entries)
        return [CardSummary(id=e["id"], name=e["name"], idiom=e["idiom"],
                            updated_at=e["updatedAt"]) for e in entries]

    def _card_paths(self) -> list[Path]:
        return sorted(self.cards_dir.glob("*.json"))

    def _read_card_file(self, path: Path) -> IndicatorCard | None:
        try:
            return card_from_document(json.loads(path.read_text("utf-8")))
        except (OSError, ValueError, KeyError):
            logger.warning("skipping unreadable card file %s", path)
            return None

    def _load_index(self) -> list[dict]:
        """Current index entries; falls back to a directory scan."""
        try:
            return json.loads(self.index_path.read_text("utf-8"))
        except (OSError, json.JSONDecodeError):
            return self._scan_cards()

    @staticmethod
    def _sorted_entries(entries: list[dict]) -> list[dict]:
        entries.sort(key=lambda e: e["id"])
        entries.sort(key=lambda e: e["updatedAt"], reverse=True)
        return entries

    def _scan_cards(self) -> list[dict]:
        entries = []
        for path in self._card_paths():
            card = self._read_card_file(path)
            if card is None:
                continue
            doc = card_to_document(card)
            entries.append({"id": doc["id"], "name": doc["name"],
                            "idiom": doc["idiom"], "updatedAt": doc["updatedAt"]})
        return self._sorted_entries(entries)

    def _write_index(self, entries: list[dict]) -> None:
        _atomic_write(self.index_path, canonical_json_bytes(entries))
