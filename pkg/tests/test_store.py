import json
import os
from datetime import datetime, timezone

import pytest

import iscard.store as store_module
from iscard.cards import BindingSet, IdiomKind, TaskKind, create_card, update_card
from iscard.store import IOFailure, NotFound, ReferencedDataset, Store
from iscard.tabular import parse_csv


@pytest.fixture
def store(tmp_path):
    return Store(tmp_path / "data")


def _stored_table(store, scenario_csv):
    table = parse_csv(scenario_csv)
    dataset_id = store.save_dataset(table, csv_bytes=scenario_csv)
    return dataset_id, store.load_dataset(dataset_id)


def test_card_save_load_round_trip(store, scenario_csv):
    dataset_id, table = _stored_table(store, scenario_csv)
    card = create_card("trip")
    card = update_card(card, {
        "task": TaskKind.COMPARISON,
        "dataset_id": dataset_id,
        "idiom": IdiomKind.BAR,
        "bindings": BindingSet.of({"x": ["Exercises"], "y": ["My Points"]}),
    }, table=table)
    store.save_card(card)
    assert store.load_card(card.id) == card


def test_delete_then_load_is_not_found(store):
    card = create_card("gone")
    store.save_card(card)
    store.delete_card(card.id)
    with pytest.raises(NotFound):
        store.load_card(card.id)
    with pytest.raises(NotFound):
        store.delete_card(card.id)


def test_list_orders_most_recently_updated_first(store):
    cards = []
    for i, second in enumerate((1, 30, 15)):
        card = create_card(f"card{i}")
        ts = datetime(2026, 1, 1, 12, 0, second, tzinfo=timezone.utc)
        card = type(card)(**{**card.__dict__, "created_at": ts, "updated_at": ts})
        store.save_card(card)
        cards.append(card)
    listed = store.list_cards()
    assert [s.name for s in listed] == ["card1", "card2", "card0"]
    assert listed[0].updated_at == "2026-01-01T12:00:30Z"


def test_index_rebuild_matches_incremental(store):
    for i in range(5):
        store.save_card(create_card(f"c{i}"))
    incremental = store.index_path.read_bytes()
    store.index_path.unlink()
    store.rebuild_index()
    assert store.index_path.read_bytes() == incremental


def test_list_recovers_from_missing_index(store):
    store.save_card(create_card("a"))
    store.index_path.unlink()
    assert [s.name for s in store.list_cards()] == ["a"]


def test_crash_between_temp_write_and_rename_preserves_existing(store, monkeypatch):
    card = create_card("victim")
    store.save_card(card)
    original_bytes = (store.cards_dir / f"{card.id}.json").read_bytes()

    def exploding_replace(src, dst):
        raise OSError("simulated crash before rename")

    monkeypatch.setattr(store_module.os, "replace", exploding_replace)
    tampered = update_card(card, {"name": "overwritten"})
    with pytest.raises(IOFailure):
        store.save_card(tampered)
    monkeypatch.undo()

    assert (store.cards_dir / f"{card.id}.json").read_bytes() == original_bytes
    assert store.load_card(card.id).name == "victim"


def test_partial_temp_file_never_corrupts_reads(store):
    card = create_card("solid")
    store.save_card(card)
    # Simulate a leftover temp file from a killed writer.
    junk = store.cards_dir / f"{card.id}.json.tmp-dead"
    junk.write_bytes(b'{"truncated')
    assert store.load_card(card.id) == card
    assert [s.id for s in store.rebuild_index()] == [card.id]


def test_dataset_round_trip_is_bit_exact(store, scenario_csv):
    dataset_id, table = _stored_table(store, scenario_csv)
    assert store.dataset_csv_bytes(dataset_id) == scenario_csv
    assert table.dataset_id == dataset_id
    assert [c.type.value for c in table.columns] == ["categorical", "numerical", "numerical"]


def test_schema_sidecar_governs_types(store, scenario_csv):
    from iscard.tabular import ColumnType, set_column_type

    dataset_id, table = _stored_table(store, scenario_csv)
    retyped = set_column_type(table, "My Points", ColumnType.CATEGORICAL)
    store.update_dataset_schema(dataset_id, retyped)
    loaded = store.load_dataset(dataset_id)
    assert loaded.column("My Points").type is ColumnType.CATEGORICAL
    assert loaded.column("My Points").inferred is False
    # CSV bytes untouched by a retype.
    assert store.dataset_csv_bytes(dataset_id) == scenario_csv


def test_save_card_requires_referenced_dataset(store):
    card = create_card("dangling")
    card = update_card(card, {"dataset_id": "doesnotexist"})
    with pytest.raises(NotFound):
        store.save_card(card)


def test_delete_referenced_dataset_is_refused(store, scenario_csv):
    dataset_id, table = _stored_table(store, scenario_csv)
    card = update_card(create_card("holder"), {"dataset_id": dataset_id}, table=table)
    store.save_card(card)
    with pytest.raises(ReferencedDataset):
        store.delete_dataset(dataset_id)
    store.delete_card(card.id)
    store.delete_dataset(dataset_id)
    assert not store.dataset_exists(dataset_id)


def test_dangling_dataset_detection(store, scenario_csv):
    dataset_id, table = _stored_table(store, scenario_csv)
    card = update_card(create_card("c"), {"dataset_id": dataset_id}, table=table)
    store.save_card(card)
    assert not store.is_dangling(card)
    # Remove the dataset behind the store's back.
    for child in (store.datasets_dir / dataset_id).iterdir():
        child.unlink()
    (store.datasets_dir / dataset_id).rmdir()
    assert store.is_dangling(store.load_card(card.id))


def test_path_traversal_ids_rejected(store):
    with pytest.raises(NotFound):
        store.load_card("../../etc/passwd")
    with pytest.raises(NotFound):
        store.load_dataset("a/b")


def test_index_content_is_derivable(store):
    for i in range(3):
        store.save_card(create_card(f"n{i}"))
    entries = json.loads(store.index_path.read_text("utf-8"))
    assert {e["id"] for e in entries} == {p.stem for p in store.cards_dir.glob("*.json")}
    assert set(entries[0]) == {"id", "name", "idiom", "updatedAt"}
