import json
import socket
import subprocess
import sys
import time
from pathlib import Path

import httpx
import pytest
from click.testing import CliRunner
from fastapi.testclient import TestClient

from iscard.api import AppConfig, create_app
from iscard.cards import BindingSet, IdiomKind, TaskKind, card_to_document, create_card, update_card
from iscard.cli import main
from iscard.store import Store
from iscard.tabular import parse_csv


@pytest.fixture
def runner():
    return CliRunner()


def _write_scenario(tmp_path, scenario_csv) -> Path:
    path = tmp_path / "scenario.csv"
    path.write_bytes(scenario_csv)
    return path


# ---------------------------------------------------------------------------
# infer
# ---------------------------------------------------------------------------

def test_infer_prints_schema(runner, tmp_path, scenario_csv):
    path = _write_scenario(tmp_path, scenario_csv)
    result = runner.invoke(main, ["infer", str(path)])
    assert result.exit_code == 0
    schema = json.loads(result.output)
    assert [c["type"] for c in schema["columns"]] == ["categorical", "numerical", "numerical"]


def test_infer_ragged_csv_fails_with_stderr(runner, tmp_path):
    path = tmp_path / "ragged.csv"
    path.write_bytes(b"a,b\n1,2\n3")
    result = runner.invoke(main, ["infer", str(path)])
    assert result.exit_code == 1
    assert "row 2" in result.output


def test_infer_empty_file_fails(runner, tmp_path):
    path = tmp_path / "empty.csv"
    path.write_bytes(b"")
    result = runner.invoke(main, ["infer", str(path)])
    assert result.exit_code == 1


# ---------------------------------------------------------------------------
# recommend
# ---------------------------------------------------------------------------

def test_recommend_task_text_output(runner):
    result = runner.invoke(main, ["recommend", "--task", "comparison"])
    assert result.exit_code == 0
    lines = [l for l in result.output.splitlines() if l.strip()]
    assert len(lines) == 14
    bar_line = next(l for l in lines if " bar " in f" {l} ")
    assert bar_line.startswith("recommended")


def test_recommend_without_inputs_is_usage_error(runner):
    result = runner.invoke(main, ["recommend"])
    assert result.exit_code == 2


def test_recommend_json_parity_with_api(runner, tmp_path, scenario_csv):
    path = _write_scenario(tmp_path, scenario_csv)
    result = runner.invoke(main, ["recommend", "--task", "comparison",
                                  "--data", str(path), "--json"])
    assert result.exit_code == 0

    app = create_app(AppConfig(data_dir=tmp_path / "srv"))
    with TestClient(app) as client:
        dataset_id = client.post("/api/datasets", content=scenario_csv,
                                 headers={"content-type": "text/csv"}).json()["datasetId"]
        api_bytes = client.post("/api/recommendations",
                                json={"task": "comparison", "datasetId": dataset_id}).content
    assert result.output.encode() == api_bytes


def test_recommend_data_only_delegates(runner, tmp_path, scenario_csv):
    path = _write_scenario(tmp_path, scenario_csv)
    result = runner.invoke(main, ["recommend", "--data", str(path), "--json"])
    assert result.exit_code == 0
    from iscard.recommender import recommend_by_data, recommendations_document
    from iscard.tabular import DataSignature

    expected = recommendations_document(recommend_by_data(DataSignature(1, 0, 2)))
    assert json.loads(result.output) == expected


# ---------------------------------------------------------------------------
# validate / preview
# ---------------------------------------------------------------------------

def _complete_card_setup(tmp_path, scenario_csv):
    data_dir = tmp_path / "store"
    store = Store(data_dir)
    table = parse_csv(scenario_csv)
    dataset_id = store.save_dataset(table, csv_bytes=scenario_csv)
    table = store.load_dataset(dataset_id)
    card = create_card("Exercise performance")
    card = update_card(card, {
        "task": TaskKind.COMPARISON,
        "dataset_id": dataset_id,
        "idiom": IdiomKind.BAR,
        "bindings": BindingSet.of({"x": ["Exercises"],
                                   "y": ["Class Average Points", "My Points"]}),
    }, table=table)
    store.save_card(card)
    card_path = tmp_path / "card.json"
    card_path.write_text(json.dumps(card_to_document(card)), encoding="utf-8")
    return card_path, data_dir


def test_validate_complete_card_exits_zero(runner, tmp_path, scenario_csv):
    card_path, data_dir = _complete_card_setup(tmp_path, scenario_csv)
    result = runner.invoke(main, ["validate", str(card_path), "--data-dir", str(data_dir)])
    assert result.exit_code == 0
    assert "complete" in result.output


def test_validate_dangling_dataset_exits_one(runner, tmp_path, scenario_csv):
    card_path, data_dir = _complete_card_setup(tmp_path, scenario_csv)
    doc = json.loads(card_path.read_text())
    doc["datasetId"] = "gone"
    card_path.write_text(json.dumps(doc))
    result = runner.invoke(main, ["validate", str(card_path), "--data-dir", str(data_dir)])
    assert result.exit_code == 1
    assert "DanglingDataset" in result.output


def test_validate_draft_card_exits_one(runner, tmp_path, scenario_csv):
    _, data_dir = _complete_card_setup(tmp_path, scenario_csv)
    card_path = tmp_path / "draft.json"
    card_path.write_text(json.dumps(card_to_document(create_card("draft"))))
    result = runner.invoke(main, ["validate", str(card_path), "--data-dir", str(data_dir)])
    assert result.exit_code == 1
    assert "missing" in result.output


def test_validate_malformed_json_exits_two(runner, tmp_path):
    card_path = tmp_path / "broken.json"
    card_path.write_text("{not json")
    result = runner.invoke(main, ["validate", str(card_path), "--data-dir", str(tmp_path)])
    assert result.exit_code == 2


def test_preview_writes_golden_spec(runner, tmp_path, scenario_csv, golden_dir):
    card_path, data_dir = _complete_card_setup(tmp_path, scenario_csv)
    out = tmp_path / "spec.json"
    result = runner.invoke(main, ["preview", "--card", str(card_path),
                                  "--data-dir", str(data_dir), "--out", str(out)])
    assert result.exit_code == 0, result.output
    assert out.read_text("utf-8") == (golden_dir / "scenario_bar_spec.json").read_text("utf-8")


def test_preview_incomplete_card_exits_one(runner, tmp_path, scenario_csv):
    _, data_dir = _complete_card_setup(tmp_path, scenario_csv)
    card_path = tmp_path / "draft.json"
    card_path.write_text(json.dumps(card_to_document(create_card("draft"))))
    result = runner.invoke(main, ["preview", "--card", str(card_path),
                                  "--data-dir", str(data_dir),
                                  "--out", str(tmp_path / "x.json")])
    assert result.exit_code == 1


# ---------------------------------------------------------------------------
# serve
# ---------------------------------------------------------------------------

def _free_port() -> int:
    with socket.socket() as s:
        s.bind(("127.0.0.1", 0))
        return s.getsockname()[1]


def test_serve_port_taken_fails_cleanly(runner, tmp_path):
    blocker = socket.socket()
    blocker.bind(("127.0.0.1", 0))
    blocker.listen(1)
    port = blocker.getsockname()[1]
    try:
        result = runner.invoke(main, ["serve", "--port", str(port),
                                      "--data-dir", str(tmp_path / "d")])
        assert result.exit_code == 1
        assert "cannot bind" in result.output
    finally:
        blocker.close()


def test_serve_answers_task_catalog(tmp_path):
    port = _free_port()
    proc = subprocess.Popen(
        [sys.executable, "-m", "iscard.cli", "serve", "--port", str(port),
         "--data-dir", str(tmp_path / "served")],
        stdout=subprocess.DEVNULL, stderr=subprocess.DEVNULL,
    )
    try:
        deadline = time.time() + 15
        tasks = None
        while time.time() < deadline:
            try:
                tasks = httpx.get(f"http://127.0.0.1:{port}/api/tasks", timeout=1.0).json()
                break
            except Exception:
                time.sleep(0.2)
        assert tasks is not None, "server did not come up"
        assert len(tasks) == 7
    finally:
        proc.terminate()
        proc.wait(timeout=10)
