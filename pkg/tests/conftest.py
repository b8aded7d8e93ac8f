import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from iscard.catalog import default_config
from iscard.tabular import parse_csv

GOLDEN_DIR = Path(__file__).parent / "golden"

SCENARIO_CSV = (
    b"Exercises,Class Average Points,My Points\r\n"
    b"Ex1,7.5,9\r\n"
    b"Ex2,6,4\r\n"
    b"Ex3,8,10\r\n"
)


@pytest.fixture
def scenario_csv() -> bytes:
    return SCENARIO_CSV


@pytest.fixture
def scenario_table():
    return parse_csv(SCENARIO_CSV)


@pytest.fixture
def config():
    return default_config()


@pytest.fixture
def golden_dir() -> Path:
    return GOLDEN_DIR
