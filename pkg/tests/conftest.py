import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from tulun.store import Store

FIXTURES = Path(__file__).parent / "fixtures"
GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture
def store(tmp_path):
    return Store(tmp_path / "store")


@pytest.fixture
def fixtures_dir():
    return FIXTURES


@pytest.fixture
def golden_dir():
    return GOLDEN
