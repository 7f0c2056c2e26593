import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from hybridfs.datasets import data_path, load_flu  # noqa: E402


@pytest.fixture
def flu():
    return load_flu()


@pytest.fixture
def flu_paths():
    return str(data_path("flu_schema.json")), str(data_path("flu.csv"))
