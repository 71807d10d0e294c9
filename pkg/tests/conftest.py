from __future__ import annotations

import json
from pathlib import Path

import pytest

FIXTURE_DIR = Path(__file__).resolve().parent / "fixtures"


@pytest.fixture(scope="session")
def fixture_dir() -> Path:
    return FIXTURE_DIR


@pytest.fixture(scope="session")
def frozen() -> dict:
    """Reference numbers regenerated by tools/gen_fixtures.py."""
    return json.loads((FIXTURE_DIR / "fixtures.json").read_text())


def read_scenario(name: str):
    """Parse a stored fixture scenario through the CLI config reader."""
    from gaugelab.cli import parse_scenario

    return parse_scenario((FIXTURE_DIR / name).read_text())
