from pathlib import Path

import pytest

from pushalign import load_scenario

SCENARIO_PATH = Path(__file__).resolve().parent.parent / "scenarios" / "holder_a.json"


@pytest.fixture(scope="session")
def bundle():
    """The canonical shipped scenario, loaded once per test session."""
    return load_scenario(SCENARIO_PATH)
