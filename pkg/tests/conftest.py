import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from provexplain.fixtures import load_fixture
from provexplain.nlgen import build_plan
from provexplain.pipeline import run_fixture_query


@pytest.fixture(scope="session")
def mas():
    return load_fixture("mini_mas")


@pytest.fixture(scope="session")
def q7():
    """The running example, executed once for the whole session."""
    return run_fixture_query("mini_mas", "q7")


@pytest.fixture(scope="session")
def q7_fixture(mas):
    return mas.query("q7")


@pytest.fixture(scope="session")
def q7_plan(mas, q7_fixture):
    return build_plan(
        q7_fixture.tree, q7_fixture.query, q7_fixture.mapping, mas.schema
    )
