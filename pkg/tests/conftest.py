"""Shared fixtures: the bundled study data, loaded once per session."""

import pytest

from planfit.simulation import (
    load_fixture_costs,
    load_fixture_decisions,
    load_fixture_dms,
    load_fixture_trace,
)


@pytest.fixture(scope="session")
def costs():
    return load_fixture_costs()


@pytest.fixture(scope="session")
def dms_rows():
    return load_fixture_dms()[0]


@pytest.fixture(scope="session")
def polygon_row():
    return load_fixture_dms()[1]


@pytest.fixture(scope="session")
def decisions():
    return load_fixture_decisions()[0]


@pytest.fixture(scope="session")
def polygon_decision():
    return load_fixture_decisions()[1]


@pytest.fixture(scope="session")
def trace():
    return load_fixture_trace()


@pytest.fixture(scope="session")
def truth(costs):
    from planfit import reduce_objective

    return reduce_objective(costs).direction
