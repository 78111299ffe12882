import sys

import numpy as np
import pytest

from unitfrechet import DataSeries, load_uefa


@pytest.fixture(scope="session")
def uefa() -> DataSeries:
    return load_uefa()


@pytest.fixture()
def rng() -> np.random.Generator:
    return np.random.default_rng(20260822)


def pytest_terminal_summary(terminalreporter):
    """Echo the acceptance verdicts where capture cannot hide them."""
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "VERDICTS", None) if mod else None
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
