import time

import numpy as np
import pytest

from tfplunge import experiments

from tfplunge.dgt import LatticeParams, periodized_gaussian, tight_window

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def small_lattice():
    return LatticeParams(4, 16)


@pytest.fixture(scope="session")
def lattice():
    return LatticeParams(10, 100)


@pytest.fixture(scope="session")
def gauss_tight(lattice):
    return tight_window(periodized_gaussian(lattice.L), lattice)


@pytest.fixture(scope="session")
def table1_run(tmp_path_factory):
    """One run of the reference symbol collection: ``(results, seconds, outdir)``."""
    out = tmp_path_factory.mktemp("table1")
    t0 = time.perf_counter()
    results = experiments.table1(out=str(out))
    return results, time.perf_counter() - t0, out


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
