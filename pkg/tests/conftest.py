import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))
sys.setrecursionlimit(max(sys.getrecursionlimit(), 100_000))


@pytest.fixture(scope="session")
def ea():
    from conlab.arithmetization import ea_theory

    return ea_theory()


@pytest.fixture(scope="session")
def trace4():
    from conlab.construction import atom_enumeration, run_stages

    return run_stages(atom_enumeration(), 3)


@pytest.fixture(scope="session")
def trace3():
    from conlab.construction import atom_enumeration, run_stages

    return run_stages(atom_enumeration(), 2)


@pytest.fixture
def all_true():
    from conlab.modal import Valuation

    return Valuation((), True)


_START = time.perf_counter()


def pytest_terminal_summary(terminalreporter):
    elapsed = time.perf_counter() - _START
    verdict = "PASS" if elapsed <= 900 else "FAIL"
    terminalreporter.write_line(f"{verdict} criterion 9 (runtime): full suite {elapsed:.0f}s (limit 900s)")
