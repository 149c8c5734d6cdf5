import sys
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from lanegen.maps import chain_map, fork_map, grid_map, roundabout_map  # noqa: E402

ACCEPTANCE_LINES: list[str] = []
SUITE_BUDGET_S = 120.0
_T0 = time.perf_counter()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def chain():
    return chain_map(5, 10.0)


@pytest.fixture
def fork():
    return fork_map(3, 3, 10.0)


@pytest.fixture
def grid():
    return grid_map(3, 3, 50.0)


@pytest.fixture
def roundabout():
    return roundabout_map(3)


@pytest.fixture
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter, exitstatus):
    if not ACCEPTANCE_LINES:
        return
    elapsed = time.perf_counter() - _T0
    ok = elapsed < SUITE_BUDGET_S
    lines = sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split(".")[0].split()[-1]))
    lines.insert(7, f"[{'PASS' if ok else 'FAIL'}] 8. invariant suite wall time: "
                    f"{elapsed:.1f} s for this session (budget {SUITE_BUDGET_S:.0f} s)")
    terminalreporter.section("acceptance criteria")
    for line in lines:
        terminalreporter.write_line(line)
    if not ok and exitstatus == 0:
        terminalreporter._session.exitstatus = 1
