import sys

import numpy as np
import pytest

from bsk import DiskGrid

PINNED_ALPHAS = (0.6, 1.0, 2.5)
PINNED_LAMBDAS = (1.0, 0.5, 1.0 + 1.0j)


def pinned_points() -> np.ndarray:
    """25 fixed disk points: five radii up to 0.95, five staggered angles each."""
    radii = np.array([0.1, 0.35, 0.6, 0.8, 0.95])
    pts = [r * np.exp(1j * (2 * np.pi * k / 5 + 0.3 + 0.17 * i)) for i, r in enumerate(radii) for k in range(5)]
    return np.array(pts)


@pytest.fixture(scope="session")
def pinned():
    return pinned_points()


@pytest.fixture(scope="session")
def default_grid():
    return DiskGrid()


@pytest.fixture(scope="session")
def small_grid():
    return DiskGrid(16, 32)


_SUITE_LIMIT_S = 180.0


def pytest_sessionstart(session):
    import time

    session.config._bsk_t0 = time.perf_counter()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    import time

    results = {}
    mod = sys.modules.get("test_acceptance")
    if mod is not None:
        results = mod.RESULTS
    elapsed = time.perf_counter() - config._bsk_t0
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(results):
        ok, detail = results[n]
        tr.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {n}: {detail}")
    tr.write_line(f"[{'PASS' if elapsed < _SUITE_LIMIT_S else 'FAIL'}] suite runtime {elapsed:.1f}s (limit {_SUITE_LIMIT_S:.0f}s)")
