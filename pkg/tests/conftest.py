import numpy as np
import pytest


def brute_kron(m):
    """Kronecker power by the index definition, pure Python lists."""
    G = [[1]]
    kernel = [[1, 0], [1, 1]]
    for _ in range(m):
        size = len(G)
        G = [
            [kernel[r // size][c // size] * G[r % size][c % size] for c in range(2 * size)]
            for r in range(2 * size)
        ]
    return G


def gf2_product(u, G):
    """Row vector times list-of-lists matrix, by the sum definition."""
    return [sum(u[l] * G[l][j] for l in range(len(u))) % 2 for j in range(len(G[0]))]


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


_acceptance = {}


def pytest_runtest_logreport(report):
    # the time budget is asserted at teardown, so a late test fails there
    if "test_acceptance.py" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "teardown" and report.failed):
        if _acceptance.get(report.nodeid) != "failed":
            _acceptance[report.nodeid] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid, outcome in _acceptance.items():
        name = nodeid.split("::")[-1]
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}")
