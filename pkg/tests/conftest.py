"""Shared helpers for the test suite."""

import random
import re

import pytest

from sslab import Graph, sample_gnm

_CRITERION = re.compile(r"test_(criterion_\d+)\w*")
_results: dict = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    m = _CRITERION.match(item.name)
    if m and rep.when == "call":
        _results[item.name.replace("test_", "")] = rep.outcome


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_results):
        verdict = "PASS" if _results[name] == "passed" else "FAIL"
        terminalreporter.write_line(f"{name}: {verdict}")


def random_graph(seed: int, n_max: int, allow_empty: bool = False) -> Graph:
    """Seeded random graph with 2 <= n <= n_max and uniform edge count."""
    rng = random.Random(seed)
    n = rng.randint(2, n_max)
    big_n = n * (n - 1) // 2
    lo = 0 if allow_empty else 1
    m = rng.randint(min(lo, big_n), big_n)
    return sample_gnm(n, m, rng.randrange(2**32))


def random_connected_graph(seed: int, n_max: int) -> Graph:
    """Seeded random connected graph (rejection sampling)."""
    s = seed
    while True:
        g = random_graph(s, n_max)
        if g.edge_count >= g.n - 1 and len(g.components) == 1:
            return g
        s += 10_000_019
