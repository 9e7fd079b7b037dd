from __future__ import annotations

import random
from itertools import combinations

from hypothesis import strategies as st

from parmce.graph import Graph


@st.composite
def small_graphs(draw, max_n: int = 14) -> Graph:
    n = draw(st.integers(min_value=0, max_value=max_n))
    pairs = list(combinations(range(n), 2))
    keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph.from_edges(n, (e for e, k in zip(pairs, keep) if k))


def random_graphs(count: int, n_range=(2, 25), ps=(0.1, 0.3, 0.5, 0.7, 0.9), seed: int = 0):
    """Deterministic stream of (n, p, graph) triples for the oracle sweeps."""
    from parmce.generators import gnp

    rng = random.Random(seed)
    for i in range(count):
        n = rng.randint(*n_range)
        p = ps[i % len(ps)]
        yield n, p, gnp(n, p, rng)


# -- acceptance reporting ------------------------------------------------------

ACCEPTANCE: list[tuple[int, str, str, str]] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num, title, verdict, detail in sorted(ACCEPTANCE):
        terminalreporter.write_line(f"criterion {num} {verdict}: {title} | {detail}")
