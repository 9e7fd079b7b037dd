"""Synthetic graphs used by tests, benchmarks and the acceptance suite."""

from __future__ import annotations

import math
import random
from itertools import combinations

from .graph import Edge, Graph

# Five-vertex example whose maximal cliques are {a,b,e} and {b,c,d}.
FIVE_NAMES = "abcde"
FIVE_BASE_EDGES: list[tuple[str, str]] = [("a", "b"), ("a", "e"), ("b", "e"), ("b", "c"), ("b", "d"), ("c", "d")]
FIVE_FIRST_BATCH: list[tuple[str, str]] = [("e", "d")]
FIVE_SECOND_BATCH: list[tuple[str, str]] = [("a", "c"), ("a", "d"), ("c", "e")]


def five_id(name: str) -> int:
    return FIVE_NAMES.index(name)


def five_edges(pairs: list[tuple[str, str]]) -> list[Edge]:
    return [(five_id(a), five_id(b)) for a, b in pairs]


def five_graph(stage: str = "a") -> Graph:
    """Stage ``a`` (base), ``b`` (+ (e,d)) or ``c`` (+ three more edges, a K5)."""
    pairs = list(FIVE_BASE_EDGES)
    if stage in ("b", "c"):
        pairs += FIVE_FIRST_BATCH
    if stage == "c":
        pairs += FIVE_SECOND_BATCH
    return Graph.from_edges(5, five_edges(pairs))


def gnp(n: int, p: float, seed: int | random.Random | None = None) -> Graph:
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    edges = [(u, v) for u, v in combinations(range(n), 2) if rng.random() < p]
    return Graph.from_edges(n, edges)


def gnp_fast(n: int, p: float, seed: int | None = None) -> Graph:
    """G(n, p) via geometric edge skipping; same distribution, O(n + m) work."""
    rng = random.Random(seed)
    adj: list[set[int]] = [set() for _ in range(n)]
    if p <= 0:
        return Graph.from_edges(n, [])
    lp = math.log(1.0 - p) if p < 1 else None
    v, w = 1, -1
    while v < n:
        if lp is None:
            w += 1
        else:
            w += 1 + int(math.log(1.0 - rng.random()) / lp)
        while w >= v and v < n:
            w -= v
            v += 1
        if v < n:
            adj[v].add(w)
            adj[w].add(v)
    return Graph({i: frozenset(s) for i, s in enumerate(adj)})


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, combinations(range(n), 2))


def complete_minus_edge(n: int, missing: Edge = (0, 1)) -> Graph:
    gone = tuple(sorted(missing))
    return Graph.from_edges(n, (e for e in combinations(range(n), 2) if e != gone))


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, ((i, i + 1) for i in range(n - 1)))


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, ((i, (i + 1) % n) for i in range(n)))


def star_graph(leaves: int) -> Graph:
    """Vertex 0 joined to ``leaves`` leaves."""
    return Graph.from_edges(leaves + 1, ((0, i) for i in range(1, leaves + 1)))


def moon_moser(parts: int, part_size: int = 3) -> Graph:
    """Complete multipartite graph; part of vertex ``v`` is ``v // part_size``."""
    n = parts * part_size
    return Graph.from_edges(n, ((u, v) for u, v in combinations(range(n), 2) if u // part_size != v // part_size))


def k4_with_pendant() -> Graph:
    """K4 on 0..3 plus vertex 4 attached to vertex 0."""
    return Graph.from_edges(5, [*combinations(range(4), 2), (0, 4)])


def planted_clique_with_sparse_fringe(
    clique_size: int = 25, fringe: int = 1000, attach: tuple[int, int] = (1, 3), seed: int = 0
) -> Graph:
    """A K_clique_size on ids ``0..clique_size-1`` plus ``fringe`` low-degree vertices.

    Each fringe vertex is joined to a random set of ``attach[0]..attach[1]`` clique
    vertices and to nothing else.
    """
    rng = random.Random(seed)
    core = range(clique_size)
    edges: list[Edge] = list(combinations(core, 2))
    for s in range(clique_size, clique_size + fringe):
        k = rng.randint(*attach)
        edges += [(s, c) for c in rng.sample(core, k)]
    return Graph.from_edges(clique_size + fringe, edges)


def star_of_cliques(arms: int = 20, arm_size: int = 4, hub_cliques: int = 40, hub_clique_size: int = 3, seed: int = 0) -> Graph:
    """A hub vertex whose neighbourhood holds many small cliques, plus pendant arms.

    The hub is vertex 0. ``hub_cliques`` vertex-disjoint cliques of
    ``hub_clique_size`` are each fully joined to the hub, with a sparse random
    matching between them; ``arms`` paths of ``arm_size`` vertices hang off the hub.
    """
    rng = random.Random(seed)
    edges: list[Edge] = []
    nxt = 1
    groups: list[list[int]] = []
    for _ in range(hub_cliques):
        grp = list(range(nxt, nxt + hub_clique_size))
        nxt += hub_clique_size
        groups.append(grp)
        edges += [(0, x) for x in grp]
        edges += list(combinations(grp, 2))
    for a, b in combinations(range(len(groups)), 2):
        if rng.random() < 0.3:
            edges.append((rng.choice(groups[a]), rng.choice(groups[b])))
    for _ in range(arms):
        prev = 0
        for _ in range(arm_size):
            edges.append((prev, nxt))
            prev = nxt
            nxt += 1
    return Graph.from_edges(nxt, edges)


def to_edge_list_text(g: Graph, edges: list[Edge] | None = None, timestamps: bool = False) -> str:
    """Serialise in the loader's format, using labels."""
    rows = edges if edges is not None else sorted(g.edges())
    lines = []
    for t, (u, v) in enumerate(rows):
        line = f"{g.labels[u]} {g.labels[v]}"
        lines.append(f"{line} {t}" if timestamps else line)
    return "\n".join(lines) + ("\n" if lines else "")
