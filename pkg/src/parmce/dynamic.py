"""Incremental maintenance of the maximal-clique set under batched edge insertion.

A step on batch ``H = e_1..e_rho`` computes

* the new cliques ``C(G+H) - C(G)``: edge ``e_i = (u, v)`` owns the new cliques
  whose lowest-indexed batch edge is ``e_i``. They are enumerated inside the
  common neighbourhood of ``u`` and ``v`` while excluding ``e_1..e_{i-1}``;
* the subsumed cliques ``C(G) - C(G+H)``: every old clique swallowed by a
  new clique ``c`` is ``c`` with one endpoint of each batch edge inside ``c``
  removed, so candidates are generated by splitting and looked up in the index.
"""

from __future__ import annotations

import threading
import time
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

from .core import ExcludedEdges, SearchState, _search, maximal_cliques
from .graph import Edge, EdgeBatch, Graph, add_vertices, apply_batch, local_adjacency, normalize_batch
from .parallel import (
    SERIAL,
    Adjacency,
    ParallelConfig,
    _WORKER,
    _chunks,
    _run_states_in_processes,
    _TaskRunner,
    make_pool,
    process_pool,
)
from .sinks import Clique, CliqueSink, CollectingSink, CountingSink, canonical


class CliqueIndex:
    """Set of current maximal cliques keyed by canonical (ascending) tuples."""

    def __init__(self, cliques: Iterable[Iterable[int]] = ()):
        self._cliques: set[Clique] = {canonical(c) for c in cliques}
        self._lock = threading.Lock()

    def __contains__(self, clique: object) -> bool:
        return clique in self._cliques

    def __len__(self) -> int:
        return len(self._cliques)

    def __iter__(self) -> Iterator[Clique]:
        return iter(self._cliques)

    @property
    def count(self) -> int:
        return len(self._cliques)

    def take(self, clique: Clique) -> bool:
        """Atomically remove ``clique``; True only for the caller that removed it."""
        with self._lock:
            if clique in self._cliques:
                self._cliques.remove(clique)
                return True
            return False

    def update(self, cliques: Iterable[Clique]) -> None:
        with self._lock:
            self._cliques.update(cliques)

    def as_set(self) -> set[Clique]:
        return set(self._cliques)

    def copy(self) -> "CliqueIndex":
        dup = CliqueIndex()
        dup._cliques = set(self._cliques)
        return dup


@dataclass
class CliqueDelta:
    """Change of C(G) for one batch. ``subsumed`` is None when it was not computed."""

    new: set[Clique] = field(default_factory=set)
    subsumed: set[Clique] | None = field(default_factory=set)
    n_new: int = -1
    filtered: int = 0
    wall_time: float = 0.0

    def __post_init__(self) -> None:
        if self.n_new < 0:
            self.n_new = len(self.new)
        if self.subsumed and self.new & self.subsumed:
            raise ValueError("a clique cannot be both new and subsumed")

    @property
    def n_del(self) -> int:
        return len(self.subsumed) if self.subsumed is not None else 0

    @property
    def size(self) -> int:
        return self.n_new + self.n_del


# -- exclusion-aware parallel search -----------------------------------------


def _check_exclusion(state: SearchState) -> ExcludedEdges | None:
    excl = state.exclusion or None
    if excl is not None and excl.within(state.K):
        raise ValueError("K already contains an excluded edge")
    return excl


def par_ttt_exclude_edges(
    g: Graph,
    state: SearchState,
    sink: CliqueSink,
    cfg: ParallelConfig = SERIAL,
    owner: int | None = None,
) -> None:
    """Parallel counterpart of :func:`parmce.core.ttt_exclude_edges`.

    An unrolled branch that would close an excluded edge is dropped; its
    vertex still sits in the ``fini`` of every later branch.
    """
    excl = _check_exclusion(state)
    K, cand, fini = tuple(state.K), set(state.cand), set(state.fini)
    if not K and not cand and not fini:
        return
    if cfg.backend == "process" and not cfg.serial:
        _run_states_in_processes(g.adj, [(K, cand, fini, owner)], sink, cfg, excl)
        return
    pool = make_pool(cfg)
    runner = _TaskRunner(pool, sink, cfg)
    try:
        pool.run(runner.search, g.adj, K, cand, fini, owner, excl)
    finally:
        runner.close()


# -- new cliques -------------------------------------------------------------


def _edge_subproblem(g_after: Graph, u: int, v: int) -> tuple[Adjacency, frozenset[int]]:
    common = g_after.adj[u] & g_after.adj[v]
    return local_adjacency(g_after.adj, common | {u, v}), common


def _vertex_split(
    local: Adjacency, common: frozenset[int], u: int, v: int, excl: ExcludedEdges
) -> Iterator[tuple[tuple[int, ...], set[int], set[int]]]:
    """Per-vertex subproblems of one edge, ordered by degree inside the local graph.

    The subproblem of ``w`` covers the cliques containing ``{u, v}`` whose
    lowest-ranked remaining vertex is ``w``.
    """
    key = {w: (len(local[w]), w) for w in common}
    for w in sorted(common):
        if excl.hits(w, (u, v)):
            continue
        nb = local[w] & common
        kw = key[w]
        cand = {x for x in nb if key[x] > kw}
        yield (u, v, w), cand, set(nb) - cand


def _new_root(runner: _TaskRunner, g_after: Graph, h: EdgeBatch, positions: Mapping) -> None:
    for i in range(len(h.edges) - 1, -1, -1):
        runner.pool.spawn(_new_edge, runner, g_after, h, positions, i)


def _new_edge(runner: _TaskRunner, g_after: Graph, h: EdgeBatch, positions: Mapping, i: int) -> None:
    u, v = h.edges[i]
    excl = ExcludedEdges(positions, i)
    local, common = _edge_subproblem(g_after, u, v)
    if not common:
        runner.sink.emit((u, v), i)
        return
    for K, cand, fini in _vertex_split(local, common, u, v, excl):
        runner.pool.spawn(runner.search, local, K, cand, fini, i, excl)


def _new_edge_process_task(task: tuple[int, frozenset[int]]) -> CliqueSink:
    i, ws = task
    g_after: Graph = _WORKER["graph"]
    h: EdgeBatch = _WORKER["batch"]
    sink = _WORKER["sink"].fork()
    u, v = h.edges[i]
    local, common = _edge_subproblem(g_after, u, v)
    excl = ExcludedEdges(_WORKER["positions"], i)
    for K, cand, fini in _vertex_split(local, common, u, v, excl):
        if K[2] in ws:
            _search(local, K, cand, fini, sink, i, excl)
    return sink


def par_imce_new(
    g: Graph,
    h: EdgeBatch,
    sink: CliqueSink | None = None,
    cfg: ParallelConfig = SERIAL,
    *,
    g_after: Graph | None = None,
) -> CliqueSink:
    """Emit C(G+H) - C(G), each clique once, tagged with the index of its owning edge.

    Returns the sink (a fresh :class:`CollectingSink` unless one is given).
    """
    if sink is None:
        sink = CollectingSink()
    if not h.edges:
        return sink
    if g_after is None:
        g_after = apply_batch(g, h)
    positions = h.position_index()
    if cfg.backend == "process" and not cfg.serial:
        _new_in_processes(g_after, h, positions, sink, cfg)
        return sink
    pool = make_pool(cfg)
    runner = _TaskRunner(pool, sink, cfg)
    try:
        pool.run(_new_root, runner, g_after, h, positions)
    finally:
        runner.close()
    return sink


def _new_in_processes(g_after: Graph, h: EdgeBatch, positions: Mapping, sink: CliqueSink, cfg: ParallelConfig) -> None:
    """Edge subproblems in forked workers; an edge with many common neighbours
    is split into several tasks by its per-vertex subproblems."""
    tasks: list[tuple[int, frozenset[int]]] = []
    for i, (u, v) in enumerate(h.edges):
        common = g_after.adj[u] & g_after.adj[v]
        if not common:
            sink.emit((u, v), i)
            continue
        ws = sorted(common, key=lambda w: (-len(g_after.adj[w] & common), w))
        parts = min(len(ws), cfg.threads * 2) if len(ws) > 8 else 1
        tasks += [(i, frozenset(ws[k::parts])) for k in range(parts)]
    if not tasks:
        return
    payload = {"graph": g_after, "batch": h, "positions": positions, "sink": sink.fork()}
    with process_pool(cfg, payload) as ex:
        for part in ex.map(_new_edge_process_task, tasks):
            sink.merge(part)


# -- subsumed cliques ---------------------------------------------------------


def subsumed_candidates(c: Clique, positions: Mapping[int, Mapping[int, int]]) -> set[Clique]:
    """Split ``c`` along each batch edge inside it (in batch order)."""
    members = set(c)
    inside = sorted(
        (p, x, y)
        for x in c
        for y, p in positions.get(x, {}).items()
        if x < y and y in members
    )
    S: set[frozenset[int]] = {frozenset(c)}
    for _, x, y in inside:
        nxt: set[frozenset[int]] = set()
        for cand in S:
            if x in cand and y in cand:
                nxt.add(cand - {x})
                nxt.add(cand - {y})
            else:
                nxt.add(cand)
        S = nxt
    return {canonical(s) for s in S}


def _hits_task(cliques: list[Clique]) -> list[Clique]:
    """Candidates of ``cliques`` present in the worker's snapshot of the old index."""
    index: CliqueIndex = _WORKER["index"]
    positions = _WORKER["positions"]
    hits: set[Clique] = set()
    for c in cliques:
        hits.update(x for x in subsumed_candidates(c, positions) if x in index)
    return list(hits)


def par_imce_sub(
    g: Graph,
    h: EdgeBatch,
    index: CliqueIndex,
    new_cliques: Iterable[Clique],
    cfg: ParallelConfig = SERIAL,
) -> set[Clique]:
    """Remove and return the old maximal cliques subsumed by ``new_cliques``.

    ``index`` must hold C(G) on entry; on return it holds C(G) - C(G+H).
    The process backend forks workers that test candidates against their
    inherited copy of the index, so the parent only removes actual hits.
    """
    positions = h.position_index()
    deleted: set[Clique] = set()
    lock = threading.Lock()
    new_list = [canonical(c) for c in new_cliques]

    if cfg.backend == "process" and not cfg.serial and new_list:
        size = max(1, len(new_list) // (4 * cfg.threads))
        with process_pool(cfg, {"index": index, "positions": positions}) as ex:
            for hits in ex.map(_hits_task, _chunks(new_list, size)):
                for c in hits:
                    if index.take(c):
                        deleted.add(c)
        return deleted

    def check(c: Clique) -> None:
        for cand in subsumed_candidates(c, positions):
            if index.take(cand):
                with lock:
                    deleted.add(cand)

    def root(pool) -> None:
        for c in new_list:
            pool.spawn(check, c)

    pool = make_pool(cfg)
    pool.run(root, pool)
    return deleted


# -- step driver -------------------------------------------------------------


class IncrementalEngine:
    """Current graph plus its maximal-clique index.

    With ``maintain=False`` no index is kept and steps only count new cliques
    (for streams whose clique set does not fit in memory).

    With ``grow=True`` a batch may name vertices the graph does not have yet.
    They join the graph together with their first edge, so they never exist as
    isolated vertices and never count as deleted singleton cliques.
    """

    def __init__(
        self, graph: Graph, index: CliqueIndex | None = None, maintain: bool = True, grow: bool = False
    ):
        self.graph = graph
        self.maintain = maintain
        self.grow = grow
        if maintain and index is None:
            index = CliqueIndex(maximal_cliques(graph))
        self.index = index if maintain else None

    def copy(self) -> "IncrementalEngine":
        index = self.index.copy() if self.index is not None else None
        return IncrementalEngine(self.graph, index, self.maintain, self.grow)

    def step(self, edges: EdgeBatch | Iterable[Edge], cfg: ParallelConfig = SERIAL) -> CliqueDelta:
        start = time.perf_counter()
        pairs = list(edges.edges if isinstance(edges, EdgeBatch) else edges)
        if self.grow:
            self.graph = add_vertices(self.graph, (x for u, v in pairs if u != v for x in (u, v)))
        h = normalize_batch(self.graph, pairs)
        if not h.edges:
            return CliqueDelta(filtered=h.filtered, subsumed=set() if self.maintain else None)
        g_after = apply_batch(self.graph, h)
        if not self.maintain:
            counter = par_imce_new(self.graph, h, CountingSink(), cfg, g_after=g_after)
            self.graph = g_after
            assert isinstance(counter, CountingSink)
            return CliqueDelta(subsumed=None, n_new=counter.count, filtered=h.filtered,
                               wall_time=time.perf_counter() - start)
        collected = par_imce_new(self.graph, h, CollectingSink(), cfg, g_after=g_after)
        assert isinstance(collected, CollectingSink)
        new = collected.cliques
        assert self.index is not None
        deleted = par_imce_sub(self.graph, h, self.index, new, cfg)
        # batch barrier: graph swap and index merge happen after both phases
        self.index.update(new)
        self.graph = g_after
        return CliqueDelta(new, deleted, filtered=h.filtered, wall_time=time.perf_counter() - start)


def imce_step(engine: IncrementalEngine, h: EdgeBatch | Iterable[Edge], cfg: ParallelConfig = SERIAL) -> CliqueDelta:
    return engine.step(h, cfg)


def seq_imce_step(engine: IncrementalEngine, h: EdgeBatch | Iterable[Edge]) -> CliqueDelta:
    """Same step on a serial schedule; the timing baseline for speedups."""
    return engine.step(h, SERIAL)
