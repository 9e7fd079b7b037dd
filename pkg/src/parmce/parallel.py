"""Parallel maximal clique enumeration on a static graph.

Two execution backends share the same decomposition:

* ``thread``: recursive tasks on a :class:`~parmce.pool.WorkStealingPool`.
  Iterations of the backtracking loop are unrolled so that every branch is
  an independent task; states below ``grain_threshold`` run serially.
* ``process``: forked worker processes. Work is cut into independent search
  states in the parent and distributed dynamically; each worker runs the
  serial search and returns a private sink that is merged afterwards. This
  is the backend that gives real speedups under CPython's GIL.
"""

from __future__ import annotations

import multiprocessing as mp
from concurrent.futures import Executor, ProcessPoolExecutor, ThreadPoolExecutor
from dataclasses import dataclass
from typing import AbstractSet, Iterator, Mapping, Sequence

from .core import ExcludedEdges, SearchState, _search, choose_pivot
from .graph import Graph, RankAssignment, degree_ranking, local_adjacency
from .pool import WorkStealingPool
from .sinks import CliqueSink

Adjacency = Mapping[int, frozenset[int]]
State = tuple[tuple[int, ...], set[int], set[int], "int | None"]

BACKENDS = ("thread", "process")


@dataclass(frozen=True)
class ParallelConfig:
    threads: int = 1
    grain_threshold: int = 16
    backend: str = "thread"
    # smallest |cand|+|fini| for which the pivot reduction itself is split across threads
    pivot_split: int = 4096

    def __post_init__(self) -> None:
        if self.threads < 1:
            raise ValueError("threads must be >= 1")
        if self.grain_threshold < 0:
            raise ValueError("grain_threshold must be >= 0")
        if self.backend not in BACKENDS:
            raise ValueError(f"backend must be one of {BACKENDS}")

    @property
    def serial(self) -> bool:
        return self.threads == 1


SERIAL = ParallelConfig(threads=1)


# -- pivot -------------------------------------------------------------------


def _best_in(adj: Adjacency, cand: AbstractSet[int], part: Sequence[int]) -> tuple[int, int]:
    best, best_t = -1, -1
    for u in part:
        t = len(cand & adj[u])
        if t > best_t or (t == best_t and u < best):
            best, best_t = u, t
    return best_t, best


def par_pivot(
    g: Graph | Adjacency,
    cand: AbstractSet[int],
    fini: AbstractSet[int],
    executor: Executor | None = None,
    chunk: int = 1024,
) -> int:
    """Pivot maximising |cand & N(u)| over cand | fini, smallest id on ties.

    With an executor, intersection sizes are computed per chunk in parallel
    and the per-chunk winners are reduced.
    """
    adj = g.adj if isinstance(g, Graph) else g
    if not cand and not fini:
        raise ValueError("par_pivot needs a non-empty cand | fini")
    if executor is None or len(cand) + len(fini) <= chunk:
        return choose_pivot(adj, cand, fini)
    pool = [*cand, *fini]
    parts = [pool[i:i + chunk] for i in range(0, len(pool), chunk)]
    winners = executor.map(lambda part: _best_in(adj, cand, part), parts)
    return min(winners, key=lambda tw: (-tw[0], tw[1]))[1]


# -- unrolled branching ------------------------------------------------------


def unroll(
    adj: Adjacency,
    K: tuple[int, ...],
    cand: AbstractSet[int],
    fini: AbstractSet[int],
    pivot: int,
    excl: ExcludedEdges | None = None,
) -> Iterator[tuple[tuple[int, ...], set[int], set[int]]]:
    """Child states of one backtracking node, each computable on its own.

    Branch ``i`` on ``q = ext[i]`` gets ``cand_q = (cand - ext[:i]) & N(q)`` and
    ``fini_q = (fini | ext[:i]) & N(q)``. Membership in ``ext[:i]`` is read off a
    position map. Branches that would close an excluded edge are skipped;
    their vertex still lands in the ``fini`` of later branches.
    """
    ext = sorted(cand - adj[pivot])
    pos = {q: i for i, q in enumerate(ext)}
    last = len(ext)
    for i, q in enumerate(ext):
        if excl is not None and excl.hits(q, K):
            continue
        nq = adj[q]
        cand_q: set[int] = set()
        fini_q = set(fini & nq)
        for w in cand & nq:
            if pos.get(w, last) < i:
                fini_q.add(w)
            else:
                cand_q.add(w)
        yield K + (q,), cand_q, fini_q


class _SerialPool:
    """Same task interface as WorkStealingPool, executed LIFO on the caller's thread."""

    workers = 1

    def __init__(self) -> None:
        self._stack: list = []

    def spawn(self, fn, *args) -> None:
        self._stack.append((fn, args))

    def run(self, fn, *args) -> None:
        self.spawn(fn, *args)
        while self._stack:
            f, a = self._stack.pop()
            f(*a)


class _TaskRunner:
    """Recursive ParTTT tasks (optionally with edge exclusion) on a pool."""

    def __init__(self, pool, sink: CliqueSink, cfg: ParallelConfig):
        self.pool = pool
        self.sink = sink
        self.cfg = cfg
        self.pivot_executor: ThreadPoolExecutor | None = None
        if cfg.threads > 1 and cfg.pivot_split > 0:
            self.pivot_executor = ThreadPoolExecutor(cfg.threads, thread_name_prefix="mce-pivot")

    def close(self) -> None:
        if self.pivot_executor is not None:
            self.pivot_executor.shutdown()

    def search(
        self,
        adj: Adjacency,
        K: tuple[int, ...],
        cand: set[int],
        fini: set[int],
        owner: int | None,
        excl: ExcludedEdges | None = None,
    ) -> None:
        if len(cand) + len(fini) < self.cfg.grain_threshold:
            _search(adj, K, cand, fini, self.sink, owner, excl)
            return
        if not cand:
            if not fini:
                self.sink.emit(K, owner)
            return
        big = len(cand) + len(fini) >= self.cfg.pivot_split
        pivot = par_pivot(adj, cand, fini, self.pivot_executor if big else None)
        grain = self.cfg.grain_threshold
        for Kq, cand_q, fini_q in unroll(adj, K, cand, fini, pivot, excl):
            if len(cand_q) + len(fini_q) < grain:
                _search(adj, Kq, cand_q, fini_q, self.sink, owner, excl)
            else:
                self.pool.spawn(self.search, adj, Kq, cand_q, fini_q, owner, excl)


def make_pool(cfg: ParallelConfig):
    return _SerialPool() if cfg.serial else WorkStealingPool(cfg.threads)


def _run_on_pool(cfg: ParallelConfig, sink: CliqueSink, root, *args) -> None:
    pool = make_pool(cfg)
    runner = _TaskRunner(pool, sink, cfg)
    try:
        pool.run(root, runner, *args)
    finally:
        runner.close()


# -- process backend ---------------------------------------------------------

_WORKER: dict = {}


def _fork_context():
    return mp.get_context("fork")


def _init_worker(payload: dict) -> None:
    _WORKER.clear()
    _WORKER.update(payload)


def _states_task(states: list[State]) -> CliqueSink:
    adj = _WORKER["adj"]
    excl = _WORKER.get("excl")
    sink = _WORKER["sink"].fork()
    for K, cand, fini, owner in states:
        _search(adj, K, cand, fini, sink, owner, excl)
    return sink


def _vertex_states(adj: Adjacency, ranking: RankAssignment, v: int) -> tuple[set[int], set[int]]:
    nb = adj[v]
    cand = {w for w in nb if ranking.greater(w, v)}
    return cand, set(nb) - cand


def _mce_vertices_task(vertices: list[int]) -> CliqueSink:
    g: Graph = _WORKER["graph"]
    ranking: RankAssignment = _WORKER["ranking"]
    sink = _WORKER["sink"].fork()
    for v in vertices:
        cand, fini = _vertex_states(g.adj, ranking, v)
        local = local_adjacency(g.adj, g.adj[v] | {v})
        _search(local, (v,), cand, fini, sink, v, None)
    return sink


def process_pool(cfg: ParallelConfig, payload: dict) -> ProcessPoolExecutor:
    return ProcessPoolExecutor(
        max_workers=cfg.threads,
        mp_context=_fork_context(),
        initializer=_init_worker,
        initargs=(payload,),
    )


def _chunks(items: Sequence, size: int) -> list[list]:
    return [list(items[i:i + size]) for i in range(0, len(items), size)]


def expand_frontier(
    adj: Adjacency,
    states: list[State],
    sink: CliqueSink,
    target: int,
    grain: int,
    excl: ExcludedEdges | None = None,
) -> list[State]:
    """Split the largest states by one unrolled level until ``target`` states exist.

    Leaves met along the way are emitted to ``sink``; states below ``grain``
    are never split.
    """
    done: list[State] = []
    work = list(states)
    while work and len(work) + len(done) < target:
        work.sort(key=lambda s: len(s[1]) + len(s[2]))
        K, cand, fini, owner = work.pop()
        if len(cand) + len(fini) < max(grain, 1) or not cand:
            done.append((K, cand, fini, owner))
            continue
        pivot = choose_pivot(adj, cand, fini)
        for Kq, cand_q, fini_q in unroll(adj, K, cand, fini, pivot, excl):
            if not cand_q and not fini_q:
                sink.emit(Kq, owner)
            elif cand_q:
                work.append((Kq, cand_q, fini_q, owner))
    return done + work


def _run_states_in_processes(
    adj: Adjacency, states: list[State], sink: CliqueSink, cfg: ParallelConfig, excl: ExcludedEdges | None
) -> None:
    states = expand_frontier(adj, states, sink, 8 * cfg.threads, cfg.grain_threshold, excl)
    states.sort(key=lambda s: len(s[1]) + len(s[2]), reverse=True)
    payload = {"adj": adj, "excl": excl or None, "sink": sink.fork()}
    with process_pool(cfg, payload) as ex:
        for part in ex.map(_states_task, _chunks(states, 1)):
            sink.merge(part)


# -- public operations -------------------------------------------------------


def _ttt_root(runner: _TaskRunner, adj: Adjacency, K, cand, fini, owner) -> None:
    runner.search(adj, K, cand, fini, owner)


def par_ttt(
    g: Graph,
    state: SearchState | None,
    sink: CliqueSink,
    cfg: ParallelConfig = SERIAL,
    owner: int | None = None,
) -> None:
    """Parallel pivoted backtracking; emits the same clique set as :func:`parmce.core.ttt`."""
    if state is None:
        state = SearchState.initial(g)
    if state.exclusion:
        raise ValueError("par_ttt does not take an exclusion set; use par_ttt_exclude_edges")
    K, cand, fini = tuple(state.K), set(state.cand), set(state.fini)
    if not K and not cand and not fini:
        return
    if cfg.backend == "process" and not cfg.serial:
        _run_states_in_processes(g.adj, [(K, cand, fini, owner)], sink, cfg, None)
        return
    _run_on_pool(cfg, sink, _ttt_root, g.adj, K, cand, fini, owner)


def _mce_root(runner: _TaskRunner, g: Graph, ranking: RankAssignment) -> None:
    for v in sorted(g.adj, reverse=True):
        runner.pool.spawn(_mce_vertex, runner, g, ranking, v)


def _mce_vertex(runner: _TaskRunner, g: Graph, ranking: RankAssignment, v: int) -> None:
    cand, fini = _vertex_states(g.adj, ranking, v)
    local = local_adjacency(g.adj, g.adj[v] | {v})
    runner.search(local, (v,), cand, fini, v)


def par_mce(
    g: Graph,
    ranking: RankAssignment | None,
    sink: CliqueSink,
    cfg: ParallelConfig = SERIAL,
) -> None:
    """Per-vertex decomposition: the subproblem of ``v`` emits exactly the
    maximal cliques whose lowest-ranked vertex is ``v`` (tagged as owner)."""
    if ranking is None:
        ranking = degree_ranking(g)
    missing = set(g.adj) - set(ranking.metric)
    if missing:
        raise ValueError(f"ranking does not cover vertices {sorted(missing)[:10]}")
    if g.n == 0:
        return
    if cfg.backend == "process" and not cfg.serial:
        # largest neighbourhoods first so stragglers are small
        order = sorted(g.adj, key=lambda v: (-len(g.adj[v]), v))
        payload = {"graph": g, "ranking": ranking, "sink": sink.fork()}
        size = max(1, min(16, g.n // (16 * cfg.threads)))
        with process_pool(cfg, payload) as ex:
            for part in ex.map(_mce_vertices_task, _chunks(order, size)):
                sink.merge(part)
        return
    _run_on_pool(cfg, sink, _mce_root, g, ranking)
