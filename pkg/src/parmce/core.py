"""Sequential maximal clique enumeration: pivoted backtracking, its edge-excluding
variant used for incremental maintenance, and a pivot-free reference oracle."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import AbstractSet, Iterable, Mapping

from .graph import Edge, Graph
from .sinks import Clique, CliqueSink, CollectingSink

ORACLE_LIMIT = 64


class OracleLimitError(ValueError):
    pass


class ExcludedEdges:
    """Edges that may not lie inside an emitted clique.

    ``index[v][w]`` is the batch position of edge ``(v, w)``; an edge is
    excluded iff its position is below ``limit``. This lets every edge
    subproblem of a batch share one index and differ only in ``limit``.
    """

    __slots__ = ("index", "limit")

    def __init__(self, index: Mapping[int, Mapping[int, int]], limit: int):
        self.index = index
        self.limit = limit

    @classmethod
    def from_edges(cls, edges: Iterable[Edge]) -> "ExcludedEdges":
        index: dict[int, dict[int, int]] = {}
        for u, v in edges:
            index.setdefault(u, {})[v] = 0
            index.setdefault(v, {})[u] = 0
        return cls(index, 1)

    def hits(self, q: int, clique: Iterable[int]) -> bool:
        """Would adding ``q`` to ``clique`` close an excluded edge?"""
        partners = self.index.get(q)
        if not partners:
            return False
        lim = self.limit
        return any(partners.get(x, lim) < lim for x in clique)

    def within(self, vertices: Iterable[int]) -> bool:
        vs = list(vertices)
        return any(self.hits(vs[i], vs[:i]) for i in range(1, len(vs)))

    def edges(self) -> set[Edge]:
        return {
            (u, v)
            for u, partners in self.index.items()
            for v, pos in partners.items()
            if u < v and pos < self.limit
        }

    def restricted_to(self, vertices: AbstractSet[int]) -> "ExcludedEdges":
        """Copy keeping only excluded edges with both endpoints in ``vertices``."""
        lim = self.limit
        index: dict[int, dict[int, int]] = {}
        for u in vertices:
            partners = self.index.get(u)
            if not partners:
                continue
            kept = {w: p for w, p in partners.items() if p < lim and w in vertices}
            if kept:
                index[u] = kept
        return ExcludedEdges(index, lim)

    def __bool__(self) -> bool:
        return self.limit > 0 and any(p < self.limit for nb in self.index.values() for p in nb.values())


@dataclass
class SearchState:
    """Backtracking state: clique ``K`` plus the ``cand``/``fini`` vertex sets."""

    K: tuple[int, ...] = ()
    cand: set[int] = field(default_factory=set)
    fini: set[int] = field(default_factory=set)
    exclusion: ExcludedEdges | None = None

    @classmethod
    def initial(cls, g: Graph) -> "SearchState":
        return cls((), set(g.adj), set())

    def check(self, g: Graph) -> None:
        """Raise ValueError if the state invariants do not hold on ``g``."""
        ks = set(self.K)
        if len(ks) != len(self.K) or ks & self.cand or ks & self.fini or self.cand & self.fini:
            raise ValueError("K, cand and fini must be pairwise disjoint")
        for a, b in combinations(self.K, 2):
            if b not in g.adj[a]:
                raise ValueError(f"K is not a clique: ({a}, {b}) missing")
        for w in self.cand | self.fini:
            if not ks <= g.adj[w]:
                raise ValueError(f"vertex {w} is not adjacent to all of K")
        if self.exclusion is not None and self.exclusion.within(self.K):
            raise ValueError("K already contains an excluded edge")


def choose_pivot(adj: Mapping[int, frozenset[int]], cand: AbstractSet[int], fini: AbstractSet[int]) -> int:
    """Vertex of cand | fini maximising |cand & N(u)|; ties go to the smallest id."""
    best = -1
    best_t = -1
    for group in (cand, fini):
        for u in group:
            t = len(cand & adj[u])
            if t > best_t or (t == best_t and u < best):
                best, best_t = u, t
    if best_t < 0:
        raise ValueError("pivot requested for empty cand and fini")
    return best


def _search(
    adj: Mapping[int, frozenset[int]],
    K: tuple[int, ...],
    cand: set[int],
    fini: set[int],
    sink: CliqueSink,
    owner: int | None,
    excl: ExcludedEdges | None,
) -> None:
    """Explicit-stack pivoted backtracking; consumes ``cand`` and ``fini``."""
    if not cand:
        if not fini:
            sink.emit(K, owner)
        return
    pivot = choose_pivot(adj, cand, fini)
    stack = [[K, cand, fini, sorted(cand - adj[pivot]), 0]]
    while stack:
        frame = stack[-1]
        K, cand, fini, ext, i = frame
        if i == len(ext):
            stack.pop()
            continue
        frame[4] = i + 1
        q = ext[i]
        if excl is not None and excl.hits(q, K):
            cand.discard(q)
            fini.add(q)
            continue
        nq = adj[q]
        cand_q = cand & nq
        fini_q = fini & nq
        cand.discard(q)
        fini.add(q)
        Kq = K + (q,)
        if not cand_q:
            # with fini_q non-empty no extension of Kq is maximal
            if not fini_q:
                sink.emit(Kq, owner)
            continue
        pivot = choose_pivot(adj, cand_q, fini_q)
        stack.append([Kq, cand_q, fini_q, sorted(cand_q - adj[pivot]), 0])


def ttt(g: Graph, state: SearchState | None, sink: CliqueSink, owner: int | None = None) -> None:
    """Emit every maximal clique of ``g`` that extends ``state.K`` using only
    vertices of ``state.cand`` and avoiding ``state.fini``.

    ``state=None`` means the initial call (enumerate all of C(g)). The empty
    clique of an empty graph is never emitted.
    """
    if state is None:
        state = SearchState.initial(g)
    if state.exclusion:
        raise ValueError("ttt does not take an exclusion set; use ttt_exclude_edges")
    if not state.K and not state.cand and not state.fini:
        return
    _search(g.adj, tuple(state.K), set(state.cand), set(state.fini), sink, owner, None)


def ttt_exclude_edges(g: Graph, state: SearchState, sink: CliqueSink, owner: int | None = None) -> None:
    """Like :func:`ttt`, but branches that would put an excluded edge inside
    the clique are not explored; the branch vertex moves to ``fini`` so that
    cliques it could extend are not reported as maximal."""
    excl = state.exclusion
    if excl is not None and excl.within(state.K):
        raise ValueError("K already contains an excluded edge")
    if not state.K and not state.cand and not state.fini:
        return
    _search(g.adj, tuple(state.K), set(state.cand), set(state.fini), sink, owner, excl or None)


def maximal_cliques(g: Graph) -> set[Clique]:
    sink = CollectingSink()
    ttt(g, None, sink)
    return sink.cliques


def is_clique(g: Graph, c: Iterable[int]) -> bool:
    vs = list(c)
    if len(set(vs)) != len(vs) or any(v not in g.adj for v in vs):
        return False
    return all(b in g.adj[a] for a, b in combinations(vs, 2))


def verify_maximal(g: Graph, c: Iterable[int]) -> bool:
    """True iff ``c`` is a clique of ``g`` that no outside vertex extends."""
    vs = set(c)
    if not is_clique(g, vs):
        return False
    if not vs:
        return g.n == 0
    common = set(g.vertices())
    for v in vs:
        common &= g.adj[v]
    return not (common - vs)


def oracle_enumerate(g: Graph, limit: int = ORACLE_LIMIT) -> set[Clique]:
    """C(g) by plain Bron-Kerbosch without pivoting; each result is re-verified."""
    if g.n > limit:
        raise OracleLimitError(f"oracle refuses graphs with more than {limit} vertices (n={g.n})")
    adj = g.adj
    out: list[Clique] = []

    def extend(R: list[int], P: set[int], X: set[int]) -> None:
        if not P and not X:
            if R:
                out.append(tuple(sorted(R)))
            return
        for v in sorted(P):
            R.append(v)
            extend(R, P & adj[v], X & adj[v])
            R.pop()
            P.discard(v)
            X.add(v)

    extend([], set(adj), set())
    result = set(out)
    if len(result) != len(out):
        raise AssertionError("oracle produced a duplicate clique")
    for c in result:
        if not verify_maximal(g, c):
            raise AssertionError(f"oracle produced a non-maximal clique {c}")
    return result
