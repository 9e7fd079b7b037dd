"""Simple undirected graphs, edge-list loading, batched insertion and vertex rankings."""

from __future__ import annotations

import io
import os
from dataclasses import dataclass, field
from typing import IO, Iterable, Iterator, Mapping, Sequence, Union

Edge = tuple[int, int]
Source = Union[str, os.PathLike, bytes, IO[str], IO[bytes]]


class EdgeListError(ValueError):
    """Raised for a malformed edge-list line."""

    def __init__(self, lineno: int, line: str, reason: str = "expected two integer vertex labels"):
        self.lineno = lineno
        self.line = line
        super().__init__(f"line {lineno}: {reason}: {line.rstrip()!r}")


class Graph:
    """Immutable simple undirected graph over integer vertex ids.

    ``adj`` maps every vertex to the frozenset of its neighbours. Graphs produced
    by the loader use dense ids ``0..n-1``; induced subgraphs keep the ids of
    their parent. ``labels`` maps a dense id back to its label in the input file.
    """

    __slots__ = ("adj", "m", "labels")

    def __init__(self, adj: Mapping[int, frozenset[int]], labels: Mapping[int, int] | None = None):
        self.adj: dict[int, frozenset[int]] = dict(adj)
        self.m: int = sum(len(nb) for nb in self.adj.values()) // 2
        self.labels: dict[int, int] = dict(labels) if labels is not None else {v: v for v in self.adj}

    @classmethod
    def from_edges(cls, n: int | Iterable[int], edges: Iterable[Edge], labels: Mapping[int, int] | None = None) -> "Graph":
        """Build a graph on the given vertices; loops and duplicates are dropped."""
        vertices = range(n) if isinstance(n, int) else n
        nbrs: dict[int, set[int]] = {v: set() for v in vertices}
        for u, v in edges:
            if u == v:
                continue
            if u not in nbrs or v not in nbrs:
                raise ValueError(f"edge ({u}, {v}) references an unknown vertex")
            nbrs[u].add(v)
            nbrs[v].add(u)
        return cls({v: frozenset(s) for v, s in nbrs.items()}, labels)

    @property
    def n(self) -> int:
        return len(self.adj)

    def vertices(self) -> Iterable[int]:
        return self.adj.keys()

    def neighbors(self, v: int) -> frozenset[int]:
        return self.adj[v]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        nb = self.adj.get(u)
        return nb is not None and v in nb

    def edges(self) -> Iterator[Edge]:
        for u, nb in self.adj.items():
            for v in nb:
                if u < v:
                    yield u, v

    def max_degree(self) -> int:
        return max((len(nb) for nb in self.adj.values()), default=0)

    def label_of(self, v: int) -> int:
        return self.labels[v]

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self.adj == other.adj

    def __hash__(self) -> int:  # pragma: no cover - graphs are not meant as dict keys
        return id(self)


@dataclass(frozen=True)
class EdgeBatch:
    """An ordered set of edges to insert; the order is the exclusion order e1..e_rho."""

    edges: tuple[Edge, ...]
    filtered: int = 0

    @property
    def size(self) -> int:
        return len(self.edges)

    def __len__(self) -> int:
        return len(self.edges)

    def __iter__(self) -> Iterator[Edge]:
        return iter(self.edges)

    def position_index(self) -> dict[int, dict[int, int]]:
        """Map each endpoint to ``{partner: position of the edge in the batch}``."""
        index: dict[int, dict[int, int]] = {}
        for i, (u, v) in enumerate(self.edges):
            index.setdefault(u, {})[v] = i
            index.setdefault(v, {})[u] = i
        return index


def normalize_batch(g: Graph, edges: Iterable[Edge]) -> EdgeBatch:
    """Order each pair as ``(min, max)`` and drop loops, repeats and edges already in ``g``.

    The number of dropped pairs is kept in ``EdgeBatch.filtered``.
    """
    seen: set[Edge] = set()
    kept: list[Edge] = []
    dropped = 0
    for u, v in edges:
        if u not in g.adj or v not in g.adj:
            raise ValueError(f"edge ({u}, {v}) references a vertex not in the graph")
        e = (u, v) if u < v else (v, u)
        if u == v or e in seen or v in g.adj[u]:
            dropped += 1
            continue
        seen.add(e)
        kept.append(e)
    return EdgeBatch(tuple(kept), dropped)


def apply_batch(g: Graph, h: EdgeBatch | Iterable[Edge]) -> Graph:
    """Return ``g + h`` as a new graph; ``g`` is left untouched."""
    if not isinstance(h, EdgeBatch):
        h = normalize_batch(g, h)
    if not h.edges:
        return g
    grown: dict[int, set[int]] = {}
    for u, v in h.edges:
        if u == v or v in g.adj[u]:
            continue
        grown.setdefault(u, set()).add(v)
        grown.setdefault(v, set()).add(u)
    adj = dict(g.adj)
    for v, extra in grown.items():
        adj[v] = adj[v] | extra
    return Graph(adj, g.labels)


def add_vertices(g: Graph, vertices: Iterable[int]) -> Graph:
    """Return ``g`` with the given ids added as isolated vertices (known ids are ignored)."""
    fresh = [v for v in vertices if v not in g.adj]
    if not fresh:
        return g
    adj = dict(g.adj)
    for v in fresh:
        adj[v] = frozenset()
    labels = dict(g.labels)
    for v in fresh:
        labels.setdefault(v, v)
    return Graph(adj, labels)


def local_adjacency(adj: Mapping[int, frozenset[int]], keep: frozenset[int]) -> dict[int, frozenset[int]]:
    """Adjacency of the subgraph induced by ``keep`` (no validation)."""
    return {v: adj[v] & keep for v in keep}


def induced_subgraph(g: Graph, vertices: Iterable[int]) -> Graph:
    """Subgraph induced by ``vertices``; ids are kept as in ``g``."""
    keep = frozenset(vertices)
    missing = [v for v in keep if v not in g.adj]
    if missing:
        raise ValueError(f"unknown vertex ids: {sorted(missing)[:10]}")
    return Graph(local_adjacency(g.adj, keep), {v: g.labels[v] for v in keep})


# -- loading -----------------------------------------------------------------


def _open_text(source: Source) -> tuple[IO[str], bool]:
    if isinstance(source, (str, os.PathLike)):
        return open(source, "r", encoding="utf-8"), True
    if isinstance(source, bytes):
        return io.StringIO(source.decode("utf-8")), True
    if isinstance(source, io.TextIOBase):
        return source, False
    return io.TextIOWrapper(source, encoding="utf-8"), False  # type: ignore[arg-type]


def iter_edge_lines(source: Source) -> Iterator[tuple[int, int, int | None]]:
    """Yield ``(u, v, timestamp)`` label triples; ``timestamp`` is None when absent.

    Blank lines and lines starting with ``#`` or ``%`` are skipped. Columns past
    the third are ignored, as is a third column that is not an integer.
    """
    fh, owned = _open_text(source)
    try:
        for lineno, line in enumerate(fh, start=1):
            s = line.strip()
            if not s or s[0] in "#%":
                continue
            parts = s.split()
            if len(parts) < 2:
                raise EdgeListError(lineno, line)
            try:
                u, v = int(parts[0]), int(parts[1])
            except ValueError:
                raise EdgeListError(lineno, line) from None
            ts = None
            if len(parts) > 2:
                try:
                    ts = int(parts[2])
                except ValueError:
                    try:
                        ts = int(float(parts[2]))
                    except ValueError:
                        ts = None
            yield u, v, ts
    finally:
        if owned:
            fh.close()


def _dense_ids(labels: Iterable[int]) -> tuple[dict[int, int], dict[int, int]]:
    order = sorted(set(labels))
    to_id = {label: i for i, label in enumerate(order)}
    return to_id, dict(enumerate(order))


def load_edge_list(source: Source) -> Graph:
    """Load a whitespace-separated edge list as a simple undirected graph.

    Labels are remapped to dense ids in ascending label order, so loading the
    same file twice gives identical graphs and label maps.
    """
    raw = [(u, v) for u, v, _ in iter_edge_lines(source)]
    to_id, labels = _dense_ids(x for e in raw for x in e)
    return Graph.from_edges(len(labels), ((to_id[u], to_id[v]) for u, v in raw), labels)


@dataclass
class EdgeStream:
    """Timestamp-ordered edges over the dense ids of an initially empty graph."""

    empty_graph: Graph
    edges: list[Edge]
    timestamped: bool
    timestamps: list[int] = field(default_factory=list)

    def vertexless_graph(self) -> Graph:
        """Graph with no vertices yet but the full label map, for replays in
        which vertices appear with their first edge."""
        return Graph({}, self.empty_graph.labels)

    def batches(self, batch_size: int) -> Iterator[list[Edge]]:
        if batch_size <= 0:
            raise ValueError("batch size must be positive")
        for i in range(0, len(self.edges), batch_size):
            yield self.edges[i:i + batch_size]

    def batches_by_timestamp(self) -> Iterator[list[Edge]]:
        """One batch per distinct timestamp, in time order."""
        if not self.timestamped:
            raise ValueError("stream has no timestamps")
        start = 0
        for i in range(1, len(self.edges) + 1):
            if i == len(self.edges) or self.timestamps[i] != self.timestamps[start]:
                yield self.edges[start:i]
                start = i


def load_edge_stream(source: Source) -> EdgeStream:
    """Load a (possibly timestamped) edge list for replay.

    Edges are stably sorted by timestamp. If any line lacks a timestamp, file
    order is used instead and ``timestamped`` is False.
    """
    raw = list(iter_edge_lines(source))
    to_id, labels = _dense_ids(x for u, v, _ in raw for x in (u, v))
    timestamped = bool(raw) and all(ts is not None for _, _, ts in raw)
    if timestamped:
        raw.sort(key=lambda t: t[2])
    empty = Graph({i: frozenset() for i in range(len(labels))}, labels)
    edges = [(to_id[u], to_id[v]) for u, v, _ in raw]
    return EdgeStream(empty, edges, timestamped, [t for _, _, t in raw] if timestamped else [])


# -- rankings ----------------------------------------------------------------


@dataclass(frozen=True)
class RankAssignment:
    """Total order on vertices by ``(metric, id)``."""

    name: str
    metric: Mapping[int, int] = field(repr=False)

    def key(self, v: int) -> tuple[int, int]:
        return (self.metric[v], v)

    def greater(self, v: int, w: int) -> bool:
        """True iff rank(v) > rank(w)."""
        mv, mw = self.metric[v], self.metric[w]
        return mv > mw or (mv == mw and v > w)

    def order(self) -> list[int]:
        """Vertices in increasing rank."""
        return sorted(self.metric, key=self.key)

    def argmin(self, vertices: Iterable[int]) -> int:
        return min(vertices, key=self.key)


def degree_ranking(g: Graph) -> RankAssignment:
    return RankAssignment("degree", {v: len(nb) for v, nb in g.adj.items()})


def triangle_counts(g: Graph) -> dict[int, int]:
    """Triangles through each vertex: half the sum over neighbours of common-neighbour counts."""
    adj = g.adj
    return {v: sum(len(nb & adj[u]) for u in nb) // 2 for v, nb in adj.items()}


def triangle_ranking(g: Graph) -> RankAssignment:
    return RankAssignment("triangle", triangle_counts(g))


def core_numbers(g: Graph) -> dict[int, int]:
    """Core number of every vertex by bucket-queue min-degree peeling, O(n + m)."""
    verts: Sequence[int] = sorted(g.adj)
    pos_of = {v: i for i, v in enumerate(verts)}
    n = len(verts)
    if n == 0:
        return {}
    deg = [len(g.adj[v]) for v in verts]
    max_deg = max(deg)
    # bin_start[d]: first slot in `order` holding a vertex of current degree d
    counts = [0] * (max_deg + 1)
    for d in deg:
        counts[d] += 1
    bin_start = [0] * (max_deg + 1)
    s = 0
    for d in range(max_deg + 1):
        bin_start[d] = s
        s += counts[d]
    order = [0] * n
    slot = [0] * n
    fill = bin_start[:]
    for i, d in enumerate(deg):
        slot[i] = fill[d]
        order[fill[d]] = i
        fill[d] += 1
    for k in range(n):
        i = order[k]
        for w in g.adj[verts[i]]:
            j = pos_of[w]
            dj = deg[j]
            if dj > deg[i]:
                # swap j to the front of its bin, then shrink the bin
                front = bin_start[dj]
                other = order[front]
                if other != j:
                    order[slot[j]], order[front] = other, j
                    slot[other], slot[j] = slot[j], front
                bin_start[dj] += 1
                deg[j] = dj - 1
    return {verts[i]: deg[i] for i in range(n)}


def degeneracy_ranking(g: Graph) -> RankAssignment:
    return RankAssignment("degeneracy", core_numbers(g))


RANKINGS = {
    "degree": degree_ranking,
    "triangle": triangle_ranking,
    "degeneracy": degeneracy_ranking,
}


def ranking_by_name(g: Graph, name: str) -> RankAssignment:
    try:
        return RANKINGS[name](g)
    except KeyError:
        raise ValueError(f"unknown ranking {name!r}; choose from {sorted(RANKINGS)}") from None
