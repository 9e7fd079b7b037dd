"""Timed runs of the static algorithms and the subproblem-imbalance report."""

from __future__ import annotations

import csv
import heapq
import io
import statistics
import time
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .core import ttt
from .graph import Graph, RankAssignment, degree_ranking, ranking_by_name
from .parallel import ParallelConfig, par_mce, par_ttt
from .sinks import Clique, CliqueSink, CollectingSink, CountingSink

ALGOS = ("ttt", "parttt", "parmce")
CSV_HEADER = ("algo", "ranking", "threads", "repeat", "RT_ms", "ET_ms", "TR_ms", "cliques", "speedup")


def run_static(
    g: Graph,
    algo: str,
    sink: CliqueSink,
    cfg: ParallelConfig,
    ranking: str = "degree",
) -> tuple[float, float]:
    """Run one enumeration; returns (ranking seconds, enumeration seconds)."""
    if algo not in ALGOS:
        raise ValueError(f"unknown algorithm {algo!r}; choose from {ALGOS}")
    rt = 0.0
    if algo == "parmce":
        t0 = time.perf_counter()
        rank = ranking_by_name(g, ranking)
        rt = time.perf_counter() - t0
    t0 = time.perf_counter()
    if algo == "ttt":
        ttt(g, None, sink)
    elif algo == "parttt":
        par_ttt(g, None, sink, cfg)
    else:
        par_mce(g, rank, sink, cfg)
    return rt, time.perf_counter() - t0


@dataclass
class BenchRow:
    algo: str
    ranking: str
    threads: int
    repeat: int
    rt_ms: int
    et_ms: int
    tr_ms: int
    cliques: int
    seconds: float = 0.0  # unrounded total, used for speedups
    speedup: float | None = None

    def as_tuple(self) -> tuple:
        sp = "" if self.speedup is None else f"{self.speedup:.2f}"
        return (self.algo, self.ranking, self.threads, self.repeat, self.rt_ms, self.et_ms, self.tr_ms, self.cliques, sp)


def _ms(seconds: float) -> int:
    return int(round(seconds * 1000))


def bench(
    g: Graph,
    algos: Sequence[str] = ALGOS,
    rankings: Sequence[str] = ("degree",),
    threads: Sequence[int] = (1,),
    repeats: int = 1,
    grain: int = 16,
    backend: str = "thread",
) -> list[BenchRow]:
    """One row per (configuration, repeat). Speedup is the median ttt total time
    over this row's total time."""
    rows: list[BenchRow] = []
    for algo in algos:
        configs: list[tuple[str, int]]
        if algo == "ttt":
            configs = [("-", 1)]
        elif algo == "parttt":
            configs = [("-", t) for t in threads]
        else:
            configs = [(r, t) for r in rankings for t in threads]
        for ranking, t in configs:
            cfg = ParallelConfig(t, grain, backend)
            for rep in range(repeats):
                sink = CountingSink()
                rt, et = run_static(g, algo, sink, cfg, ranking if ranking != "-" else "degree")
                rows.append(BenchRow(algo, ranking, t, rep, _ms(rt), _ms(et), _ms(rt) + _ms(et), sink.count, rt + et))
    base = [r.seconds for r in rows if r.algo == "ttt"]
    if base:
        ref = statistics.median(base)
        for r in rows:
            r.speedup = ref / max(r.seconds, 1e-9)
    return rows


def rows_to_csv(rows: Iterable[BenchRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow(r.as_tuple())
    return buf.getvalue()


# -- imbalance -----------------------------------------------------------------


def _fraction_reaching(counts: Sequence[int], total: int, share: float, n: int) -> float:
    """Fraction of ``n`` subproblems needed, largest first, to reach ``share`` of ``total``."""
    if total == 0 or n == 0:
        return 0.0
    acc = 0
    for k, c in enumerate(sorted(counts, reverse=True), start=1):
        acc += c
        if acc >= share * total:
            return k / n
    return 1.0


def greedy_cover_fraction(cliques: Sequence[Clique], n: int, share: float = 0.9) -> tuple[float, int]:
    """Greedy set cover over per-vertex subproblems (all cliques containing a vertex).

    Returns (fraction of the ``n`` subproblems picked, number picked) to cover
    ``share`` of the cliques. Greedy picks at least as many as the optimum, so
    the fraction is an upper bound on the smallest covering fraction.
    """
    total = len(cliques)
    if total == 0 or n == 0:
        return 0.0, 0
    member: dict[int, list[int]] = {}
    for idx, c in enumerate(cliques):
        for v in c:
            member.setdefault(v, []).append(idx)
    covered = [False] * total
    heap = [(-len(ids), v) for v, ids in member.items()]
    heapq.heapify(heap)
    done = 0
    picked = 0
    need = share * total
    while heap and done < need:
        neg, v = heapq.heappop(heap)
        gain = sum(1 for i in member[v] if not covered[i])
        if gain == 0:
            continue
        if heap and gain < -heap[0][0]:
            heapq.heappush(heap, (-gain, v))
            continue
        for i in member[v]:
            if not covered[i]:
                covered[i] = True
                done += 1
        picked += 1
    return picked / n, picked


@dataclass
class ImbalanceReport:
    ranking: str
    subproblems: int
    cliques: int
    owner_counts: list[tuple[int, int]] = field(repr=False)
    owner_fraction_90: float
    member_top_share: float
    cover_fraction_90: float
    cover_picked: int

    @property
    def owner_top_share(self) -> float:
        return self.owner_counts[0][1] / self.cliques if self.cliques else 0.0

    @property
    def uniform_share(self) -> float:
        return 1.0 / self.subproblems if self.subproblems else 0.0

    def summary_rows(self) -> list[tuple[str, str]]:
        return [
            ("ranking", self.ranking),
            ("subproblems", str(self.subproblems)),
            ("cliques", str(self.cliques)),
            ("uniform_share", f"{self.uniform_share:.6f}"),
            ("owner_top_share", f"{self.owner_top_share:.6f}"),
            ("owner_fraction_90", f"{self.owner_fraction_90:.6f}"),
            ("member_top_share", f"{self.member_top_share:.6f}"),
            ("cover_fraction_90", f"{self.cover_fraction_90:.6f}"),
        ]

    def to_csv(self, detail: int = 0, labels: Mapping[int, int] | None = None) -> str:
        """Summary rows, then the ``detail`` largest owners (by original label if given)."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("imbalance_metric", "value"))
        w.writerows(self.summary_rows())
        if detail:
            w.writerow(())
            w.writerow(("subproblem", "emitted", "share"))
            for v, c in self.owner_counts[:detail]:
                name = labels.get(v, v) if labels is not None else v
                w.writerow((name, c, f"{c / max(self.cliques, 1):.6f}"))
        return buf.getvalue()


def imbalance_report(
    g: Graph, ranking: RankAssignment | None = None, cfg: ParallelConfig | None = None
) -> ImbalanceReport:
    """Emission counts per owning subproblem of the per-vertex decomposition,
    plus the per-vertex membership view (cliques containing each vertex)."""
    ranking = ranking or degree_ranking(g)
    sink = CollectingSink(track_owners=True)
    par_mce(g, ranking, sink, cfg or ParallelConfig())
    owners: Counter[int] = Counter({v: 0 for v in g.adj})
    for c, tags in sink.owner_of.items():
        for t in tags:
            owners[t] += 1
    cliques = sorted(sink.cliques)
    total = len(cliques)
    n = g.n
    member = Counter(v for c in cliques for v in c)
    cover_frac, picked = greedy_cover_fraction(cliques, n)
    return ImbalanceReport(
        ranking=ranking.name,
        subproblems=n,
        cliques=total,
        owner_counts=sorted(owners.items(), key=lambda kv: (-kv[1], kv[0])),
        owner_fraction_90=_fraction_reaching(list(owners.values()), total, 0.9, n),
        member_top_share=(max(member.values()) / total) if total else 0.0,
        cover_fraction_90=cover_frac,
        cover_picked=picked,
    )
