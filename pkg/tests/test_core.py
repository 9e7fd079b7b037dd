from __future__ import annotations

import sys
from collections import Counter
from itertools import combinations

import pytest
from hypothesis import given, settings

from parmce.core import (
    ExcludedEdges,
    OracleLimitError,
    SearchState,
    choose_pivot,
    maximal_cliques,
    oracle_enumerate,
    ttt,
    ttt_exclude_edges,
    verify_maximal,
)
from parmce.generators import (
    complete_graph,
    cycle_graph,
    five_graph,
    k4_with_pendant,
    moon_moser,
    path_graph,
)
from parmce.graph import Graph
from parmce.sinks import CollectingSink, CountingSink, EnumerationStats

from conftest import small_graphs

A, B, C, D, E = range(5)


def run_ttt(g: Graph, state: SearchState | None = None) -> CollectingSink:
    sink = CollectingSink()
    ttt(g, state, sink)
    return sink


def run_excl(g: Graph, K, cand, fini, excluded) -> set:
    sink = CollectingSink()
    state = SearchState(tuple(K), set(cand), set(fini), ExcludedEdges.from_edges(excluded))
    ttt_exclude_edges(g, state, sink)
    return sink.cliques


def test_triangle():
    assert run_ttt(complete_graph(3)).cliques == {(0, 1, 2)}


def test_path():
    assert run_ttt(path_graph(3)).cliques == {(0, 1), (1, 2)}


def test_moon_moser_nine():
    sink = run_ttt(moon_moser(3))
    assert len(sink.cliques) == 27
    assert all(len(c) == 3 for c in sink.cliques)
    assert sink.cliques == oracle_enumerate(moon_moser(3))


def test_five_vertex_after_first_batch():
    assert run_ttt(five_graph("b")).cliques == {(A, B, E), (B, C, D), (B, D, E)}


def test_empty_graph_emits_nothing():
    assert run_ttt(Graph.from_edges(0, [])).cliques == set()


def test_isolated_vertices_are_singletons():
    assert run_ttt(Graph.from_edges(3, [(0, 1)])).cliques == {(0, 1), (2,)}


def test_state_restricts_output():
    g = five_graph("b")
    # cliques containing b that avoid a
    sink = run_ttt(g, SearchState((B,), {C, D, E}, {A}))
    assert sink.cliques == {(B, C, D), (B, D, E)}


def test_ttt_rejects_exclusions():
    state = SearchState((), {0, 1}, set(), ExcludedEdges.from_edges([(0, 1)]))
    with pytest.raises(ValueError):
        ttt(complete_graph(2), state, CollectingSink())


def test_clique_deeper_than_recursion_limit():
    g = complete_graph(300)
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(150)
    try:
        sink = CountingSink()
        ttt(g, None, sink)
    finally:
        sys.setrecursionlimit(old)
    assert sink.count == 1 and sink.max_size == 300


# -- pivot ---------------------------------------------------------------------


def test_pivot_tie_goes_to_smallest_id():
    g = complete_graph(3)
    assert choose_pivot(g.adj, {0, 1, 2}, set()) == 0


def test_pivot_may_come_from_fini():
    g = Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)])
    assert choose_pivot(g.adj, {1, 2, 3}, {0}) == 0


def test_pivot_needs_candidates():
    with pytest.raises(ValueError):
        choose_pivot(complete_graph(2).adj, set(), set())


# -- exclusion -----------------------------------------------------------------


def test_exclusion_empty_matches_ttt():
    g = five_graph("c")
    assert run_excl(g, (A, D), {B, C, E}, set(), []) == run_ttt(g, SearchState((A, D), {B, C, E}, set())).cliques


def test_exclusion_blocks_only_extension():
    g = complete_graph(5)
    assert run_excl(g, (A, D), {B, C, E}, set(), [(A, C)]) == set()


def test_k5_without_exclusion():
    assert run_excl(complete_graph(5), (A, C), {B, D, E}, set(), []) == {(A, B, C, D, E)}


def test_k5_two_exclusions():
    assert run_excl(complete_graph(5), (C, E), {A, B, D}, set(), [(A, C), (A, D)]) == set()


def test_exclusion_rejects_bad_start():
    with pytest.raises(ValueError):
        run_excl(complete_graph(3), (0, 1), {2}, set(), [(0, 1)])


@given(small_graphs(max_n=11))
@settings(max_examples=80, deadline=None)
def test_exclusion_matches_filtered_oracle(g):
    """Edge subproblems of an insertion batch: K = {u, v}, cand = common neighbours."""
    edges = sorted(g.edges())
    truth = oracle_enumerate(g)
    for i, (u, v) in enumerate(edges[:6]):
        excluded = edges[:i]
        cand = g.adj[u] & g.adj[v]
        got = run_excl(g, (u, v), cand, set(), excluded)
        ex = ExcludedEdges.from_edges(excluded)
        expected = {c for c in truth if u in c and v in c and not ex.within(c)}
        assert got == expected


# -- oracle and verification ---------------------------------------------------


def test_oracle_k4():
    assert oracle_enumerate(complete_graph(4)) == {(0, 1, 2, 3)}


def test_oracle_five_cycle():
    assert oracle_enumerate(cycle_graph(5)) == {(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)}


def test_oracle_moon_moser_twelve():
    assert len(oracle_enumerate(moon_moser(4))) == 81


def test_oracle_refuses_large_graphs():
    with pytest.raises(OracleLimitError):
        oracle_enumerate(path_graph(65))


@pytest.mark.parametrize("c, expected", [((0, 1), False), ((0, 1, 2), True), ((0,), False), ((), False)])
def test_verify_maximal_triangle(c, expected):
    assert verify_maximal(complete_graph(3), c) is expected


def test_verify_maximal_non_cliques_and_pendant():
    g = k4_with_pendant()
    assert verify_maximal(g, (0, 4))
    assert verify_maximal(g, (0, 1, 2, 3))
    for size in (1, 2, 3):
        for c in combinations(range(4), size):
            assert not verify_maximal(g, c)
    assert not verify_maximal(g, (1, 4))


def test_verify_maximal_empty_graph():
    assert verify_maximal(Graph.from_edges(0, []), ())


@given(small_graphs())
@settings(max_examples=150, deadline=None)
def test_ttt_matches_oracle_without_duplicates(g):
    sink = run_ttt(g)
    assert sink.cliques == oracle_enumerate(g)
    assert sink.duplicates() == {}
    assert all(verify_maximal(g, c) for c in sink.cliques)


@given(small_graphs())
@settings(max_examples=60, deadline=None)
def test_exclusion_free_call_equals_ttt(g):
    assert run_excl(g, (), set(g.adj), set(), []) == maximal_cliques(g)


@given(small_graphs())
@settings(max_examples=40, deadline=None)
def test_stats_histogram_totals(g):
    sink = CountingSink()
    ttt(g, None, sink)
    stats = EnumerationStats.from_sink(sink, g.max_degree(), 0.0)
    assert sum(stats.histogram.values()) == stats.clique_count
    assert Counter(len(c) for c in maximal_cliques(g)) == Counter(stats.histogram)
