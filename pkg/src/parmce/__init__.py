"""Parallel maximal clique enumeration on static graphs and incremental
maintenance of maximal cliques under batched edge insertion."""

from .core import (
    ExcludedEdges,
    OracleLimitError,
    SearchState,
    maximal_cliques,
    oracle_enumerate,
    ttt,
    ttt_exclude_edges,
    verify_maximal,
)
from .dynamic import (
    CliqueDelta,
    CliqueIndex,
    IncrementalEngine,
    imce_step,
    par_imce_new,
    par_imce_sub,
    par_ttt_exclude_edges,
    seq_imce_step,
)
from .graph import (
    EdgeBatch,
    EdgeListError,
    Graph,
    RankAssignment,
    add_vertices,
    apply_batch,
    degeneracy_ranking,
    degree_ranking,
    induced_subgraph,
    load_edge_list,
    load_edge_stream,
    normalize_batch,
    ranking_by_name,
    triangle_ranking,
)
from .parallel import ParallelConfig, par_mce, par_pivot, par_ttt
from .sinks import CallbackSink, CliqueSink, CollectingSink, CountingSink, EnumerationStats

__all__ = [
    "CallbackSink", "CliqueDelta", "CliqueIndex", "CliqueSink", "CollectingSink", "CountingSink",
    "EdgeBatch", "EdgeListError", "EnumerationStats", "ExcludedEdges", "Graph", "IncrementalEngine",
    "OracleLimitError", "ParallelConfig", "RankAssignment", "SearchState", "add_vertices", "apply_batch",
    "degeneracy_ranking", "degree_ranking", "imce_step", "induced_subgraph", "load_edge_list",
    "load_edge_stream", "maximal_cliques", "normalize_batch", "oracle_enumerate", "par_imce_new",
    "par_imce_sub", "par_mce", "par_pivot", "par_ttt", "par_ttt_exclude_edges", "ranking_by_name",
    "seq_imce_step", "triangle_ranking", "ttt", "ttt_exclude_edges", "verify_maximal",
]
