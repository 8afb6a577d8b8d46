"""Built-in applications wired onto the engine.

High level: triangle counting, k-clique counting, subgraph listing for an
explicit pattern, and k-motif counting. Low level: clique search over a
shrinking local graph, and formula-based motif counting (see `localcount`).
"""
from __future__ import annotations

from . import localcount
from .engine import ProblemSpec, mine
from .graph import Graph
from .localgraph import clique_local_hooks
from .patterns import all_patterns, canonical_code, clique, triangle


def triangle_spec(**hooks):
    return ProblemSpec(vertex_induced=True, k=3, patterns=(triangle(),), **hooks)


def clique_spec(k, **hooks):
    return ProblemSpec(vertex_induced=True, k=k, patterns=(clique(k),), **hooks)


def clique_local_spec(k, **hooks):
    init_lg, update_lg = clique_local_hooks()
    return ProblemSpec(vertex_induced=True, k=k, patterns=(clique(k),),
                       init_local=init_lg, update_local=update_lg, **hooks)


def motif_spec(k, **hooks):
    return ProblemSpec(vertex_induced=True, k=k, explicit=False, **hooks)


def subgraph_listing_spec(pattern, **hooks):
    return ProblemSpec(vertex_induced=False, k=pattern.edge_count(),
                       patterns=(pattern,), **hooks)


def count_triangles(g, **options):
    result = mine(g, triangle_spec(), **options)
    return result.pattern_map.get(canonical_code(triangle()), 0), result


def count_cliques(g, k, *, level="hi", **options):
    spec = clique_spec(k) if level == "hi" else clique_local_spec(k)
    result = mine(g, spec, **options)
    return result.pattern_map.get(canonical_code(clique(k)), 0), result


def count_motifs(g, k, *, level="hi", **options):
    """Vertex-induced motif counts keyed by canonical pattern code.

    Motifs are structural, so labels are ignored; every motif of size k
    appears in the map, zero counts included.
    """
    if g.labels is not None:
        g = Graph(g.vertex_count, g.row_offsets, g.neighbors)
    if level == "hi":
        result = mine(g, motif_spec(k), **options)
        counts = dict(result.pattern_map)
        enumerated = result.enumerated
        run = result
    elif k == 3:
        counts, run = localcount.mc3_local_counts(g, workers=options.get("workers", 1))
        enumerated = run.enumerated
    elif k == 4:
        counts, run, _, enumerated = localcount.mc4_local_counts(
            g, workers=options.get("workers", 1))
    else:
        raise ValueError("formula-based motif counting supports k in {3, 4}")
    for p in all_patterns(k):
        counts.setdefault(canonical_code(p), 0)
    return counts, enumerated, run


def count_subgraphs(g, pattern, **options):
    spec = subgraph_listing_spec(pattern)
    result = mine(g, spec, **options)
    return result.pattern_map.get(canonical_code(pattern), 0), result
