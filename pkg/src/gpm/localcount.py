"""Formula-based local counting for 3- and 4-vertex motifs.

Instead of enumerating every motif, count per-vertex and per-edge quantities
during a cheap enumeration (triangles, or 4-cliques plus 4-cycles) and recover
the remaining motif counts with closed-form corrections. The correction
constants are calibrated once against the brute-force oracle on a basis of
small graphs (see `calibrate_corrections` and scripts/calibrate_mc4.py) and
frozen below; tests re-derive and assert them.
"""
from __future__ import annotations

from fractions import Fraction

from .engine import ProblemSpec, mine
from .patterns import canonical_code, clique, cycle, named_motifs, triangle

# raw accumulator keys used inside the shared pattern map during local runs
_RAW_DIAMOND = "_raw_diamond"
_RAW_TAILED = "_raw_tailed"
_RAW_PATH = "_raw_path"
_RAW_STAR = "_raw_star"

# frozen oracle-calibrated corrections (exact rationals):
#   diamond        = raw_diamond / 2 - 6 * cliques4
#   tailed-tri     = (raw_tailed - 4 * diamond) / 2
#   4-path         = raw_path - 4 * cycles4
#   3-star         = (raw_star - 2 * tailed-tri) / 6
#   wedge          = raw_wedge - 3 * triangles
MC4_CORRECTIONS = {
    "diamond": {"raw": Fraction(1, 2), "4-clique": Fraction(-6)},
    "tailed-triangle": {"raw": Fraction(1, 2), "diamond": Fraction(-2)},
    "4-path": {"raw": Fraction(1), "4-cycle": Fraction(-4)},
    "3-star": {"raw": Fraction(1, 6), "tailed-triangle": Fraction(-1, 3)},
}
MC3_WEDGE_TRIANGLE_FACTOR = 3


def local_wedge_count(deg_u, deg_v, tri):
    """Wedges through an edge from its endpoint degrees and triangle count."""
    return (deg_u - tri - 1) + (deg_v - tri - 1)


def _apply_correction(row, raw, helpers):
    total = Fraction(raw) * row["raw"]
    for name, coef in row.items():
        if name != "raw":
            total += Fraction(helpers[name]) * coef
    if total.denominator != 1:
        raise ArithmeticError("correction did not produce an integer count")
    return int(total)


def mc3_local_counts(g, workers=1):
    """3-motif counts {wedge, triangle} without enumerating wedges.

    One triangle enumeration; a per-root hook accumulates choose(deg, 2) so
    the wedge total falls out as the star sum minus three per triangle.
    """
    wedge_key = "_raw_wedge"

    def accumulate(emb, depth, acc):
        if depth == 0:
            d = emb.graph.degree(emb.history(0))
            acc[wedge_key] = acc.get(wedge_key, 0) + d * (d - 1) // 2

    spec = ProblemSpec(vertex_induced=True, k=3, patterns=(triangle(),),
                       local_reduce=accumulate)
    result = mine(g, spec, workers=workers)
    tri = result.pattern_map.get(canonical_code(triangle()), 0)
    raw_wedge = result.pattern_map.get(wedge_key, 0)
    counts = {
        canonical_code(named_motifs(3)["wedge"]): raw_wedge - MC3_WEDGE_TRIANGLE_FACTOR * tri,
        canonical_code(triangle()): tri,
    }
    return counts, result


def mc4_local_counts(g, workers=1):
    """All six 4-motif counts from per-edge formulas plus two enumerations.

    The 4-clique walk visits every edge once at depth 1; the hook reads the
    edge's endpoint degrees and local triangle count and accumulates the raw
    diamond / tailed-triangle / 4-path / 3-star terms. Only 4-cliques and
    4-cycles are enumerated exactly; the frozen corrections turn raw sums into
    exact vertex-induced counts.
    """
    adj = g.adjacency()

    def accumulate(emb, depth, acc):
        if depth != 1:
            return
        u = emb.history(0)
        v = emb.history(1)
        au, av = adj[u], adj[v]
        tri = 0
        i = j = 0
        nu, nv = len(au), len(av)
        while i < nu and j < nv:
            a, b = au[i], av[j]
            if a < b:
                i += 1
            elif b < a:
                j += 1
            else:
                tri += 1
                i += 1
                j += 1
        star_u = len(au) - tri - 1
        star_v = len(av) - tri - 1
        acc[_RAW_DIAMOND] = acc.get(_RAW_DIAMOND, 0) + tri * (tri - 1)
        acc[_RAW_TAILED] = acc.get(_RAW_TAILED, 0) + tri * (star_u + star_v)
        acc[_RAW_PATH] = acc.get(_RAW_PATH, 0) + star_u * star_v
        acc[_RAW_STAR] = (acc.get(_RAW_STAR, 0)
                          + star_u * (star_u - 1) + star_v * (star_v - 1))

    clique_spec = ProblemSpec(vertex_induced=True, k=4, patterns=(clique(4),),
                              local_reduce=accumulate)
    # degree filtering stays off: the per-edge hook must see every edge
    clique_run = mine(g, clique_spec, workers=workers, use_df=False)

    cycle_spec = ProblemSpec(vertex_induced=True, k=4, patterns=(cycle(4),))
    cycle_run = mine(g, cycle_spec, workers=workers)

    names = named_motifs(4)
    k4 = clique_run.pattern_map.get(canonical_code(names["4-clique"]), 0)
    c4 = cycle_run.pattern_map.get(canonical_code(names["4-cycle"]), 0)
    raw_d = clique_run.pattern_map.get(_RAW_DIAMOND, 0)
    raw_t = clique_run.pattern_map.get(_RAW_TAILED, 0)
    raw_p = clique_run.pattern_map.get(_RAW_PATH, 0)
    raw_s = clique_run.pattern_map.get(_RAW_STAR, 0)

    cor = MC4_CORRECTIONS
    diamond = _apply_correction(cor["diamond"], raw_d, {"4-clique": k4})
    tailed = _apply_correction(cor["tailed-triangle"], raw_t, {"diamond": diamond})
    path4 = _apply_correction(cor["4-path"], raw_p, {"4-cycle": c4})
    star3 = _apply_correction(cor["3-star"], raw_s, {"tailed-triangle": tailed})

    counts = {
        canonical_code(names["4-path"]): path4,
        canonical_code(names["3-star"]): star3,
        canonical_code(names["4-cycle"]): c4,
        canonical_code(names["tailed-triangle"]): tailed,
        canonical_code(names["diamond"]): diamond,
        canonical_code(names["4-clique"]): k4,
    }
    enumerated = clique_run.enumerated + cycle_run.enumerated
    return counts, clique_run, cycle_run, enumerated


def calibrate_corrections(sample_graphs=None):
    """Re-derive the frozen corrections from the oracle over a graph basis.

    Solves, per motif, the small linear system exact = a * raw + b * helper
    over the basis and verifies a zero residual; returns the coefficients in
    the same shape as MC4_CORRECTIONS.
    """
    import numpy as np

    from .oracle import count_vertex_induced

    if sample_graphs is None:
        sample_graphs = _calibration_basis()

    rows = []
    names = named_motifs(4)
    keys = {m: canonical_code(p) for m, p in names.items()}
    for g in sample_graphs:
        oc = count_vertex_induced(g, 4)
        raws = _raw_terms(g)
        rows.append((raws, {m: oc.get(k, 0) for m, k in keys.items()}))

    def solve(feature_names, target):
        a = np.array([[float(r[0][f]) if f in r[0] else float(r[1][f])
                       for f in feature_names] for r in rows])
        y = np.array([float(r[1][target]) for r in rows])
        coef, residuals, rank, _ = np.linalg.lstsq(a, y, rcond=None)
        pred = a @ coef
        if not np.allclose(pred, y, atol=1e-6):
            raise ArithmeticError(f"calibration failed for {target}")
        return [Fraction(c).limit_denominator(64) for c in coef]

    c_d = solve(["raw_diamond", "4-clique"], "diamond")
    c_t = solve(["raw_tailed", "diamond"], "tailed-triangle")
    c_p = solve(["raw_path", "4-cycle"], "4-path")
    c_s = solve(["raw_star", "tailed-triangle"], "3-star")
    return {
        "diamond": {"raw": c_d[0], "4-clique": c_d[1]},
        "tailed-triangle": {"raw": c_t[0], "diamond": c_t[1]},
        "4-path": {"raw": c_p[0], "4-cycle": c_p[1]},
        "3-star": {"raw": c_s[0], "tailed-triangle": c_s[1]},
    }


def _raw_terms(g):
    adj = g.adjacency()
    raw = {"raw_diamond": 0, "raw_tailed": 0, "raw_path": 0, "raw_star": 0}
    for u in range(g.vertex_count):
        for v in adj[u]:
            if v <= u:
                continue
            common = len(set(adj[u]) & set(adj[v]))
            su = len(adj[u]) - common - 1
            sv = len(adj[v]) - common - 1
            raw["raw_diamond"] += common * (common - 1)
            raw["raw_tailed"] += common * (su + sv)
            raw["raw_path"] += su * sv
            raw["raw_star"] += su * (su - 1) + sv * (sv - 1)
    return raw


def _calibration_basis():
    from .graph import Graph

    def G(n, edges):
        return Graph.from_edges(n, edges)

    basis = [
        G(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]),   # K4
        G(4, [(0, 1), (1, 2), (2, 3), (3, 0)]),                   # C4
        G(4, [(0, 1), (0, 2), (0, 3)]),                           # star
        G(4, [(0, 1), (1, 2), (2, 3)]),                           # path
        G(4, [(0, 1), (0, 2), (1, 2), (0, 3)]),                   # tailed triangle
        G(4, [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]),           # diamond
        G(5, [(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (1, 3),
              (1, 4), (2, 3), (2, 4), (3, 4)]),                   # K5
        G(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 2)]),   # C5 + chord
        G(6, [(0, 1), (0, 2), (1, 2), (2, 3), (3, 4), (3, 5), (4, 5), (1, 4)]),
    ]
    return basis
