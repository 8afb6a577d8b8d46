import random
from itertools import combinations
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gpm import apps, oracle
from gpm.engine import (ConnectivityMap, Embedding, _is_canonical_extension,
                        connectivity_query, decode_embedding_code,
                        embedding_code, extend, mine)
from gpm.graph import Graph, has_edge, orient
from gpm.patterns import canonical_code, clique, named_motifs, triangle, wedge

from conftest import random_graph


class TestBasicCounts:
    def test_tc_k4(self, k4):
        count, _ = apps.count_triangles(k4)
        assert count == 4

    def test_4cl_k5(self, k5):
        count, _ = apps.count_cliques(k5, 4)
        assert count == 5

    def test_3mc_diamond(self, diamond_graph):
        counts, _, _ = apps.count_motifs(diamond_graph, 3)
        assert counts[canonical_code(wedge())] == 2
        assert counts[canonical_code(triangle())] == 2

    def test_diamond_pattern_on_diamond_graph(self, diamond_graph):
        count, _ = apps.count_subgraphs(diamond_graph, named_motifs(4)["diamond"])
        assert count == 1

    def test_empty_graph(self):
        g = Graph.from_edges(0, [])
        counts, _, _ = apps.count_motifs(g, 3)
        assert all(v == 0 for v in counts.values())

    def test_k_larger_than_graph(self, path3):
        count, _ = apps.count_cliques(path3, 4)
        assert count == 0


class TestExtend:
    def test_tc_dag_intersection(self, k4):
        og = orient(k4, "degree")
        spec = apps.triangle_spec()
        assert sorted(extend(og, spec, [0, 1])) == [2, 3]

    def test_generic_filter_path(self, path3):
        spec = apps.motif_spec(3)
        assert extend(path3, spec, [0]) == [1]
        assert extend(path3, spec, [1]) == [2]  # {0,1} only reachable from 0
        assert extend(path3, spec, [0, 1]) == [2]

    def test_match_plan_diamond(self, diamond_graph):
        spec = apps.subgraph_listing_spec(named_motifs(4)["diamond"])
        # chords of the diamond graph are vertices 1 and 2; without the degree
        # filter the pole 3 also passes this level (rejected deeper)
        assert extend(diamond_graph, spec, [1]) == [2, 3]
        assert extend(diamond_graph, spec, [1], use_df=True) == [2]


class TestConnectivityMap:
    def test_positions_returned(self):
        # v3 adjacent to the vertices at positions 0 and 2
        g = Graph.from_edges(5, [(0, 1), (0, 2), (1, 2), (0, 3), (2, 3), (2, 4)])
        mnc = ConnectivityMap(g.adjacency())
        members = set()
        for depth, v in enumerate([0, 1, 2]):
            members.add(v)
            mnc.push(v, depth, members)
        assert connectivity_query(mnc, 3) == 0b101  # positions {0, 2}
        assert connectivity_query(mnc, 4) == 0b100  # position {2}

    def test_no_neighbors_empty(self):
        g = Graph.from_edges(3, [(0, 1)])
        mnc = ConnectivityMap(g.adjacency())
        mnc.push(0, 0, {0})
        assert mnc.lookup(2) == 0

    def test_pop_restores_exactly(self, rng):
        g = random_graph(rng, 30, 0.2)
        mnc = ConnectivityMap(g.adjacency())
        members = set()
        stack = []
        snapshots = [dict(mnc.bits)]
        for depth in range(6):
            v = rng.randrange(30)
            while v in members:
                v = rng.randrange(30)
            members.add(v)
            stack.append(v)
            mnc.push(v, depth, members)
            snapshots.append(dict(mnc.bits))
        for depth in range(5, -1, -1):
            mnc.pop(depth)
            members.discard(stack.pop())
            assert mnc.bits == snapshots[depth]

    def test_lookup_matches_has_edge(self, rng):
        for _ in range(10):
            g = random_graph(rng, 25, 0.25)
            mnc = ConnectivityMap(g.adjacency())
            verts = rng.sample(range(25), 4)
            members = set()
            for depth, v in enumerate(verts):
                members.add(v)
                mnc.push(v, depth, members)
            for u in range(25):
                if u in members:
                    continue
                expect = sum(1 << i for i, v in enumerate(verts) if has_edge(g, v, u))
                assert mnc.lookup(u) == expect


class TestEmbeddingCode:
    def test_concatenation(self):
        # four levels: codes 1, 11, 101 -> "111101"
        g = Graph.from_edges(4, [(0, 1), (0, 2), (1, 2), (0, 3), (2, 3)])
        emb = Embedding(g)
        emb.push(0, 0)
        emb.push(1, 0b1)
        emb.push(2, 0b11)
        emb.push(3, 0b101)
        assert embedding_code(emb) == "111101"

    def test_two_vertex(self):
        g = Graph.from_edges(2, [(0, 1)])
        emb = Embedding(g)
        emb.push(0, 0)
        emb.push(1, 1)
        assert embedding_code(emb) == "1"

    def test_triangle_code(self):
        g = Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])
        emb = Embedding(g)
        emb.push(0, 0)
        emb.push(1, 0b1)
        emb.push(2, 0b11)
        assert embedding_code(emb) == "111"

    def test_decode_roundtrip(self):
        assert decode_embedding_code("111101") == [(0, 1), (0, 2), (1, 2), (0, 3), (2, 3)]
        assert decode_embedding_code("1") == [(0, 1)]


class TestCanonicalFilter:
    @given(seed=st.integers(0, 10 ** 6))
    @settings(max_examples=50, deadline=None)
    def test_exactly_one_sequence_per_set(self, seed):
        rng = random.Random(seed)
        n = rng.randint(2, 20)
        g = random_graph(rng, n, rng.uniform(0.1, 0.6))
        k = rng.randint(2, 4)
        accepted = _accepted_sequences(g, k)
        per_set = {}
        for seq in accepted:
            per_set.setdefault(frozenset(seq), []).append(seq)
        # exactly one accepted sequence per connected set of size k
        expected = {frozenset(s) for s in oracle.connected_vertex_sets(g, k)}
        assert set(per_set) == expected
        assert all(len(v) == 1 for v in per_set.values())

    def test_incremental_equals_full_recomputation(self, rng):
        for _ in range(200):
            n = rng.randint(3, 12)
            g = random_graph(rng, n, 0.4)
            adj = [set(a) for a in g.adjacency()]
            k = rng.randint(2, 4)
            verts = [rng.randrange(n)]
            codes = [0]
            for _ in range(k - 1):
                cands = sorted({u for v in verts for u in adj[v]} - set(verts))
                if not cands:
                    break
                u = rng.choice(cands)
                mask = sum(1 << i for i, v in enumerate(verts) if u in adj[v])
                verts.append(u)
                codes.append(mask)
            if len(verts) < 2:
                continue
            *prefix, last = verts
            umask = codes[-1]
            full = _is_canonical_extension(prefix, codes[:-1], last, umask)
            incr = _incremental_accept(prefix, last, umask)
            if _prefix_canonical(prefix, codes[:-1]):
                assert full == incr


def _prefix_canonical(verts, codes):
    if len(verts) == 1:
        return True
    return _is_canonical_extension(verts[:-1], codes[:-1], verts[-1], codes[-1])


def _incremental_accept(prefix, u, umask):
    if u < prefix[0]:
        return False
    for i in range(1, len(prefix)):
        if u < prefix[i] and umask & ((1 << i) - 1):
            return False
    return True


def _accepted_sequences(g, k):
    """All embeddings the generic plan enumerates, captured via process."""
    seqs = []
    spec = apps.motif_spec(k, listing=True, process=lambda e: seqs.append(tuple(e.vertices)))
    mine(g, spec)
    return seqs


class TestOracleEquivalence:
    @pytest.mark.parametrize("k", [3, 4])
    def test_motifs_match_oracle(self, rng, k):
        for _ in range(6):
            g = random_graph(rng, rng.randint(20, 60), rng.uniform(0.05, 0.2))
            counts, _, _ = apps.count_motifs(g, k)
            assert {c: v for c, v in counts.items() if v} == \
                   oracle.count_vertex_induced(g, k)

    def test_subgraph_listing_matches_oracle(self, rng):
        patterns = [named_motifs(4)["diamond"], named_motifs(4)["4-cycle"],
                    named_motifs(4)["tailed-triangle"], wedge()]
        for _ in range(4):
            g = random_graph(rng, rng.randint(15, 40), 0.2)
            for p in patterns:
                count, _ = apps.count_subgraphs(g, p)
                assert count == oracle.count_edge_induced(g, p)

    def test_cliques_match_oracle(self, rng):
        for _ in range(4):
            g = random_graph(rng, rng.randint(15, 50), 0.3)
            for k in (3, 4, 5):
                count, _ = apps.count_cliques(g, k)
                key = canonical_code(clique(k))
                assert count == oracle.count_vertex_induced(g, k).get(key, 0)


class TestDeterminismAndToggles:
    def test_worker_counts_identical(self, rng):
        g = random_graph(rng, 50, 0.12)
        base = None
        for w in (1, 2, 4, 8):
            counts, enum, run = apps.count_motifs(g, 4, workers=w)
            snap = (counts, enum, run.accepted)
            if base is None:
                base = snap
            else:
                assert snap == base

    def test_mnc_toggle_neutral(self, rng):
        g = random_graph(rng, 40, 0.15)
        on = mine(g, apps.motif_spec(4), use_mnc=True)
        off = mine(g, apps.motif_spec(4), use_mnc=False)
        assert on.pattern_map == off.pattern_map
        assert on.enumerated == off.enumerated
        assert on.accepted == off.accepted

    def test_df_toggle_counts_only(self, rng):
        g = random_graph(rng, 40, 0.15)
        p = named_motifs(4)["tailed-triangle"]
        on = mine(g, apps.subgraph_listing_spec(p), use_df=True)
        off = mine(g, apps.subgraph_listing_spec(p), use_df=False)
        assert on.pattern_map == off.pattern_map

    def test_orientation_none_matches_dag(self, rng):
        g = random_graph(rng, 40, 0.25)
        for k in (3, 4):
            a, _ = apps.count_cliques(g, k, orientation="auto")
            b, _ = apps.count_cliques(g, k, orientation="none")
            c, _ = apps.count_cliques(g, k, orientation="core")
            assert a == b == c


class TestHooks:
    def test_terminate_on_first_triangle(self, k4):
        spec = apps.triangle_spec(terminate=lambda emb: True)
        result = mine(k4, spec)
        assert result.terminated
        assert sum(result.pattern_map.values()) >= 1

    def test_custom_support_and_reduce_default_equivalence(self, k4):
        default, _ = apps.count_triangles(k4)
        spec = apps.triangle_spec(get_support=lambda emb: 1,
                                  reduce=lambda a, b: a + b)
        result = mine(k4, spec)
        assert result.pattern_map[canonical_code(triangle())] == default

    def test_custom_pattern_classifier_symmetric_key(self):
        # labeled wedge keyed by (sorted endpoint labels, center label)
        g = Graph.from_edges(4, [(0, 1), (1, 2), (1, 3)], labels=[0, 1, 2, 0])

        def classify(emb):
            a, b, c = emb.vertices
            code = embedding_code(emb)
            labels = g.labels
            if code == "110":  # wedge centered at position 0
                ends, center = (labels[b], labels[c]), labels[a]
            elif code == "101":
                ends, center = (labels[a], labels[c]), labels[b]
            else:
                ends, center = (labels[a], labels[b]), labels[c]
            return (tuple(sorted(ends)), center, "wedge" if code.count("1") == 2 else "tri")

        spec = apps.motif_spec(3, get_pattern=classify)
        result = mine(g, spec)
        # wedges 0-1-2 and 2-1-3 share the key ((0,2),1,...); 0-1-3 keys ((0,0),1,...)
        assert result.pattern_map[((0, 2), 1, "wedge")] == 2
        assert result.pattern_map[((0, 0), 1, "wedge")] == 1

    def test_to_add_restricts(self, k4):
        spec = apps.triangle_spec(to_add=lambda emb, u: u != 3)
        result = mine(k4, spec)
        assert result.pattern_map[canonical_code(triangle())] == 1  # only {0,1,2}

    def test_to_extend_last_only_on_clique_graph(self, k5):
        # cliques: restricting extension to the last position keeps counts
        spec = apps.motif_spec(3, to_extend=lambda emb, pos: pos == emb.depth)
        full = mine(k5, apps.motif_spec(3))
        restricted = mine(k5, spec)
        key = canonical_code(triangle())
        assert restricted.pattern_map[key] == full.pattern_map[key]

    def test_listing_delivers_each_once(self, rng):
        g = random_graph(rng, 25, 0.2)
        seen = []
        spec = apps.motif_spec(3, listing=True,
                               process=lambda emb: seen.append(frozenset(emb.vertices)))
        mine(g, spec)
        assert len(seen) == len(set(seen))
        assert len(seen) == sum(oracle.count_vertex_induced(g, 3).values())


class TestCounters:
    def test_counter_at_least_reported(self, rng):
        g = random_graph(rng, 40, 0.15)
        result = mine(g, apps.motif_spec(4))
        assert result.enumerated >= result.accepted
        assert result.accepted >= sum(result.pattern_map.values())

    def test_implicit_filter(self, rng):
        g = random_graph(rng, 30, 0.2)
        spec = apps.motif_spec(3, is_implicit_pattern=lambda p: len(p.edges) == 3)
        result = mine(g, spec)
        assert set(result.pattern_map) == {canonical_code(triangle())}


def test_closed_form_cliques():
    for n in range(3, 9):
        kn = Graph.from_edges(n, list(combinations(range(n), 2)))
        tc, _ = apps.count_triangles(kn)
        assert tc == comb(n, 3)
        for k in range(2, min(n, 6) + 1):
            c, _ = apps.count_cliques(kn, k)
            assert c == comb(n, k)


def test_debug_mode_clean_run(rng):
    g = random_graph(rng, 30, 0.2)
    result = mine(g, apps.motif_spec(4), debug=True)
    ref = mine(g, apps.motif_spec(4))
    assert result.pattern_map == ref.pattern_map


class TestSpecRouting:
    def test_caller_supplied_oriented_graph(self, k5):
        from gpm.graph import orient
        og = orient(k5, "degree")
        result = mine(og, apps.clique_spec(4))
        assert result.pattern_map[canonical_code(clique(4))] == 5

    def test_oriented_graph_rejected_for_non_clique(self, k5):
        from gpm.graph import orient
        og = orient(k5, "degree")
        with pytest.raises(TypeError):
            mine(og, apps.motif_spec(3))

    def test_multi_pattern_explicit_spec(self, rng):
        from gpm.engine import ProblemSpec
        from gpm.patterns import named_motifs
        names = named_motifs(4)
        targets = (names["4-clique"], names["4-cycle"])
        g = random_graph(rng, 30, 0.25)
        result = mine(g, ProblemSpec(vertex_induced=True, k=4, patterns=targets))
        expect = oracle.count_vertex_induced(g, 4)
        for p in targets:
            key = canonical_code(p)
            assert result.pattern_map.get(key, 0) == expect.get(key, 0)

    def test_vertex_induced_explicit_single_pattern(self, rng):
        from gpm.engine import ProblemSpec
        p = named_motifs(4)["tailed-triangle"]
        for _ in range(5):
            g = random_graph(rng, 25, 0.25)
            result = mine(g, ProblemSpec(vertex_induced=True, k=4, patterns=(p,)))
            expect = oracle.count_vertex_induced(g, 4).get(canonical_code(p), 0)
            assert result.pattern_map.get(canonical_code(p), 0) == expect

    def test_spec_validation(self):
        from gpm.engine import ProblemSpec
        with pytest.raises(ValueError, match="nonempty"):
            ProblemSpec(vertex_induced=True, k=3, explicit=True, patterns=())
        with pytest.raises(ValueError, match="k must be"):
            ProblemSpec(vertex_induced=True, k=0, explicit=False)


class TestLabeledMatching:
    def test_labeled_pattern_counts_match_oracle(self, rng):
        from gpm.patterns import Pattern
        for _ in range(8):
            n = rng.randint(8, 30)
            g = random_graph(rng, n, 0.25, labels=2)
            # labeled wedge: distinct end labels pin the orientation
            p = Pattern(3, [(0, 1), (1, 2)], labels=(0, 1, 0))
            from gpm.engine import ProblemSpec
            spec = ProblemSpec(vertex_induced=False, k=2, patterns=(p,))
            result = mine(g, spec)
            got = result.pattern_map.get(canonical_code(p), 0)
            assert got == oracle.count_edge_induced(g, p)

    def test_labeled_triangle_patterns(self, rng):
        from gpm.patterns import Pattern
        for labels in [(0, 0, 1), (0, 1, 1), (0, 0, 0)]:
            p = Pattern(3, [(0, 1), (1, 2), (0, 2)], labels=labels)
            for _ in range(3):
                g = random_graph(rng, 20, 0.35, labels=2)
                count, _ = apps.count_subgraphs(g, p)
                assert count == oracle.count_edge_induced(g, p)

    def test_motif_counts_ignore_labels(self, rng):
        from gpm.graph import Graph
        g = random_graph(rng, 25, 0.25, labels=3)
        plain = Graph(g.vertex_count, g.row_offsets, g.neighbors)
        for k in (3, 4):
            a, _, _ = apps.count_motifs(g, k)
            b, _, _ = apps.count_motifs(plain, k)
            assert a == b
