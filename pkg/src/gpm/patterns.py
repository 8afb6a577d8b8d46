"""Small-pattern algebra: canonical codes, automorphism orbits, symmetry-breaking
partial orders, matching orders, and pattern enumeration.

Everything here is brute-force over vertex permutations, bounded at 8 vertices;
the mining workloads only ever analyze patterns this small (larger cliques take
a fast path that never touches isomorphism machinery).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations

from .graph import GraphParseError

BRUTE_FORCE_BOUND = 8


class Pattern:
    """Connected simple graph on local vertex ids 0..k-1, optionally labeled."""

    __slots__ = ("vertex_count", "edges", "labels", "_hash")

    def __init__(self, vertex_count, edges, labels=None):
        self.vertex_count = int(vertex_count)
        es = set()
        for u, v in edges:
            if u == v:
                raise ValueError("pattern has a self loop")
            if not (0 <= u < vertex_count and 0 <= v < vertex_count):
                raise ValueError(f"pattern edge ({u}, {v}) out of range")
            es.add((min(u, v), max(u, v)))
        self.edges = tuple(sorted(es))
        self.labels = None if labels is None else tuple(labels)
        if self.labels is not None and len(self.labels) != vertex_count:
            raise ValueError("label tuple length mismatch")
        if not self._connected():
            raise ValueError("pattern must be connected")
        self._hash = hash((self.vertex_count, self.edges, self.labels))

    @classmethod
    def from_edges(cls, edges, labels=None):
        n = max(max(u, v) for u, v in edges) + 1
        return cls(n, edges, labels=labels)

    def _connected(self):
        if self.vertex_count <= 1:
            return True
        adj = self.adjacency()
        seen = {0}
        stack = [0]
        while stack:
            v = stack.pop()
            for u in adj[v]:
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        return len(seen) == self.vertex_count

    def adjacency(self):
        adj = [[] for _ in range(self.vertex_count)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return [sorted(a) for a in adj]

    def adjacency_sets(self):
        adj = [set() for _ in range(self.vertex_count)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj

    def degree(self, v):
        return sum(1 for e in self.edges if v in e)

    def min_degree(self):
        return min(self.degree(v) for v in range(self.vertex_count))

    def edge_count(self):
        return len(self.edges)

    def __eq__(self, other):
        return (isinstance(other, Pattern)
                and self.vertex_count == other.vertex_count
                and self.edges == other.edges
                and self.labels == other.labels)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        lbl = f", labels={self.labels}" if self.labels else ""
        return f"Pattern(k={self.vertex_count}, edges={list(self.edges)}{lbl})"


# -- common pattern constructors ------------------------------------------------

def single_edge():
    return Pattern(2, [(0, 1)])


def wedge():
    return Pattern(3, [(0, 1), (1, 2)])


def triangle():
    return clique(3)


def clique(k):
    return Pattern(k, list(combinations(range(k), 2)))


def cycle(k):
    return Pattern(k, [(i, (i + 1) % k) for i in range(k)])


def path(k):
    return Pattern(k, [(i, i + 1) for i in range(k - 1)])


def star(leaves):
    return Pattern(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def is_clique(p):
    """True iff the pattern has every possible edge."""
    k = p.vertex_count
    return len(p.edges) == k * (k - 1) // 2


def load_pattern(path_):
    """Read a pattern file: "u v" edge lines plus optional "v id label" lines."""
    edges = []
    raw_labels = {}
    max_id = -1
    with open(path_, "r", encoding="utf-8") as f:
        for lineno, raw in enumerate(f, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if parts[0] == "v":
                if len(parts) != 3:
                    raise GraphParseError(f"{path_}:{lineno}: expected 'v id label'")
                raw_labels[int(parts[1])] = parts[2]
                max_id = max(max_id, int(parts[1]))
                continue
            if len(parts) != 2:
                raise GraphParseError(f"{path_}:{lineno}: expected 'u v' or 'v id label'")
            try:
                u, v = int(parts[0]), int(parts[1])
            except ValueError:
                raise GraphParseError(f"{path_}:{lineno}: non-integer vertex id")
            edges.append((u, v))
            max_id = max(max_id, u, v)
    n = max_id + 1
    labels = None
    if raw_labels:
        tokens = set(raw_labels.values())
        try:
            names = sorted(tokens, key=int)
        except ValueError:
            names = sorted(tokens)
        index = {t: i for i, t in enumerate(names)}
        labels = tuple(index.get(raw_labels.get(v), 0) if raw_labels.get(v) is not None else 0
                       for v in range(n))
        missing = [v for v in range(n) if v not in raw_labels]
        if missing:
            raise GraphParseError(f"{path_}: pattern labels missing for vertices {missing}")
    return Pattern(n, edges, labels=labels)


# -- canonical form and automorphisms -------------------------------------------

def _edge_bits(k, edge_set, perm):
    """Upper-triangle adjacency bits of the pattern relabeled by perm.

    perm[new_id] = old_id; bit order (0,1), (0,2), ..., (k-2,k-1), MSB first.
    """
    bits = 0
    for a in range(k):
        pa = perm[a]
        for b in range(a + 1, k):
            bits <<= 1
            pb = perm[b]
            if (pa, pb) in edge_set or (pb, pa) in edge_set:
                bits |= 1
    return bits


@lru_cache(maxsize=4096)
def _canonical_key(vertex_count, edges, labels):
    if len(edges) == vertex_count * (vertex_count - 1) // 2:
        # cliques bypass the permutation search: every relabeling is identical
        bits = (1 << len(edges)) - 1
        lbl = tuple(sorted(labels)) if labels is not None else ()
        return bits, lbl
    if vertex_count > BRUTE_FORCE_BOUND:
        raise ValueError(f"pattern too large for brute-force canonicalization "
                         f"(k={vertex_count} > {BRUTE_FORCE_BOUND})")
    edge_set = set(edges)
    best = None
    for perm in permutations(range(vertex_count)):
        bits = _edge_bits(vertex_count, edge_set, perm)
        lbl = tuple(labels[v] for v in perm) if labels is not None else ()
        key = (bits, lbl)
        if best is None or key < best:
            best = key
    return best


def canonical_code(p):
    """Canonical byte string: equal codes iff isomorphic (labels respected).

    Layout: vertex count, then the minimal upper-triangle adjacency bits
    (big-endian), then one byte per vertex label when labeled.
    """
    bits, lbl = _canonical_key(p.vertex_count, p.edges, p.labels)
    k = p.vertex_count
    nbytes = max(1, (k * (k - 1) // 2 + 7) // 8)
    out = bytes([k]) + bits.to_bytes(nbytes, "big")
    if p.labels is not None:
        out += bytes(lbl)
    return out


def pattern_from_code_bits(k, bits, labels=None):
    """Inverse of `_edge_bits` for the identity permutation."""
    edges = []
    total = k * (k - 1) // 2
    i = 0
    for a in range(k):
        for b in range(a + 1, k):
            if (bits >> (total - 1 - i)) & 1:
                edges.append((a, b))
            i += 1
    return Pattern(k, edges, labels=labels)


@lru_cache(maxsize=4096)
def _automorphisms(vertex_count, edges, labels):
    if vertex_count > BRUTE_FORCE_BOUND:
        raise ValueError("pattern too large for brute-force automorphisms")
    edge_set = set(edges)
    autos = []
    for perm in permutations(range(vertex_count)):
        if labels is not None and any(labels[perm[v]] != labels[v] for v in range(vertex_count)):
            continue
        ok = True
        for u, v in edges:
            a, b = perm[u], perm[v]
            if (min(a, b), max(a, b)) not in edge_set:
                ok = False
                break
        if ok:
            autos.append(perm)
    return tuple(autos)


def automorphisms(p):
    """All vertex permutations mapping the pattern onto itself."""
    return _automorphisms(p.vertex_count, p.edges, p.labels)


def automorphism_orbits(p):
    """Partition of vertices into equivalence classes under automorphisms."""
    parent = list(range(p.vertex_count))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for perm in automorphisms(p):
        for v in range(p.vertex_count):
            a, b = find(v), find(perm[v])
            if a != b:
                parent[a] = b
    groups = {}
    for v in range(p.vertex_count):
        groups.setdefault(find(v), []).append(v)
    return sorted(tuple(sorted(g)) for g in groups.values())


# -- symmetry-breaking partial orders --------------------------------------------

def _chain_constraints(p, sequence):
    """Ordering constraints along a vertex sequence via a stabilizer chain.

    Walk the sequence; at step j, every later vertex lying in the orbit of
    sequence[j] under the group stabilizing sequence[:j] must receive a larger
    graph id. Returned as (i, j) pairs over sequence positions, i < j, meaning
    id(match[i]) < id(match[j]). Together the constraints admit exactly one
    matched sequence per automorphism class.
    """
    group = list(automorphisms(p))
    pos_of = {v: i for i, v in enumerate(sequence)}
    constraints = set()
    for j, vj in enumerate(sequence):
        orbit = {perm[vj] for perm in group}
        for w in orbit:
            if w != vj and pos_of[w] > j:
                constraints.add((j, pos_of[w]))
        group = [perm for perm in group if perm[vj] == vj]
    return constraints


def _transitive_reduction(pairs, size):
    """Drop constraints implied by transitivity; pairs all point forward."""
    succ = {i: set() for i in range(size)}
    for a, b in pairs:
        succ[a].add(b)
    reduced = set()
    for a, b in sorted(pairs):
        # reachable from a without using (a, b)?
        stack = [c for c in succ[a] if c != b]
        seen = set(stack)
        found = False
        while stack:
            c = stack.pop()
            if b in succ[c]:
                found = True
                break
            for d in succ[c]:
                if d not in seen:
                    seen.add(d)
                    stack.append(d)
        if not found:
            reduced.add((a, b))
    return tuple(sorted(reduced))


def symmetry_orders(p, order):
    """Partial-order constraints (position pairs) for the given matching order."""
    seq = order.sequence if isinstance(order, MatchingOrder) else tuple(order)
    cons = _chain_constraints(p, seq)
    return _transitive_reduction(cons, p.vertex_count)


@dataclass(frozen=True)
class MatchingOrder:
    """Vertex visit order plus the per-position constraints the engine checks.

    required[i] / forbidden[i]: earlier positions that must / must not be
    adjacent to the vertex matched at position i. orders: (i, j) position
    pairs meaning the graph id matched at i is smaller than at j.
    """
    sequence: tuple
    required: tuple
    forbidden: tuple
    orders: tuple

    @property
    def k(self):
        return len(self.sequence)


def matching_order(p):
    """Choose a matching order greedily: prefer prefixes that pick up
    symmetry-breaking constraints early, then denser prefixes, then the
    smallest canonical code; ties finally fall back to vertex id. All start
    vertices are tried and the best score vector wins.

    The constraint count for a candidate is the number of stabilizer-chain
    orbits of earlier picks that contain it (the constraints symmetry_orders
    will later emit for that position), so the chain is carried along the
    prefix instead of being rebuilt per candidate.
    """
    k = p.vertex_count
    adj = p.adjacency_sets()

    def grow(start):
        seq = [start]
        group = list(automorphisms(p))
        orbits = [{perm[start] for perm in group}]
        group = [perm for perm in group if perm[start] == start]
        score = [(0, 0, _NegBytes(canonical_code(Pattern(1, []))))]
        while len(seq) < k:
            prefix = set(seq)
            cands = sorted({u for v in seq for u in adj[v]} - prefix)
            best = None
            for c in cands:
                n_cons = sum(1 for ob in orbits if c in ob)
                sub = _induced(p, seq + [c])
                key = (n_cons, sub.edge_count(), _neg_code(sub), -c)
                if best is None or key > best[0]:
                    best = (key, c)
            key, c = best
            seq.append(c)
            orbits.append({perm[c] for perm in group})
            group = [perm for perm in group if perm[c] == c]
            score.append((key[0], key[1], key[2]))
        return tuple(seq), tuple(score)

    best_seq = best_score = None
    for start in range(k):
        seq, score = grow(start)
        if best_score is None or score > best_score or (score == best_score and seq < best_seq):
            best_seq, best_score = seq, score

    seq = best_seq
    required = []
    forbidden = []
    for i, v in enumerate(seq):
        req = frozenset(j for j in range(i) if seq[j] in adj[v])
        forb = frozenset(j for j in range(i) if seq[j] not in adj[v])
        required.append(req)
        forbidden.append(forb)
    orders = symmetry_orders(p, seq)
    return MatchingOrder(seq, tuple(required), tuple(forbidden), orders)


def _induced(p, verts):
    index = {v: i for i, v in enumerate(verts)}
    sub_edges = [(index[u], index[v]) for u, v in p.edges if u in index and v in index]
    labels = tuple(p.labels[v] for v in verts) if p.labels is not None else None
    return Pattern(len(verts), sub_edges, labels=labels)


class _NegBytes:
    """Reverses byte-string comparison so 'smaller code' wins a max()."""

    __slots__ = ("b",)

    def __init__(self, b):
        self.b = b

    def __lt__(self, other):
        return self.b > other.b

    def __eq__(self, other):
        return self.b == other.b

    def __gt__(self, other):
        return self.b < other.b

    def __le__(self, other):
        return self.b >= other.b

    def __ge__(self, other):
        return self.b <= other.b


def _neg_code(sub):
    return _NegBytes(canonical_code(sub))


# -- pattern enumeration ----------------------------------------------------------

def all_patterns(k):
    """All connected unlabeled patterns on k vertices, one per isomorphism class."""
    if not (3 <= k <= 5):
        raise ValueError("all_patterns supports 3 <= k <= 5")
    total = k * (k - 1) // 2
    seen = {}
    pair_list = list(combinations(range(k), 2))
    for mask in range(1 << total):
        edges = [pair_list[i] for i in range(total) if (mask >> i) & 1]
        if len(edges) < k - 1:
            continue
        try:
            p = Pattern(k, edges)
        except ValueError:
            continue
        seen.setdefault(canonical_code(p), p)
    return [seen[c] for c in sorted(seen, key=lambda c: (len(seen[c].edges), c))]


# -- motif naming -----------------------------------------------------------------

def named_motifs(k):
    if k == 3:
        return {"wedge": wedge(), "triangle": triangle()}
    if k == 4:
        return {
            "4-path": path(4),
            "3-star": star(3),
            "4-cycle": cycle(4),
            "tailed-triangle": Pattern(4, [(0, 1), (0, 2), (1, 2), (0, 3)]),
            "diamond": Pattern(4, [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]),
            "4-clique": clique(4),
        }
    return {}


@lru_cache(maxsize=None)
def _code_names(k):
    return {canonical_code(p): name for name, p in named_motifs(k).items()}


def motif_name(code):
    """Readable name for a 3- or 4-motif canonical code; hex string otherwise."""
    if isinstance(code, bytes) and len(code) >= 1:
        name = _code_names(code[0]).get(code)
        if name:
            return name
    if isinstance(code, bytes):
        return code.hex()
    return str(code)
