"""Parallel depth-first subgraph mining engine.

One task per root vertex, handed to a small thread pool through a shared
counter (stealing granularity = one task); every piece of mutable scratch
(embedding stack, connectivity map, partial pattern map) is worker-private
and merged after the walk, so results are identical for any worker count.

Problem analysis picks one of a few execution plans:

* triangle: oriented (or ascending) two-level walk with sorted-list
  intersection for the closing vertex;
* clique: oriented walk extending the last vertex, candidates checked for
  adjacency to the whole embedding via the connectivity map;
* match: matching-order guided search for one explicit pattern with
  per-position adjacency / non-adjacency constraints and symmetry-breaking
  id orders;
* generic: pattern-oblivious vertex extension for implicit-pattern problems,
  deduplicated by a canonical-sequence filter (exactly one accepted DFS
  sequence per connected vertex set);
* local: extension candidates drawn from a user-maintained shrinking local
  graph (see `localgraph`).

Edge-induced implicit problems (frequent subgraph mining) traverse the
sub-pattern tree instead; see `fsm`.
"""
from __future__ import annotations

import itertools
import operator
import os
import threading
import time
from bisect import bisect_left
from dataclasses import dataclass

from .graph import OrientedGraph, orient
from .patterns import Pattern, canonical_code, is_clique, matching_order


class HookMisuseError(RuntimeError):
    """A low-level hook violated an engine invariant (debug mode only)."""


class _StopMining(Exception):
    """Internal control flow for early termination."""


@dataclass
class ProblemSpec:
    """Declarative description of one mining run plus optional hooks.

    Flags: `vertex_induced` picks vertex or edge extension; `listing` asks for
    every embedding to be delivered to `process`; `explicit` means `patterns`
    enumerates the targets, otherwise `is_implicit_pattern` (default: accept
    all) selects patterns on the fly. `k` is the maximum embedding size:
    vertices when vertex-induced, edges when edge-induced.

    Support handling: `get_support` maps an embedding to a support value
    (default 1) and `reduce` combines two values (default +). The low-level
    hooks mirror the extension pipeline: `to_extend(emb, pos)` selects which
    embedding positions spawn candidates, `to_add(emb, u)` /
    `to_add_edge(emb, e)` veto individual extensions, `get_pattern(emb)`
    overrides pattern classification, `local_reduce(emb, depth, acc)` streams
    per-vertex or per-edge counts, and `init_local` / `update_local` maintain
    a local search graph.
    """

    vertex_induced: bool
    k: int
    listing: bool = False
    explicit: bool = True
    patterns: tuple = None
    is_implicit_pattern: callable = None
    process: callable = None
    terminate: callable = None
    support_anti_monotonic: bool = True
    get_support: callable = None
    reduce: callable = None
    to_extend: callable = None
    to_add: callable = None
    to_add_edge: callable = None
    get_pattern: callable = None
    local_reduce: callable = None
    init_local: callable = None
    update_local: callable = None

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.explicit:
            if not self.patterns:
                raise ValueError("explicit problems need a nonempty pattern list")
            self.patterns = tuple(self.patterns)

    def reducer(self):
        return self.reduce if self.reduce is not None else operator.add

    def support_of(self, emb):
        return self.get_support(emb) if self.get_support is not None else 1


@dataclass
class MiningResult:
    """Reduced supports plus search-space accounting.

    `enumerated` counts extension candidates the walk materialized (the
    search-space measure; unaffected by memoization), `accepted` counts the
    ones that survived every filter including `to_add`.
    """

    pattern_map: dict
    enumerated: int = 0
    accepted: int = 0
    terminated: bool = False
    wall_ms: float = 0.0
    workers: int = 1


class Embedding:
    """DFS stack of graph vertices with per-level connectivity codes.

    `codes[l]` has bit i set iff the level-l vertex is adjacent to the level-i
    ancestor; concatenating the codes reconstructs the induced subgraph.
    """

    __slots__ = ("graph", "vertices", "codes", "members")

    def __init__(self, graph):
        self.graph = graph
        self.vertices = []
        self.codes = []
        self.members = set()

    def push(self, v, code):
        self.vertices.append(v)
        self.codes.append(code)
        self.members.add(v)

    def pop(self):
        v = self.vertices.pop()
        self.codes.pop()
        self.members.discard(v)
        return v

    def size(self):
        return len(self.vertices)

    @property
    def depth(self):
        return len(self.vertices) - 1

    def last(self):
        return self.vertices[-1]

    def history(self, level):
        return self.vertices[level]

    def connectivity_code(self, level):
        return self.codes[level]

    def __repr__(self):
        return f"Embedding({self.vertices})"


def embedding_code(emb):
    """Concatenated per-level connectivity codes as a '0'/'1' string."""
    parts = []
    for level in range(1, len(emb.vertices)):
        c = emb.codes[level]
        parts.append("".join("1" if (c >> i) & 1 else "0" for i in range(level)))
    return "".join(parts)


def decode_embedding_code(code_str):
    """Rebuild the induced adjacency (as level-pair edges) from a code string."""
    edges = []
    pos = 0
    level = 1
    while pos < len(code_str):
        for i in range(level):
            if code_str[pos] == "1":
                edges.append((i, level))
            pos += 1
        level += 1
    if pos != len(code_str):
        raise ValueError("code length is not a triangular number")
    return edges


class ConnectivityMap:
    """Worker-private map: graph vertex -> bit-set of adjacent embedding positions.

    Pushing the level-d vertex sets bit d for each of its neighbors outside
    the embedding; the per-level undo log makes pop restore the exact
    pre-push state.
    """

    __slots__ = ("adj", "bits", "log")

    def __init__(self, adj):
        self.adj = adj
        self.bits = {}
        self.log = []

    def push(self, v, depth, members):
        bit = 1 << depth
        bits = self.bits
        touched = []
        for w in self.adj[v]:
            if w not in members:
                bits[w] = bits.get(w, 0) | bit
                touched.append(w)
        self.log.append(touched)

    def pop(self, depth):
        mask = ~(1 << depth)
        bits = self.bits
        for w in self.log.pop():
            nb = bits[w] & mask
            if nb:
                bits[w] = nb
            else:
                del bits[w]

    def lookup(self, u):
        return self.bits.get(u, 0)


def connectivity_query(mnc, u):
    """Positions of embedding vertices adjacent to u, as a bit-set."""
    return mnc.lookup(u)


class _WorkerState:
    __slots__ = ("emb", "mnc", "map", "considered", "accepted")

    def __init__(self, graph, adj, use_mnc):
        self.emb = Embedding(graph)
        self.mnc = ConnectivityMap(adj) if use_mnc else None
        self.map = {}
        self.considered = 0
        self.accepted = 0


def _list_has(adj, u, v):
    lst = adj[u]
    i = bisect_left(lst, v)
    return i < len(lst) and lst[i] == v


class _PlanBase:
    """Shared context: graph views, hooks, counters, finalization."""

    def __init__(self, g, spec, opts):
        self.g = g
        self.spec = spec
        self.opts = opts
        self.adj = g.adjacency()
        self.stop = opts["stop"]
        self.term = opts["term"]
        self.debug = opts.get("debug", False)
        self.use_mnc = opts.get("use_mnc", False)
        self.use_df = opts.get("use_df", True)
        self._reduce = spec.reducer()
        self._get_support = spec.get_support
        self._process = spec.process
        self._terminate = spec.terminate
        self._dbg_tick = 0

    def n_roots(self):
        return self.g.vertex_count

    def make_state(self):
        return _WorkerState(self.g, self.adj, self.use_mnc)

    def full_degree(self, v):
        return self.g.degree(v)

    def _local_reduce(self, st, depth):
        lr = self.spec.local_reduce
        if lr is not None:
            lr(st.emb, depth, st.map)

    def _finalize(self, st, key):
        emb = st.emb
        m = st.map
        sup = 1 if self._get_support is None else self._get_support(emb)
        if key in m:
            m[key] = self._reduce(m[key], sup)
        else:
            m[key] = sup
        if self._process is not None:
            self._process(emb)
        if self._terminate is not None and self._terminate(emb):
            self.term.set()
            self.stop.set()
            raise _StopMining

    def _debug_check(self, st, u, mask, depth):
        # sampled soundness checks: map bits and codes agree with the graph
        self._dbg_tick += 1
        if self._dbg_tick % 32:
            return
        emb = st.emb
        if len(emb.members) != len(emb.vertices):
            raise HookMisuseError("duplicate vertex admitted into a vertex-induced embedding")
        for i, v in enumerate(emb.vertices[:depth]):
            if bool((mask >> i) & 1) != _list_has(self.adj, v, u):
                raise HookMisuseError("connectivity map disagrees with the graph")


class _TrianglePlan(_PlanBase):
    """Explicit triangle: two-level walk closing with a sorted intersection."""

    def __init__(self, g, spec, opts, key):
        super().__init__(g, spec, opts)
        self.key = key
        self.ascending = not isinstance(g, OrientedGraph)

    def run_root(self, root, st):
        adj = self.adj
        spec = self.spec
        emb = st.emb
        df = self.use_df
        if df and self.full_degree(root) < 2:
            return
        emb.push(root, 0)
        self._local_reduce(st, 0)
        try:
            nroot = adj[root]
            stop_set = self.stop.is_set
            for u in nroot:
                if stop_set():
                    raise _StopMining
                if self.ascending and u <= root:
                    continue
                st.considered += 1
                if df and self.full_degree(u) < 2:
                    continue
                if spec.to_add is not None and not spec.to_add(emb, u):
                    continue
                st.accepted += 1
                emb.push(u, 1)
                self._local_reduce(st, 1)
                nu = adj[u]
                i = j = 0
                ni, nj = len(nroot), len(nu)
                while i < ni and j < nj:
                    a, b = nroot[i], nu[j]
                    if a < b:
                        i += 1
                    elif b < a:
                        j += 1
                    else:
                        i += 1
                        j += 1
                        if self.ascending and a <= u:
                            continue
                        st.considered += 1
                        if spec.to_add is not None and not spec.to_add(emb, a):
                            continue
                        st.accepted += 1
                        emb.push(a, 0b11)
                        self._local_reduce(st, 2)
                        self._finalize(st, self.key)
                        emb.pop()
                emb.pop()
        finally:
            emb.pop()

    def extensions_of(self, vertices):
        """Accepted candidates for a partial embedding (testing aid)."""
        adj = self.adj
        if len(vertices) == 1:
            root = vertices[0]
            return [u for u in adj[root] if not self.ascending or u > root]
        root, u = vertices
        out = []
        for w in adj[root]:
            if _list_has(adj, u, w) and (not self.ascending or w > u):
                out.append(w)
        return out


class _CliquePlan(_PlanBase):
    """Explicit k-clique: extend the last vertex; candidates must touch all."""

    def __init__(self, g, spec, opts, k, key):
        super().__init__(g, spec, opts)
        self.k = k
        self.key = key
        self.ascending = not isinstance(g, OrientedGraph)

    def run_root(self, root, st):
        if self.use_df and self.full_degree(root) < self.k - 1:
            return
        st.emb.push(root, 0)
        if st.mnc is not None:
            st.mnc.push(root, 0, st.emb.members)
        self._local_reduce(st, 0)
        try:
            if self.k == 1:
                self._finalize(st, self.key)
            else:
                self._extend(st, 1)
        finally:
            if st.mnc is not None:
                st.mnc.pop(0)
            st.emb.pop()

    def _extend(self, st, depth):
        if self.stop.is_set():
            raise _StopMining
        spec = self.spec
        emb = st.emb
        mnc = st.mnc
        bits = mnc.bits if mnc is not None else None
        adj = self.adj
        df = self.use_df
        to_add = spec.to_add
        local_reduce = spec.local_reduce
        ascending = self.ascending
        need = (1 << depth) - 1
        is_last = depth == self.k - 1
        last = emb.vertices[-1]
        considered = accepted = 0
        for u in adj[last]:
            if ascending and u <= last:
                continue
            considered += 1
            if df and self.full_degree(u) < self.k - 1:
                continue
            if bits is not None:
                if bits.get(u, 0) != need:
                    continue
            else:
                verts = emb.vertices
                ok = True
                for i in range(depth - 1):
                    if not _list_has(adj, verts[i], u):
                        ok = False
                        break
                if not ok:
                    continue
            if to_add is not None and not to_add(emb, u):
                continue
            accepted += 1
            if self.debug:
                self._debug_check(st, u, need, depth)
            emb.push(u, need)
            if local_reduce is not None:
                local_reduce(emb, depth, st.map)
            try:
                if is_last:
                    self._finalize(st, self.key)
                elif mnc is not None:
                    mnc.push(u, depth, emb.members)
                    try:
                        self._extend(st, depth + 1)
                    finally:
                        mnc.pop(depth)
                else:
                    self._extend(st, depth + 1)
            finally:
                emb.pop()
        st.considered += considered
        st.accepted += accepted

    def extensions_of(self, vertices):
        adj = self.adj
        last = vertices[-1]
        out = []
        for u in adj[last]:
            if self.ascending and u <= last:
                continue
            if all(_list_has(adj, v, u) for v in vertices[:-1]):
                out.append(u)
        return out


class _MatchPlan(_PlanBase):
    """Single explicit pattern guided by a matching order.

    Candidates come from one required-adjacent anchor position; the
    connectivity map supplies the full adjacency bit-set which is compared
    against the order's required (and, when vertex-induced, forbidden)
    position masks; symmetry-breaking id orders close the pipeline.
    """

    def __init__(self, g, spec, opts, pattern, key):
        super().__init__(g, spec, opts)
        self.pattern = pattern
        self.key = key
        self.k = pattern.vertex_count
        order = matching_order(pattern)
        self.order = order
        self.anchors = [min(order.required[i]) if order.required[i] else 0
                        for i in range(self.k)]
        self.req = [sum(1 << j for j in order.required[i]) for i in range(self.k)]
        if spec.vertex_induced:
            self.check_mask = [(1 << i) - 1 for i in range(self.k)]
        else:
            self.check_mask = list(self.req)
        self.smaller = [[a for a, b in order.orders if b == i] for i in range(self.k)]
        seq = order.sequence
        self.df_thresh = [pattern.degree(seq[i]) for i in range(self.k)]
        # labeled matching: candidates must carry the position's pattern label
        self.want_label = [None] * self.k
        self.g_labels = None
        if pattern.labels is not None and g.labels is not None:
            self.g_labels = g.labels.tolist()
            self.want_label = [pattern.labels[seq[i]] for i in range(self.k)]

    def run_root(self, root, st):
        if self.use_df and self.full_degree(root) < self.df_thresh[0]:
            return
        if self.g_labels is not None and self.g_labels[root] != self.want_label[0]:
            return
        st.emb.push(root, 0)
        if st.mnc is not None:
            st.mnc.push(root, 0, st.emb.members)
        self._local_reduce(st, 0)
        try:
            if self.k == 1:
                self._finalize(st, self.key)
            else:
                self._extend(st, 1)
        finally:
            if st.mnc is not None:
                st.mnc.pop(0)
            st.emb.pop()

    def _extend(self, st, depth):
        if self.stop.is_set():
            raise _StopMining
        spec = self.spec
        emb = st.emb
        members = emb.members
        verts = emb.vertices
        mnc = st.mnc
        bits = mnc.bits if mnc is not None else None
        adj = self.adj
        to_add = spec.to_add
        local_reduce = spec.local_reduce
        anchor_v = verts[self.anchors[depth]]
        req = self.req[depth]
        cmask = self.check_mask[depth]
        smaller = self.smaller[depth]
        df_t = self.df_thresh[depth] if self.use_df else 0
        g_labels = self.g_labels
        want = self.want_label[depth]
        is_last = depth == self.k - 1
        considered = accepted = 0
        for u in adj[anchor_v]:
            if u in members:
                continue
            considered += 1
            if df_t and self.full_degree(u) < df_t:
                continue
            if g_labels is not None and g_labels[u] != want:
                continue
            if bits is not None:
                mask = bits.get(u, 0)
            else:
                mask = 0
                for i in range(depth):
                    if _list_has(adj, verts[i], u):
                        mask |= 1 << i
            if mask & cmask != req:
                continue
            ok = True
            for j in smaller:
                if verts[j] >= u:
                    ok = False
                    break
            if not ok:
                continue
            if to_add is not None and not to_add(emb, u):
                continue
            accepted += 1
            if self.debug:
                self._debug_check(st, u, mask, depth)
            emb.push(u, mask & ((1 << depth) - 1))
            if local_reduce is not None:
                local_reduce(emb, depth, st.map)
            try:
                if is_last:
                    self._finalize(st, self.key)
                elif mnc is not None:
                    mnc.push(u, depth, members)
                    try:
                        self._extend(st, depth + 1)
                    finally:
                        mnc.pop(depth)
                else:
                    self._extend(st, depth + 1)
            finally:
                emb.pop()
        st.considered += considered
        st.accepted += accepted

    def extensions_of(self, vertices):
        depth = len(vertices)
        out = []
        adj = self.adj
        anchor_v = vertices[self.anchors[depth]]
        for u in adj[anchor_v]:
            if u in vertices:
                continue
            if self.use_df and self.full_degree(u) < self.df_thresh[depth]:
                continue
            if self.g_labels is not None and self.g_labels[u] != self.want_label[depth]:
                continue
            mask = 0
            for i in range(depth):
                if _list_has(adj, vertices[i], u):
                    mask |= 1 << i
            if mask & self.check_mask[depth] != self.req[depth]:
                continue
            if any(vertices[j] >= u for j in self.smaller[depth]):
                continue
            out.append(u)
        return out


def _is_canonical_extension(verts, codes, u, umask):
    """True iff verts + [u] is the greedy canonical sequence of its vertex set:
    start at the minimum, then always take the minimum remaining vertex
    adjacent to the chosen prefix. Prefix-closed, so it is safe to prune on.
    """
    size = len(verts) + 1
    m = [0] * size
    for l in range(1, size - 1):
        c = codes[l]
        b = 0
        while c:
            if c & 1:
                m[l] |= 1 << b
                m[b] |= 1 << l
            c >>= 1
            b += 1
    lastidx = size - 1
    c = umask
    b = 0
    while c:
        if c & 1:
            m[lastidx] |= 1 << b
            m[b] |= 1 << lastidx
        c >>= 1
        b += 1
    vals = verts + [u]
    mn = vals[0]
    for v in vals[1:]:
        if v < mn:
            return False
    visited = 1
    for step in range(1, size):
        best = -1
        bestv = None
        for idx in range(1, size):
            if (visited >> idx) & 1:
                continue
            if m[idx] & visited:
                v = vals[idx]
                if bestv is None or v < bestv:
                    bestv = v
                    best = idx
        if best != step:
            return False
        visited |= 1 << step
    return True


class _GenericPlan(_PlanBase):
    """Pattern-oblivious vertex extension for implicit-pattern problems.

    Each connected vertex set is reached through exactly one accepted DFS
    sequence (canonical-sequence filter); embeddings at size k are classified
    by the canonical code of their induced subgraph, or by `get_pattern`.
    """

    def __init__(self, g, spec, opts):
        super().__init__(g, spec, opts)
        self.k = spec.k
        self.labels = g.labels.tolist() if g.labels is not None else None
        self._key_cache = {}

    def run_root(self, root, st):
        st.emb.push(root, 0)
        if st.mnc is not None:
            st.mnc.push(root, 0, st.emb.members)
        self._local_reduce(st, 0)
        try:
            if self.k == 1:
                self._finalize(st, self._classify(st.emb))
            else:
                self._extend(st, 1)
        finally:
            if st.mnc is not None:
                st.mnc.pop(0)
            st.emb.pop()

    def _classify(self, emb):
        if self.spec.get_pattern is not None:
            return self.spec.get_pattern(emb), True
        key_src = tuple(emb.codes[1:])
        if self.labels is not None:
            key_src = (key_src, tuple(self.labels[v] for v in emb.vertices))
        cached = self._key_cache.get(key_src)
        if cached is None:
            codes = key_src[0] if self.labels is not None else key_src
            edges = []
            for level, c in enumerate(codes, start=1):
                b = 0
                while c:
                    if c & 1:
                        edges.append((b, level))
                    c >>= 1
                    b += 1
            lbl = key_src[1] if self.labels is not None else None
            p = Pattern(len(emb.vertices), edges, labels=lbl)
            key = canonical_code(p)
            wanted = (self.spec.is_implicit_pattern is None
                      or bool(self.spec.is_implicit_pattern(p)))
            cached = (key, wanted)
            self._key_cache[key_src] = cached
        return cached

    def _finalize(self, st, classified):
        key, wanted = classified
        if not wanted:
            return
        _PlanBase._finalize(self, st, key)

    def _extend(self, st, depth):
        if self.stop.is_set():
            raise _StopMining
        spec = self.spec
        emb = st.emb
        members = emb.members
        verts = emb.vertices
        mnc = st.mnc
        bits = mnc.bits if mnc is not None else None
        adj = self.adj
        to_extend = spec.to_extend
        to_add = spec.to_add
        local_reduce = spec.local_reduce
        if to_extend is None:
            positions = range(depth)
            ext_mask = (1 << depth) - 1
        else:
            positions = [p for p in range(depth) if to_extend(emb, p)]
            ext_mask = 0
            for p in positions:
                ext_mask |= 1 << p
        codes = emb.codes
        depth_mask = (1 << depth) - 1
        last = depth == self.k - 1
        root = verts[0]
        considered = accepted = 0
        debug = self.debug
        for p in positions:
            vp = verts[p]
            for u in adj[vp]:
                if u in members:
                    continue
                if bits is not None:
                    mask = bits.get(u, 0)
                else:
                    mask = 0
                    for i in range(depth):
                        if _list_has(adj, verts[i], u):
                            mask |= 1 << i
                pmask = mask & ext_mask
                if (pmask & -pmask).bit_length() - 1 != p:
                    continue
                considered += 1
                # canonical-sequence filter, incremental form: the prefix is
                # already greedy for its own set, so the extended sequence is
                # greedy iff u neither undercuts the root nor displaces any
                # earlier choice it would have been eligible for
                if u < root:
                    continue
                umask = mask & depth_mask
                reject = False
                for i in range(1, depth):
                    if u < verts[i] and umask & ((1 << i) - 1):
                        reject = True
                        break
                if reject:
                    continue
                if to_add is not None and not to_add(emb, u):
                    continue
                accepted += 1
                if debug:
                    self._debug_check(st, u, mask, depth)
                emb.push(u, umask)
                if local_reduce is not None:
                    local_reduce(emb, depth, st.map)
                try:
                    if last:
                        self._finalize(st, self._classify(emb))
                    else:
                        if mnc is not None:
                            mnc.push(u, depth, members)
                            try:
                                self._extend(st, depth + 1)
                            finally:
                                mnc.pop(depth)
                        else:
                            self._extend(st, depth + 1)
                finally:
                    emb.pop()
        st.considered += considered
        st.accepted += accepted

    def extensions_of(self, vertices):
        adj = self.adj
        depth = len(vertices)
        emb_codes = [0]
        for l in range(1, depth):
            c = 0
            for i in range(l):
                if _list_has(adj, vertices[i], vertices[l]):
                    c |= 1 << i
            emb_codes.append(c)
        out = []
        seen = set(vertices)
        for p in range(depth):
            for u in adj[vertices[p]]:
                if u in seen:
                    continue
                mask = 0
                for i in range(depth):
                    if _list_has(adj, vertices[i], u):
                        mask |= 1 << i
                if (mask & -mask).bit_length() - 1 != p:
                    continue
                if _is_canonical_extension(list(vertices), emb_codes, u, mask):
                    out.append(u)
        return out


class _LocalPlan(_PlanBase):
    """Extension candidates come from a per-root local graph the hooks shrink."""

    def __init__(self, g, spec, opts, k, key):
        super().__init__(g, spec, opts)
        self.k = k
        self.key = key

    def make_state(self):
        return _WorkerState(self.g, self.adj, False)

    def run_root(self, root, st):
        spec = self.spec
        if self.use_df and self.full_degree(root) < self.k - 1:
            return
        lg = spec.init_local(self.g, root)
        st.emb.push(root, 0)
        self._local_reduce(st, 0)
        try:
            if self.k == 1:
                self._finalize(st, self.key)
            elif lg is not None:
                self._extend(st, lg, 1, 0)
        finally:
            st.emb.pop()

    def _extend(self, st, lg, depth, level):
        if self.stop.is_set():
            raise _StopMining
        spec = self.spec
        emb = st.emb
        need = (1 << depth) - 1
        last = depth == self.k - 1
        for u in lg.candidates(level):
            st.considered += 1
            if self.use_df and self.full_degree(u) < self.k - 1:
                continue
            if spec.to_add is not None and not spec.to_add(emb, u):
                continue
            st.accepted += 1
            emb.push(u, need)
            self._local_reduce(st, depth)
            try:
                if last:
                    self._finalize(st, self.key)
                else:
                    spec.update_local(lg, level, u)
                    try:
                        self._extend(st, lg, depth + 1, level + 1)
                    finally:
                        lg.pop_level(level + 1)
            finally:
                emb.pop()


def _run_plan(plan, workers):
    n = plan.n_roots()
    states = [plan.make_state() for _ in range(workers)]
    stop = plan.stop
    if workers == 1:
        st = states[0]
        try:
            for i in range(n):
                if stop.is_set():
                    break
                plan.run_root(i, st)
        except _StopMining:
            pass
        return states
    counter = itertools.count()
    errors = []

    def work(st):
        try:
            while not stop.is_set():
                i = next(counter)
                if i >= n:
                    return
                plan.run_root(i, st)
        except _StopMining:
            pass
        except BaseException as exc:  # propagate to the caller
            errors.append(exc)
            stop.set()

    threads = [threading.Thread(target=work, args=(st,), daemon=True) for st in states]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    if errors:
        raise errors[0]
    return states


def _merge_states(states, reduce_fn, into=None, counters=None):
    merged = {} if into is None else into
    considered = accepted = 0
    for st in states:
        considered += st.considered
        accepted += st.accepted
        for key, val in st.map.items():
            if key in merged:
                merged[key] = reduce_fn(merged[key], val)
            else:
                merged[key] = val
    if counters is not None:
        counters[0] += considered
        counters[1] += accepted
    return merged


def _resolve_orientation(g, orientation):
    if isinstance(g, OrientedGraph):
        return g
    if orientation == "none":
        return g
    strategy = "degree" if orientation == "auto" else orientation
    return orient(g, strategy)


def _build_explicit_plan(g, pattern, spec, opts, orientation):
    key = canonical_code(pattern)
    # the oriented clique fast paths are label-blind; labeled cliques take the
    # matching-order route like any other labeled pattern
    labeled = pattern.labels is not None and g.labels is not None
    if is_clique(pattern) and not labeled:
        og = _resolve_orientation(g, orientation)
        if pattern.vertex_count == 3:
            return _TrianglePlan(og, spec, opts, key)
        return _CliquePlan(og, spec, opts, pattern.vertex_count, key)
    if isinstance(g, OrientedGraph):
        raise TypeError("non-clique patterns need the undirected graph")
    if not opts.get("use_mo", True):
        raise ValueError("matching order cannot be disabled for explicit non-clique patterns")
    return _MatchPlan(g, spec, opts, pattern, key)


def mine(g, spec, *, workers=None, orientation="auto", use_mnc=None, use_df=True,
         use_mo=True, debug=False):
    """Run one mining problem to completion and return a `MiningResult`.

    `workers` threads pull per-root-vertex tasks from a shared queue;
    `orientation` in {"auto", "degree", "core", "none"} controls the acyclic
    orientation used for clique patterns ("none" falls back to on-the-fly
    ascending-id symmetry breaking). `use_mnc` toggles the neighborhood
    connectivity map (None = per-problem policy), `use_df` degree filtering.
    Results are independent of the worker count.
    """
    if workers is None:
        workers = int(os.environ.get("GPM_THREADS", "1"))
    if workers < 1:
        raise ValueError("workers must be >= 1")
    t0 = time.perf_counter()
    stop = threading.Event()
    term = threading.Event()
    opts = {"stop": stop, "term": term, "use_df": use_df, "use_mo": use_mo,
            "debug": debug}
    reduce_fn = spec.reducer()
    counters = [0, 0]
    merged = {}

    if not spec.vertex_induced and not spec.explicit:
        from .fsm import mine_spec as _fsm_mine_spec
        merged, considered = _fsm_mine_spec(g, spec, workers=workers)
        counters[0] = considered
        counters[1] = considered
    elif spec.init_local is not None:
        if not spec.explicit or len(spec.patterns) != 1 or not is_clique(spec.patterns[0]):
            raise ValueError("local-graph search is wired for single explicit cliques")
        pattern = spec.patterns[0]
        if orientation == "none":
            raise ValueError("local-graph clique search requires an orientation")
        og = _resolve_orientation(g, orientation if orientation != "auto" else "degree")
        opts["use_mnc"] = False
        plan = _LocalPlan(og, spec, opts, pattern.vertex_count, canonical_code(pattern))
        states = _run_plan(plan, workers)
        _merge_states(states, reduce_fn, into=merged, counters=counters)
    elif spec.explicit:
        for pattern in spec.patterns:
            popts = dict(opts)
            if use_mnc is None:
                popts["use_mnc"] = pattern.vertex_count > 3
            else:
                popts["use_mnc"] = use_mnc and pattern.vertex_count > 2
            plan = _build_explicit_plan(g, pattern, spec, popts, orientation)
            states = _run_plan(plan, workers)
            _merge_states(states, reduce_fn, into=merged, counters=counters)
            if stop.is_set() and term.is_set():
                break
    else:
        if isinstance(g, OrientedGraph):
            raise TypeError("implicit-pattern problems need the undirected graph")
        opts["use_mnc"] = True if use_mnc is None else use_mnc
        plan = _GenericPlan(g, spec, opts)
        states = _run_plan(plan, workers)
        _merge_states(states, reduce_fn, into=merged, counters=counters)

    wall = (time.perf_counter() - t0) * 1000.0
    return MiningResult(pattern_map=merged, enumerated=counters[0],
                        accepted=counters[1], terminated=term.is_set(),
                        wall_ms=wall, workers=workers)


def extend(g, spec, vertices, *, orientation="auto", use_mo=True, use_df=False):
    """Accepted extension candidates for one partial embedding.

    Replays the same pipeline `mine` uses (dedup, degree filter, symmetry
    breaking, matching-order constraints) for the plan the spec selects.
    Exposed for inspection and testing; the miner itself inlines this logic.
    """
    stop = threading.Event()
    term = threading.Event()
    opts = {"stop": stop, "term": term, "use_df": use_df, "use_mo": use_mo,
            "use_mnc": False}
    if spec.explicit:
        if len(spec.patterns) != 1:
            raise ValueError("extend needs a single-pattern spec")
        plan = _build_explicit_plan(g, spec.patterns[0], spec, opts, orientation)
    else:
        if not spec.vertex_induced:
            raise ValueError("extend supports vertex-induced problems")
        plan = _GenericPlan(g, spec, opts)
    return plan.extensions_of(list(vertices))
