"""Frequent subgraph mining on a single labeled graph.

Depth-first walk over the sub-pattern tree: seeds are single-edge label
pairs, children extend a pattern by one edge along the rightmost path, and
only extensions whose DFS code is minimal survive (each pattern is therefore
owned by exactly one task). Embeddings of a pattern are gathered into its
node during extension; support is the minimum image count over pattern
positions (domain support), which is anti-monotone and drives subtree
pruning.

Embedding lists hold one vertex assignment per pattern position. Automorphic
duplicates (two assignments covering the same edge set) are kept: domain
supports are sets, so duplicates cannot inflate the support, and dropping
them would shrink the domains.
"""
from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass

from .dfscode import code_vertex_count, is_min_extension, rightmost_path

DEFAULT_MEMORY_CAP = 4 * 2 ** 30


class FsmMemoryError(MemoryError):
    """Embedding lists exceeded the configured memory cap."""


class DomainSupport:
    """Per-position sets of matched graph vertices; value = minimum size."""

    __slots__ = ("domains",)

    def __init__(self, positions):
        self.domains = [set() for _ in range(positions)]

    @classmethod
    def of_embedding(cls, vertices):
        ds = cls(len(vertices))
        for pos, v in enumerate(vertices):
            ds.domains[pos].add(v)
        return ds

    def add(self, vertices):
        for pos, v in enumerate(vertices):
            self.domains[pos].add(v)

    def merge(self, other):
        for mine, theirs in zip(self.domains, other.domains):
            mine |= theirs
        return self

    def value(self):
        if not self.domains:
            return 0
        return min(len(d) for d in self.domains)


def get_domain_support(emb):
    """Domain support contributed by a single embedding."""
    return DomainSupport.of_embedding(emb.vertices)


def merge_domain_support(a, b):
    return a.merge(b)


@dataclass
class FsmEmbedding:
    """One realization of a DFS code: graph vertex per pattern position."""

    vertices: tuple
    code: tuple


class PatternNode:
    """A sub-pattern-tree node: DFS code plus its gathered embedding list."""

    __slots__ = ("code", "embeddings", "_support")

    def __init__(self, code, embeddings):
        self.code = code
        self.embeddings = embeddings
        self._support = None

    @property
    def edge_count(self):
        return len(self.code)

    @property
    def support(self):
        if self._support is None:
            self._support = mni(self)
        return self._support

    def __repr__(self):
        return f"PatternNode(code={self.code}, n_emb={len(self.embeddings)})"


def mni(node):
    """Minimum image support of a node's embedding list."""
    positions = code_vertex_count(node.code)
    ds = DomainSupport(positions)
    for verts in node.embeddings:
        ds.add(verts)
    return ds.value()


class _MemoryBudget:
    def __init__(self, cap):
        self.cap = cap
        self.used = 0
        self.lock = threading.Lock()

    def add(self, nbytes):
        with self.lock:
            self.used += nbytes
            if self.used > self.cap:
                raise FsmMemoryError(
                    f"embedding lists exceed the {self.cap} byte cap")

    def sub(self, nbytes):
        with self.lock:
            self.used -= nbytes


def _node_bytes(node):
    positions = code_vertex_count(node.code)
    return len(node.embeddings) * (8 * positions + 56) + 64


def _seed_nodes(g):
    """Frequent-candidate seeds: one node per ordered label pair (a <= b)."""
    labels = g.labels.tolist()
    adj = g.adjacency()
    bins = {}
    for u in range(g.vertex_count):
        lu = labels[u]
        for v in adj[u]:
            lv = labels[v]
            if lu <= lv:
                bins.setdefault((lu, lv), []).append((u, v))
    seeds = []
    for (lu, lv) in sorted(bins):
        code = ((0, 1, lu, lv),)
        seeds.append(PatternNode(code, bins[(lu, lv)]))
    return seeds


def rightmost_extensions(node, g, budget=None, edge_filter=None):
    """Children of a node: distinct minimal-code one-edge extensions.

    Each parent embedding contributes its backward edges (rightmost vertex to
    an earlier rightmost-path vertex, edge unused) and forward edges (new
    vertex hanging off any rightmost-path vertex); extensions are binned by
    code edge and bins whose extended code is not minimal are dropped before
    any support computation. `edge_filter(embedding, (a, b))` can veto
    individual graph edges before they are binned.
    """
    labels = g.labels.tolist()
    adj = g.adjacency()
    adj_sets = getattr(g, "_fsm_adj_sets", None)
    if adj_sets is None:
        adj_sets = [set(a) for a in adj]
        g._fsm_adj_sets = adj_sets

    code = node.code
    rmp = rightmost_path(code)
    r = rmp[0]
    nv = code_vertex_count(code)
    code_pairs = [(e[0], e[1]) for e in code]
    bins = {}
    for verts in node.embeddings:
        used = {(verts[i], verts[j]) if verts[i] < verts[j] else (verts[j], verts[i])
                for i, j in code_pairs}
        image = set(verts)
        vr = verts[r]
        for p in rmp[1:]:
            vp = verts[p]
            if vp in adj_sets[vr]:
                e = (vr, vp) if vr < vp else (vp, vr)
                if e not in used:
                    if edge_filter is not None and \
                            not edge_filter(FsmEmbedding(verts, code), e):
                        continue
                    key = (r, p, labels[vr], labels[vp])
                    bins.setdefault(key, []).append(verts)
        for p in rmp:
            vp = verts[p]
            for w in adj[vp]:
                if w not in image:
                    if edge_filter is not None and \
                            not edge_filter(FsmEmbedding(verts, code),
                                            (vp, w) if vp < w else (w, vp)):
                        continue
                    key = (p, nv, labels[vp], labels[w])
                    bins.setdefault(key, []).append(verts + (w,))
    children = []
    for key in sorted(bins):
        child_code = code + (key,)
        if not is_min_extension(child_code):
            continue
        child = PatternNode(child_code, bins[key])
        if budget is not None:
            budget.add(_node_bytes(child))
        children.append(child)
    return children


def _walk(node, g, k_edges, accept, prune, out, budget, counter, edge_filter=None):
    counter[0] += len(node.embeddings)
    frequent = accept(node)
    if prune and not frequent:
        return
    if frequent:
        out[node.code] = node.support
    if k_edges is not None and node.edge_count >= k_edges:
        return
    for child in rightmost_extensions(node, g, budget, edge_filter):
        try:
            _walk(child, g, k_edges, accept, prune, out, budget, counter, edge_filter)
        finally:
            if budget is not None:
                budget.sub(_node_bytes(child))


def _run_seed_tasks(g, seeds, k_edges, accept, prune, workers, memory_cap,
                    edge_filter=None):
    budget = _MemoryBudget(memory_cap) if memory_cap else None
    results = {}
    counter = [0]
    if workers <= 1:
        for seed in seeds:
            _walk(seed, g, k_edges, accept, prune, results, budget, counter,
                  edge_filter)
        return results, counter[0]

    task_iter = itertools.count()
    lock = threading.Lock()
    errors = []

    def work():
        local = {}
        local_counter = [0]
        try:
            while True:
                i = next(task_iter)
                if i >= len(seeds):
                    break
                _walk(seeds[i], g, k_edges, accept, prune, local, budget,
                      local_counter, edge_filter)
        except BaseException as exc:
            errors.append(exc)
        with lock:
            results.update(local)
            counter[0] += local_counter[0]

    threads = [threading.Thread(target=work, daemon=True) for _ in range(workers)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    if errors:
        raise errors[0]
    return results, counter[0]


def mine_fsm(g, k_edges, min_sup, *, workers=1, prune=True,
             memory_cap=DEFAULT_MEMORY_CAP):
    """Patterns with at most k_edges edges whose domain support is >= min_sup.

    The threshold comparison is inclusive (support >= min_sup). `prune=False`
    disables anti-monotone subtree pruning (the full tree up to k_edges is
    enumerated and filtered afterwards); the result is identical and the flag
    exists for validation. `k_edges=None` removes the size bound.
    """
    if g.labels is None:
        raise ValueError("frequent subgraph mining requires a labeled graph")
    if min_sup < 1:
        raise ValueError("min_sup must be >= 1")
    if k_edges is not None and k_edges < 1:
        raise ValueError("k_edges must be >= 1")
    seeds = _seed_nodes(g)

    def accept(node):
        return node.support >= min_sup

    results, _ = _run_seed_tasks(g, seeds, k_edges, accept, prune, workers, memory_cap)
    return results


def mine_spec(g, spec, workers=1, memory_cap=DEFAULT_MEMORY_CAP):
    """Engine route for edge-induced implicit problems described by a spec.

    `spec.is_implicit_pattern` (given a PatternNode) selects the patterns of
    interest; with `spec.support_anti_monotonic` the same test prunes
    subtrees. Custom `get_support` / `reduce` hooks replace the default
    domain-support computation, and `to_add_edge` vetoes extension edges.
    """
    if g.labels is None:
        raise ValueError("edge-induced implicit mining requires a labeled graph")
    seeds = _seed_nodes(g)
    accept_hook = spec.is_implicit_pattern
    get_support = spec.get_support
    reduce_fn = spec.reduce
    edge_filter = spec.to_add_edge

    def node_support(node):
        if get_support is None:
            return mni(node)
        acc = None
        for verts in node.embeddings:
            s = get_support(FsmEmbedding(verts, node.code))
            acc = s if acc is None else reduce_fn(acc, s)
        if isinstance(acc, DomainSupport):
            return acc.value()
        return acc if acc is not None else 0

    def accept(node):
        if node._support is None:
            node._support = node_support(node)
        if accept_hook is None:
            return True
        return bool(accept_hook(node))

    prune = bool(spec.support_anti_monotonic)
    return _run_seed_tasks(g, seeds, spec.k, accept, prune, workers, memory_cap,
                           edge_filter)
