"""Undirected graph storage in compressed sparse row form.

Loading, validation, k-core decomposition, and acyclic orientation live here.
Graphs are immutable after construction and safe to share across worker threads.
"""
from __future__ import annotations

import struct

import numpy as np

_CACHE_MAGIC = b"GPMCSR01"


class GraphParseError(ValueError):
    """Edge-list or label file could not be parsed."""


class Graph:
    """Simple undirected graph: sorted neighbor lists, no loops, no duplicates.

    `row_offsets` has length `vertex_count + 1`; the neighbors of v occupy
    `neighbors[row_offsets[v]:row_offsets[v+1]]` in ascending order. Optional
    dense integer vertex labels, with the original label strings kept in
    `label_names` for output.
    """

    def __init__(self, vertex_count, row_offsets, neighbors, labels=None, label_names=None):
        self.vertex_count = int(vertex_count)
        self.row_offsets = np.asarray(row_offsets, dtype=np.int64)
        self.neighbors = np.asarray(neighbors, dtype=np.int64)
        self.labels = None if labels is None else np.asarray(labels, dtype=np.int64)
        self.label_names = None if label_names is None else tuple(label_names)
        self._adj = None

    @classmethod
    def from_edges(cls, vertex_count, edges, labels=None, label_names=None):
        """Build a graph from an iterable of (u, v) pairs.

        Input is normalized: self-loops dropped, duplicates merged, both
        directions stored, neighbor lists sorted.
        """
        pairs = {(min(u, v), max(u, v)) for u, v in edges if u != v}
        for u, v in pairs:
            if u < 0 or v >= vertex_count:
                raise ValueError(f"edge ({u}, {v}) outside vertex range 0..{vertex_count - 1}")
        if pairs:
            arr = np.array(sorted(pairs), dtype=np.int64)
            src = np.concatenate([arr[:, 0], arr[:, 1]])
            dst = np.concatenate([arr[:, 1], arr[:, 0]])
            order = np.lexsort((dst, src))
            src, dst = src[order], dst[order]
        else:
            src = dst = np.zeros(0, dtype=np.int64)
        offsets = np.zeros(vertex_count + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=vertex_count), out=offsets[1:])
        return cls(vertex_count, offsets, dst, labels=labels, label_names=label_names)

    @property
    def edge_count(self):
        return len(self.neighbors) // 2

    def degree(self, v):
        return int(self.row_offsets[v + 1] - self.row_offsets[v])

    def degrees(self):
        return np.diff(self.row_offsets)

    def neighbors_of(self, v):
        return self.neighbors[self.row_offsets[v]:self.row_offsets[v + 1]]

    def adjacency(self):
        """Neighbor lists as plain Python lists (cached); used by hot loops."""
        if self._adj is None:
            offs = self.row_offsets.tolist()
            flat = self.neighbors.tolist()
            self._adj = [flat[offs[v]:offs[v + 1]] for v in range(self.vertex_count)]
        return self._adj

    def average_degree(self):
        return 2.0 * self.edge_count / self.vertex_count if self.vertex_count else 0.0

    def __repr__(self):
        lbl = ", labeled" if self.labels is not None else ""
        return f"Graph(n={self.vertex_count}, m={self.edge_count}{lbl})"


class OrientedGraph:
    """Each undirected edge of the source graph stored in one direction only.

    Directions follow a total order on vertices, so the digraph is acyclic.
    `degree(v)` reports the degree in the source graph (needed for degree
    filtering and per-edge counting formulas); `out_degree(v)` is the number
    of stored out-neighbors.
    """

    def __init__(self, vertex_count, row_offsets, neighbors, source_degrees, labels=None,
                 label_names=None, source=None):
        self.vertex_count = int(vertex_count)
        self.row_offsets = np.asarray(row_offsets, dtype=np.int64)
        self.neighbors = np.asarray(neighbors, dtype=np.int64)
        self.source_degrees = np.asarray(source_degrees, dtype=np.int64)
        self.labels = None if labels is None else np.asarray(labels, dtype=np.int64)
        self.label_names = label_names
        self.source = source
        self._adj = None

    @property
    def edge_count(self):
        return len(self.neighbors)

    def degree(self, v):
        return int(self.source_degrees[v])

    def out_degree(self, v):
        return int(self.row_offsets[v + 1] - self.row_offsets[v])

    def neighbors_of(self, v):
        return self.neighbors[self.row_offsets[v]:self.row_offsets[v + 1]]

    def adjacency(self):
        if self._adj is None:
            offs = self.row_offsets.tolist()
            flat = self.neighbors.tolist()
            self._adj = [flat[offs[v]:offs[v + 1]] for v in range(self.vertex_count)]
        return self._adj

    def __repr__(self):
        return f"OrientedGraph(n={self.vertex_count}, m={self.edge_count})"


def has_edge(g, u, v):
    """True iff v is a neighbor of u; binary search over the sorted list."""
    if u == v:
        return False
    lo = int(g.row_offsets[u])
    hi = int(g.row_offsets[u + 1])
    i = lo + int(np.searchsorted(g.neighbors[lo:hi], v))
    return i < hi and int(g.neighbors[i]) == v


def load_edge_list(path, labels_path=None):
    """Read a graph from text: one "u v" pair per line, '#' starts a comment.

    The loader normalizes rather than rejects: self-loops are dropped,
    duplicate and reversed edges merged, neighbor lists sorted. Vertex count
    is max id + 1. An optional label file has one "id label" line per vertex
    and must cover every vertex; label tokens are mapped to dense integers.
    """
    edges = []
    max_id = -1
    with open(path, "r", encoding="utf-8") as f:
        for lineno, raw in enumerate(f, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise GraphParseError(f"{path}:{lineno}: expected 'u v', got {raw.strip()!r}")
            try:
                u, v = int(parts[0]), int(parts[1])
            except ValueError:
                raise GraphParseError(f"{path}:{lineno}: non-integer vertex id in {raw.strip()!r}")
            if u < 0 or v < 0:
                raise GraphParseError(f"{path}:{lineno}: negative vertex id")
            max_id = max(max_id, u, v)
            edges.append((u, v))
    n = max_id + 1

    labels = label_names = None
    if labels_path is not None:
        labels, label_names = _load_labels(labels_path, n)
    return Graph.from_edges(n, edges, labels=labels, label_names=label_names)


def _load_labels(path, vertex_count):
    raw_labels = {}
    with open(path, "r", encoding="utf-8") as f:
        for lineno, raw in enumerate(f, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise GraphParseError(f"{path}:{lineno}: expected 'id label', got {raw.strip()!r}")
            try:
                v = int(parts[0])
            except ValueError:
                raise GraphParseError(f"{path}:{lineno}: non-integer vertex id")
            if v < 0 or v >= vertex_count:
                raise GraphParseError(
                    f"{path}:{lineno}: vertex id {v} outside graph range 0..{vertex_count - 1}")
            if v in raw_labels:
                raise GraphParseError(f"{path}:{lineno}: duplicate label for vertex {v}")
            raw_labels[v] = parts[1]
    missing = [v for v in range(vertex_count) if v not in raw_labels]
    if missing:
        raise GraphParseError(f"{path}: missing labels for vertices {missing[:5]}"
                              + ("..." if len(missing) > 5 else ""))
    tokens = set(raw_labels.values())
    try:
        names = sorted(tokens, key=int)
    except ValueError:
        names = sorted(tokens)
    index = {t: i for i, t in enumerate(names)}
    labels = np.array([index[raw_labels[v]] for v in range(vertex_count)], dtype=np.int64)
    return labels, tuple(names)


def validate_graph(g):
    """Full scan of the CSR invariants; raises ValueError on violation."""
    n = g.vertex_count
    if len(g.row_offsets) != n + 1 or g.row_offsets[0] != 0:
        raise ValueError("bad row_offsets shape")
    if np.any(np.diff(g.row_offsets) < 0):
        raise ValueError("row_offsets not monotone")
    if int(g.row_offsets[-1]) != len(g.neighbors):
        raise ValueError("row_offsets do not cover neighbors")
    if n and len(g.neighbors) and (g.neighbors.min() < 0 or g.neighbors.max() >= n):
        raise ValueError("neighbor id out of range")
    for v in range(n):
        nbrs = g.neighbors_of(v)
        if len(nbrs) == 0:
            continue
        if np.any(np.diff(nbrs) <= 0):
            raise ValueError(f"neighbor list of {v} not strictly ascending")
        if np.any(nbrs == v):
            raise ValueError(f"self loop at {v}")
        for u in nbrs:
            if not has_edge(g, int(u), v):
                raise ValueError(f"edge ({v}, {u}) not symmetric")
    if g.labels is not None and len(g.labels) != n:
        raise ValueError("label array length mismatch")
    return True


def core_numbers(g):
    """k-core number of each vertex via the standard linear-time peeling."""
    n = g.vertex_count
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    adj = g.adjacency()
    deg = [len(a) for a in adj]
    md = max(deg)
    # bucket sort vertices by degree
    bin_count = [0] * (md + 1)
    for d in deg:
        bin_count[d] += 1
    start = [0] * (md + 1)
    s = 0
    for d in range(md + 1):
        start[d] = s
        s += bin_count[d]
    pos = [0] * n
    vert = [0] * n
    nxt = start.copy()
    for v in range(n):
        pos[v] = nxt[deg[v]]
        vert[pos[v]] = v
        nxt[deg[v]] += 1
    for i in range(n):
        v = vert[i]
        for u in adj[v]:
            if deg[u] > deg[v]:
                du = deg[u]
                pu = pos[u]
                pw = start[du]
                w = vert[pw]
                if u != w:
                    vert[pu], vert[pw] = w, u
                    pos[u], pos[w] = pw, pu
                start[du] += 1
                deg[u] -= 1
    return np.array(deg, dtype=np.int64)


def orient(g, strategy="degree"):
    """Direct each edge along a total vertex order, producing an acyclic graph.

    degree strategy: toward the higher-degree endpoint, ties toward the larger
    id. core strategy: toward the higher core number, ties by degree then id.
    """
    n = g.vertex_count
    deg = g.degrees()
    ids = np.arange(n, dtype=np.int64)
    if strategy == "degree":
        order = np.lexsort((ids, deg))
    elif strategy == "core":
        order = np.lexsort((ids, deg, core_numbers(g)))
    else:
        raise ValueError(f"unknown orientation strategy {strategy!r}")
    rank = np.empty(n, dtype=np.int64)
    rank[order] = ids

    src = np.repeat(ids, deg)
    dst = g.neighbors
    keep = rank[src] < rank[dst]
    out_src, out_dst = src[keep], dst[keep]
    sort = np.lexsort((out_dst, out_src))
    out_src, out_dst = out_src[sort], out_dst[sort]
    offsets = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(out_src, minlength=n), out=offsets[1:])
    return OrientedGraph(n, offsets, out_dst, deg, labels=g.labels,
                         label_names=g.label_names, source=g)


def save_csr_cache(g, path):
    """Write a binary CSR snapshot: magic + little-endian 64-bit arrays."""
    names_blob = b""
    if g.label_names:
        names_blob = "\n".join(g.label_names).encode("utf-8")
    with open(path, "wb") as f:
        f.write(_CACHE_MAGIC)
        f.write(struct.pack("<qqqq", g.vertex_count, len(g.neighbors),
                            1 if g.labels is not None else 0, len(names_blob)))
        g.row_offsets.astype("<i8").tofile(f)
        g.neighbors.astype("<i8").tofile(f)
        if g.labels is not None:
            g.labels.astype("<i8").tofile(f)
        f.write(names_blob)


def load_csr_cache(path):
    with open(path, "rb") as f:
        magic = f.read(len(_CACHE_MAGIC))
        if magic != _CACHE_MAGIC:
            raise GraphParseError(f"{path}: not a CSR cache file")
        n, m2, has_labels, names_len = struct.unpack("<qqqq", f.read(32))
        offsets = np.fromfile(f, dtype="<i8", count=n + 1)
        neighbors = np.fromfile(f, dtype="<i8", count=m2)
        labels = np.fromfile(f, dtype="<i8", count=n) if has_labels else None
        names = None
        if names_len:
            names = tuple(f.read(names_len).decode("utf-8").split("\n"))
    return Graph(n, offsets, neighbors, labels=labels, label_names=names)
