"""Graph representation, family constructors, graph algebra, and edge-list I/O.

Graphs are immutable: dense 0-based vertex labels, a sorted tuple of edges
(u < v), and derived adjacency structure.  Construction validates no loops,
no duplicate edges, and endpoint range.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy.sparse import csr_matrix


class GraphError(ValueError):
    pass


class CapExceededError(GraphError):
    def __init__(self, message: str, size: int):
        super().__init__(message)
        self.size = size


class ParseError(GraphError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple[tuple[int, int], ...]

    @staticmethod
    def from_edges(n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        if n < 0:
            raise GraphError("vertex count must be nonnegative")
        norm = []
        for u, v in edges:
            if u == v:
                raise GraphError(f"loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u},{v}) out of range for n={n}")
            norm.append((u, v) if u < v else (v, u))
        dedup = sorted(set(norm))
        if len(dedup) != len(norm):
            raise GraphError("duplicate edge")
        return Graph(n, tuple(dedup))

    # -- derived accessors -------------------------------------------------

    @property
    def order(self) -> int:
        return self.n

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def big_m(self) -> int:
        # twice the edge count
        return 2 * len(self.edges)

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        nbrs: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            nbrs[u].append(v)
            nbrs[v].append(u)
        return tuple(tuple(sorted(a)) for a in nbrs)

    @cached_property
    def adjacency_sets(self) -> tuple[frozenset, ...]:
        return tuple(frozenset(a) for a in self.adjacency)

    @cached_property
    def adjacency_bits(self) -> tuple[int, ...]:
        """Neighborhoods as integer bitmasks (bit v set iff v is a neighbor)."""
        bits = [0] * self.n
        for u, v in self.edges:
            bits[u] |= 1 << v
            bits[v] |= 1 << u
        return tuple(bits)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(len(a) for a in self.adjacency)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adjacency_sets[u]

    def adjacency_matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=np.float64)
        for u, v in self.edges:
            a[u, v] = 1.0
            a[v, u] = 1.0
        return a

    def sparse_adjacency(self) -> csr_matrix:
        if not self.edges:
            return csr_matrix((self.n, self.n))
        rows = []
        cols = []
        for u, v in self.edges:
            rows.append(u)
            cols.append(v)
            rows.append(v)
            cols.append(u)
        data = np.ones(len(rows))
        return csr_matrix((data, (rows, cols)), shape=(self.n, self.n))

    @cached_property
    def components(self) -> tuple[tuple[int, ...], ...]:
        """Connected components as sorted vertex tuples, ordered by minimum vertex."""
        seen = [False] * self.n
        comps = []
        for start in range(self.n):
            if seen[start]:
                continue
            stack = [start]
            seen[start] = True
            comp = []
            while stack:
                v = stack.pop()
                comp.append(v)
                for w in self.adjacency[v]:
                    if not seen[w]:
                        seen[w] = True
                        stack.append(w)
            comps.append(tuple(sorted(comp)))
        return tuple(comps)

    def induced_subgraph(self, vertices: Sequence[int]) -> tuple["Graph", dict]:
        """Induced subgraph on `vertices` (relabeled 0..len-1) plus old->new map."""
        vs = sorted(set(vertices))
        remap = {v: i for i, v in enumerate(vs)}
        sub = [
            (remap[u], remap[v])
            for u, v in self.edges
            if u in remap and v in remap
        ]
        return Graph.from_edges(len(vs), sub), remap

    def delete_edge(self, u: int, v: int) -> "Graph":
        e = (u, v) if u < v else (v, u)
        if e not in set(self.edges):
            raise GraphError(f"no such edge {e}")
        return Graph(self.n, tuple(x for x in self.edges if x != e))

    def is_bipartite(self) -> bool:
        return self.bipartition() is not None

    def bipartition(self) -> Optional[tuple[tuple[int, ...], tuple[int, ...]]]:
        color = [-1] * self.n
        for start in range(self.n):
            if color[start] != -1:
                continue
            color[start] = 0
            stack = [start]
            while stack:
                v = stack.pop()
                for w in self.adjacency[v]:
                    if color[w] == -1:
                        color[w] = 1 - color[v]
                        stack.append(w)
                    elif color[w] == color[v]:
                        return None
        side0 = tuple(v for v in range(self.n) if color[v] == 0)
        side1 = tuple(v for v in range(self.n) if color[v] == 1)
        return side0, side1

    def is_cycle_graph(self) -> bool:
        """Cheap certificate: connected and 2-regular."""
        if self.n < 3 or self.edge_count != self.n:
            return False
        if any(d != 2 for d in self.degrees):
            return False
        return len(self.components) == 1


# -- split graphs ----------------------------------------------------------


@dataclass(frozen=True)
class SplitSpec:
    """Parameters of the split graph S_{k,m}: clique K_k joined to q independent
    vertices, plus (when r > 0) one extra vertex adjacent to r clique vertices,
    where m - k(k-1)/2 = k*q + r with 0 <= r <= k-1."""

    k: int
    m: int
    q: int = field(init=False)
    r: int = field(init=False)

    def __post_init__(self):
        if self.k < 1:
            raise GraphError("split: clique size k must be >= 1")
        base = self.k * (self.k - 1) // 2
        if self.m < base:
            raise GraphError(
                f"split: m={self.m} below clique edge count {base} for k={self.k}"
            )
        q, r = divmod(self.m - base, self.k)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "r", r)

    @property
    def n(self) -> int:
        return self.k + self.q + (1 if self.r > 0 else 0)


def split_graph(k: int, m: int) -> Graph:
    """S_{k,m} with vertex order: r-attached clique vertices first, remaining
    clique vertices, the extra vertex of degree r (omitted when r=0), then the
    q independent vertices."""
    spec = SplitSpec(k, m)
    k_, q, r = spec.k, spec.q, spec.r
    edges = [(i, j) for i in range(k_) for j in range(i + 1, k_)]
    extra = k_ if r > 0 else None
    if extra is not None:
        edges.extend((i, extra) for i in range(r))
    base = k_ + (1 if r > 0 else 0)
    for a in range(q):
        w = base + a
        edges.extend((i, w) for i in range(k_))
    g = Graph.from_edges(spec.n, edges)
    assert g.edge_count == m
    return g


# -- standard families -----------------------------------------------------


def empty_graph(n: int) -> Graph:
    return Graph.from_edges(n, [])


def complete(n: int) -> Graph:
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def cycle(n: int) -> Graph:
    if n < 3:
        raise GraphError("cycle length must be >= 3")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def path(n: int) -> Graph:
    """Path on n vertices (n-1 edges)."""
    if n < 1:
        raise GraphError("path must have >= 1 vertex")
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def star(leaves: int) -> Graph:
    """K_{1,leaves}, center at index 0."""
    if leaves < 1:
        raise GraphError("star needs >= 1 leaf")
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def complete_bipartite(a: int, b: int) -> Graph:
    if a < 1 or b < 1:
        raise GraphError("complete bipartite sides must be >= 1")
    return Graph.from_edges(a + b, [(i, a + j) for i in range(a) for j in range(b)])


@dataclass(frozen=True)
class FamilyRequest:
    family: str
    params: tuple[int, ...]
    seed: Optional[int] = None


def make_family(req: FamilyRequest) -> Graph:
    fam, p = req.family, req.params
    if fam == "split":
        if len(p) != 2:
            raise GraphError("split takes (k, m)")
        return split_graph(*p)
    if fam == "star":
        if len(p) != 1:
            raise GraphError("star takes (leaves,)")
        return star(p[0])
    if fam == "clique":
        if len(p) != 1:
            raise GraphError("clique takes (n,)")
        return complete(p[0])
    if fam == "cycle":
        if len(p) != 1:
            raise GraphError("cycle takes (n,)")
        return cycle(p[0])
    if fam == "path":
        if len(p) != 1:
            raise GraphError("path takes (n,)")
        return path(p[0])
    if fam == "complete-bipartite":
        if len(p) != 2:
            raise GraphError("complete-bipartite takes (a, b)")
        return complete_bipartite(*p)
    if fam == "empty":
        if len(p) != 1:
            raise GraphError("empty takes (n,)")
        return empty_graph(p[0])
    if fam == "gnm":
        if len(p) != 2:
            raise GraphError("gnm takes (n, m)")
        if req.seed is None:
            raise GraphError("gnm requires a seed")
        return sample_gnm(p[0], p[1], req.seed)
    raise GraphError(f"unknown family {fam!r}")


# -- random graphs ---------------------------------------------------------


def _edge_unrank(rank: int) -> tuple[int, int]:
    # rank in colex order: edge (u,v), u<v, has rank C(v,2)+u
    v = 1
    while (v + 1) * v // 2 <= rank:
        v += 1
    u = rank - v * (v - 1) // 2
    return u, v


def sample_gnm(n: int, m: int, seed: int) -> Graph:
    """Uniform random m-edge graph on n labeled vertices.

    Floyd's sampling over edge ranks: exactly uniform over C(N, m) edge sets,
    reproducible from the seed.
    """
    big_n = n * (n - 1) // 2
    if not (0 <= m <= big_n):
        raise GraphError(f"m={m} out of range [0, {big_n}]")
    rng = random.Random(seed)
    chosen: set[int] = set()
    for j in range(big_n - m, big_n):
        r = rng.randrange(j + 1)
        chosen.add(r if r not in chosen else j)
    return Graph.from_edges(n, [_edge_unrank(r) for r in chosen])


# -- graph algebra ---------------------------------------------------------


def tensor_power(g: Graph, k: int, cap: int = 10**6) -> Graph:
    """Tensor (categorical) power: k-tuples adjacent iff coordinatewise adjacent.

    Vertex i encodes the tuple as base-|V(g)| digits, most significant first.
    """
    if k < 1:
        raise GraphError("tensor power needs k >= 1")
    size = g.n**k
    if size > cap:
        raise CapExceededError(f"tensor power would have {size} vertices", size)
    if k == 1:
        return g
    edges = []
    # build by extending (k-1)-tuples one coordinate at a time
    prev = tensor_power(g, k - 1, cap=cap)
    for a, b in prev.edges:
        for u, v in g.edges:
            edges.append((a * g.n + u, b * g.n + v))
            edges.append((a * g.n + v, b * g.n + u))
    return Graph.from_edges(size, edges)


def subdivide(h: Graph) -> Graph:
    """Subdivide every edge once: original vertices keep their indices,
    subdivision vertices appended in edge order."""
    edges = []
    for idx, (u, v) in enumerate(h.edges):
        w = h.n + idx
        edges.append((u, w))
        edges.append((w, v))
    return Graph.from_edges(h.n + h.edge_count, edges)


def union(g1: Graph, g2: Graph) -> Graph:
    shifted = [(u + g1.n, v + g1.n) for u, v in g2.edges]
    return Graph.from_edges(g1.n + g2.n, list(g1.edges) + shifted)


def join(g1: Graph, g2: Graph) -> Graph:
    base = union(g1, g2)
    cross = [(u, g1.n + v) for u in range(g1.n) for v in range(g2.n)]
    return Graph.from_edges(base.n, list(base.edges) + cross)


def combine(op: str, g1: Graph, g2: Graph) -> Graph:
    if op == "union":
        return union(g1, g2)
    if op == "join":
        return join(g1, g2)
    raise GraphError(f"unknown combine op {op!r}")


# -- serialization ---------------------------------------------------------


def write_edge_list(g: Graph) -> str:
    lines = [f"# n={g.n}"]
    lines.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


def read_edge_list(text: str) -> Graph:
    n: Optional[int] = None
    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    max_seen = -1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("n="):
                try:
                    n = int(body[2:])
                except ValueError:
                    raise ParseError(f"bad header {line!r}", lineno)
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"expected two integers, got {line!r}", lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"non-integer endpoint in {line!r}", lineno)
        if u == v:
            raise ParseError(f"loop at vertex {u}", lineno)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise ParseError(f"duplicate or reversed edge {u} {v}", lineno)
        seen.add(key)
        edges.append(key)
        max_seen = max(max_seen, u, v)
    if n is None:
        n = max_seen + 1
    if max_seen >= n:
        raise GraphError(f"edge endpoint {max_seen} >= declared n={n}")
    return Graph.from_edges(n, edges)
