"""Weighted undirected graphs, contraction, shortest paths and the brute-force Steiner oracle."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

TOL = 1e-9
INF = float("inf")
BRUTE_FORCE_LIMIT = 22


class SteinerError(ValueError):
    pass


class GraphError(SteinerError):
    pass


class DisconnectedError(SteinerError):
    """Raised when the terminals do not lie in one connected component."""


class GuardError(SteinerError):
    """Raised when an exhaustive routine is asked to enumerate too much."""


def _key(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


class Graph:
    """Immutable undirected graph with strictly positive edge weights.

    ``source`` maps every edge ``(u, v)`` (``u < v``) to the edge of the
    original graph it stands for; contracted graphs use it to expand trees
    back to the uncontracted graph.
    """

    __slots__ = ("n", "edges", "adj", "source", "_weights", "_matrix")

    def __init__(self, n: int, edges: Iterable[tuple[int, int, float]], source=None):
        if n < 0:
            raise GraphError(f"negative vertex count {n}")
        best: dict[tuple[int, int], float] = {}
        for u, v, w in edges:
            u, v = int(u), int(v)
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) has an endpoint outside [0, {n})")
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            if not w > 0:
                raise GraphError(f"edge ({u}, {v}) has non-positive weight {w}")
            k = _key(u, v)
            if k not in best or w < best[k]:
                best[k] = w
        self.n = n
        self.edges = tuple(sorted((u, v, w) for (u, v), w in best.items()))
        self._weights = {(u, v): w for u, v, w in self.edges}
        adj: list[list[tuple[int, float]]] = [[] for _ in range(n)]
        for u, v, w in self.edges:
            adj[u].append((v, w))
            adj[v].append((u, w))
        self.adj = tuple(tuple(a) for a in adj)
        if source is None:
            source = {(u, v): (u, v) for u, v, _ in self.edges}
        self.source = source
        self._matrix = None

    def weight(self, u: int, v: int) -> float:
        return self._weights.get(_key(u, v), INF)

    def has_edge(self, u: int, v: int) -> bool:
        return _key(u, v) in self._weights

    def matrix(self) -> np.ndarray:
        """Dense weight matrix, ``inf`` off the edge set and 0 on the diagonal."""
        if self._matrix is None:
            m = np.full((self.n, self.n), INF)
            np.fill_diagonal(m, 0.0)
            for u, v, w in self.edges:
                m[u, v] = m[v, u] = w
            m.setflags(write=False)
            self._matrix = m
        return self._matrix

    def total(self, edges: Iterable[tuple[int, int]]) -> float:
        return sum(self.weight(u, v) for u, v in edges)

    def original_edges(self, edges: Iterable[tuple[int, int]]) -> list[tuple[int, int]]:
        return [self.source[_key(u, v)] for u, v in edges]

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={len(self.edges)})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.n, self.edges))


def build_graph(n: int, edges: Iterable[tuple[int, int, float]]) -> Graph:
    return Graph(n, edges)


def vertex_set(vertices: Iterable[int], n: int | None = None) -> tuple[int, ...]:
    vs = tuple(sorted(set(int(v) for v in vertices)))
    if n is not None and any(not 0 <= v < n for v in vs):
        raise GraphError(f"vertex set {vs} not contained in [0, {n})")
    return vs


@dataclass(frozen=True)
class ContractedGraph:
    """``G/A``: the graph, the id of the merged vertex, and original vertex groups per new id."""

    graph: Graph
    contracted_vertex: int
    origin: tuple[frozenset, ...]

    def image(self, original_vertex: int) -> int:
        for i, group in enumerate(self.origin):
            if original_vertex in group:
                return i
        raise KeyError(original_vertex)


def contract(G: Graph | ContractedGraph, A: Iterable[int]) -> ContractedGraph:
    """Merge the vertex set ``A`` into a single new vertex placed last.

    Vertices outside ``A`` keep their relative order.  Parallel edges
    created by the merge keep the minimum weight; ties go to the
    lexicographically smaller original edge.  Passing a ContractedGraph
    composes the vertex provenance.
    """
    base_origin = None
    if isinstance(G, ContractedGraph):
        base_origin = G.origin
        G = G.graph
    A = vertex_set(A)
    if not A:
        raise GraphError("cannot contract an empty vertex set")
    if A[-1] >= G.n or A[0] < 0:
        raise GraphError(f"contraction set {A} not contained in [0, {G.n})")
    inA = set(A)
    keep = [v for v in range(G.n) if v not in inA]
    new_id = {v: i for i, v in enumerate(keep)}
    vA = len(keep)
    for a in A:
        new_id[a] = vA
    best: dict[tuple[int, int], tuple[float, tuple[int, int]]] = {}
    for u, v, w in G.edges:
        nu, nv = new_id[u], new_id[v]
        if nu == nv:
            continue
        k = _key(nu, nv)
        src = G.source[(u, v)]
        cand = (w, src)
        if k not in best or cand < best[k]:
            best[k] = cand
    edges = [(u, v, w) for (u, v), (w, _) in best.items()]
    source = {k: src for k, (_, src) in best.items()}
    graph = Graph(vA + 1, edges, source=source)
    if base_origin is None:
        base_origin = tuple(frozenset((v,)) for v in range(G.n))
    origin = tuple(base_origin[v] for v in keep) + (frozenset().union(*(base_origin[a] for a in A)),)
    return ContractedGraph(graph, vA, origin)


def contract_groups(G: Graph, groups: Iterable[Iterable[int]]) -> tuple[Graph, tuple[tuple[int, ...], ...]]:
    """Contract disjoint vertex groups of ``G`` at once.

    Returns the contracted graph and its vertex groups: uncontracted
    vertices first in original order, then the merged groups in sorted
    order.  Equivalent to iterated ``contract`` up to vertex numbering.
    """
    merged = sorted(tuple(sorted(g)) for g in groups if len(g) > 1)
    owner = {}
    for i, g in enumerate(merged):
        for v in g:
            if v in owner:
                raise GraphError(f"vertex {v} appears in two contraction groups")
            owner[v] = i
    keep = [v for v in range(G.n) if v not in owner]
    new_id = {v: i for i, v in enumerate(keep)}
    for v, i in owner.items():
        new_id[v] = len(keep) + i
    best: dict[tuple[int, int], tuple[float, tuple[int, int]]] = {}
    for u, v, w in G.edges:
        nu, nv = new_id[u], new_id[v]
        if nu == nv:
            continue
        k = _key(nu, nv)
        cand = (w, G.source[(u, v)])
        if k not in best or cand < best[k]:
            best[k] = cand
    graph = Graph(
        len(keep) + len(merged),
        [(u, v, w) for (u, v), (w, _) in best.items()],
        source={k: src for k, (_, src) in best.items()},
    )
    return graph, tuple((v,) for v in keep) + tuple(merged)


@dataclass(frozen=True)
class DistanceMatrix:
    dist: np.ndarray
    nxt: np.ndarray

    def __call__(self, u: int, v: int) -> float:
        return float(self.dist[u, v])

    def path(self, u: int, v: int) -> list[tuple[int, int]]:
        """Edges of a shortest ``u``-``v`` path, empty when ``u == v``."""
        if not np.isfinite(self.dist[u, v]):
            raise DisconnectedError(f"no path between {u} and {v}")
        edges = []
        while u != v:
            w = int(self.nxt[u, v])
            edges.append((u, w))
            u = w
        return edges


def all_pairs_shortest_paths(G: Graph) -> DistanceMatrix:
    """Floyd-Warshall with next-hop matrix; strict improvement keeps lower-id routes on ties."""
    n = G.n
    d = np.array(G.matrix(), dtype=float)
    nxt = np.tile(np.arange(n), (n, 1))
    for k in range(n):
        cand = d[:, k, None] + d[None, k, :]
        better = cand < d - TOL
        if better.any():
            d = np.where(better, cand, d)
            nxt = np.where(better, nxt[:, k, None], nxt)
    d.setflags(write=False)
    nxt.setflags(write=False)
    return DistanceMatrix(d, nxt)


@dataclass(frozen=True)
class SteinerTree:
    edges: tuple[tuple[int, int, float], ...]
    weight: float
    terminals: tuple[int, ...] = ()

    @classmethod
    def from_edges(cls, G: Graph, edges: Iterable[tuple[int, int]], terminals: Iterable[int] = ()) -> "SteinerTree":
        es = sorted({_key(u, v) for u, v in edges})
        full = tuple((u, v, G.weight(u, v)) for u, v in es)
        return cls(full, float(sum(w for _, _, w in full)), vertex_set(terminals))

    @property
    def vertices(self) -> set[int]:
        vs = {u for u, _, _ in self.edges} | {v for _, v, _ in self.edges}
        if not vs and self.terminals:
            vs = set(self.terminals)
        return vs

    def edge_pairs(self) -> list[tuple[int, int]]:
        return [(u, v) for u, v, _ in self.edges]

    def problems(self, G: Graph, terminals: Iterable[int] | None = None) -> list[str]:
        """Human-readable invariant violations; empty when the tree is valid."""
        terms = set(self.terminals if terminals is None else terminals)
        out = []
        for u, v, w in self.edges:
            if not G.has_edge(u, v):
                out.append(f"edge ({u}, {v}) not in graph")
            elif abs(G.weight(u, v) - w) > TOL:
                out.append(f"edge ({u}, {v}) weight {w} != {G.weight(u, v)}")
        if abs(sum(w for _, _, w in self.edges) - self.weight) > TOL:
            out.append("weight is not the sum of edge weights")
        vs = self.vertices
        if self.edges:
            if len(vs) != len(self.edges) + 1 or not _connected(vs, self.edge_pairs()):
                out.append("edge set is not a tree")
            deg = {v: 0 for v in vs}
            for u, v, _ in self.edges:
                deg[u] += 1
                deg[v] += 1
            leaves = [v for v, d in deg.items() if d == 1 and v not in terms]
            if leaves:
                out.append(f"non-terminal leaves {sorted(leaves)}")
        missing = terms - vs if self.edges or len(terms) > 1 else set()
        if missing:
            out.append(f"terminals {sorted(missing)} not spanned")
        return out

    def is_valid(self, G: Graph, terminals: Iterable[int] | None = None) -> bool:
        return not self.problems(G, terminals)


def _connected(vertices, edges) -> bool:
    vertices = set(vertices)
    if not vertices:
        return True
    parent = {v: v for v in vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    comps = len(vertices)
    for u, v in edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            comps -= 1
    return comps == 1


def _kruskal(n: int, edges: Sequence[tuple[int, int, float]], vertices: Sequence[int]):
    """Minimum spanning tree of the subgraph induced by ``vertices``; None if disconnected."""
    vs = set(vertices)
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    chosen = []
    total = 0.0
    need = len(vs) - 1
    for u, v, w in sorted(edges, key=lambda e: (e[2], e[0], e[1])):
        if need == 0:
            break
        if u in vs and v in vs:
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[ru] = rv
                chosen.append((u, v, w))
                total += w
                need -= 1
    if need > 0:
        return None
    return chosen, total


def minimum_spanning_tree(G: Graph, S: Iterable[int]):
    """MST of ``G[S]`` or the string ``"disconnected"``."""
    S = vertex_set(S, G.n)
    res = _kruskal(G.n, G.edges, S)
    if res is None:
        return "disconnected"
    chosen, total = res
    return SteinerTree(tuple(sorted(chosen)), total, S)


def prune_to_tree(G: Graph, edges: Iterable[tuple[int, int]], terminals: Iterable[int]) -> SteinerTree:
    """Spanning tree of the union of ``edges`` with non-terminal leaves stripped."""
    terms = set(terminals)
    es = sorted({_key(u, v) for u, v in edges})
    vs = sorted({x for e in es for x in e} | (terms if not es else set()))
    res = _kruskal(G.n, [(u, v, G.weight(u, v)) for u, v in es], vs)
    if res is None:
        raise DisconnectedError("edge union is not connected")
    tree = {(u, v) for u, v, _ in res[0]}
    while True:
        deg: dict[int, int] = {}
        for u, v in tree:
            deg[u] = deg.get(u, 0) + 1
            deg[v] = deg.get(v, 0) + 1
        drop = {e for e in tree if (deg[e[0]] == 1 and e[0] not in terms) or (deg[e[1]] == 1 and e[1] not in terms)}
        if not drop:
            break
        tree -= drop
    return SteinerTree.from_edges(G, tree, terms)


def brute_force_steiner(G: Graph, K: Iterable[int], limit: int = BRUTE_FORCE_LIMIT) -> SteinerTree:
    """Minimum over Steiner vertex subsets S of MST(G[K + S]).

    Subsets are tried by size then lexicographically; the first strict
    minimum wins.
    """
    K = vertex_set(K, G.n)
    if not K:
        raise SteinerError("empty terminal set")
    others = [v for v in range(G.n) if v not in set(K)]
    if len(others) > limit:
        raise GuardError(f"{len(others)} non-terminals exceed the brute-force limit {limit}")
    best = None
    for size in range(len(others) + 1):
        for S in itertools.combinations(others, size):
            res = _kruskal(G.n, G.edges, K + S)
            if res is not None and (best is None or res[1] < best[1] - TOL):
                best = res
    if best is None:
        raise DisconnectedError(f"terminals {K} are not connected")
    return SteinerTree(tuple(sorted(best[0])), best[1], K)


def steiner_weight_table(G: Graph, limit: int = 16) -> np.ndarray:
    """W_G(S) for every vertex subset S (bitmask index), by exhaustive MSTs.

    Induced-subgraph MST weights are computed for all 2^n subsets and the
    minimum is pushed down to every subset (superset-minimum transform).
    Independent of the dynamic programs; used as a bulk oracle.
    """
    n = G.n
    if n > limit:
        raise GuardError(f"{n} vertices exceed the table limit {limit}")
    full = 1 << n
    mst = np.full(full, INF)
    for mask in range(full):
        vs = [v for v in range(n) if mask >> v & 1]
        if len(vs) <= 1:
            mst[mask] = 0.0
            continue
        res = _kruskal(n, G.edges, vs)
        if res is not None:
            mst[mask] = res[1]
    idx = np.arange(full)
    for b in range(n):
        lo = idx[(idx >> b & 1) == 0]
        mst[lo] = np.minimum(mst[lo], mst[lo | (1 << b)])
    return mst


def subset_mask(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def is_connected(G: Graph, vertices: Iterable[int] | None = None) -> bool:
    vs = range(G.n) if vertices is None else vertices
    d = all_pairs_shortest_paths(G).dist
    vs = list(vs)
    return not vs or bool(np.isfinite(d[vs[0], vs]).all())


@dataclass(frozen=True)
class TerminalMask:
    """Bit set over an indexed terminal list."""

    bits: int
    k: int

    def __post_init__(self):
        if self.bits < 0 or self.bits >> self.k:
            raise GraphError(f"mask {self.bits:b} wider than {self.k} terminals")

    @classmethod
    def from_vertices(cls, vertices: Iterable[int], terminals: Sequence[int]) -> "TerminalMask":
        pos = {t: i for i, t in enumerate(terminals)}
        bits = 0
        for v in vertices:
            if v not in pos:
                raise GraphError(f"vertex {v} is not a terminal")
            bits |= 1 << pos[v]
        return cls(bits, len(terminals))

    def to_vertices(self, terminals: Sequence[int]) -> tuple[int, ...]:
        return vertex_set(terminals[i] for i in range(self.k) if self.bits >> i & 1)

    def __len__(self) -> int:
        return bin(self.bits).count("1")
