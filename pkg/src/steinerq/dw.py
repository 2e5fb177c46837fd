"""Dreyfus-Wagner dynamic programming over terminal subsets.

Tables hold ``D[X][p] = W(X + {p})`` for terminal masks ``X`` and every
vertex ``p``, computed level by level (by subset size) and vectorised over
masks of equal size.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .graph import (
    INF,
    ContractedGraph,
    DisconnectedError,
    Graph,
    GraphError,
    SteinerError,
    SteinerTree,
    all_pairs_shortest_paths,
    contract,
    contract_groups,
    prune_to_tree,
    vertex_set,
)

_CHUNK = 1 << 21


@lru_cache(maxsize=None)
def _combo_bits(s: int) -> np.ndarray:
    """Rows are the bit patterns 0 .. 2^(s-1)-2 over s-1 free bits."""
    c = np.arange((1 << (s - 1)) - 1, dtype=np.int64)
    return ((c[:, None] >> np.arange(s - 1)) & 1).astype(np.int64)


def _canonical_submasks(positions: np.ndarray) -> np.ndarray:
    """Proper submasks containing the lowest set bit, one row per mask."""
    low = np.left_shift(1, positions[:, 0]).astype(np.int64)
    rest = np.left_shift(1, positions[:, 1:]).astype(np.int64)
    return low[:, None] + rest @ _combo_bits(positions.shape[1]).T


def canonical_submasks(mask: int) -> list[int]:
    bits = [i for i in range(mask.bit_length()) if mask >> i & 1]
    if len(bits) < 2:
        return []
    return [int(x) for x in _canonical_submasks(np.array([bits]))[0]]


class DWTable:
    """Dreyfus-Wagner table for an ordered terminal list in one graph.

    ``weight(X, p)`` is the weight of a minimum Steiner tree for the
    terminals of mask ``X`` together with vertex ``p``.  Levels (subset
    sizes) are computed on demand; ``cap`` bounds the largest level.
    """

    def __init__(self, graph: Graph, terminals: Sequence[int], dist=None, cap: int | None = None):
        self.graph = graph
        self.terminals = tuple(int(t) for t in terminals)
        self.dist = dist if dist is not None else all_pairs_shortest_paths(graph)
        t = len(self.terminals)
        if t > 24:
            raise SteinerError(f"{t} terminals is beyond the table limit")
        self.cap = t if cap is None else min(int(cap), t)
        n = graph.n
        self._row = np.full(1 << t, -1, dtype=np.int64)
        self._row[0] = 0
        first = np.zeros((1, n))
        if t:
            self._row[1 << np.arange(t)] = np.arange(1, t + 1)
            first = np.vstack([first, self.dist.dist[list(self.terminals)]])
        self._D = first
        self.size = min(1, self.cap)

    @property
    def k(self) -> int:
        return len(self.terminals)

    def ensure(self, size: int) -> None:
        size = min(size, self.cap)
        d = self.dist.dist
        while self.size < size:
            s = self.size + 1
            pos = np.array(list(itertools.combinations(range(self.k), s)), dtype=np.int64)
            masks = np.left_shift(1, pos).sum(axis=1)
            out = np.empty((len(masks), self.graph.n))
            per = max(1, _CHUNK // (((1 << (s - 1)) - 1) * self.graph.n))
            for lo in range(0, len(masks), per):
                p = pos[lo:lo + per]
                m = masks[lo:lo + per]
                subs = _canonical_submasks(p)
                merged = (self._D[self._row[subs]] + self._D[self._row[m[:, None] ^ subs]]).min(axis=1)
                out[lo:lo + per] = (merged[:, None, :] + d[None, :, :]).min(axis=2)
            self._row[masks] = len(self._D) + np.arange(len(masks))
            self._D = np.vstack([self._D, out])
            self.size = s

    def row(self, mask: int) -> np.ndarray:
        pc = bin(mask).count("1")
        if pc > self.cap:
            raise KeyError(f"mask {mask:b} exceeds the table cap {self.cap}")
        self.ensure(pc)
        return self._D[self._row[mask]]

    def weight(self, mask: int, p: int) -> float:
        return float(self.row(mask)[p])

    def steiner_weight(self, mask: int) -> float:
        """W(X) for the terminal set of ``mask`` alone."""
        if mask == 0 or mask & (mask - 1) == 0:
            return 0.0
        q = mask.bit_length() - 1
        return self.weight(mask ^ (1 << q), self.terminals[q])

    def mask_of(self, vertices: Iterable[int]) -> int:
        pos = {t: i for i, t in enumerate(self.terminals)}
        m = 0
        for v in vertices:
            m |= 1 << pos[v]
        return m

    def computed_masks(self) -> list[int]:
        return [int(m) for m in np.flatnonzero(self._row >= 0)]

    def merged(self, mask: int) -> tuple[np.ndarray, list[int]]:
        """Best sub-tree pair value per meeting vertex, and the canonical submasks."""
        subs = canonical_submasks(mask)
        vals = np.array([self.row(s) + self.row(mask ^ s) for s in subs])
        return vals, subs

    def decompose(self, mask: int, q: int):
        """Backpointer for entry (mask, q): ``("empty",)``, ``("path", t)`` or ``("split", p, X')``."""
        pc = bin(mask).count("1")
        if pc == 0:
            return ("empty",)
        if pc == 1:
            return ("path", self.terminals[mask.bit_length() - 1])
        vals, subs = self.merged(mask)
        best = vals.min(axis=0)
        p = int(np.argmin(self.dist.dist[q] + best))
        return ("split", p, subs[int(np.argmin(vals[:, p]))])

    def edges(self, mask: int, q: int) -> list[tuple[int, int]]:
        if not np.isfinite(self.weight(mask, q)):
            raise DisconnectedError(f"entry ({mask:b}, {q}) is infeasible")
        out: list[tuple[int, int]] = []
        stack = [(mask, q)]
        while stack:
            m, v = stack.pop()
            step = self.decompose(m, v)
            if step[0] == "path":
                out.extend(self.dist.path(step[1], v))
            elif step[0] == "split":
                _, p, sub = step
                out.extend(self.dist.path(v, p))
                stack.append((sub, p))
                stack.append((m ^ sub, p))
        return out

    def reconstruct(self, mask: int, q: int) -> SteinerTree:
        required = [self.terminals[i] for i in range(self.k) if mask >> i & 1] + [q]
        return prune_to_tree(self.graph, self.edges(mask, q), required)

    def mask_count(self) -> int:
        return int((self._row >= 0).sum())


def dw_solve(G: Graph, K: Iterable[int]) -> SteinerTree:
    K = vertex_set(K, G.n)
    if not K:
        raise SteinerError("empty terminal set")
    if len(K) == 1:
        return SteinerTree((), 0.0, K)
    table = DWTable(G, K[:-1])
    full = (1 << (len(K) - 1)) - 1
    if not np.isfinite(table.weight(full, K[-1])):
        raise DisconnectedError(f"terminals {K} are not connected")
    return table.reconstruct(full, K[-1])


def bounded_cap(alpha: float, k: int) -> int:
    return min(k, math.ceil(alpha * k - 1e-12))


def dw_bounded(G: Graph, K: Iterable[int], alpha: float) -> DWTable:
    """Table of W(X + {p}) for every terminal subset X with |X| <= ceil(alpha k)."""
    if not 0 < alpha <= 0.5:
        raise ValueError(f"alpha={alpha} outside (0, 1/2]")
    K = vertex_set(K, G.n)
    table = DWTable(G, K, cap=bounded_cap(alpha, len(K)))
    table.ensure(table.cap)
    return table


def audit_recurrence(table: DWTable, tol: float = 1e-9) -> list[tuple[int, int, float, float]]:
    """Recheck every non-base entry against the recursion over all proper submasks.

    Returns (mask, vertex, stored, recomputed) for each mismatch.
    """
    d = table.dist.dist
    bad = []
    for mask in table.computed_masks():
        if bin(mask).count("1") < 2:
            continue
        subs = [s for s in range(1, mask) if s & mask == s]
        pair = np.array([table.row(s) + table.row(mask ^ s) for s in subs]).min(axis=0)
        again = (d + pair[None, :]).min(axis=1)
        stored = table.row(mask)
        for q in range(table.graph.n):
            a, b = stored[q], again[q]
            if not (a == b or abs(a - b) <= tol):
                bad.append((mask, q, float(a), float(b)))
    return bad


def step1_size_cap(beta: float, epsilon: float, k: int) -> int:
    return min(k, math.ceil(((1 - beta) / 4 + 15 * epsilon) * k - 1e-12))


def log_cap(epsilon: float) -> int:
    return math.ceil(math.log2(1 / epsilon) - 1e-12)


@dataclass
class Step1Tables:
    """Step-1 values W_G(X + A) and W_{G/A}(X + {v_A}) for bounded X and A."""

    graph: Graph
    terminals: tuple[int, ...]
    size_cap: int
    a_cap: int
    plain: dict = field(default_factory=dict)
    contracted: dict = field(default_factory=dict)

    def a_sets(self):
        return list(self.plain)

    def _check(self, mask: int, A: tuple[int, ...]):
        if bin(mask).count("1") > self.size_cap or A not in self.plain:
            raise KeyError((mask, A))

    def plain_weight(self, mask: int, A: Iterable[int]) -> float:
        A = vertex_set(A)
        self._check(mask, A)
        table = self.plain[A]
        if not A:
            return table.steiner_weight(mask)
        extra = ((1 << (len(A) - 1)) - 1) << len(self.terminals)
        return table.weight(mask | extra, A[-1])

    def contracted_weight(self, mask: int, A: Iterable[int]) -> float:
        A = vertex_set(A)
        self._check(mask, A)
        if not A:
            return 0.0 if mask == 0 else INF
        cg, table = self.contracted[A]
        return table.weight(mask, cg.contracted_vertex)

    def plain_tree(self, mask: int, A: Iterable[int]) -> SteinerTree:
        A = vertex_set(A)
        self._check(mask, A)
        table = self.plain[A]
        req = [t for i, t in enumerate(self.terminals) if mask >> i & 1] + list(A)
        if not A:
            if mask & (mask - 1) == 0:
                return SteinerTree((), 0.0, vertex_set(req))
            q = mask.bit_length() - 1
            return prune_to_tree(self.graph, table.edges(mask ^ (1 << q), self.terminals[q]), req)
        extra = ((1 << (len(A) - 1)) - 1) << len(self.terminals)
        return prune_to_tree(self.graph, table.edges(mask | extra, A[-1]), req)

    def contracted_tree(self, mask: int, A: Iterable[int]) -> SteinerTree:
        """Tree in G/A for X + {v_A}, in the contracted graph's vertex ids."""
        A = vertex_set(A)
        self._check(mask, A)
        cg, table = self.contracted[A]
        return table.reconstruct(mask, cg.contracted_vertex)

    def entry_count(self) -> int:
        return sum(t.mask_count() for t in self.plain.values()) + sum(t.mask_count() for _, t in self.contracted.values())


def precompute_step1(G: Graph, K: Iterable[int], beta: float, epsilon: float, a_cap: int | None = None) -> Step1Tables:
    if not 0 < beta <= 0.5:
        raise ValueError(f"beta={beta} outside (0, 1/2]")
    if not 0 < epsilon < 1:
        raise ValueError(f"epsilon={epsilon} outside (0, 1)")
    bound = log_cap(epsilon)
    a_cap = bound if a_cap is None else a_cap
    if not 0 <= a_cap <= bound:
        raise ValueError(f"a_cap={a_cap} outside [0, ceil(log2(1/epsilon))={bound}]")
    K = vertex_set(K, G.n)
    k = len(K)
    cap = step1_size_cap(beta, epsilon, k)
    dist = all_pairs_shortest_paths(G)
    tabs = Step1Tables(G, K, cap, a_cap)
    for size in range(a_cap + 1):
        for A in itertools.combinations(range(G.n), size):
            plain = DWTable(G, K + A[:-1], dist=dist, cap=cap + max(0, size - 1))
            plain.ensure(plain.cap)
            tabs.plain[A] = plain
            if A:
                cg = contract(G, A)
                images = [cg.image(t) for t in K]
                table = DWTable(cg.graph, images, cap=cap)
                table.ensure(cap)
                tabs.contracted[A] = (cg, table)
    return tabs


Token = tuple  # a vertex of a contracted graph named by its sorted original-vertex group


class SubproblemWeights:
    """Exact W_H(R) for graphs H obtained from G by contracting disjoint groups.

    A graph is named by its partition (sorted tuple of merged groups) and a
    vertex by its group token, so results are shared between contraction
    orders.  Values come from lazily grown Dreyfus-Wagner tables over the
    terminal images, extended by at most a few extra required vertices.
    """

    def __init__(self, G: Graph, K: Sequence[int]):
        self.G = G
        self.K = tuple(K)
        self._graphs: dict = {}
        self._tables: dict = {}
        self._cache: dict = {}

    def graph(self, part: tuple):
        info = self._graphs.get(part)
        if info is None:
            if part:
                H, groups = contract_groups(self.G, part)
            else:
                H, groups = self.G, tuple((v,) for v in range(self.G.n))
            index = {g: i for i, g in enumerate(groups)}
            owner = {v: g for g in groups for v in g}
            terms = sorted({index[owner[t]] for t in self.K})
            info = (H, groups, index, owner, terms, all_pairs_shortest_paths(H))
            self._graphs[part] = info
        return info

    def token(self, part: tuple, v: int) -> Token:
        return self.graph(part)[3][v]

    def _locate(self, part: tuple, required: frozenset):
        H, groups, index, owner, terms, dist = self.graph(part)
        ids = sorted(index[g] for g in required)
        tset = set(terms)
        extra = [i for i in ids if i not in tset]
        inner = [i for i in ids if i in tset]
        key = (part, tuple(extra[:-1]))
        table = self._tables.get(key)
        if table is None:
            table = DWTable(H, list(terms) + extra[:-1], dist=dist)
            self._tables[key] = table
        pos = {t: i for i, t in enumerate(terms)}
        mask = 0
        for i in inner:
            mask |= 1 << pos[i]
        if extra:
            mask |= ((1 << (len(extra) - 1)) - 1) << len(terms)
            root = extra[-1]
        else:
            q = mask.bit_length() - 1
            root = terms[q]
            mask ^= 1 << q
        return table, mask, root

    def weight(self, part: tuple, required: Iterable[Token]) -> float:
        required = frozenset(required)
        key = (part, required)
        val = self._cache.get(key)
        if val is None:
            if len(required) <= 1:
                val = 0.0
            else:
                table, mask, root = self._locate(part, required)
                val = table.weight(mask, root)
            self._cache[key] = val
        return val

    def original_edges(self, part: tuple, required: Iterable[Token]) -> list[tuple[int, int]]:
        """Edges of G realising ``weight(part, required)``."""
        required = frozenset(required)
        if len(required) <= 1:
            return []
        table, mask, root = self._locate(part, required)
        H = self.graph(part)[0]
        return H.original_edges(table.edges(mask, root))

    def table_count(self) -> int:
        return len(self._tables)


# names used by the build contract
audit_eq1 = audit_recurrence
