"""Two-split recursion, nested minimum finding with query accounting, and split validators.

The hybrid solver applies the split recurrence

    W_H(R) = min over (K1, A) of  W_H(K1 + A) + W_{H/A}(K2 + {v_A})

``levels`` times recursively.  Every minimum is found exactly by a
classical scan standing in for quantum minimum finding; the ledger books
each scan at its search-space size N and the modeled ceil(c sqrt(N))
oracle calls.
"""

from __future__ import annotations

import itertools
import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .dw import SubproblemWeights, log_cap
from .graph import (
    INF,
    TOL,
    ContractedGraph,
    DisconnectedError,
    Graph,
    GuardError,
    SteinerError,
    SteinerTree,
    brute_force_steiner,
    contract,
    prune_to_tree,
    vertex_set,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SplitParams:
    levels: int = 3
    alphas: tuple[float, ...] | None = None
    beta: float = 0.28325
    epsilon: float = 0.25
    a_cap: int = 2
    dh_constant: float = 1.0
    memoize: bool = False
    search: str = "pruned"
    max_widenings: int = 64

    def __post_init__(self):
        if self.levels < 1:
            raise ValueError("levels must be >= 1")
        if not 0 < self.beta <= 0.5:
            raise ValueError(f"beta={self.beta} outside (0, 1/2]")
        if not 0 < self.epsilon < 1:
            raise ValueError(f"epsilon={self.epsilon} outside (0, 1)")
        if self.a_cap < 0:
            raise ValueError("a_cap must be >= 0")
        if self.a_cap > log_cap(self.epsilon):
            raise ValueError(f"a_cap={self.a_cap} exceeds ceil(log2(1/epsilon))={log_cap(self.epsilon)}")
        if self.dh_constant <= 0:
            raise ValueError("dh_constant must be positive")
        if self.search not in ("pruned", "exhaustive"):
            raise ValueError(f"unknown search mode {self.search!r}")
        if self.alphas is not None:
            if len(self.alphas) != self.levels:
                raise ValueError("need one alpha per level")
            if not all(0 < a <= 0.5 for a in self.alphas):
                raise ValueError("alphas must lie in (0, 1/2]")

    def alpha_list(self) -> tuple[float, ...]:
        if self.alphas is not None:
            return tuple(self.alphas)
        return (0.5,) * (self.levels - 1) + (self.beta,)

    def as_dict(self) -> dict:
        return {
            "levels": self.levels,
            "alphas": list(self.alpha_list()),
            "beta": self.beta,
            "epsilon": self.epsilon,
            "a_cap": self.a_cap,
            "dh_constant": self.dh_constant,
            "memoize": self.memoize,
            "search": self.search,
        }


def quantum_cost(N: int, dh_constant: float = 1.0) -> int:
    """ceil(c * sqrt(N)) computed exactly."""
    if N <= 0:
        return 0
    c2n = Fraction(dh_constant) ** 2 * N
    q = math.isqrt(c2n.numerator // c2n.denominator)
    while q * q < c2n:
        q += 1
    return q


@dataclass
class LevelRecord:
    level: int
    invocations: int = 0
    sizes: Counter = field(default_factory=Counter)
    drivers: Counter = field(default_factory=Counter)
    classical: int = 0
    quantum: int = 0

    def add(self, N: int, driver: int, dh_constant: float, count: int = 1) -> None:
        self.invocations += count
        self.sizes[N] += count
        self.drivers[driver] += count
        self.classical += N * count
        self.quantum += quantum_cost(N, dh_constant) * count

    def to_dict(self) -> dict:
        return {
            "level": self.level,
            "invocations": self.invocations,
            "sizes": {str(k): v for k, v in sorted(self.sizes.items())},
            "drivers": {str(k): v for k, v in sorted(self.drivers.items())},
            "classical": self.classical,
            "quantum": self.quantum,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "LevelRecord":
        return cls(
            d["level"],
            d["invocations"],
            Counter({int(k): v for k, v in d["sizes"].items()}),
            Counter({int(k): v for k, v in d["drivers"].items()}),
            d["classical"],
            d["quantum"],
        )


@dataclass
class QueryLedger:
    """Per-level search sizes, classical evaluations and modeled quantum queries.

    ``drivers`` counts terminal-subset choices only; N additionally
    includes the polynomial factor from split-node sets.
    """

    dh_constant: float = 1.0
    records: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    def level(self, level: int) -> LevelRecord:
        if level not in self.records:
            self.records[level] = LevelRecord(level)
        return self.records[level]

    def record(self, level: int, N: int, driver: int | None = None, count: int = 1) -> None:
        self.level(level).add(N, N if driver is None else driver, self.dh_constant, count)

    @property
    def classical_evaluations(self) -> int:
        return sum(r.classical for r in self.records.values())

    @property
    def quantum_queries(self) -> int:
        return sum(r.quantum for r in self.records.values())

    @property
    def invocations(self) -> int:
        return sum(r.invocations for r in self.records.values())

    def sizes(self, level: int) -> Counter:
        return self.records[level].sizes if level in self.records else Counter()

    def same_counts(self, other: "QueryLedger") -> bool:
        return {k: r.to_dict() for k, r in self.records.items()} == {k: r.to_dict() for k, r in other.records.items()}

    def to_dict(self) -> dict:
        return {
            "dh_constant": self.dh_constant,
            "levels": [self.records[k].to_dict() for k in sorted(self.records)],
            "classical_evaluations": self.classical_evaluations,
            "quantum_queries": self.quantum_queries,
            "meta": self.meta,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "QueryLedger":
        led = cls(d["dh_constant"], meta=dict(d.get("meta", {})))
        for r in d["levels"]:
            led.records[r["level"]] = LevelRecord.from_dict(r)
        return led


def dh_min(domain: Sequence, evaluator: Callable, ledger: QueryLedger | None = None, level: int = 1, driver: int | None = None):
    """Exact minimum over ``domain``; ties go to the smallest key.

    Stands in for quantum minimum finding: the ledger is charged N = |domain|
    classical evaluations and ceil(c sqrt(N)) modeled oracle calls.
    """
    if len(domain) == 0:
        raise ValueError("minimum over an empty domain")
    best_key, best = None, INF
    values = []
    for key in domain:
        v = evaluator(key)
        values.append((key, v))
        if v < best:
            best = v
    if best < INF:
        best_key = min(key for key, v in values if v <= best + TOL)
    else:
        best_key = min(key for key, _ in values)
    if ledger is not None:
        ledger.record(level, len(domain), driver)
    return best_key, best


# ----------------------------------------------------------------------------
# single application of the recurrence


def _eval_right(right_eval, G: Graph, K2: Sequence[int], A: Sequence[int]) -> float:
    if not A:
        return 0.0 if not K2 else INF
    cg = contract(G, A)
    return right_eval(cg, vertex_set([cg.image(t) for t in K2] + [cg.contracted_vertex]))


def split_term(G: Graph, K: Iterable[int], K1: Iterable[int], A: Iterable[int], left_eval: Callable, right_eval: Callable) -> float:
    """W(K1 + A) in G plus W(K2 + {v_A}) in G/A with K2 = K minus (K1 + A).

    ``left_eval(G, S)`` and ``right_eval(contracted, S)`` return Steiner
    weights; an empty A makes the right term 0 when K2 is empty and
    infinite otherwise.
    """
    K = vertex_set(K, G.n)
    K1 = vertex_set(K1, G.n)
    A = vertex_set(A, G.n)
    if not set(K1) <= set(K):
        raise SteinerError("K1 must be a subset of K")
    K2 = [t for t in K if t not in set(K1) | set(A)]
    left = left_eval(G, vertex_set(K1 + A))
    if left == INF:
        return INF
    return left + _eval_right(right_eval, G, K2, A)


def size_window(k: int, alpha: float, eta: float) -> range:
    lo = max(0, math.ceil((alpha - eta) * k - 1e-9))
    hi = min(k, math.floor((alpha + eta) * k + 1e-9))
    return range(lo, hi + 1)


def split_minimum(G: Graph, K: Iterable[int], left_eval: Callable, right_eval: Callable, a_cap: int,
                alpha: float = 0.5, eta: float = 0.25, ledger: QueryLedger | None = None):
    """Minimise the split term over |K1| in (alpha +- eta) k and |A| <= a_cap, A anywhere in V."""
    K = vertex_set(K, G.n)
    domain = [
        (K1, A)
        for j in size_window(len(K), alpha, eta)
        for K1 in itertools.combinations(K, j)
        for size in range(a_cap + 1)
        for A in itertools.combinations(range(G.n), size)
    ]
    return dh_min(domain, lambda key: split_term(G, K, key[0], key[1], left_eval, right_eval), ledger)


class OracleWeights:
    """Brute-force Steiner weights with per-(graph, set) caching."""

    def __init__(self, limit: int = 22):
        self.limit = limit
        self._cache: dict = {}

    def __call__(self, graph, S) -> float:
        if isinstance(graph, ContractedGraph):
            graph = graph.graph
        S = vertex_set(S)
        key = (graph, S)
        if key not in self._cache:
            try:
                self._cache[key] = brute_force_steiner(graph, S, self.limit).weight if len(S) > 1 else 0.0
            except DisconnectedError:
                self._cache[key] = INF
        return self._cache[key]


# ----------------------------------------------------------------------------
# hybrid solver


def _poly(z: int, nH: int, a_cap: int) -> int:
    """Sum over split-node sets A' (|A'| <= a_cap) of 2^|Z - A'| side choices."""
    total = 0
    for p in range(min(z, a_cap) + 1):
        for q in range(a_cap - p + 1):
            total += math.comb(z, p) * math.comb(nH - z, q) * 2 ** (z - p)
    return total


class _Search:
    """One parameterisation of the nested search (fixed window slack and a_cap)."""

    def __init__(self, G: Graph, K: tuple, params: SplitParams, weights: SubproblemWeights,
                 extra_slack: int, a_cap: int, ledger: QueryLedger):
        self.G, self.K, self.params, self.weights = G, K, params, weights
        self.k = len(K)
        self.L = params.levels
        self.alphas = params.alpha_list()
        self.extra = extra_slack
        self.a_cap = a_cap
        self.ledger = ledger
        self.exhaustive = params.search == "exhaustive"
        self.memo: dict = {}
        self.args: dict = {}
        self._windows: dict = {}
        self._acands: dict = {}
        self._profile: dict = {}
        self.entries_evaluated = 0
        self.subproblems = 0

    # -- domain shape -------------------------------------------------------

    def window(self, i: int, m: int) -> range:
        key = (i, m)
        w = self._windows.get(key)
        if w is None:
            center = math.floor(self.alphas[i - 1] * self.k / 2 ** (i - 1) + 1e-9)
            slack = math.floor((self.params.epsilon if i == 1 else 15 * self.params.epsilon) * self.k + 1e-9)
            slack += self.extra
            w = range(max(0, center - slack), min(m, center + slack) + 1)
            self._windows[key] = w
        return w

    def driver(self, i: int, m: int) -> int:
        return sum(math.comb(m, j) for j in self.window(i, m))

    def a_candidates(self, nH: int):
        c = self._acands.get(nH)
        if c is None:
            c = [A for size in range(self.a_cap + 1) for A in itertools.combinations(range(nH), size)]
            self._acands[nH] = c
        return c

    def profile(self, i: int, m: int, z: int, nH: int) -> dict:
        """Ledger counts of an unpruned, unmemoised run of one subproblem, by shape only."""
        key = (i, m, z, nH)
        got = self._profile.get(key)
        if got is not None:
            return got
        driver = self.driver(i, m)
        N = driver * _poly(z, nH, self.a_cap)
        out: dict = {}
        if N:
            out[i] = Counter({(N, driver): 1})
            if i < self.L:
                a = self.a_cap
                for j in self.window(i, m):
                    cj = math.comb(m, j)
                    for p in range(min(z, a) + 1):
                        for q in range(a - p + 1):
                            ca = math.comb(z, p) * math.comb(nH - z, q)
                            if not ca:
                                continue
                            size = p + q
                            for aL in range(z - p + 1):
                                mult = cj * ca * math.comb(z - p, aL)
                                kids = []
                                if j + size + aL >= 2:
                                    kids.append((i + 1, j, size + aL, nH))
                                aR = z - p - aL
                                if size and (m - j) + 1 + aR >= 2:
                                    kids.append((i + 1, m - j, 1 + aR, nH - size + 1))
                                for kid in kids:
                                    for lev, cnt in self.profile(*kid).items():
                                        acc = out.setdefault(lev, Counter())
                                        for shape, c in cnt.items():
                                            acc[shape] += c * mult
        self._profile[key] = out
        return out

    # -- subproblems ----------------------------------------------------------

    def required(self, part, M, Z) -> frozenset:
        tok = self.weights.token
        return frozenset(tok(part, t) for t in M) | frozenset(Z)

    def entries(self, i: int, part, M: tuple, Z: tuple):
        """Yield (key, left child, right child) in key order.

        A child is ``("fixed", value)`` or ``(part, M, Z)``.
        """
        groups = self.weights.graph(part)[1]
        nH = len(groups)
        zset = set(Z)
        for j in self.window(i, len(M)):
            for Ksub in itertools.combinations(M, j):
                MR = tuple(t for t in M if t not in Ksub)
                for Aids in self.a_candidates(nH):
                    Atok = [groups[a] for a in Aids]
                    aset = set(Atok)
                    rest = [z for z in Z if z not in aset]
                    for bits in range(1 << len(rest)):
                        left_z = [rest[b] for b in range(len(rest)) if bits >> b & 1]
                        right_z = [rest[b] for b in range(len(rest)) if not bits >> b & 1]
                        left = (part, Ksub, tuple(sorted(aset | set(left_z))))
                        if not Aids:
                            right = ("fixed", 0.0 if not MR and not right_z else INF)
                        else:
                            merged = tuple(sorted(itertools.chain.from_iterable(Atok)))
                            npart = tuple(g for g in part if g not in aset)
                            if len(merged) > 1:
                                npart = tuple(sorted(npart + (merged,)))
                            right = (npart, MR, tuple(sorted(set(right_z) | {merged})))
                        yield (j, Ksub, len(Aids), Aids, bits), left, right

    def child_bound(self, i: int, child) -> float:
        if child[0] == "fixed":
            return child[1]
        part, M, Z = child
        return self.weights.weight(part, self.required(part, M, Z))

    def child_value(self, i: int, child) -> float:
        if child[0] == "fixed":
            return child[1]
        part, M, Z = child
        if i >= self.L or len(M) + len(Z) < 2:
            return self.weights.weight(part, self.required(part, M, Z))
        return self.solve(i + 1, part, M, Z)

    def solve(self, i: int, part, M: tuple, Z: tuple) -> float:
        key = (i, part, M, Z)
        if self.params.memoize and not self.exhaustive and key in self.memo:
            return self.memo[key]
        self.subproblems += 1
        nH = len(self.weights.graph(part)[1])
        driver = self.driver(i, len(M))
        N = driver * _poly(len(Z), nH, self.a_cap)
        if N == 0:
            self.memo[key] = INF
            self.args[key] = None
            return INF
        if self.exhaustive:
            table = {}
            for ekey, left, right in self.entries(i, part, M, Z):
                table[ekey] = (left, right)

            def evaluate(ekey):
                self.entries_evaluated += 1
                left, right = table[ekey]
                vl = self.child_value(i, left)
                if vl == INF:
                    return INF
                return vl + self.child_value(i, right)

            arg, best = dh_min(list(table), evaluate, self.ledger, i, driver)
            arg = (arg,) + table[arg] if best < INF else None
        else:
            best, arg = self._pruned_min(i, part, M, Z)
        self.memo[key] = best
        self.args[key] = arg
        return best

    def _pruned_min(self, i: int, part, M: tuple, Z: tuple):
        """Same minimum and argmin as a full scan, skipping entries that provably cannot win."""
        floor = self.weights.weight(part, self.required(part, M, Z))
        best, arg = INF, None
        if floor == INF:
            return best, arg
        for ekey, left, right in self.entries(i, part, M, Z):
            lb_left = self.child_bound(i, left)
            lb_right = self.child_bound(i, right)
            if lb_left + lb_right >= best - TOL or lb_left + lb_right == INF:
                continue
            self.entries_evaluated += 1
            vl = self.child_value(i, left)
            if vl + lb_right >= best - TOL:
                continue
            v = vl + self.child_value(i, right)
            if v < best - TOL:
                best, arg = v, (ekey, left, right)
                if best <= floor + TOL:
                    break
        return best, arg

    def edges(self, i: int, part, M: tuple, Z: tuple) -> list[tuple[int, int]]:
        key = (i, part, M, Z)
        if key not in self.args:
            self.solve(i, part, M, Z)
        arg = self.args[key]
        if arg is None:
            raise SteinerError("no feasible decomposition")
        _, left, right = arg
        out = []
        for child in (left, right):
            if child[0] == "fixed":
                continue
            cp, cM, cZ = child
            if i >= self.L or len(cM) + len(cZ) < 2:
                out.extend(self.weights.original_edges(cp, self.required(cp, cM, cZ)))
            else:
                out.extend(self.edges(i + 1, cp, cM, cZ))
        return out

    def run(self) -> float:
        return self.solve(1, (), self.K, ())

    def profile_ledger(self) -> QueryLedger:
        led = QueryLedger(self.params.dh_constant)
        if self.k >= 2:
            for lev, cnt in sorted(self.profile(1, self.k, 0, self.G.n).items()):
                for (N, driver), c in sorted(cnt.items()):
                    led.record(lev, N, driver, c)
        return led


def hybrid_solve(G: Graph, K: Iterable[int], params: SplitParams | None = None) -> tuple[SteinerTree, QueryLedger]:
    """Minimum Steiner tree by nested split search over ``params.levels`` levels.

    Leaf values and the per-subproblem lower bounds used to stop scans
    early come from exact Dreyfus-Wagner tables.  If the configured
    windows admit no optimal split chain, the size windows are widened one
    terminal at a time (a_cap grows by one on the first widening) and the
    search is rerun; each widening is recorded in ``ledger.meta``.
    """
    params = params or SplitParams()
    K = vertex_set(K, G.n)
    if not K:
        raise SteinerError("empty terminal set")
    weights = SubproblemWeights(G, K)
    target = weights.weight((), frozenset((t,) for t in K))
    if target == INF:
        raise DisconnectedError(f"terminals {K} are not connected")
    if len(K) == 1:
        led = QueryLedger(params.dh_constant, meta={"params": params.as_dict(), "widenings": []})
        return SteinerTree((), 0.0, K), led

    extra, a_cap = 0, params.a_cap
    widenings = []
    attempts = []
    while True:
        live = QueryLedger(params.dh_constant)
        search = _Search(G, K, params, weights, extra, a_cap, live)
        value = search.run()
        ledger = live if params.search == "exhaustive" else search.profile_ledger()
        attempts.append({"extra_slack": extra, "a_cap": a_cap, "value": value, "ledger": ledger.to_dict()})
        if value <= target + TOL:
            break
        if len(widenings) >= params.max_widenings:
            raise SteinerError("window widening limit reached without an optimal split chain")
        reason = "infeasible" if value == INF else "suboptimal"
        log.info("widening windows (%s): slack +%d, a_cap %d", reason, extra + 1, a_cap + (not widenings))
        if not widenings:
            a_cap += 1
        extra += 1
        widenings.append({"reason": reason, "extra_slack": extra, "a_cap": a_cap})

    tree = prune_to_tree(G, search.edges(1, (), K, ()), K)
    ledger.meta = {
        "params": params.as_dict(),
        "value": value,
        "widenings": widenings,
        "extra_slack": extra,
        "a_cap": a_cap,
        "entries_evaluated": search.entries_evaluated,
        "subproblems_solved": search.subproblems,
        "tables": weights.table_count(),
        "attempts": attempts[:-1],
    }
    return tree, ledger


# ----------------------------------------------------------------------------
# 2-splits and validators


@dataclass(frozen=True)
class TwoSplit:
    t1: tuple[tuple[int, int], ...]
    e_prime: tuple[tuple[int, int], ...]
    A: tuple[int, ...]
    K1: tuple[int, ...]
    K2: tuple[int, ...]

    def problems(self, T: SteinerTree) -> list[str]:
        out = []
        tedges = set(T.edge_pairs())
        if set(self.t1) & set(self.e_prime):
            out.append("parts share an edge")
        if set(self.t1) | set(self.e_prime) != tedges:
            out.append("parts do not cover the tree")
        if self.t1:
            vs = {x for e in self.t1 for x in e}
            if len(vs) != len(self.t1) + 1:
                out.append("T1 is not a subtree")
        if self.t1 and self.e_prime and not self.A:
            out.append("split nodes empty although both parts are nonempty")
        return out


def _vertices(edges) -> set:
    return {x for e in edges for x in e}


def make_split(T: SteinerTree, K: Iterable[int], t1: Iterable[tuple[int, int]]) -> TwoSplit:
    t1 = tuple(sorted(t1))
    rest = tuple(e for e in T.edge_pairs() if e not in set(t1))
    K = set(K)
    v1, v2 = _vertices(t1), _vertices(rest)
    A = v1 & v2
    return TwoSplit(t1, rest, vertex_set(A), vertex_set((K & v1) - A), vertex_set((K & v2) - A))


def enumerate_2splits(T: SteinerTree, K: Iterable[int], limit: int = 24) -> list[TwoSplit]:
    """Every split whose first part is a (possibly empty) subtree of T."""
    edges = T.edge_pairs()
    if len(edges) > limit:
        raise GuardError(f"tree with {len(edges)} edges exceeds the split limit {limit}")
    touching = [
        {j for j, f in enumerate(edges) if j != i and set(e) & set(f)}
        for i, e in enumerate(edges)
    ]
    found = {frozenset()}
    frontier = [frozenset((i,)) for i in range(len(edges))]
    found.update(frontier)
    while frontier:
        nxt = []
        for s in frontier:
            for j in set().union(*(touching[i] for i in s)) - s:
                t = s | {j}
                if t not in found:
                    found.add(t)
                    nxt.append(t)
        frontier = nxt
    order = sorted(found, key=lambda s: (len(s), sorted(s)))
    K = tuple(K)
    return [make_split(T, K, [edges[i] for i in s]) for s in order]


@dataclass
class SplitOptimalityReport:
    split: TwoSplit
    first_ok: bool
    second_ok: bool
    t1_weight: float
    first_optimum: float
    e_weight: float
    second_optimum: float

    @property
    def ok(self) -> bool:
        return self.first_ok and self.second_ok


def verify_split_optimality(G: Graph, K: Iterable[int], T: SteinerTree, split: TwoSplit, oracle: Callable | None = None) -> SplitOptimalityReport:
    """Check that T1 is optimal for K1 + A in G and E'/A is optimal for K2 + {v_A} in G/A.

    With A empty the second condition compares E' against K2 in G itself.
    """
    oracle = oracle or OracleWeights()
    t1w = G.total(split.t1)
    ew = G.total(split.e_prime)
    first = oracle(G, vertex_set(split.K1 + split.A)) if split.K1 or split.A else 0.0
    if split.A:
        cg = contract(G, split.A)
        second = oracle(cg, vertex_set([cg.image(t) for t in split.K2] + [cg.contracted_vertex]))
    else:
        second = oracle(G, split.K2) if split.K2 else 0.0
    return SplitOptimalityReport(split, abs(t1w - first) <= TOL, abs(ew - second) <= TOL, t1w, first, ew, second)


def find_balanced_split(G: Graph, K: Iterable[int], T: SteinerTree, alpha: float, eta: float,
                        a_bound: int | None = None) -> TwoSplit | None:
    """First split with (alpha - eta) k <= |K1| <= (alpha + eta) k and |A| <= ceil(log2(1/eta)).

    ``G`` is unused; it is accepted so all split validators share one signature.
    """
    if not 0 < alpha <= 0.5 or eta <= 0:
        raise ValueError("need 0 < alpha <= 1/2 and eta > 0")
    K = vertex_set(K)
    k = len(K)
    bound = max(0, log_cap(eta)) if a_bound is None else a_bound
    window = size_window(k, alpha, eta)
    for s in enumerate_2splits(T, K):
        if len(s.K1) in window and len(s.A) <= bound:
            return s
    return None


def perturbed_tree(G: Graph, K: Iterable[int], T: SteinerTree) -> SteinerTree | None:
    """A strictly heavier tree spanning K: one tree edge swapped for a non-tree edge.

    Falls back to hanging one extra pendant edge off the tree.  Returns
    None only when G has no edge outside T.
    """
    K = vertex_set(K)
    pairs = T.edge_pairs()
    tree_edges = set(pairs)
    for e in pairs:
        rest = [f for f in pairs if f != e]
        side = {e[0]}
        grew = True
        while grew:
            grew = False
            for u, v in rest:
                if (u in side) != (v in side):
                    side |= {u, v}
                    grew = True
        for u, v, w in G.edges:
            if (u, v) in tree_edges or (u in side) == (v in side):
                continue
            if u in T.vertices and v in T.vertices and w > G.weight(*e):
                return SteinerTree.from_edges(G, rest + [(u, v)], K)
    vs = T.vertices
    for u, v, _ in G.edges:
        if (u in vs) != (v in vs):
            return SteinerTree.from_edges(G, pairs + [(u, v)], K)
    return None


# names used by the build contract
eq2_minimum = split_minimum
verify_lemma2 = verify_split_optimality
verify_theorem3 = find_balanced_split
