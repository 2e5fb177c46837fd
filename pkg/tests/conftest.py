import itertools
import random

import pytest

from steinerq.graph import Graph
from steinerq.stp import corpus, generate


def random_instance(seed, n, k, density=0.45, wmax=10):
    inst = generate(seed, n, k, density, (1, wmax))
    return inst.graph, inst.terminals


def path_lengths(G, u, v):
    """Every simple u-v path weight, by plain DFS (tiny graphs only)."""
    out = []

    def walk(x, seen, w):
        if x == v:
            out.append(w)
            return
        for y, wy in G.adj[x]:
            if y not in seen:
                walk(y, seen | {y}, w + wy)

    walk(u, {u}, 0)
    return out


def spanning_tree_weights(G, S):
    """Weights of all spanning trees of the subgraph induced by S, by edge-subset enumeration."""
    S = set(S)
    edges = [(u, v, w) for u, v, w in G.edges if u in S and v in S]
    out = []
    for combo in itertools.combinations(edges, len(S) - 1):
        parent = {x: x for x in S}

        def find(x):
            while parent[x] != x:
                x = parent[x]
            return x

        ok = True
        for u, v, _ in combo:
            a, b = find(u), find(v)
            if a == b:
                ok = False
                break
            parent[a] = b
        if ok:
            out.append(sum(w for _, _, w in combo))
    return out


@pytest.fixture(scope="session")
def small_corpus():
    return corpus(seed=0, count=200)


@pytest.fixture
def triangle():
    return Graph(3, [(0, 1, 1.0), (1, 2, 2.0), (0, 2, 5.0)])


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(RESULTS):
        ok, detail = RESULTS[num]
        terminalreporter.write_line(f"criterion {num:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
