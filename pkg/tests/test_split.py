import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_instance
from steinerq.analysis import a_factor, predicted_search_sizes
from steinerq.dw import dw_solve
from steinerq.graph import INF, DisconnectedError, Graph, GuardError, SteinerTree, all_pairs_shortest_paths, brute_force_steiner
from steinerq.split import (
    OracleWeights,
    QueryLedger,
    SplitParams,
    dh_min,
    enumerate_2splits,
    split_minimum,
    hybrid_solve,
    make_split,
    perturbed_tree,
    quantum_cost,
    size_window,
    split_term,
    verify_split_optimality,
    find_balanced_split,
)


def test_params_validation():
    with pytest.raises(ValueError):
        SplitParams(beta=0.6)
    with pytest.raises(ValueError):
        SplitParams(epsilon=0.25, a_cap=3)
    with pytest.raises(ValueError):
        SplitParams(search="random")
    with pytest.raises(ValueError):
        SplitParams(levels=2, alphas=(0.5,))
    assert SplitParams().alpha_list() == (0.5, 0.5, 0.28325)


@pytest.mark.parametrize("N,c,q", [(0, 1, 0), (1, 1, 1), (3, 1, 2), (4, 1, 2), (10000, 1, 100), (3, 2, 4), (2, 0.5, 1)])
def test_quantum_cost(N, c, q):
    assert quantum_cost(N, c) == q


def test_dh_min_single():
    led = QueryLedger()
    assert dh_min(["a"], lambda x: 4.0, led) == ("a", 4.0)
    assert led.classical_evaluations == 1 and led.quantum_queries == 1


def test_dh_min_small():
    led = QueryLedger()
    assert dh_min([5, 3, 9], lambda x: x, led) == (3, 3)
    assert led.classical_evaluations == 3 and led.quantum_queries == 2


def test_dh_min_large_and_ties():
    rng = random.Random(1)
    vals = [rng.randint(0, 500) for _ in range(10000)]
    led = QueryLedger()
    key, best = dh_min(range(10000), vals.__getitem__, led)
    assert best == min(vals) and key == vals.index(best)
    assert led.quantum_queries == 100
    with pytest.raises(ValueError):
        dh_min([], lambda x: 0)


def test_dh_min_all_infinite():
    assert dh_min([2, 1], lambda x: INF) == (1, INF)


def test_ledger_roundtrip():
    led = QueryLedger(2.0)
    led.record(1, 70, 70)
    led.record(2, 6, 6, count=3)
    again = QueryLedger.from_dict(led.to_dict())
    assert again.same_counts(led) and again.quantum_queries == led.quantum_queries == 17 + 3 * 5


def test_split_term_singleton_right_side_is_zero():
    G, K = random_instance(1, 8, 4)
    oracle = OracleWeights()
    v = K[-1]
    val = split_term(G, K, K[:-1], [v], oracle, oracle)
    assert val == brute_force_steiner(G, K).weight


def test_split_term_all_terminals_left_is_upper_bound():
    G, K = random_instance(2, 8, 4)
    oracle = OracleWeights()
    for A in ([], [0], [1, 5]):
        assert split_term(G, K, K, A, oracle, oracle) >= brute_force_steiner(G, K).weight - 1e-9


def test_split_term_empty_a():
    G, K = random_instance(3, 6, 3)
    oracle = OracleWeights()
    assert split_term(G, K, K[:1], [], oracle, oracle) == INF


def test_split_minimum_matches_oracle():
    G, K = random_instance(4, 10, 5)
    oracle = OracleWeights()
    (K1, A), best = split_minimum(G, K, oracle, oracle, a_cap=2)
    assert best == brute_force_steiner(G, K).weight
    assert len(K1) in size_window(5, 0.5, 0.25)


def test_size_window():
    assert list(size_window(8, 0.5, 0.25)) == [2, 3, 4, 5, 6]
    assert list(size_window(4, 0.28325, 0.25)) == [1, 2]


def test_hybrid_two_terminals():
    G, _ = random_instance(5, 9, 2)
    T, led = hybrid_solve(G, [1, 8])
    assert T.weight == all_pairs_shortest_paths(G)(1, 8) == dw_solve(G, [1, 8]).weight


def test_hybrid_trivial_and_errors():
    G, _ = random_instance(5, 6, 2)
    T, led = hybrid_solve(G, [3])
    assert T.weight == 0 and led.invocations == 0
    with pytest.raises(DisconnectedError):
        hybrid_solve(Graph(4, [(0, 1, 1), (2, 3, 1)]), [0, 3])


def test_hybrid_sweep_matches_oracle():
    rng = random.Random(3)
    for _ in range(200):
        k = rng.randint(4, 8)
        n = rng.randint(k, 12)
        G, K = random_instance(rng.randrange(10**9), n, k, density=rng.choice((0.3, 0.45, 0.6)))
        T, _ = hybrid_solve(G, K)
        assert T.is_valid(G, K)
        if n - k <= 8:
            assert T.weight == brute_force_steiner(G, K).weight
        else:
            assert T.weight == dw_solve(G, K).weight


@pytest.mark.parametrize("k,n,a_cap", [(6, 9, 1), (8, 10, 2), (7, 7, 2)])
def test_level1_size_closed_form(k, n, a_cap):
    G, K = random_instance(k * 31 + n, n, k)
    params = SplitParams(epsilon=0.25, a_cap=a_cap)
    _, led = hybrid_solve(G, K, params)
    lo = max(0, math.floor(k / 2) - math.floor(0.25 * k))
    hi = min(k, math.floor(k / 2) + math.floor(0.25 * k))
    expect = sum(math.comb(k, j) for j in range(lo, hi + 1)) * sum(math.comb(n, j) for j in range(a_cap + 1))
    assert dict(led.sizes(1)) == {expect: 1}


def test_ledger_matches_prediction_without_slack():
    G, K = random_instance(9, 8, 8)
    _, led = hybrid_solve(G, K, SplitParams(epsilon=1 / 512, a_cap=1))
    pred = predicted_search_sizes(8, levels=3)
    assert dict(led.sizes(1)) == {pred[0].driver * a_factor(8, 1): 1}
    for p in pred:
        assert set(led.records[p.level].drivers) == {p.driver}


def tiny_instances(count, seed=100):
    rng = random.Random(seed)
    for _ in range(count):
        n = rng.randint(3, 6)
        k = rng.randint(2, min(4, n))
        yield random_instance(rng.randrange(10**9), n, k)


def test_pruned_equals_exhaustive():
    for G, K in tiny_instances(4):
        runs = [
            hybrid_solve(G, K, SplitParams(a_cap=1, memoize=True)),
            hybrid_solve(G, K, SplitParams(a_cap=1, memoize=False)),
            hybrid_solve(G, K, SplitParams(a_cap=1, search="exhaustive")),
        ]
        (T0, l0), *rest = runs
        for T, led in rest:
            assert T.edges == T0.edges
            assert led.same_counts(l0)


def test_widening_recorded():
    G, K = random_instance(12, 8, 4)
    T, led = hybrid_solve(G, K, SplitParams(epsilon=1 / 64, a_cap=0))
    assert T.weight == dw_solve(G, K).weight
    assert led.meta["widenings"] and led.meta["widenings"][0]["reason"] == "infeasible"
    assert led.meta["a_cap"] == 1
    assert len(led.meta["attempts"]) == len(led.meta["widenings"])


def test_dh_constant_scales_queries():
    G, K = random_instance(13, 8, 5)
    _, one = hybrid_solve(G, K, SplitParams(dh_constant=1.0))
    _, two = hybrid_solve(G, K, SplitParams(dh_constant=2.0))
    assert one.classical_evaluations == two.classical_evaluations
    for lv, rec in two.records.items():
        assert rec.quantum == sum(c * math.ceil(2 * math.sqrt(N) - 1e-12) for N, c in rec.sizes.items())
        assert 2 * one.records[lv].quantum - rec.quantum in range(0, rec.invocations + 1)


def test_splits_single_edge():
    G = Graph(2, [(0, 1, 3)])
    T = SteinerTree.from_edges(G, [(0, 1)], [0, 1])
    splits = enumerate_2splits(T, [0, 1])
    assert [(s.t1, s.e_prime) for s in splits] == [((), ((0, 1),)), (((0, 1),), ())]


def test_splits_path_of_two():
    G = Graph(3, [(0, 1, 1), (1, 2, 1)])
    T = SteinerTree.from_edges(G, [(0, 1), (1, 2)], [0, 2])
    splits = enumerate_2splits(T, [0, 2])
    assert len(splits) == 4
    mid = make_split(T, [0, 2], [(0, 1)])
    assert mid.A == (1,) and mid.K1 == (0,) and mid.K2 == (2,)


def test_split_guard():
    G = Graph(30, [(i, i + 1, 1) for i in range(29)])
    T = SteinerTree.from_edges(G, [(i, i + 1) for i in range(29)], [0, 29])
    with pytest.raises(GuardError):
        enumerate_2splits(T, [0, 29])


def test_split_invariants_and_optimality():
    oracle = OracleWeights()
    for seed in range(15):
        G, K = random_instance(seed, 8, 4)
        T = dw_solve(G, K)
        for s in enumerate_2splits(T, K):
            assert s.problems(T) == []
            assert verify_split_optimality(G, K, T, s, oracle).ok


def test_empty_rest_reduces_to_optimality():
    G, K = random_instance(20, 8, 4)
    T = dw_solve(G, K)
    whole = enumerate_2splits(T, K)[-1]
    assert whole.e_prime == ()
    rep = verify_split_optimality(G, K, T, whole)
    assert rep.ok and rep.first_optimum == T.weight


def test_split_optimality_negative_control():
    G, K = random_instance(21, 8, 4, density=0.6)
    T = dw_solve(G, K)
    bad = perturbed_tree(G, K, T)
    assert bad.weight > T.weight
    assert not all(verify_split_optimality(G, K, bad, s).ok for s in enumerate_2splits(bad, K))


def test_balanced_split_wide_window():
    G, K = random_instance(22, 8, 4)
    T = dw_solve(G, K)
    assert find_balanced_split(G, K, T, 0.5, 0.5) is not None


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6), st.integers(3, 5))
def test_balanced_split_witness(seed, k):
    G, K = random_instance(seed, 9, k)
    T = dw_solve(G, K)
    for alpha in (0.5, 0.28325):
        w = find_balanced_split(G, K, T, alpha, 0.25)
        assert w is not None and len(w.A) <= 2
        assert len(w.K1) in size_window(k, alpha, 0.25)
