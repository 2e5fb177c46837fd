import math

import pytest

from steinerq.analysis import (
    BETA_STAR,
    a_factor,
    classical_exponent,
    entropy,
    exponent_report,
    predicted_search_sizes,
    printed_quantum_exponent,
    product_exponent,
    quantum_exponent,
    solve_beta,
    table2,
)


def test_entropy():
    assert entropy(0.5) == 1
    assert entropy(0) == entropy(1) == 0
    assert entropy(0.25) == pytest.approx(0.811278, abs=1e-6)
    with pytest.raises(ValueError):
        entropy(1.5)


def test_classical_exponent():
    assert classical_exponent(0.5, 1) == pytest.approx(1.5)
    assert classical_exponent(0.5, 2) == pytest.approx(entropy(0.25) + 0.25)
    assert classical_exponent(0.5, 2) == pytest.approx(1.0613, abs=1e-3)
    assert classical_exponent(BETA_STAR, 3) == pytest.approx(0.8574, abs=1e-3)


def test_quantum_exponent():
    assert quantum_exponent(0.5, 1) == pytest.approx(0.5)
    assert quantum_exponent(BETA_STAR, 3) == pytest.approx(0.8574, abs=1e-3)
    assert quantum_exponent(0.5, 4) >= 0.875
    assert printed_quantum_exponent(BETA_STAR, 3) == pytest.approx(0.965, abs=1e-3)


def test_quantum_exponent_is_half_log_of_binomial_product():
    k = 4096
    sizes = predicted_search_sizes(k, 0.25)
    exact = sum(math.log2(p.driver) for p in sizes) / 2 / k
    assert exact == pytest.approx(quantum_exponent(0.25, 3), abs=5e-3)


def test_solve_beta_three_levels():
    rep = solve_beta(3)
    assert rep.beta == pytest.approx(0.28325, abs=1e-4)
    assert rep.overall_exponent == pytest.approx(0.8574, abs=1e-3)
    assert rep.base == pytest.approx(1.8118, abs=1e-3)
    assert rep.binding == "crossing"


def test_solve_beta_boundaries():
    one = solve_beta(1)
    assert one.beta == 0.5 and one.binding == "classical"
    assert one.classical_exponent == pytest.approx(1.5)
    two = solve_beta(2)
    assert two.beta == 0.5 and two.overall_exponent == pytest.approx(1.0613, abs=1e-3)
    four = solve_beta(4)
    assert four.quantum_exponent >= 0.875


def test_exponent_report():
    rep = exponent_report(0.5, 3)
    assert rep.classical_exponent == pytest.approx(classical_exponent(0.5, 3))
    assert rep.binding == "quantum"
    assert rep.as_dict()["levels"] == 3


def test_table2():
    t = table2()
    assert t.row(1).classical_exponent == pytest.approx(1.5)
    assert t.row(1).quantum_exponent == pytest.approx(0.5)
    assert t.row(2).classical_exponent == pytest.approx(1.0613, abs=1e-3)
    assert t.row(3).classical_exponent == pytest.approx(0.8574, abs=1e-3)
    assert t.row(3).quantum_exponent == pytest.approx(0.8574, abs=1e-3)
    assert 2 ** t.row(3).overall_exponent == pytest.approx(1.812, abs=1e-3)
    assert t.row(4).quantum_exponent >= 0.875
    text = t.to_text()
    assert "printed" in text and "l=2" in text
    assert t.to_csv().splitlines()[0].startswith("levels,beta")
    with pytest.raises(KeyError):
        t.row(9)


def test_predicted_sizes():
    assert predicted_search_sizes(8)[0].driver == math.comb(8, 4) == 70
    assert predicted_search_sizes(4)[1].driver == math.comb(2, 1) == 2
    assert predicted_search_sizes(16, 0.25)[2].driver == math.comb(4, 1) == 4
    with pytest.raises(ValueError):
        predicted_search_sizes(2)


def test_predicted_sizes_with_slack():
    p = predicted_search_sizes(12, epsilon=0.1)
    assert (p[0].lo, p[0].hi) == (5, 7)
    assert p[0].driver == sum(math.comb(12, j) for j in range(5, 8))
    assert (p[1].lo, p[1].hi) == (0, 6)


def test_a_factor():
    assert a_factor(10, 2) == 1 + 10 + 45
    assert a_factor(5, 0) == 1


def test_product_exponent_converges():
    ks = [16, 32, 64, 128]
    vals = [product_exponent(k) for k in ks]
    gaps = [abs(v - 0.8574) for v in vals]
    assert all(a > b for a, b in zip(gaps, gaps[1:]))
    assert gaps[-1] < 0.1
