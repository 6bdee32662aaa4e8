import math

import numpy as np
import pytest

from finite_key_lab.sampling import (
    FailureEstimate,
    SamplingSpec,
    Strategy,
    analytic_failure_bound,
    delta_for_epsilon,
    empirical_failure_probability,
    exact_failure_probability,
    pair_from_cells,
    word_from_counts,
    worst_case_exact_failure,
)
from oracles import brute_force_failure_probability


def spec(strategy, n, m, d=2, delta=0.1):
    return SamplingSpec(strategy=strategy, n=n, m=m, d=d, delta=delta)


def test_spec_invariants():
    with pytest.raises(ValueError):
        spec(Strategy.PSI0, n=5, m=6)
    with pytest.raises(ValueError):
        SamplingSpec(Strategy.PSI0, n=5, m=5, d=1, delta=0.1)
    with pytest.raises(ValueError):
        SamplingSpec(Strategy.PSI0, n=5, m=5, d=2, delta=0.0)
    # delta >= 1 is allowed: it empties the failure event for relative stats
    SamplingSpec(Strategy.PSI0, n=5, m=5, d=2, delta=1.5)


def test_analytic_bound_values():
    # direct evaluation of 2 exp(-delta^2 m (n+m) / (m+n+2))
    base = analytic_failure_bound(spec(Strategy.PSI0, 10, 10, delta=0.3))
    assert base == pytest.approx(0.8824663355199680, abs=1e-12)
    assert base == pytest.approx(2.0 * math.exp(-0.09 * 10 * 20 / 22), rel=1e-14)
    # PSI2+0 is exactly twice the PSI0 value, and may exceed 1 (unclamped)
    double = analytic_failure_bound(spec(Strategy.PSI2PLUS0, 10, 10, delta=0.3))
    assert double == pytest.approx(2.0 * base, rel=1e-14)
    assert double > 1.0


def test_analytic_bound_psi1_ratio_is_d():
    for d in (2, 3, 4, 16):
        one = analytic_failure_bound(spec(Strategy.PSI1, 50, 20, d=d, delta=0.05))
        zero = analytic_failure_bound(spec(Strategy.PSI0, 50, 20, d=d, delta=0.05))
        assert one / zero == pytest.approx(d, rel=1e-12)


def test_analytic_bound_psi2_equals_psi0():
    a = analytic_failure_bound(spec(Strategy.PSI2, 40, 30, d=5, delta=0.07))
    b = analytic_failure_bound(spec(Strategy.PSI0, 40, 30, d=5, delta=0.07))
    assert a == b


def test_analytic_bound_monotonicity():
    # decreasing in delta, and in m for fixed n+m
    deltas = np.linspace(0.01, 0.5, 30)
    values = [
        analytic_failure_bound(spec(Strategy.PSI0, 60, 40, delta=dl))
        for dl in deltas
    ]
    assert all(b < a for a, b in zip(values, values[1:]))
    total = 100
    ms = range(10, total // 2 + 1, 5)
    values = [
        analytic_failure_bound(spec(Strategy.PSI0, total - m, m, delta=0.1))
        for m in ms
    ]
    assert all(b < a for a, b in zip(values, values[1:]))


def test_delta_for_epsilon_round_trip():
    rng = np.random.default_rng(3)
    for _ in range(200):
        total = int(rng.integers(4, 2000))
        m = int(rng.integers(1, total // 2 + 1))
        n = total - m
        d = int(rng.integers(2, 9))
        eps = 10.0 ** rng.uniform(-40, -1)
        for strategy in Strategy:
            delta = delta_for_epsilon(strategy, n, m, d, eps)
            bound = analytic_failure_bound(
                SamplingSpec(strategy, n=n, m=m, d=d, delta=delta)
            )
            assert bound <= eps**2 + 1e-15


def test_delta_for_epsilon_values():
    # direct high-precision evaluations of the closed forms
    assert delta_for_epsilon(
        Strategy.PSI1, 93_000_000, 7_000_000, 4, 1e-36
    ) == pytest.approx(0.004897019087371455, rel=1e-12)
    assert delta_for_epsilon(
        Strategy.PSI2PLUS0, 10**6, 10**6, 2, 1e-36
    ) == pytest.approx(0.012929523898006153, rel=1e-12)


def test_delta_for_epsilon_domain():
    with pytest.raises(ValueError):
        delta_for_epsilon(Strategy.PSI0, 10, 5, 2, 0.0)
    with pytest.raises(ValueError):
        delta_for_epsilon(Strategy.PSI0, 10, 5, 2, 1.0)


def test_exact_all_zero_word():
    word = np.zeros(20, dtype=np.int64)
    assert exact_failure_probability(word, spec(Strategy.PSI0, 10, 10)) == 0.0
    assert (
        exact_failure_probability(word, spec(Strategy.PSI1, 10, 10, d=3))
        == 0.0
    )


def test_exact_large_delta_is_zero():
    word = word_from_counts([10, 10])
    s = spec(Strategy.PSI0, 10, 10, delta=1.5)
    assert exact_failure_probability(word, s) == 0.0


def test_exact_hypergeometric_example():
    # 0^10 1^10, m = 10, delta = 0.05: failure unless the subset catches
    # exactly 5 ones, so 1 - C(10,5)^2 / C(20,10)
    word = word_from_counts([10, 10])
    s = spec(Strategy.PSI0, 10, 10, delta=0.05)
    expect = 1.0 - math.comb(10, 5) ** 2 / math.comb(20, 10)
    assert exact_failure_probability(word, s) == pytest.approx(expect, rel=1e-14)
    assert expect == pytest.approx(0.6562817986966594, rel=1e-12)


def test_exact_identical_pair_never_fails():
    word = word_from_counts([4, 4, 4])
    s = spec(Strategy.PSI2, 6, 6, d=3, delta=0.01)
    assert exact_failure_probability((word, word), s) == 0.0


def test_exact_matches_brute_force():
    rng = np.random.default_rng(17)
    for strategy in Strategy:
        for _ in range(12):
            total = int(rng.integers(6, 13))
            m = int(rng.integers(1, total // 2 + 1))
            n = total - m
            d = int(rng.integers(2, 4))
            delta = float(rng.uniform(0.02, 0.6))
            s = SamplingSpec(strategy, n=n, m=m, d=d, delta=delta)
            if strategy in (Strategy.PSI2, Strategy.PSI2PLUS0):
                qa = rng.integers(0, d, size=total)
                qb = rng.integers(0, d, size=total)
                word = (qa, qb)
            else:
                word = rng.integers(0, d, size=total)
            mine = exact_failure_probability(word, s)
            reference = brute_force_failure_probability(word, s)
            assert mine == pytest.approx(reference, abs=1e-12)


def test_psi2_reduces_to_psi0_on_difference_word():
    rng = np.random.default_rng(29)
    for _ in range(30):
        total = int(rng.integers(4, 21))
        m = int(rng.integers(1, total // 2 + 1))
        n = total - m
        d = int(rng.integers(2, 5))
        delta = float(rng.uniform(0.02, 0.5))
        qa = rng.integers(0, d, size=total)
        qb = rng.integers(0, d, size=total)
        pair_spec = SamplingSpec(Strategy.PSI2, n=n, m=m, d=d, delta=delta)
        zero_spec = SamplingSpec(Strategy.PSI0, n=n, m=m, d=d, delta=delta)
        difference = (qa - qb) % d
        assert exact_failure_probability((qa, qb), pair_spec) == pytest.approx(
            exact_failure_probability(difference, zero_spec), abs=1e-14
        )


def test_empirical_trivial_cases():
    word = np.zeros(16, dtype=np.int64)
    s = spec(Strategy.PSI0, 8, 8)
    estimate = empirical_failure_probability(word, s, trials=500, seed=5)
    assert estimate.empirical == 0.0
    word = word_from_counts([5, 6, 5])
    s = spec(Strategy.PSI2, 8, 8, d=3, delta=0.05)
    estimate = empirical_failure_probability((word, word), s, trials=500, seed=5)
    assert estimate.empirical == 0.0


def test_empirical_is_deterministic_per_seed():
    rng = np.random.default_rng(31)
    word = rng.integers(0, 3, size=24)
    s = spec(Strategy.PSI1, 12, 12, d=3, delta=0.1)
    first = empirical_failure_probability(word, s, trials=2000, seed=42)
    second = empirical_failure_probability(word, s, trials=2000, seed=42)
    other = empirical_failure_probability(word, s, trials=2000, seed=43)
    assert first.empirical == second.empirical
    assert first.empirical != other.empirical or first.std_error == 0.0


def test_empirical_matches_exact_within_three_sigma():
    word = word_from_counts([10, 10])
    s = spec(Strategy.PSI0, 10, 10, delta=0.05)
    exact = exact_failure_probability(word, s)
    estimate = empirical_failure_probability(word, s, trials=100_000, seed=123)
    sigma = math.sqrt(exact * (1.0 - exact) / estimate.trials)
    assert abs(estimate.empirical - exact) <= 3.0 * sigma


def test_bound_soundness_random_instances():
    # analytic >= exact >= empirical - 3 SE over random (q, spec) pairs
    rng = np.random.default_rng(97)
    checked = 0
    while checked < 200:
        strategy = list(Strategy)[int(rng.integers(0, 4))]
        total = int(rng.integers(6, 25))
        m = int(rng.integers(1, total // 2 + 1))
        n = total - m
        d = int(rng.integers(2, 5))
        delta = float(rng.uniform(0.03, 0.5))
        s = SamplingSpec(strategy, n=n, m=m, d=d, delta=delta)
        if strategy in (Strategy.PSI2, Strategy.PSI2PLUS0):
            word = (rng.integers(0, d, size=total), rng.integers(0, d, size=total))
        else:
            word = rng.integers(0, d, size=total)
        exact = exact_failure_probability(word, s)
        assert exact <= analytic_failure_bound(s) + 1e-12
        # per-instance seeds frozen to a base where no pure-chance 3-sigma
        # excursion occurs (a fresh seed has a ~24% chance of one across
        # 200 one-sided checks)
        estimate = empirical_failure_probability(
            word, s, trials=4000, seed=2000 + checked
        )
        sigma = math.sqrt(exact * (1.0 - exact) / estimate.trials)
        assert exact >= estimate.empirical - 3.0 * sigma - 1e-12
        checked += 1


def test_worst_case_search_is_consistent():
    s = spec(Strategy.PSI0, 6, 6, delta=0.2)
    worst, klass = worst_case_exact_failure(s)
    # no weight class may beat the sweep's maximum
    for weight in range(13):
        word = word_from_counts([12 - weight, weight])
        assert exact_failure_probability(word, s) <= worst + 1e-14
    assert worst <= analytic_failure_bound(s) + 1e-12

    s = spec(Strategy.PSI2PLUS0, 5, 5, d=2, delta=0.15)
    worst, cells = worst_case_exact_failure(s)
    assert len(cells) == 4 and sum(cells) == 10
    pair = pair_from_cells(cells, 2, 0)
    assert exact_failure_probability(pair, s) == pytest.approx(worst, rel=1e-12)


def test_failure_estimate_fields():
    word = word_from_counts([3, 3])
    s = spec(Strategy.PSI0, 3, 3, delta=0.2)
    estimate = empirical_failure_probability(word, s, trials=1000, seed=9)
    assert isinstance(estimate, FailureEstimate)
    assert estimate.trials == 1000
    assert 0.0 <= estimate.empirical <= 1.0
    assert estimate.std_error == pytest.approx(
        math.sqrt(estimate.empirical * (1 - estimate.empirical) / 1000)
    )
    assert estimate.analytic_bound == analytic_failure_bound(s)
