import math

import numpy as np
import pytest

from finite_key_lab.entropy import (
    binary_entropy,
    d_ary_entropy,
    extended_d_ary_entropy,
    log_gamma,
    log_multinomial,
    shannon_entropy,
)
from oracles import exact_integer_multinomial


def test_binary_entropy_values():
    assert binary_entropy(0.0) == 0.0
    assert binary_entropy(1.0) == 0.0
    assert binary_entropy(0.5) == 1.0
    # cross-checked by summing -p log2 p over (0.1, 0.9)
    assert binary_entropy(0.1) == pytest.approx(0.4689955935892812, abs=1e-12)
    assert binary_entropy(0.1) == pytest.approx(
        shannon_entropy([0.1, 0.9]), abs=1e-12
    )


def test_binary_entropy_symmetry():
    rng = np.random.default_rng(7)
    for x in rng.random(1000):
        assert abs(binary_entropy(x) - binary_entropy(1.0 - x)) <= 1e-12


def test_binary_entropy_domain():
    assert binary_entropy(-1e-13) == 0.0
    assert binary_entropy(1.0 + 1e-13) == 0.0
    with pytest.raises(ValueError):
        binary_entropy(-0.01)
    with pytest.raises(ValueError):
        binary_entropy(1.01)


def test_d_ary_entropy_values():
    assert d_ary_entropy(0.5, 2) == pytest.approx(1.0, abs=1e-12)
    for d in (2, 3, 4, 8):
        assert d_ary_entropy(1.0 - 1.0 / d, d) == pytest.approx(1.0, abs=1e-12)
    # high-precision oracle value for 0.2*log4(3) - 0.2*log4(0.2) - 0.8*log4(0.8)
    assert d_ary_entropy(0.2, 4) == pytest.approx(0.5194602975157968, abs=1e-12)


def test_d_ary_entropy_leading_term_normalization():
    # a mis-normalized leading term d*log_d(d-1) would push H_d(1 - 1/d)
    # above 1 for every d >= 3; pin the normalized x*log_d(d-1) form
    for d in (3, 4, 8):
        x = 1.0 - 1.0 / d
        wrong = (
            d * math.log(d - 1) / math.log(d)
            - x * math.log(x) / math.log(d)
            - (1 - x) * math.log(1 - x) / math.log(d)
        )
        assert wrong > 1.0 + 1e-6
        assert d_ary_entropy(x, d) == pytest.approx(1.0, abs=1e-12)


def test_d_ary_entropy_matches_binary_at_d2():
    for x in np.linspace(0.0, 1.0, 101):
        assert abs(d_ary_entropy(x, 2) - binary_entropy(x)) <= 1e-12


def test_d_ary_entropy_concavity():
    rng = np.random.default_rng(11)
    for d in (2, 3, 4, 8):
        cap = 1.0 - 1.0 / d
        for _ in range(300):
            x, y = rng.random(2) * cap
            lam = rng.random()
            mid = d_ary_entropy(lam * x + (1 - lam) * y, d)
            chord = lam * d_ary_entropy(x, d) + (1 - lam) * d_ary_entropy(y, d)
            assert mid >= chord - 1e-10


def test_extended_d_ary_entropy():
    assert extended_d_ary_entropy(-0.3, 2) == 0.0
    assert extended_d_ary_entropy(-0.3, 5) == 0.0
    assert extended_d_ary_entropy(0.9, 2) == 1.0
    assert extended_d_ary_entropy(0.2, 4) == pytest.approx(
        d_ary_entropy(0.2, 4), abs=1e-15
    )
    assert extended_d_ary_entropy(100.0, 3) == 1.0


def test_extended_d_ary_entropy_monotone():
    for d in (2, 3, 4):
        cap = 1.0 - 1.0 / d
        grid = np.concatenate(
            [np.linspace(-1.0, cap, 200), np.linspace(cap, 2.0, 50)]
        )
        values = [extended_d_ary_entropy(x, d) for x in grid]
        for a, b in zip(values, values[1:]):
            assert b >= a - 1e-12
        # strictly beyond the cap the extension is the constant 1
        assert all(v == 1.0 for v in values[-49:])


def test_shannon_entropy_values():
    assert shannon_entropy([1.0, 0.0, 0.0, 0.0]) == 0.0
    assert shannon_entropy([0.25] * 4) == pytest.approx(2.0, abs=1e-12)
    # high-precision oracle for the asymmetric tuple
    assert shannon_entropy([0.8, 1 / 15, 1 / 15, 1 / 15]) == pytest.approx(
        1.0389205950315936, abs=1e-12
    )


def test_shannon_entropy_rejects_bad_distributions():
    with pytest.raises(ValueError):
        shannon_entropy([0.5, 0.4])
    with pytest.raises(ValueError):
        shannon_entropy([0.5, 0.6, -0.1])
    with pytest.raises(ValueError):
        shannon_entropy([])


def test_log_gamma_values():
    assert log_gamma(1.0) == pytest.approx(0.0, abs=1e-13)
    assert log_gamma(5.0) == pytest.approx(math.log(24.0), abs=1e-12)
    assert log_gamma(0.5) == pytest.approx(0.5723649429247001, abs=1e-12)
    with pytest.raises(ValueError):
        log_gamma(0.0)
    with pytest.raises(ValueError):
        log_gamma(-3.0)


def test_log_gamma_against_stdlib():
    xs = np.concatenate(
        [
            np.linspace(0.5, 30.0, 250),
            np.logspace(1.5, 12, 200),
        ]
    )
    for x in xs:
        mine = log_gamma(float(x))
        ref = math.lgamma(float(x))
        assert abs(mine - ref) <= max(1e-10, 1e-12 * abs(ref))


def test_log_multinomial_values():
    assert log_multinomial(4, [4, 0]) == pytest.approx(0.0, abs=1e-10)
    assert log_multinomial(4, [2, 2]) == pytest.approx(
        math.log2(6), abs=1e-10
    )
    assert log_multinomial(10, [5, 3, 2]) == pytest.approx(
        math.log2(2520), abs=1e-10
    )


def test_log_multinomial_rejects_mismatch():
    with pytest.raises(ValueError):
        log_multinomial(5, [3, 3])
    with pytest.raises(ValueError):
        log_multinomial(5, [6, -1])


def test_log_multinomial_matches_exact_integers():
    # all two- and three-part compositions up to n = 20
    for n in range(1, 21):
        for k0 in range(n + 1):
            cases = [[k0, n - k0]]
            for k1 in range(n - k0 + 1):
                cases.append([k0, k1, n - k0 - k1])
            for counts in cases:
                exact = exact_integer_multinomial(n, counts)
                mine = log_multinomial(n, counts)
                assert 2.0**mine == pytest.approx(exact, rel=1e-9)


def test_log_multinomial_large_n():
    cases = [
        (10**5, [10**5 - 1, 1]),
        (10**5, [25000] * 4),
        (10**4, [9999, 1]),
        (10**4, [2500] * 4),
    ]
    for n, counts in cases:
        exact = math.log2(exact_integer_multinomial(n, counts))
        assert log_multinomial(n, counts) == pytest.approx(exact, rel=1e-9)


def test_d_ary_entropy_dominates_scaled_shannon():
    # H_d(1 - p_i) >= log_d(2) * H(p), equality when the other outcomes
    # share the remaining mass evenly
    rng = np.random.default_rng(23)
    for _ in range(10_000):
        d = int(rng.integers(2, 7))
        p = rng.dirichlet(np.ones(d))
        entropy = shannon_entropy(p)
        for i in range(d):
            lhs = d_ary_entropy(1.0 - p[i], d)
            assert lhs >= entropy / math.log2(d) - 1e-10
    for d in (2, 3, 4, 6):
        for p_i in (0.05, 0.3, 0.7):
            p = [(1.0 - p_i) / (d - 1)] * d
            p[0] = p_i
            lhs = d_ary_entropy(1.0 - p_i, d)
            rhs = shannon_entropy(p) / math.log2(d)
            assert lhs == pytest.approx(rhs, abs=1e-9)
