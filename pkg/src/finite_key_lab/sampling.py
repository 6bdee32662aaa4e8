"""Classical sampling strategies over d-ary words and their failure bounds.

A strategy observes a uniformly random size-m subset of a length-(n+m) word
(or word pair) and uses the statistic of the observed part as a guess for the
same statistic of the unobserved part.  The guess *fails* when any coordinate
of the statistic deviates by more than ``delta``.  Four strategies are
provided:

* ``PSI0``       relative Hamming weight of a single word
* ``PSI1``       all d relative symbol counts of a single word
* ``PSI2``       relative Hamming distance of a word pair
* ``PSI2PLUS0``  Hamming distance plus one distinguished symbol count of the
                 first word of a pair

For each strategy the module offers the closed-form upper bound on the
worst-case failure probability, the inverse map producing the ``delta`` that
hits a target failure level, the exact failure probability for a given word
(via hypergeometric reductions, exact integer arithmetic throughout), and a
seeded Monte Carlo estimator used to cross-validate the other two.

Analytic bounds may exceed 1 for small parameters.  They are returned
unclamped so that ratio identities between strategies survive; clamp at
reporting boundaries only.
"""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np


class Strategy(Enum):
    PSI0 = "psi0"
    PSI1 = "psi1"
    PSI2 = "psi2"
    PSI2PLUS0 = "psi2plus0"


_PAIR_STRATEGIES = (Strategy.PSI2, Strategy.PSI2PLUS0)


@dataclass(frozen=True)
class SamplingSpec:
    """One sampling scenario: strategy plus (n, m, d, delta).

    n is the unobserved length, m the observed sample size.  Every failure
    bound below requires m <= n.  delta > 0 is the guess tolerance; values
    >= 1 are legal (they make the failure event empty for relative
    statistics).
    """

    strategy: Strategy
    n: int
    m: int
    d: int
    delta: float

    def __post_init__(self):
        if self.m < 1:
            raise ValueError(f"sample size m must be >= 1, got {self.m}")
        if self.m > self.n:
            raise ValueError(f"m <= n required, got m={self.m}, n={self.n}")
        if self.d < 2:
            raise ValueError(f"alphabet size d must be >= 2, got {self.d}")
        if not self.delta > 0.0:
            raise ValueError(f"delta must be positive, got {self.delta}")

    @property
    def total(self):
        return self.n + self.m


@dataclass
class FailureEstimate:
    """Failure-probability evidence for one (word, spec) instance.

    ``analytic_bound`` is stored unclamped (may exceed 1); ``empirical`` and
    ``exact`` are true probabilities in [0, 1] when present.
    """

    analytic_bound: float
    empirical: float | None = None
    exact: float | None = None
    trials: int | None = None
    std_error: float | None = None


def analytic_failure_bound(spec):
    """Closed-form upper bound on the worst-case failure probability.

    PSI0 and PSI2 share 2*exp(-delta^2 m (n+m) / (m+n+2)); PSI1 pays a union
    bound over the d counts (factor d); PSI2PLUS0 pays a union bound over its
    two coordinates (factor 2 on the PSI0 value).
    """
    n, m, d, delta = spec.n, spec.m, spec.d, spec.delta
    base = math.exp(-delta * delta * m * (n + m) / (m + n + 2.0))
    if spec.strategy in (Strategy.PSI0, Strategy.PSI2):
        return 2.0 * base
    if spec.strategy is Strategy.PSI1:
        return 2.0 * d * base
    return 4.0 * base


def delta_for_epsilon(strategy, n, m, d, epsilon):
    """Smallest closed-form delta with analytic failure bound <= epsilon^2.

    Inverts ``analytic_failure_bound``; the log of the strategy prefactor
    (2, 2d or 4) over epsilon^2 is evaluated as log(pref) - 2 log(epsilon)
    so that epsilon as small as 1e-300 stays finite.
    """
    if not 0.0 < epsilon < 1.0:
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")
    if m > n:
        raise ValueError(f"m <= n required, got m={m}, n={n}")
    if strategy is Strategy.PSI1:
        prefactor = 2.0 * d
    elif strategy is Strategy.PSI2PLUS0:
        prefactor = 4.0
    else:
        prefactor = 2.0
    log_term = math.log(prefactor) - 2.0 * math.log(epsilon)
    return math.sqrt((m + n + 2.0) * log_term / (m * (n + m)))


# ---------------------------------------------------------------------------
# word helpers


def _as_word(q, length):
    word = np.asarray(q, dtype=np.int64)
    if word.ndim != 1 or word.size != length:
        raise ValueError(f"word must have length {length}, got shape {word.shape}")
    return word


def _as_pair(q, length):
    if not (isinstance(q, (tuple, list)) and len(q) == 2):
        raise ValueError("pair strategies take a (word_a, word_b) pair")
    return _as_word(q[0], length), _as_word(q[1], length)


def word_from_counts(counts):
    """Canonical word holding counts[i] copies of symbol i, in symbol order."""
    out = []
    for symbol, k in enumerate(counts):
        out.extend([symbol] * int(k))
    return np.asarray(out, dtype=np.int64)


def pair_from_cells(cells, d, b_star=0):
    """Canonical word pair realising the four PSI2PLUS0 position classes.

    ``cells`` = (mismatch & a==b*, mismatch & a!=b*, match & a==b*,
    match & a!=b*) position counts.  Symbols other than b_star are chosen
    arbitrarily but deterministically.
    """
    other = (b_star + 1) % d
    third = (b_star + 2) % d if d > 2 else b_star
    c11, c10, c01, c00 = (int(v) for v in cells)
    word_a = [b_star] * c11 + [other] * c10 + [b_star] * c01 + [other] * c00
    word_b = [other] * c11 + [third] * c10 + [b_star] * c01 + [other] * c00
    return (
        np.asarray(word_a, dtype=np.int64),
        np.asarray(word_b, dtype=np.int64),
    )


def _deviates(observed_count, total_count, m, n, delta):
    """True when the relative statistic differs by more than delta."""
    return abs(observed_count / m - (total_count - observed_count) / n) > delta


# ---------------------------------------------------------------------------
# exact failure probabilities (hypergeometric reductions, exact integers)


def _hypergeometric_failure(total, special, m, n, delta):
    """Pr over size-m subsets that the captured count of ``special`` positions
    deviates: sum of C(W,k) C(N-W, m-k) over failing k, divided by C(N,m)."""
    denom = math.comb(total, m)
    bad = 0
    lo = max(0, m - (total - special))
    hi = min(special, m)
    for k in range(lo, hi + 1):
        if _deviates(k, special, m, n, delta):
            bad += math.comb(special, k) * math.comb(total - special, m - k)
    return bad / denom


def _multivariate_failure(cell_counts, m, n, delta, fail_fn, guard=2_000_000):
    """Sum multivariate-hypergeometric weights of capture vectors flagged by
    ``fail_fn``.  ``fail_fn(k)`` receives the per-cell captured counts."""
    cells = [int(c) for c in cell_counts]
    total = sum(cells)
    space = 1
    for c in cells:
        space *= min(c, m) + 1
    if space > guard:
        raise ValueError(
            f"exact enumeration space {space} exceeds guard {guard}"
        )
    denom = math.comb(total, m)
    bad = 0
    k = [0] * len(cells)

    def recurse(idx, remaining, weight):
        nonlocal bad
        if idx == len(cells) - 1:
            if remaining <= cells[idx]:
                k[idx] = remaining
                if fail_fn(k):
                    bad += weight * math.comb(cells[idx], remaining)
            return
        tail_capacity = sum(cells[idx + 1:])
        lo = max(0, remaining - tail_capacity)
        hi = min(cells[idx], remaining)
        for cap in range(lo, hi + 1):
            k[idx] = cap
            recurse(idx + 1, remaining - cap, weight * math.comb(cells[idx], cap))

    recurse(0, m, 1)
    return bad / denom


def exact_failure_probability(q, spec, b_star=0):
    """Exact failure probability of ``spec`` on the given word (or pair).

    Failure events depend on the word only through position-class counts, so
    the probability reduces to (multivariate) hypergeometric sums; these are
    evaluated in exact integer arithmetic and converted to float once.
    """
    n, m, delta = spec.n, spec.m, spec.delta
    total = spec.total

    if spec.strategy is Strategy.PSI0:
        word = _as_word(q, total)
        weight = int(np.count_nonzero(word))
        return _hypergeometric_failure(total, weight, m, n, delta)

    if spec.strategy is Strategy.PSI1:
        word = _as_word(q, total)
        counts = [int(np.count_nonzero(word == s)) for s in range(spec.d)]

        def fails(k):
            return any(
                _deviates(k[s], counts[s], m, n, delta) for s in range(spec.d)
            )

        return _multivariate_failure(counts, m, n, delta, fails)

    word_a, word_b = _as_pair(q, total)
    mismatch = word_a != word_b

    if spec.strategy is Strategy.PSI2:
        distance = int(np.count_nonzero(mismatch))
        return _hypergeometric_failure(total, distance, m, n, delta)

    # PSI2PLUS0: classify positions by (mismatch, a == b_star)
    is_b = word_a == b_star
    cells = [
        int(np.count_nonzero(mismatch & is_b)),
        int(np.count_nonzero(mismatch & ~is_b)),
        int(np.count_nonzero(~mismatch & is_b)),
        int(np.count_nonzero(~mismatch & ~is_b)),
    ]
    dist_total = cells[0] + cells[1]
    b_total = cells[0] + cells[2]

    def fails(k):
        captured_dist = k[0] + k[1]
        captured_b = k[0] + k[2]
        return _deviates(captured_dist, dist_total, m, n, delta) or _deviates(
            captured_b, b_total, m, n, delta
        )

    return _multivariate_failure(cells, m, n, delta, fails)


# ---------------------------------------------------------------------------
# Monte Carlo


def empirical_failure_probability(q, spec, trials, seed, b_star=0):
    """Monte Carlo estimate of the failure probability, seeded and vectorised.

    Subset i is a fixed function of (seed, i): the i-th row of a counter-based
    Philox stream, so estimates are reproducible and independent of execution
    order.  Returns the estimate together with its binomial standard error
    and the analytic bound for the same spec.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    n, m, delta = spec.n, spec.m, spec.delta
    total = spec.total

    rng = np.random.Generator(np.random.Philox(key=int(seed)))
    uniforms = rng.random((int(trials), total))
    # m smallest entries per row pick a uniform size-m subset
    chosen = np.argpartition(uniforms, m - 1, axis=1)[:, :m]
    mask = np.zeros((int(trials), total), dtype=bool)
    np.put_along_axis(mask, chosen, True, axis=1)

    def indicator_failures(indicator):
        special = int(indicator.sum())
        captured = mask @ indicator.astype(np.int64)
        return (
            np.abs(captured / m - (special - captured) / n) > delta
        )

    if spec.strategy is Strategy.PSI0:
        word = _as_word(q, total)
        failures = indicator_failures(word != 0)
    elif spec.strategy is Strategy.PSI1:
        word = _as_word(q, total)
        failures = np.zeros(int(trials), dtype=bool)
        for symbol in range(spec.d):
            failures |= indicator_failures(word == symbol)
    else:
        word_a, word_b = _as_pair(q, total)
        mismatch = word_a != word_b
        failures = indicator_failures(mismatch)
        if spec.strategy is Strategy.PSI2PLUS0:
            failures |= indicator_failures(word_a == b_star)

    estimate = float(failures.mean())
    std_error = math.sqrt(estimate * (1.0 - estimate) / trials)
    return FailureEstimate(
        analytic_bound=analytic_failure_bound(spec),
        empirical=estimate,
        trials=int(trials),
        std_error=std_error,
    )


# ---------------------------------------------------------------------------
# worst-case search over count classes


def _count_classes(total, parts):
    """All weak compositions of ``total`` into ``parts`` parts."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _count_classes(total - first, parts - 1):
            yield (first,) + rest


def worst_case_exact_failure(spec, b_star=0):
    """Maximum exact failure probability over all count-equivalence classes.

    Failure events depend on q only through class counts (weight for PSI0,
    the d symbol counts for PSI1, mismatch count for PSI2, the four
    mismatch/b* cells for PSI2PLUS0), so sweeping classes instead of all
    d^(n+m) words is exhaustive.  Returns (probability, class) for the
    maximiser; ties resolve to the first class in iteration order.
    """
    total = spec.total
    best = (-1.0, None)

    if spec.strategy is Strategy.PSI0:
        for weight in range(total + 1):
            word = word_from_counts([total - weight, weight])
            p = exact_failure_probability(word, spec)
            if p > best[0]:
                best = (p, (total - weight, weight))
    elif spec.strategy is Strategy.PSI1:
        for counts in _count_classes(total, spec.d):
            word = word_from_counts(counts)
            p = exact_failure_probability(word, spec)
            if p > best[0]:
                best = (p, counts)
    elif spec.strategy is Strategy.PSI2:
        for distance in range(total + 1):
            pair = pair_from_cells([distance, 0, total - distance, 0], spec.d, b_star)
            p = exact_failure_probability(pair, spec)
            if p > best[0]:
                best = (p, (distance,))
    else:
        for cells in _count_classes(total, 4):
            pair = pair_from_cells(cells, spec.d, b_star)
            p = exact_failure_probability(pair, spec, b_star=b_star)
            if p > best[0]:
                best = (p, cells)

    return best
