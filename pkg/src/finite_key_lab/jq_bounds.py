"""Bounds and exact counts for the set of words consistent with observed counts.

Fix an alphabet of d symbols, a reference relative-count vector c, a word
length n and a tolerance delta.  The central object is the set of words w of
length n whose relative symbol counts all lie within delta of c; its base-2
log-size is the penalty term of the sampling-based min-entropy bounds, so a
tighter upper bound on it is worth real bits of certified output.

Two closed-form upper bounds are provided:

* ``log2_count_stirling``  a Stirling/multinomial bound built from the
  delta-floored counts nu_i = max(c_i - delta, 0); it requires delta < 1/d
  and is the sharper bound for large n;
* ``log2_count_ball``      the classical Hamming-ball volume bound
  n * H_d(1 - nu_a) * log2(d) around the majority symbol a, valid for any
  delta and sharper for small n or large delta.

``log2_count_bound`` reports both and their minimum.  ``count_exact`` and
``log2_count_exact`` evaluate the set size exactly by summing multinomial
coefficients over all admissible count vectors (the first in exact integer
arithmetic, the second fully in the log domain).

``convergence_table`` tracks the per-symbol behaviour of both bounds as n
grows, and ``maassen_uffink_demo`` exercises the entropy-sum lower bound for
a state measured in a basis and its discrete-Fourier dual.
"""

import cmath
import math
from dataclasses import dataclass

from .entropy import (
    EDGE_TOL,
    extended_d_ary_entropy,
    log_multinomial,
    shannon_entropy,
)
from .sampling import Strategy, delta_for_epsilon

_LOG2_E = math.log2(math.e)


@dataclass(frozen=True)
class CountVector:
    """Relative symbol counts of a d-ary word.

    ``fractions`` must sum to 1; when ``sample_size`` m is given each
    fraction must be an integer multiple of 1/m (the vector then came from an
    actual length-m word).
    """

    d: int
    fractions: tuple
    sample_size: int | None = None

    def __post_init__(self):
        if self.d < 2:
            raise ValueError(f"alphabet size d must be >= 2, got {self.d}")
        fracs = tuple(float(v) for v in self.fractions)
        object.__setattr__(self, "fractions", fracs)
        if len(fracs) != self.d:
            raise ValueError(
                f"expected {self.d} fractions, got {len(fracs)}"
            )
        for v in fracs:
            if v < -EDGE_TOL or v > 1.0 + EDGE_TOL:
                raise ValueError(f"count fraction {v} outside [0, 1]")
        total = math.fsum(fracs)
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"count fractions sum to {total}, expected 1")
        if self.sample_size is not None:
            m = self.sample_size
            if m < 1:
                raise ValueError(f"sample_size must be >= 1, got {m}")
            for v in fracs:
                if abs(v * m - round(v * m)) > 1e-9:
                    raise ValueError(
                        f"fraction {v} is not an integer count out of {m}"
                    )


@dataclass
class CountBoundReport:
    """log2 word-set size: both closed-form bounds, their minimum, and
    optionally the exact value.  ``log_stirling`` is None when delta >= 1/d
    (the Stirling bound's last term is undefined there) and ``log_min`` then
    falls back to the ball bound alone."""

    log_stirling: float | None
    log_ball: float
    log_min: float
    n: int
    delta: float
    nu: tuple
    log_exact: float | None = None


def floored_counts(c, delta):
    """Per-symbol floor nu_i = max(c_i - delta, 0) of admissible fractions."""
    if not delta > 0.0:
        raise ValueError(f"delta must be positive, got {delta}")
    return tuple(max(v - delta, 0.0) for v in c.fractions)


def log2_count_stirling(c, n, delta):
    """Stirling/multinomial upper bound on the log2 word-set size.

    Requires 0 < delta < 1/d.  With nu the delta-floored counts the bound is
    -n sum nu_i log2 nu_i + n log2(n) (1 - sum nu_i) + (d+1) log2 e
    - (d/2) log2((1 - d delta) / d), with 0 log 0 = 0 in the sum.
    """
    d = c.d
    if not 0.0 < delta < 1.0 / d:
        raise ValueError(
            f"stirling bound requires 0 < delta < 1/d = {1.0 / d}, got {delta}"
        )
    nu = floored_counts(c, delta)
    nu_sum = math.fsum(nu)
    entropy_term = -n * math.fsum(v * math.log2(v) for v in nu if v > 0.0)
    spread_term = n * math.log2(n) * (1.0 - nu_sum)
    constant = (d + 1) * _LOG2_E - 0.5 * d * math.log2((1.0 - d * delta) / d)
    return entropy_term + spread_term + constant


def log2_count_ball(c, n, delta):
    """Hamming-ball upper bound n * H_d(1 - nu_a) * log2 d, a = argmax c_i.

    Every admissible word keeps at least nu_a = max(c_a - delta, 0) of the
    majority symbol a, so the set sits inside the radius-n(1 - nu_a) ball
    around a^n.  Argmax ties break to the lowest symbol index.
    """
    if not delta > 0.0:
        raise ValueError(f"delta must be positive, got {delta}")
    a = max(range(c.d), key=lambda i: (c.fractions[i], -i))
    nu_a = max(c.fractions[a] - delta, 0.0)
    return n * extended_d_ary_entropy(1.0 - nu_a, c.d) * math.log2(c.d)


def log2_count_bound(c, n, delta):
    """Both bounds and their minimum; Stirling omitted when delta >= 1/d."""
    ball = log2_count_ball(c, n, delta)
    if delta < 1.0 / c.d:
        stirling = log2_count_stirling(c, n, delta)
        best = min(stirling, ball)
    else:
        stirling = None
        best = ball
    return CountBoundReport(
        log_stirling=stirling,
        log_ball=ball,
        log_min=best,
        n=n,
        delta=delta,
        nu=floored_counts(c, delta),
    )


# ---------------------------------------------------------------------------
# exact counting


def _admissible_values(c, n, delta):
    """Per symbol, the sorted integer counts x with |x/n - c_i| <= delta.

    The comparison uses exactly the float expression the word-enumeration
    oracle uses, so both routes agree on boundary integers.
    """
    per_symbol = []
    for frac in c.fractions:
        lo = max(0, math.floor(n * (frac - delta)) - 1)
        hi = min(n, math.ceil(n * (frac + delta)) + 1)
        values = [x for x in range(lo, hi + 1) if abs(x / n - frac) <= delta]
        per_symbol.append(values)
    return per_symbol


def _iter_compositions(per_symbol, n):
    """Yield admissible count vectors summing to n (depth-first, in order)."""
    d = len(per_symbol)
    suffix_min = [0] * (d + 1)
    suffix_max = [0] * (d + 1)
    for i in range(d - 1, -1, -1):
        if not per_symbol[i]:
            return
        suffix_min[i] = suffix_min[i + 1] + per_symbol[i][0]
        suffix_max[i] = suffix_max[i + 1] + per_symbol[i][-1]
    if suffix_min[0] > n or suffix_max[0] < n:
        return
    stack = [0] * d

    def recurse(idx, remaining):
        if idx == d - 1:
            if remaining in per_symbol[idx] and remaining >= 0:
                stack[idx] = remaining
                yield tuple(stack)
            return
        for value in per_symbol[idx]:
            rest = remaining - value
            if suffix_min[idx + 1] <= rest <= suffix_max[idx + 1]:
                stack[idx] = value
                yield from recurse(idx + 1, rest)

    yield from recurse(0, n)


def _composition_space(per_symbol):
    space = 1
    for values in per_symbol:
        space *= max(len(values), 1)
    return space


def count_exact(c, n, delta, guard=10_000_000):
    """Exact integer size of the count-consistent word set.

    Sums the multinomial coefficient over every admissible count vector,
    in exact integer arithmetic.  Intended for small n (the guard rejects
    composition spaces beyond ``guard``).
    """
    per_symbol = _admissible_values(c, n, delta)
    space = _composition_space(per_symbol)
    if space > guard:
        raise ValueError(f"composition space {space} exceeds guard {guard}")
    total = 0
    for counts in _iter_compositions(per_symbol, n):
        term = 1
        remaining = n
        for k in counts:
            term *= math.comb(remaining, k)
            remaining -= k
        total += term
    return total


def log2_count_exact(c, n, delta, guard=10_000_000):
    """log2 of the exact word-set size, evaluated fully in the log domain.

    Streams a max-shifted log-sum-exp over the log-multinomial of each
    admissible count vector, so it stays finite for n far beyond exact
    integer reach.  Enumeration order is fixed, hence the result is
    deterministic.
    """
    per_symbol = _admissible_values(c, n, delta)
    space = _composition_space(per_symbol)
    if space > guard:
        raise ValueError(f"composition space {space} exceeds guard {guard}")
    running_max = None
    running_sum = 0.0
    for counts in _iter_compositions(per_symbol, n):
        term = log_multinomial(n, counts)
        if running_max is None:
            running_max, running_sum = term, 1.0
        elif term <= running_max:
            running_sum += 2.0 ** (term - running_max)
        else:
            running_sum = running_sum * 2.0 ** (running_max - term) + 1.0
            running_max = term
    if running_max is None:
        raise ValueError("no admissible count vector; delta too small for n")
    return running_max + math.log2(running_sum)


# ---------------------------------------------------------------------------
# asymptotics


def convergence_table(p, n_values, epsilon=1e-36):
    """Per-symbol bound behaviour along an ascending n schedule.

    For each n the tolerance is the full-count inversion delta with m = n
    and failure target epsilon^2, the expected counts are taken equal to p,
    and the row reports delta, both bounds per symbol, the Shannon entropy
    of p in bits, and the Stirling/ball ratio.
    """
    entropy_bits = shannon_entropy(p)
    d = len(tuple(p))
    c = CountVector(d=d, fractions=tuple(p))
    if list(n_values) != sorted(n_values):
        raise ValueError("n schedule must be ascending")
    rows = []
    for n in n_values:
        delta = delta_for_epsilon(Strategy.PSI1, n, n, d, epsilon)
        stirling = (
            log2_count_stirling(c, n, delta) / n if delta < 1.0 / d else None
        )
        ball = log2_count_ball(c, n, delta) / n
        rows.append(
            {
                "n": n,
                "delta": delta,
                "stirling_per_symbol": stirling,
                "ball_per_symbol": ball,
                "shannon_bits": entropy_bits,
                "ratio": None if stirling is None else stirling / ball,
            }
        )
    return rows


def maassen_uffink_demo(amplitudes):
    """Entropy pair (H_Z, H_X, gamma) for a pure state of dimension d.

    H_Z is the Shannon entropy of the squared amplitudes; H_X the entropy of
    the same state expressed in the discrete-Fourier-transform basis (the
    canonical mutually unbiased partner, all overlaps 1/sqrt(d)); gamma is
    log2 d.  The DFT is evaluated by direct summation.  The demonstrated
    lower bound is H_Z + H_X >= gamma.
    """
    amps = [complex(a) for a in amplitudes]
    d = len(amps)
    if d < 2:
        raise ValueError("state must have dimension >= 2")
    norm = math.fsum(abs(a) ** 2 for a in amps)
    if abs(norm - 1.0) > 1e-9:
        raise ValueError(f"state norm^2 is {norm}, expected 1 within 1e-9")
    z_probs = [abs(a) ** 2 / norm for a in amps]

    x_probs = []
    for j in range(d):
        overlap = sum(
            amps[k] * cmath.exp(-2j * math.pi * j * k / d) for k in range(d)
        ) / math.sqrt(d)
        x_probs.append(abs(overlap) ** 2 / norm)
    scale = math.fsum(x_probs)
    x_probs = [v / scale for v in x_probs]

    return (
        shannon_entropy(z_probs),
        shannon_entropy(x_probs),
        math.log2(d),
    )
