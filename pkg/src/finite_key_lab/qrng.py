"""Random-bit generation rates for the source-independent QRNG protocol.

Three certified-output lower bounds are evaluated on the same observation
statistics:

* ``ell_ours``  the sampling-based bound: n log2 d minus the log-size bound
  on the count-consistent word set (minimum of the Stirling and Hamming-ball
  forms) minus the privacy-amplification term 2 log2(1/epsilon);
* ``ell_l1``    a Gamma-function-ratio bound consuming the absolute test
  counts, with no explicit confidence radius;
* ``ell_l2``    a pair-difference bound for the entangled-pair variant of the
  protocol, built on the growth function ``gamma_fct``.

``sweep_qrng`` evaluates all three over an N schedule in expectation mode.
Negative bit counts are preserved in ``RateResult.ell`` and clamped to zero
only in the per-signal ``rate``.
"""

import math
from dataclasses import dataclass, field

from .channels import d0_for_channel, expected_counts
from .entropy import log_gamma
from .jq_bounds import log2_count_bound
from .sampling import Strategy, delta_for_epsilon

_LN2 = math.log(2.0)


def resolve_test_size(N, fraction=0.07):
    """Test size ceil(fraction * N), robust to float noise.

    Products like 0.07 * 10**10 land a few ulps above the exact integer;
    values within 1e-6 relative of an integer snap to it before the ceiling
    is taken.
    """
    raw = fraction * N
    nearest = round(raw)
    if abs(raw - nearest) <= 1e-6 * max(nearest, 1):
        return int(nearest)
    return math.ceil(raw)


@dataclass(frozen=True)
class QrngParams:
    """Protocol parameters: N total signals, m test size (default the
    conventional 7% of N), alphabet size d, failure parameter epsilon and
    smoothing split beta in (0, 1/2)."""

    N: int
    d: int
    m: int | None = None
    epsilon: float = 1e-36
    beta: float = 1.0 / 3.0

    def __post_init__(self):
        if self.m is None:
            object.__setattr__(self, "m", resolve_test_size(self.N))
        if self.m < 1 or self.m > self.N - self.m:
            raise ValueError(
                f"test size m={self.m} must satisfy 1 <= m <= n = N - m"
            )
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if not 0.0 < self.beta < 0.5:
            raise ValueError(f"beta must lie in (0, 1/2), got {self.beta}")
        if self.d < 2:
            raise ValueError(f"alphabet size d must be >= 2, got {self.d}")

    @property
    def n(self):
        return self.N - self.m


@dataclass
class RateResult:
    """One rate evaluation: extractable bits ell (possibly negative), the
    clamped per-signal rate, the tolerance used, the privacy-amplification
    distance eps_pa = 4 eps^beta + 9 eps, the failure probability
    2 eps^(1 - 2 beta), and a named breakdown of the terms."""

    ell: float
    rate: float
    delta: float
    eps_pa: float
    failure_prob: float
    breakdown: dict = field(default_factory=dict)


def ell_ours(c, params):
    """Sampling-based certified bit count for observed counts ``c``.

    The tolerance is the full-count inversion delta at failure target
    epsilon^2; the word-set penalty is the minimum of the Stirling and
    Hamming-ball bounds at that delta.
    """
    if c.d != params.d:
        raise ValueError(f"count vector has d={c.d}, params have d={params.d}")
    n, m, d, eps = params.n, params.m, params.d, params.epsilon
    delta = delta_for_epsilon(Strategy.PSI1, n, m, d, eps)
    report = log2_count_bound(c, n, delta)
    pa_term = 2.0 * math.log2(1.0 / eps)
    ell = n * math.log2(d) - report.log_min - pa_term
    return RateResult(
        ell=ell,
        rate=max(ell, 0.0) / params.N,
        delta=delta,
        eps_pa=4.0 * eps**params.beta + 9.0 * eps,
        failure_prob=2.0 * eps ** (1.0 - 2.0 * params.beta),
        breakdown={
            "n_log2_d": n * math.log2(d),
            "log2_words_min": report.log_min,
            "log2_words_stirling": report.log_stirling,
            "log2_words_ball": report.log_ball,
            "pa_term": pa_term,
        },
    )


def ell_l1(absolute_counts, n, m, d):
    """Gamma-ratio certified bit count from absolute test counts.

    ell = n (log2 d - 2 log2 B) with
    B = [Gamma(m+d) / Gamma(m+d+1/2)] * sum_i Gamma(c_i + 3/2) / Gamma(c_i + 1),
    evaluated entirely through ``log_gamma`` so m ~ 1e9 cannot overflow.
    """
    counts = [int(k) for k in absolute_counts]
    if len(counts) != d:
        raise ValueError(f"expected {d} counts, got {len(counts)}")
    if any(k < 0 for k in counts):
        raise ValueError(f"counts must be non-negative, got {absolute_counts}")
    if sum(counts) != m:
        raise ValueError(f"counts sum to {sum(counts)}, expected m = {m}")
    log_ratio = log_gamma(m + d) - log_gamma(m + d + 0.5)
    # log-sum-exp over the per-symbol Gamma ratios
    terms = [log_gamma(k + 1.5) - log_gamma(k + 1.0) for k in counts]
    peak = max(terms)
    log_sum = peak + math.log(math.fsum(math.exp(t - peak) for t in terms))
    log2_bracket = (log_ratio + log_sum) / _LN2
    return n * (math.log2(d) - 2.0 * log2_bracket)


def gamma_fct(x):
    """Growth function (x + s) (x / (s - 1))^x with s = sqrt(1 + x^2).

    Continuous at 0 with value 1.  ``s - 1`` is evaluated as x^2 / (s + 1)
    to avoid cancellation for small x.
    """
    return 2.0 ** log2_gamma_fct(x)


def log2_gamma_fct(x):
    """log2 of ``gamma_fct``, safe for arguments where the power overflows."""
    if x < 0.0:
        raise ValueError(f"gamma_fct requires x >= 0, got {x}")
    if x == 0.0:
        return 0.0
    s = math.sqrt(1.0 + x * x)
    # x / (s - 1) = (s + 1) / x without cancellation
    return math.log2(x + s) + x * math.log2((s + 1.0) / x)


def ell_l2(d0, N, n, m, d, epsilon=1e-12):
    """Pair-difference certified bit count: n (log2 d - log2 gamma(d0 + dp)),
    dp = d sqrt((N^2 / (n^2 m)) ln(4/epsilon)).

    The growth-function penalty is charged per signal; the observed mean
    pair difference d0 plus the confidence radius dp enters ``gamma_fct``.
    """
    if d0 < 0.0:
        raise ValueError(f"d0 must be non-negative, got {d0}")
    if not 0.0 < epsilon < 1.0:
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")
    dp = d * math.sqrt((N * N) / (n * n * m) * math.log(4.0 / epsilon))
    return n * (math.log2(d) - log2_gamma_fct(d0 + dp))


def round_counts(fractions, m):
    """Largest-remainder rounding of m * fractions to integers summing to m."""
    raw = [f * m for f in fractions]
    floors = [math.floor(v) for v in raw]
    shortfall = m - sum(floors)
    order = sorted(
        range(len(raw)), key=lambda i: (raw[i] - floors[i], -i), reverse=True
    )
    for i in order[:shortfall]:
        floors[i] += 1
    return floors


def sweep_qrng(
    channel,
    N_values,
    d,
    m_fraction=0.07,
    epsilon_ours=1e-36,
    beta=1.0 / 3.0,
    epsilon_l2=1e-12,
    d0_model="uniform-mismatch",
):
    """Expectation-mode rate sweep: one row per N with all three rates.

    The channel's expected counts feed all three bounds; ``ell_l1`` receives
    largest-remainder integer counts, ``ell_l2`` the documented d0 model.
    The N schedule must be ascending.  Rows carry N, n, m, the tolerance of
    the sampling-based bound, and the three per-signal rates.
    """
    if list(N_values) != sorted(N_values):
        raise ValueError("N schedule must be ascending")
    counts = expected_counts(channel, d)
    d0 = d0_for_channel(channel, d, model=d0_model)
    rows = []
    for N in N_values:
        N = int(N)
        m = resolve_test_size(N, m_fraction) if m_fraction < 1 else int(m_fraction)
        params = QrngParams(N=N, d=d, m=m, epsilon=epsilon_ours, beta=beta)
        ours = ell_ours(counts, params)
        l1 = ell_l1(round_counts(counts.fractions, m), params.n, m, d)
        l2 = ell_l2(d0, N, params.n, m, d, epsilon=epsilon_l2)
        rows.append(
            {
                "N": N,
                "n": params.n,
                "m": m,
                "delta": ours.delta,
                "rate_ours": ours.rate,
                "rate_l1": max(l1, 0.0) / N,
                "rate_l2": max(l2, 0.0) / N,
            }
        )
    return rows
