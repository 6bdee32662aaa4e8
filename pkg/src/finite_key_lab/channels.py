"""Channel models feeding observation statistics into the rate formulas.

Three models are supported:

* ``Depolarizing(q)``            each symbol survives with probability 1-q
                                 and otherwise lands uniformly on one of the
                                 other d-1 symbols;
* ``ExplicitCounts(counts)``     observed statistics given directly;
* ``LossyDepolarizing(q, p_vac)``  depolarizing noise plus an independent
                                 per-signal erasure (vacuum) of probability
                                 p_vac; error statistics are conditioned on
                                 non-vacuum detections.

All expectation-mode operations are pure; the finite-sample draw is
deterministic per seed.
"""

import math
from dataclasses import dataclass

import numpy as np

from .jq_bounds import CountVector


@dataclass(frozen=True)
class Depolarizing:
    q: float


@dataclass(frozen=True)
class ExplicitCounts:
    counts: CountVector


@dataclass(frozen=True)
class LossyDepolarizing:
    q: float
    p_vac: float

    def __post_init__(self):
        if not 0.0 <= self.p_vac <= 1.0:
            raise ValueError(f"p_vac must lie in [0, 1], got {self.p_vac}")


ChannelModel = Depolarizing | ExplicitCounts | LossyDepolarizing


def _check_q(q, d):
    if not 0.0 <= q <= (d - 1) / d:
        raise ValueError(
            f"depolarizing parameter must lie in [0, {(d - 1) / d}], got {q}"
        )


def expected_counts(channel, d):
    """Expected relative counts of the ideal-symbol measurement.

    Depolarizing noise keeps the ideal symbol (index 0) with probability
    1-q and spreads q uniformly over the other d-1 symbols; explicit counts
    pass through unchanged (their alphabet size must match d).
    """
    if isinstance(channel, ExplicitCounts):
        if channel.counts.d != d:
            raise ValueError(
                f"explicit counts have d={channel.counts.d}, expected {d}"
            )
        return channel.counts
    q = channel.q
    _check_q(q, d)
    fractions = (1.0 - q,) + (q / (d - 1),) * (d - 1)
    return CountVector(d=d, fractions=fractions)


def expected_error_rate(channel):
    """Expected relative Hamming distance between the two observers' words.

    Defined for the depolarizing models only; for the lossy model the rate is
    conditioned on non-vacuum detections, so loss does not change it.
    """
    if isinstance(channel, ExplicitCounts):
        raise TypeError("explicit-counts channels carry no pair error rate")
    return channel.q


def vacuum_fraction(channel):
    """Per-signal erasure probability (0 for loss-free models)."""
    return channel.p_vac if isinstance(channel, LossyDepolarizing) else 0.0


def sample_counts(channel, m, d, seed):
    """Multinomial draw of m symbols from the channel's expected counts.

    Deterministic per seed (counter-based Philox stream).  Returns a
    CountVector with ``sample_size`` set, so downstream consumers can
    recover absolute counts exactly.
    """
    if m < 1:
        raise ValueError(f"sample size must be >= 1, got {m}")
    expectation = expected_counts(channel, d)
    rng = np.random.Generator(np.random.Philox(key=int(seed)))
    draws = rng.multinomial(int(m), expectation.fractions)
    return CountVector(
        d=d,
        fractions=tuple(int(k) / int(m) for k in draws),
        sample_size=int(m),
    )


def d0_from_depolarizing(q, d):
    """Mean absolute difference of paired outcomes under uniform mismatch.

    Model: the two outcomes agree with probability 1-q; otherwise the ordered
    pair is uniform over the d(d-1) mismatches, whose mean |a-b| is (d+1)/3.
    """
    _check_q(q, d)
    return q * (d + 1) / 3.0


def d0_for_channel(channel, d, model="uniform-mismatch"):
    """Pair-difference statistic d0 for any channel, under a documented model.

    ``uniform-mismatch`` (default) applies ``d0_from_depolarizing`` to the
    channel's total non-ideal weight 1 - c_0, which reproduces the
    depolarizing value exactly for depolarizing channels.  The alternative
    ``ideal-reference`` model pairs the ideal symbol 0 against a draw from
    the channel's counts, giving d0 = sum_i c_i * i; it weights mismatch
    magnitudes by the observed asymmetry instead of uniformly.
    """
    counts = expected_counts(channel, d)
    if model == "uniform-mismatch":
        # same formula as d0_from_depolarizing, but the mismatch weight
        # 1 - c_0 of an explicit channel may exceed the depolarizing range
        return (1.0 - counts.fractions[0]) * (d + 1) / 3.0
    if model == "ideal-reference":
        return math.fsum(i * v for i, v in enumerate(counts.fractions))
    raise ValueError(f"unknown d0 model {model!r}")
