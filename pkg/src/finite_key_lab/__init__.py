"""finite-key-lab: sampling-based finite-key rate calculators with oracles.

Library surface re-exported here; the ``finite-key-lab`` console script in
``cli`` drives sweeps and verification runs from JSON configs.
"""

__version__ = "0.1.0"

from .channels import (
    ChannelModel,
    Depolarizing,
    ExplicitCounts,
    LossyDepolarizing,
    d0_for_channel,
    d0_from_depolarizing,
    expected_counts,
    expected_error_rate,
    sample_counts,
)
from .entropy import (
    binary_entropy,
    d_ary_entropy,
    extended_d_ary_entropy,
    log_gamma,
    log_multinomial,
    shannon_entropy,
)
from .jq_bounds import (
    CountBoundReport,
    CountVector,
    convergence_table,
    count_exact,
    floored_counts,
    log2_count_ball,
    log2_count_bound,
    log2_count_exact,
    log2_count_stirling,
    maassen_uffink_demo,
)
from .qkd import (
    OverlapSpec,
    QkdParams,
    ell_hdbb84_ours,
    ell_hdbb84_prior,
    leak_ec,
    overlaps_for_protocol,
    r_asym,
    sweep_qkd,
    three_party_bound,
)
from .qrng import (
    QrngParams,
    RateResult,
    ell_l1,
    ell_l2,
    ell_ours,
    gamma_fct,
    round_counts,
    sweep_qrng,
)
from .sampling import (
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
