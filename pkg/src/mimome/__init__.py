"""Secrecy performance of antenna-selection-aided MIMO wiretap channels
under BPSK/QPSK inputs: finite-alphabet mutual information, ergodic secrecy
rate, non-zero-secrecy probability, secrecy outage probability and its
high-SNR asymptote, each backed by a seeded Monte-Carlo oracle.
"""

from .channel import (
    ChannelDraw,
    SnrPair,
    SystemConfig,
    eve_snr_cdf,
    eve_snr_pdf,
    main_snr_cdf,
    main_snr_pdf,
    sample_channel,
    sample_snr_gains,
    secrecy_rate,
    snr_pair_from_draw,
)
from .closed_form import (
    MAX_MAIN_BRANCHES,
    SopTermExponents,
    ergodic_secrecy_rate_approx,
    ergodic_secrecy_rate_quadrature,
    prob_nonzero_secrecy,
    sop_approx,
    sop_asymptotic,
    sop_semianalytic,
)
from .errors import (
    ConfigError,
    DomainError,
    MimomeError,
    OutageCertainError,
    UnsupportedSizeError,
)
from .kernels import (
    BPSK_MI_DECAY,
    MiModel,
    Modulation,
    mi_bpsk_approx,
    mi_bpsk_exact,
    mi_inverse,
    mi_qpsk,
    shifted_power_integral,
    validate_target_rate,
)
from .monte_carlo import (
    BLOCK_TRIALS,
    Estimate,
    EstimatorConfig,
    estimate_ergodic_rate,
    estimate_prob_nonzero,
    estimate_sop,
    substream,
)
from .sweep import (
    AXES,
    CSV_HEADER,
    FIGURE_IDS,
    METHODS,
    METRICS,
    ResultRow,
    SweepSpec,
    estimate_diversity_order,
    reproduce_figure,
    rows_to_csv,
    run_sweep,
    spec_from_dict,
    spec_to_dict,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "BPSK_MI_DECAY",
    "BLOCK_TRIALS",
    "MAX_MAIN_BRANCHES",
    "AXES",
    "METRICS",
    "METHODS",
    "FIGURE_IDS",
    "CSV_HEADER",
    "MimomeError",
    "DomainError",
    "OutageCertainError",
    "ConfigError",
    "UnsupportedSizeError",
    "Modulation",
    "MiModel",
    "SystemConfig",
    "SnrPair",
    "ChannelDraw",
    "SopTermExponents",
    "Estimate",
    "EstimatorConfig",
    "SweepSpec",
    "ResultRow",
    "mi_bpsk_exact",
    "mi_bpsk_approx",
    "mi_qpsk",
    "mi_inverse",
    "shifted_power_integral",
    "validate_target_rate",
    "main_snr_pdf",
    "main_snr_cdf",
    "eve_snr_pdf",
    "eve_snr_cdf",
    "sample_channel",
    "sample_snr_gains",
    "snr_pair_from_draw",
    "secrecy_rate",
    "ergodic_secrecy_rate_approx",
    "ergodic_secrecy_rate_quadrature",
    "prob_nonzero_secrecy",
    "sop_approx",
    "sop_semianalytic",
    "sop_asymptotic",
    "estimate_ergodic_rate",
    "estimate_prob_nonzero",
    "estimate_sop",
    "substream",
    "run_sweep",
    "rows_to_csv",
    "spec_to_dict",
    "spec_from_dict",
    "reproduce_figure",
    "estimate_diversity_order",
]
