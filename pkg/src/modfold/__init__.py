"""Unlimited-sensing full-duplex receiver simulator.

Folds the high-dynamic-range SI + SoI mixture through a modulo ADC,
unfolds it, estimates the sparse SI channel in the modulo domain,
cancels the SI digitally, and quantifies the bit-budget trade-offs
against conventional-ADC and adaptive-filter baselines.
"""

from .adc import (
    ModuloAdcConfig,
    QuantNoiseReport,
    conventional_adc,
    modulo_adc,
    modulo_fold,
    quant_noise_analysis,
    quantize_midrise,
)
from .chanest import (
    FoldModel,
    SpectralFrame,
    difference_dft,
    estimate_fold_count,
    estimate_si_channel,
    lattice_spike_fit,
    prony,
    reconstruct_residue_spectrum,
)
from .errors import (
    ChannelEstimationError,
    ConfigError,
    ModfoldError,
    SignalError,
    UnfoldingError,
)
from .kernels import BACKEND as KERNEL_BACKEND
from .sic import (
    MetricSet,
    SicResult,
    cancel_si,
    compute_metrics,
    nlms_estimate,
    qpsk_detect,
    reconstruct_si,
)
from .signals import (
    BasebandSignal,
    MixtureConfig,
    PilotSpec,
    SparseChannel,
    apply_sparse_channel,
    compose_received,
    generate_pilot,
    pulse_shape,
    qpsk_modulate,
    random_pilot,
    rect_pulse,
    rrc_pulse,
)
from .unfolding import (
    UnfoldingConfig,
    anti_difference,
    choose_order,
    finite_difference,
    usf_recover,
)

__version__ = "0.1.0"
