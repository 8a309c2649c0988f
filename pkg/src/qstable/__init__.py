"""Scale estimation for symmetric stable laws from heavily quantized samples.

The package covers the full path from raw samples to estimates: counter
based reproducible sampling (rng, dist), threshold coding of powered
magnitudes (coding), closed-form and likelihood estimators with their
bias corrections (estimators), variance/tail analysis and threshold
optimization (analysis), precomputed lookup tables (tabulation), Monte
Carlo harnesses (mc) and a one-scan compressed-sensing sign recovery
pipeline (cs).  The qstable console script exposes the experiment
drivers.
"""

from .analysis import (
    TailConstants,
    bias_coefficient_1bit,
    optimize_thresholds,
    sample_complexity,
    tail_constants,
    variance_coefficient,
)
from .coding import (
    BinCounts,
    CodeStream,
    ThresholdScheme,
    decode_counts,
    encode,
    power_encode,
)
from .cs import (
    DesignMatrixSeeded,
    MeasurementSet,
    SparseSignal,
    estimate_K_pipeline,
    measure,
    random_signal,
    recover_signs,
    recovery_error,
    run_recovery_experiment,
)
from .dist import (
    PowerStableDist,
    ZeroPlus,
    is_zero_plus,
    layer_probs,
    sample_power_stable,
    sample_stable,
    validate_alpha,
)
from .errors import DegenerateSchemeError, EstimationError
from .estimators import (
    BiasCorrectionTerms,
    EstimateReport,
    bias_corrected_1bit,
    bias_correction_terms,
    estimate_1bit_batch,
    full_info_arithmetic_mean,
    full_info_cauchy_mle,
    full_info_harmonic_mean,
    harmonic_mean_variance_coefficient,
    mle_1bit,
    mle_multibit,
    solve_multibit_batch,
)
from .mc import (
    Simulated1Bit,
    SimulatedMultibit,
    SimulatedTails,
    sample_bin_counts,
    simulate_1bit,
    simulate_multibit,
    simulate_tails,
)
from .rng import RngStream
from .tabulation import MleTable, build_table, load_table, lookup, lookup_batch, save_table

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "RngStream",
    "ZeroPlus",
    "is_zero_plus",
    "validate_alpha",
    "PowerStableDist",
    "layer_probs",
    "sample_stable",
    "sample_power_stable",
    "ThresholdScheme",
    "BinCounts",
    "CodeStream",
    "encode",
    "power_encode",
    "decode_counts",
    "EstimationError",
    "DegenerateSchemeError",
    "EstimateReport",
    "BiasCorrectionTerms",
    "mle_1bit",
    "bias_corrected_1bit",
    "mle_multibit",
    "bias_correction_terms",
    "estimate_1bit_batch",
    "solve_multibit_batch",
    "full_info_arithmetic_mean",
    "full_info_cauchy_mle",
    "full_info_harmonic_mean",
    "harmonic_mean_variance_coefficient",
    "variance_coefficient",
    "optimize_thresholds",
    "TailConstants",
    "tail_constants",
    "sample_complexity",
    "bias_coefficient_1bit",
    "MleTable",
    "build_table",
    "lookup",
    "lookup_batch",
    "save_table",
    "load_table",
    "SparseSignal",
    "random_signal",
    "DesignMatrixSeeded",
    "MeasurementSet",
    "measure",
    "recover_signs",
    "recovery_error",
    "estimate_K_pipeline",
    "run_recovery_experiment",
    "sample_bin_counts",
    "simulate_1bit",
    "simulate_multibit",
    "simulate_tails",
    "Simulated1Bit",
    "SimulatedMultibit",
    "SimulatedTails",
]
