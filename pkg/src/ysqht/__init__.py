"""Hypothesis testing of a polarization-measurement box under Gaussian
preparation noise.

The library computes exact outcome probabilities and ratio curves for the
two measurement hypotheses, decides when aggregating counts over an unknown
preparation reverses the partitioned comparison (a Yule-Simpson reversal),
locates the noise and weight thresholds of that reversal, and emulates the
whole photon-counting experiment with seeded Monte Carlo.
"""

from .counting import (
    AcquisitionConfig,
    AcquisitionRecord,
    AggregateResult,
    EstimationError,
    RatioEstimate,
    RatioSummary,
    SimulatedDeltaPoint,
    SimulatedDeltaSweep,
    SimulatedGamma2Point,
    SimulatedGamma2Sweep,
    acquire_iteration,
    aggregate,
    aggregation_seed,
    detection_probability,
    estimate_ratios,
    point_seed,
    run_acquisition,
    sample_alpha,
    simulate_delta_sweep,
    simulate_gamma2_sweep,
)
from .logio import (
    LogFormatError,
    ManifestVersionError,
    RunManifest,
    delta_sweep_header,
    format_record_line,
    gamma2_sweep_header,
    read_count_log,
    write_count_log,
    write_sweep_csv,
)
from .qubit import (
    Analyzer,
    NoiseParams,
    QuadratureError,
    QubitState,
    born_probability,
    dephase,
    dephase_oracle,
    mix,
    pure_state,
    tilt,
)
from .theory import (
    Crossing,
    DeltaSweep,
    DeltaSweepRow,
    DeltaThreshold,
    Gamma2Sweep,
    Gamma2SweepRow,
    Gamma2Threshold,
    OutcomeProbabilities,
    ScenarioParams,
    YsVerdict,
    delta_threshold,
    gamma2_threshold,
    outcome_probabilities,
    reversal_pairs_exist,
    small_angle_threshold,
    sweep_delta,
    sweep_gamma2,
    ys_reversal,
)
from .version import __version__

__all__ = [
    "__version__",
    # states and channels
    "Analyzer",
    "NoiseParams",
    "QuadratureError",
    "QubitState",
    "born_probability",
    "dephase",
    "dephase_oracle",
    "mix",
    "pure_state",
    "tilt",
    # closed forms and thresholds
    "Crossing",
    "DeltaSweep",
    "DeltaSweepRow",
    "DeltaThreshold",
    "Gamma2Sweep",
    "Gamma2SweepRow",
    "Gamma2Threshold",
    "OutcomeProbabilities",
    "ScenarioParams",
    "YsVerdict",
    "delta_threshold",
    "gamma2_threshold",
    "outcome_probabilities",
    "reversal_pairs_exist",
    "small_angle_threshold",
    "sweep_delta",
    "sweep_gamma2",
    "ys_reversal",
    # photon-counting emulation
    "AcquisitionConfig",
    "AcquisitionRecord",
    "AggregateResult",
    "EstimationError",
    "RatioEstimate",
    "RatioSummary",
    "SimulatedDeltaPoint",
    "SimulatedDeltaSweep",
    "SimulatedGamma2Point",
    "SimulatedGamma2Sweep",
    "acquire_iteration",
    "aggregate",
    "aggregation_seed",
    "detection_probability",
    "estimate_ratios",
    "point_seed",
    "run_acquisition",
    "sample_alpha",
    "simulate_delta_sweep",
    "simulate_gamma2_sweep",
    # file formats
    "LogFormatError",
    "ManifestVersionError",
    "RunManifest",
    "delta_sweep_header",
    "format_record_line",
    "gamma2_sweep_header",
    "read_count_log",
    "write_count_log",
    "write_sweep_csv",
]
