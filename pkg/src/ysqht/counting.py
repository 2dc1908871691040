"""Seeded Monte Carlo emulation of the photon-counting acquisition.

Each iteration draws one Gaussian preparation tilt ``alpha`` and four
independent Poisson counts behind the phase-modulator settings 0, 2*theta,
-2*alpha, and 2*(theta - alpha); a photon passes the final 45-degree
polarizer with probability (1 + cos(phi))/2.  The count at phase 0 has unit
pass probability and serves as the per-iteration normalization for all ratio
estimates.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .qubit import NoiseParams, _require_finite, _require_probability

#: Per-grid-point seed stride for sweep runs (odd 64-bit constant), so any
#: single point can be re-run in isolation: seed_i = base ^ (i * stride).
SEED_STRIDE = 0x9E3779B97F4A7C15

#: Salt separating aggregation draws from acquisition draws at the same point.
AGGREGATION_SALT = 0xD1342543DE82EF95

_UINT64 = 2**64

#: Below this many expected counts per window the per-iteration ratio
#: estimators become ill-conditioned.
RECOMMENDED_MIN_COUNTS = 100.0

AGGREGATION_MODES = ("stochastic", "expected")


class EstimationError(RuntimeError):
    """No usable iterations were left to estimate from."""


@dataclass(frozen=True)
class AcquisitionConfig:
    """One acquisition run: ``iterations`` repetitions of the four gated
    counts, each gathered over ``window_seconds`` at ``mean_rate`` expected
    detector counts per second at unit pass probability."""

    theta: float
    noise: NoiseParams
    seed: int
    iterations: int = 200
    mean_rate: float = 1e4
    window_seconds: float = 1.0

    def __post_init__(self) -> None:
        _require_finite(self.theta, "theta")
        if not isinstance(self.seed, int) or not 0 <= self.seed < _UINT64:
            raise ValueError(
                f"seed must be an unsigned 64-bit integer, got {self.seed!r}"
            )
        if not isinstance(self.iterations, int) or self.iterations < 1:
            raise ValueError(
                f"iterations must be a positive integer, got {self.iterations!r}"
            )
        rate = _require_finite(self.mean_rate, "mean_rate")
        window = _require_finite(self.window_seconds, "window_seconds")
        if rate <= 0.0 or window <= 0.0:
            raise ValueError("mean_rate and window_seconds must be positive")
        if self.expected_counts < RECOMMENDED_MIN_COUNTS:
            warnings.warn(
                f"expected counts per window = {self.expected_counts:g} < "
                f"{RECOMMENDED_MIN_COUNTS:g}; ratio estimators may be "
                f"ill-conditioned",
                stacklevel=2,
            )

    @property
    def expected_counts(self) -> float:
        return self.mean_rate * self.window_seconds


@dataclass(frozen=True)
class AcquisitionRecord:
    """One iteration: the shared tilt draw and the four raw counts."""

    iteration: int
    alpha: float
    n1p: int
    n1q: int
    n2p: int
    n2q: int

    def __post_init__(self) -> None:
        for name in ("n1p", "n1q", "n2p", "n2q"):
            count = getattr(self, name)
            if not isinstance(count, int) or count < 0:
                raise ValueError(
                    f"{name} must be a non-negative integer, got {count!r}"
                )


@dataclass(frozen=True)
class RatioEstimate:
    """Ratio estimate: mean of the per-iteration ratios, with the standard
    error of that mean (0.0 when only one usable iteration exists).

    ``poisson_error`` is a first-order counting-statistics cross-check,
    (Na/Nb)*sqrt(1/Na + 1/Nb) on the summed counts; None for estimates that
    are not plain ratios of summed counts."""

    value: float
    std_error: float
    n_samples: int
    poisson_error: float | None = None


@dataclass(frozen=True)
class RatioSummary:
    """Normalized count ratios from one acquisition, all normalized by the
    unit-probability count n1p; ``q2_over_p2`` is the derived ratio of the q2
    and p2 means with their relative errors added in quadrature."""

    q1_over_p1: RatioEstimate
    p2: RatioEstimate
    q2: RatioEstimate
    q2_over_p2: RatioEstimate
    excluded: int


@dataclass(frozen=True)
class AggregateResult:
    """Aggregated-hypothesis estimates after mixing clean and noisy counts."""

    p: RatioEstimate
    q: RatioEstimate
    q_over_p: RatioEstimate
    excluded: int


def detection_probability(phi: float) -> float:
    """Probability that a photon passes the 45-degree polarizer after a
    relative H/V phase shift ``phi``: (1 + cos(phi))/2."""
    return 0.5 * (1.0 + math.cos(_require_finite(phi, "phi")))


def sample_alpha(rng: np.random.Generator, noise: NoiseParams) -> float:
    """One Gaussian preparation tilt: zero mean, standard deviation
    ``delta_std``."""
    return float(rng.normal(0.0, noise.delta_std))


def acquire_iteration(
    rng: np.random.Generator, config: AcquisitionConfig, index: int = 0
) -> AcquisitionRecord:
    """Four gated counts sharing a single tilt draw.

    Draw order is fixed: alpha, then the Poisson counts at phases 0,
    2*theta, -2*alpha, 2*(theta - alpha)."""
    lam = config.expected_counts
    alpha = sample_alpha(rng, config.noise)
    theta = config.theta
    phases = (0.0, 2.0 * theta, -2.0 * alpha, 2.0 * (theta - alpha))
    counts = [
        int(rng.poisson(lam * detection_probability(phi))) for phi in phases
    ]
    return AcquisitionRecord(index, alpha, *counts)


def run_acquisition(config: AcquisitionConfig) -> list[AcquisitionRecord]:
    """All iterations of one acquisition; bitwise reproducible for a fixed
    seed."""
    rng = np.random.default_rng(config.seed)
    return [
        acquire_iteration(rng, config, i) for i in range(config.iterations)
    ]


def _usable(
    records: Sequence[AcquisitionRecord],
) -> tuple[list[AcquisitionRecord], int]:
    """Drop iterations whose normalization count vanished."""
    if not records:
        raise EstimationError("no records to estimate from")
    kept = [r for r in records if r.n1p > 0]
    if not kept:
        raise EstimationError(
            "every iteration had n1p = 0; nothing to normalize by"
        )
    return kept, len(records) - len(kept)


def _mean_estimate(
    per_iteration: np.ndarray, poisson_error: float | None = None
) -> RatioEstimate:
    n = int(per_iteration.size)
    value = float(per_iteration.mean())
    if n > 1:
        std_error = float(per_iteration.std(ddof=1) / math.sqrt(n))
    else:
        std_error = 0.0
    return RatioEstimate(value, std_error, n, poisson_error)


def _poisson_ratio_error(num_total: float, den_total: float) -> float:
    # sqrt form of (Na/Nb)*sqrt(1/Na + 1/Nb), well defined at Na = 0.
    return math.sqrt(num_total * (1.0 + num_total / den_total)) / den_total


def _propagated_ratio(
    num: RatioEstimate,
    den: RatioEstimate,
    poisson_error: float | None,
) -> RatioEstimate:
    if den.value == 0.0:
        raise EstimationError(
            "cannot form a derived ratio: the denominator estimate vanished"
        )
    value = num.value / den.value
    std_error = (
        math.sqrt(num.std_error**2 + (value * den.std_error) ** 2)
        / abs(den.value)
    )
    return RatioEstimate(value, std_error, num.n_samples, poisson_error)


def estimate_ratios(records: Sequence[AcquisitionRecord]) -> RatioSummary:
    """Per-iteration ratio estimates normalized by n1p.

    Iterations with n1p = 0 are excluded and counted; estimating from no
    usable iterations raises EstimationError."""
    kept, excluded = _usable(records)
    n1p = np.array([r.n1p for r in kept], dtype=float)
    n1q = np.array([r.n1q for r in kept], dtype=float)
    n2p = np.array([r.n2p for r in kept], dtype=float)
    n2q = np.array([r.n2q for r in kept], dtype=float)

    sums = {name: float(arr.sum()) for name, arr in
            (("n1p", n1p), ("n1q", n1q), ("n2p", n2p), ("n2q", n2q))}

    q1 = _mean_estimate(
        n1q / n1p, _poisson_ratio_error(sums["n1q"], sums["n1p"])
    )
    p2 = _mean_estimate(
        n2p / n1p, _poisson_ratio_error(sums["n2p"], sums["n1p"])
    )
    q2 = _mean_estimate(
        n2q / n1p, _poisson_ratio_error(sums["n2q"], sums["n1p"])
    )
    q2_over_p2_poisson = (
        _poisson_ratio_error(sums["n2q"], sums["n2p"])
        if sums["n2p"] > 0.0
        else None
    )
    q2_over_p2 = _propagated_ratio(q2, p2, q2_over_p2_poisson)
    return RatioSummary(q1, p2, q2, q2_over_p2, excluded)


def aggregate(
    records: Sequence[AcquisitionRecord],
    gamma1: float,
    gamma2: float,
    rng: np.random.Generator | None = None,
    mode: str = "stochastic",
) -> AggregateResult:
    """Emulate ignorance of the preparation by mixing clean and noisy counts.

    stochastic mode picks, per iteration, the clean count with probability
    gamma (fresh Bernoulli draws for each hypothesis; needs ``rng``);
    expected mode uses the deterministic weighted average
    gamma*clean + (1-gamma)*noisy.  Both are normalized by n1p and averaged
    over iterations; both converge to the aggregated q/p as the number of
    iterations grows."""
    _require_probability(gamma1, "gamma1")
    _require_probability(gamma2, "gamma2")
    if mode not in AGGREGATION_MODES:
        raise ValueError(
            f"mode must be one of {AGGREGATION_MODES}, got {mode!r}"
        )
    kept, excluded = _usable(records)

    n1p = np.array([r.n1p for r in kept], dtype=float)
    n1q = np.array([r.n1q for r in kept], dtype=float)
    n2p = np.array([r.n2p for r in kept], dtype=float)
    n2q = np.array([r.n2q for r in kept], dtype=float)

    if mode == "stochastic":
        if rng is None:
            raise ValueError("stochastic aggregation needs a random generator")
        pick_clean_a = rng.random(len(kept)) < gamma1
        pick_clean_b = rng.random(len(kept)) < gamma2
        numerator_a = np.where(pick_clean_a, n1p, n2p)
        numerator_b = np.where(pick_clean_b, n1q, n2q)
    else:
        numerator_a = gamma1 * n1p + (1.0 - gamma1) * n2p
        numerator_b = gamma2 * n1q + (1.0 - gamma2) * n2q

    p_hat = _mean_estimate(numerator_a / n1p)
    q_hat = _mean_estimate(numerator_b / n1p)
    q_over_p = _propagated_ratio(q_hat, p_hat, None)
    return AggregateResult(p_hat, q_hat, q_over_p, excluded)


def point_seed(base_seed: int, index: int) -> int:
    """Deterministic per-grid-point acquisition seed for sweep runs."""
    return (base_seed ^ (index * SEED_STRIDE)) % _UINT64


def aggregation_seed(acquisition_seed: int, gamma1_index: int = 0) -> int:
    """Deterministic seed for the Bernoulli mixing draws at one grid point,
    independent per gamma1 column."""
    return (
        acquisition_seed ^ AGGREGATION_SALT ^ (gamma1_index * SEED_STRIDE)
    ) % _UINT64


@dataclass(frozen=True)
class SimulatedDeltaPoint:
    delta_std: float
    seed: int
    q2_over_p2: RatioEstimate
    q_over_p: tuple[RatioEstimate, ...]


@dataclass(frozen=True)
class SimulatedDeltaSweep:
    """Monte Carlo counterpart of the analytic noise sweep; ``q_over_p``
    entries align with ``gamma1_values``."""

    gamma1_values: tuple[float, ...]
    gamma2: float
    mode: str
    base_seed: int
    points: tuple[SimulatedDeltaPoint, ...]


@dataclass(frozen=True)
class SimulatedGamma2Point:
    gamma2: float
    seed: int
    q2_over_p2: RatioEstimate
    q_over_p: tuple[RatioEstimate, ...]


@dataclass(frozen=True)
class SimulatedGamma2Sweep:
    """Monte Carlo counterpart of the analytic weight sweep; ``q_over_p``
    entries align with ``gamma1_values``."""

    gamma1_values: tuple[float, ...]
    mode: str
    base_seed: int
    points: tuple[SimulatedGamma2Point, ...]


def _point_estimates(
    config: AcquisitionConfig,
    gamma_pairs: Sequence[tuple[float, float]],
    mode: str,
) -> tuple[RatioEstimate, tuple[RatioEstimate, ...]]:
    records = run_acquisition(config)
    summary = estimate_ratios(records)
    ratios = []
    for k, (g1, g2) in enumerate(gamma_pairs):
        rng = np.random.default_rng(aggregation_seed(config.seed, k))
        ratios.append(aggregate(records, g1, g2, rng, mode).q_over_p)
    return summary.q2_over_p2, tuple(ratios)


def simulate_delta_sweep(
    base_config: AcquisitionConfig,
    delta_grid: Sequence[float],
    gamma1_values: Sequence[float],
    gamma2: float,
    mode: str = "stochastic",
) -> SimulatedDeltaSweep:
    """Fresh acquisition per noise grid point (seed derived from the base
    seed and the grid index), estimated and aggregated once per gamma1."""
    gamma1_values = tuple(float(g) for g in gamma1_values)
    pairs = [(g1, float(gamma2)) for g1 in gamma1_values]
    points = []
    for i, d in enumerate(delta_grid):
        seed = point_seed(base_config.seed, i)
        config = replace(
            base_config, noise=NoiseParams(float(d)), seed=seed
        )
        q2_over_p2, ratios = _point_estimates(config, pairs, mode)
        points.append(
            SimulatedDeltaPoint(float(d), seed, q2_over_p2, ratios)
        )
    return SimulatedDeltaSweep(
        gamma1_values, float(gamma2), mode, base_config.seed, tuple(points)
    )


def simulate_gamma2_sweep(
    base_config: AcquisitionConfig,
    gamma2_grid: Sequence[float],
    gamma1_values: Sequence[float],
    mode: str = "stochastic",
) -> SimulatedGamma2Sweep:
    """Fresh acquisition per weight grid point, aggregated once per gamma1.

    The counts themselves do not depend on the weights, so each grid point is
    an independent repetition of the same acquisition, exactly like repeated
    lab runs."""
    gamma1_values = tuple(float(g) for g in gamma1_values)
    points = []
    for i, g2 in enumerate(gamma2_grid):
        seed = point_seed(base_config.seed, i)
        config = replace(base_config, seed=seed)
        pairs = [(g1, float(g2)) for g1 in gamma1_values]
        q2_over_p2, ratios = _point_estimates(config, pairs, mode)
        points.append(
            SimulatedGamma2Point(float(g2), seed, q2_over_p2, ratios)
        )
    return SimulatedGamma2Sweep(
        gamma1_values, mode, base_config.seed, tuple(points)
    )
