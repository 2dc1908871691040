"""Closed-form outcome probabilities, the aggregation-reversal predicate, and
the noise/weight thresholds that govern it.

The scenario: a detector box measures linear polarization either along the
reference axis (hypothesis A) or tilted by ``theta`` (hypothesis B).  The
probe is clean with probability ``gamma1`` under A and ``gamma2`` under B,
otherwise its polarization angle has been smeared by Gaussian noise.  Counts
partitioned by preparation always favor A; after aggregation the comparison
can flip.  All reversal inequalities are strict: ties count as no reversal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

from .qubit import NoiseParams, _require_finite, _require_probability

#: Width of the bisection bracket at which crossing refinement stops.
CROSSING_TOL = 1e-6


def _threshold_cos(theta: float) -> float:
    """cos(2*theta) for threshold formulas, which require 0 < theta < pi/4."""
    t = _require_finite(theta, "theta")
    if not 0.0 < t < math.pi / 4.0:
        raise ValueError(
            f"threshold formulas require 0 < theta < pi/4 "
            f"(hypotheses only slightly tilted), got {t}"
        )
    return math.cos(2.0 * t)


@dataclass(frozen=True)
class ScenarioParams:
    """One full parameter point: tilt of hypothesis B, preparation noise, and
    the per-hypothesis clean-preparation weights."""

    theta: float
    noise: NoiseParams
    gamma1: float
    gamma2: float

    def __post_init__(self) -> None:
        t = _require_finite(self.theta, "theta")
        if not 0.0 <= t <= math.pi / 2.0:
            raise ValueError(f"theta must lie in [0, pi/2], got {t}")
        _require_probability(self.gamma1, "gamma1")
        _require_probability(self.gamma2, "gamma2")


@dataclass(frozen=True)
class OutcomeProbabilities:
    """The six "0"-outcome probabilities: clean probe (p1, q1), noisy probe
    (p2, q2), and aggregated (p, q), under hypotheses A and B."""

    p1: float
    q1: float
    p2: float
    q2: float
    p: float
    q: float


@dataclass(frozen=True)
class YsVerdict:
    """Verdict of the aggregation-reversal test at one parameter point.

    ``reversal`` is true exactly when both partitions favor A while the
    aggregated counts favor B."""

    clean_favors_a: bool
    noisy_favors_a: bool
    aggregated_favors_b: bool

    @property
    def reversal(self) -> bool:
        return (
            self.clean_favors_a
            and self.noisy_favors_a
            and self.aggregated_favors_b
        )


def outcome_probabilities(params: ScenarioParams) -> OutcomeProbabilities:
    """Closed forms for all six probabilities.

    p1 = 1, q1 = (1+cos 2theta)/2, p2 = (1+delta)/2,
    q2 = (1+delta*cos 2theta)/2 with delta the smearing factor; p and q are
    the gamma1- and gamma2-weighted aggregates."""
    delta = params.noise.smearing
    c = math.cos(2.0 * params.theta)
    p1 = 1.0
    q1 = 0.5 * (1.0 + c)
    p2 = 0.5 * (1.0 + delta)
    q2 = 0.5 * (1.0 + delta * c)
    p = params.gamma1 * p1 + (1.0 - params.gamma1) * p2
    q = params.gamma2 * q1 + (1.0 - params.gamma2) * q2
    return OutcomeProbabilities(p1, q1, p2, q2, p, q)


def ys_reversal(params: ScenarioParams) -> YsVerdict:
    """Strict-inequality reversal test: p1 > q1, p2 > q2, and q > p."""
    o = outcome_probabilities(params)
    return YsVerdict(o.p1 > o.q1, o.p2 > o.q2, o.q > o.p)


@dataclass(frozen=True)
class Gamma2Threshold:
    """Critical clean-preparation weight under hypothesis B.

    The reversal occurs for gamma2 strictly above ``value``.  ``reachable``
    is False when ``value`` is 1 or larger, i.e. no admissible weight
    triggers the effect."""

    value: float
    reachable: bool


def gamma2_threshold(
    gamma1: float, theta: float, noise: NoiseParams
) -> Gamma2Threshold:
    """gamma1/cos(2 theta) + (delta/(1-delta)) * (1-cos(2 theta))/cos(2 theta).

    Requires 0 < theta < pi/4 and a strictly noisy preparation (smearing
    below 1); a noiseless probe admits no reversal at any weight."""
    _require_probability(gamma1, "gamma1")
    c = _threshold_cos(theta)
    delta = noise.smearing
    if delta >= 1.0:
        raise ValueError(
            "noiseless preparation (delta_std = 0) admits no reversal: "
            "the weight threshold is undefined"
        )
    value = gamma1 / c + (delta / (1.0 - delta)) * ((1.0 - c) / c)
    return Gamma2Threshold(value, value < 1.0)


@dataclass(frozen=True)
class DeltaThreshold:
    """Critical preparation noise for fixed weights.

    The reversal occurs when the smearing factor drops strictly below
    ``smearing``, i.e. when the tilt spread exceeds ``delta_std``.
    ``reachable`` is False when the formula value falls outside (0, 1), in
    which case no noise level triggers the effect and ``delta_std`` is None.
    ``feasible`` reports the weight-pair existence bound
    smearing < 2*cos(2*theta) evaluated at the threshold."""

    smearing: float
    delta_std: float | None
    reachable: bool
    feasible: bool


def delta_threshold(
    gamma1: float, gamma2: float, theta: float
) -> DeltaThreshold:
    """(gamma1 - gamma2*c) / (gamma1 - 1 - (gamma2 - 1)*c) with c = cos(2 theta),
    converted to a tilt spread via delta_std = sqrt(-ln(smearing)/2).

    Returns an unreachable marker whenever the formula value is not a valid
    smearing factor (in particular for gamma2 <= gamma1, where reversing the
    weights can never favor B)."""
    _require_probability(gamma1, "gamma1")
    _require_probability(gamma2, "gamma2")
    c = _threshold_cos(theta)
    num = gamma1 - gamma2 * c
    den = gamma1 - 1.0 - (gamma2 - 1.0) * c
    if den == 0.0:
        return DeltaThreshold(math.inf, None, False, False)
    value = num / den
    reachable = 0.0 < value < 1.0
    delta_std = math.sqrt(-math.log(value) / 2.0) if reachable else None
    feasible = reachable and value < 2.0 * c
    return DeltaThreshold(value, delta_std, reachable, feasible)


def small_angle_threshold(gamma1: float, gamma2: float, theta: float) -> float:
    """Small-tilt expansion of the critical smearing factor:
    1 - 2*theta**2/(gamma2 - gamma1).  Accurate to O(theta^4)."""
    _require_probability(gamma1, "gamma1")
    _require_probability(gamma2, "gamma2")
    if gamma2 <= gamma1:
        raise ValueError(
            f"small-angle threshold needs gamma2 > gamma1, "
            f"got gamma1={gamma1}, gamma2={gamma2}"
        )
    t = _require_finite(theta, "theta")
    return 1.0 - 2.0 * t * t / (gamma2 - gamma1)


def reversal_pairs_exist(noise: NoiseParams, theta: float) -> bool:
    """Existence bound for reversal-triggering weight pairs at this noise
    level: smearing below twice cos(2*theta)."""
    c = _threshold_cos(theta)
    return noise.smearing < 2.0 * c


@dataclass(frozen=True)
class Crossing:
    """Grid bracket inside which the aggregated ratio q/p crosses 1, plus a
    bisection refinement of the crossing point (bracket width <= 1e-6)."""

    below: float
    above: float
    refined: float


@dataclass(frozen=True)
class DeltaSweepRow:
    delta_std: float
    q1_over_p1: float
    q2_over_p2: float
    q_over_p: float
    reversal: bool


@dataclass(frozen=True)
class DeltaSweep:
    """Analytic curves versus the preparation-noise spread at fixed weights."""

    theta: float
    gamma1: float
    gamma2: float
    rows: tuple[DeltaSweepRow, ...]
    crossings: tuple[Crossing, ...]


@dataclass(frozen=True)
class Gamma2SweepRow:
    gamma2: float
    q1_over_p1: float
    q2_over_p2: float
    q_over_p: tuple[float, ...]
    reversal: tuple[bool, ...]


@dataclass(frozen=True)
class Gamma2Sweep:
    """Analytic curves versus the hypothesis-B clean weight at fixed noise.

    ``q_over_p`` and ``reversal`` entries are aligned with ``gamma1_values``;
    crossings hold one entry per gamma1 (None when q/p never crosses 1)."""

    theta: float
    noise: NoiseParams
    gamma1_values: tuple[float, ...]
    rows: tuple[Gamma2SweepRow, ...]
    crossings: tuple[Crossing | None, ...]


def _bisect_unit_crossing(
    ratio: Callable[[float], float], lo: float, hi: float
) -> float:
    """Bisection root of ratio(x) = 1 on [lo, hi]; assumes a sign change."""
    f_lo = ratio(lo) - 1.0
    while hi - lo > CROSSING_TOL:
        mid = 0.5 * (lo + hi)
        f_mid = ratio(mid) - 1.0
        if (f_lo <= 0.0) == (f_mid <= 0.0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _find_crossings(
    grid: Sequence[float],
    ratios: Sequence[float],
    ratio: Callable[[float], float],
) -> tuple[Crossing, ...]:
    crossings = []
    for i in range(len(grid) - 1):
        f_here = ratios[i] - 1.0
        f_next = ratios[i + 1] - 1.0
        if (f_here <= 0.0) != (f_next <= 0.0):
            refined = _bisect_unit_crossing(ratio, grid[i], grid[i + 1])
            crossings.append(Crossing(grid[i], grid[i + 1], refined))
    return tuple(crossings)


def _checked_grid(values: Sequence[float], name: str) -> list[float]:
    grid = [_require_finite(v, name) for v in values]
    if any(b < a for a, b in zip(grid, grid[1:])):
        raise ValueError(f"{name} grid must be sorted ascending")
    return grid


def sweep_delta(
    theta: float,
    gamma1: float,
    gamma2: float,
    delta_grid: Sequence[float],
) -> DeltaSweep:
    """Evaluate the ratio curves on an ascending grid of noise spreads.

    Rows are exact closed-form values at the grid points (no interpolation);
    unit crossings of q/p are reported with their bracketing grid interval
    and a bisection refinement."""
    grid = _checked_grid(delta_grid, "delta_std")
    if any(d < 0.0 for d in grid):
        raise ValueError("delta_std grid must be non-negative")

    def ratio(delta_std: float) -> float:
        o = outcome_probabilities(
            ScenarioParams(theta, NoiseParams(delta_std), gamma1, gamma2)
        )
        return o.q / o.p

    rows = []
    for d in grid:
        params = ScenarioParams(theta, NoiseParams(d), gamma1, gamma2)
        o = outcome_probabilities(params)
        rows.append(
            DeltaSweepRow(
                delta_std=d,
                q1_over_p1=o.q1 / o.p1,
                q2_over_p2=o.q2 / o.p2,
                q_over_p=o.q / o.p,
                reversal=ys_reversal(params).reversal,
            )
        )
    crossings = _find_crossings(grid, [r.q_over_p for r in rows], ratio)
    return DeltaSweep(theta, gamma1, gamma2, tuple(rows), crossings)


def sweep_gamma2(
    theta: float,
    noise: NoiseParams,
    gamma1_values: Sequence[float],
    gamma2_grid: Sequence[float],
) -> Gamma2Sweep:
    """Evaluate the ratio curves on an ascending grid of hypothesis-B clean
    weights, one q/p column per gamma1.

    q2/p2 does not depend on the weights, so that column is constant."""
    gamma1_values = tuple(
        _require_probability(g, "gamma1") for g in gamma1_values
    )
    if not gamma1_values:
        raise ValueError("gamma1_values must not be empty")
    grid = _checked_grid(gamma2_grid, "gamma2")
    for g in grid:
        _require_probability(g, "gamma2")

    def ratio_for(gamma1: float) -> Callable[[float], float]:
        def ratio(gamma2: float) -> float:
            o = outcome_probabilities(
                ScenarioParams(theta, noise, gamma1, gamma2)
            )
            return o.q / o.p

        return ratio

    # the partitioned ratios do not depend on the weights
    fixed = outcome_probabilities(
        ScenarioParams(theta, noise, gamma1_values[0], grid[0])
    )
    q1_over_p1 = fixed.q1 / fixed.p1
    q2_over_p2 = fixed.q2 / fixed.p2

    rows = []
    for g2 in grid:
        q_over_p = []
        reversal = []
        for g1 in gamma1_values:
            params = ScenarioParams(theta, noise, g1, g2)
            o = outcome_probabilities(params)
            q_over_p.append(o.q / o.p)
            reversal.append(ys_reversal(params).reversal)
        rows.append(
            Gamma2SweepRow(
                gamma2=g2,
                q1_over_p1=q1_over_p1,
                q2_over_p2=q2_over_p2,
                q_over_p=tuple(q_over_p),
                reversal=tuple(reversal),
            )
        )

    crossings: list[Crossing | None] = []
    for k, g1 in enumerate(gamma1_values):
        found = _find_crossings(
            grid, [row.q_over_p[k] for row in rows], ratio_for(g1)
        )
        crossings.append(found[0] if found else None)
    return Gamma2Sweep(
        theta, noise, gamma1_values, tuple(rows), tuple(crossings)
    )
