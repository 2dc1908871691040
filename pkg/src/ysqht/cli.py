"""Command-line interface: analytic reports, acquisition simulation, count-log
analysis, and sweep tables.

Exit codes: 0 ok, 2 usage error, 3 reversal present (with --check-reversal),
4 io error, 5 corrupt log line, 6 incompatible manifest version.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from typing import Any, Sequence

import numpy as np

from .counting import (
    AGGREGATION_MODES,
    AcquisitionConfig,
    aggregate,
    estimate_ratios,
    run_acquisition,
    simulate_delta_sweep,
    simulate_gamma2_sweep,
)
from .logio import (
    KIND_SWEEP,
    LogFormatError,
    ManifestVersionError,
    RunManifest,
    delta_sweep_header,
    gamma2_sweep_header,
    read_count_log,
    write_count_log,
    write_sweep_csv,
)
from .qubit import NoiseParams
from .theory import (
    ScenarioParams,
    delta_threshold,
    gamma2_threshold,
    outcome_probabilities,
    reversal_pairs_exist,
    sweep_delta,
    sweep_gamma2,
    ys_reversal,
)
from .version import __version__

#: Built-in seed used when neither --seed nor YSQHT_SEED is given.
DEFAULT_SEED = 12345

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_REVERSAL = 3
EXIT_IO = 4
EXIT_CORRUPT = 5
EXIT_VERSION = 6


def _resolve_seed(value: int | None) -> int:
    if value is not None:
        return value
    env = os.environ.get("YSQHT_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError as err:
            raise ValueError(f"YSQHT_SEED must be an integer, got {env!r}") from err
    return DEFAULT_SEED


def _angle(value: float, degrees: bool) -> float:
    return math.radians(value) if degrees else value


def _gamma_list(text: str) -> tuple[float, ...]:
    try:
        values = tuple(float(part) for part in text.split(","))
    except ValueError as err:
        raise argparse.ArgumentTypeError(
            f"expected comma-separated numbers, got {text!r}"
        ) from err
    if not values:
        raise argparse.ArgumentTypeError("expected at least one value")
    return values


def _parse_range(text: str) -> tuple[float, float, int]:
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(
            f"range must be MIN:MAX:POINTS, got {text!r}"
        )
    try:
        lo, hi = float(parts[0]), float(parts[1])
        points = int(parts[2])
    except ValueError as err:
        raise argparse.ArgumentTypeError(f"bad range {text!r}: {err}") from err
    if points < 2:
        raise argparse.ArgumentTypeError("range needs at least 2 points")
    if not lo < hi:
        raise argparse.ArgumentTypeError("range needs MIN < MAX")
    return lo, hi, points


def _estimate_dict(estimate) -> dict[str, Any]:
    return {
        "value": estimate.value,
        "std_error": estimate.std_error,
        "n_samples": estimate.n_samples,
        "poisson_error": estimate.poisson_error,
    }


def _print_estimate(label: str, estimate) -> None:
    line = f"{label:<12} {estimate.value:.6f} +- {estimate.std_error:.2g}"
    if estimate.poisson_error is not None:
        line += f"  (poisson cross-check +- {estimate.poisson_error:.2g})"
    print(line)


def cmd_theory(args: argparse.Namespace) -> int:
    theta = _angle(args.theta, args.degrees)
    noise = (
        NoiseParams(_angle(args.delta_std, args.degrees))
        if args.delta_std is not None
        else None
    )

    report: dict[str, Any] = {
        "theta": theta,
        "delta_std": noise.delta_std if noise else None,
        "smearing": noise.smearing if noise else None,
        "gamma1": args.gamma1,
        "gamma2": args.gamma2,
    }

    if noise is not None:
        params = ScenarioParams(theta, noise, args.gamma1, args.gamma2)
        o = outcome_probabilities(params)
        verdict = ys_reversal(params)
        report["probabilities"] = {
            "p1": o.p1, "q1": o.q1, "p2": o.p2, "q2": o.q2, "p": o.p, "q": o.q,
        }
        report["ratios"] = {
            "q1_over_p1": o.q1 / o.p1,
            "q2_over_p2": o.q2 / o.p2,
            "q_over_p": o.q / o.p,
        }
        report["verdict"] = {
            "clean_favors_a": verdict.clean_favors_a,
            "noisy_favors_a": verdict.noisy_favors_a,
            "aggregated_favors_b": verdict.aggregated_favors_b,
            "reversal": verdict.reversal,
        }
        try:
            thr = gamma2_threshold(args.gamma1, theta, noise)
            report["gamma2_threshold"] = {
                "value": thr.value, "reachable": thr.reachable,
            }
        except ValueError as err:
            report["gamma2_threshold"] = {"error": str(err)}
        try:
            report["pairs_feasible"] = reversal_pairs_exist(noise, theta)
        except ValueError:
            report["pairs_feasible"] = None
    else:
        # Probabilities of the clean probe need only theta.
        params = ScenarioParams(theta, NoiseParams(0.0), args.gamma1, args.gamma2)
        o = outcome_probabilities(params)
        report["probabilities"] = {"p1": o.p1, "q1": o.q1}
        report["verdict"] = None
        report["gamma2_threshold"] = None
        report["pairs_feasible"] = None

    try:
        dth = delta_threshold(args.gamma1, args.gamma2, theta)
        report["delta_threshold"] = {
            "smearing": dth.smearing,
            "delta_std": dth.delta_std,
            "reachable": dth.reachable,
            "feasible": dth.feasible,
        }
    except ValueError as err:
        report["delta_threshold"] = {"error": str(err)}

    if args.json:
        print(json.dumps(report, sort_keys=True))
    else:
        _print_theory_report(report)

    if args.check_reversal:
        verdict = report.get("verdict")
        if verdict is None:
            print(
                "error: --check-reversal needs --delta-std", file=sys.stderr
            )
            return EXIT_USAGE
        if verdict["reversal"]:
            return EXIT_REVERSAL
    return EXIT_OK


def _print_theory_report(report: dict[str, Any]) -> None:
    def show(label: str, value: Any) -> None:
        print(f"{label:<22} {value}")

    show("theta (rad)", f"{report['theta']:.6f}")
    if report["delta_std"] is not None:
        show("delta_std (rad)", f"{report['delta_std']:.6f}")
        show("smearing", f"{report['smearing']:.6f}")
    show("gamma1", report["gamma1"])
    show("gamma2", report["gamma2"])
    for name, value in report["probabilities"].items():
        show(name, f"{value:.6f}")
    for name, value in report.get("ratios", {}).items():
        show(name, f"{value:.6f}")

    thr = report["gamma2_threshold"]
    if thr is None:
        show("gamma2_threshold", "needs --delta-std")
    elif "error" in thr:
        show("gamma2_threshold", f"unavailable ({thr['error']})")
    else:
        tail = "reachable" if thr["reachable"] else "unreachable"
        show("gamma2_threshold", f"{thr['value']:.6f} ({tail})")

    dth = report["delta_threshold"]
    if "error" in dth:
        show("delta_threshold", f"unavailable ({dth['error']})")
    elif not dth["reachable"]:
        show("delta_threshold", "unreachable (no noise level reverses)")
    else:
        show(
            "delta_threshold",
            f"smearing {dth['smearing']:.6f} -> delta_std "
            f"{dth['delta_std']:.6f} rad",
        )

    if report["pairs_feasible"] is not None:
        show(
            "pairs_feasible",
            f"{str(report['pairs_feasible']).lower()} "
            "(smearing < 2 cos 2theta)",
        )
    verdict = report["verdict"]
    if verdict is not None:
        show("reversal", str(verdict["reversal"]).lower())


def cmd_simulate(args: argparse.Namespace) -> int:
    config = AcquisitionConfig(
        theta=_angle(args.theta, args.degrees),
        noise=NoiseParams(_angle(args.delta_std, args.degrees)),
        seed=_resolve_seed(args.seed),
        iterations=args.iterations,
        mean_rate=args.rate,
        window_seconds=args.window,
    )
    records = run_acquisition(config)
    write_count_log(args.out, config, records)
    print(f"wrote {len(records)} records to {args.out}")
    return EXIT_OK


def cmd_analyze(args: argparse.Namespace) -> int:
    manifest, records = read_count_log(args.log)
    summary = estimate_ratios(records)
    rng = np.random.default_rng(_resolve_seed(args.seed))
    agg = aggregate(records, args.gamma1, args.gamma2, rng, args.mode)

    if args.json:
        print(json.dumps({
            "log_seed": manifest.seed,
            "gamma1": args.gamma1,
            "gamma2": args.gamma2,
            "mode": args.mode,
            "excluded": summary.excluded,
            "q1_over_p1": _estimate_dict(summary.q1_over_p1),
            "p2": _estimate_dict(summary.p2),
            "q2": _estimate_dict(summary.q2),
            "q2_over_p2": _estimate_dict(summary.q2_over_p2),
            "p": _estimate_dict(agg.p),
            "q": _estimate_dict(agg.q),
            "q_over_p": _estimate_dict(agg.q_over_p),
        }, sort_keys=True))
        return EXIT_OK

    print(
        f"{len(records)} iterations from {args.log} "
        f"({summary.excluded} excluded for n1p = 0)"
    )
    _print_estimate("q1/p1", summary.q1_over_p1)
    _print_estimate("p2", summary.p2)
    _print_estimate("q2", summary.q2)
    _print_estimate("q2/p2", summary.q2_over_p2)
    _print_estimate("p", agg.p)
    _print_estimate("q", agg.q)
    _print_estimate("q/p", agg.q_over_p)
    return EXIT_OK


def _sweep_manifest(
    args: argparse.Namespace,
    axis: str,
    grid: Sequence[float],
    theta: float,
    delta_std: float | None,
    gamma1: tuple[float, ...],
    gamma2: float | None,
    seed: int | None,
) -> RunManifest:
    return RunManifest(
        kind=KIND_SWEEP,
        theta=theta,
        delta_std=delta_std,
        gamma1=gamma1,
        gamma2=gamma2,
        iterations=args.iterations if args.with_sim else None,
        mean_rate=args.rate if args.with_sim else None,
        window_seconds=args.window if args.with_sim else None,
        seed=seed,
        mode=args.mode if args.with_sim else None,
        axis=axis,
        grid=tuple(grid),
        with_sim=args.with_sim,
    )


def cmd_sweep(args: argparse.Namespace) -> int:
    theta = _angle(args.theta, args.degrees)
    lo, hi, points = args.range
    if args.axis == "delta" and args.degrees:
        lo, hi = math.radians(lo), math.radians(hi)
    grid = [float(v) for v in np.linspace(lo, hi, points)]
    gamma1_values = args.gamma1
    seed = _resolve_seed(args.seed) if args.with_sim else None

    if args.axis == "delta":
        if args.gamma2 is None:
            raise ValueError("sweep delta needs --gamma2")
        if args.delta_std is not None:
            raise ValueError(
                "sweep delta takes its noise values from the range; "
                "drop --delta-std"
            )
        if grid[0] < 0.0:
            raise ValueError("delta_std range must be non-negative")
        sweeps = [
            sweep_delta(theta, g1, args.gamma2, grid) for g1 in gamma1_values
        ]
        sim = None
        if args.with_sim:
            base = AcquisitionConfig(
                theta=theta,
                noise=NoiseParams(0.0),
                seed=seed,
                iterations=args.iterations,
                mean_rate=args.rate,
                window_seconds=args.window,
            )
            sim = simulate_delta_sweep(
                base, grid, gamma1_values, args.gamma2, args.mode
            )
        header = delta_sweep_header(gamma1_values, args.with_sim)
        rows = []
        for i, d in enumerate(grid):
            row: list[Any] = [
                d, sweeps[0].rows[i].q1_over_p1, sweeps[0].rows[i].q2_over_p2,
            ]
            row += [s.rows[i].q_over_p for s in sweeps]
            row += [s.rows[i].reversal for s in sweeps]
            if sim is not None:
                point = sim.points[i]
                row += [point.q2_over_p2.value, point.q2_over_p2.std_error]
                for est in point.q_over_p:
                    row += [est.value, est.std_error]
            rows.append(row)
        manifest = _sweep_manifest(
            args, "delta", grid, theta, None, gamma1_values, args.gamma2, seed
        )
    else:
        if args.delta_std is None:
            raise ValueError("sweep gamma2 needs --delta-std")
        if args.gamma2 is not None:
            raise ValueError(
                "sweep gamma2 takes its weights from the range; drop --gamma2"
            )
        noise = NoiseParams(_angle(args.delta_std, args.degrees))
        analytic = sweep_gamma2(theta, noise, gamma1_values, grid)
        sim = None
        if args.with_sim:
            base = AcquisitionConfig(
                theta=theta,
                noise=noise,
                seed=seed,
                iterations=args.iterations,
                mean_rate=args.rate,
                window_seconds=args.window,
            )
            sim = simulate_gamma2_sweep(base, grid, gamma1_values, args.mode)
        header = gamma2_sweep_header(gamma1_values, args.with_sim)
        rows = []
        for i, g2 in enumerate(grid):
            arow = analytic.rows[i]
            row = [g2, arow.q1_over_p1, arow.q2_over_p2]
            row += list(arow.q_over_p)
            row += list(arow.reversal)
            if sim is not None:
                point = sim.points[i]
                row += [point.q2_over_p2.value, point.q2_over_p2.std_error]
                for est in point.q_over_p:
                    row += [est.value, est.std_error]
            rows.append(row)
        manifest = _sweep_manifest(
            args, "gamma2", grid, theta, noise.delta_std, gamma1_values,
            None, seed,
        )

    manifest_path = write_sweep_csv(args.out, header, rows, manifest)
    print(f"wrote {len(rows)} rows to {args.out} (manifest {manifest_path})")
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ysqht",
        description=(
            "Polarization-measurement hypothesis testing under Gaussian "
            "preparation noise: exact ratio curves, aggregation-reversal "
            "thresholds, and a seeded photon-counting emulator."
        ),
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    theory = sub.add_parser(
        "theory", help="closed-form probabilities, thresholds, and verdict"
    )
    theory.add_argument("--theta", type=float, required=True,
                        help="tilt of hypothesis B (radians)")
    theory.add_argument("--delta-std", type=float, default=None,
                        help="preparation-noise spread (radians)")
    theory.add_argument("--gamma1", type=float, required=True)
    theory.add_argument("--gamma2", type=float, required=True)
    theory.add_argument("--degrees", action="store_true",
                        help="interpret angle inputs as degrees")
    theory.add_argument("--json", action="store_true")
    theory.add_argument("--check-reversal", action="store_true",
                        help="exit with code 3 when the reversal is present")
    theory.set_defaults(handler=cmd_theory)

    simulate = sub.add_parser(
        "simulate", help="run one acquisition and write a count log"
    )
    simulate.add_argument("--theta", type=float, required=True)
    simulate.add_argument("--delta-std", type=float, required=True)
    simulate.add_argument("--iterations", type=int, default=200)
    simulate.add_argument("--rate", type=float, default=1e4,
                          help="expected counts per second at unit probability")
    simulate.add_argument("--window", type=float, default=1.0,
                          help="counting window in seconds")
    simulate.add_argument("--seed", type=int, default=None,
                          help="acquisition seed (default: YSQHT_SEED or "
                               f"{DEFAULT_SEED})")
    simulate.add_argument("--degrees", action="store_true")
    simulate.add_argument("--out", required=True)
    simulate.set_defaults(handler=cmd_simulate)

    analyze = sub.add_parser(
        "analyze", help="estimate ratios from a count log"
    )
    analyze.add_argument("log", help="count log written by simulate")
    analyze.add_argument("--gamma1", type=float, required=True)
    analyze.add_argument("--gamma2", type=float, required=True)
    analyze.add_argument("--mode", choices=AGGREGATION_MODES,
                         default="stochastic")
    analyze.add_argument("--seed", type=int, default=None,
                         help="seed for the stochastic mixing draws")
    analyze.add_argument("--json", action="store_true")
    analyze.set_defaults(handler=cmd_analyze)

    sweep = sub.add_parser(
        "sweep", help="write an analytic (optionally simulated) sweep table"
    )
    sweep.add_argument("axis", choices=("delta", "gamma2"))
    sweep.add_argument("range", type=_parse_range, help="MIN:MAX:POINTS")
    sweep.add_argument("--theta", type=float, required=True)
    sweep.add_argument("--delta-std", type=float, default=None,
                       help="noise spread (gamma2 axis only)")
    sweep.add_argument("--gamma1", type=_gamma_list, required=True,
                       help="one value or a comma-separated list")
    sweep.add_argument("--gamma2", type=float, default=None,
                       help="hypothesis-B clean weight (delta axis only)")
    sweep.add_argument("--with-sim", action="store_true",
                       help="add Monte Carlo columns")
    sweep.add_argument("--mode", choices=AGGREGATION_MODES,
                       default="stochastic")
    sweep.add_argument("--iterations", type=int, default=200)
    sweep.add_argument("--rate", type=float, default=1e4)
    sweep.add_argument("--window", type=float, default=1.0)
    sweep.add_argument("--seed", type=int, default=None)
    sweep.add_argument("--degrees", action="store_true")
    sweep.add_argument("--out", required=True)
    sweep.set_defaults(handler=cmd_sweep)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except LogFormatError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_CORRUPT
    except ManifestVersionError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_VERSION
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_IO
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
