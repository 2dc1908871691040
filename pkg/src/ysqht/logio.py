"""Bit-stable file formats: run manifests, count logs, and sweep tables.

Count logs are JSON lines (streamable, append-safe): the first line is the
run manifest, every following line one acquisition record.  Sweep tables are
CSV with frozen header names and a companion ``<name>.manifest.json``.
Floats in record lines carry 17 significant digits and CSV cells use the
shortest round-trip decimal form, so parsing a file back reproduces the
in-memory values exactly.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Iterable, Sequence

from .counting import AcquisitionConfig, AcquisitionRecord
from .version import __version__

SCHEMA_VERSION = 1
TOOL_NAME = "ysqht"

KIND_COUNT_LOG = "count-log"
KIND_SWEEP = "sweep"


class LogFormatError(ValueError):
    """A log file line could not be parsed; carries the 1-based line number."""

    def __init__(self, line_number: int, message: str) -> None:
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


class ManifestVersionError(ValueError):
    """The file's manifest schema is not supported by this tool version."""


def _timestamp() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


@dataclass(frozen=True)
class RunManifest:
    """Resolved parameters of a run, embedded in every output file.

    Re-running a manifest reproduces the file byte for byte except for the
    ``created`` timestamp, which is excluded from the reproducibility
    contract."""

    kind: str
    theta: float | None = None
    delta_std: float | None = None
    gamma1: tuple[float, ...] | None = None
    gamma2: float | None = None
    iterations: int | None = None
    mean_rate: float | None = None
    window_seconds: float | None = None
    seed: int | None = None
    mode: str | None = None
    axis: str | None = None
    grid: tuple[float, ...] | None = None
    with_sim: bool | None = None
    created: str = field(default_factory=_timestamp)
    schema_version: int = SCHEMA_VERSION
    tool: str = TOOL_NAME
    version: str = __version__

    def to_json(self) -> str:
        payload = {k: v for k, v in asdict(self).items() if v is not None}
        return json.dumps(payload, sort_keys=True)

    @classmethod
    def from_json_dict(cls, payload: dict[str, Any]) -> "RunManifest":
        data = dict(payload)
        schema = data.get("schema_version")
        if schema != SCHEMA_VERSION:
            raise ManifestVersionError(
                f"unsupported manifest schema_version {schema!r}; "
                f"this tool reads version {SCHEMA_VERSION}"
            )
        if "kind" not in data:
            raise ManifestVersionError("manifest is missing its 'kind' field")
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(data) - known
        if unknown:
            raise ManifestVersionError(
                f"manifest carries unknown fields {sorted(unknown)}"
            )
        for key in ("gamma1", "grid"):
            if data.get(key) is not None:
                data[key] = tuple(float(v) for v in data[key])
        return cls(**data)


def manifest_for_acquisition(config: AcquisitionConfig) -> RunManifest:
    return RunManifest(
        kind=KIND_COUNT_LOG,
        theta=config.theta,
        delta_std=config.noise.delta_std,
        iterations=config.iterations,
        mean_rate=config.mean_rate,
        window_seconds=config.window_seconds,
        seed=config.seed,
    )


def format_record_line(record: AcquisitionRecord) -> str:
    """One record as a JSON line with the tilt at 17 significant digits
    (enough to reproduce the double exactly)."""
    return (
        f'{{"i": {record.iteration}, "alpha": {record.alpha:.17g}, '
        f'"n1p": {record.n1p}, "n1q": {record.n1q}, '
        f'"n2p": {record.n2p}, "n2q": {record.n2q}}}'
    )


def write_count_log(
    path: str | Path,
    config: AcquisitionConfig,
    records: Iterable[AcquisitionRecord],
) -> RunManifest:
    manifest = manifest_for_acquisition(config)
    lines = [manifest.to_json()]
    lines.extend(format_record_line(r) for r in records)
    Path(path).write_text("\n".join(lines) + "\n")
    return manifest


def _record_from_payload(
    line_number: int, payload: dict[str, Any]
) -> AcquisitionRecord:
    expected = {"i", "alpha", "n1p", "n1q", "n2p", "n2q"}
    if set(payload) != expected:
        raise LogFormatError(
            line_number,
            f"record must have exactly the keys {sorted(expected)}, "
            f"got {sorted(payload)}",
        )
    alpha = payload["alpha"]
    if not isinstance(alpha, (int, float)) or isinstance(alpha, bool) or \
            not math.isfinite(float(alpha)):
        raise LogFormatError(line_number, f"alpha must be finite, got {alpha!r}")
    counts = {}
    for key in ("i", "n1p", "n1q", "n2p", "n2q"):
        value = payload[key]
        if not isinstance(value, int) or isinstance(value, bool) or value < 0:
            raise LogFormatError(
                line_number,
                f"{key} must be a non-negative integer, got {value!r}",
            )
        counts[key] = value
    return AcquisitionRecord(
        iteration=counts["i"],
        alpha=float(alpha),
        n1p=counts["n1p"],
        n1q=counts["n1q"],
        n2p=counts["n2p"],
        n2q=counts["n2q"],
    )


def read_count_log(
    path: str | Path,
) -> tuple[RunManifest, list[AcquisitionRecord]]:
    """Parse a count log back into its manifest and records.

    Raises LogFormatError (with the offending line number) on corrupt lines
    and ManifestVersionError on manifests this version cannot read."""
    text = Path(path).read_text()
    lines = text.splitlines()
    if not lines:
        raise LogFormatError(1, "empty file, expected a manifest line")
    try:
        head = json.loads(lines[0])
    except json.JSONDecodeError as err:
        raise LogFormatError(1, f"manifest is not valid JSON: {err}") from err
    if not isinstance(head, dict):
        raise LogFormatError(1, "manifest line must be a JSON object")
    manifest = RunManifest.from_json_dict(head)
    if manifest.kind != KIND_COUNT_LOG:
        raise LogFormatError(
            1, f"expected a {KIND_COUNT_LOG!r} manifest, got {manifest.kind!r}"
        )
    records = []
    for line_number, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        try:
            payload = json.loads(line)
        except json.JSONDecodeError as err:
            raise LogFormatError(
                line_number, f"not valid JSON: {err}"
            ) from err
        if not isinstance(payload, dict):
            raise LogFormatError(line_number, "record line must be a JSON object")
        records.append(_record_from_payload(line_number, payload))
    return manifest, records


def _gamma1_suffixes(gamma1_values: Sequence[float]) -> list[str]:
    if len(gamma1_values) == 1:
        return [""]
    return [f"_gamma1_{g!r}" for g in gamma1_values]


def delta_sweep_header(
    gamma1_values: Sequence[float], with_sim: bool
) -> list[str]:
    """Frozen column names for noise-axis sweep tables."""
    suffixes = _gamma1_suffixes(gamma1_values)
    header = ["delta_std", "q1_over_p1", "q2_over_p2"]
    header += [f"q_over_p{s}" for s in suffixes]
    header += [f"reversal{s}" for s in suffixes]
    if with_sim:
        header += ["sim_q2_over_p2", "sim_q2_over_p2_err"]
        for s in suffixes:
            header += [f"sim_q_over_p{s}", f"sim_q_over_p_err{s}"]
    return header


def gamma2_sweep_header(
    gamma1_values: Sequence[float], with_sim: bool
) -> list[str]:
    """Frozen column names for weight-axis sweep tables."""
    suffixes = _gamma1_suffixes(gamma1_values)
    header = ["gamma2", "q1_over_p1", "q2_over_p2"]
    header += [f"q_over_p{s}" for s in suffixes]
    header += [f"reversal{s}" for s in suffixes]
    if with_sim:
        header += ["sim_q2_over_p2", "sim_q2_over_p2_err"]
        for s in suffixes:
            header += [f"sim_q_over_p{s}", f"sim_q_over_p_err{s}"]
    return header


def _format_cell(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)  # shortest round-trip decimal form
    if isinstance(value, int):
        return str(value)
    raise TypeError(f"unsupported CSV cell type {type(value).__name__}")


def write_sweep_csv(
    path: str | Path,
    header: Sequence[str],
    rows: Iterable[Sequence[Any]],
    manifest: RunManifest,
) -> Path:
    """Write a sweep table and its companion ``<path>.manifest.json``."""
    out = Path(path)
    lines = [",".join(header)]
    for row in rows:
        cells = [_format_cell(v) for v in row]
        if len(cells) != len(header):
            raise ValueError(
                f"row has {len(cells)} cells, header has {len(header)}"
            )
        lines.append(",".join(cells))
    out.write_text("\n".join(lines) + "\n")
    manifest_path = out.with_name(out.name + ".manifest.json")
    manifest_path.write_text(manifest.to_json() + "\n")
    return manifest_path
