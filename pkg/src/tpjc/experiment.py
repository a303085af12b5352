"""Config-driven experiment runner with machine-readable outputs.

One JSON config describes one protocol run (coherent base, direction,
repetition count). The runner executes the pass iteration, then writes
``result.json`` (the full result, always) plus one file per requested
output. Every number is serialized with 17 significant digits and the
pipeline contains no randomness outside the explicitly seeded oracle
check, so identical configs produce byte-identical files.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .dynamics import (
    ProtocolResult,
    TpjcParams,
    approx_error,
    evolve_closed_form,
    evolve_oracle,
    run_protocol,
)
from .errors import ConfigInvalid, IoFailure
from .fock import (
    DEFAULT_TOL,
    QubitFieldState,
    Tolerances,
    WarningLog,
    default_dim,
    make_coherent,
)
from .sg import Mode, mandel_q_coherent_predict

KNOWN_OUTPUTS = (
    "fock_dist",
    "fidelity_series",
    "mandel_q",
    "mean_photon",
    "approx_error_table",
    "oracle_check",
)

DEFAULT_OUTPUTS = ("fock_dist", "fidelity_series", "mandel_q", "mean_photon")

# Fixed parameters for analyses embedded in a config run, so the output
# stays deterministic without extra config surface.
ORACLE_CHECK_DIM = 64
ORACLE_CHECK_TRIALS = 100
ORACLE_CHECK_SEED = 42
ORACLE_CHECK_TIMES = (0.3, math.pi, 7.1)
ORACLE_CHECK_BOUND = 1e-8
APPROX_TABLE_MAX_J = 200

_OUTPUT_FILES = {
    "fock_dist": "fock_dist.csv",
    "fidelity_series": "fidelity_series.csv",
    "mandel_q": "mandel_q.json",
    "mean_photon": "mean_photon.json",
    "approx_error_table": "approx_error_table.csv",
    "oracle_check": "oracle_check.json",
}


@dataclass(frozen=True)
class ExperimentConfig:
    """Validated parameters of one protocol experiment."""

    alpha: complex
    mode: Mode
    m: int
    dim: int | None = None
    g: float = 1.0
    tolerances: Tolerances = DEFAULT_TOL
    outputs: tuple[str, ...] = DEFAULT_OUTPUTS

    def resolved_dim(self) -> int:
        return self.dim if self.dim is not None else self.minimum_dim()

    def minimum_dim(self) -> int:
        gain = 2 * self.m if self.mode is Mode.ADD else 0
        return default_dim(self.alpha, gain)


# ---------------------------------------------------------------------------
# config parsing


def _parse_alpha(raw) -> complex:
    if isinstance(raw, (int, float)) and not isinstance(raw, bool):
        return complex(raw)
    if isinstance(raw, list) and len(raw) == 2 and all(
        isinstance(x, (int, float)) and not isinstance(x, bool) for x in raw
    ):
        return complex(raw[0], raw[1])
    raise ConfigInvalid(f"alpha must be a number or a [re, im] pair, got {raw!r}")


def parse_config(data: dict) -> ExperimentConfig:
    """Validate a decoded config object; raises ConfigInvalid with the
    offending field named."""
    if not isinstance(data, dict):
        raise ConfigInvalid("config must be a JSON object")
    known = {"alpha", "mode", "m", "dim", "g", "tolerances", "outputs"}
    unknown = set(data) - known
    if unknown:
        raise ConfigInvalid(f"unknown config fields: {sorted(unknown)}")
    for required in ("alpha", "mode", "m"):
        if required not in data:
            raise ConfigInvalid(f"missing required config field {required!r}")

    alpha = _parse_alpha(data["alpha"])
    try:
        mode = Mode.from_string(str(data["mode"]))
    except ValueError as exc:
        raise ConfigInvalid(str(exc)) from None

    m = data["m"]
    if not isinstance(m, int) or isinstance(m, bool) or m < 0:
        raise ConfigInvalid(f"m must be a non-negative integer, got {m!r}")

    g = data.get("g", 1.0)
    if not isinstance(g, (int, float)) or isinstance(g, bool) or not g > 0:
        raise ConfigInvalid(f"g must be a positive number, got {g!r}")

    tol = DEFAULT_TOL
    if "tolerances" in data:
        over = data["tolerances"]
        if not isinstance(over, dict):
            raise ConfigInvalid("tolerances must be an object")
        fields = {"norm_tol", "herm_tol", "psd_tol", "tail_tol"}
        bad = set(over) - fields
        if bad:
            raise ConfigInvalid(f"unknown tolerance fields: {sorted(bad)}")
        for name, value in over.items():
            if not isinstance(value, (int, float)) or isinstance(value, bool) or value < 0:
                raise ConfigInvalid(f"tolerance {name} must be a non-negative number")
        tol = replace(tol, **{k: float(v) for k, v in over.items()})

    outputs = data.get("outputs", list(DEFAULT_OUTPUTS))
    if not isinstance(outputs, list) or not all(isinstance(o, str) for o in outputs):
        raise ConfigInvalid("outputs must be a list of output names")
    bad_outputs = [o for o in outputs if o not in KNOWN_OUTPUTS]
    if bad_outputs:
        raise ConfigInvalid(f"unknown outputs {bad_outputs}; known: {list(KNOWN_OUTPUTS)}")

    config = ExperimentConfig(
        alpha=alpha, mode=mode, m=m, g=float(g), tolerances=tol, outputs=tuple(outputs)
    )

    dim = data.get("dim")
    if dim is not None:
        if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
            raise ConfigInvalid(f"dim must be a positive integer, got {dim!r}")
        minimum = config.minimum_dim()
        if dim < minimum:
            raise ConfigInvalid(
                f"dim={dim} below the sizing policy for alpha={alpha}, m={m}, "
                f"mode={mode.value}; computed minimum is {minimum}"
            )
        config = replace(config, dim=dim)
    return config


def load_config(path: str | Path) -> ExperimentConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigInvalid(f"cannot read config {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigInvalid(f"config {path} is not valid JSON: {exc}") from exc
    return parse_config(data)


# ---------------------------------------------------------------------------
# serialization (17 significant digits, deterministic bytes)


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _json_value(obj) -> str:
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_json_value(v) for v in obj) + "]"
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(k)}: {_json_value(v)}" for k, v in obj.items()) + "}"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _write_text(path: str | Path, text: str) -> None:
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc


def result_to_dict(result: ProtocolResult) -> dict:
    return {
        "fidelity_series": [[k, f] for k, f in result.fidelity_series],
        "initial_dist": [[j, p] for j, p in result.initial_dist],
        "final_dist": [[j, p] for j, p in result.final_dist],
        "mean_photon_initial": result.mean_photon_initial,
        "mean_photon_final": result.mean_photon_final,
        "mandel_q_final": result.mandel_q_final,
        "mandel_q_predicted": result.mandel_q_predicted,
        "warnings": list(result.warnings),
    }


def emit_json(result: ProtocolResult, path: str | Path) -> None:
    """Full result as JSON, field names matching ProtocolResult."""
    data = result_to_dict(result)
    lines = ",\n".join(f"  {_json_value(k)}: {_json_value(v)}" for k, v in data.items())
    _write_text(path, "{\n" + lines + "\n}\n")


def load_result(path: str | Path) -> ProtocolResult:
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc
    return ProtocolResult(
        fidelity_series=[(int(k), float(f)) for k, f in data["fidelity_series"]],
        initial_dist=[(int(j), float(p)) for j, p in data["initial_dist"]],
        final_dist=[(int(j), float(p)) for j, p in data["final_dist"]],
        mean_photon_initial=float(data["mean_photon_initial"]),
        mean_photon_final=float(data["mean_photon_final"]),
        mandel_q_final=float(data["mandel_q_final"]),
        mandel_q_predicted=None
        if data["mandel_q_predicted"] is None
        else float(data["mandel_q_predicted"]),
        warnings=list(data["warnings"]),
    )


def emit_fidelity_csv(result: ProtocolResult, path: str | Path) -> None:
    rows = [f"{k},{_fmt(f)}" for k, f in result.fidelity_series]
    _write_text(path, "k,fidelity\n" + "\n".join(rows) + "\n")


def emit_distribution_csv(result: ProtocolResult, path: str | Path) -> None:
    rows = [
        f"{j},{_fmt(p0)},{_fmt(p1)}"
        for (j, p0), (_, p1) in zip(result.initial_dist, result.final_dist)
    ]
    _write_text(path, "j,p_initial,p_final\n" + "\n".join(rows) + "\n")


# ---------------------------------------------------------------------------
# standalone analyses


def approx_error_table(max_j: int) -> list[tuple[int, float, float]]:
    """(j, add-branch error, subtract-branch error) for j = 0..max_j.

    The subtract branch has a zero reference value below j = 2; those
    entries are NaN.
    """
    if max_j < 0:
        raise ConfigInvalid(f"max_j must be >= 0, got {max_j}")
    rows = []
    for j in range(max_j + 1):
        add_err = approx_error(j, Mode.ADD)
        sub_err = approx_error(j, Mode.SUBTRACT) if j >= 2 else float("nan")
        rows.append((j, add_err, sub_err))
    return rows


def emit_approx_table_csv(rows: list[tuple[int, float, float]], path: str | Path) -> None:
    lines = [f"{j},{_fmt(a)},{_fmt(s)}" for j, a, s in rows]
    _write_text(path, "j,add_error,subtract_error\n" + "\n".join(lines) + "\n")


@dataclass(frozen=True)
class OracleReport:
    """Outcome of comparing the closed-form propagator with the dense oracle."""

    dim: int
    trials: int
    seed: int
    times: tuple[float, ...]
    comparisons: int
    max_deviation: float

    @property
    def passed(self) -> bool:
        return self.max_deviation <= ORACLE_CHECK_BOUND


def _random_joint_state(rng: np.random.Generator, dim: int) -> QubitFieldState:
    # Top two excited amplitudes are zeroed so the closed form's
    # truncation guard is satisfied exactly.
    raw = rng.standard_normal(2 * dim) + 1j * rng.standard_normal(2 * dim)
    raw[dim - 2 : dim] = 0.0
    raw /= np.linalg.norm(raw)
    return QubitFieldState(raw[:dim], raw[dim:])


def oracle_check(
    dim: int = ORACLE_CHECK_DIM,
    trials: int = ORACLE_CHECK_TRIALS,
    seed: int = ORACLE_CHECK_SEED,
    times: tuple[float, ...] = ORACLE_CHECK_TIMES,
    g: float = 1.0,
) -> OracleReport:
    """Evolve seeded random joint states with both propagators and report
    the worst vector-norm deviation."""
    if dim < 3 or dim > 128:
        raise ConfigInvalid(f"oracle check dim must be in [3, 128], got {dim}")
    if trials < 0:
        raise ConfigInvalid(f"trials must be >= 0, got {trials}")
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        state = _random_joint_state(rng, dim)
        for t in times:
            params = TpjcParams(g=g, t=t / g)
            a = evolve_closed_form(state, params)
            b = evolve_oracle(state, params)
            delta = np.concatenate([a.e_amps - b.e_amps, a.g_amps - b.g_amps])
            worst = max(worst, float(np.linalg.norm(delta)))
    return OracleReport(
        dim=dim,
        trials=trials,
        seed=seed,
        times=tuple(float(t) for t in times),
        comparisons=trials * len(times),
        max_deviation=worst,
    )


def emit_oracle_report(report: OracleReport, path: str | Path) -> None:
    data = {
        "dim": report.dim,
        "trials": report.trials,
        "seed": report.seed,
        "times": list(report.times),
        "comparisons": report.comparisons,
        "max_deviation": report.max_deviation,
        "passed": report.passed,
    }
    _write_text(path, _json_value(data) + "\n")


# ---------------------------------------------------------------------------
# top-level run


def run_experiment(config: ExperimentConfig, out_dir: str | Path) -> tuple[ProtocolResult, list[Path]]:
    """Execute the configured protocol and write the requested files."""
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise IoFailure(f"cannot create output directory {out}: {exc}") from exc

    warnings = WarningLog()
    dim = config.resolved_dim()
    psi0 = make_coherent(config.alpha, dim, config.tolerances)
    result = run_protocol(
        psi0,
        config.m,
        config.mode,
        g=config.g,
        tol=config.tolerances,
        warnings=warnings,
    )
    result = replace(
        result,
        mandel_q_predicted=mandel_q_coherent_predict(config.alpha, config.m, config.mode),
    )

    written: list[Path] = []
    result_path = out / "result.json"
    emit_json(result, result_path)
    written.append(result_path)

    for output in config.outputs:
        path = out / _OUTPUT_FILES[output]
        if output == "fock_dist":
            emit_distribution_csv(result, path)
        elif output == "fidelity_series":
            emit_fidelity_csv(result, path)
        elif output == "mandel_q":
            _write_text(
                path,
                _json_value(
                    {
                        "mandel_q_final": result.mandel_q_final,
                        "mandel_q_predicted": result.mandel_q_predicted,
                    }
                )
                + "\n",
            )
        elif output == "mean_photon":
            _write_text(
                path,
                _json_value(
                    {
                        "mean_photon_initial": result.mean_photon_initial,
                        "mean_photon_final": result.mean_photon_final,
                    }
                )
                + "\n",
            )
        elif output == "approx_error_table":
            emit_approx_table_csv(approx_error_table(APPROX_TABLE_MAX_J), path)
        elif output == "oracle_check":
            emit_oracle_report(oracle_check(), path)
        written.append(path)
    return result, written


def run(config_path: str | Path, out_dir: str | Path = ".") -> tuple[ProtocolResult, list[Path]]:
    """Load, validate, and execute a config file."""
    return run_experiment(load_config(config_path), out_dir)
