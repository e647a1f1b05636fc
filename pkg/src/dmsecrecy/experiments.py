"""
Experiment drivers: secrecy rate versus SNR, convergence of the alternating
solver, and BER versus direction.

Every driver returns a list of :class:`ExperimentRow`. Rows are sorted and
serialized with :func:`write_rows`; floats are written with ``repr`` so a
rerun with the same config produces the same bytes.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import os
import re
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

import numpy as np

from .array import Scenario
from .beamformers import METHODS, BeamformerSolution, solve, solve_max_sr
from .linksim import LinkConfig, ber_sweep
from .metrics import AnProjection, PowerProfile, rate_at
from .solvers import NumericalError

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "ExperimentRow",
    "load_config",
    "run_sr_vs_snr",
    "run_convergence",
    "convergence_rows",
    "run_ber_sweep",
    "solve_summary",
    "solution_to_dict",
    "solution_from_dict",
    "write_rows",
    "CSV_HEADER",
]

logger = logging.getLogger(__name__)

CSV_HEADER = ("method", "sweep_var", "sweep_value", "metric", "value", "seed")
SEED_ENV = "DM_SECRECY_SEED"


class ConfigError(ValueError):
    """Invalid or unreadable experiment configuration.

    ``key`` names the offending config entry when there is one.
    """

    def __init__(self, message, key=None):
        super().__init__(message)
        self.key = key


@dataclass
class ExperimentConfig:
    """Parameters of every experiment, as read from JSON.

    Angles are degrees and power allocations are linear ``beta**2`` values.
    ``angle_grid_deg`` is either an explicit list or a
    ``{"start", "stop", "step"}`` mapping with ``stop`` included.
    """

    num_elements: int = 8
    spacing_over_wavelength: float = 0.5
    theta_d_deg: float = 45.0
    theta_e_deg: float = 70.0
    beta1_sq: float = 0.9
    beta2_sq: float = 0.1
    snr_db: List[float] = field(default_factory=lambda: [0.0, 5.0, 10.0, 15.0])
    noise_var: float = 1.0
    delta: float = 1e-4
    max_outer: int = 50
    init: str = "leakage"
    seed: Optional[int] = None
    num_random_seeds: int = 20
    convergence_snr_db: float = 10.0
    num_symbols: int = 20000
    ber_snr_db: float = 10.0
    angle_grid_deg: Union[List[float], Dict[str, float]] = field(
        default_factory=lambda: {"start": 0.0, "stop": 180.0, "step": 1.0}
    )

    def __post_init__(self):
        if int(self.num_elements) != self.num_elements or self.num_elements < 2:
            raise ConfigError("num_elements must be an integer >= 2", "num_elements")
        if self.beta1_sq <= 0 or self.beta2_sq < 0 or abs(self.beta1_sq + self.beta2_sq - 1) > 1e-9:
            raise ConfigError("beta1_sq + beta2_sq must equal 1 with beta1_sq > 0", "beta1_sq")
        if isinstance(self.snr_db, (int, float)):
            self.snr_db = [float(self.snr_db)]
        if not self.snr_db:
            raise ConfigError("snr_db must be a non-empty list", "snr_db")
        if not all(np.isfinite(self.snr_db)):
            raise ConfigError("snr_db entries must be finite", "snr_db")
        for name in ("theta_d_deg", "theta_e_deg"):
            if not 0 < getattr(self, name) < 180:
                raise ConfigError(f"{name} must lie strictly inside (0, 180)", name)
        if not self.spacing_over_wavelength > 0:
            raise ConfigError("spacing_over_wavelength must be positive", "spacing_over_wavelength")
        if not self.noise_var > 0:
            raise ConfigError("noise_var must be positive", "noise_var")
        if not self.delta > 0:
            raise ConfigError("delta must be positive", "delta")
        if self.max_outer < 2:
            raise ConfigError("max_outer must be >= 2", "max_outer")
        if self.init not in ("leakage", "random"):
            raise ConfigError("init must be 'leakage' or 'random'", "init")
        if self.num_random_seeds < 0:
            raise ConfigError("num_random_seeds must be >= 0", "num_random_seeds")
        if self.num_symbols < 1:
            raise ConfigError("num_symbols must be positive", "num_symbols")
        self.angles_deg()

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown config key {unknown[0]!r}", unknown[0])
        try:
            return cls(**data)
        except TypeError as exc:
            raise ConfigError(f"bad value type: {exc}") from exc

    def scenario(self) -> Scenario:
        return Scenario.from_degrees(
            self.num_elements, self.theta_d_deg, self.theta_e_deg, self.spacing_over_wavelength
        )

    def power(self, snr_db: float) -> PowerProfile:
        return PowerProfile.from_snr_db(snr_db, self.beta1_sq, self.noise_var)

    def angles_deg(self) -> np.ndarray:
        grid = self.angle_grid_deg
        if isinstance(grid, dict):
            try:
                start, stop, step = (float(grid[k]) for k in ("start", "stop", "step"))
            except KeyError as exc:
                raise ConfigError(f"angle_grid_deg is missing {exc.args[0]!r}", "angle_grid_deg")
            if not step > 0 or stop < start:
                raise ConfigError("angle_grid_deg needs step > 0 and stop >= start", "angle_grid_deg")
            count = int(np.floor((stop - start) / step + 1e-9)) + 1
            angles = start + step * np.arange(count)
        else:
            angles = np.asarray(grid, dtype=float)
        # endfire directions are excluded from the open interval
        angles = angles[(angles > 0) & (angles < 180)]
        if angles.size == 0:
            raise ConfigError("angle_grid_deg has no angle inside (0, 180)", "angle_grid_deg")
        return angles


def _key_line(text, key):
    if key is None:
        return 1
    m = re.search(r'"%s"\s*:' % re.escape(key), text)
    return text.count("\n", 0, m.start()) + 1 if m else 1


def load_config(path) -> ExperimentConfig:
    """Read and validate a JSON config; errors carry ``path:line`` prefixes."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read config: {exc.strerror}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{path}:1: config must be a JSON object")
    try:
        return ExperimentConfig.from_dict(data)
    except ConfigError as exc:
        raise ConfigError(f"{path}:{_key_line(text, exc.key)}: {exc}", exc.key) from exc


def resolve_seed(config: ExperimentConfig, override: Optional[int] = None) -> int:
    """Seed precedence: explicit override, config, ``DM_SECRECY_SEED``, 0."""
    if override is not None:
        return int(override)
    if config.seed is not None:
        return int(config.seed)
    env = os.environ.get(SEED_ENV)
    if env:
        try:
            return int(env)
        except ValueError:
            raise ConfigError(f"{SEED_ENV} must be an integer, got {env!r}")
    return 0


@dataclass(frozen=True, order=True)
class ExperimentRow:
    method: str
    sweep_var: str
    sweep_value: float
    metric: str
    value: float
    seed: int


def _solve_all(config, power, seed):
    out = {}
    for method in METHODS:
        try:
            if method == "max_sr":
                out[method] = solve(
                    method, config.scenario(), power, init=config.init, seed=seed,
                    delta=config.delta, max_outer=config.max_outer,
                )
            else:
                out[method] = solve(method, config.scenario(), power)
        except (NumericalError, ValueError, np.linalg.LinAlgError) as exc:
            logger.error("%s failed at SNR %s dB: %s", method, power.snr_db, exc)
            out[method] = exc
    return out


def run_sr_vs_snr(config: ExperimentConfig, seed: Optional[int] = None, solutions=None):
    """Secrecy rate (and both link rates) of every method at every SNR.

    Pass a list as ``solutions`` to collect ``(snr_db, BeamformerSolution)``
    pairs for dumping.
    """
    seed = resolve_seed(config, seed)
    sc = config.scenario()
    rows = []
    for snr in config.snr_db:
        power = config.power(snr)
        for method, sol in _solve_all(config, power, seed).items():
            if isinstance(sol, Exception):
                rows.append(ExperimentRow(method, "snr_db", float(snr), "error", 1.0, seed))
                continue
            if solutions is not None:
                solutions.append((float(snr), sol))
            metrics = {
                "secrecy_rate": sol.secrecy_rate,
                "rate_desired": rate_at(sc.array, sc.theta_d, sol.precoder, sol.an, power),
                "rate_eve": rate_at(sc.array, sc.theta_e, sol.precoder, sol.an, power),
            }
            for name, value in metrics.items():
                rows.append(ExperimentRow(method, "snr_db", float(snr), name, float(value), seed))
    return sorted(rows)


def run_convergence(config: ExperimentConfig, seed: Optional[int] = None):
    """Traces of the alternating solver from the leakage start and random starts.

    Random starts use seeds ``seed, seed + 1, ..., seed + num_random_seeds - 1``.
    Returns a list of ``(init_kind, seed, ConvergenceTrace)``.
    """
    seed = resolve_seed(config, seed)
    sc = config.scenario()
    power = config.power(config.convergence_snr_db)
    kw = dict(delta=config.delta, max_outer=config.max_outer)
    traces = [("leakage", seed, solve_max_sr(sc, power, init="leakage", **kw)[1])]
    for k in range(config.num_random_seeds):
        s = seed + k
        traces.append(("random", s, solve_max_sr(sc, power, init="random", seed=s, **kw)[1]))
    return traces


def convergence_rows(traces) -> List[ExperimentRow]:
    rows = []
    for kind, seed, tr in traces:
        for i, sr in enumerate(tr.sr_per_iteration, start=1):
            rows.append(ExperimentRow("max_sr", "iteration", float(i), f"secrecy_rate:{kind}_init", sr, seed))
        for i, n in enumerate(tr.inner_gpi_iterations, start=2):
            rows.append(ExperimentRow("max_sr", "iteration", float(i), f"gpi_iterations:{kind}_init", float(n), seed))
        rows.append(
            ExperimentRow(
                "max_sr", "iteration", float(tr.iterations), f"iterations_to_tolerance:{kind}_init",
                float(tr.iterations if tr.terminated_by == "tolerance" else -1), seed,
            )
        )
    return sorted(rows)


def run_ber_sweep(config: ExperimentConfig, seed: Optional[int] = None, solutions=None):
    """BER versus direction for all three methods at ``ber_snr_db``."""
    seed = resolve_seed(config, seed)
    sc = config.scenario()
    power = config.power(config.ber_snr_db)
    angles = config.angles_deg()
    link = LinkConfig(config.num_symbols, seed, np.deg2rad(angles))
    rows = []
    for method, sol in _solve_all(config, power, seed).items():
        if isinstance(sol, Exception):
            rows.append(ExperimentRow(method, "snr_db", float(config.ber_snr_db), "error", 1.0, seed))
            continue
        if solutions is not None:
            solutions.append((float(config.ber_snr_db), sol))
        curve = ber_sweep(sol, sc, power, link)
        rows.extend(
            ExperimentRow(method, "angle_deg", float(a), "ber", float(b), seed)
            for a, b in zip(angles, curve.ber)
        )
    return sorted(rows)


def _interleave(a) -> List[float]:
    a = np.asarray(a, dtype=complex).ravel()  # row-major for matrices
    return np.column_stack([a.real, a.imag]).ravel().tolist()


def _deinterleave(values, shape):
    x = np.asarray(values, dtype=float).reshape(-1, 2)
    return (x[:, 0] + 1j * x[:, 1]).reshape(shape)


def solution_to_dict(sol: BeamformerSolution, snr_db: Optional[float] = None) -> dict:
    """Portable dump: complex arrays as interleaved ``(re, im)``, row-major."""
    out = {
        "method": sol.method,
        "secrecy_rate": sol.secrecy_rate,
        "precoder": _interleave(sol.precoder),
        "an_matrix": _interleave(sol.an.matrix),
        "an_shape": list(sol.an.matrix.shape),
        "alpha": sol.an.alpha,
    }
    if snr_db is not None:
        out["snr_db"] = snr_db
    return out


def solution_from_dict(data: dict) -> BeamformerSolution:
    shape = tuple(data["an_shape"])
    v = _deinterleave(data["precoder"], (shape[0],))
    an = AnProjection.from_matrix(_deinterleave(data["an_matrix"], shape))
    return BeamformerSolution(v, an, float(data["secrecy_rate"]), data["method"])


def solve_summary(config: ExperimentConfig, method: str = "max_sr", snr_db=None, seed=None) -> dict:
    """One-scenario result with rates, iteration count and the solution arrays."""
    seed = resolve_seed(config, seed)
    snr = config.snr_db[0] if snr_db is None else float(snr_db)
    sc = config.scenario()
    power = config.power(snr)
    if method == "max_sr":
        sol, trace = solve_max_sr(
            sc, power, init=config.init, seed=seed, delta=config.delta, max_outer=config.max_outer
        )
    else:
        sol, trace = solve(method, sc, power), None
    out = {
        "method": method,
        "snr_db": snr,
        "seed": seed,
        "secrecy_rate": sol.secrecy_rate,
        "rate_desired": rate_at(sc.array, sc.theta_d, sol.precoder, sol.an, power),
        "rate_eve": rate_at(sc.array, sc.theta_e, sol.precoder, sol.an, power),
        "iterations": trace.iterations if trace else 1,
        "terminated_by": trace.terminated_by if trace else "closed_form",
        "sr_per_iteration": trace.sr_per_iteration if trace else [sol.secrecy_rate],
    }
    out["solution"] = solution_to_dict(sol, snr)
    return out


def format_rows(rows: Sequence[ExperimentRow], fmt: str = "csv") -> str:
    if fmt == "json":
        return json.dumps([asdict(r) for r in rows], indent=1) + "\n"
    if fmt != "csv":
        raise ValueError(f"unknown format {fmt!r}")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in rows:
        writer.writerow([r.method, r.sweep_var, repr(r.sweep_value), r.metric, repr(r.value), r.seed])
    return buf.getvalue()


def write_rows(rows: Sequence[ExperimentRow], path, fmt: str = "csv") -> None:
    Path(path).write_text(format_rows(rows, fmt))


def read_rows(path) -> List[ExperimentRow]:
    """Parse a CSV written by :func:`write_rows`."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        return [
            ExperimentRow(r["method"], r["sweep_var"], float(r["sweep_value"]), r["metric"],
                          float(r["value"]), int(r["seed"]))
            for r in reader
        ]
