"""
Beamforming strategies for AN-aided directional modulation.

* ``solve_max_sr``: alternating maximization of the secrecy rate. The AN
  projection is updated with :func:`~dmsecrecy.solvers.gpi_solve` for a fixed
  precoder, then the precoder is the top generalized eigenvector for the
  fixed AN. Both block updates never lower the secrecy rate.
* ``solve_leakage``: closed-form leakage pair (ANLNR-optimal AN, CSLNR-optimal
  precoder). It is also the default starting point of ``solve_max_sr``.
* ``solve_nsp``: matched-filter precoder with AN confined to the null space
  of the desired channel.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Union

import numpy as np
import scipy.linalg as sla

from .array import Scenario
from .metrics import (
    AnProjection,
    PowerProfile,
    normalize_precoder,
    objective_coefficients,
    secrecy_rate,
)
from .solvers import RatioProductProblem, fix_phase, gpi_solve, largest_generalized_eigvec

__all__ = [
    "BeamformerSolution",
    "ConvergenceTrace",
    "init_precoder_leakage",
    "init_an_leakage",
    "random_solution",
    "optimize_an_fixed_precoder",
    "optimize_precoder_fixed_an",
    "solve_max_sr",
    "solve_nsp",
    "solve_leakage",
]

logger = logging.getLogger(__name__)

METHODS = ("max_sr", "leakage", "nsp")


@dataclass
class ConvergenceTrace:
    """Per-iteration record of :func:`solve_max_sr`.

    Entry 0 of ``sr_per_iteration`` is the initial point (iteration 1);
    ``inner_gpi_iterations[i]`` is the GPI step count spent to reach entry
    ``i + 1``.
    """

    sr_per_iteration: List[float] = field(default_factory=list)
    inner_gpi_iterations: List[int] = field(default_factory=list)
    init_kind: str = "leakage"
    seed: Optional[int] = None
    terminated_by: str = "tolerance"
    degenerate: bool = False

    @property
    def iterations(self) -> int:
        return len(self.sr_per_iteration)


@dataclass
class BeamformerSolution:
    precoder: np.ndarray
    an: AnProjection
    secrecy_rate: float
    method: str
    trace: Optional[ConvergenceTrace] = None


def _require_an(power):
    if not power.has_an:
        raise ValueError("this step needs beta2 > 0 (AN enabled)")


def init_precoder_leakage(scenario: Scenario, power: PowerProfile) -> np.ndarray:
    """CSLNR-maximizing precoder."""
    N = scenario.num_elements
    M = scenario.gram_e + power.noise_var / (power.beta1**2 * power.total_power) * np.eye(N)
    return largest_generalized_eigvec(scenario.gram_d, M)


def init_an_leakage(scenario: Scenario, power: PowerProfile) -> AnProjection:
    """ANLNR-maximizing AN projection.

    The Kronecker-structured operator has its top eigenvalue repeated
    ``N - 1`` times; every column is set to the block-level top eigenvector
    so the result is deterministic.
    """
    _require_an(power)
    N = scenario.num_elements
    M = scenario.gram_d + power.noise_var / (power.beta2**2 * power.total_power) * np.eye(N)
    u = largest_generalized_eigvec(scenario.gram_e, M)
    P = np.tile(u[:, None] / np.sqrt(N - 1), (1, N - 1))
    return AnProjection.from_matrix(P)


def random_solution(scenario: Scenario, seed: int):
    """Standard complex Gaussian precoder and AN projection, normalized."""
    rng = np.random.default_rng(seed)
    N = scenario.num_elements
    v = rng.standard_normal(N) + 1j * rng.standard_normal(N)
    P = rng.standard_normal((N, N - 1)) + 1j * rng.standard_normal((N, N - 1))
    return normalize_precoder(v), AnProjection.from_matrix(P)


def an_problem(scenario: Scenario, power: PowerProfile, v) -> RatioProductProblem:
    """Ratio-product problem in ``vec(P)`` for a fixed precoder."""
    _require_an(power)
    c = objective_coefficients(scenario, power, precoder=v)
    return RatioProductProblem(c.B_d, c.B_e, c.C_e, c.C_d, repeat=scenario.num_elements - 1)


def optimize_an_fixed_precoder(
    scenario: Scenario,
    power: PowerProfile,
    v,
    an_init: AnProjection,
    tol: float = 1e-8,
    max_iter: int = 500,
    dense: bool = False,
):
    """GPI update of the AN projection for a fixed precoder.

    Returns the new :class:`AnProjection` and the GPI report.
    """
    problem = an_problem(scenario, power, v)
    if dense:
        problem = problem.dense()
    N = scenario.num_elements
    w0 = an_init.matrix.reshape(-1, order="F")
    report = gpi_solve(problem, w0, tol=tol, max_iter=max_iter)
    P = report.solution.reshape((N, N - 1), order="F")
    return AnProjection.from_matrix(P), report


def optimize_precoder_fixed_an(scenario: Scenario, power: PowerProfile, an: AnProjection) -> np.ndarray:
    """Secrecy-rate-optimal precoder for a fixed AN projection."""
    c = objective_coefficients(scenario, power, an=an)
    I = np.eye(scenario.num_elements)
    return largest_generalized_eigvec(scenario.gram_d + c.A_d * I, scenario.gram_e + c.A_e * I)


def _initial_point(scenario, power, init, seed):
    if init == "leakage":
        if power.has_an:
            an = init_an_leakage(scenario, power)
        else:
            an = _null_space_an(scenario)
        return init_precoder_leakage(scenario, power), an
    if init == "random":
        return random_solution(scenario, seed)
    raise ValueError(f"init must be 'leakage' or 'random', got {init!r}")


def solve_max_sr(
    scenario: Scenario,
    power: PowerProfile,
    init: str = "leakage",
    seed: Optional[int] = None,
    delta: float = 1e-4,
    max_outer: int = 50,
    gpi_tol: float = 1e-8,
    gpi_max_iter: int = 500,
):
    """Alternating secrecy-rate maximization.

    Parameters
    ----------
    scenario : Scenario
    power : PowerProfile
    init : {'leakage', 'random'}
        Starting point; ``'random'`` uses :func:`random_solution` with ``seed``.
    delta : float
        Stop when the secrecy rate changes by less than ``delta`` between
        consecutive outer iterations.
    max_outer : int
        Cap on outer iterations, counting the initial point as iteration 1.

    Returns
    -------
    solution : BeamformerSolution
        Best iterate found.
    trace : ConvergenceTrace
    """
    if not delta > 0:
        raise ValueError("delta must be positive")
    if init == "random" and seed is None:
        raise ValueError("random init needs a seed")
    trace = ConvergenceTrace(init_kind=init, seed=seed if init == "random" else None)
    v, an = _initial_point(scenario, power, init, seed)

    if np.isclose(scenario.theta_d, scenario.theta_e, rtol=0, atol=1e-12):
        logger.warning("desired and eavesdropper directions coincide; secrecy rate is zero")
        sr = secrecy_rate(scenario, v, an, power)
        trace.sr_per_iteration = [sr, sr]
        trace.inner_gpi_iterations = [0]
        trace.degenerate = True
        return BeamformerSolution(v, an, sr, "max_sr", trace), trace

    raw = secrecy_rate(scenario, v, an, power, clamp=False)
    trace.sr_per_iteration.append(max(0.0, raw))
    best = (raw, v, an)
    trace.terminated_by = "max_iter"
    for _ in range(max_outer - 1):
        if power.has_an:
            an, report = optimize_an_fixed_precoder(
                scenario, power, v, an, tol=gpi_tol, max_iter=gpi_max_iter
            )
            trace.inner_gpi_iterations.append(report.iterations)
        else:
            trace.inner_gpi_iterations.append(0)
        v = optimize_precoder_fixed_an(scenario, power, an)
        new_raw = secrecy_rate(scenario, v, an, power, clamp=False)
        trace.sr_per_iteration.append(max(0.0, new_raw))
        if new_raw >= best[0]:
            best = (new_raw, v, an)
        if abs(new_raw - raw) < delta:
            trace.terminated_by = "tolerance"
            break
        raw = new_raw

    _, v, an = best
    sol = BeamformerSolution(v, an, secrecy_rate(scenario, v, an, power), "max_sr", trace)
    return sol, trace


def _null_space_an(scenario):
    basis = sla.null_space(scenario.h_d.conj()[None, :])
    return AnProjection.from_matrix(basis)


def solve_nsp(scenario: Scenario, power: PowerProfile) -> BeamformerSolution:
    """Matched-filter precoder, AN in the null space of ``h_d^H``."""
    v = fix_phase(scenario.h_d)
    an = _null_space_an(scenario)
    return BeamformerSolution(v, an, secrecy_rate(scenario, v, an, power), "nsp")


def solve_leakage(scenario: Scenario, power: PowerProfile) -> BeamformerSolution:
    """Leakage-based pair used without further iteration."""
    v = init_precoder_leakage(scenario, power)
    an = init_an_leakage(scenario, power)
    return BeamformerSolution(v, an, secrecy_rate(scenario, v, an, power), "leakage")


def solve(method: str, scenario: Scenario, power: PowerProfile, **kwargs) -> BeamformerSolution:
    """Dispatch on a method tag; extra keywords go to :func:`solve_max_sr`."""
    if method == "max_sr":
        return solve_max_sr(scenario, power, **kwargs)[0]
    if method == "leakage":
        return solve_leakage(scenario, power)
    if method == "nsp":
        return solve_nsp(scenario, power)
    raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")
