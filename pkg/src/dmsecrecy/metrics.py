"""
Achievable rates and secrecy rate of the AN-aided DM link.

The transmit signal is ``s = beta1 sqrt(Ps) v x + alpha beta2 sqrt(Ps) P z``
with ``|v| = 1`` and ``alpha^2 tr(P P^H) = 1``. Receivers along ``theta``
see ``y = h(theta)^H s + n`` with ``n ~ CN(0, sigma^2)``.

SNR is ``Ps / sigma^2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .array import ArrayConfig, Scenario, steering_vector

__all__ = [
    "PowerProfile",
    "AnProjection",
    "normalize_precoder",
    "an_power_at",
    "rate_at",
    "secrecy_rate",
    "secrecy_rate_ratio_form",
    "ObjectiveCoefficients",
    "objective_coefficients",
    "anlnr",
    "cslnr",
]


@dataclass(frozen=True)
class PowerProfile:
    """Transmit power, power-allocation factors and receiver noise variance.

    Parameters
    ----------
    total_power : float
        Total transmit power ``Ps``.
    beta1, beta2 : float
        Amplitude allocation to the confidential signal and to AN, with
        ``beta1**2 + beta2**2 == 1``.
    noise_var : float
        Noise variance ``sigma^2`` shared by every receiver.
    """

    total_power: float
    beta1: float
    beta2: float
    noise_var: float = 1.0

    def __post_init__(self):
        if not self.total_power > 0:
            raise ValueError(f"total_power must be positive, got {self.total_power!r}")
        if not 0.0 < self.beta1 <= 1.0:
            raise ValueError(f"beta1 must lie in (0, 1], got {self.beta1!r}")
        if not 0.0 <= self.beta2 < 1.0:
            raise ValueError(f"beta2 must lie in [0, 1), got {self.beta2!r}")
        if abs(self.beta1**2 + self.beta2**2 - 1.0) > 1e-12:
            raise ValueError("beta1**2 + beta2**2 must equal 1")
        if not self.noise_var > 0:
            raise ValueError(f"noise_var must be positive, got {self.noise_var!r}")

    @classmethod
    def from_snr_db(cls, snr_db, beta1_sq=0.9, noise_var=1.0):
        """Profile with ``Ps = noise_var * 10**(snr_db / 10)``."""
        beta1_sq = float(beta1_sq)
        return cls(
            total_power=noise_var * 10.0 ** (snr_db / 10.0),
            beta1=np.sqrt(beta1_sq),
            beta2=np.sqrt(max(1.0 - beta1_sq, 0.0)),
            noise_var=noise_var,
        )

    @property
    def snr(self) -> float:
        return self.total_power / self.noise_var

    @property
    def snr_db(self) -> float:
        return 10.0 * np.log10(self.snr)

    @property
    def has_an(self) -> bool:
        return self.beta2 > 0.0


@dataclass(frozen=True)
class AnProjection:
    """AN projection matrix ``P`` (``N x (N-1)``) with its normalizer ``alpha``.

    Build instances with :meth:`from_matrix` so that ``alpha`` always
    satisfies ``alpha^2 tr(P P^H) = 1``.
    """

    matrix: np.ndarray
    alpha: float

    @classmethod
    def from_matrix(cls, matrix) -> "AnProjection":
        P = np.array(matrix, dtype=complex)
        if P.ndim != 2 or P.shape[1] != P.shape[0] - 1:
            raise ValueError(f"AN projection must be N x (N-1), got shape {P.shape}")
        energy = np.vdot(P, P).real
        if not energy > 0:
            raise ValueError("AN projection matrix must be non-zero")
        return cls(P, 1.0 / np.sqrt(energy))

    @property
    def num_elements(self) -> int:
        return self.matrix.shape[0]

    @property
    def normalized(self) -> np.ndarray:
        """``alpha * P``, the matrix with unit Frobenius norm."""
        return self.alpha * self.matrix


def normalize_precoder(v) -> np.ndarray:
    v = np.asarray(v, dtype=complex).ravel()
    norm = np.linalg.norm(v)
    if not norm > 0:
        raise ValueError("precoder must be non-zero")
    return v / norm


def _as_matrix(an):
    return an.matrix if isinstance(an, AnProjection) else np.asarray(an, dtype=complex)


def an_power_at(array: ArrayConfig, theta: float, an) -> float:
    """Un-scaled AN leakage ``h^H P P^H h`` toward ``theta``.

    ``an`` is an :class:`AnProjection` or a raw ``N x (N-1)`` matrix. The
    ``alpha^2`` factor is not applied.
    """
    P = _as_matrix(an)
    if P.ndim != 2 or P.shape[0] != array.num_elements:
        raise ValueError(
            f"AN projection has {P.shape[0] if P.ndim else 0} rows, array has {array.num_elements}"
        )
    g = steering_vector(array, theta).conj() @ P
    return float(np.vdot(g, g).real)


def _sinr(h, v, an, power):
    signal = power.beta1**2 * power.total_power * abs(np.vdot(h, v)) ** 2
    interference = power.noise_var
    if power.has_an:
        g = h.conj() @ an.matrix
        interference += an.alpha**2 * power.beta2**2 * power.total_power * np.vdot(g, g).real
    return signal / interference


def rate_at(array: ArrayConfig, theta: float, v, an: AnProjection, power: PowerProfile) -> float:
    """Achievable rate in bits/s/Hz of a receiver along ``theta``."""
    v = np.asarray(v, dtype=complex)
    if v.shape != (array.num_elements,):
        raise ValueError(f"precoder must have shape ({array.num_elements},), got {v.shape}")
    return float(np.log2(1.0 + _sinr(steering_vector(array, theta), v, an, power)))


def secrecy_rate(
    scenario: Scenario, v, an: AnProjection, power: PowerProfile, clamp: bool = True
) -> float:
    """``max(0, R(theta_d) - R(theta_e))``; pass ``clamp=False`` for the raw difference."""
    diff = rate_at(scenario.array, scenario.theta_d, v, an, power) - rate_at(
        scenario.array, scenario.theta_e, v, an, power
    )
    return max(0.0, diff) if clamp else diff


@dataclass
class ObjectiveCoefficients:
    """Coefficients of the secrecy-rate objective for one fixed variable.

    With the AN fixed, ``A_d``, ``A_e`` and ``B`` are set and the unclamped
    secrecy rate in ``v`` is ``log2(v^H (H_d + A_d I) v / v^H (H_e + A_e I) v * B)``.
    With the precoder fixed, ``B_d``, ``B_e``, ``C_d`` and ``C_e`` are set and
    the rate in ``P`` is ``log2(tr(P^H B_d P) / tr(P^H B_e P) * tr(P^H C_e P) / tr(P^H C_d P))``.
    """

    A_d: Optional[float] = None
    A_e: Optional[float] = None
    B: Optional[float] = None
    B_d: Optional[np.ndarray] = None
    B_e: Optional[np.ndarray] = None
    C_d: Optional[np.ndarray] = None
    C_e: Optional[np.ndarray] = None


def objective_coefficients(
    scenario: Scenario,
    power: PowerProfile,
    precoder=None,
    an: Optional[AnProjection] = None,
) -> ObjectiveCoefficients:
    """Coefficients for whichever of ``precoder`` / ``an`` is given.

    ``B`` and ``C_d``/``C_e`` need ``beta2 > 0``; they are left as ``None``
    when AN is disabled.
    """
    if precoder is None and an is None:
        raise ValueError("give at least one of precoder or an")
    N = scenario.num_elements
    b1sq, b2sq = power.beta1**2, power.beta2**2
    Ps, s2 = power.total_power, power.noise_var
    H_d, H_e = scenario.gram_d, scenario.gram_e
    I = np.eye(N)
    out = ObjectiveCoefficients()

    if an is not None:
        leak_d = an_power_at(scenario.array, scenario.theta_d, an)
        leak_e = an_power_at(scenario.array, scenario.theta_e, an)
        a2 = an.alpha**2
        out.A_d = a2 * b2sq / b1sq * leak_d + s2 / (b1sq * Ps)
        out.A_e = a2 * b2sq / b1sq * leak_e + s2 / (b1sq * Ps)
        if power.has_an:
            floor = s2 / (a2 * b2sq * Ps)
            out.B = (leak_e + floor) / (leak_d + floor)

    if precoder is not None:
        v = np.asarray(precoder, dtype=complex)
        gain_d = abs(np.vdot(scenario.h_d, v)) ** 2
        gain_e = abs(np.vdot(scenario.h_e, v)) ** 2
        out.B_d = b2sq / b1sq * H_d + (s2 / (b1sq * Ps) + gain_d) * I
        out.B_e = b2sq / b1sq * H_e + (s2 / (b1sq * Ps) + gain_e) * I
        if power.has_an:
            out.C_d = H_d + s2 / (b2sq * Ps) * I
            out.C_e = H_e + s2 / (b2sq * Ps) * I
    return out


def secrecy_rate_ratio_form(scenario: Scenario, v, an: AnProjection, power: PowerProfile) -> float:
    """Unclamped secrecy rate through the ``A_d, A_e, B`` ratio form."""
    c = objective_coefficients(scenario, power, an=an)
    v = np.asarray(v, dtype=complex)
    num = abs(np.vdot(scenario.h_d, v)) ** 2 + c.A_d * np.vdot(v, v).real
    den = abs(np.vdot(scenario.h_e, v)) ** 2 + c.A_e * np.vdot(v, v).real
    B = 1.0 if c.B is None else c.B
    return float(np.log2(num / den * B))


def anlnr(scenario: Scenario, an: AnProjection, power: PowerProfile) -> float:
    """AN-to-leakage-plus-noise ratio of an AN projection."""
    k = an.alpha**2 * power.beta2**2 * power.total_power
    return k * an_power_at(scenario.array, scenario.theta_e, an) / (
        k * an_power_at(scenario.array, scenario.theta_d, an) + power.noise_var
    )


def cslnr(scenario: Scenario, v, power: PowerProfile) -> float:
    """Confidential signal-to-leakage-plus-noise ratio of a precoder."""
    k = power.beta1**2 * power.total_power
    v = np.asarray(v, dtype=complex)
    return k * abs(np.vdot(scenario.h_d, v)) ** 2 / (k * abs(np.vdot(scenario.h_e, v)) ** 2 + power.noise_var)
