"""
Uniform linear array channel model.

The array has ``N`` elements centred on the array origin, so the phase of
element ``n`` (1-based) along direction ``theta`` is::

    psi(n) = -(n - (N + 1) / 2) * (d / lambda) * cos(theta)

measured in cycles. Angles are radians everywhere in the library.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["ArrayConfig", "Scenario", "phase_shift", "steering_vector", "channel_gram"]


@dataclass(frozen=True)
class ArrayConfig:
    """Geometry of an ``N``-element uniformly spaced linear array.

    Parameters
    ----------
    num_elements : int
        Number of antennas ``N`` (at least 2).
    spacing_over_wavelength : float
        Element spacing in wavelengths, ``d / lambda``.
    """

    num_elements: int
    spacing_over_wavelength: float = 0.5

    def __post_init__(self):
        if int(self.num_elements) != self.num_elements or self.num_elements < 2:
            raise ValueError(f"num_elements must be an integer >= 2, got {self.num_elements!r}")
        if not self.spacing_over_wavelength > 0:
            raise ValueError(
                f"spacing_over_wavelength must be positive, got {self.spacing_over_wavelength!r}"
            )


def _check_angle(name, theta):
    if not 0.0 < theta < np.pi:
        raise ValueError(f"{name} must lie strictly inside (0, pi) radians, got {theta!r}")


@dataclass(frozen=True)
class Scenario:
    """Array plus the desired (Bob) and eavesdropper (Eve) directions."""

    array: ArrayConfig
    theta_d: float
    theta_e: float

    def __post_init__(self):
        _check_angle("theta_d", self.theta_d)
        _check_angle("theta_e", self.theta_e)

    @classmethod
    def from_degrees(cls, num_elements, theta_d_deg, theta_e_deg, spacing_over_wavelength=0.5):
        return cls(
            ArrayConfig(num_elements, spacing_over_wavelength),
            float(np.deg2rad(theta_d_deg)),
            float(np.deg2rad(theta_e_deg)),
        )

    @property
    def num_elements(self) -> int:
        return self.array.num_elements

    @property
    def h_d(self) -> np.ndarray:
        return steering_vector(self.array, self.theta_d)

    @property
    def h_e(self) -> np.ndarray:
        return steering_vector(self.array, self.theta_e)

    @property
    def gram_d(self) -> np.ndarray:
        return channel_gram(self.array, self.theta_d)

    @property
    def gram_e(self) -> np.ndarray:
        return channel_gram(self.array, self.theta_e)


def phase_shift(n: int, array: ArrayConfig, theta: float) -> float:
    """Phase (in cycles) of element ``n`` (1-based) toward ``theta``."""
    N = array.num_elements
    if int(n) != n or not 1 <= n <= N:
        raise ValueError(f"element index must be in 1..{N}, got {n!r}")
    return -(n - (N + 1) / 2) * array.spacing_over_wavelength * np.cos(theta)


def _phases(array, theta):
    n = np.arange(1, array.num_elements + 1)
    return -(n - (array.num_elements + 1) / 2) * array.spacing_over_wavelength * np.cos(theta)


def steering_vector(array: ArrayConfig, theta: float) -> np.ndarray:
    """Unit-norm steering vector ``h(theta)``, shape ``(N,)``."""
    return np.exp(2j * np.pi * _phases(array, theta)) / np.sqrt(array.num_elements)


def channel_gram(array: ArrayConfig, theta: float) -> np.ndarray:
    """Rank-one Gram matrix ``h(theta) h(theta)^H``."""
    h = steering_vector(array, theta)
    return np.outer(h, h.conj())
