"""
Monte-Carlo QPSK link simulation for BER versus receive direction.

Symbols are Gray-mapped QPSK with unit energy. The receiver along ``theta``
is genie-aided: it knows the composite gain ``beta1 sqrt(Ps) h^H v`` and
equalizes by it before slicing. AN and noise are redrawn for every symbol.

Seeding contract: the random stream for angle index ``k`` of a sweep run
with ``seed`` is ``numpy.random.default_rng(SeedSequence([seed, k]))``. Per
angle the draws happen in this order: bits ``(K, 2)`` integers, AN
``(K, N - 1)`` complex, noise ``(K,)`` complex.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .array import ArrayConfig, Scenario, steering_vector
from .metrics import AnProjection, PowerProfile

__all__ = [
    "LinkConfig",
    "BerCurve",
    "qpsk_modulate",
    "qpsk_demodulate",
    "transmit_symbol",
    "transmit",
    "receive_and_detect",
    "angle_rng",
    "ber_at",
    "ber_sweep",
]

ZERO_GAIN = 1e-15


@dataclass(frozen=True)
class LinkConfig:
    num_symbols: int
    seed: int
    angle_grid: Sequence[float]

    def __post_init__(self):
        if int(self.num_symbols) != self.num_symbols or self.num_symbols < 1:
            raise ValueError(f"num_symbols must be a positive integer, got {self.num_symbols!r}")


@dataclass
class BerCurve:
    angles: np.ndarray
    ber: np.ndarray
    method: str = ""


def _crandn(rng, shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def qpsk_modulate(bits) -> np.ndarray:
    """Gray QPSK: bit 0 sets the sign of I, bit 1 the sign of Q (0 -> +)."""
    b = np.asarray(bits).reshape(-1, 2)
    return ((1 - 2 * b[:, 0]) + 1j * (1 - 2 * b[:, 1])) / np.sqrt(2.0)


def qpsk_demodulate(y) -> np.ndarray:
    y = np.atleast_1d(y)
    return np.stack([y.real < 0, y.imag < 0], axis=-1).astype(np.int8)


def transmit(bits, v, an: AnProjection, power: PowerProfile, rng) -> np.ndarray:
    """Transmit vectors for a block of symbols, shape ``(K, N)``."""
    x = qpsk_modulate(bits)
    s = power.beta1 * np.sqrt(power.total_power) * np.outer(x, v)
    if power.has_an:
        z = _crandn(rng, (x.shape[0], an.matrix.shape[1]))
        s = s + an.alpha * power.beta2 * np.sqrt(power.total_power) * (z @ an.matrix.T)
    return s


def transmit_symbol(bits, v, an: AnProjection, power: PowerProfile, rng) -> np.ndarray:
    """Transmit vector ``s`` for one 2-bit symbol."""
    return transmit(np.asarray(bits).reshape(1, 2), v, an, power, rng)[0]


def receive_and_detect(
    s, array: ArrayConfig, theta: float, v, power: PowerProfile, rng
) -> np.ndarray:
    """Bits detected along ``theta`` from transmit vector(s) ``s``.

    Accepts one vector ``(N,)`` (returns ``(2,)``) or a block ``(K, N)``
    (returns ``(K, 2)``). When the composite gain is below 1e-15 the raw
    observation is sliced, which yields uniformly random bits.
    """
    s = np.asarray(s, dtype=complex)
    single = s.ndim == 1
    S = s[None, :] if single else s
    h = steering_vector(array, theta)
    y = S @ h.conj() + np.sqrt(power.noise_var) * _crandn(rng, S.shape[0])
    gain = power.beta1 * np.sqrt(power.total_power) * np.vdot(h, v)
    if abs(gain) >= ZERO_GAIN:
        y = y / gain
    bits = qpsk_demodulate(y)
    return bits[0] if single else bits


def angle_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(index)]))


def ber_at(theta, v, an, array, power, num_symbols, rng) -> float:
    """Bit error rate along one direction."""
    bits = rng.integers(0, 2, size=(num_symbols, 2), dtype=np.int8)
    s = transmit(bits, v, an, power, rng)
    detected = receive_and_detect(s, array, theta, v, power, rng)
    return float(np.count_nonzero(detected != bits)) / bits.size


def ber_sweep(solution, scenario: Scenario, power: PowerProfile, cfg: LinkConfig) -> BerCurve:
    """BER of ``solution`` over ``cfg.angle_grid`` (radians)."""
    angles = np.asarray(cfg.angle_grid, dtype=float)
    ber = np.array(
        [
            ber_at(theta, solution.precoder, solution.an, scenario.array, power,
                   cfg.num_symbols, angle_rng(cfg.seed, k))
            for k, theta in enumerate(angles)
        ]
    )
    return BerCurve(angles, ber, getattr(solution, "method", ""))
