import numpy as np
import pytest

from dmsecrecy.array import Scenario
from dmsecrecy.metrics import PowerProfile

ACCEPTANCE_RESULTS = []


@pytest.fixture
def ref_scenario():
    return Scenario.from_degrees(8, 45, 70)


@pytest.fixture
def power10():
    return PowerProfile.from_snr_db(10.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_unit(rng, n, size=None):
    shape = (n,) if size is None else (size, n)
    z = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    return z / np.linalg.norm(z, axis=-1, keepdims=True)


def random_psd(rng, n, shift=0.0):
    X = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return X @ X.conj().T / n + shift * np.eye(n)


def same_up_to_phase(u, v, tol=1e-9):
    return abs(abs(np.vdot(u, v)) - np.linalg.norm(u) * np.linalg.norm(v)) < tol


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
