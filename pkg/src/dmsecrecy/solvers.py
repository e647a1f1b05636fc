"""
Eigen machinery for generalized Rayleigh quotients.

``largest_generalized_eigvec`` maximizes ``v^H K v / v^H M v``. ``gpi_solve``
maximizes the product of two such quotients,

    f(w) = (w^H A w / w^H B w) * (w^H C w / w^H D w),

with the fixed-point iteration obtained from the stationarity condition of
``log f``::

    w <- normalize( (B / b(w) + D / d(w))^{-1} (A / a(w) + C / c(w)) w )

where ``a(w) = w^H A w`` and so on. When all four operators have the form
``I_r (x) X`` only the ``N x N`` blocks are stored and every product is
done block-wise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

__all__ = [
    "NumericalError",
    "fix_phase",
    "largest_generalized_eigvec",
    "kron_block_apply",
    "RatioProductProblem",
    "GpiReport",
    "gpi_solve",
]

MAX_CONDITION = 1e12
MAX_HALVINGS = 10


class NumericalError(ArithmeticError):
    """A solver met a singular or indefinite matrix."""


def fix_phase(v: np.ndarray) -> np.ndarray:
    """Rotate ``v`` so its largest-modulus entry (lowest index on ties) is real, >= 0."""
    v = np.asarray(v, dtype=complex)
    mags = np.abs(v)
    k = int(np.flatnonzero(mags == mags.max())[0])
    if mags[k] == 0:
        return v.copy()
    out = v * (abs(v[k]) / v[k])
    out[k] = abs(v[k])
    return out


def _hermitian(X):
    return 0.5 * (X + X.conj().T)


def largest_generalized_eigvec(K, M) -> np.ndarray:
    """Unit vector maximizing ``v^H K v / v^H M v``.

    Parameters
    ----------
    K : (N, N) array_like
        Hermitian positive semi-definite numerator.
    M : (N, N) array_like
        Hermitian positive definite denominator.

    Returns
    -------
    ndarray, shape (N,)
        Unit-norm maximizer with :func:`fix_phase` applied.

    Raises
    ------
    NumericalError
        If ``M`` is not positive definite or its condition number exceeds 1e12.
    """
    K = _hermitian(np.asarray(K, dtype=complex))
    M = _hermitian(np.asarray(M, dtype=complex))
    if K.shape != M.shape or K.ndim != 2 or K.shape[0] != K.shape[1]:
        raise ValueError(f"K and M must be square and equal-sized, got {K.shape} and {M.shape}")
    m_eigs = np.linalg.eigvalsh(M)
    if not m_eigs[0] > 0 or m_eigs[-1] / m_eigs[0] > MAX_CONDITION:
        raise NumericalError(
            f"denominator matrix is singular or ill-conditioned "
            f"(eigenvalues in [{m_eigs[0]:.3e}, {m_eigs[-1]:.3e}])"
        )
    n = K.shape[0]
    _, vecs = sla.eigh(K, M, subset_by_index=[n - 1, n - 1])
    v = vecs[:, 0]
    return fix_phase(v / np.linalg.norm(v))


def kron_block_apply(block, repeat: int, w) -> np.ndarray:
    """Compute ``(I_repeat (x) block) @ w`` without forming the Kronecker product."""
    block = np.asarray(block)
    w = np.asarray(w)
    n = block.shape[1]
    if w.ndim != 1 or w.shape[0] != n * repeat:
        raise ValueError(f"w must have length {n * repeat}, got shape {w.shape}")
    # vec() stacks columns, so row i of the reshape is the i-th block of w
    return (w.reshape(repeat, n) @ block.T).ravel()


@dataclass(frozen=True)
class RatioProductProblem:
    """Operators of ``(w^H A w / w^H B w) * (w^H C w / w^H D w)``.

    ``num_1 = A``, ``den_1 = B``, ``num_2 = C``, ``den_2 = D``. With
    ``repeat > 1`` the stored matrices are ``N x N`` blocks and the actual
    operators are ``I_repeat (x) block`` acting on vectors of length
    ``N * repeat``.
    """

    num_1: np.ndarray
    den_1: np.ndarray
    num_2: np.ndarray
    den_2: np.ndarray
    repeat: int = 1

    def __post_init__(self):
        mats = [self.num_1, self.den_1, self.num_2, self.den_2]
        shape = np.shape(mats[0])
        if len(shape) != 2 or shape[0] != shape[1]:
            raise ValueError(f"operators must be square, got {shape}")
        for X in mats:
            if np.shape(X) != shape:
                raise ValueError("all four operators must have the same shape")
            if not np.allclose(X, np.conj(np.transpose(X)), atol=1e-10, rtol=0):
                raise ValueError("operators must be Hermitian")
        if self.repeat < 1:
            raise ValueError("repeat must be >= 1")
        for X in (self.den_1, self.den_2):
            if not np.linalg.eigvalsh(X)[0] > 0:
                raise NumericalError("denominator operators must be positive definite")

    @property
    def structure(self) -> str:
        return "dense" if self.repeat == 1 else "kron_block"

    @property
    def dim(self) -> int:
        return np.shape(self.num_1)[0] * self.repeat

    def dense(self) -> "RatioProductProblem":
        """Same problem with the Kronecker operators materialized."""
        if self.repeat == 1:
            return self
        eye = np.eye(self.repeat)
        return RatioProductProblem(
            *(np.kron(eye, X) for X in (self.num_1, self.den_1, self.num_2, self.den_2))
        )

    def _apply(self, X, w):
        return X @ w if self.repeat == 1 else kron_block_apply(X, self.repeat, w)

    def forms(self, w):
        """Quadratic forms ``(a, b, c, d)`` and the products ``A w, B w, C w, D w``."""
        prods = [self._apply(X, w) for X in (self.num_1, self.den_1, self.num_2, self.den_2)]
        return [np.vdot(w, p).real for p in prods], prods

    def objective(self, w) -> float:
        (a, b, c, d), _ = self.forms(np.asarray(w, dtype=complex))
        return float(a / b * c / d)

    def _solve(self, M, rhs):
        n = M.shape[0]
        R = rhs if self.repeat == 1 else rhs.reshape(self.repeat, n).T
        try:
            factor = sla.cho_factor(M)
        except np.linalg.LinAlgError as exc:
            raise NumericalError("denominator combination is not positive definite") from exc
        X = sla.cho_solve(factor, R)
        return X if self.repeat == 1 else X.T.ravel()


@dataclass
class GpiReport:
    """Result of :func:`gpi_solve`."""

    solution: np.ndarray
    objective: float
    iterations: int
    converged: bool
    residual: float


def _align(w_new, w_ref):
    """Rotate ``w_new`` to the global phase closest to ``w_ref``."""
    ip = np.vdot(w_new, w_ref)
    return w_new if ip == 0 else w_new * (ip / abs(ip))


def _stationarity_residual(problem, w):
    (a, b, c, d), (Aw, Bw, Cw, Dw) = problem.forms(w)
    lhs = Aw / a + Cw / c
    rhs = Bw / b + Dw / d
    mu = np.linalg.norm(lhs) / np.linalg.norm(rhs)
    return float(np.linalg.norm(lhs - mu * rhs))


def gpi_solve(problem: RatioProductProblem, w0, tol: float = 1e-8, max_iter: int = 500) -> GpiReport:
    """Maximize the ratio product of ``problem`` starting from ``w0``.

    Each fixed-point step is accepted only if the objective does not drop.
    A rejected step is halved (convex combination with the current iterate)
    up to ten times; if every trial fails the current iterate is returned
    with ``converged=False``.

    Parameters
    ----------
    problem : RatioProductProblem
    w0 : array_like
        Starting vector; it is normalized before use.
    tol : float
        Stop once the phase-aligned iterate moves by less than ``tol``.
    max_iter : int
        Maximum number of fixed-point steps.
    """
    w = np.asarray(w0, dtype=complex).ravel()
    if w.shape[0] != problem.dim:
        raise ValueError(f"w0 must have length {problem.dim}, got {w.shape[0]}")
    norm = np.linalg.norm(w)
    if not norm > 0:
        raise ValueError("w0 must be non-zero")
    w = w / norm

    (a, b, c, d), prods = problem.forms(w)
    f = a / b * c / d
    converged = False
    it = 0
    while it < max_iter:
        it += 1
        Aw, Bw, Cw, Dw = prods
        M = problem.den_1 / b + problem.den_2 / d
        step = problem._solve(_hermitian(M), Aw / a + Cw / c)
        step_norm = np.linalg.norm(step)
        if not np.isfinite(step_norm) or step_norm == 0:
            raise NumericalError("fixed-point update produced a degenerate vector")
        target = _align(step / step_norm, w)

        accepted = False
        t = 1.0
        for _ in range(MAX_HALVINGS + 1):
            cand = w + t * (target - w)
            cand = cand / np.linalg.norm(cand)
            forms, cand_prods = problem.forms(cand)
            f_cand = forms[0] / forms[1] * forms[2] / forms[3]
            if f_cand >= f * (1.0 - 1e-14):
                accepted = True
                break
            t *= 0.5
        if not accepted:
            break

        moved = np.linalg.norm(cand - w)
        w, f, prods = cand, f_cand, cand_prods
        a, b, c, d = forms
        if moved < tol:
            converged = True
            break

    w = fix_phase(w)
    return GpiReport(
        solution=w,
        objective=float(problem.objective(w)),
        iterations=it,
        converged=converged,
        residual=_stationarity_residual(problem, w),
    )
