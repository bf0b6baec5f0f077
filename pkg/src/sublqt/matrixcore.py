"""Dense real matrix kernel.

Matrices are plain 2-D ``float`` numpy arrays. Everything here is a pure
function of its inputs.
"""
from __future__ import annotations

import warnings
from typing import NamedTuple

import numpy as np
import scipy.linalg as la

from .errors import DimensionError, ResonantSpectrumError, SymmetryError

SYMMETRY_RTOL = 1e-9
JACOBI_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100
PD_PIVOT_RTOL = 1e-12
RESONANCE_RTOL = 1e-12


class SymmetricEigenResult(NamedTuple):
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def as_matrix(m, name: str = "matrix") -> np.ndarray:
    """Coerce ``m`` into a 2-D float array (scalars become 1x1)."""
    arr = np.array(m, dtype=float)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    if arr.ndim != 2 or arr.size == 0:
        raise DimensionError(f"{name} must be a non-empty 2-D array, got shape {arr.shape}")
    return arr


def max_norm(m: np.ndarray) -> float:
    return float(np.max(np.abs(m))) if np.size(m) else 0.0


def _require_square(m: np.ndarray, name: str) -> None:
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {m.shape}")


def check_symmetric(m, name: str = "matrix") -> np.ndarray:
    m = as_matrix(m, name)
    _require_square(m, name)
    if max_norm(m - m.T) > SYMMETRY_RTOL * (1.0 + max_norm(m)):
        raise SymmetryError(f"{name} is not symmetric (max asymmetry {max_norm(m - m.T):.3e})")
    return m


def sym_eigen(m) -> SymmetricEigenResult:
    """Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.

    Sweeps over all off-diagonal pairs until the off-diagonal Frobenius norm
    drops below ``JACOBI_TOL * ||m||_F``. Eigenvalues are returned ascending;
    each eigenvector column is signed so its largest-magnitude entry is
    positive.
    """
    a = check_symmetric(m).copy()
    a = 0.5 * (a + a.T)
    n = a.shape[0]
    v = np.eye(n)
    target = JACOBI_TOL * np.linalg.norm(a)

    for _ in range(JACOBI_MAX_SWEEPS):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off <= target:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = a[q, q] - a[p, p]
                if abs(theta) > 1e150 * abs(apq):
                    t = apq / theta
                else:
                    tau = theta / (2.0 * apq)
                    t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.hypot(1.0, tau))
                c = 1.0 / np.hypot(1.0, t)
                s = t * c
                col_p, col_q = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p, row_q = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, q] = a[q, p] = 0.0
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    else:
        raise ArithmeticError("Jacobi sweeps did not converge")

    w = np.diag(a).copy()
    order = np.argsort(w, kind="stable")
    w, v = w[order], v[:, order]
    signs = np.sign(v[np.argmax(np.abs(v), axis=0), np.arange(n)])
    signs[signs == 0] = 1.0
    return SymmetricEigenResult(w, v * signs)


def kron(a, b) -> np.ndarray:
    return np.kron(as_matrix(a, "a"), as_matrix(b, "b"))


def solve_lyapunov(a, q) -> np.ndarray:
    """Solve ``a.T @ X + X @ a + q = 0`` for symmetric ``X``.

    The equation is vectorized as ``(I kron a.T + a.T kron I) vec(X) = -vec(q)``
    and solved by partially pivoted LU. A pivot smaller than
    ``RESONANCE_RTOL`` times the largest one means two eigenvalues of ``a``
    sum to zero, and ``ResonantSpectrumError`` is raised.
    """
    a = as_matrix(a, "a")
    _require_square(a, "a")
    q = check_symmetric(q, "q")
    n = a.shape[0]
    if q.shape != a.shape:
        raise DimensionError(f"q has shape {q.shape}, expected {a.shape}")

    eye = np.eye(n)
    op = np.kron(eye, a.T) + np.kron(a.T, eye)
    with warnings.catch_warnings():
        # Exact singularity is reported below as a resonant spectrum.
        warnings.simplefilter("ignore", la.LinAlgWarning)
        lu, piv = la.lu_factor(op, check_finite=True)
    pivots = np.abs(np.diag(lu))
    if pivots.min() <= RESONANCE_RTOL * max(1.0, pivots.max()):
        raise ResonantSpectrumError(
            "Lyapunov operator is singular: eigenvalues of a sum to zero (resonant spectrum)"
        )
    x = la.lu_solve((lu, piv), -q.reshape(-1, order="F")).reshape(n, n, order="F")
    return 0.5 * (x + x.T)


def cholesky_pivots(m) -> np.ndarray | None:
    """Diagonal pivots of an unpivoted Cholesky factorization.

    Returns ``None`` as soon as a pivot fails the positivity tolerance.
    """
    m = check_symmetric(m)
    n = m.shape[0]
    floor = PD_PIVOT_RTOL * (1.0 + max_norm(m))
    lower = np.zeros_like(m)
    pivots = np.empty(n)
    for j in range(n):
        d = m[j, j] - lower[j, :j] @ lower[j, :j]
        if not d > floor:
            return None
        pivots[j] = d
        lower[j, j] = np.sqrt(d)
        lower[j + 1:, j] = (m[j + 1:, j] - lower[j + 1:, :j] @ lower[j, :j]) / lower[j, j]
    return pivots


def is_positive_definite(m) -> bool:
    return cholesky_pivots(m) is not None


def is_hurwitz(a) -> bool:
    """Lyapunov stability test: ``a.T X + X a + I = 0`` has a solution ``X > 0``.

    A resonant spectrum (some pair of eigenvalues summing to zero) forces an
    eigenvalue onto the closed right half-plane, so it is reported as not
    Hurwitz rather than raised.
    """
    a = as_matrix(a, "a")
    _require_square(a, "a")
    try:
        x = solve_lyapunov(a, np.eye(a.shape[0]))
    except ResonantSpectrumError:
        return False
    return is_positive_definite(x)


def min_eigenvalue(m) -> float:
    return float(sym_eigen(m).eigenvalues[0])


def max_eigenvalue(m) -> float:
    return float(sym_eigen(m).eigenvalues[-1])
