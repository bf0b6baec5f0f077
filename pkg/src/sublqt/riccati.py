"""Continuous-time algebraic Riccati equations by Newton-Kleinman iteration.

Solves ``A'P + PA - P B Rbar^{-1} B'P + Qbar = 0`` for the stabilizing
``P > 0`` using only the Lyapunov solver and definiteness tests from
:mod:`sublqt.matrixcore`.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import matrixcore as mc
from .errors import (
    ConvergenceError,
    DimensionError,
    IndefiniteIterateError,
    ResonantSpectrumError,
    StabilizationError,
)

NK_STEP_RTOL = 1e-12
NK_MAX_ITER = 200
RESIDUAL_RTOL = 1e-9
BASS_RETRIES = 10


@dataclass(frozen=True, eq=False)
class AreProblem:
    a: np.ndarray
    b: np.ndarray
    r_bar: np.ndarray
    q_bar: np.ndarray

    def __post_init__(self):
        a = mc.as_matrix(self.a, "a")
        b = mc.as_matrix(self.b, "b")
        r_bar = mc.check_symmetric(self.r_bar, "r_bar")
        q_bar = mc.check_symmetric(self.q_bar, "q_bar")
        n, m = b.shape
        if a.shape != (n, n):
            raise DimensionError(f"a has shape {a.shape}, expected ({n}, {n}) to match b")
        if r_bar.shape != (m, m):
            raise DimensionError(f"r_bar has shape {r_bar.shape}, expected ({m}, {m})")
        if q_bar.shape != (n, n):
            raise DimensionError(f"q_bar has shape {q_bar.shape}, expected ({n}, {n})")
        if not mc.is_positive_definite(r_bar):
            raise ValueError("r_bar must be positive definite")
        if mc.min_eigenvalue(q_bar) < -mc.PD_PIVOT_RTOL * (1.0 + mc.max_norm(q_bar)):
            raise ValueError("q_bar must be positive semidefinite")
        for name, val in (("a", a), ("b", b), ("r_bar", r_bar), ("q_bar", q_bar)):
            object.__setattr__(self, name, val)


@dataclass(frozen=True, eq=False)
class AreSolution:
    p: np.ndarray
    residual_norm: float
    iterations: int


def bass_initial_gain(a, b) -> np.ndarray:
    """Return ``K0`` with ``a + b @ K0`` Hurwitz.

    A Hurwitz ``a`` gets the zero gain. Otherwise, with
    ``beta = ||a||_F + 1``, solve ``(a + beta I) Z + Z (a + beta I)' = 2 b b'``
    and take ``K0 = -b' Z^{-1}``; ``beta`` doubles on each failed attempt.
    """
    a = mc.as_matrix(a, "a")
    b = mc.as_matrix(b, "b")
    n, m = b.shape
    if a.shape != (n, n):
        raise DimensionError(f"a has shape {a.shape}, expected ({n}, {n}) to match b")
    if mc.is_hurwitz(a):
        return np.zeros((m, n))

    beta = np.linalg.norm(a) + 1.0
    bbt = 2.0 * b @ b.T
    for _ in range(BASS_RETRIES):
        shifted = a + beta * np.eye(n)
        try:
            # solve_lyapunov handles a'X + Xa + q = 0, so pass the transposed negation.
            z = mc.solve_lyapunov(-shifted.T, bbt)
        except ResonantSpectrumError:
            z = None
        if z is not None and mc.is_positive_definite(z):
            k0 = -b.T @ np.linalg.inv(z)
            if mc.is_hurwitz(a + b @ k0):
                return k0
        beta *= 2.0
    raise StabilizationError("could not find a stabilizing initial gain; is (a, b) stabilizable?")


def are_residual(p, a, b, r_bar, q_bar) -> np.ndarray:
    return a.T @ p + p @ a - p @ b @ np.linalg.solve(r_bar, b.T @ p) + q_bar


def solve_are(prob: AreProblem, k0: np.ndarray | None = None) -> AreSolution:
    """Stabilizing solution by Newton-Kleinman iteration from a Bass gain.

    Iterates ``P_k = lyap(a + b K_k, q_bar + K_k' r_bar K_k)``,
    ``K_{k+1} = -r_bar^{-1} b' P_k`` until successive iterates agree to
    ``NK_STEP_RTOL``; the residual bound is checked afterward.
    """
    a, b, r_bar, q_bar = prob.a, prob.b, prob.r_bar, prob.q_bar
    k = bass_initial_gain(a, b) if k0 is None else mc.as_matrix(k0, "k0")

    p_prev = None
    for it in range(1, NK_MAX_ITER + 1):
        try:
            p = mc.solve_lyapunov(a + b @ k, q_bar + k.T @ r_bar @ k)
        except ResonantSpectrumError as exc:
            raise ConvergenceError(f"iterate {it} lost stability: {exc}") from exc
        if not mc.is_positive_definite(p):
            raise IndefiniteIterateError(f"Newton-Kleinman iterate {it} is not positive definite")
        k = -np.linalg.solve(r_bar, b.T @ p)
        if p_prev is not None and mc.max_norm(p - p_prev) <= NK_STEP_RTOL * (1.0 + mc.max_norm(p_prev)):
            break
        p_prev = p
    else:
        raise ConvergenceError(f"Newton-Kleinman did not converge in {NK_MAX_ITER} iterations")

    residual = mc.max_norm(are_residual(p, a, b, r_bar, q_bar))
    if residual > RESIDUAL_RTOL * (1.0 + mc.max_norm(q_bar)):
        raise ConvergenceError(f"iterates stagnated with ARE residual {residual:.3e}")
    if not mc.is_hurwitz(a + b @ k):
        raise ConvergenceError("converged solution is not stabilizing")
    return AreSolution(p, residual, it)


def riccati_inequality_residual(p, a, b, r, q, coeff: float, lambda_q: float) -> np.ndarray:
    """``a'p + pa + coeff * p b r^{-1} b' p + lambda_q * q``.

    ``coeff`` is ``c^2 lam^2 - 2 c lam`` for the eigenvalue of interest; the
    inequality holds strictly when the negation is positive definite.
    """
    p = mc.check_symmetric(p, "p")
    a, b = mc.as_matrix(a, "a"), mc.as_matrix(b, "b")
    r, q = mc.as_matrix(r, "r"), mc.as_matrix(q, "q")
    n, m = b.shape
    if p.shape != (n, n) or a.shape != (n, n) or q.shape != (n, n) or r.shape != (m, m):
        raise DimensionError("p, a, q must be n x n and r m x m for b of shape n x m")
    m_out = a.T @ p + p @ a + coeff * p @ b @ np.linalg.solve(r, b.T @ p) + lambda_q * q
    return 0.5 * (m_out + m_out.T)


def riccati_inequality_holds(*args, **kwargs) -> bool:
    return mc.is_positive_definite(-riccati_inequality_residual(*args, **kwargs))
