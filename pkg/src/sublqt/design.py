"""Suboptimal distributed LQ tracking gain synthesis and certification.

Pipeline: spectrum of ``Gamma = L + G`` -> coupling scalar ``c`` -> one
``n x n`` Riccati equation -> local gain ``K = -c R^{-1} B' P`` -> admissible
initial-error radius -> per-mode certificate check.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import matrixcore as mc
from .errors import DimensionError, InadmissibleCouplingError
from .graph import GammaSpectrum, NetworkSpec, gamma_spectrum
from .riccati import AreProblem, AreSolution, bass_initial_gain, riccati_inequality_residual, solve_are

DEFAULT_EPSILON = 0.01


class CaseTag(str, Enum):
    CASE_A = "case_a"
    CASE_B = "case_b"


class CaseBCoefficient(str, Enum):
    """Which eigenvalues enter the case (b) Riccati coefficient.

    ``LEMMA3`` uses ``c^2 l1^2 - 2 c l1``; ``THEOREM3`` uses ``c^2 l1^2 - 2 c l2``
    (the two printed variants of the same inequality).
    """

    LEMMA3 = "lemma3"
    THEOREM3 = "theorem3"


@dataclass(frozen=True, eq=False)
class AgentModel:
    """Shared drift ``a`` (leader and followers) and follower input map ``b``."""

    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        a, b = mc.as_matrix(self.a, "A"), mc.as_matrix(self.b, "B")
        if a.shape != (b.shape[0], b.shape[0]):
            raise DimensionError(f"A has shape {a.shape}, expected ({b.shape[0]}, {b.shape[0]}) to match B")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def n(self) -> int:
        return self.a.shape[0]

    @property
    def m(self) -> int:
        return self.b.shape[1]


@dataclass(frozen=True, eq=False)
class CostSpec:
    q: np.ndarray
    r: np.ndarray
    gamma: float
    radius: float

    def __post_init__(self):
        q, r = mc.check_symmetric(self.q, "Q"), mc.check_symmetric(self.r, "R")
        if mc.min_eigenvalue(q) < -mc.PD_PIVOT_RTOL * (1.0 + mc.max_norm(q)):
            raise ValueError("Q must be positive semidefinite")
        if not mc.is_positive_definite(r):
            raise ValueError("R must be positive definite")
        if not self.gamma > 0:
            raise ValueError("gamma must be positive")
        if not self.radius > 0:
            raise ValueError("radius must be positive")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "gamma", float(self.gamma))
        object.__setattr__(self, "radius", float(self.radius))


@dataclass(frozen=True, eq=False)
class DesignRequest:
    agent: AgentModel
    network: NetworkSpec
    cost: CostSpec
    c_override: float | None = None
    epsilon: float = DEFAULT_EPSILON
    case_b_coefficient: CaseBCoefficient = CaseBCoefficient.LEMMA3

    def __post_init__(self):
        n, m = self.agent.n, self.agent.m
        if self.cost.q.shape != (n, n):
            raise DimensionError(f"Q has shape {self.cost.q.shape}, expected ({n}, {n})")
        if self.cost.r.shape != (m, m):
            raise DimensionError(f"R has shape {self.cost.r.shape}, expected ({m}, {m})")
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        object.__setattr__(self, "case_b_coefficient", CaseBCoefficient(self.case_b_coefficient))
        # Raises StabilizationError for a non-stabilizable pair.
        bass_initial_gain(self.agent.a, self.agent.b)


@dataclass(frozen=True, eq=False)
class DesignCertificate:
    c: float
    epsilon: float
    case_tag: CaseTag
    p: np.ndarray
    k: np.ndarray
    lambda_min: float
    lambda_max: float
    p_max_eigenvalue: float
    gamma: float
    requested_radius: float
    admissible_radius: float
    requested_radius_ok: bool
    case_b_coefficient: CaseBCoefficient = CaseBCoefficient.LEMMA3


def default_c(spectrum: GammaSpectrum) -> float:
    return 2.0 / (spectrum.lambda_min + spectrum.lambda_max)


def classify_c(c: float, spectrum: GammaSpectrum) -> CaseTag:
    upper = 2.0 / spectrum.lambda_max
    if not 0.0 < c < upper:
        raise InadmissibleCouplingError(f"coupling scalar c = {c} must lie in (0, {upper})")
    return CaseTag.CASE_A if c >= default_c(spectrum) else CaseTag.CASE_B


def riccati_coefficient(
    c: float,
    spectrum: GammaSpectrum,
    case: CaseTag,
    case_b_coefficient: CaseBCoefficient = CaseBCoefficient.LEMMA3,
) -> float:
    """Coefficient ``kappa`` of ``P B R^{-1} B' P`` in the design inequality."""
    lam = spectrum.all_eigenvalues
    if case is CaseTag.CASE_A:
        return c * c * lam[-1] ** 2 - 2.0 * c * lam[-1]
    if case_b_coefficient is CaseBCoefficient.THEOREM3:
        if lam.size < 2:
            raise ValueError("the theorem3 case (b) coefficient needs at least two followers")
        return c * c * lam[0] ** 2 - 2.0 * c * lam[1]
    return c * c * lam[0] ** 2 - 2.0 * c * lam[0]


def parameterized_are(agent: AgentModel, q, r, coeff: float, lambda_q: float, epsilon: float) -> AreProblem:
    """ARE ``A'P + PA - P B Rbar^{-1} B'P + Qbar = 0`` with ``Rbar = R / (-coeff)``
    and ``Qbar = lambda_q Q + epsilon I``."""
    if not coeff < 0:
        raise ValueError(f"Riccati coefficient must be negative, got {coeff}")
    r_bar = mc.as_matrix(r, "R") / (-coeff)
    q_bar = lambda_q * mc.as_matrix(q, "Q") + epsilon * np.eye(agent.n)
    return AreProblem(agent.a, agent.b, r_bar, q_bar)


def remark_are_solution(agent: AgentModel, q, r, c: float, lambda_max: float, epsilon: float) -> AreSolution:
    """``P(c, eps)``: the Riccati equation built from the largest eigenvalue only."""
    coeff = c * c * lambda_max**2 - 2.0 * c * lambda_max
    return solve_are(parameterized_are(agent, q, r, coeff, lambda_max, epsilon))


def synthesize(req: DesignRequest, spectrum: GammaSpectrum | None = None) -> DesignCertificate:
    spectrum = spectrum or gamma_spectrum(req.network)
    c = default_c(spectrum) if req.c_override is None else float(req.c_override)
    case = classify_c(c, spectrum)
    coeff = riccati_coefficient(c, spectrum, case, req.case_b_coefficient)
    sol = solve_are(parameterized_are(req.agent, req.cost.q, req.cost.r, coeff, spectrum.lambda_max, req.epsilon))
    p = sol.p
    k = -c * np.linalg.solve(req.cost.r, req.agent.b.T @ p)
    p_max = mc.max_eigenvalue(p)
    admissible = math.sqrt(req.cost.gamma / p_max)
    return DesignCertificate(
        c=c,
        epsilon=float(req.epsilon),
        case_tag=case,
        p=p,
        k=k,
        lambda_min=spectrum.lambda_min,
        lambda_max=spectrum.lambda_max,
        p_max_eigenvalue=p_max,
        gamma=req.cost.gamma,
        requested_radius=req.cost.radius,
        admissible_radius=admissible,
        requested_radius_ok=req.cost.radius < admissible,
        case_b_coefficient=req.case_b_coefficient,
    )


@dataclass(frozen=True)
class ModeCheck:
    index: int
    eigenvalue: float
    hurwitz: bool
    inequality_ok: bool

    @property
    def passed(self) -> bool:
        return self.hurwitz and self.inequality_ok


@dataclass(frozen=True)
class VerificationReport:
    modes: tuple[ModeCheck, ...]
    radius: float
    radius_ok: bool
    notes: tuple[str, ...] = field(default=())

    @property
    def modes_ok(self) -> bool:
        return all(m.passed for m in self.modes)

    @property
    def passed(self) -> bool:
        return self.modes_ok and self.radius_ok


def mode_inequality(a, b, k, p, q, r, lam: float) -> np.ndarray:
    """Per-mode Lyapunov inequality matrix for ``A + lam B K`` with ``P_i = P``."""
    a_i = a + lam * b @ k
    out = a_i.T @ p + p @ a_i + lam * q + lam * lam * k.T @ r @ k
    return 0.5 * (out + out.T)


def verify_certificate(
    cert: DesignCertificate, req: DesignRequest, spectrum: GammaSpectrum | None = None
) -> VerificationReport:
    """Check every mode for stability and the strict Lyapunov inequality, plus
    ``P < (gamma / r^2) I`` for the requested radius."""
    spectrum = spectrum or gamma_spectrum(req.network)
    a, b, q, r = req.agent.a, req.agent.b, req.cost.q, req.cost.r
    k, p = mc.as_matrix(cert.k, "K"), mc.check_symmetric(cert.p, "P")
    if k.shape != (req.agent.m, req.agent.n) or p.shape != (req.agent.n, req.agent.n):
        raise DimensionError("certificate dimensions do not match the agent model")

    modes = []
    for i, lam in enumerate(spectrum.all_eigenvalues):
        hurwitz = mc.is_hurwitz(a + lam * b @ k)
        ineq = mc.is_positive_definite(-mode_inequality(a, b, k, p, q, r, lam))
        modes.append(ModeCheck(i + 1, float(lam), hurwitz, ineq))
    bound = req.cost.gamma / req.cost.radius**2
    radius_ok = mc.is_positive_definite(bound * np.eye(req.agent.n) - p)
    return VerificationReport(tuple(modes), req.cost.radius, radius_ok)


@dataclass(frozen=True)
class InitialConditionReport:
    quadratic_form: float
    error_norm: float
    admissible_radius: float
    gamma: float

    @property
    def ok(self) -> bool:
        return self.quadratic_form < self.gamma

    @property
    def within_ball(self) -> bool:
        return self.error_norm <= self.admissible_radius

    def __bool__(self) -> bool:
        return self.ok


def check_initial_condition(cert: DesignCertificate, x0, xr0, gamma: float) -> InitialConditionReport:
    """Evaluate ``sum_i (x_i0 - x_r0)' P (x_i0 - x_r0) < gamma``.

    ``x0`` may be stacked (length ``nN``) or shaped ``(N, n)``.
    """
    p = np.asarray(cert.p, dtype=float)
    n = p.shape[0]
    xr0 = np.asarray(xr0, dtype=float).reshape(-1)
    x0 = np.asarray(x0, dtype=float).reshape(-1)
    if xr0.size != n or x0.size % n or x0.size == 0:
        raise DimensionError(f"expected leader state of length {n} and stacked follower states of length n*N")
    errors = x0.reshape(-1, n) - xr0
    form = float(np.einsum("ij,jk,ik->", errors, p, errors))
    return InitialConditionReport(form, float(np.linalg.norm(errors)), cert.admissible_radius, float(gamma))
