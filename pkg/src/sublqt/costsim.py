"""Networked closed loop, exact quadratic costs, and RK4 simulation.

Cost oracles work in error coordinates ``e = x - 1 kron x_r``; the simulator
works in the original leader/follower coordinates and evaluates the control
law and the cost integrand from the adjacency and pinning gains directly, so
the two routes check each other.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from . import matrixcore as mc
from .design import AgentModel, CostSpec
from .errors import DimensionError, DivergenceError, InfiniteCostError
from .graph import GammaSpectrum, NetworkSpec, gamma_matrix

DEFAULT_T_FINAL = 30.0
DEFAULT_DT = 1e-3


@dataclass(frozen=True, eq=False)
class ClosedLoop:
    a_cl: np.ndarray
    q_cl: np.ndarray
    n: int
    n_followers: int
    agent: AgentModel
    k: np.ndarray
    q: np.ndarray
    r: np.ndarray


def build_closed_loop(agent: AgentModel, network: NetworkSpec, k, cost: CostSpec) -> ClosedLoop:
    """``e' = (I kron A + Gamma kron BK) e`` with weight ``Gamma kron Q + Gamma^2 kron K'RK``."""
    k = mc.as_matrix(k, "K")
    if k.shape != (agent.m, agent.n):
        raise DimensionError(f"K has shape {k.shape}, expected ({agent.m}, {agent.n})")
    gamma = gamma_matrix(network)
    n_f = network.n_followers
    a_cl = np.kron(np.eye(n_f), agent.a) + np.kron(gamma, agent.b @ k)
    q_cl = np.kron(gamma, cost.q) + np.kron(gamma @ gamma, k.T @ cost.r @ k)
    q_cl = 0.5 * (q_cl + q_cl.T)
    return ClosedLoop(a_cl, q_cl, agent.n, n_f, agent, k, cost.q, cost.r)


def cost_matrix(a_cl, q_cl) -> np.ndarray:
    """``X`` with ``J(e0) = e0' X e0``; requires ``a_cl`` Hurwitz."""
    if not mc.is_hurwitz(a_cl):
        raise InfiniteCostError("closed loop is not Hurwitz; the cost is infinite")
    return mc.solve_lyapunov(a_cl, q_cl)


def exact_cost(cl: ClosedLoop, e0) -> float:
    e0 = np.asarray(e0, dtype=float).reshape(-1)
    if e0.size != cl.a_cl.shape[0]:
        raise DimensionError(f"e0 has length {e0.size}, expected {cl.a_cl.shape[0]}")
    x = cost_matrix(cl.a_cl, cl.q_cl)
    return float(e0 @ x @ e0)


def mode_decompose(cl: ClosedLoop, spectrum: GammaSpectrum, e0) -> np.ndarray:
    """Per-mode costs ``J_i`` after the change of coordinates ``(U' kron I) e``."""
    e0 = np.asarray(e0, dtype=float).reshape(-1)
    if e0.size != cl.a_cl.shape[0]:
        raise DimensionError(f"e0 has length {e0.size}, expected {cl.a_cl.shape[0]}")
    a, b, k = cl.agent.a, cl.agent.b, cl.k
    ebar = (np.kron(spectrum.diagonalizer.T, np.eye(cl.n)) @ e0).reshape(cl.n_followers, cl.n)
    costs = np.empty(cl.n_followers)
    for i, lam in enumerate(spectrum.all_eigenvalues):
        weight = lam * cl.q + lam * lam * k.T @ cl.r @ k
        x_i = cost_matrix(a + lam * b @ k, 0.5 * (weight + weight.T))
        costs[i] = ebar[i] @ x_i @ ebar[i]
    return costs


def error_state(x, xr, n: int) -> np.ndarray:
    """Stacked ``x - 1_N kron x_r``."""
    x = np.asarray(x, dtype=float).reshape(-1)
    xr = np.asarray(xr, dtype=float).reshape(-1)
    if xr.size != n or x.size % n:
        raise DimensionError(f"states must have length multiple of n = {n}")
    return x - np.tile(xr, x.size // n)


def rk4(f: Callable[[float, np.ndarray], np.ndarray], y0, t0: float, dt: float, steps: int) -> tuple[np.ndarray, np.ndarray]:
    """Classical fixed-step fourth-order Runge-Kutta.

    Returns ``(times, ys)`` with ``steps + 1`` samples. Raises
    :class:`DivergenceError` on the first non-finite state.
    """
    y = np.array(y0, dtype=float)
    times = t0 + dt * np.arange(steps + 1)
    ys = np.empty((steps + 1, y.size))
    ys[0] = y
    # Overflow is reported as DivergenceError below, so numpy's warning is noise.
    with np.errstate(over="ignore", invalid="ignore"):
        for i in range(steps):
            t = times[i]
            k1 = f(t, y)
            k2 = f(t + 0.5 * dt, y + 0.5 * dt * k1)
            k3 = f(t + 0.5 * dt, y + 0.5 * dt * k2)
            k4 = f(t + dt, y + dt * k3)
            y = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            if not np.all(np.isfinite(y)):
                raise DivergenceError(float(times[i + 1]))
            ys[i + 1] = y
    return times, ys


def control_inputs(network: NetworkSpec, k, x, xr) -> np.ndarray:
    """``u_i = K sum_j a_ij (x_i - x_j) + K g_i (x_i - x_r)`` for each follower.

    ``x`` has shape ``(..., N, n)`` and ``xr`` shape ``(..., n)``; returns
    shape ``(..., N, m)``.
    """
    adj, g = network.adjacency, network.pinning_gains
    x = np.asarray(x, dtype=float)
    xr = np.asarray(xr, dtype=float)
    neighbour_sum = adj.sum(axis=1)[:, None] * x - np.einsum("ij,...jn->...in", adj, x)
    pin = g[:, None] * (x - xr[..., None, :])
    return (neighbour_sum + pin) @ np.asarray(k, dtype=float).T


def cost_integrand(network: NetworkSpec, cost: CostSpec, x, xr, u) -> np.ndarray:
    """Running cost: neighbour disagreement, leader tracking, and input terms."""
    adj, g = network.adjacency, network.pinning_gains
    q, r = cost.q, cost.r
    diff = x[..., :, None, :] - x[..., None, :, :]
    pair = np.einsum("ij,...ijn,nm,...ijm->...", adj, diff, q, diff)
    track = x - xr[..., None, :]
    pinned = np.einsum("i,...in,nm,...im->...", g, track, q, track)
    effort = np.einsum("...im,mk,...ik->...", u, r, u)
    return 0.5 * pair + pinned + effort


@dataclass(frozen=True, eq=False)
class Trajectory:
    times: np.ndarray
    states: np.ndarray
    running_cost: np.ndarray
    n: int
    n_followers: int

    @property
    def leader(self) -> np.ndarray:
        return self.states[:, : self.n]

    @property
    def followers(self) -> np.ndarray:
        """Shape ``(T, N, n)``."""
        return self.states[:, self.n :].reshape(len(self.times), self.n_followers, self.n)

    def tracking_errors(self) -> np.ndarray:
        """``||x_i(t) - x_r(t)||`` with shape ``(T, N)``."""
        return np.linalg.norm(self.followers - self.leader[:, None, :], axis=2)

    def error_states(self) -> np.ndarray:
        """Stacked error vectors ``e(t)``, shape ``(T, nN)``."""
        return (self.followers - self.leader[:, None, :]).reshape(len(self.times), -1)


def joint_system(agent: AgentModel, network: NetworkSpec, k, cost: CostSpec) -> tuple[np.ndarray, np.ndarray]:
    """Linear drift ``M`` and symmetric cost weight ``W`` of the stacked state
    ``z = (x_r, x_1, ..., x_N)``: ``z' = M z`` and integrand ``z' W z``.

    Both are read off :func:`control_inputs` and :func:`cost_integrand` by
    probing with basis vectors, so they inherit the componentwise definitions.
    """
    n, n_f = agent.n, network.n_followers
    dim = n * (n_f + 1)

    def split(z):
        return z[..., n:].reshape(*z.shape[:-1], n_f, n), z[..., :n]

    basis = np.eye(dim)
    x, xr = split(basis)
    u = control_inputs(network, k, x, xr)
    drift = np.concatenate([xr @ agent.a.T, (x @ agent.a.T + u @ agent.b.T).reshape(dim, -1)], axis=1).T

    pairs = basis[:, None, :] + basis[None, :, :]
    xp, xrp = split(pairs)
    w_pair = cost_integrand(network, cost, xp, xrp, control_inputs(network, k, xp, xrp))
    w_diag = cost_integrand(network, cost, x, xr, u)
    weight = 0.5 * (w_pair - w_diag[:, None] - w_diag[None, :])
    return drift, 0.5 * (weight + weight.T)


def simulate(
    agent: AgentModel,
    network: NetworkSpec,
    k,
    x0,
    xr0,
    cost: CostSpec,
    t_final: float = DEFAULT_T_FINAL,
    dt: float = DEFAULT_DT,
) -> Trajectory:
    """Integrate leader and followers under the diffusive control law.

    The running cost is carried as an extra state, so RK4 applies Simpson's
    rule to the integrand on the same grid.
    """
    if not dt > 0 or not t_final >= dt:
        raise ValueError("need dt > 0 and t_final >= dt")
    n, n_f = agent.n, network.n_followers
    k = mc.as_matrix(k, "K")
    if k.shape != (agent.m, n):
        raise DimensionError(f"K has shape {k.shape}, expected ({agent.m}, {n})")
    xr0 = np.asarray(xr0, dtype=float).reshape(-1)
    x0 = np.asarray(x0, dtype=float).reshape(-1)
    if xr0.size != n or x0.size != n * n_f:
        raise DimensionError(f"expected leader state of length {n} and follower states of length {n * n_f}")

    drift, weight = joint_system(agent, network, k, cost)

    def rhs(_t, y):
        z = y[:-1]
        return np.append(drift @ z, z @ weight @ z)

    steps = int(round(t_final / dt))
    y0 = np.concatenate([xr0, x0, [0.0]])
    times, ys = rk4(rhs, y0, 0.0, dt, steps)
    return Trajectory(times, ys[:, :-1], ys[:, -1], n, n_f)


def consensus_reached(traj: Trajectory, tol: float) -> bool:
    """Terminal tracking error within ``tol`` and no larger than at mid-horizon."""
    errors = traj.tracking_errors().max(axis=1)
    t_half = 0.5 * traj.times[-1]
    mid = int(np.argmin(np.abs(traj.times - t_half)))
    return bool(errors[-1] <= tol and errors[-1] <= errors[mid])


def write_trajectory_csv(traj: Trajectory, path) -> None:
    header = ["t"] + [f"xr_{j + 1}" for j in range(traj.n)]
    header += [f"x{i + 1}_{j + 1}" for i in range(traj.n_followers) for j in range(traj.n)]
    header.append("running_cost")
    table = np.column_stack([traj.times, traj.states, traj.running_cost])
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows([[f"{v:.15g}" for v in row] for row in table])


def read_trajectory_csv(path) -> Trajectory:
    with Path(path).open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        data = np.array([[float(v) for v in row] for row in reader])
    n = sum(1 for h in header if h.startswith("xr_"))
    n_f = (len(header) - 2 - n) // n
    return Trajectory(data[:, 0], data[:, 1:-1], data[:, -1], n, n_f)
