"""Follower communication graphs, leader pinning, and the spectrum of L + G."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import matrixcore as mc
from .errors import NetworkError


@dataclass(frozen=True, eq=False)
class NetworkSpec:
    """Simple undirected follower graph plus leader pinning gains.

    Validated on construction: symmetric 0/1 adjacency with empty diagonal,
    nonnegative pinning gains with at least one positive, connected graph.
    """

    adjacency: np.ndarray
    pinning_gains: np.ndarray

    def __post_init__(self):
        adj = np.array(self.adjacency, dtype=float)
        gains = np.array(self.pinning_gains, dtype=float).reshape(-1)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1] or adj.shape[0] == 0:
            raise NetworkError(f"adjacency must be a non-empty square matrix, got shape {adj.shape}")
        n = adj.shape[0]
        if not np.all((adj == 0.0) | (adj == 1.0)):
            raise NetworkError("adjacency entries must be 0 or 1 (unweighted graph)")
        if not np.array_equal(adj, adj.T):
            raise NetworkError("adjacency must be symmetric (undirected graph)")
        if np.any(np.diag(adj) != 0.0):
            raise NetworkError("adjacency must have a zero diagonal (no self-loops)")
        if gains.shape != (n,):
            raise NetworkError(f"pinning_gains must have length {n}, got {gains.size}")
        if not np.all(np.isfinite(gains)) or np.any(gains < 0.0):
            raise NetworkError("pinning_gains must be finite and nonnegative")
        if not np.any(gains > 0.0):
            raise NetworkError("at least one follower must be pinned to the leader (some gain > 0)")
        if not _is_connected(adj):
            raise NetworkError("follower graph is not connected")
        adj.flags.writeable = False
        gains.flags.writeable = False
        object.__setattr__(self, "adjacency", adj)
        object.__setattr__(self, "pinning_gains", gains)

    @property
    def n_followers(self) -> int:
        return self.adjacency.shape[0]

    @classmethod
    def from_edges(
        cls, n_followers: int, edges: Iterable[Sequence[int]], pinning_gains, one_based: bool = True
    ) -> "NetworkSpec":
        """Build from an edge list; node labels are 1..N unless ``one_based`` is False."""
        if n_followers < 1:
            raise NetworkError("n_followers must be positive")
        adj = np.zeros((n_followers, n_followers))
        offset = 1 if one_based else 0
        for edge in edges:
            if len(edge) != 2:
                raise NetworkError(f"edge {edge!r} must be a pair of node labels")
            i, j = int(edge[0]) - offset, int(edge[1]) - offset
            if not (0 <= i < n_followers and 0 <= j < n_followers):
                raise NetworkError(f"edge {tuple(edge)} refers to a node outside 1..{n_followers}")
            if i == j:
                raise NetworkError(f"edge {tuple(edge)} is a self-loop")
            adj[i, j] = adj[j, i] = 1.0
        return cls(adj, pinning_gains)

    def edges(self, one_based: bool = True) -> list[tuple[int, int]]:
        offset = 1 if one_based else 0
        rows, cols = np.nonzero(np.triu(self.adjacency))
        return [(int(i) + offset, int(j) + offset) for i, j in zip(rows, cols)]


def _is_connected(adj: np.ndarray) -> bool:
    n = adj.shape[0]
    seen = {0}
    queue = deque([0])
    while queue:
        i = queue.popleft()
        for j in np.flatnonzero(adj[i]):
            if j not in seen:
                seen.add(int(j))
                queue.append(int(j))
    return len(seen) == n


def cycle_graph(n: int) -> np.ndarray:
    adj = np.zeros((n, n))
    for i in range(n):
        j = (i + 1) % n
        if i != j:
            adj[i, j] = adj[j, i] = 1.0
    return adj


def path_graph(n: int) -> np.ndarray:
    adj = np.zeros((n, n))
    for i in range(n - 1):
        adj[i, i + 1] = adj[i + 1, i] = 1.0
    return adj


def laplacian(spec: NetworkSpec) -> np.ndarray:
    adj = spec.adjacency
    return np.diag(adj.sum(axis=1)) - adj


@dataclass(frozen=True, eq=False)
class GammaSpectrum:
    gamma: np.ndarray
    all_eigenvalues: np.ndarray
    diagonalizer: np.ndarray

    @property
    def lambda_min(self) -> float:
        return float(self.all_eigenvalues[0])

    @property
    def lambda_max(self) -> float:
        return float(self.all_eigenvalues[-1])

    @property
    def n_modes(self) -> int:
        return self.all_eigenvalues.size


def gamma_matrix(spec: NetworkSpec) -> np.ndarray:
    return laplacian(spec) + np.diag(spec.pinning_gains)


def gamma_spectrum(spec: NetworkSpec) -> GammaSpectrum:
    gamma = gamma_matrix(spec)
    eig = mc.sym_eigen(gamma)
    if eig.eigenvalues[0] <= 0.0 or not mc.is_positive_definite(gamma):
        # Connectivity plus one positive gain makes L + G positive definite.
        raise ArithmeticError(
            f"L + G is not positive definite (smallest eigenvalue {eig.eigenvalues[0]:.3e})"
        )
    return GammaSpectrum(gamma, eig.eigenvalues, eig.eigenvectors)
