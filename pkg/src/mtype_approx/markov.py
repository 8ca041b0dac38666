"""Row-wise M-type quantization of Markov transition matrices."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .costs import evaluate, quantize
from .errors import (
    DimensionMismatch,
    InfeasibleSupport,
    InvalidInput,
    NotIrreducible,
    NumericalError,
    SupportViolation,
)
from .types import CostKind, TargetDistribution, validate_target

STATIONARY_RESIDUAL_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class MarkovModel:
    """Row-stochastic ``n x n`` transition matrix."""

    rows: np.ndarray

    def __post_init__(self):
        try:
            rows = np.array(self.rows, dtype=np.float64)
        except (TypeError, ValueError) as exc:
            raise InvalidInput(f"not a numeric matrix: {exc}") from None
        if rows.ndim != 2 or rows.shape[0] != rows.shape[1] or rows.shape[0] == 0:
            raise InvalidInput(f"transition matrix must be square and non-empty, got shape {rows.shape}")
        for row in rows:
            validate_target(row)
        rows.setflags(write=False)
        object.__setattr__(self, "rows", rows)

    @property
    def n(self) -> int:
        return int(self.rows.shape[0])

    def row(self, i: int) -> TargetDistribution:
        return TargetDistribution(self.rows[i])

    def edges(self) -> np.ndarray:
        return self.rows > 0


@dataclass(frozen=True, eq=False)
class QuantizedMarkov:
    """Integer transition counts, each row summing to ``M``."""

    M: int
    count_rows: np.ndarray

    def __post_init__(self):
        counts = np.asarray(self.count_rows, dtype=np.int64)
        if counts.ndim != 2 or counts.shape[0] != counts.shape[1]:
            raise InvalidInput("count matrix must be square")
        if np.any(counts < 0) or np.any(counts.sum(axis=1) != self.M):
            raise InvalidInput(f"every count row must be nonnegative and sum to M={self.M}")
        counts.setflags(write=False)
        object.__setattr__(self, "count_rows", counts)

    @property
    def probs(self) -> np.ndarray:
        return self.count_rows / self.M

    def edges(self) -> np.ndarray:
        return self.count_rows > 0


def _reachable(adj: np.ndarray, start: int) -> np.ndarray:
    seen = np.zeros(adj.shape[0], dtype=bool)
    seen[start] = True
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for v in np.flatnonzero(adj[u] & ~seen):
            seen[v] = True
            queue.append(int(v))
    return seen


def is_irreducible(adj: np.ndarray) -> bool:
    """Strong connectivity of a boolean adjacency matrix (forward and reverse sweep from node 0)."""
    adj = np.asarray(adj, dtype=bool)
    return bool(_reachable(adj, 0).all() and _reachable(adj.T, 0).all())


def stationary_distribution(T: MarkovModel) -> TargetDistribution:
    """Invariant distribution ``mu = mu T`` of an irreducible chain.

    Solves ``(T^T - I) mu = 0`` with one balance equation replaced by
    ``sum(mu) = 1``.
    """
    if not is_irreducible(T.edges()):
        raise NotIrreducible("transition graph is not strongly connected")
    n = T.n
    A = T.rows.T - np.eye(n)
    A[-1, :] = 1.0
    b = np.zeros(n)
    b[-1] = 1.0
    mu = np.linalg.solve(A, b)
    mu = np.clip(mu, 0.0, None)
    mu /= mu.sum()
    residual = float(np.abs(mu @ T.rows - mu).sum())
    if residual > STATIONARY_RESIDUAL_TOL:
        raise NumericalError(f"stationary residual {residual:.3e} exceeds {STATIONARY_RESIDUAL_TOL}")
    return TargetDistribution(mu)


def quantize_markov(T: MarkovModel, M: int) -> QuantizedMarkov:
    """Quantize every row for ``D(t_i||p_i)``; the transition graph is preserved."""
    need = int((T.rows > 0).sum(axis=1).max())
    if M < need:
        raise InfeasibleSupport(f"a row has {need} positive entries but M={M}")
    counts = np.vstack([quantize(T.row(i), M, CostKind.KL_TARGET_FIRST).counts for i in range(T.n)])
    return QuantizedMarkov(M, counts)


def graph_preserved(T: MarkovModel, Q: QuantizedMarkov) -> bool:
    return bool(np.array_equal(T.edges(), Q.edges()))


def divergence_rate(T: MarkovModel, Q: QuantizedMarkov) -> float:
    """``sum_i mu_i D(t_i || p_i)`` with ``mu`` the stationary distribution of ``T``."""
    if Q.count_rows.shape != T.rows.shape:
        raise DimensionMismatch(f"shapes differ: {T.rows.shape} vs {Q.count_rows.shape}")
    if np.any(T.edges() & ~Q.edges()):
        raise SupportViolation("quantized chain drops a transition of the source chain")
    mu = stationary_distribution(T).probs
    P = Q.probs
    return float(sum(mu[i] * evaluate(CostKind.KL_TARGET_FIRST, T.rows[i], P[i]) for i in range(T.n)))
