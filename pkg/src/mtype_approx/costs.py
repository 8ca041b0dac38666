"""Cost models for M-type approximation and the ``quantize`` entry point.

Every cost is separable, ``U(c) = sum_i f_i(c_i)`` up to constants, with convex
``f_i``; its increments ``delta_i(k) = f_i(k) - f_i(k-1)`` are therefore
non-decreasing and the greedy allocator finds a global minimum.

=====================  ======================  ==============================  ===========
kind                   f_i(x)                  delta_i(k)                      c_{i,0}
=====================  ======================  ==============================  ===========
variational            |x - M t_i|             |k - M t_i| - |k - 1 - M t_i|   floor(M t_i)
kl-approx-first        x log(x / t_i)          k log(k/(k-1)) + log(k-1)       0
                                               - log t_i
kl-target-first        -t_i log x              t_i log((k-1)/k)                ceil(t_i)
chi2-approx-first      (x/M - t_i)^2 / t_i     ((2k-1)/M - 2 t_i) / (M t_i)    0
chi2-target-first      M t_i^2 / x             -M t_i^2 / (k (k-1))            ceil(t_i)
=====================  ======================  ==============================  ===========
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

from .errors import (
    DimensionMismatch,
    InfeasibleSupport,
    InternalInvariantViolation,
    InvalidInput,
    ZeroTargetEntry,
)
from .greedy import AllocationResult, greedy_allocate
from .types import CostKind, MTypeApprox, TargetDistribution, entropy, validate_target


def _delta_vd(t_i: float, M: int, k: int) -> float:
    # |k - x| - |k - 1 - x| by cases, so the result is exactly non-decreasing in k
    x = M * t_i
    if k <= x:
        return -1.0
    if k - 1 >= x:
        return 1.0
    return 2 * (k - x) - 1.0


def _delta_kl_approx(t_i: float, M: int, k: int) -> float:
    if t_i == 0:
        return math.inf
    if k == 1:
        # f(0) = 0 log 0 = 0
        return -math.log(t_i)
    return k * math.log(k / (k - 1)) + math.log(k - 1) - math.log(t_i)


def _delta_kl_target(t_i: float, M: int, k: int) -> float:
    if t_i == 0:
        return 0.0
    if k == 1:
        return -math.inf
    return t_i * math.log1p(-1.0 / k)


def _delta_chi2_approx(t_i: float, M: int, k: int) -> float:
    if t_i == 0:
        return math.inf
    return ((2 * k - 1) / M - 2 * t_i) / (M * t_i)


def _delta_chi2_target(t_i: float, M: int, k: int) -> float:
    if t_i == 0:
        return 0.0
    if k == 1:
        return -math.inf
    return -M * t_i * t_i / (k * (k - 1))


_DELTAS: dict[CostKind, Callable[[float, int, int], float]] = {
    CostKind.VARIATIONAL: _delta_vd,
    CostKind.KL_APPROX_FIRST: _delta_kl_approx,
    CostKind.KL_TARGET_FIRST: _delta_kl_target,
    CostKind.CHI2_APPROX_FIRST: _delta_chi2_approx,
    CostKind.CHI2_TARGET_FIRST: _delta_chi2_target,
}


def delta(kind: CostKind, t: TargetDistribution, M: int, i: int, k: int) -> float:
    """Increment of the rewritten cost for giving index ``i`` its ``k``-th unit.

    Singular cases follow the limits of ``f_i``: an index the cost forbids
    (``t_i = 0`` for approximation-first kinds) gets ``+inf``; an index with
    ``t_i = 0`` under a target-first kind gets ``0``; the first unit of a
    positive index under a target-first kind gets ``-inf``.
    """
    if k < 1:
        raise InvalidInput(f"k must be >= 1, got {k}")
    return _DELTAS[CostKind.parse(kind)](float(t.probs[i]), M, k)


def prealloc(kind: CostKind, t: TargetDistribution, M: int, i: int) -> int:
    kind = CostKind.parse(kind)
    t_i = float(t.probs[i])
    if kind is CostKind.VARIATIONAL:
        return int(math.floor(M * t_i))
    if kind.target_first:
        return int(math.ceil(t_i))
    return 0


@dataclass(frozen=True)
class CostInstance:
    """One cost kind bound to a target and a precision; usable as a delta source."""

    kind: CostKind
    target: TargetDistribution
    M: int
    _t: tuple = field(init=False, repr=False, compare=False)
    _fn: Callable = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "kind", CostKind.parse(self.kind))
        if int(self.M) != self.M or self.M < 1:
            raise InvalidInput(f"M must be a positive integer, got {self.M!r}")
        if self.kind.target_first and self.M < self.target.support_size:
            raise InfeasibleSupport(
                f"{self.kind.value} needs M >= support size {self.target.support_size}, got M={self.M}"
            )
        object.__setattr__(self, "_t", tuple(self.target.probs.tolist()))
        object.__setattr__(self, "_fn", _DELTAS[self.kind])

    @property
    def n(self) -> int:
        return self.target.n

    def delta(self, i: int, k: int) -> float:
        return self._fn(self._t[i], self.M, k)

    def prealloc(self, i: int) -> int:
        return prealloc(self.kind, self.target, self.M, i)

    def offset(self) -> float:
        return cost_offset(self.kind, self.target, self.M)


def cost_offset(kind: CostKind, t: TargetDistribution, M: int) -> float:
    """``sum_i f_i(c_{i,0})``, the part of the rewritten cost fixed by pre-allocation."""
    kind = CostKind.parse(kind)
    if kind is CostKind.VARIATIONAL:
        x = t.probs * M
        return float(np.sum(np.abs(np.floor(x) - x)))
    if kind is CostKind.CHI2_APPROX_FIRST:
        # f_i(0) = t_i over the support
        return float(np.sum(t.probs[t.probs > 0]))
    if kind is CostKind.CHI2_TARGET_FIRST:
        # f_i(1) = M t_i^2 for pre-allocated indices
        return float(M * np.sum(t.probs**2))
    # kl kinds: f_i(0) = 0 and f_i(1) = -t_i log 1 = 0
    return 0.0


def cost_from_delta_sum(kind: CostKind, t: TargetDistribution, M: int, cost_sum: float) -> float:
    """Map the greedy objective ``sum of chosen deltas`` back to the true cost."""
    kind = CostKind.parse(kind)
    u = cost_offset(kind, t, M) + cost_sum
    if kind is CostKind.VARIATIONAL:
        return u / M
    if kind is CostKind.KL_APPROX_FIRST:
        return u / M - math.log(M)
    if kind is CostKind.KL_TARGET_FIRST:
        return math.log(M) - entropy(t) + u
    if kind is CostKind.CHI2_APPROX_FIRST:
        return u
    # sum_i t_i^2 / p_i - 1
    return u - 1.0


def _as_probs(p) -> np.ndarray:
    if isinstance(p, MTypeApprox):
        return p.probs
    if isinstance(p, TargetDistribution):
        return p.probs
    return np.asarray(p, dtype=np.float64)


def evaluate_rows(kind: CostKind, t, P: np.ndarray) -> np.ndarray:
    """Exact cost of ``t`` against every row of the probability matrix ``P``."""
    kind = CostKind.parse(kind)
    t = _as_probs(t)
    P = np.atleast_2d(np.asarray(P, dtype=np.float64))
    if P.shape[1] != t.shape[0]:
        raise DimensionMismatch(f"approximation has {P.shape[1]} entries, target has {t.shape[0]}")
    tpos = t > 0
    with np.errstate(divide="ignore", invalid="ignore"):
        if kind is CostKind.VARIATIONAL:
            return np.sum(np.abs(P - t), axis=1)
        if kind is CostKind.KL_APPROX_FIRST:
            terms = np.where(P > 0, P * np.log(P / t), 0.0)
            terms = np.where((P > 0) & ~tpos, np.inf, terms)
            return np.sum(terms, axis=1)
        if kind is CostKind.KL_TARGET_FIRST:
            terms = np.where(tpos, t * np.log(t / P), 0.0)
            terms = np.where(tpos & (P == 0), np.inf, terms)
            return np.sum(terms, axis=1)
        if kind is CostKind.CHI2_APPROX_FIRST:
            terms = np.where(tpos, (P - t) ** 2 / t, 0.0)
            terms = np.where((P > 0) & ~tpos, np.inf, terms)
            return np.sum(terms, axis=1)
        terms = np.where(P > 0, (t - P) ** 2 / P, 0.0)
        terms = np.where(tpos & (P == 0), np.inf, terms)
        return np.sum(terms, axis=1)


def evaluate(kind: CostKind, t, p) -> float:
    """Exact cost of approximating ``t`` by ``p``.

    ``p`` may be an :class:`MTypeApprox` or any probability vector of the
    same length. Infinite when ``p`` misses mass the cost requires.
    """
    t_arr = _as_probs(t)
    p_arr = _as_probs(p).reshape(-1)
    if p_arr.shape != t_arr.shape:
        raise DimensionMismatch(f"approximation has {p_arr.size} entries, target has {t_arr.size}")
    return float(evaluate_rows(kind, t_arr, p_arr[None, :])[0])


def allocate(t: TargetDistribution, M: int, kind: CostKind) -> AllocationResult:
    """Run the greedy allocator for ``kind``; returns counts and the delta sum."""
    instance = CostInstance(CostKind.parse(kind), t, M)
    result = greedy_allocate(instance, t.n, M)
    if math.isinf(result.cost_sum) and result.cost_sum > 0:
        raise ZeroTargetEntry(f"every allocation has infinite {instance.kind.value} cost")
    if instance.kind.target_first:
        counts = np.asarray(result.counts)
        if np.any((counts > 0) != (t.probs > 0)):
            raise InternalInvariantViolation("allocation support differs from target support")
    return result


def quantize(
    t: Union[TargetDistribution, np.ndarray, list], M: int, kind: Union[CostKind, str]
) -> MTypeApprox:
    """Optimal M-type approximation of ``t`` under the given cost.

    Raises
    ------
    InfeasibleSupport
        For target-first kinds when ``M`` is below the support size of ``t``.
    """
    t = validate_target(t)
    result = allocate(t, M, kind)
    return MTypeApprox(M, np.asarray(result.counts, dtype=np.int64))
