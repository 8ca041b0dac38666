"""Reverse I-projection onto ``P_M = {p : p_i >= 1/M, sum p = 1}`` and error bounds.

The projection of ``t`` clamps small masses to ``1/M`` and divides the rest by a
common factor ``nu >= 1`` so the result sums to one. ``nu`` drives both an
every-``M`` bound on the optimal ``D(t||p)`` and diagnostic identities relating
``t``, its projection, and the variational-distance quantization of the latter.

All functions work on the support of ``t``: zero entries are carried through
as zeros and ``n`` in every formula is the support size.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from .costs import evaluate, quantize
from .errors import EmptySimplex, InvalidInput, SupportMismatch
from .types import CostKind, MTypeApprox, TargetDistribution, validate_target

LOG2 = math.log(2.0)


@dataclass(frozen=True)
class ProjectionResult:
    t_star: np.ndarray
    nu: float
    K: Tuple[int, ...]  # indices clamped to 1/M
    T_K: float  # target mass on K
    M: int

    @property
    def k(self) -> int:
        return len(self.K)

    def __post_init__(self):
        self.t_star.setflags(write=False)


@dataclass(frozen=True)
class BoundReport:
    M: int
    exact: float
    bound_eq12: float
    bound_eq7: float
    bound_eq7_valid: bool
    nu: float


def _solve_nu(sorted_t: np.ndarray, M: int) -> Tuple[int, float, float]:
    """Smallest saturated-prefix size ``k`` consistent with its own ``nu``.

    Returns ``(k, nu, T_K)``. For a prefix of the ascending order of size ``k``
    the scaling is ``nu_k = (1 - T_k) / (1 - k/M)``; the first ``k`` whose next
    entry stays at or above ``nu_k / M`` is the fixed point.
    """
    n = sorted_t.shape[0]
    prefix = 0.0
    for k in range(n):
        nu = (1.0 - prefix) / (1.0 - k / M)
        if k == n - 1 or M * sorted_t[k] >= nu:
            return k, nu, prefix
        prefix += float(sorted_t[k])
    raise AssertionError("unreachable")


def reverse_i_projection(t, M: int) -> ProjectionResult:
    """Distribution in ``P_M`` closest to ``t`` in ``D(t||.)``.

    Raises
    ------
    EmptySimplex
        If ``M`` is smaller than the support size of ``t``.
    """
    t = validate_target(t)
    support = t.support
    n = support.size
    if M < n:
        raise EmptySimplex(f"P_M is empty for M={M} < support size {n}")
    vals = t.probs[support]
    order = np.argsort(vals, kind="stable")
    k, nu, T_K = _solve_nu(vals[order], M)
    clamped = support[order[:k]]
    t_star = np.zeros(t.n)
    t_star[support] = vals / nu
    t_star[clamped] = 1.0 / M
    K = tuple(sorted(int(i) for i in clamped))
    return ProjectionResult(t_star, float(nu), K, float(T_K), M)


def bound_eq12(t, M: int) -> float:
    """Bound valid for every ``M >= n``: ``log nu + (log 2 / 2)(1 - nu (1 - n/M))``."""
    t = validate_target(t)
    nu = reverse_i_projection(t, M).nu
    n = t.support_size
    return math.log(nu) + 0.5 * LOG2 * (1.0 - nu * (1.0 - n / M))


def bound_eq7(t, M: int) -> Tuple[float, bool]:
    """``log(1 + n/(2M))`` and whether it applies (``M * min_i t_i >= 1`` on the support)."""
    t = validate_target(t)
    n = t.support_size
    tmin = float(t.probs[t.probs > 0].min())
    return math.log1p(n / (2.0 * M)), bool(M * tmin >= 1.0)


def bound_report(t, M: int) -> BoundReport:
    t = validate_target(t)
    exact = evaluate(CostKind.KL_TARGET_FIRST, t, quantize(t, M, CostKind.KL_TARGET_FIRST))
    proj = reverse_i_projection(t, M)
    n = t.support_size
    b12 = math.log(proj.nu) + 0.5 * LOG2 * (1.0 - proj.nu * (1.0 - n / M))
    b7, valid = bound_eq7(t, M)
    return BoundReport(M, exact, b12, b7, valid, proj.nu)


def bound_sweep(t, M_min: int, M_max: int) -> List[BoundReport]:
    """Exact optimal ``D(t||p)`` and both bounds for every ``M`` in ``[M_min, M_max]``."""
    t = validate_target(t)
    if M_min > M_max:
        raise InvalidInput(f"empty range [{M_min}, {M_max}]")
    if M_min < t.support_size:
        raise EmptySimplex(f"M_min={M_min} is below the support size {t.support_size}")
    return [bound_report(t, M) for M in range(M_min, M_max + 1)]


def vd_approximation_of_projection(t, M: int) -> Tuple[ProjectionResult, MTypeApprox]:
    t = validate_target(t)
    proj = reverse_i_projection(t, M)
    return proj, quantize(TargetDistribution(proj.t_star), M, CostKind.VARIATIONAL)


def pythagorean_check(t, M: int) -> Tuple[float, float]:
    """Both sides of ``D(t||t_vd) = D(t||t*) + nu D(t*||t_vd)``.

    ``t*`` is the reverse I-projection of ``t`` and ``t_vd`` the
    variational-distance optimal M-type approximation of ``t*``.
    """
    t = validate_target(t)
    proj, t_vd = vd_approximation_of_projection(t, M)
    t_star = proj.t_star
    kl = CostKind.KL_TARGET_FIRST
    lhs = evaluate(kl, t, t_vd)
    rhs = evaluate(kl, t, t_star) + proj.nu * evaluate(kl, t_star, t_vd)
    return lhs, rhs


def reverse_pinsker_check(t_star, t_vd) -> Tuple[float, float]:
    """``D(t*||t_vd)`` and ``log(2) ||t* - t_vd||_1``; the first never exceeds the second."""
    a = np.asarray(t_star.probs if hasattr(t_star, "probs") else t_star, dtype=np.float64)
    b = np.asarray(t_vd.probs if hasattr(t_vd, "probs") else t_vd, dtype=np.float64)
    if a.shape != b.shape or np.any((a > 0) & (b == 0)):
        raise SupportMismatch("t_vd must cover the support of t*")
    lhs = evaluate(CostKind.KL_TARGET_FIRST, a, b)
    rhs = LOG2 * float(np.sum(np.abs(a - b)))
    return lhs, rhs


def log_nu_check(t, M: int) -> Tuple[float, float]:
    """``D(t||t*)`` and ``log nu``; the first never exceeds the second."""
    t = validate_target(t)
    proj = reverse_i_projection(t, M)
    return evaluate(CostKind.KL_TARGET_FIRST, t, proj.t_star), math.log(proj.nu)
