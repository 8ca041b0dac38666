"""Exhaustive search over all M-type distributions, for checking the greedy allocator.

Only feasible for small instances: there are ``C(M+n-1, n-1)`` compositions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import islice
from typing import Dict, Iterator, List, Tuple

import numpy as np

from .costs import evaluate, evaluate_rows, quantize
from .errors import TooLarge
from .types import CostKind, MTypeApprox, validate_target

MAX_CANDIDATES = 10**7
_CHUNK = 1 << 16


@dataclass(frozen=True)
class OracleResult:
    best_cost: float
    best_counts: Tuple[int, ...]
    num_candidates: int


def num_compositions(M: int, n: int) -> int:
    return math.comb(M + n - 1, n - 1)


def compositions(M: int, n: int) -> Iterator[Tuple[int, ...]]:
    """All ``n``-tuples of nonnegative integers summing to ``M``, in lexicographic order."""
    if n == 1:
        yield (M,)
        return
    for first in range(M + 1):
        for rest in compositions(M - first, n - 1):
            yield (first,) + rest


def brute_force(t, M: int, kind) -> OracleResult:
    """Minimum cost over every M-type distribution, lexicographically smallest on ties.

    For target-first kinds with ``M`` below the support size every candidate
    has infinite cost; that verdict is returned instead of raising.

    Raises
    ------
    TooLarge
        If there are more than ``MAX_CANDIDATES`` compositions.
    """
    t = validate_target(t)
    kind = CostKind.parse(kind)
    total = num_compositions(M, t.n)
    if total > MAX_CANDIDATES:
        raise TooLarge(f"{total} compositions exceed the limit of {MAX_CANDIDATES}")

    best_cost, best_counts, seen = math.inf, None, 0
    gen = compositions(M, t.n)
    while True:
        chunk = list(islice(gen, _CHUNK))
        if not chunk:
            break
        counts = np.array(chunk, dtype=np.int64)
        costs = evaluate_rows(kind, t, counts / M)
        j = int(np.argmin(costs))
        # strict improvement keeps the earliest (lexicographically smallest) minimizer
        if best_counts is None or costs[j] < best_cost:
            best_cost, best_counts = float(costs[j]), tuple(int(c) for c in chunk[j])
        seen += len(chunk)
    best_cost = evaluate(kind, t, MTypeApprox(M, np.array(best_counts)))
    return OracleResult(best_cost, best_counts, seen)


@dataclass
class AgreementReport:
    seed: int
    trials: int
    max_discrepancy: float = 0.0
    per_kind: Dict[str, float] = field(default_factory=dict)
    records: List[dict] = field(default_factory=list)


def random_target(rng: np.random.Generator, n: int) -> np.ndarray:
    """Uniform draw from the simplex, rounded to 6 decimals and renormalized; strictly positive."""
    while True:
        t = np.round(rng.dirichlet(np.ones(n)), 6)
        if np.all(t > 0):
            return t / t.sum()


def agreement_suite(seed: int, trials: int) -> AgreementReport:
    """Compare greedy and exhaustive optima on random small instances for every cost kind."""
    rng = np.random.default_rng(seed)
    report = AgreementReport(seed, trials)
    for trial in range(trials):
        n = int(rng.integers(2, 6))
        M = int(rng.integers(n, 13))
        t = validate_target(random_target(rng, n))
        for kind in CostKind:
            greedy_cost = evaluate(kind, t, quantize(t, M, kind))
            oracle_cost = brute_force(t, M, kind).best_cost
            gap = abs(greedy_cost - oracle_cost)
            report.records.append(
                dict(trial=trial, n=n, M=M, kind=kind.value, t=t.probs.tolist(),
                     greedy_cost=greedy_cost, oracle_cost=oracle_cost, gap=gap)
            )
            report.per_kind[kind.value] = max(report.per_kind.get(kind.value, 0.0), gap)
            report.max_discrepancy = max(report.max_discrepancy, gap)
    return report
