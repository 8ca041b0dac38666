"""Generic greedy allocator over queues of non-decreasing increments.

Each index ``i`` is a queue whose ``k``-th unit costs ``delta(i, k)``. Starting
from a pre-allocation, the allocator repeatedly takes the cheapest next unit
(lowest index on ties) until ``M`` units are allocated. When every queue's
increments are non-decreasing in ``k`` the result minimizes the summed
increments over all allocations that respect the pre-allocation.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import List, Protocol, Tuple

from .errors import InfeasiblePrealloc, InvalidInput, NonFiniteDelta


class DeltaSource(Protocol):
    def delta(self, i: int, k: int) -> float:
        """Increment for taking the ``k``-th unit (``k >= 1``) of index ``i``."""

    def prealloc(self, i: int) -> int:
        """Units of index ``i`` fixed before the greedy loop."""


@dataclass(frozen=True)
class AllocationResult:
    counts: Tuple[int, ...]
    steps_taken: int
    cost_sum: float


TraceStep = Tuple[int, int, float]


def preallocation(source: DeltaSource, n: int) -> Tuple[int, ...]:
    counts = []
    for i in range(n):
        c0 = source.prealloc(i)
        if c0 < 0 or int(c0) != c0:
            raise InvalidInput(f"pre-allocation of index {i} must be a nonnegative integer, got {c0!r}")
        counts.append(int(c0))
    return tuple(counts)


def _checked(value: float, i: int, k: int) -> float:
    value = float(value)
    if math.isnan(value):
        raise NonFiniteDelta(f"delta({i}, {k}) is NaN")
    return value


def _run(source: DeltaSource, n: int, M: int, trace: List[TraceStep] | None) -> AllocationResult:
    if n < 1:
        raise InvalidInput("need at least one index")
    if M < 1 or int(M) != M:
        raise InvalidInput(f"M must be a positive integer, got {M!r}")
    counts = list(preallocation(source, n))
    base = sum(counts)
    if base > M:
        raise InfeasiblePrealloc(f"pre-allocation uses {base} units but M={M}")
    steps = M - base
    total = 0.0
    if steps == 0:
        return AllocationResult(tuple(counts), 0, total)

    # one candidate per index, keyed (delta, index) so ties go to the lowest index
    heap = [(_checked(source.delta(i, counts[i] + 1), i, counts[i] + 1), i) for i in range(n)]
    heapq.heapify(heap)
    delta = source.delta
    for step in range(1, steps + 1):
        d, j = heap[0]
        counts[j] += 1
        total += d
        if trace is not None:
            trace.append((step, j, d))
        if step < steps:
            k = counts[j] + 1
            heapq.heapreplace(heap, (_checked(delta(j, k), j, k), j))
    return AllocationResult(tuple(counts), steps, total)


def greedy_allocate(source: DeltaSource, n: int, M: int) -> AllocationResult:
    """Allocate ``M`` units over ``n`` indices by always taking the cheapest next unit.

    Runs in ``O(n + (M - sum(c0)) log n)`` using a binary heap holding one
    pending increment per index. Increments are compared exactly; ``+inf``
    marks a unit that is only taken when nothing finite remains.

    Raises
    ------
    InfeasiblePrealloc
        If the pre-allocation already exceeds ``M``.
    NonFiniteDelta
        If an increment evaluates to NaN.
    """
    return _run(source, n, M, None)


def selection_trace(source: DeltaSource, n: int, M: int) -> List[TraceStep]:
    """The ``(step, index, delta)`` sequence chosen by :func:`greedy_allocate`.

    Steps are numbered from 1; indices are 0-based.
    """
    trace: List[TraceStep] = []
    _run(source, n, M, trace)
    return trace


def replay_trace(prealloc: Tuple[int, ...], trace: List[TraceStep]) -> Tuple[int, ...]:
    counts = list(prealloc)
    for _, j, _ in trace:
        counts[j] += 1
    return tuple(counts)


class TableSource:
    """A delta source backed by explicit per-index increment tables.

    ``tables[i][k - 1]`` is ``delta(i, k)``; requesting past the end of a
    table yields ``+inf``.
    """

    def __init__(self, tables, prealloc=None):
        self.tables = [list(map(float, row)) for row in tables]
        self._prealloc = list(prealloc) if prealloc is not None else [0] * len(self.tables)

    def delta(self, i: int, k: int) -> float:
        row = self.tables[i]
        return row[k - 1] if k <= len(row) else math.inf

    def prealloc(self, i: int) -> int:
        return self._prealloc[i]
