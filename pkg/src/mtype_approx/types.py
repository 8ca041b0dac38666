"""Validated domain types: target distributions, M-type approximations, cost kinds."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence, Union

import numpy as np

from .errors import EmptyInput, InvalidInput, NegativeEntry, NotNormalized, ZeroSum

SIMPLEX_TOL = 1e-9


class CostKind(Enum):
    """Approximation error measures the greedy allocator can minimize."""

    VARIATIONAL = "variational"  # ||p - t||_1
    KL_APPROX_FIRST = "kl-approx-first"  # D(p||t)
    KL_TARGET_FIRST = "kl-target-first"  # D(t||p)
    CHI2_APPROX_FIRST = "chi2-approx-first"  # chi^2(p||t)
    CHI2_TARGET_FIRST = "chi2-target-first"  # chi^2(t||p)

    @property
    def target_first(self) -> bool:
        """True when the cost is infinite unless supp(t) is covered by supp(p)."""
        return self in (CostKind.KL_TARGET_FIRST, CostKind.CHI2_TARGET_FIRST)

    @classmethod
    def parse(cls, value: Union[str, "CostKind"]) -> "CostKind":
        if isinstance(value, cls):
            return value
        try:
            return cls(value)
        except ValueError:
            choices = ", ".join(k.value for k in cls)
            raise InvalidInput(f"unknown cost kind {value!r}; expected one of {choices}") from None


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class TargetDistribution:
    """A probability vector ``t`` with nonnegative entries summing to one.

    Zero entries are kept so that index positions stay aligned with
    approximations and with the rows of a transition matrix.
    """

    probs: np.ndarray

    def __post_init__(self):
        probs = np.array(self.probs, dtype=np.float64).reshape(-1)
        object.__setattr__(self, "probs", _frozen(probs))

    @property
    def n(self) -> int:
        return int(self.probs.shape[0])

    @property
    def support(self) -> np.ndarray:
        """Indices with positive mass."""
        return np.flatnonzero(self.probs > 0)

    @property
    def support_size(self) -> int:
        return int(np.count_nonzero(self.probs > 0))

    def restrict(self) -> "TargetDistribution":
        """The distribution restricted to its support."""
        return TargetDistribution(self.probs[self.probs > 0])

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other) -> bool:
        if not isinstance(other, TargetDistribution):
            return NotImplemented
        return np.array_equal(self.probs, other.probs)

    def __repr__(self) -> str:
        return f"TargetDistribution({self.probs.tolist()})"


@dataclass(frozen=True, eq=False)
class MTypeApprox:
    """An M-type distribution ``p_i = c_i / M`` given by integer counts."""

    M: int
    counts: np.ndarray

    def __post_init__(self):
        if int(self.M) != self.M or self.M < 1:
            raise InvalidInput(f"precision M must be a positive integer, got {self.M!r}")
        counts = np.asarray(self.counts)
        if counts.size and not np.all(np.equal(np.mod(counts, 1), 0)):
            raise InvalidInput("counts must be integers")
        counts = counts.astype(np.int64).reshape(-1)
        if np.any(counts < 0) or np.any(counts > self.M):
            raise InvalidInput("every count must lie in [0, M]")
        if int(counts.sum()) != self.M:
            raise InvalidInput(f"counts sum to {int(counts.sum())}, expected M={self.M}")
        object.__setattr__(self, "M", int(self.M))
        object.__setattr__(self, "counts", _frozen(counts))

    @property
    def n(self) -> int:
        return int(self.counts.shape[0])

    @property
    def probs(self) -> np.ndarray:
        return self.counts / self.M

    def __eq__(self, other) -> bool:
        if not isinstance(other, MTypeApprox):
            return NotImplemented
        return self.M == other.M and np.array_equal(self.counts, other.counts)

    def __repr__(self) -> str:
        return f"MTypeApprox(M={self.M}, counts={self.counts.tolist()})"


def validate_target(
    raw: Union[Sequence[float], np.ndarray, TargetDistribution], normalize: bool = False
) -> TargetDistribution:
    """Check ``raw`` is a probability vector and wrap it.

    Parameters
    ----------
    raw : sequence of float
        Candidate masses. Already-validated targets are returned unchanged.
    normalize : bool
        Divide by the sum before checking. Without it the sum must be within
        ``1e-9`` of one and is left as given.

    Raises
    ------
    EmptyInput, NegativeEntry, NotNormalized, ZeroSum
    """
    if isinstance(raw, TargetDistribution):
        return raw
    try:
        arr = np.array(raw, dtype=np.float64).reshape(-1)
    except (TypeError, ValueError) as exc:
        raise InvalidInput(f"not a numeric vector: {exc}") from None
    if arr.size == 0:
        raise EmptyInput("distribution has no entries")
    if not np.all(np.isfinite(arr)):
        raise InvalidInput("entries must be finite")
    if np.any(arr < 0):
        raise NegativeEntry(f"negative entry at index {int(np.argmax(arr < 0))}")
    total = math.fsum(arr.tolist())
    if normalize:
        if total == 0:
            raise ZeroSum("cannot normalize a vector summing to zero")
        arr = arr / total
    elif abs(total - 1.0) > SIMPLEX_TOL:
        raise NotNormalized(f"entries sum to {total!r}, not 1 (pass normalize=True to rescale)")
    return TargetDistribution(arr)


def entropy(t: TargetDistribution) -> float:
    """Shannon entropy in nats, ``-sum t_i log t_i`` over the support."""
    p = t.probs[t.probs > 0]
    return float(-np.sum(p * np.log(p)))
