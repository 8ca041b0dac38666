import math

import numpy as np
import pytest
from hypothesis import given

from mtype_approx import (
    EmptyInput,
    MTypeApprox,
    NegativeEntry,
    NotNormalized,
    ZeroSum,
    entropy,
    validate_target,
)
from mtype_approx.errors import InvalidInput
from mtype_approx.types import CostKind

from conftest import positive_targets


def test_validate_exact_simplex_point():
    t = validate_target([0.5, 0.5])
    assert t.n == 2
    assert t.probs.tolist() == [0.5, 0.5]


def test_validate_normalizes():
    t = validate_target([2, 2], normalize=True)
    assert t.probs.tolist() == [0.5, 0.5]


@pytest.mark.parametrize("normalize", [False, True])
def test_negative_entry_rejected(normalize):
    with pytest.raises(NegativeEntry):
        validate_target([0.5, -0.1, 0.6], normalize=normalize)


def test_validation_errors():
    with pytest.raises(EmptyInput):
        validate_target([])
    with pytest.raises(NotNormalized):
        validate_target([0.5, 0.6])
    with pytest.raises(ZeroSum):
        validate_target([0.0, 0.0], normalize=True)
    with pytest.raises(InvalidInput):
        validate_target([0.5, float("nan")])


def test_sum_tolerance_is_1e9():
    validate_target([0.5, 0.5 + 5e-10])
    with pytest.raises(NotNormalized):
        validate_target([0.5, 0.5 + 5e-9])


def test_zero_entries_kept():
    t = validate_target([0.0, 0.25, 0.0, 0.75])
    assert t.n == 4
    assert t.support.tolist() == [1, 3]
    assert t.support_size == 2
    assert t.restrict().probs.tolist() == [0.25, 0.75]


def test_target_is_immutable():
    t = validate_target([0.5, 0.5])
    with pytest.raises(ValueError):
        t.probs[0] = 1.0


@given(positive_targets())
def test_validate_idempotent(p):
    t = validate_target(p)
    assert validate_target(t) is t
    assert validate_target(t.probs) == t


def test_entropy_examples():
    assert entropy(validate_target([1.0])) == 0.0
    assert entropy(validate_target([0.5, 0.5])) == pytest.approx(math.log(2), abs=1e-15)
    # direct summation -sum t log t
    assert entropy(validate_target([0.85, 0.075, 0.075])) == pytest.approx(0.5266811648899827, abs=1e-15)


@given(positive_targets())
def test_entropy_range(p):
    t = validate_target(p)
    assert -1e-12 <= entropy(t) <= math.log(t.n) + 1e-12


@pytest.mark.parametrize("n", [1, 2, 3, 7, 100, 1000])
def test_entropy_uniform(n):
    assert abs(entropy(validate_target(np.full(n, 1.0 / n))) - math.log(n)) <= 1e-12


def test_mtype_approx_invariants():
    p = MTypeApprox(4, [1, 3])
    assert p.probs.tolist() == [0.25, 0.75]
    with pytest.raises(InvalidInput):
        MTypeApprox(4, [1, 2])
    with pytest.raises(InvalidInput):
        MTypeApprox(4, [-1, 5])
    with pytest.raises(InvalidInput):
        MTypeApprox(0, [])
    with pytest.raises(InvalidInput):
        MTypeApprox(2, [0.5, 1.5])


def test_cost_kind_parse():
    assert CostKind.parse("kl-target-first") is CostKind.KL_TARGET_FIRST
    assert CostKind.parse(CostKind.VARIATIONAL) is CostKind.VARIATIONAL
    with pytest.raises(InvalidInput):
        CostKind.parse("renyi")
