"""Weak approximation: every target met exactly, randomized and worked."""

import random
from fractions import Fraction

import pytest

from multival import (
    Q, QI, GaussianInt, approximate, at_least, congruence, elem, exact_value,
    gaussian_valuation, greater_than, one, parse_valuation,
    rational_valuation, separate, val, zero,
)
from multival.errors import (
    FieldMismatch, InconsistentTargets, SameValuation,
)

V2 = rational_valuation(2)
V3 = rational_valuation(3)
V5 = rational_valuation(5)
V7 = rational_valuation(7)
W1 = gaussian_valuation(GaussianInt(2, 1))
W2 = gaussian_valuation(GaussianInt(2, -1))
W_INERT = gaussian_valuation(GaussianInt(3, 0))
W_RAM = gaussian_valuation(GaussianInt(1, 1))


def test_crt_instance_28():
    x = approximate([congruence(V2, zero(), 2), congruence(V3, one(), 2)])
    assert x == elem(28)


def test_crt_instance_352():
    x = approximate([congruence(V2, zero(), 2), congruence(V3, one(), 2),
                     congruence(V5, elem(2), 2)])
    assert x == elem(352)


def test_exact_values_with_negative_exponents():
    x = approximate([exact_value(V2, 1), exact_value(V3, 0),
                     exact_value(V5, -1)])
    assert val(V2, x) == 1 and val(V3, x) == 0 and val(V5, x) == -1


def test_greater_than_means_plus_one():
    x = approximate([greater_than(V2, 2)])
    assert val(V2, x) == 3


def test_target_validation():
    with pytest.raises(InconsistentTargets):
        approximate([exact_value(V2, 0), at_least(V2, 1)])
    with pytest.raises(InconsistentTargets):
        approximate([])
    with pytest.raises(FieldMismatch):
        approximate([exact_value(V2, 0), exact_value(W1, 0)])


def test_separate():
    x = separate(V2, V3)
    assert val(V2, x) >= 1 and val(V3, x - one()) >= 1
    with pytest.raises(SameValuation):
        separate(V2, V2)


def _random_rational_targets(rng):
    vals = rng.sample([V2, V3, V5, V7], rng.randint(1, 4))
    targets = []
    for v in vals:
        kind = rng.randrange(4)
        n = rng.randint(-3, 3)
        if kind == 0:
            targets.append(exact_value(v, n))
        elif kind == 1:
            targets.append(at_least(v, n))
        elif kind == 2:
            targets.append(greater_than(v, n))
        else:
            center = elem(Fraction(rng.randint(-60, 60), rng.randint(1, 20)))
            targets.append(congruence(v, center, rng.randint(-3, 3)))
    return targets


def _random_gaussian_targets(rng):
    vals = rng.sample([W1, W2, W_INERT, W_RAM], rng.randint(1, 4))
    targets = []
    for v in vals:
        kind = rng.randrange(4)
        n = rng.randint(-3, 3)
        if kind == 0:
            targets.append(exact_value(v, n))
        elif kind == 1:
            targets.append(at_least(v, n))
        elif kind == 2:
            targets.append(greater_than(v, n))
        else:
            center = elem(rng.randint(-30, 30), rng.randint(-30, 30), QI)
            targets.append(congruence(v, center, rng.randint(-3, 3)))
    return targets


def test_random_rational_systems():
    rng = random.Random(100)
    for _ in range(300):
        targets = _random_rational_targets(rng)
        x = approximate(targets)
        assert not x.is_zero()
        for t in targets:
            assert t.satisfied_by(x)


def test_random_gaussian_systems():
    rng = random.Random(101)
    for _ in range(300):
        targets = _random_gaussian_targets(rng)
        x = approximate(targets)
        assert not x.is_zero()
        for t in targets:
            assert t.satisfied_by(x)


def test_congruence_with_negative_valuation_center():
    center = elem(Fraction(1, 5))
    x = approximate([congruence(V5, center, 2), exact_value(V2, 0)])
    assert val(V5, x - center) >= 2
    assert val(V2, x) == 0


def test_target_strings():
    assert str(exact_value(V2, 1)) == "Q:2=1"
    assert str(at_least(V3, -2)) == "Q:3>=-2"
    assert str(congruence(V3, one(), 2)) == "Q:3:x-1>=2"
