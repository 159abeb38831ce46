"""Exact field arithmetic, Gaussian integers, and factorization."""

import random
from fractions import Fraction

import pytest

from multival import (
    Q, QI, FieldElem, GaussianInt, elem, factor_int, format_elem,
    gaussian_factor, is_prime, one, parse_elem, rational_factor, zero,
)
from multival.errors import FieldMismatch, ZeroInput
from multival.fields import (
    GAUSS_UNITS, gauss_divmod, gauss_gcd, gauss_xgcd, gaussian_prime_above,
    normalize_gaussian, sqrt_minus_one_mod,
)


def test_field_arithmetic_basics():
    a = elem(Fraction(1, 2), 1, QI)
    b = elem(2, -3, QI)
    assert a + b == elem(Fraction(5, 2), -2, QI)
    assert a - b == elem(Fraction(-3, 2), 4, QI)
    assert a * b == elem(4, Fraction(1, 2), QI)
    assert (a / b) * b == a
    assert -a + a == zero(QI)


def test_field_inverse_and_pow():
    x = elem(3, 4, QI)
    assert x * x.inverse() == one(QI)
    assert x ** 3 == x * x * x
    assert x ** -2 == (x * x).inverse()
    assert x ** 0 == one(QI)
    with pytest.raises(ZeroInput):
        zero(QI).inverse()


def test_field_mismatch_rejected():
    with pytest.raises(FieldMismatch):
        elem(1, 0, Q) + elem(1, 0, QI)
    with pytest.raises(ValueError):
        FieldElem(Fraction(0), Fraction(1), Q)


def test_conjugate_is_ring_morphism():
    rng = random.Random(5)
    for _ in range(50):
        a = elem(rng.randint(-9, 9), rng.randint(-9, 9), QI)
        b = elem(rng.randint(-9, 9), rng.randint(-9, 9), QI)
        assert (a + b).conjugate() == a.conjugate() + b.conjugate()
        assert (a * b).conjugate() == a.conjugate() * b.conjugate()


def test_gauss_divmod_is_euclidean():
    rng = random.Random(7)
    for _ in range(200):
        a = GaussianInt(rng.randint(-50, 50), rng.randint(-50, 50))
        b = GaussianInt(rng.randint(-50, 50), rng.randint(-50, 50))
        if b.is_zero():
            continue
        q, r = gauss_divmod(a, b)
        assert q * b + r == a
        assert 2 * r.norm() <= b.norm()


def test_gauss_gcd_divides_both():
    a = GaussianInt(12, 9)
    b = GaussianInt(6, -3)
    g = gauss_gcd(a, b)
    for x in (a, b):
        _, r = gauss_divmod(x, g)
        assert r.is_zero()
    gg, s, t = gauss_xgcd(a, b)
    assert s * a + t * b == gg


def test_normalize_gaussian_canonical_form():
    for g in (GaussianInt(2, 1), GaussianInt(-1, 2), GaussianInt(-2, -1),
              GaussianInt(1, -2)):
        unit, canon = normalize_gaussian(g)
        assert canon == GaussianInt(2, 1)
        assert unit * canon == g
    # the ramified prime canonicalizes with positive imaginary part
    for g in (GaussianInt(1, 1), GaussianInt(-1, 1), GaussianInt(1, -1)):
        assert normalize_gaussian(g)[1] == GaussianInt(1, 1)


def test_is_prime_against_sieve():
    limit = 2000
    sieve = [True] * limit
    sieve[0] = sieve[1] = False
    for n in range(2, limit):
        if sieve[n]:
            for k in range(n * n, limit, n):
                sieve[k] = False
    for n in range(limit):
        assert is_prime(n) == sieve[n]


def test_factor_int_reconstructs():
    rng = random.Random(11)
    for _ in range(100):
        n = rng.randint(1, 10 ** 6)
        fac = factor_int(n)
        prod = 1
        for p, e in fac.items():
            assert is_prime(p)
            prod *= p ** e
        assert prod == n


def test_rational_factor():
    sign, exps = rational_factor(Fraction(-50, 27))
    assert sign == -1
    assert exps == {2: 1, 3: -3, 5: 2}


def test_sqrt_minus_one():
    for p in (5, 13, 17, 29, 101):
        t = sqrt_minus_one_mod(p)
        assert (t * t) % p == p - 1


def test_gaussian_prime_above():
    assert gaussian_prime_above(2) == GaussianInt(1, 1)
    assert gaussian_prime_above(7) == GaussianInt(7, 0)
    pi = gaussian_prime_above(5)
    assert pi.norm() == 5
    assert pi in (GaussianInt(2, 1), GaussianInt(2, -1))
    conj = normalize_gaussian(pi.conjugate())[1]
    assert {pi, conj} == {GaussianInt(2, 1), GaussianInt(2, -1)}


def test_gaussian_factor_reconstructs():
    rng = random.Random(13)
    for _ in range(100):
        g = GaussianInt(rng.randint(-40, 40), rng.randint(-40, 40))
        if g.is_zero():
            continue
        unit, items = gaussian_factor(g)
        assert unit in GAUSS_UNITS
        prod = unit
        for pi, e in items:
            assert is_prime(pi.norm()) or (pi.im == 0 and is_prime(pi.re))
            for _ in range(e):
                prod = prod * pi
        assert prod == g


def test_gaussian_factor_of_five():
    unit, items = gaussian_factor(GaussianInt(5, 0))
    assert unit == GaussianInt(1, 0)
    assert [(str(p), e) for p, e in items] == [("2-1*i", 1), ("2+1*i", 1)]


def test_parse_format_roundtrip():
    rng = random.Random(17)
    cases = [elem(0, 0, QI), elem(0, 1, QI), elem(0, -1, QI),
             elem(Fraction(1, 2), 0, Q)]
    for _ in range(100):
        cases.append(elem(Fraction(rng.randint(-99, 99), rng.randint(1, 20)),
                          Fraction(rng.randint(-99, 99), rng.randint(1, 20)),
                          QI))
    for x in cases:
        assert parse_elem(format_elem(x), x.field) == x


def test_parse_elem_forms():
    assert parse_elem("i") == elem(0, 1, QI)
    assert parse_elem("-i") == elem(0, -1, QI)
    assert parse_elem("1/2+3/4*i") == elem(Fraction(1, 2), Fraction(3, 4), QI)
    assert parse_elem(" 2 - 5*i ") == elem(2, -5, QI)
    assert parse_elem("7") == elem(7)
    assert parse_elem("7", QI) == elem(7, 0, QI)
    with pytest.raises(ValueError):
        parse_elem("")
    with pytest.raises(ValueError):
        parse_elem("2+*i")
    with pytest.raises(FieldMismatch):
        parse_elem("2+3*i", Q)
