"""Rank-one valuations on Q and Q(i), with extended residue maps.

A valuation is described by a rational prime (on Q) or a canonical
Gaussian prime (on Q(i)).  val(0) is represented by the sentinel INF.
Residue fields are F_p (rational, split, ramified) or F_{p^2} (inert),
the latter modeled as F_p[theta]/(theta^2 + 1).
"""

from __future__ import annotations

import math
import re as _re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import FieldMismatch, ZeroInput
from .fields import (
    Q, QI, FieldElem, GaussianInt, elem, gauss_divides, gauss_exact_div,
    is_prime, normalize_gaussian,
)

#: Value of val at 0; compares greater than every integer.
INF = math.inf

SPLIT = "split"
INERT = "inert"
RAMIFIED = "ramified"


@dataclass(frozen=True)
class Valuation:
    """A rank-one valuation descriptor.

    field == Q:  the p-adic valuation, pi is None.
    field == Qi: the pi-adic valuation for a canonical Gaussian prime pi
    lying over the rational prime p, with the indicated splitting.
    """

    field: str
    p: int
    pi: GaussianInt | None = None
    splitting: str | None = None

    def residue_char(self) -> int:
        return self.p

    def residue_size(self) -> int:
        return self.p * self.p if self.splitting == INERT else self.p

    def __str__(self):
        return format_valuation(self)


def rational_valuation(p: int) -> Valuation:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    return Valuation(Q, p)


def gaussian_valuation(pi: GaussianInt) -> Valuation:
    """Canonicalize pi and classify its splitting; pi must be prime."""
    _, pi = normalize_gaussian(pi)
    n = pi.norm()
    if pi.im == 0:
        p = pi.re
        if not is_prime(p) or p % 4 != 3:
            raise ValueError(f"{pi} is not a Gaussian prime")
        return Valuation(QI, p, pi, INERT)
    if not is_prime(n):
        raise ValueError(f"{pi} is not a Gaussian prime")
    if n == 2:
        return Valuation(QI, 2, pi, RAMIFIED)
    return Valuation(QI, n, pi, SPLIT)


def conjugate_valuation(v: Valuation) -> Valuation:
    if v.field != QI:
        raise FieldMismatch("conjugate_valuation needs a Gaussian valuation")
    return gaussian_valuation(v.pi.conjugate())


# ---------------------------------------------------------------------------
# Residue field elements


@dataclass(frozen=True)
class ResidueElem:
    """Element of F_p ('fp'), F_{p^2} = F_p[theta]/(theta^2+1) ('fp2'),
    or the extended-residue sentinel ('inf')."""

    p: int
    kind: str  # 'fp' | 'fp2' | 'inf'
    a: int = 0
    b: int = 0

    @classmethod
    def fp(cls, p, a):
        return cls(p, "fp", a % p, 0)

    @classmethod
    def fp2(cls, p, a, b):
        return cls(p, "fp2", a % p, b % p)

    @classmethod
    def infinity(cls, p):
        return cls(p, "inf")

    def is_infinite(self):
        return self.kind == "inf"

    def is_zero(self):
        return self.kind != "inf" and self.a == 0 and self.b == 0

    def _check(self, other):
        if self.p != other.p or self.kind != other.kind:
            if "inf" in (self.kind, other.kind):
                return
            raise ValueError("incompatible residue fields")

    def __add__(self, other):
        self._check(other)
        if self.is_infinite() or other.is_infinite():
            return ResidueElem.infinity(self.p)
        return ResidueElem(self.p, self.kind, (self.a + other.a) % self.p,
                           (self.b + other.b) % self.p)

    def __neg__(self):
        if self.is_infinite():
            return self
        return ResidueElem(self.p, self.kind, (-self.a) % self.p,
                           (-self.b) % self.p)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        self._check(other)
        if self.is_infinite() or other.is_infinite():
            return ResidueElem.infinity(self.p)
        if self.kind == "fp":
            return ResidueElem.fp(self.p, self.a * other.a)
        # (a + b theta)(c + d theta) with theta^2 = -1
        a, b, c, d = self.a, self.b, other.a, other.b
        return ResidueElem.fp2(self.p, a * c - b * d, a * d + b * c)

    def inverse(self):
        if self.is_infinite() or self.is_zero():
            raise ZeroInput("residue not invertible")
        if self.kind == "fp":
            return ResidueElem.fp(self.p, pow(self.a, -1, self.p))
        n = (self.a * self.a + self.b * self.b) % self.p
        ninv = pow(n, -1, self.p)
        return ResidueElem.fp2(self.p, self.a * ninv, -self.b * ninv)

    def __str__(self):
        if self.kind == "inf":
            return "inf"
        if self.kind == "fp":
            return f"{self.a} (mod {self.p})"
        return f"{self.a}+{self.b}*theta (mod {self.p})"


# ---------------------------------------------------------------------------
# Valuation and residue computation


def _check_field(v: Valuation, x: FieldElem):
    if v.field != x.field:
        raise FieldMismatch(f"element of {x.field} at a {v.field} valuation")


def _gauss_val(g: GaussianInt, pi: GaussianInt) -> int:
    k = 0
    while gauss_divides(pi, g):
        g = gauss_exact_div(g, pi)
        k += 1
    return k


def _int_val(n: int, p: int) -> int:
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def _as_gauss_pair(x: FieldElem):
    """Write x in Q(i) as g/d with g in Z[i] and d a positive integer."""
    d = x.re.denominator * x.im.denominator // math.gcd(
        x.re.denominator, x.im.denominator
    )
    g = GaussianInt(int(x.re * d), int(x.im * d))
    return g, d


@lru_cache(maxsize=1 << 18)
def val(v: Valuation, x: FieldElem):
    """The valuation of x at v; INF for x = 0."""
    _check_field(v, x)
    if x.is_zero():
        return INF
    if v.field == Q:
        return _int_val(x.re.numerator, v.p) - _int_val(x.re.denominator, v.p)
    g, d = _as_gauss_pair(x)
    return _gauss_val(g, v.pi) - _gauss_val(GaussianInt(d, 0), v.pi)


def i_residue_rep(v: Valuation) -> int:
    """The integer r with i = r mod pi, for split/ramified valuations."""
    pi = v.pi
    if v.splitting == RAMIFIED:
        return 1
    # pi = a + b i = 0 mod pi  =>  i = -a / b mod p
    return (-pi.re * pow(pi.im, -1, v.p)) % v.p


def _gauss_residue(g: GaussianInt, v: Valuation) -> ResidueElem:
    """Residue of a pi-coprime Gaussian integer."""
    if v.splitting == INERT:
        return ResidueElem.fp2(v.p, g.re, g.im)
    r = i_residue_rep(v)
    return ResidueElem.fp(v.p, g.re + g.im * r)


@lru_cache(maxsize=1 << 18)
def residue(v: Valuation, x: FieldElem) -> ResidueElem:
    """Extended residue map: the image of x in the residue field, or the
    Infinity sentinel when val(x) < 0."""
    _check_field(v, x)
    if x.is_zero():
        return ResidueElem.fp2(v.p, 0, 0) if v.splitting == INERT \
            else ResidueElem.fp(v.p, 0)
    if v.field == Q:
        num, den = x.re.numerator, x.re.denominator
        s, t = _int_val(num, v.p), _int_val(den, v.p)
        if s - t < 0:
            return ResidueElem.infinity(v.p)
        if s - t > 0:
            return ResidueElem.fp(v.p, 0)
        num //= v.p ** s
        den //= v.p ** t
        return ResidueElem.fp(v.p, num * pow(den, -1, v.p))
    g, d = _as_gauss_pair(x)
    dg = GaussianInt(d, 0)
    s, t = _gauss_val(g, v.pi), _gauss_val(dg, v.pi)
    if s - t < 0:
        return ResidueElem.infinity(v.p)
    zero = ResidueElem.fp2(v.p, 0, 0) if v.splitting == INERT \
        else ResidueElem.fp(v.p, 0)
    if s - t > 0:
        return zero
    gu = g
    for _ in range(s):
        gu = gauss_exact_div(gu, v.pi)
    du = dg
    for _ in range(t):
        du = gauss_exact_div(du, v.pi)
    return _gauss_residue(gu, v) * _gauss_residue(du, v).inverse()


def residue_of_int(v: Valuation, c: int) -> ResidueElem:
    """Image of a rational integer under the residue-field embedding of
    the prime field."""
    if v.splitting == INERT:
        return ResidueElem.fp2(v.p, c, 0)
    return ResidueElem.fp(v.p, c)


def uniformizer(v: Valuation) -> FieldElem:
    if v.field == Q:
        return elem(v.p)
    return v.pi.to_elem()


def value_vector(vals, x: FieldElem):
    """Componentwise valuations; (+INF, ...) exactly for x = 0."""
    return tuple(val(v, x) for v in vals)


# ---------------------------------------------------------------------------
# Text syntax: `Q:p` and `Qi:a+b*i` (canonicalized on parse)

_GAUSS_RE = _re.compile(r"^(-?\d+)(?:([+-]\d+)\*i)?$")


def parse_valuation(text: str) -> Valuation:
    s = "".join(text.split())
    if ":" not in s:
        raise ValueError(f"cannot parse valuation {text!r}")
    fld, _, rest = s.partition(":")
    if fld == "Q":
        return rational_valuation(int(rest))
    if fld == "Qi":
        m = _GAUSS_RE.match(rest)
        if not m:
            raise ValueError(f"cannot parse Gaussian prime {rest!r}")
        re_part = int(m.group(1))
        im_part = int(m.group(2)) if m.group(2) else 0
        return gaussian_valuation(GaussianInt(re_part, im_part))
    raise ValueError(f"unknown field tag {fld!r}")


def format_valuation(v: Valuation) -> str:
    if v.field == Q:
        return f"Q:{v.p}"
    if v.pi.im == 0:
        return f"Qi:{v.pi.re}"
    sign = "+" if v.pi.im >= 0 else "-"
    return f"Qi:{v.pi.re}{sign}{abs(v.pi.im)}*i"
