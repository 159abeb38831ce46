"""Exact arithmetic in Q and Q(i), and factorization in Z and Z[i].

Elements are kept in canonical reduced form (``fractions.Fraction`` is
always in lowest terms with positive denominator), so equality of
elements is equality of normal forms.
"""

from __future__ import annotations

import math
import re as _re
from dataclasses import dataclass
from fractions import Fraction

from .errors import FieldMismatch, ZeroInput

#: Field identifiers.  Exactly two variants.
Q = "Q"
QI = "Qi"


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected int or Fraction, got {type(x).__name__}")


@dataclass(frozen=True)
class FieldElem:
    """An exact element of Q or Q(i): re + im*i."""

    re: Fraction
    im: Fraction
    field: str

    def __post_init__(self):
        object.__setattr__(self, "re", _as_fraction(self.re))
        object.__setattr__(self, "im", _as_fraction(self.im))
        if self.field not in (Q, QI):
            raise ValueError(f"unknown field id {self.field!r}")
        if self.field == Q and self.im != 0:
            raise ValueError("elements of Q must have zero imaginary part")

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def _coerce(self, other) -> "FieldElem":
        if isinstance(other, FieldElem):
            if other.field != self.field:
                raise FieldMismatch(
                    f"cannot combine {self.field} and {other.field} elements"
                )
            return other
        return FieldElem(_as_fraction(other), Fraction(0), self.field)

    def __add__(self, other):
        o = self._coerce(other)
        return FieldElem(self.re + o.re, self.im + o.im, self.field)

    __radd__ = __add__

    def __neg__(self):
        return FieldElem(-self.re, -self.im, self.field)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        return FieldElem(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
            self.field,
        )

    __rmul__ = __mul__

    def inverse(self) -> "FieldElem":
        if self.is_zero():
            raise ZeroInput("division by zero")
        n = self.re * self.re + self.im * self.im
        return FieldElem(self.re / n, -self.im / n, self.field)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = FieldElem(Fraction(1), Fraction(0), self.field)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conjugate(self) -> "FieldElem":
        return FieldElem(self.re, -self.im, self.field)

    def to_field(self, field: str) -> "FieldElem":
        """Embed into `field`; only Q -> Qi promotion is allowed."""
        if field == self.field:
            return self
        if self.field == Q and field == QI:
            return FieldElem(self.re, self.im, QI)
        raise FieldMismatch(f"cannot embed {self.field} element into {field}")

    def __str__(self):
        return format_elem(self)


def elem(re, im=0, field=Q) -> FieldElem:
    """Convenience constructor; `elem(1, 1, QI)` is 1+i."""
    return FieldElem(_as_fraction(re), _as_fraction(im), field)


def zero(field=Q) -> FieldElem:
    return FieldElem(Fraction(0), Fraction(0), field)


def one(field=Q) -> FieldElem:
    return FieldElem(Fraction(1), Fraction(0), field)


def normalize(x: FieldElem) -> FieldElem:
    """Return the canonical reduced form of x (idempotent)."""
    return FieldElem(x.re, x.im, x.field)


# ---------------------------------------------------------------------------
# Gaussian integers


@dataclass(frozen=True)
class GaussianInt:
    """An element of Z[i]."""

    re: int
    im: int

    def norm(self) -> int:
        return self.re * self.re + self.im * self.im

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def conjugate(self) -> "GaussianInt":
        return GaussianInt(self.re, -self.im)

    def __add__(self, other):
        return GaussianInt(self.re + other.re, self.im + other.im)

    def __sub__(self, other):
        return GaussianInt(self.re - other.re, self.im - other.im)

    def __neg__(self):
        return GaussianInt(-self.re, -self.im)

    def __mul__(self, other):
        if isinstance(other, int):
            other = GaussianInt(other, 0)
        return GaussianInt(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def to_elem(self) -> FieldElem:
        return FieldElem(Fraction(self.re), Fraction(self.im), QI)

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        sign = "+" if self.im >= 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}*i"


GAUSS_ONE = GaussianInt(1, 0)
GAUSS_I = GaussianInt(0, 1)
GAUSS_UNITS = (GaussianInt(1, 0), GaussianInt(0, 1),
               GaussianInt(-1, 0), GaussianInt(0, -1))


def gauss_divmod(a: GaussianInt, b: GaussianInt):
    """Euclidean division: a = q*b + r with N(r) <= N(b)/2."""
    if b.is_zero():
        raise ZeroInput("division by zero Gaussian integer")
    n = b.norm()
    # round components of a * conj(b) / N(b) to nearest integer
    t = a * b.conjugate()
    qr = (2 * t.re + n) // (2 * n)
    qi = (2 * t.im + n) // (2 * n)
    q = GaussianInt(qr, qi)
    r = a - q * b
    return q, r


def gauss_divides(b: GaussianInt, a: GaussianInt) -> bool:
    """True iff b | a in Z[i]."""
    _, r = gauss_divmod(a, b)
    return r.is_zero()


def gauss_exact_div(a: GaussianInt, b: GaussianInt) -> GaussianInt:
    q, r = gauss_divmod(a, b)
    if not r.is_zero():
        raise ValueError(f"{b} does not divide {a} exactly")
    return q


def gauss_gcd(a: GaussianInt, b: GaussianInt) -> GaussianInt:
    while not b.is_zero():
        _, r = gauss_divmod(a, b)
        a, b = b, r
    return a


def gauss_xgcd(a: GaussianInt, b: GaussianInt):
    """Extended Euclid: returns (g, s, t) with s*a + t*b = g."""
    r0, r1 = a, b
    s0, s1 = GAUSS_ONE, GaussianInt(0, 0)
    t0, t1 = GaussianInt(0, 0), GAUSS_ONE
    while not r1.is_zero():
        q, r = gauss_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    return r0, s0, t0


def normalize_gaussian(g: GaussianInt):
    """Return (unit, canonical associate) with unit * canonical == g.

    Among the four associates the canonical one has re > 0 and
    re >= |im|; when two qualify (associates of 1+i) the one with
    im > 0 is chosen.
    """
    if g.is_zero():
        raise ZeroInput("zero has no canonical associate")
    cands = [g * u for u in GAUSS_UNITS if (g * u).re > 0 and (g * u).re >= abs((g * u).im)]
    # two candidates only for associates of 1+i (re == |im|); tie-break im > 0
    best = max(cands, key=lambda c: c.im)
    unit = gauss_exact_div(g, best)
    return unit, best


# ---------------------------------------------------------------------------
# Factorization (trial division; desk scale)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5):
        if n % p == 0:
            return n == p
    f = 7
    # wheel mod 6 starting at 7
    step = 4
    f = 7
    while f * f <= n:
        if n % f == 0:
            return False
        f += step
        step = 6 - step
    return True


def factor_int(n: int) -> dict:
    """Prime factorization of a positive integer by trial division."""
    if n <= 0:
        raise ZeroInput("factor_int requires a positive integer")
    out = {}
    for p in (2, 3, 5):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    f, step = 7, 4
    while f * f <= n:
        while n % f == 0:
            out[f] = out.get(f, 0) + 1
            n //= f
        f += step
        step = 6 - step
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def rational_factor(q: Fraction):
    """q = sign * prod p^e with e in Z.  Returns (sign, {p: e}) sorted keys."""
    q = _as_fraction(q)
    if q == 0:
        raise ZeroInput("cannot factor zero")
    sign = 1 if q > 0 else -1
    exps = dict(factor_int(abs(q.numerator)))
    for p, e in factor_int(q.denominator).items():
        exps[p] = exps.get(p, 0) - e
    return sign, {p: e for p, e in sorted(exps.items()) if e != 0}


def sqrt_minus_one_mod(p: int) -> int:
    """Smallest-witness solution of x^2 = -1 mod p, for p = 1 mod 4."""
    for a in range(2, p):
        t = pow(a, (p - 1) // 4, p)
        if (t * t) % p == p - 1:
            return t
    raise ValueError(f"no square root of -1 mod {p}")


def gaussian_prime_above(p: int) -> GaussianInt:
    """Canonical Gaussian prime above the rational prime p.

    For split p (p = 1 mod 4) this is the canonical one of the conjugate
    pair; its conjugate's normal form is the other prime above p.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p == 2:
        return GaussianInt(1, 1)
    if p % 4 == 3:
        return GaussianInt(p, 0)
    x = sqrt_minus_one_mod(p)
    pi = gauss_gcd(GaussianInt(p, 0), GaussianInt(x, -1))
    return normalize_gaussian(pi)[1]


def gaussian_factor(g: GaussianInt):
    """Factor g in Z[i].  Returns (unit, [(prime, multiplicity), ...]).

    Primes are in canonical normal form, sorted by (norm, re, im);
    unit * prod(prime^mult) == g exactly.
    """
    if g.is_zero():
        raise ZeroInput("cannot factor zero")
    factors = {}
    rest = g
    for p in sorted(factor_int(g.norm())):
        if p == 2:
            cands = [GaussianInt(1, 1)]
        elif p % 4 == 3:
            cands = [GaussianInt(p, 0)]
        else:
            pi = gaussian_prime_above(p)
            cands = [pi, normalize_gaussian(pi.conjugate())[1]]
        for pi in cands:
            while gauss_divides(pi, rest):
                factors[pi] = factors.get(pi, 0) + 1
                rest = gauss_exact_div(rest, pi)
    if rest.norm() != 1:
        raise ArithmeticError(f"factorization left non-unit remainder {rest}")
    items = sorted(factors.items(), key=lambda kv: (kv[0].norm(), kv[0].re, kv[0].im))
    return rest, items


# ---------------------------------------------------------------------------
# Text syntax: `a/b` or `a/b+c/d*i`; `i` alone means 0/1+1/1*i.

_RAT = r"[+-]?\d+(?:/\d+)?"
_ELEM_RE = _re.compile(
    rf"^(?P<re>{_RAT})?(?P<im>(?:[+-]?(?:\d+(?:/\d+)?\*)?i))?$"
)


def parse_elem(text: str, field: str | None = None) -> FieldElem:
    """Parse the element syntax (whitespace-insensitive)."""
    s = "".join(text.split())
    if not s:
        raise ValueError("empty element literal")
    m = _ELEM_RE.match(s)
    if not m or (m.group("re") is None and m.group("im") is None):
        raise ValueError(f"cannot parse element {text!r}")
    re_part = Fraction(m.group("re")) if m.group("re") else Fraction(0)
    im_txt = m.group("im")
    if im_txt is None:
        im_part = Fraction(0)
    else:
        body = im_txt[:-1]  # strip trailing 'i'
        if body in ("", "+"):
            im_part = Fraction(1)
        elif body == "-":
            im_part = Fraction(-1)
        else:
            if body.endswith("*"):
                body = body[:-1]
            im_part = Fraction(body)
    if field is None:
        field = QI if im_txt is not None else Q
    if field == Q and im_part != 0:
        raise FieldMismatch("imaginary part in a Q element literal")
    return FieldElem(re_part, im_part, field)


def _fmt_rat(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_elem(x: FieldElem) -> str:
    """Print an element; parse and print are mutually inverse on normal forms."""
    if x.im == 0:
        return _fmt_rat(x.re)
    im_abs = _fmt_rat(abs(x.im))
    im_txt = f"{im_abs}*i"
    if x.re == 0:
        return im_txt if x.im > 0 else f"-{im_txt}"
    sign = "+" if x.im > 0 else "-"
    return f"{_fmt_rat(x.re)}{sign}{im_txt}"
