"""Constructive weak approximation on Q and Q(i).

Each request is translated into congruences modulo prime powers on a
common model (Z or Z[i]), solved by the Chinese remainder theorem, and
divided by an auxiliary denominator to realize negative valuations.
The result is re-verified against every target before it is returned,
so the operation is self-certifying.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    ConstructionFailed, FieldMismatch, InconsistentTargets, SameValuation,
)
from .fields import (
    Q, QI, FieldElem, GaussianInt, elem, gauss_divmod, gauss_exact_div,
    gauss_xgcd, one, zero,
)
from .valuations import INF, Valuation, val

EXACT = "exact"
AT_LEAST = "atleast"
GREATER = "greater"
CONGRUENCE = "congruence"


@dataclass(frozen=True)
class ValueTarget:
    valuation: Valuation
    kind: str
    n: int | None = None
    center: FieldElem | None = None
    min_val: int | None = None

    def satisfied_by(self, x: FieldElem) -> bool:
        v = self.valuation
        if self.kind == EXACT:
            return val(v, x) == self.n
        if self.kind == AT_LEAST:
            return val(v, x) >= self.n
        if self.kind == GREATER:
            return val(v, x) > self.n
        return val(v, x - self.center) >= self.min_val

    def __str__(self):
        v = self.valuation
        if self.kind == EXACT:
            return f"{v}={self.n}"
        if self.kind == AT_LEAST:
            return f"{v}>={self.n}"
        if self.kind == GREATER:
            return f"{v}>{self.n}"
        return f"{v}:x-{self.center}>={self.min_val}"


def exact_value(v: Valuation, n: int) -> ValueTarget:
    return ValueTarget(v, EXACT, n=n)


def at_least(v: Valuation, n: int) -> ValueTarget:
    return ValueTarget(v, AT_LEAST, n=n)


def greater_than(v: Valuation, n: int) -> ValueTarget:
    return ValueTarget(v, GREATER, n=n)


def congruence(v: Valuation, center: FieldElem, min_val: int) -> ValueTarget:
    return ValueTarget(v, CONGRUENCE, center=center, min_val=min_val)


# ---------------------------------------------------------------------------
# CRT helpers


def _crt_int(residues, moduli) -> int:
    x, m = 0, 1
    for r, n in zip(residues, moduli):
        if n == 1:
            continue
        g = math.gcd(m, n)
        assert g == 1, "moduli must be coprime"
        # x' = x mod m, x' = r mod n
        t = ((r - x) * pow(m, -1, n)) % n
        x, m = x + m * t, m * n
    return x % m, m


def _gauss_pow(g: GaussianInt, k: int) -> GaussianInt:
    out = GaussianInt(1, 0)
    for _ in range(k):
        out = out * g
    return out


def _gauss_mod(a: GaussianInt, m: GaussianInt) -> GaussianInt:
    _, r = gauss_divmod(a, m)
    return r


def _gauss_inv_mod(a: GaussianInt, m: GaussianInt) -> GaussianInt:
    g, s, _ = gauss_xgcd(a, m)
    if g.norm() != 1:
        raise ValueError("element not invertible modulo m")
    # s*a = g (unit); divide by the unit g
    return _gauss_mod(s * g.conjugate(), m)  # g^-1 = conj(g) for units


def _crt_gauss(residues, moduli) -> GaussianInt:
    x, m = GaussianInt(0, 0), GaussianInt(1, 0)
    for r, n in zip(residues, moduli):
        if n.norm() == 1:
            continue
        t = _gauss_mod((r - x) * _gauss_inv_mod(m, n), n)
        x, m = x + m * t, m * n
    return _gauss_mod(x, m), m


# ---------------------------------------------------------------------------
# Reduction of a v-integral field element modulo a prime power


def _reduce_rational(x: Fraction, p: int, k: int) -> int:
    """x mod p^k for a p-integral rational x."""
    num, den = x.numerator, x.denominator
    s = 0
    while num and num % p == 0:
        num //= p
        s += 1
    while den % p == 0:
        den //= p
        s -= 1
    if x == 0:
        return 0
    assert s >= 0, "element is not p-integral"
    mod = p ** k
    if s >= k:
        return 0
    return (p ** s * num * pow(den, -1, mod)) % mod


def _reduce_gauss(x: FieldElem, pi: GaussianInt, k: int) -> GaussianInt:
    """x mod pi^k for a pi-integral element of Q(i)."""
    if x.is_zero():
        return GaussianInt(0, 0)
    d = x.re.denominator * x.im.denominator // math.gcd(
        x.re.denominator, x.im.denominator
    )
    g = GaussianInt(int(x.re * d), int(x.im * d))
    dg = GaussianInt(d, 0)
    s = t = 0
    while True:
        q, r = gauss_divmod(g, pi)
        if not r.is_zero() or g.is_zero():
            break
        g, s = q, s + 1
    while True:
        q, r = gauss_divmod(dg, pi)
        if not r.is_zero():
            break
        dg, t = q, t + 1
    assert s - t >= 0, "element is not pi-integral"
    if s - t >= k:
        return GaussianInt(0, 0)
    mod = _gauss_pow(pi, k)
    return _gauss_mod(_gauss_pow(pi, s - t) * g * _gauss_inv_mod(dg, mod), mod)


# ---------------------------------------------------------------------------
# The approximation routine


def _shift_exponent(t: ValueTarget) -> int:
    """Denominator exponent making the scaled constraint integral."""
    v = t.valuation
    if t.kind in (EXACT, AT_LEAST):
        return max(0, -t.n)
    if t.kind == GREATER:
        return max(0, -(t.n + 1))
    lo = -t.min_val
    if t.center is not None and not t.center.is_zero():
        vc = val(v, t.center)
        lo = max(lo, -vc)
    return max(0, lo)


def approximate(targets) -> FieldElem:
    """Return a nonzero x meeting every target exactly.

    Raises InconsistentTargets when a valuation repeats, FieldMismatch
    when the targets mix fields.
    """
    targets = list(targets)
    if not targets:
        raise InconsistentTargets("at least one target required")
    field = targets[0].valuation.field
    seen = set()
    for t in targets:
        if t.valuation.field != field:
            raise FieldMismatch("targets mix base fields")
        if t.valuation in seen:
            raise InconsistentTargets(f"valuation {t.valuation} repeated")
        seen.add(t.valuation)
        if t.kind == CONGRUENCE and t.center.field != field:
            raise FieldMismatch("congruence center in the wrong field")
    # GreaterThan(n) is realized as ExactValue(n+1)
    targets = [
        exact_value(t.valuation, t.n + 1) if t.kind == GREATER else t
        for t in targets
    ]
    shifts = {t.valuation: _shift_exponent(t) for t in targets}

    if field == Q:
        x = _approximate_q(targets, shifts)
    else:
        x = _approximate_qi(targets, shifts)
    for t in targets:
        if not t.satisfied_by(x):
            raise ConstructionFailed(f"{x} fails target {t}")
    if x.is_zero():
        raise ConstructionFailed("approximation produced zero")
    return x


def _approximate_q(targets, shifts) -> FieldElem:
    n_scale = Fraction(1)
    for t in targets:
        n_scale *= t.valuation.p ** shifts[t.valuation]
    residues, moduli = [], []
    for t in targets:
        p, sh = t.valuation.p, shifts[t.valuation]
        if t.kind == EXACT:
            a = t.n + sh
            residues.append(p ** a)
            moduli.append(p ** (a + 1))
        elif t.kind == AT_LEAST:
            a = t.n + sh
            if a <= 0:
                residues.append(0)
                moduli.append(1)
            else:
                residues.append(0)
                moduli.append(p ** a)
        else:  # congruence
            b = t.min_val + sh
            if b <= 0:
                residues.append(0)
                moduli.append(1)
            else:
                scaled = t.center.re * n_scale
                residues.append(_reduce_rational(scaled, p, b))
                moduli.append(p ** b)
    y, m = _crt_int(residues, moduli)
    if y == 0:
        y = m
    return elem(Fraction(y) / n_scale)


def _approximate_qi(targets, shifts) -> FieldElem:
    n_scale = GaussianInt(1, 0)
    for t in targets:
        n_scale = n_scale * _gauss_pow(t.valuation.pi, shifts[t.valuation])
    residues, moduli = [], []
    for t in targets:
        pi, sh = t.valuation.pi, shifts[t.valuation]
        if t.kind == EXACT:
            a = t.n + sh
            residues.append(_gauss_pow(pi, a))
            moduli.append(_gauss_pow(pi, a + 1))
        elif t.kind == AT_LEAST:
            a = t.n + sh
            if a <= 0:
                residues.append(GaussianInt(0, 0))
                moduli.append(GaussianInt(1, 0))
            else:
                residues.append(GaussianInt(0, 0))
                moduli.append(_gauss_pow(pi, a))
        else:
            b = t.min_val + sh
            if b <= 0:
                residues.append(GaussianInt(0, 0))
                moduli.append(GaussianInt(1, 0))
            else:
                scaled = t.center * n_scale.to_elem()
                residues.append(_reduce_gauss(scaled, pi, b))
                moduli.append(_gauss_pow(pi, b))
    y, m = _crt_gauss(residues, moduli)
    if y.is_zero():
        y = m
    return y.to_elem() / n_scale.to_elem()


def separate(v1: Valuation, v2: Valuation) -> FieldElem:
    """An x with val_1(x) > 0 and val_2(x - 1) > 0."""
    if v1 == v2:
        raise SameValuation("separate needs two distinct valuations")
    if v1.field != v2.field:
        raise FieldMismatch("valuations on different fields")
    return approximate([
        congruence(v1, zero(v1.field), 1),
        congruence(v2, one(v1.field), 1),
    ])
