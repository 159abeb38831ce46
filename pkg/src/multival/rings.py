"""Finitely-described subrings of Q and Q(i).

Two variants are supported: intersections of rank-one valuation rings
(semilocal, non-local once two valuations are involved) and the local
ring obtained by gluing two valuation rings along an identification of
their residue fields.  Membership, units, locality, rank-one module
membership with exact certificates, independence, and embeddability
are all decidable here.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    AllZero, ConstructionFailed, FieldMismatch, NotInClosure, SameValuation,
    Undecided, UnsupportedArity, UnsupportedRing, ZeroInput,
)
from .approx import approximate, at_least, congruence, exact_value
from .fields import Q, QI, FieldElem, elem, one, zero
from .valuations import (
    INF, ResidueElem, Valuation, conjugate_valuation, format_valuation,
    parse_valuation, residue, uniformizer, val,
)

ISO_ID = "id"
ISO_CONJ = "conj"


@dataclass(frozen=True)
class MultiValuationRing:
    """R = the intersection of the valuation rings O_v, v in vals."""

    vals: tuple

    def __post_init__(self):
        if not self.vals:
            raise ValueError("at least one valuation required")
        if len(set(self.vals)) != len(self.vals):
            raise SameValuation("valuations must be pairwise distinct")
        if len({v.field for v in self.vals}) != 1:
            raise FieldMismatch("valuations on different fields")

    @property
    def field(self):
        return self.vals[0].field

    def __str__(self):
        return format_ring(self)


@dataclass(frozen=True)
class GluedRing:
    """R = {x in O_1 and O_2 : iso(res_1(x)) = res_2(x)}."""

    v1: Valuation
    v2: Valuation
    iso: str = ISO_ID

    def __post_init__(self):
        if self.v1 == self.v2:
            raise SameValuation("gluing needs two distinct valuations")
        if self.v1.field != self.v2.field:
            raise FieldMismatch("valuations on different fields")
        if self.v1.residue_size() != self.v2.residue_size():
            raise ValueError("residue fields of unequal size cannot be glued")
        if self.iso not in (ISO_ID, ISO_CONJ):
            raise ValueError(f"unknown residue identification {self.iso!r}")

    @property
    def field(self):
        return self.v1.field

    @property
    def vals(self):
        return (self.v1, self.v2)

    def __str__(self):
        return format_ring(self)


def underlying_valuations(R) -> tuple:
    return tuple(R.vals)


def apply_iso(iso: str, r: ResidueElem) -> ResidueElem:
    """The residue-field identification; both choices are involutions,
    so the same map serves as its own inverse."""
    if iso == ISO_ID or r.kind != "fp2":
        return r
    return ResidueElem.fp2(r.p, r.a, -r.b)


def lift_residue(v: Valuation, r: ResidueElem) -> FieldElem:
    """A field element whose residue at v is r."""
    if r.is_infinite():
        raise ZeroInput("cannot lift the infinite residue")
    if r.kind == "fp2":
        return elem(r.a, r.b, QI)
    return elem(r.a, 0, v.field)


# ---------------------------------------------------------------------------
# Membership and units


def contains(R, x: FieldElem) -> bool:
    if R.field != x.field:
        raise FieldMismatch(f"element of {x.field} in a ring over {R.field}")
    if isinstance(R, MultiValuationRing):
        return all(val(v, x) >= 0 for v in R.vals)
    if val(R.v1, x) < 0 or val(R.v2, x) < 0:
        return False
    return apply_iso(R.iso, residue(R.v1, x)) == residue(R.v2, x)


def is_unit(R, x: FieldElem) -> bool:
    if x.is_zero():
        return False
    return contains(R, x) and contains(R, x.inverse())


def in_jacobson(R, x: FieldElem) -> bool:
    """Membership in the Jacobson radical: the intersection of the
    maximal ideals (multi-valuation case) or the unique maximal ideal
    (glued case)."""
    if R.field != x.field:
        raise FieldMismatch(f"element of {x.field} in a ring over {R.field}")
    if isinstance(R, MultiValuationRing):
        return all(val(v, x) > 0 for v in R.vals)
    return contains(R, x) and residue(R.v1, x).is_zero() \
        and residue(R.v2, x).is_zero()


# ---------------------------------------------------------------------------
# Locality


@dataclass(frozen=True)
class LocalityVerdict:
    verdict: bool
    witness: FieldElem | None = None
    tag: str = ""

    def verify(self, R) -> bool:
        if self.verdict:
            return self.witness is None
        x = self.witness
        return (contains(R, x) and not is_unit(R, x)
                and not is_unit(R, one(R.field) - x))


def is_local_ring(R) -> LocalityVerdict:
    """Locality via the x / 1-x unit dichotomy.

    A glued ring is local: a member with nonzero residue is a unit,
    and when the residue is zero, 1-x has residue 1 on both sides.  An
    intersection of two or more valuation rings has a member x with
    val_1(x) > 0 and val_2(1-x) > 0, so neither x nor 1-x is a unit.
    """
    if isinstance(R, GluedRing):
        return LocalityVerdict(True, None, "residue_dichotomy")
    if len(R.vals) == 1:
        return LocalityVerdict(True, None, "valuation_ring")
    v1, v2 = R.vals[0], R.vals[1]
    targets = [congruence(v1, zero(R.field), 1),
               congruence(v2, one(R.field), 1)]
    targets += [at_least(v, 0) for v in R.vals[2:]]
    x = approximate(targets)
    verdict = LocalityVerdict(False, x, "nonunit_pair")
    if not verdict.verify(R):
        raise ConstructionFailed("locality witness failed re-verification")
    return verdict


# ---------------------------------------------------------------------------
# Module membership with certificates


@dataclass(frozen=True)
class ModuleCertificate:
    """An exact linear expression x = sum r_j y_j with r_j in R."""

    generators: tuple
    target: FieldElem
    coefficients: tuple

    def verify(self, R) -> bool:
        total = zero(self.target.field)
        for r, y in zip(self.coefficients, self.generators):
            if not contains(R, r):
                return False
            total = total + r * y
        return total == self.target


def _min_vector(vals, y):
    return tuple(min(val(v, e) for e in y) for v in vals)


def module_generator(y, R):
    """A single generator g of the module sum R*y_1 + ... + R*y_n over
    a multi-valuation ring, with an exact certificate g = sum r_j y_j.

    g is built so exactly one term attains each valuation's minimum,
    which pins val_i(g) = min_j val_i(y_j) without any cancellation.
    """
    if not isinstance(R, MultiValuationRing):
        raise UnsupportedRing("module_generator needs a multi-valuation ring")
    y = tuple(y)
    if not y:
        raise AllZero("at least one generator required")
    if all(e.is_zero() for e in y):
        raise AllZero("all generators are zero")
    if len(y) == 1:
        return y[0], ModuleCertificate(y, y[0], (one(R.field),))
    mins = _min_vector(R.vals, y)
    lead = []  # index of the chosen minimum-attaining generator per valuation
    for v, m in zip(R.vals, mins):
        lead.append(next(j for j, e in enumerate(y) if val(v, e) == m))
    coeffs = []
    for j, e in enumerate(y):
        if e.is_zero():
            coeffs.append(zero(R.field))
            continue
        targets = []
        for i, (v, m) in enumerate(zip(R.vals, mins)):
            if lead[i] == j:
                targets.append(exact_value(v, 0))
            else:
                targets.append(at_least(v, max(0, m - val(v, e) + 1)))
        coeffs.append(approximate(targets))
    g = zero(R.field)
    for r, e in zip(coeffs, y):
        g = g + r * e
    cert = ModuleCertificate(y, g, tuple(coeffs))
    if tuple(val(v, g) for v in R.vals) != mins or not cert.verify(R):
        raise ConstructionFailed("module generator failed re-verification")
    return g, cert


@dataclass(frozen=True)
class MembershipAnswer:
    member: bool
    certificate: ModuleCertificate | None = None
    reason: str = ""

    def __bool__(self):
        return self.member


def module_membership(x: FieldElem, y, R) -> MembershipAnswer:
    """Decide x in R*y_1 + ... + R*y_n, with a verified certificate on
    the positive side."""
    y = tuple(e for e in y if not e.is_zero())
    if x.field != R.field or any(e.field != R.field for e in y):
        raise FieldMismatch("module data in the wrong field")
    if not y:
        if x.is_zero():
            return MembershipAnswer(True, ModuleCertificate((), x, ()))
        return MembershipAnswer(False, None, "zero module")
    if x.is_zero():
        cert = ModuleCertificate(y, x, tuple(zero(R.field) for _ in y))
        return MembershipAnswer(True, cert)
    if isinstance(R, MultiValuationRing):
        return _membership_mv(x, y, R)
    return _membership_glued(x, y, R)


def _membership_mv(x, y, R):
    mins = _min_vector(R.vals, y)
    for v, m in zip(R.vals, mins):
        if val(v, x) < m:
            return MembershipAnswer(
                False, None,
                f"val at {format_valuation(v)} is {val(v, x)} < {m}")
    g, gcert = module_generator(y, R)
    q = x / g  # in R: val_i(q) = val_i(x) - min_i >= 0
    coeffs = tuple(q * r for r in gcert.coefficients)
    cert = ModuleCertificate(y, x, coeffs)
    if not cert.verify(R):
        raise ConstructionFailed("membership certificate failed")
    return MembershipAnswer(True, cert)


def _residue_scalars(v: Valuation):
    q = v.residue_size()
    if v.splitting == "inert":
        return [ResidueElem.fp2(v.p, a, b)
                for a in range(v.p) for b in range(v.p)]
    return [ResidueElem.fp(v.p, a) for a in range(q)]


def _glued_scalar_lift(R: GluedRing, rho: ResidueElem) -> FieldElem:
    """A ring member whose residues are rho and iso(rho)."""
    if rho.kind == "fp":
        return elem(rho.a, 0, R.field)  # rational integers glue to themselves
    lift1 = lift_residue(R.v1, rho)
    lift2 = lift_residue(R.v2, apply_iso(R.iso, rho))
    return approximate([congruence(R.v1, lift1, 1),
                        congruence(R.v2, lift2, 1)])


def _membership_glued(x, y, R):
    if len(y) > 2:
        raise UnsupportedArity("glued-ring membership supports <= 2 generators")
    vals = R.vals
    mv = MultiValuationRing(vals)
    g, gcert = module_generator(y, mv)
    for v in vals:
        if val(v, x) < val(v, g):
            return MembershipAnswer(
                False, None,
                f"val at {format_valuation(v)} is {val(v, x)} < {val(v, g)}")
    z = x / g
    units = tuple(e / g for e in y)
    rz = [residue(v, z) for v in vals]
    ru = [[residue(v, u) for u in units] for v in vals]
    scalars = _residue_scalars(R.v1)
    for combo in _scalar_combos(scalars, len(y)):
        lhs1 = _residue_sum(
            [r * u for r, u in zip(combo, ru[0])], R.v1)
        lhs2 = _residue_sum(
            [apply_iso(R.iso, r) * u for r, u in zip(combo, ru[1])], R.v2)
        if lhs1 == rz[0] and lhs2 == rz[1]:
            base = [_glued_scalar_lift(R, r) if not r.is_zero()
                    else zero(R.field) for r in combo]
            delta = z
            for b, u in zip(base, units):
                delta = delta - b * u
            # delta has residue 0 on both sides, so delta * (anything in
            # the intersection ring) lies in the glued ring
            coeffs = tuple(b + delta * c
                           for b, c in zip(base, gcert.coefficients))
            cert = ModuleCertificate(y, x, coeffs)
            if not cert.verify(R):
                raise ConstructionFailed("glued membership certificate failed")
            return MembershipAnswer(True, cert)
    return MembershipAnswer(
        False, None,
        f"all {len(scalars) ** len(y)} residue-scalar combinations fail")


def _scalar_combos(scalars, n):
    if n == 1:
        for a in scalars:
            yield (a,)
    else:
        for a in scalars:
            for b in scalars:
                yield (a, b)


def _residue_sum(parts, v):
    total = ResidueElem.fp2(v.p, 0, 0) if v.splitting == "inert" \
        else ResidueElem.fp(v.p, 0)
    for r in parts:
        total = total + r
    return total


def independent(y, R) -> bool:
    """True iff no entry lies in the module generated by the others."""
    y = tuple(y)
    for i in range(len(y)):
        rest = y[:i] + y[i + 1:]
        if module_membership(y[i], rest, R):
            return False
    return True


def re_slide_verify(y, a: FieldElem, R, vals) -> bool:
    """Check that y is scrambled at vals and that each a*y_i stays out
    of the module generated by the remaining entries."""
    from .scramble import is_scrambled
    if a.is_zero():
        raise ZeroInput("the scalar must be nonzero")
    y = tuple(y)
    if not is_scrambled(y, vals):
        return False
    for i in range(len(y)):
        rest = y[:i] + y[i + 1:]
        if module_membership(a * y[i], rest, R):
            return False
    return True


# ---------------------------------------------------------------------------
# Key localizations and integrality


def key_localizations(R) -> list:
    """The local rings whose intersection recovers R: one valuation
    ring per valuation, or the glued ring itself (already local)."""
    if isinstance(R, GluedRing):
        return [R]
    return [MultiValuationRing((v,)) for v in R.vals]


def integrality_witness(x: FieldElem, R: GluedRing):
    """Monic quadratic data (s, p) with s, p in R and x^2 - s*x + p = 0.

    The companion root x' swaps the two residues of x through the
    identification, so both symmetric functions glue.  For a conjugate
    pair of Gaussian valuations the complex conjugate does the job
    exactly; otherwise x' comes from weak approximation.
    """
    if not isinstance(R, GluedRing):
        raise UnsupportedRing("integrality witnesses are for glued rings")
    if val(R.v1, x) < 0 or val(R.v2, x) < 0:
        raise NotInClosure(f"{x} has a negative valuation")
    if R.field == QI and R.iso == ISO_ID \
            and R.v2 == conjugate_valuation(R.v1):
        xp = x.conjugate()
    elif contains(R, x):
        xp = x
    else:
        lift1 = lift_residue(R.v1, apply_iso(R.iso, residue(R.v2, x)))
        lift2 = lift_residue(R.v2, apply_iso(R.iso, residue(R.v1, x)))
        xp = approximate([congruence(R.v1, lift1, 1),
                          congruence(R.v2, lift2, 1)])
    s = x + xp
    p = x * xp
    if not contains(R, s) or not contains(R, p):
        raise ConstructionFailed("witness coefficients escaped the ring")
    if x * x - s * x + p != zero(R.field):
        raise ConstructionFailed("witness polynomial does not vanish")
    return s, p


# ---------------------------------------------------------------------------
# Embeddability


@dataclass(frozen=True)
class EmbedResult:
    status: str  # 'witness' | 'refuted'
    c: FieldElem | None = None
    refuting_valuation: Valuation | None = None
    source: object = None

    def counterexample(self, c: FieldElem) -> FieldElem:
        """For a refuted pair: an x in the source ring with c*x outside
        the target, for any proposed nonzero scalar c."""
        if self.status != "refuted":
            raise ValueError("no counterexample for a witnessed embedding")
        if c.is_zero():
            raise ZeroInput("the scalar must be nonzero")
        A, w = self.source, self.refuting_valuation
        targets = [exact_value(w, -val(w, c) - 1)]
        for v in underlying_valuations(A):
            if isinstance(A, GluedRing):
                targets.append(congruence(v, zero(A.field), 1))
            else:
                targets.append(at_least(v, 0))
        x = approximate(targets)
        if not contains(A, x) or val(w, c * x) >= 0:
            raise ConstructionFailed("embeddability counterexample failed")
        return x


def embeddability_witness(A, B) -> EmbedResult:
    """Search for a nonzero c with c*A contained in B.

    Decided from a catalogue of structural rules on the two specs;
    refutations carry a valuation where scaled elements of A escape B.
    """
    if A.field != B.field:
        raise FieldMismatch("rings over different fields")
    sa = set(underlying_valuations(A))
    sb = set(underlying_valuations(B))
    if isinstance(B, MultiValuationRing):
        if sb <= sa:
            return EmbedResult("witness", one(A.field))
        w = min(sb - sa, key=format_valuation)
        return EmbedResult("refuted", None, w, A)
    if isinstance(B, GluedRing):
        if sb <= sa:
            if isinstance(A, GluedRing) and A == B:
                return EmbedResult("witness", one(A.field))
            c = uniformizer(B.v1) * uniformizer(B.v2)
            return EmbedResult("witness", c)
        w = min(sb - sa, key=format_valuation)
        return EmbedResult("refuted", None, w, A)
    raise Undecided(f"no embeddability rule for {A} into {B}")


def co_embeddable(A, B):
    """Witness pair (c_ab, c_ba) when both directions embed, else None."""
    ab = embeddability_witness(A, B)
    ba = embeddability_witness(B, A)
    if ab.status == "witness" and ba.status == "witness":
        return ab.c, ba.c
    return None


# ---------------------------------------------------------------------------
# Text syntax: mv(Q:2,Q:3) and glued(Qi:2+1*i, Qi:2-1*i, id)


def parse_ring(text: str):
    s = "".join(text.split())
    if s.startswith("mv(") and s.endswith(")"):
        parts = s[3:-1].split(",")
        return MultiValuationRing(tuple(parse_valuation(p) for p in parts))
    if s.startswith("glued(") and s.endswith(")"):
        parts = s[6:-1].split(",")
        if len(parts) == 2:
            parts.append(ISO_ID)
        if len(parts) != 3:
            raise ValueError(f"cannot parse ring spec {text!r}")
        return GluedRing(parse_valuation(parts[0]),
                         parse_valuation(parts[1]), parts[2])
    raise ValueError(f"cannot parse ring spec {text!r}")


def format_ring(R) -> str:
    if isinstance(R, MultiValuationRing):
        return "mv(" + ",".join(format_valuation(v) for v in R.vals) + ")"
    return (f"glued({format_valuation(R.v1)},"
            f"{format_valuation(R.v2)},{R.iso})")
