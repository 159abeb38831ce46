"""Ball-basis ring topologies, locality, and independent sums.

A topology is presented by a defining ring R; the neighborhoods of 0
are the balls c*R for nonzero scalars c.  Comparisons reduce to ring
embeddability, the locality predicate is decided with explicit witness
families, and product decompositions are certified trial-by-trial with
re-verified witnesses.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field

from .errors import (
    ConstructionFailed, FieldMismatch, SpecMismatch, ZeroInput,
)
from .approx import approximate, at_least, congruence, exact_value
from .fields import FieldElem, elem, one, zero
from .rings import (
    GluedRing, MultiValuationRing, contains, embeddability_witness,
    format_ring, parse_ring, underlying_valuations,
)
from .valuations import format_valuation, uniformizer, val


@dataclass(frozen=True)
class TopologySpec:
    """The ring topology with neighborhood basis {c*R : c nonzero}."""

    ring: object

    @property
    def field(self):
        return self.ring.field

    def __str__(self):
        return f"topo({format_ring(self.ring)})"


@dataclass(frozen=True)
class Ball:
    """The set c*R."""

    scale: FieldElem
    ring: object

    def __post_init__(self):
        if self.scale.is_zero():
            raise ZeroInput("ball scale must be nonzero")

    def member(self, x: FieldElem) -> bool:
        return contains(self.ring, x / self.scale)

    def __str__(self):
        return f"{self.scale}*{format_ring(self.ring)}"


def ball_intersection_witness(tau: TopologySpec, c1: FieldElem,
                              c2: FieldElem) -> FieldElem:
    """A scale c with c*R inside c1*R and c2*R: the filter-basis law."""
    vals = underlying_valuations(tau.ring)
    c = approximate([
        exact_value(v, max(val(v, c1), val(v, c2))) for v in vals
    ])
    if isinstance(tau.ring, GluedRing):
        # push one level deeper so every scaled residue becomes zero,
        # making the inclusion hold for all ring members at once
        for v in vals:
            c = c * uniformizer(v)
    for ci in (c1, c2):
        if any(val(v, c) < val(v, ci) for v in vals):
            raise ConstructionFailed("filter-basis witness failed")
    return c


# ---------------------------------------------------------------------------
# Coarsening and locality


def is_coarser(tau1: TopologySpec, tau2: TopologySpec) -> bool:
    """tau1 is coarser than tau2 iff the defining ring of tau2 embeds
    into that of tau1 after scaling."""
    if tau1.field != tau2.field:
        raise FieldMismatch("topologies over different fields")
    return embeddability_witness(tau2.ring, tau1.ring).status == "witness"


@dataclass(frozen=True)
class TopoLocalityVerdict:
    verdict: bool
    witnesses: tuple = ()
    tag: str = ""
    ball: FieldElem | None = None  # scale of the ball housing the witnesses


def is_local_topology(tau: TopologySpec) -> TopoLocalityVerdict:
    """Locality: inside any ball, every point x has 1/x or 1/(1-x)
    uniformly bounded.  A single valuation decides this by sign of
    val(x).  With two or more underlying valuations a witness family
    x_k in R has val_1(1/x_k) = -k while val_2(1/(1-x_k)) <= -k, so no
    single bound works."""
    vals = underlying_valuations(tau.ring)
    if len(vals) == 1:
        return TopoLocalityVerdict(True, (), "v_topology")
    v1, v2 = vals[0], vals[1]
    # On a glued ring the witnesses have mismatched residues, so the
    # housing ball is pushed out by one uniformizer on each side.
    ball = one(tau.field)
    if isinstance(tau.ring, GluedRing):
        ball = (uniformizer(v1) * uniformizer(v2)).inverse()
    witnesses = []
    for k in range(1, 5):
        targets = [exact_value(v1, k), congruence(v2, one(tau.field), k)]
        targets += [at_least(v, 0) for v in vals[2:]]
        x = approximate(targets)
        inv = x.inverse()
        other = (one(tau.field) - x).inverse()
        if val(v1, inv) != -k or val(v2, other) > -k:
            raise ConstructionFailed("locality escape witness failed")
        if not Ball(ball, tau.ring).member(x):
            raise ConstructionFailed("locality witness left the ball")
        witnesses.append(x)
    return TopoLocalityVerdict(False, tuple(witnesses), "escape_family", ball)


def v_coarsenings(tau: TopologySpec) -> list:
    """The valuations whose topologies coarsen tau."""
    return list(underlying_valuations(tau.ring))


LOCAL_RING_NONLOCAL_TOPOLOGY = "local_ring_nonlocal_topology"


@dataclass(frozen=True)
class LocalComponents:
    components: tuple
    flag: str = ""


def local_components(tau: TopologySpec) -> LocalComponents:
    """Topologies of the key localizations of the defining ring.  For a
    glued ring the single component is the spec itself, flagged because
    the ring is local while its topology is not."""
    if isinstance(tau.ring, GluedRing):
        return LocalComponents((tau,), LOCAL_RING_NONLOCAL_TOPOLOGY)
    comps = tuple(TopologySpec(MultiValuationRing((v,)))
                  for v in tau.ring.vals)
    return LocalComponents(comps)


# ---------------------------------------------------------------------------
# Independent-sum certification


@dataclass
class Report:
    title: str
    lines: list = dc_field(default_factory=list)
    ok: bool = True

    def add(self, line: str):
        self.lines.append(line)

    def witness(self, line: str):
        self.lines.append(f"WITNESS: {line}")

    def fail(self, line: str):
        self.lines.append(f"FAILED: {line}")
        self.ok = False

    def render(self) -> str:
        head = [f"REPORT: {self.title}"]
        tail = [f"RESULT: {'pass' if self.ok else 'fail'}"]
        return "\n".join(head + self.lines + tail)


def _sub_rng(seed: int, index: int) -> random.Random:
    return random.Random(seed * 1_000_003 + index)


def _check_partition(tau: TopologySpec, parts):
    whole = underlying_valuations(tau.ring)
    seen = []
    for part in parts:
        if not isinstance(part.ring, MultiValuationRing):
            raise SpecMismatch("parts must be valuation-intersection specs")
        seen.extend(part.ring.vals)
    if len(seen) != len(set(seen)) or set(seen) != set(whole):
        raise SpecMismatch("parts must partition the underlying valuations")


def independent_sum_check(tau: TopologySpec, parts, trials: int = 100,
                          seed: int = 0) -> Report:
    """Certify that tau decomposes as the independent sum of the parts.

    Per trial: (a) the intersection of random part-balls contains a
    tau-ball and conversely every tau-ball contains such an
    intersection (the filter-basis law in both directions), and (b) any
    family of part-balls with arbitrary centers has a common point,
    produced by weak approximation and re-verified by membership.
    """
    _check_partition(tau, parts)
    vals = underlying_valuations(tau.ring)
    report = Report(f"independent-sum {tau} ~ "
                    + " + ".join(str(p) for p in parts))
    for t in range(trials):
        rng = _sub_rng(seed, t)
        # (a) forward: a common scale works for all parts at once
        exps = {v: rng.randint(-4, 4) for v in vals}
        c = approximate([exact_value(v, exps[v]) for v in vals])
        for part in parts:
            for v in part.ring.vals:
                if val(v, c) < exps[v]:
                    report.fail(f"trial {t}: forward inclusion at {v}")
        report.witness(f"trial {t} forward c={c} exps="
                       + ",".join(f"{format_valuation(v)}:{exps[v]}"
                                  for v in vals))
        # (a) converse: from part scales, one tau-ball inside them all
        part_exps = {v: rng.randint(-4, 4) for v in vals}
        d = approximate([exact_value(v, part_exps[v]) for v in vals])
        if any(val(v, d) < part_exps[v] for v in vals):
            report.fail(f"trial {t}: converse inclusion")
        report.witness(f"trial {t} converse c={d}")
        # (b) density: balls around arbitrary centers meet
        targets = []
        desc = []
        for part in parts:
            a = elem(rng.randint(-50, 50), 0, tau.field)
            m = rng.randint(0, 4)
            for v in part.ring.vals:
                targets.append(congruence(v, a, m))
                desc.append(f"{format_valuation(v)}:a={a},m={m}")
        x = approximate(targets)
        for tgt in targets:
            if not tgt.satisfied_by(x):
                report.fail(f"trial {t}: density witness {x}")
        report.witness(f"trial {t} density x={x} " + " ".join(desc))
    return report


def density_witness(tau: TopologySpec, centers, exponents) -> FieldElem:
    """A point of the intersection of the balls a_i + p_i^m_i * O_i."""
    vals = underlying_valuations(tau.ring)
    targets = [congruence(v, a, m)
               for v, a, m in zip(vals, centers, exponents)]
    x = approximate(targets)
    for tgt in targets:
        if not tgt.satisfied_by(x):
            raise ConstructionFailed("density witness failed")
    return x


_PRIME_POOL = (2, 3, 5, 7, 11, 13)


def associativity_check(seed: int = 0, trials: int = 20) -> Report:
    """Nested two-part decompositions agree with the flat three-part
    one: ((p,q),r) and (p,(q,r)) both certify on random prime triples."""
    from .valuations import rational_valuation
    report = Report("independent-sum associativity")
    for t in range(trials):
        rng = _sub_rng(seed, t)
        p, q, r = rng.sample(_PRIME_POOL, 3)
        vp, vq, vr = (rational_valuation(n) for n in (p, q, r))
        whole = TopologySpec(MultiValuationRing((vp, vq, vr)))
        tp, tq, tr = (TopologySpec(MultiValuationRing((v,)))
                      for v in (vp, vq, vr))
        tpq = TopologySpec(MultiValuationRing((vp, vq)))
        tqr = TopologySpec(MultiValuationRing((vq, vr)))
        groupings = [
            ("left", [tpq, tr], [(tpq, [tp, tq])]),
            ("right", [tp, tqr], [(tqr, [tq, tr])]),
            ("flat", [tp, tq, tr], []),
        ]
        for tag, top_parts, inner in groupings:
            sub = independent_sum_check(whole, top_parts, trials=1,
                                        seed=seed * 7 + t)
            if not sub.ok:
                report.fail(f"trial {t} ({p},{q},{r}) {tag}: outer split")
            for mid, mid_parts in inner:
                sub2 = independent_sum_check(mid, mid_parts, trials=1,
                                             seed=seed * 7 + t)
                if not sub2.ok:
                    report.fail(f"trial {t} ({p},{q},{r}) {tag}: inner split")
        centers = [elem(rng.randint(0, n * n - 1)) for n in (p, q, r)]
        x = density_witness(whole, centers, (2, 2, 2))
        report.witness(
            f"trial {t} primes=({p},{q},{r}) centers="
            + ",".join(str(a) for a in centers) + f" x={x}")
    return report


def parse_topology(text: str) -> TopologySpec:
    s = "".join(text.split())
    if s.startswith("topo(") and s.endswith(")"):
        s = s[5:-1]
    return TopologySpec(parse_ring(s))
