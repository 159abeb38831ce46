"""Command-line front end.

Line-oriented output with stable `KEY: value` fields; every numeric
claim is accompanied by a WITNESS line that can be re-verified with
`--audit`.  Exit codes: 0 success/holds, 1 usage error, 2 refutation
or counterexample, 3 undecided/unknown.
"""

from __future__ import annotations

import argparse
import re as _re
import sys

from .errors import MultivalError, SentenceSyntaxError, Undecided
from .approx import (
    approximate, at_least, congruence, exact_value, greater_than,
)
from .fields import Q, QI, elem, format_elem, one, parse_elem, zero
from .rings import (
    GluedRing, MultiValuationRing, co_embeddable, contains,
    embeddability_witness, format_ring, in_jacobson, independent,
    integrality_witness, is_local_ring, is_unit, module_membership,
    parse_ring,
)
from .scramble import scramble
from .topology import (
    TopologySpec, associativity_check, density_witness,
    independent_sum_check, is_local_topology, local_components,
    parse_topology, v_coarsenings,
)
from .valuations import (
    format_valuation, parse_valuation, residue, val,
)
from . import locsent as _locsent

_AUDITS = []


def _say(line: str):
    print(line)


def _witness(line: str, recheck=None):
    print(f"WITNESS: {line}")
    if recheck is not None:
        _AUDITS.append((line, recheck))


def _run_audit() -> int:
    bad = 0
    for line, recheck in _AUDITS:
        try:
            ok = recheck()
        except Exception:
            ok = False
        if not ok:
            bad += 1
            _say(f"AUDIT-FAIL: {line}")
    _say(f"AUDIT: {len(_AUDITS) - bad}/{len(_AUDITS)} witnesses re-verified")
    return 0 if bad == 0 else 2


# ---------------------------------------------------------------------------
# Parsing helpers

_TARGET_CONG = _re.compile(r"^(Qi?:[^:=<>]+):x-(.+)>=(-?\d+)$")
_TARGET_PLAIN = _re.compile(r"^(Qi?:[^:=<>]+)(>=|>|=)(-?\d+)$")


def parse_target(text: str, field: str):
    s = "".join(text.split())
    m = _TARGET_CONG.match(s)
    if m:
        v = parse_valuation(m.group(1))
        center = m.group(2)
        if center.startswith("(") and center.endswith(")"):
            center = center[1:-1]
        return congruence(v, parse_elem(center, field), int(m.group(3)))
    m = _TARGET_PLAIN.match(s)
    if not m:
        raise ValueError(f"cannot parse target {text!r}")
    v = parse_valuation(m.group(1))
    n = int(m.group(3))
    if m.group(2) == "=":
        return exact_value(v, n)
    if m.group(2) == ">=":
        return at_least(v, n)
    return greater_than(v, n)


def _parse_tuple(text: str, field: str):
    return tuple(parse_elem(part, field) for part in text.split(";"))


def _parse_vals(text: str):
    return [parse_valuation(part) for part in text.split(",")]


def _quadratic_text(s, p) -> str:
    out = "t^2"
    if not s.is_zero():
        out += f" - ({format_elem(s)})*t"
    if not p.is_zero():
        out += f" + ({format_elem(p)})"
    return out


# ---------------------------------------------------------------------------
# Subcommands


def _cmd_val(args) -> int:
    v = parse_valuation(args.val)
    x = parse_elem(args.elem, v.field)
    _say(f"VAL: {val(v, x)}")
    return 0


def _cmd_residue(args) -> int:
    v = parse_valuation(args.val)
    x = parse_elem(args.elem, v.field)
    _say(f"RESIDUE: {residue(v, x)}")
    return 0


def _cmd_approx(args) -> int:
    targets = [parse_target(t, args.field) for t in args.target]
    x = approximate(targets)
    _say(f"RESULT: {format_elem(x)}")
    for t in targets:
        _witness(f"{t} satisfied by {format_elem(x)}",
                 lambda t=t, x=x: t.satisfied_by(x))
    return 0


def _cmd_scramble(args) -> int:
    vals = _parse_vals(args.vals)
    x = _parse_tuple(args.tuple, vals[0].field)
    trace = scramble(x, vals)
    _say(f"INITIAL: {'; '.join(format_elem(e) for e in trace.initial)}")
    for (i, j, c), d in zip(trace.steps, trace.discrepancies):
        _say(f"STEP: x_{i + 1} <- x_{i + 1} - {c}*x_{j + 1} "
             f"(discrepancy {d})")
    _say(f"FINAL: {'; '.join(format_elem(e) for e in trace.final)}")
    rows = "; ".join(
        "[" + ", ".join(str(c) for c in row) + "]"
        for row in trace.matrix.rows)
    _say(f"MATRIX: {rows}")
    ok = trace.verify(vals)
    _say(f"VERIFIED: {'true' if ok else 'false'}")
    _witness(f"matrix*initial=final det={trace.matrix.determinant()}",
             lambda: trace.verify(vals))
    return 0 if ok else 2


def _cmd_ring(args) -> int:
    R = parse_ring(args.spec)
    action = args.action.rstrip("?")
    arg = args.arg
    if action == "contains":
        x = parse_elem(arg, R.field)
        ok = contains(R, x)
        _say(f"CONTAINS: {'true' if ok else 'false'}")
        return 0 if ok else 2
    if action == "unit":
        x = parse_elem(arg, R.field)
        ok = is_unit(R, x)
        _say(f"UNIT: {'true' if ok else 'false'}")
        return 0 if ok else 2
    if action == "jacobson":
        x = parse_elem(arg, R.field)
        ok = in_jacobson(R, x)
        _say(f"JACOBSON: {'true' if ok else 'false'}")
        return 0 if ok else 2
    if action == "local":
        verdict = is_local_ring(R)
        _say(f"LOCAL_RING: {'true' if verdict.verdict else 'false'} "
             f"({verdict.tag})")
        if verdict.witness is not None:
            _witness(f"nonunit pair x={format_elem(verdict.witness)} and 1-x",
                     lambda: verdict.verify(R))
        return 0 if verdict.verdict else 2
    if action == "independent":
        y = _parse_tuple(arg, R.field)
        ok = independent(y, R)
        _say(f"INDEPENDENT: {'true' if ok else 'false'}")
        return 0 if ok else 2
    if action == "member":
        parts = _parse_tuple(arg, R.field)
        x, y = parts[0], parts[1:]
        ans = module_membership(x, y, R)
        _say(f"MEMBER: {'true' if ans.member else 'false'}")
        if ans.member and ans.certificate is not None:
            coeffs = "; ".join(format_elem(c)
                               for c in ans.certificate.coefficients)
            _witness(f"{format_elem(x)} = sum of ({coeffs}) * generators",
                     lambda: ans.certificate.verify(R))
        elif ans.reason:
            _say(f"REASON: {ans.reason}")
        return 0 if ans.member else 2
    if action == "integral-witness":
        x = parse_elem(arg, R.field)
        s, p = integrality_witness(x, R)
        _say(f"INTEGRAL_WITNESS: {_quadratic_text(s, p)}")
        _witness(
            f"s={format_elem(s)} p={format_elem(p)} both in "
            f"{format_ring(R)}; x^2-s*x+p=0 at x={format_elem(x)}",
            lambda: contains(R, s) and contains(R, p)
            and x * x - s * x + p == zero(R.field))
        return 0
    if action == "embeds":
        B = parse_ring(arg)
        res = embeddability_witness(R, B)
        if res.status == "witness":
            _say(f"EMBEDS: true c={format_elem(res.c)}")
            return 0
        _say("EMBEDS: false "
             f"(escape at {format_valuation(res.refuting_valuation)})")
        cx = res.counterexample(one(R.field))
        _witness(f"x={format_elem(cx)} in source, 1*x outside target",
                 lambda: contains(R, cx)
                 and val(res.refuting_valuation, cx) < 0)
        return 2
    raise ValueError(f"unknown ring action {args.action!r}")


def _print_report(report) -> int:
    for line in report.render().splitlines():
        _say(line)
    return 0 if report.ok else 2


def _cmd_topo(args) -> int:
    tau = parse_topology(args.spec)
    action = args.action.rstrip("?")
    if action == "components":
        comps = local_components(tau)
        for c in comps.components:
            _say(f"COMPONENT: {c}")
        if comps.flag:
            _say(f"FLAG: {comps.flag}")
        return 0
    if action == "v-coarsenings":
        for v in v_coarsenings(tau):
            _say(f"V_COARSENING: {format_valuation(v)}")
        return 0
    if action == "local":
        verdict = is_local_topology(tau)
        _say(f"LOCAL_TOPOLOGY: {'true' if verdict.verdict else 'false'} "
             f"({verdict.tag})")
        for k, x in enumerate(verdict.witnesses, start=1):
            _witness(
                f"x_{k}={format_elem(x)} escapes every bound at level {k}",
                lambda k=k, x=x: val(tau.ring.vals[0], x.inverse()) == -k)
        return 0 if verdict.verdict else 2
    if action == "indep-sum":
        parts = [TopologySpec(MultiValuationRing((v,)))
                 for v in tau.ring.vals]
        report = independent_sum_check(tau, parts, trials=args.trials,
                                       seed=args.seed)
        return _print_report(report)
    if action == "assoc":
        report = associativity_check(seed=args.seed, trials=args.trials)
        return _print_report(report)
    raise ValueError(f"unknown topo action {args.action!r}")


def _cmd_locsent(args) -> int:
    with open(args.file, encoding="utf-8") as fh:
        text = fh.read()
    sentence = _locsent.parse(text)
    polarity = _locsent.check_polarity(sentence)
    if args.mode == "check":
        _say(f"PARSED: {_locsent.to_text(sentence)}")
        _say(f"POLARITY: {'ok' if polarity.ok else 'violation'}")
        for v in polarity.violations:
            _say(f"VIOLATION: {v}")
        return 0 if polarity.ok else 2
    if not polarity.ok:
        for v in polarity.violations:
            _say(f"VIOLATION: {v}")
        return 1
    if not args.spec:
        raise ValueError("eval mode needs --spec")
    tau = parse_topology(args.spec)
    height = args.height
    if height > 12:
        height = 12
        _say("NOTE: height clamped to 12 to keep the search space finite")
    bounds = _locsent.SearchBounds(scale_bound=args.scale_bound,
                                   height=height)
    verdict = _locsent.evaluate(sentence, tau, bounds)
    _say(f"VERDICT: {verdict.status}")
    _say(f"BOUNDS: {verdict.bounds}")
    _say(f"NODES: {verdict.nodes}")
    for step in verdict.path:
        _say(f"BINDING: {step}")
    return {"Holds": 0, "Fails": 2, "Unknown": 3}[verdict.status]


# ---------------------------------------------------------------------------
# Demos


def _demo_ww(args) -> int:
    R = parse_ring("glued(Qi:2+1*i,Qi:2-1*i,id)")
    O12 = MultiValuationRing(R.vals)
    i_el = elem(0, 1, QI)
    _say("DEMO: residue-glued local ring over the conjugate Gaussian "
         "valuations above 5")
    _say(f"RING: {format_ring(R)}")

    verdict = is_local_ring(R)
    _say(f"LOCAL_RING: {'true' if verdict.verdict else 'false'} "
         f"({verdict.tag})")
    two = elem(2, 0, QI)
    _witness("members split into units (residue nonzero, e.g. x=2) and "
             "the maximal ideal (residues zero, then 1-x is a unit)",
             lambda: is_unit(R, two) and not is_unit(R, i_el))

    r1 = residue(R.v1, i_el)
    r2 = residue(R.v2, i_el)
    _say(f"CONTAINS: i -> {'true' if contains(R, i_el) else 'false'} "
         f"(residues {r1} vs {r2})")

    pair = co_embeddable(O12, R)
    _say(f"COEMBED: c={format_elem(pair[0])} maps the intersection ring "
         f"into the glued ring; c={format_elem(pair[1])} back")
    five_i = elem(0, 5, QI)
    _witness(f"5*i = {format_elem(pair[0] * i_el)} lies in the glued ring",
             lambda: contains(R, pair[0] * i_el))
    _witness(f"check sample x={format_elem(five_i)}: in both rings",
             lambda: contains(R, five_i) and contains(O12, five_i))

    indep = independent((one(QI), i_el), R)
    _say(f"INDEPENDENT: (1; i) -> {'true' if indep else 'false'}")
    _witness("i is not a glued-ring multiple of 1, nor 1 of i",
             lambda: not contains(R, i_el) and not contains(R, -i_el))

    for label, x in (("i", i_el), ("2+1*i", elem(2, 1, QI))):
        s, p = integrality_witness(x, R)
        _say(f"INTEGRAL_WITNESS: {label} -> {_quadratic_text(s, p)}")
        _witness(f"s={format_elem(s)} p={format_elem(p)} in ring, "
                 f"quadratic vanishes at {label}",
                 lambda x=x, s=s, p=p: contains(R, s) and contains(R, p)
                 and x * x - s * x + p == zero(QI))

    tau = TopologySpec(R)
    topo_verdict = is_local_topology(tau)
    _say(f"LOCAL_TOPOLOGY: {'true' if topo_verdict.verdict else 'false'} "
         f"({topo_verdict.tag})")
    for k, x in enumerate(topo_verdict.witnesses, start=1):
        _witness(f"x_{k}={format_elem(x)}: val of 1/x at {R.v1} is {-k}, "
                 f"1/(1-x) escapes at {R.v2}",
                 lambda k=k, x=x: val(R.v1, x.inverse()) == -k
                 and val(R.v2, (one(QI) - x).inverse()) <= -k)
    _say("SUMMARY: local ring, non-local topology; both rings define "
         "the same topology")
    return 0


def _demo_decompose(args) -> int:
    primes = [int(p) for p in args.primes.split(",")]
    vals = [parse_valuation(f"Q:{p}") for p in primes]
    tau = TopologySpec(MultiValuationRing(tuple(vals)))
    _say(f"DEMO: decomposition of the {'*'.join(str(p) for p in primes)} "
         "ball topology")
    _say(f"TOPOLOGY: {tau}")
    comps = local_components(tau)
    for c in comps.components:
        _say(f"COMPONENT: {c}")
    for v in v_coarsenings(tau):
        _say(f"V_COARSENING: {format_valuation(v)}")
    centers = [elem(k) for k in range(len(vals))]
    exponents = [2] * len(vals)
    x = density_witness(tau, centers, exponents)
    desc = ", ".join(
        f"x={format_elem(c)} mod {v.p}^2" for c, v in zip(centers, vals))
    _say(f"DENSITY_INSTANCE: {desc}")
    _witness(f"x={format_elem(x)} meets every congruence",
             lambda: all(val(v, x - c) >= 2 for v, c in zip(vals, centers)))
    parts = [TopologySpec(MultiValuationRing((v,))) for v in vals]
    report = independent_sum_check(tau, parts, trials=args.trials,
                                   seed=args.seed)
    return _print_report(report)


def _cmd_demo(args) -> int:
    if args.which == "ww":
        return _demo_ww(args)
    if args.which == "decompose":
        return _demo_decompose(args)
    raise ValueError(f"unknown demo {args.which!r}")


# ---------------------------------------------------------------------------
# Argument parsing


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--audit", action="store_true",
                        help="re-verify every WITNESS line before exiting")
    top = argparse.ArgumentParser(
        prog="multival",
        description="exact multi-valuation arithmetic over Q and Q(i)")
    sub = top.add_subparsers(dest="command", required=True)

    def add_parser(name, **kw):
        return sub.add_parser(name, parents=[common], **kw)

    p = add_parser("val", help="valuation of a field element")
    p.add_argument("--val", required=True)
    p.add_argument("--elem", required=True)
    p.set_defaults(func=_cmd_val)

    p = add_parser("residue", help="extended residue of an element")
    p.add_argument("--val", required=True)
    p.add_argument("--elem", required=True)
    p.set_defaults(func=_cmd_residue)

    p = add_parser("approx", help="weak approximation")
    p.add_argument("--field", choices=[Q, QI], default=Q)
    p.add_argument("--target", action="append", required=True)
    p.set_defaults(func=_cmd_approx)

    p = add_parser("scramble", help="scramble a tuple")
    p.add_argument("--field", choices=[Q, QI], default=Q)
    p.add_argument("--vals", required=True)
    p.add_argument("--tuple", required=True)
    p.set_defaults(func=_cmd_scramble)

    p = add_parser("ring", help="ring predicates and certificates")
    p.add_argument("--spec", required=True)
    p.add_argument("action")
    p.add_argument("arg", nargs="?", default="")
    p.set_defaults(func=_cmd_ring)

    p = add_parser("topo", help="topology reports")
    p.add_argument("--spec", required=True)
    p.add_argument("action")
    p.add_argument("--trials", type=int, default=100)
    p.set_defaults(func=_cmd_topo)

    p = add_parser("locsent", help="local-sentence tools")
    p.add_argument("mode", choices=["check", "eval"])
    p.add_argument("file")
    p.add_argument("--spec")
    p.add_argument("--scale-bound", type=int, default=None)
    p.add_argument("--height", type=int, default=3)
    p.set_defaults(func=_cmd_locsent)

    p = add_parser("demo", help="worked examples, end to end")
    p.add_argument("which", choices=["ww", "decompose"])
    p.add_argument("--primes", default="2,3,5")
    p.add_argument("--trials", type=int, default=5)
    p.set_defaults(func=_cmd_demo)
    return top


def main(argv=None) -> int:
    _AUDITS.clear()
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0
    try:
        code = args.func(args)
    except Undecided as exc:
        print(f"undecided: {exc}", file=sys.stderr)
        return 3
    except (MultivalError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if getattr(args, "audit", False):
        audit_code = _run_audit()
        code = code or audit_code
    return code


if __name__ == "__main__":
    sys.exit(main())
