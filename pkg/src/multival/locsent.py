"""A two-sorted sentence language over a field with a ball topology.

Lower-case variables range over field elements, upper-case variables
over basic neighborhoods (balls c*R).  Neighborhood quantification is
polarity-restricted: a universally quantified ball variable may only
occur positively, an existentially quantified one only negatively.
Evaluation is a bounded model check over finitely many ball scales and
field candidates; Unknown is returned when the node budget runs out,
never a guess.
"""

from __future__ import annotations

import re as _re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .errors import SentenceSyntaxError
from .approx import approximate, at_least, congruence, exact_value
from .fields import Q, QI, FieldElem, elem, one, zero
from .rings import contains
from .topology import TopologySpec
from .valuations import uniformizer, val

# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class ForallN:
    var: str
    body: object


@dataclass(frozen=True)
class ExistsN:
    var: str
    body: object


@dataclass(frozen=True)
class ForallF:
    var: str
    nonzero: bool
    body: object


@dataclass(frozen=True)
class ExistsF:
    var: str
    nonzero: bool
    body: object


@dataclass(frozen=True)
class Implies:
    left: object
    right: object


@dataclass(frozen=True)
class And:
    left: object
    right: object


@dataclass(frozen=True)
class Or:
    left: object
    right: object


@dataclass(frozen=True)
class Not:
    body: object


@dataclass(frozen=True)
class InBall:
    term: object
    scalar: object  # None for plain `t in U`
    var: str


@dataclass(frozen=True)
class Eq:
    left: object
    right: object


# field terms
@dataclass(frozen=True)
class TConst:
    value: Fraction


@dataclass(frozen=True)
class TImag:
    pass


@dataclass(frozen=True)
class TVar:
    name: str


@dataclass(frozen=True)
class TAdd:
    left: object
    right: object


@dataclass(frozen=True)
class TSub:
    left: object
    right: object


@dataclass(frozen=True)
class TMul:
    left: object
    right: object


@dataclass(frozen=True)
class TDiv:
    left: object
    right: object


@dataclass(frozen=True)
class TNeg:
    body: object


# ---------------------------------------------------------------------------
# Tokenizer

_KEYWORDS = {"forall", "exists", "in", "and", "or", "not"}
_TOKEN_RE = _re.compile(
    r"\s*(?:(?P<arrow>->)|(?P<neq>!=)|(?P<int>\d+)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<sym>[()*+\-/=:]))"
)


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str):
    toks = []
    for lineno, line in enumerate(text.splitlines() or [""], start=1):
        pos = 0
        while pos < len(line):
            if line[pos].isspace():
                pos += 1
                continue
            m = _TOKEN_RE.match(line, pos)
            if not m or m.start() != pos:
                raise SentenceSyntaxError(
                    f"unexpected character {line[pos]!r}", lineno, pos)
            kind = m.lastgroup
            text_ = m.group(kind)
            if kind == "name" and text_ in _KEYWORDS:
                kind = "kw"
            toks.append(_Tok(kind, text_, lineno, pos))
            pos = m.end()
    toks.append(_Tok("eof", "", lineno if text.splitlines() else 1, 0))
    return toks


def _is_ball_var(name: str) -> bool:
    return name[0].isupper()


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.pos = 0

    def peek(self, ahead=0) -> _Tok:
        return self.toks[min(self.pos + ahead, len(self.toks) - 1)]

    def next(self) -> _Tok:
        t = self.peek()
        self.pos += 1
        return t

    def err(self, msg, tok=None):
        tok = tok or self.peek()
        raise SentenceSyntaxError(msg, tok.line, tok.col)

    def expect(self, kind, text=None) -> _Tok:
        t = self.peek()
        if t.kind != kind or (text is not None and t.text != text):
            self.err(f"expected {text or kind!r}, found {t.text!r}")
        return self.next()

    # -- formulas ----------------------------------------------------------

    def formula(self, env: dict):
        t = self.peek()
        if t.kind == "kw" and t.text in ("forall", "exists"):
            return self.quantified(env)
        return self.implication(env)

    def quantified(self, env):
        q = self.next().text
        name_tok = self.expect("name")
        name = name_tok.text
        if name in env or name == "i":
            self.err(f"variable {name!r} is already in use", name_tok)
        if _is_ball_var(name):
            env2 = dict(env, **{name: "ball"})
            if self.peek().kind == "sym" and self.peek().text == ":":
                self.next()
            body = self.formula(env2)
            return ForallN(name, body) if q == "forall" else ExistsN(name, body)
        nonzero = False
        if self.peek().kind == "neq":
            self.next()
            z = self.expect("int")
            if z.text != "0":
                self.err("guard must be '!= 0'", z)
            nonzero = True
        env2 = dict(env, **{name: "field"})
        if self.peek().kind == "sym" and self.peek().text == ":":
            self.next()
        body = self.formula(env2)
        cls = ForallF if q == "forall" else ExistsF
        return cls(name, nonzero, body)

    def implication(self, env):
        left = self.disjunction(env)
        if self.peek().kind == "arrow":
            self.next()
            return Implies(left, self.implication(env))
        return left

    def disjunction(self, env):
        node = self.conjunction(env)
        while self.peek().kind == "kw" and self.peek().text == "or":
            self.next()
            node = Or(node, self.conjunction(env))
        return node

    def conjunction(self, env):
        node = self.unary(env)
        while self.peek().kind == "kw" and self.peek().text == "and":
            self.next()
            node = And(node, self.unary(env))
        return node

    def unary(self, env):
        t = self.peek()
        if t.kind == "kw" and t.text == "not":
            self.next()
            return Not(self.unary(env))
        if t.kind == "sym" and t.text == "(":
            # could be a parenthesized formula or a parenthesized term
            save = self.pos
            try:
                self.next()
                node = self.formula(env)
                self.expect("sym", ")")
                return node
            except SentenceSyntaxError:
                self.pos = save
        if t.kind == "kw" and t.text in ("forall", "exists"):
            return self.quantified(env)
        return self.atom(env)

    def atom(self, env):
        term = self.term(env)
        t = self.peek()
        if t.kind == "kw" and t.text == "in":
            self.next()
            return self.membership(term, env)
        if t.kind == "sym" and t.text == "=":
            self.next()
            return Eq(term, self.term(env))
        if t.kind == "neq":
            self.next()
            return Not(Eq(term, self.term(env)))
        self.err("expected 'in', '=' or '!=' after term")

    def membership(self, term, env):
        t = self.peek()
        if t.kind == "name" and _is_ball_var(t.text):
            var = self.next().text
            self._check_ball(var, t)
            return InBall(term, None, var)
        scalar = self.factor(env)
        while self.peek().kind == "sym" and self.peek().text == "*":
            nxt = self.peek(1)
            if nxt.kind == "name" and _is_ball_var(nxt.text):
                break
            self.next()
            scalar = TMul(scalar, self.factor(env))
        self.expect("sym", "*")
        var_tok = self.expect("name")
        self._check_ball(var_tok.text, var_tok)
        return InBall(term, scalar, var_tok.text)

    def _check_ball(self, name, tok):
        if not _is_ball_var(name):
            self.err(f"{name!r} is not a neighborhood variable", tok)

    # -- terms -------------------------------------------------------------

    def term(self, env):
        node = self.mul(env)
        while self.peek().kind == "sym" and self.peek().text in "+-":
            op = self.next().text
            rhs = self.mul(env)
            node = TAdd(node, rhs) if op == "+" else TSub(node, rhs)
        return node

    def mul(self, env):
        node = self.factor(env)
        while self.peek().kind == "sym" and self.peek().text in "*/":
            if self.peek().text == "*":
                nxt = self.peek(1)
                if nxt.kind == "name" and _is_ball_var(nxt.text):
                    break  # the ball variable of a membership atom
            op = self.next().text
            rhs = self.factor(env)
            node = TMul(node, rhs) if op == "*" else TDiv(node, rhs)
        return node

    def factor(self, env):
        t = self.peek()
        if t.kind == "sym" and t.text == "-":
            self.next()
            return TNeg(self.factor(env))
        if t.kind == "int":
            self.next()
            return TConst(Fraction(int(t.text)))
        if t.kind == "name":
            if t.text == "i":
                self.next()
                return TImag()
            if _is_ball_var(t.text):
                self.err(f"neighborhood variable {t.text!r} used as a field "
                         "term", t)
            if t.text not in env:
                self.err(f"unbound variable {t.text!r}", t)
            self.next()
            return TVar(t.text)
        if t.kind == "sym" and t.text == "(":
            self.next()
            node = self.term(env)
            self.expect("sym", ")")
            return node
        self.err(f"expected a term, found {t.text!r}")


def parse(text: str):
    """Parse a closed sentence; raises SentenceSyntaxError with
    position information."""
    p = _Parser(text)
    node = p.formula({})
    p.expect("eof")
    return node


# ---------------------------------------------------------------------------
# Printing (round-trips with parse)


def _print_term(t) -> str:
    if isinstance(t, TConst):
        return str(t.value)
    if isinstance(t, TImag):
        return "i"
    if isinstance(t, TVar):
        return t.name
    if isinstance(t, TNeg):
        return f"-{_print_term(t.body)}"
    ops = {TAdd: "+", TSub: "-", TMul: "*", TDiv: "/"}
    op = ops[type(t)]
    return f"({_print_term(t.left)} {op} {_print_term(t.right)})"


def to_text(node) -> str:
    if isinstance(node, (ForallN, ExistsN)):
        q = "forall" if isinstance(node, ForallN) else "exists"
        return f"{q} {node.var} {to_text(node.body)}"
    if isinstance(node, (ForallF, ExistsF)):
        q = "forall" if isinstance(node, ForallF) else "exists"
        guard = " != 0" if node.nonzero else ""
        return f"{q} {node.var}{guard} {to_text(node.body)}"
    if isinstance(node, Implies):
        return f"({to_text(node.left)} -> {to_text(node.right)})"
    if isinstance(node, And):
        return f"({to_text(node.left)} and {to_text(node.right)})"
    if isinstance(node, Or):
        return f"({to_text(node.left)} or {to_text(node.right)})"
    if isinstance(node, Not):
        return f"not {to_text(node.body)}"
    if isinstance(node, InBall):
        if node.scalar is None:
            return f"({_print_term(node.term)} in {node.var})"
        return (f"({_print_term(node.term)} in "
                f"{_print_term(node.scalar)}*{node.var})")
    if isinstance(node, Eq):
        return f"({_print_term(node.left)} = {_print_term(node.right)})"
    raise TypeError(f"not a sentence node: {node!r}")


# ---------------------------------------------------------------------------
# Polarity


@dataclass(frozen=True)
class PolarityReport:
    ok: bool
    violations: tuple = ()


def check_polarity(sentence) -> PolarityReport:
    """Every universally bound ball variable must occur only
    positively, every existentially bound one only negatively."""
    violations = []

    def occurs(node, var, sign, path):
        if isinstance(node, (ForallN, ExistsN, ForallF, ExistsF)):
            occurs(node.body, var, sign, path + [type(node).__name__])
        elif isinstance(node, Implies):
            occurs(node.left, var, -sign, path + ["antecedent"])
            occurs(node.right, var, sign, path + ["consequent"])
        elif isinstance(node, (And, Or)):
            occurs(node.left, var, sign, path + ["left"])
            occurs(node.right, var, sign, path + ["right"])
        elif isinstance(node, Not):
            occurs(node.body, var, -sign, path + ["not"])
        elif isinstance(node, InBall) and node.var == var:
            yield_sign.append((sign, "/".join(path) or "root"))

    def walk(node, path):
        if isinstance(node, (ForallN, ExistsN)):
            want = 1 if isinstance(node, ForallN) else -1
            yield_sign.clear()
            occurs(node.body, node.var, 1, [])
            for sign, where in list(yield_sign):
                if sign != want:
                    kind = "positively" if want == 1 else "negatively"
                    violations.append(
                        f"{node.var} must occur {kind}; bad occurrence at "
                        f"{where}")
            walk(node.body, path + [node.var])
        elif isinstance(node, (ForallF, ExistsF)):
            walk(node.body, path)
        elif isinstance(node, (Implies, And, Or)):
            walk(node.left, path)
            walk(node.right, path)
        elif isinstance(node, Not):
            walk(node.body, path)

    yield_sign = []
    walk(sentence, [])
    return PolarityReport(not violations, tuple(violations))


# ---------------------------------------------------------------------------
# Bounded evaluation


@dataclass(frozen=True)
class SearchBounds:
    """Finite search space: ball scales are valuation monomials with
    exponents in [-scale_bound, scale_bound]; field candidates are
    small integers up to `height`, uniformizer monomials, and an
    escape family produced by weak approximation."""

    scale_bound: int | None = None
    height: int = 3
    max_nodes: int = 2_000_000

    def describe(self, k: int) -> str:
        return (f"scale_bound={k} height={self.height} "
                f"max_nodes={self.max_nodes}")


def default_scale_bound(num_vals: int) -> int:
    if num_vals == 1:
        return 4
    if num_vals == 2:
        return 3
    return 2


@dataclass(frozen=True)
class EvalVerdict:
    status: str  # 'Holds' | 'Fails' | 'Unknown'
    path: tuple = ()  # human-readable decisive bindings
    bounds: str = ""
    nodes: int = 0


class _Budget(Exception):
    pass


class _Undef(Exception):
    pass


class _Evaluator:
    def __init__(self, topo: TopologySpec, bounds: SearchBounds,
                 var_topologies):
        self.topo = topo
        self.bounds = bounds
        self.var_topologies = dict(var_topologies or {})
        self.field = topo.field
        vals = topo.ring.vals
        self.k = bounds.scale_bound or default_scale_bound(len(vals))
        self.nodes = 0
        self._scales = {}
        self._statics = {}
        self.family = self._escape_family(topo)

    # -- domains -----------------------------------------------------------

    def topo_for(self, var: str) -> TopologySpec:
        return self.var_topologies.get(var, self.topo)

    def ball_scales(self, tau: TopologySpec):
        if tau not in self._scales:
            vals = tau.ring.vals
            k = self.k
            vecs = [()]
            for _ in vals:
                vecs = [v + (a,) for v in vecs for a in range(-k, k + 1)]
            vecs.sort(key=lambda v: (max(map(abs, v), default=0),
                                     sum(map(abs, v)), v))
            out = []
            for vec in vecs:
                c = one(tau.field)
                for v, a in zip(vals, vec):
                    u = uniformizer(v)
                    c = c * (u ** a if a >= 0 else u.inverse() ** (-a))
                out.append(c)
            self._scales[tau] = out
        return self._scales[tau]

    def _escape_family(self, tau: TopologySpec):
        """x_j with val_1(x_j) = j and x_j - 1 divisible j times at the
        second valuation; the family that defeats any locality bound."""
        vals = tau.ring.vals
        if len(vals) < 2:
            return []
        v1, v2 = vals[0], vals[1]
        fam = []
        for j in range(self.k + 2, 0, -1):
            targets = [exact_value(v1, j), congruence(v2, one(self.field), j)]
            targets += [at_least(v, 0) for v in vals[2:]]
            fam.append(approximate(targets))
        return fam

    def _static_pool(self):
        if None not in self._statics:
            vals = self.topo.ring.vals
            out = list(self.family)
            u_all = one(self.field)
            for v in vals:
                u_all = u_all * uniformizer(v)
            for t in range(self.k + 1, 0, -1):
                out.append(u_all.inverse() ** t)
                out.append(u_all ** t)
            if len(vals) > 1:
                for v in vals:
                    u = uniformizer(v)
                    for t in range(self.k + 1, 0, -1):
                        out.append(u.inverse() ** t)
                        out.append(u ** t)
            for n in range(1, self.bounds.height + 1):
                out.append(elem(n, 0, self.field))
                out.append(elem(-n, 0, self.field))
            if self.field == QI:
                out.append(elem(0, 1, QI))
            self._statics[None] = out
        return self._statics[None]

    def field_candidates(self, env, nonzero: bool):
        """Adaptive candidates derived from the balls currently in
        scope come first, then the escape family and the static pool."""
        u_all = one(self.field)
        for v in self.topo.ring.vals:
            u_all = u_all * uniformizer(v)
        adaptive = []
        for name, value in env.items():
            if _is_ball_var(name):
                b = value
                adaptive += [(b * u_all).inverse(), b.inverse(),
                             b.inverse() * u_all, b]
        seen = []
        for c in adaptive + self._static_pool():
            if c not in seen:
                seen.append(c)
        if not nonzero:
            seen.append(zero(self.field))
        return seen

    # -- terms and atoms -----------------------------------------------------

    def term(self, t, env) -> FieldElem:
        if isinstance(t, TConst):
            return elem(t.value, 0, self.field)
        if isinstance(t, TImag):
            if self.field != QI:
                raise _Undef
            return elem(0, 1, QI)
        if isinstance(t, TVar):
            return env[t.name]
        if isinstance(t, TNeg):
            return -self.term(t.body, env)
        a = self.term(t.left, env)
        b = self.term(t.right, env)
        if isinstance(t, TAdd):
            return a + b
        if isinstance(t, TSub):
            return a - b
        if isinstance(t, TMul):
            return a * b
        if b.is_zero():
            raise _Undef
        return a / b

    def atom(self, node, env) -> bool:
        self.nodes += 1
        if self.nodes > self.bounds.max_nodes:
            raise _Budget
        try:
            if isinstance(node, InBall):
                x = self.term(node.term, env)
                scale = env[node.var]
                if node.scalar is not None:
                    s = self.term(node.scalar, env)
                    if s.is_zero():
                        raise _Undef
                    scale = s * scale
                tau = self.topo_for(node.var)
                return contains(tau.ring, x / scale)
            return self.term(node.left, env) == self.term(node.right, env)
        except _Undef:
            return False

    # -- recursive evaluation ------------------------------------------------

    def eval(self, node, env):
        """Returns (truth value, decisive-binding description lines)."""
        if isinstance(node, (ForallN, ExistsN)):
            domain = self.ball_scales(self.topo_for(node.var))
            want = isinstance(node, ExistsN)  # short-circuit value
            return self._quant(node, node.var, domain, env, want)
        if isinstance(node, (ForallF, ExistsF)):
            domain = self.field_candidates(env, node.nonzero)
            want = isinstance(node, ExistsF)
            return self._quant(node, node.var, domain, env, want)
        if isinstance(node, Implies):
            lv, lp = self.eval(node.left, env)
            if not lv:
                return True, []
            return self.eval(node.right, env)
        if isinstance(node, And):
            lv, lp = self.eval(node.left, env)
            if not lv:
                return False, lp
            return self.eval(node.right, env)
        if isinstance(node, Or):
            lv, lp = self.eval(node.left, env)
            if lv:
                return True, lp
            return self.eval(node.right, env)
        if isinstance(node, Not):
            v, p = self.eval(node.body, env)
            return not v, p
        return self.atom(node, env), []

    def _quant(self, node, var, domain, env, want):
        first_path = None
        for cand in domain:
            env2 = dict(env, **{var: cand})
            v, p = self.eval(node.body, env2)
            if v == want:
                return want, [f"{var}={cand}"] + p
            if first_path is None:
                first_path = [f"{var}={cand} (1 of {len(domain)})"] + p
        return (not want), (first_path or [])


def evaluate(sentence, topo: TopologySpec, bounds: SearchBounds = None,
             var_topologies=None) -> EvalVerdict:
    """Bounded truth value of a closed, polarity-correct sentence over
    the ball basis of topo."""
    rep = check_polarity(sentence)
    if not rep.ok:
        raise ValueError("polarity violation: " + "; ".join(rep.violations))
    bounds = bounds or SearchBounds()
    ev = _Evaluator(topo, bounds, var_topologies)
    try:
        value, path = ev.eval(sentence, {})
    except _Budget:
        return EvalVerdict("Unknown", (), bounds.describe(ev.k), ev.nodes)
    status = "Holds" if value else "Fails"
    return EvalVerdict(status, tuple(path), bounds.describe(ev.k), ev.nodes)


# ---------------------------------------------------------------------------
# Shipped sentences

#: Locality of the topology: some ball U has, inside each scaled copy
#: c*U, a uniform bound V on 1/x or 1/(1-x) after rescaling by e.
LOCALITY_SENTENCE_TEXT = (
    "exists U forall c != 0 forall V exists e != 0 forall x "
    "((x in c*U) -> ((1/(x*e) in V) or (1/((1-x)*e) in V)))"
)

#: Every ball of the joint topology absorbs an intersection of part
#: balls, and conversely.
GENERATION_FORWARD_TEXT = (
    "forall U exists V exists W forall x ((x in V and x in W) -> x in U)"
)
GENERATION_CONVERSE_TEXT = (
    "forall V forall W exists U forall x (x in U -> (x in V and x in W))"
)


def locality_sentence():
    return parse(LOCALITY_SENTENCE_TEXT)


def generation_forward():
    return parse(GENERATION_FORWARD_TEXT)


def generation_converse():
    return parse(GENERATION_CONVERSE_TEXT)
