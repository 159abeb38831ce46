"""Tuple scrambling over a multi-valued field.

A tuple is scrambled when, at each valuation, all entries share one
value.  The discrepancy counts the (valuation, index) pairs exceeding
the row minimum; one residue-avoidance step removes at least one such
pair, and the recorded matrix tracks the whole reduction exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    FieldMismatch, NonDecreasingDiscrepancy, ZeroEntry,
)
from .fields import FieldElem
from .valuations import INF, Valuation, residue, residue_of_int, val


@dataclass(frozen=True)
class PrimeFieldMatrix:
    """A square matrix over the prime field Q with nonzero determinant."""

    rows: tuple  # tuple of tuples of Fraction

    @classmethod
    def identity(cls, n: int) -> "PrimeFieldMatrix":
        return cls(tuple(
            tuple(Fraction(1 if r == c else 0) for c in range(n))
            for r in range(n)
        ))

    def elementary_applied(self, i: int, j: int, c) -> "PrimeFieldMatrix":
        """Row operation row_i <- row_i - c * row_j, applied on the left."""
        c = Fraction(c)
        rows = [list(r) for r in self.rows]
        rows[i] = [a - c * b for a, b in zip(rows[i], rows[j])]
        return PrimeFieldMatrix(tuple(tuple(r) for r in rows))

    def apply(self, x) -> tuple:
        """Matrix times a tuple of FieldElems."""
        out = []
        for row in self.rows:
            acc = None
            for coeff, entry in zip(row, x):
                term = entry * coeff
                acc = term if acc is None else acc + term
            out.append(acc)
        return tuple(out)

    def determinant(self) -> Fraction:
        n = len(self.rows)
        m = [list(r) for r in self.rows]
        det = Fraction(1)
        for col in range(n):
            piv = next((r for r in range(col, n) if m[r][col] != 0), None)
            if piv is None:
                return Fraction(0)
            if piv != col:
                m[col], m[piv] = m[piv], m[col]
                det = -det
            det *= m[col][col]
            inv = 1 / m[col][col]
            for r in range(col + 1, n):
                f = m[r][col] * inv
                if f:
                    m[r] = [a - f * b for a, b in zip(m[r], m[col])]
        return det


@dataclass(frozen=True)
class ScrambleTrace:
    initial: tuple
    steps: tuple       # (i, j, c): x_i <- x_i - c * x_j
    discrepancies: tuple  # discrepancy before each step, then final 0
    final: tuple
    matrix: PrimeFieldMatrix

    def verify(self, vals) -> bool:
        if self.matrix.apply(self.initial) != self.final:
            return False
        if not is_scrambled(self.final, vals):
            return False
        seq = self.discrepancies
        return all(a > b for a, b in zip(seq, seq[1:])) and seq[-1] == 0


def _shared_field(x, vals):
    fields = {e.field for e in x} | {v.field for v in vals}
    if len(fields) > 1:
        raise FieldMismatch("mixed fields in scramble input")


def scramble_step(z: FieldElem, w: FieldElem, vals) -> int:
    """Least c >= 0 in Z with val_i(z - c*w) = min(val_i z, val_i w) for
    every i, found by residue avoidance: c must differ from every finite
    residue of z/w."""
    vals = list(vals)
    if not vals:
        raise ValueError("at least one valuation required")
    _shared_field([z, w], vals)
    if w.is_zero():
        return 0
    ratio = z / w
    avoided = []
    for v in vals:
        r = residue(v, ratio)
        if not r.is_infinite():
            avoided.append((v, r))
    c = 0
    while any(residue_of_int(v, c) == r for v, r in avoided):
        c += 1
    return c


def discrepancy(x, vals) -> int:
    """Number of pairs (i, j) with val_i(x_j) above the row minimum."""
    x, vals = tuple(x), list(vals)
    _shared_field(x, vals)
    count = 0
    for v in vals:
        row = [val(v, e) for e in x]
        m = min(row)
        count += sum(1 for t in row if t > m)
    return count


def is_scrambled(x, vals) -> bool:
    """True iff each valuation takes one value on all entries.  A tuple
    with some (but not all) zero entries is never scrambled."""
    x, vals = tuple(x), list(vals)
    _shared_field(x, vals)
    zeros = sum(1 for e in x if e.is_zero())
    if zeros and zeros < len(x):
        return False
    for v in vals:
        row = [val(v, e) for e in x]
        if any(t != row[0] for t in row):
            return False
    return True


def scramble(x, vals) -> ScrambleTrace:
    """Reduce x to a scrambled tuple by elementary steps over Z.

    The step order is deterministic: the lexicographically least
    (valuation index, entry index) violating scrambledness is fixed
    against the least entry attaining that valuation's row minimum.
    """
    x, vals = tuple(x), list(vals)
    if not vals:
        raise ValueError("at least one valuation required")
    _shared_field(x, vals)
    if any(e.is_zero() for e in x):
        raise ZeroEntry("scramble requires nonzero entries")
    n = len(x)
    cur = x
    matrix = PrimeFieldMatrix.identity(n)
    steps = []
    discs = [discrepancy(cur, vals)]
    while discs[-1] > 0:
        target = None
        for vi, v in enumerate(vals):
            row = [val(v, e) for e in cur]
            m = min(row)
            for j, t in enumerate(row):
                if t > m:
                    k = row.index(m)
                    target = (j, k)
                    break
            if target:
                break
        j, k = target
        c = scramble_step(cur[j], cur[k], vals)
        new = list(cur)
        new[j] = cur[j] - cur[k] * Fraction(c)
        cur = tuple(new)
        matrix = matrix.elementary_applied(j, k, c)
        steps.append((j, k, c))
        d = discrepancy(cur, vals)
        if d >= discs[-1]:
            raise NonDecreasingDiscrepancy(
                f"discrepancy went {discs[-1]} -> {d} at step {steps[-1]}"
            )
        discs.append(d)
    return ScrambleTrace(x, tuple(steps), tuple(discs), cur, matrix)
