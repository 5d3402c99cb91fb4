"""Exact rational rows, linear systems, and row reduction.

Scalars are ``fractions.Fraction`` throughout; nothing in this package ever
touches floating point.  A row is a sparse map from variable ids to
coefficients together with a constant, and reads either as
``sum(c*x) + const >= 0`` or ``sum(c*x) + const == 0``.  Variable ids are
arbitrary sortable values (we use tuples like ``("p", i, j, m)``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Hashable, Iterable, Mapping

Var = Hashable

GEQ = "geq"
EQ = "eq"

ZERO = Fraction(0)
ONE = Fraction(1)


class InconsistentSystem(Exception):
    """Raised when equality rows are mutually contradictory (e.g. 0 = 1)."""


def rat(value) -> Fraction:
    """Coerce ints, strings like ``"a/b"``, or Fractions to an exact Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floating-point values are not accepted; use 'a/b' strings")
    return Fraction(value)


def format_rat(value: Fraction) -> str:
    """Serialize a Fraction as ``a/b`` (or plain ``a`` when b == 1)."""
    return str(value)


@dataclass
class LinRow:
    """One inequality or equality: ``coeffs . x + const  (>=|==)  0``."""

    coeffs: dict
    const: Fraction = ZERO
    kind: str = GEQ

    def __post_init__(self):
        self.coeffs = {v: rat(c) for v, c in self.coeffs.items() if c != 0}
        self.const = rat(self.const)
        if self.kind not in (GEQ, EQ):
            raise ValueError(f"unknown row kind {self.kind!r}")

    def evaluate(self, point: Mapping) -> Fraction:
        return sum((c * point[v] for v, c in self.coeffs.items()), self.const)

    def satisfied_by(self, point: Mapping) -> bool:
        value = self.evaluate(point)
        return value == 0 if self.kind == EQ else value >= 0

    def scaled(self, factor: Fraction) -> "LinRow":
        factor = rat(factor)
        return LinRow({v: c * factor for v, c in self.coeffs.items()},
                      self.const * factor, self.kind)

    def substituted(self, subs: Mapping) -> "LinRow":
        """Replace each substituted variable by its affine expression."""
        coeffs: dict = {}
        const = self.const
        for v, c in self.coeffs.items():
            expr = subs.get(v)
            if expr is None:
                coeffs[v] = coeffs.get(v, ZERO) + c
            else:
                ecoeffs, econst = expr
                const += c * econst
                for w, e in ecoeffs.items():
                    coeffs[w] = coeffs.get(w, ZERO) + c * e
        return LinRow(coeffs, const, self.kind)

    def key(self, variables: Iterable) -> tuple:
        """Deterministic sort key: dense coefficient vector plus constant."""
        return tuple(self.coeffs.get(v, ZERO) for v in variables) + (self.const,)

    def __eq__(self, other):
        return (isinstance(other, LinRow) and self.kind == other.kind
                and self.const == other.const and self.coeffs == other.coeffs)

    def __repr__(self):
        terms = " + ".join(f"{c}*{v}" for v, c in sorted(self.coeffs.items()))
        op = ">=" if self.kind == GEQ else "=="
        return f"LinRow({terms or '0'} + {self.const} {op} 0)"


@dataclass
class LinearSystem:
    """An ordered variable registry plus a list of rows over it."""

    variables: list
    rows: list = field(default_factory=list)

    def __post_init__(self):
        declared = set(self.variables)
        if len(declared) != len(self.variables):
            raise ValueError("duplicate variable in registry")
        for row in self.rows:
            undeclared = set(row.coeffs) - declared
            if undeclared:
                raise ValueError(f"row references unregistered variables {undeclared}")

    def eq_rows(self) -> list:
        return [r for r in self.rows if r.kind == EQ]

    def geq_rows(self) -> list:
        return [r for r in self.rows if r.kind == GEQ]


def canonicalize_row(row: LinRow) -> LinRow:
    """Scale a row to the canonical representative of its positive-multiple ray.

    Coefficients and constant become integers with collective gcd 1.  GEQ rows
    keep their direction; EQ rows additionally get a positive leading
    coefficient (first nonzero in sorted variable order).
    """
    entries = list(row.coeffs.values()) + ([row.const] if row.const else [])
    if not entries:
        return LinRow({}, ZERO, row.kind)
    lcm = 1
    for e in entries:
        lcm = lcm * e.denominator // gcd(lcm, e.denominator)
    ints = [int(e * lcm) for e in entries]
    g = 0
    for i in ints:
        g = gcd(g, abs(i))
    factor = Fraction(lcm, g)
    if row.kind == EQ and row.coeffs:
        lead = row.coeffs[min(row.coeffs)]
        if lead < 0:
            factor = -factor
    elif row.kind == EQ and row.const < 0:
        factor = -factor
    return row.scaled(factor)


def row_reduce_equalities(system: LinearSystem, prefer=None):
    """Eliminate the EQ rows of a system by Gaussian substitution.

    Returns ``(substitutions, reduced)`` where ``substitutions`` maps each
    eliminated variable to an affine expression ``(coeffs, const)`` over the
    remaining variables, and ``reduced`` contains only GEQ rows (with the
    substitutions applied).  When ``prefer`` is given, pivots are chosen from
    that variable set whenever the row offers one; within the candidate set
    the greatest variable in registry order is used, so earlier variables
    stay free.

    Raises InconsistentSystem on a contradictory equality.
    """
    prefer = set(prefer) if prefer is not None else None
    order = {v: k for k, v in enumerate(system.variables)}
    subs: dict = {}
    for row in system.eq_rows():
        row = row.substituted(subs)
        if not row.coeffs:
            if row.const != 0:
                raise InconsistentSystem(f"contradictory equality: {row.const} = 0")
            continue
        candidates = set(row.coeffs)
        if prefer is not None and candidates & prefer:
            candidates &= prefer
        pivot = max(candidates, key=order.__getitem__)
        c = row.coeffs[pivot]
        expr_coeffs = {v: -a / c for v, a in row.coeffs.items() if v != pivot}
        expr_const = -row.const / c
        # Back-substitute into previously recorded expressions so every
        # substitution stays in terms of free variables only.
        for var, (ecoeffs, econst) in subs.items():
            if pivot in ecoeffs:
                factor = ecoeffs.pop(pivot)
                econst += factor * expr_const
                for w, e in expr_coeffs.items():
                    ecoeffs[w] = ecoeffs.get(w, ZERO) + factor * e
                subs[var] = ({w: e for w, e in ecoeffs.items() if e != 0}, econst)
        subs[pivot] = (expr_coeffs, expr_const)
    free = [v for v in system.variables if v not in subs]
    reduced_rows = [r.substituted(subs) for r in system.geq_rows()]
    return subs, LinearSystem(free, reduced_rows)


def rref(rows: list, variables: list, pivot_last=True) -> list:
    """Reduced row echelon form of EQ rows over a fixed variable order.

    ``pivot_last`` pivots on the greatest variable present in each row so the
    earliest variables remain free; this is the canonical form used for
    affine hulls.  Returns canonicalized EQ LinRows sorted by pivot.
    """
    order = {v: k for k, v in enumerate(variables)}
    pick = max if pivot_last else min
    # Invariant: each pivot row has coefficient 1 on its pivot and no other
    # pivot variable, so a single substitution pass fully reduces a new row.
    pivots: dict = {}
    for row in rows:
        coeffs = dict(row.coeffs)
        const = row.const
        for pv, (pcoeffs, pconst) in pivots.items():
            factor = coeffs.get(pv, ZERO)
            if factor:
                const -= factor * pconst
                for v, a in pcoeffs.items():
                    coeffs[v] = coeffs.get(v, ZERO) - factor * a
        coeffs = {v: a for v, a in coeffs.items() if a != 0}
        if not coeffs:
            if const != 0:
                raise InconsistentSystem("contradictory equality in rref input")
            continue
        pv = pick(coeffs, key=order.__getitem__)
        c = coeffs[pv]
        ncoeffs = {v: a / c for v, a in coeffs.items()}
        nconst = const / c
        for qv, (qcoeffs, qconst) in list(pivots.items()):
            factor = qcoeffs.get(pv, ZERO)
            if factor:
                qconst -= factor * nconst
                for v, a in ncoeffs.items():
                    qcoeffs[v] = qcoeffs.get(v, ZERO) - factor * a
                pivots[qv] = ({v: a for v, a in qcoeffs.items() if a != 0}, qconst)
        pivots[pv] = (ncoeffs, nconst)
    return [canonicalize_row(LinRow(coeffs, const, EQ))
            for pv, (coeffs, const) in sorted(pivots.items(),
                                              key=lambda kv: order[kv[0]])]


def reduce_modulo(row: LinRow, equalities: list, variables: list) -> LinRow:
    """Reduce a row modulo rref'd equality rows, then canonicalize.

    Two rows that differ by a combination of the equalities reduce to the
    same canonical form, which is how row identity "modulo the affine hull"
    is decided everywhere in this package.
    """
    order = {v: k for k, v in enumerate(variables)}
    subs = {}
    for eq in equalities:
        if not eq.coeffs:
            continue
        pv = max(eq.coeffs, key=order.__getitem__)
        c = eq.coeffs[pv]
        subs[pv] = ({v: -a / c for v, a in eq.coeffs.items() if v != pv},
                    -eq.const / c)
    return canonicalize_row(row.substituted(subs))


def span_equal(rows_a: list, rows_b: list, variables: list) -> bool:
    """Do two lists of EQ rows span the same affine row space?"""
    return rref(rows_a, variables) == rref(rows_b, variables)
