from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ncpolytope.linalg import (EQ, GEQ, InconsistentSystem, LinRow,
                               LinearSystem, canonicalize_row, rat,
                               reduce_modulo, row_reduce_equalities, rref,
                               span_equal)

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=12)
VARS = ["a", "b", "c", "d"]


def row_strategy(kind=GEQ):
    return st.builds(
        lambda cs, const: LinRow(dict(zip(VARS, cs)), const, kind),
        st.lists(rationals, min_size=len(VARS), max_size=len(VARS)),
        rationals)


@given(rationals, rationals, rationals)
def test_rational_arithmetic_is_exact(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    s = a + b
    assert s.denominator > 0
    from math import gcd
    assert gcd(s.numerator, s.denominator) == 1


def test_rat_rejects_floats():
    with pytest.raises(TypeError):
        rat(0.5)
    assert rat("3/4") == Fraction(3, 4)
    assert rat(2) == 2


@given(row_strategy())
def test_canonicalize_idempotent(row):
    once = canonicalize_row(row)
    assert canonicalize_row(once) == once


@given(row_strategy(), st.fractions(min_value="1/7", max_value=9,
                                    max_denominator=8))
def test_canonicalize_scale_invariant(row, factor):
    assert canonicalize_row(row.scaled(factor)) == canonicalize_row(row)


@given(row_strategy(EQ))
def test_canonicalize_eq_sign_convention(row):
    canon = canonicalize_row(row)
    if canon.coeffs:
        assert canon.coeffs[min(canon.coeffs)] > 0
        assert canonicalize_row(row.scaled(-1)) == canon


def test_canonicalize_integer_gcd_one():
    row = LinRow({"a": Fraction(2, 3), "b": Fraction(4, 3)}, Fraction(2), GEQ)
    canon = canonicalize_row(row)
    assert canon.coeffs == {"a": 1, "b": 2}
    assert canon.const == 3


@given(st.lists(row_strategy(EQ), max_size=4),
       st.lists(rationals, min_size=len(VARS), max_size=len(VARS)))
@settings(max_examples=60)
def test_row_reduce_preserves_solutions(eq_rows, point_vals):
    """A point satisfying the equalities maps onto a reduced-space point."""
    system = LinearSystem(VARS, eq_rows)
    try:
        subs, reduced = row_reduce_equalities(system)
    except InconsistentSystem:
        return
    point = dict(zip(VARS, point_vals))
    if not all(r.satisfied_by(point) for r in eq_rows):
        return
    for var, (coeffs, const) in subs.items():
        assert point[var] == sum((c * point[w] for w, c in coeffs.items()),
                                 const)


def test_row_reduce_prefers_pivot_set():
    rows = [LinRow({"a": 1, "c": -1}, 0, EQ)]
    subs, reduced = row_reduce_equalities(LinearSystem(VARS, rows),
                                          prefer={"c"})
    assert set(subs) == {"c"}
    assert reduced.variables == ["a", "b", "d"]


def test_row_reduce_inconsistent():
    rows = [LinRow({"a": 1}, 0, EQ), LinRow({"a": 1}, -1, EQ)]
    with pytest.raises(InconsistentSystem):
        row_reduce_equalities(LinearSystem(VARS, rows))


@given(st.lists(row_strategy(EQ), max_size=4))
@settings(max_examples=60)
def test_rref_is_canonical_under_row_mixing(rows):
    """rref output depends only on the row span, not the presentation."""
    try:
        base = rref(rows, VARS)
    except InconsistentSystem:
        return
    mixed = list(reversed(rows))
    if len(rows) >= 2:
        extra = LinRow(
            {v: rows[0].coeffs.get(v, 0) + rows[1].coeffs.get(v, 0)
             for v in VARS},
            rows[0].const + rows[1].const, EQ)
        mixed.append(extra)
    assert rref(mixed, VARS) == base
    assert span_equal(rows, mixed, VARS)


def test_rref_pivots_on_late_variables():
    rows = [LinRow({"a": 1, "d": 1}, -1, EQ)]
    (out,) = rref(rows, VARS)
    # d is eliminated, a stays free
    assert out.coeffs == {"a": 1, "d": 1}


def test_reduce_modulo_identifies_complements():
    eqs = rref([LinRow({"a": 1, "b": 1}, -1, EQ)], VARS)
    r1 = LinRow({"a": 1}, Fraction(-1), GEQ)       # a - 1 >= 0
    r2 = LinRow({"b": -1}, 0, GEQ)                 # -b >= 0
    assert reduce_modulo(r1, eqs, VARS) == reduce_modulo(r2, eqs, VARS)


def test_linear_system_rejects_unknown_variables():
    with pytest.raises(ValueError):
        LinearSystem(["a"], [LinRow({"z": 1}, 0, GEQ)])
