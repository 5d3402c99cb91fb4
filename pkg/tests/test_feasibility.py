import random
from fractions import Fraction

import pytest

from conftest import (contextual_table_41, four_prep_scenario, uniform_table)
from ncpolytope.feasibility import (Certificate, Feasible, Infeasible,
                                    MalformedTable, PrimalFeasible,
                                    check_table, farkas_certificate, optimize)
from ncpolytope.linalg import GEQ, LinRow, canonicalize_row
from ncpolytope.measurement_polytope import build_measurement_h, enumerate_vertices
from ncpolytope.ncsystem import bind_table, build_f2, reconstruct_table
from ncpolytope.scenario import DataTable, DimensionMismatch, p_var

F = Fraction
HALF = F(1, 2)


def p(i, j):
    return p_var((i, j, 0))


def test_uniform_table_is_feasible(scn41, verts41):
    verdict = check_table(scn41, verts41, uniform_table(scn41))
    assert isinstance(verdict, Feasible)
    f2 = build_f2(scn41, verts41)
    assert reconstruct_table(f2, verdict.nu) == uniform_table(scn41)


def test_extremal_contextual_table_certificate(scn41, verts41, poly41):
    verdict = check_table(scn41, verts41, contextual_table_41())
    assert isinstance(verdict, Infeasible)
    # modulo the polytope equalities the returned inequality is
    # p13 + p24 - p12 - p22 <= 1, and the table violates it by exactly 1
    expected = LinRow(
        {p(1, 3): -1, p(2, 4): -1, p(1, 2): 1, p(2, 2): 1}, F(1), GEQ)
    assert canonicalize_row(poly41.reduce(verdict.inequality)) \
        == canonicalize_row(poly41.reduce(expected))
    assert verdict.violation == 1


def test_certificate_box_conditions(scn41, verts41):
    verdict = check_table(scn41, verts41, contextual_table_41())
    cert = verdict.certificate
    f2 = build_f2(scn41, verts41)
    numeric = bind_table(f2, contextual_table_41())
    for k in range(len(numeric.nu_vars)):
        ym = sum(cert.y[i] * numeric.matrix[i][k] for i in range(len(cert.y)))
        assert 0 <= ym <= 1
    assert sum(y * b for y, b in zip(cert.y, numeric.rhs)) == cert.value
    assert cert.value < 0


def test_violation_matches_direct_evaluation(scn41, verts41):
    verdict = check_table(scn41, verts41, contextual_table_41())
    point = {("p",) + c: v for c, v in contextual_table_41().as_dict().items()}
    assert verdict.inequality.evaluate(point) == -verdict.violation


def test_malformed_table_rejected(scn41, verts41):
    entries = {c: HALF for c in scn41.coords()}
    entries[1, 1, 0] = F(2)
    with pytest.raises(MalformedTable):
        check_table(scn41, verts41, DataTable.make(entries))


def test_wrong_shape_rejected(scn41, verts41):
    with pytest.raises(DimensionMismatch):
        check_table(scn41, verts41, DataTable.make({(1, 1, 0): HALF}))


def test_farkas_on_feasible_system_raises(scn41, verts41):
    f2 = build_f2(scn41, verts41)
    numeric = bind_table(f2, uniform_table(scn41))
    with pytest.raises(PrimalFeasible):
        farkas_certificate(numeric)


def multiplexing_objective():
    """Average probability of correctly recovering the queried bit when
    the four preparations encode the bit pairs 00, 11, 01, 10."""
    w = F(1, 8)
    terms = {p_var((1, 1, 0)): w, p_var((2, 1, 0)): w,
             p_var((1, 2, 1)): w, p_var((2, 2, 1)): w,
             p_var((1, 3, 0)): w, p_var((2, 3, 1)): w,
             p_var((1, 4, 1)): w, p_var((2, 4, 0)): w}
    return LinRow(terms, F(0), GEQ)


def test_multiplexing_optimum_is_three_quarters(scn41, verts41):
    value, witness = optimize(scn41, verts41, multiplexing_objective(), "max")
    assert value == F(3, 4)
    # the witness is a genuine table attaining the optimum
    point = {("p",) + c: v for c, v in witness.as_dict().items()}
    assert multiplexing_objective().evaluate(point) - \
        multiplexing_objective().const == F(3, 4) - multiplexing_objective().const
    verdict = check_table(scn41, verts41, witness)
    assert isinstance(verdict, Feasible)


def test_optimize_min_and_constant(scn41, verts41):
    obj = LinRow({p(1, 1): F(1)}, F(2), GEQ)
    vmax, _ = optimize(scn41, verts41, obj, "max")
    vmin, _ = optimize(scn41, verts41, obj, "min")
    assert vmax == 3 and vmin == 2


def test_optimize_rejects_bad_input(scn41, verts41):
    with pytest.raises(ValueError):
        optimize(scn41, verts41, LinRow({p(1, 1): F(1)}, F(0), GEQ), "sup")
    with pytest.raises(DimensionMismatch):
        optimize(scn41, verts41, LinRow({("p", 9, 9, 0): F(1)}, F(0), GEQ))


def random_table(scn, rng, respect_oe=False):
    """A random normalized table; optionally projected onto the
    equivalence-respecting affine subspace by mixing with uniform."""
    entries = {}
    for i in scn.measurements():
        for j in scn.preparations():
            weights = [F(rng.randint(0, 6)) for _ in scn.outcomes()]
            total = sum(weights) or F(1)
            for m in scn.outcomes():
                entries[i, j, m] = weights[m] / total if sum(weights) else \
                    F(1, scn.d)
    return DataTable.make(entries)


def test_dichotomy_on_random_tables(scn41, verts41, poly41):
    """Either an explicit model exists or a verified certificate does, and
    the verdict always matches polytope membership."""
    rng = random.Random(7)
    f2 = build_f2(scn41, verts41)
    seen_inf = 0
    for _ in range(60):
        table = random_table(scn41, rng)
        verdict = check_table(scn41, verts41, table)
        member = poly41.contains(table.as_dict())
        if isinstance(verdict, Feasible):
            assert member
            assert reconstruct_table(f2, verdict.nu) == table
        else:
            assert not member
            seen_inf += 1
            assert verdict.violation > 0
            point = {("p",) + c: v for c, v in table.as_dict().items()}
            assert verdict.inequality.evaluate(point) == -verdict.violation
    assert seen_inf > 0
