from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import four_prep_scenario, uniform_table
from ncpolytope.scenario import (MEAS, PREP, DataTable, DimensionMismatch,
                                 InvalidScenario, MeasEquivalence, PadExceedsD,
                                 PrepEquivalence, flatten_coord, pad_outcomes,
                                 scenario, unflatten_coord, validate_table)

HALF = Fraction(1, 2)
THIRD = Fraction(1, 3)


def test_builder_basic_shape():
    scn = four_prep_scenario()
    assert (scn.g, scn.l, scn.d) == (4, 2, 2)
    assert list(scn.preparations()) == [1, 2, 3, 4]
    assert list(scn.measurements()) == [1, 2]
    assert list(scn.outcomes()) == [0, 1]
    assert len(list(scn.coords())) == 2 * 4 * 2
    assert len(list(scn.effects())) == 2 * 2


def test_equivalence_maps_and_difference():
    oe = PrepEquivalence.make({1: HALF, 2: HALF}, {3: HALF, 4: HALF})
    assert oe.lhs_map() == {1: HALF, 2: HALF}
    diff = oe.difference()
    assert diff == {1: HALF, 2: HALF, 3: -HALF, 4: -HALF}


def test_nonconvex_weights_rejected():
    with pytest.raises(InvalidScenario) as exc:
        scenario(g=4, l=2, d=2,
                 oe_p=[({1: HALF, 2: Fraction(1, 4)}, {3: HALF, 4: HALF})])
    assert any(code == "NonConvexWeights" for code, _ in exc.value.errors)


def test_out_of_range_indices_rejected():
    with pytest.raises(InvalidScenario) as exc:
        scenario(g=2, l=1, d=2, oe_p=[({1: HALF, 5: HALF}, {2: 1})])
    assert any(code == "IndexOutOfRange" for code, _ in exc.value.errors)


def test_degenerate_equivalence_rejected():
    with pytest.raises(InvalidScenario) as exc:
        scenario(g=2, l=1, d=2, oe_p=[({1: HALF, 2: HALF}, {2: HALF, 1: HALF})])
    assert any(code == "DegenerateEquivalence" for code, _ in exc.value.errors)


def test_all_errors_collected_at_once():
    with pytest.raises(InvalidScenario) as exc:
        scenario(g=2, l=1, d=2,
                 oe_p=[({1: HALF, 2: Fraction(1, 4)}, {1: HALF, 2: HALF}),
                       ({1: 1}, {9: 1})],
                 oe_m=[({(1, 0): 1}, {(1, 5): 1})])
    codes = [code for code, _ in exc.value.errors]
    assert len(codes) >= 3
    assert "NonConvexWeights" in codes
    assert "IndexOutOfRange" in codes


def test_meas_equivalence_on_effects():
    scn = scenario(g=2, l=3, d=2,
                   oe_m=[({(1, 0): THIRD, (2, 0): THIRD, (3, 0): THIRD},
                          {(1, 1): THIRD, (2, 1): THIRD, (3, 1): THIRD})])
    (oe,) = scn.oe_m
    assert isinstance(oe, MeasEquivalence)
    assert oe.difference()[(1, 0)] == THIRD
    assert oe.difference()[(3, 1)] == -THIRD


@given(st.integers(1, 3), st.integers(1, 4), st.integers(2, 4))
def test_flatten_unflatten_round_trip(l, g, d):
    scn = scenario(g=g, l=l, d=d)
    seen = set()
    for coord in scn.coords():
        flat = flatten_coord(scn, coord)
        assert unflatten_coord(scn, flat) == coord
        seen.add(flat)
    assert seen == set(range(1, l * g * d + 1))


def test_flatten_out_of_range():
    scn = scenario(g=2, l=1, d=2)
    with pytest.raises(DimensionMismatch):
        flatten_coord(scn, (2, 1, 0))
    with pytest.raises(DimensionMismatch):
        unflatten_coord(scn, 0)


def test_validate_table_shape_mismatch():
    scn = four_prep_scenario()
    table = DataTable.make({(1, 1, 0): HALF})
    with pytest.raises(DimensionMismatch):
        validate_table(scn, table)


def test_validate_table_normalization_and_residuals():
    scn = four_prep_scenario()
    report = validate_table(scn, uniform_table(scn))
    assert report.normalized
    assert report.respects_equivalences
    assert all(worst == 0 for _, worst in report.oe_residuals)


def test_validate_table_flags_oe_violation():
    scn = four_prep_scenario()
    entries = {c: HALF for c in scn.coords()}
    entries[1, 1, 0] = Fraction(1)
    entries[1, 1, 1] = Fraction(0)
    report = validate_table(scn, DataTable.make(entries))
    assert report.normalized
    assert not report.respects_equivalences
    keys = [key for key, worst in report.oe_residuals if worst != 0]
    assert keys == [(PREP, 0)]


def test_validate_table_flags_meas_oe_violation():
    scn = scenario(g=2, l=3, d=2,
                   oe_m=[({(1, 0): THIRD, (2, 0): THIRD, (3, 0): THIRD},
                          {(1, 1): THIRD, (2, 1): THIRD, (3, 1): THIRD})])
    entries = {c: HALF for c in scn.coords()}
    entries[1, 1, 0] = Fraction(1)
    entries[1, 1, 1] = Fraction(0)
    report = validate_table(scn, DataTable.make(entries))
    assert [key for key, worst in report.oe_residuals if worst != 0] \
        == [(MEAS, 0)]


def test_validate_table_unnormalized():
    scn = scenario(g=1, l=1, d=2)
    report = validate_table(scn, DataTable.make(
        {(1, 1, 0): HALF, (1, 1, 1): Fraction(3, 4)}))
    assert not report.normalized


def test_pad_outcomes():
    scn = scenario(g=2, l=2, d=3)
    padded = pad_outcomes(scn, [2, 3])
    assert padded.padded == frozenset({(1, 2)})
    entries = {c: Fraction(0) for c in padded.coords()}
    for j in (1, 2):
        entries[1, j, 0] = Fraction(1)
        entries[2, j, 0] = Fraction(1, 3)
        entries[2, j, 1] = Fraction(1, 3)
        entries[2, j, 2] = Fraction(1, 3)
    entries[1, 1, 2] = entries[1, 1, 0]
    entries[1, 1, 0] = Fraction(0)
    report = validate_table(padded, DataTable.make(entries))
    assert report.padded_violations == [(1, 1, 2)]


def test_pad_exceeds_d():
    scn = scenario(g=2, l=1, d=2)
    with pytest.raises(PadExceedsD):
        pad_outcomes(scn, [3])


def test_table_round_trip_and_lookup():
    scn = scenario(g=1, l=1, d=2)
    table = DataTable.make({(1, 1, 0): THIRD, (1, 1, 1): 1 - THIRD})
    assert table[1, 1, 0] == THIRD
    assert table.as_dict() == {(1, 1, 0): THIRD, (1, 1, 1): 1 - THIRD}
    assert DataTable.make(table.as_dict()) == table
