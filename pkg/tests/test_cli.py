import json
from fractions import Fraction

import pytest

from conftest import SCENARIO_DIR
from ncpolytope.cli import (EXIT_INFEASIBLE, EXIT_LIMIT, EXIT_OK, EXIT_PARSE,
                            main)

F = Fraction

SIMPLEST = str(SCENARIO_DIR / "simplest.json")
CONTEXTUAL = str(SCENARIO_DIR / "simplest_table_contextual.json")
OBJECTIVE = str(SCENARIO_DIR / "simplest_pom_objective.json")


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_vertices(capsys):
    code, out, _ = run(capsys, "vertices", SIMPLEST)
    assert code == EXIT_OK
    doc = json.loads(out)
    assert len(doc["vertices"]) == 4


def test_polytope_and_output_file(capsys, tmp_path):
    target = tmp_path / "poly.json"
    code, out, _ = run(capsys, "polytope", SIMPLEST, "--output", str(target))
    assert code == EXIT_OK
    assert out == ""
    doc = json.loads(target.read_text())
    assert len(doc["facets"]) == 24
    assert len(doc["equalities"]) == 10


def test_polytope_stdout_deterministic(capsys):
    code1, out1, _ = run(capsys, "polytope", SIMPLEST)
    code2, out2, _ = run(capsys, "polytope", SIMPLEST)
    assert code1 == code2 == EXIT_OK
    assert out1 == out2


def test_check_contextual_table(capsys):
    code, out, _ = run(capsys, "check", SIMPLEST, CONTEXTUAL)
    assert code == EXIT_INFEASIBLE
    doc = json.loads(out)
    assert doc["status"] == "infeasible"
    assert F(doc["violation"]) == 1


def test_check_feasible_table(capsys, tmp_path):
    table = {"probabilities": [[i, j, m, "1/2"]
                               for i in (1, 2) for j in (1, 2, 3, 4)
                               for m in (0, 1)]}
    path = tmp_path / "uniform.json"
    path.write_text(json.dumps(table))
    code, out, _ = run(capsys, "check", SIMPLEST, str(path))
    assert code == EXIT_OK
    assert json.loads(out)["status"] == "feasible"


def test_optimize(capsys):
    code, out, _ = run(capsys, "optimize", SIMPLEST, OBJECTIVE)
    assert code == EXIT_OK
    doc = json.loads(out)
    assert F(doc["value"]) == F(3, 4)
    assert len(doc["witness_table"]) == 16


def test_orbits_pipeline(capsys, tmp_path):
    poly_path = tmp_path / "poly.json"
    assert main(["polytope", SIMPLEST, "--output", str(poly_path)]) == EXIT_OK
    gens = {"generators": [
        {"type": "swap_measurements", "args": [1, 2]},
        {"type": "swap_preparations", "args": [1, 2]},
        {"type": "swap_preparations", "args": [[1, 3], [2, 4]]},
    ]}
    gens_path = tmp_path / "gens.json"
    gens_path.write_text(json.dumps(gens))
    capsys.readouterr()
    code, out, _ = run(capsys, "orbits", SIMPLEST, str(poly_path),
                       str(gens_path))
    assert code == EXIT_OK
    doc = json.loads(out)
    assert sorted(c["orbit_size"] for c in doc["classes"]) == [8, 8, 8]


def test_parse_error_exit_code(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    code, _, err = run(capsys, "vertices", str(bad))
    assert code == EXIT_PARSE
    assert "error:" in err


def test_invalid_scenario_exit_code(capsys, tmp_path):
    doc = {"preparations": 2, "measurements": 1, "outcomes": 2,
           "prep_equivalences": [
               {"lhs": [[1, "1/2"], [2, "1/4"]], "rhs": [[1, "1"]]}]}
    path = tmp_path / "scn.json"
    path.write_text(json.dumps(doc))
    code, _, err = run(capsys, "vertices", str(path))
    assert code == EXIT_PARSE


def test_malformed_table_exit_code(capsys, tmp_path):
    table = {"probabilities": [[i, j, m, "2" if (i, j, m) == (1, 1, 0)
                                else "1/2"]
                               for i in (1, 2) for j in (1, 2, 3, 4)
                               for m in (0, 1)]}
    path = tmp_path / "t.json"
    path.write_text(json.dumps(table))
    code, _, err = run(capsys, "check", SIMPLEST, str(path))
    assert code == EXIT_PARSE


def test_group_cap_exit_code(capsys, tmp_path, monkeypatch):
    import ncpolytope.symmetry as symmetry
    monkeypatch.setattr(symmetry, "GROUP_CAP", 2)
    poly_path = tmp_path / "poly.json"
    assert main(["polytope", SIMPLEST, "--output", str(poly_path)]) == EXIT_OK
    gens = {"generators": [
        {"type": "swap_measurements", "args": [1, 2]},
        {"type": "swap_preparations", "args": [1, 2]},
    ]}
    gens_path = tmp_path / "gens.json"
    gens_path.write_text(json.dumps(gens))
    capsys.readouterr()
    code, _, err = run(capsys, "orbits", SIMPLEST, str(poly_path),
                       str(gens_path))
    assert code == EXIT_LIMIT


def test_jobs_flag_accepted(capsys):
    code, out, _ = run(capsys, "vertices", SIMPLEST, "--jobs", "4")
    assert code == EXIT_OK


def test_verbose_progress_on_stderr(capsys):
    code, out, err = run(capsys, "polytope", SIMPLEST, "-v")
    assert code == EXIT_OK
    assert "coordinates left" in err
