"""Serialization of scenarios, tables, polytopes, and results.

All documents are JSON trees with every rational stored as a string
("3/4", "1", "-1/2"), so files are a bit-exact interchange format: parsing
an emitted document always reproduces the value that produced it.  Every
emitted document carries the package version under the "version" key.
"""

from __future__ import annotations

import json
from fractions import Fraction

from . import __version__
from .linalg import EQ, GEQ, LinRow, format_rat, rat
from .measurement_polytope import VertexSet, xi_var
from .projection import NCPolytope
from .scenario import DataTable, Scenario, p_var, p_vars, scenario


class ParseError(Exception):
    """A document is malformed or fails validation."""


def _fraction(text) -> Fraction:
    if not isinstance(text, str):
        raise ParseError(f"expected a rational string, got {text!r}")
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad rational {text!r}: {exc}") from exc


def _index(value, what) -> int:
    if not isinstance(value, int) or isinstance(value, bool) or value < 0:
        raise ParseError(f"bad {what} index {value!r}")
    return value


def read_document(path) -> dict:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError(f"{path}: top level must be an object")
    return doc


def write_document(doc: dict, stream) -> None:
    json.dump(doc, stream, indent=2, sort_keys=True)
    stream.write("\n")


def _stamp(doc: dict) -> dict:
    doc["version"] = __version__
    return doc


# --- scenario -------------------------------------------------------------


def scenario_to_doc(scn: Scenario) -> dict:
    return _stamp({
        "preparations": scn.g,
        "measurements": scn.l,
        "outcomes": scn.d,
        "prep_equivalences": [
            {"lhs": [[j, format_rat(w)] for j, w in eq.lhs],
             "rhs": [[j, format_rat(w)] for j, w in eq.rhs]}
            for eq in scn.oe_p],
        "meas_equivalences": [
            {"lhs": [[i, m, format_rat(w)] for (i, m), w in eq.lhs],
             "rhs": [[i, m, format_rat(w)] for (i, m), w in eq.rhs]}
            for eq in scn.oe_m],
    })


def scenario_from_doc(doc: dict) -> Scenario:
    for key in ("preparations", "measurements", "outcomes"):
        if key not in doc:
            raise ParseError(f"scenario document missing {key!r}")
    def prep_side(side):
        return {_index(j, "preparation"): _fraction(w) for j, w in side}

    def meas_side(side):
        return {(_index(i, "measurement"), _index(m, "outcome")): _fraction(w)
                for i, m, w in side}

    try:
        oe_p = [(prep_side(e["lhs"]), prep_side(e["rhs"]))
                for e in doc.get("prep_equivalences", [])]
        oe_m = [(meas_side(e["lhs"]), meas_side(e["rhs"]))
                for e in doc.get("meas_equivalences", [])]
        return scenario(g=_index(doc["preparations"], "preparation count"),
                        l=_index(doc["measurements"], "measurement count"),
                        d=_index(doc["outcomes"], "outcome count"),
                        oe_p=oe_p, oe_m=oe_m)
    except ParseError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed scenario document: {exc}") from exc


# --- data table -----------------------------------------------------------


def table_to_doc(table: DataTable) -> dict:
    return _stamp({"probabilities": [[i, j, m, format_rat(v)]
                                     for (i, j, m), v in table.entries]})


def table_from_doc(doc: dict) -> DataTable:
    if "probabilities" not in doc:
        raise ParseError("table document missing 'probabilities'")
    entries = {}
    try:
        for i, j, m, v in doc["probabilities"]:
            key = (_index(i, "measurement"), _index(j, "preparation"),
                   _index(m, "outcome"))
            if key in entries:
                raise ParseError(f"duplicate table entry for {key}")
            entries[key] = _fraction(v)
    except ParseError:
        raise
    except (TypeError, ValueError) as exc:
        raise ParseError(f"malformed table document: {exc}") from exc
    return DataTable.make(entries)


# --- linear rows over p-coordinates --------------------------------------


def row_to_doc(row: LinRow) -> dict:
    terms = sorted((v[1], v[2], v[3], c) for v, c in row.coeffs.items())
    return {"constant": format_rat(row.const),
            "terms": [[i, j, m, format_rat(c)] for i, j, m, c in terms]}


def row_from_doc(doc: dict, kind=GEQ) -> LinRow:
    try:
        coeffs = {}
        for i, j, m, c in doc["terms"]:
            var = p_var((_index(i, "measurement"), _index(j, "preparation"),
                         _index(m, "outcome")))
            if var in coeffs:
                raise ParseError(f"duplicate term for {var}")
            coeffs[var] = _fraction(c)
        return LinRow(coeffs, _fraction(doc["constant"]), kind)
    except ParseError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed row document: {exc}") from exc


# --- objectives -----------------------------------------------------------


def objective_from_doc(doc: dict):
    """Returns (LinRow over p-coordinates, sense)."""
    sense = doc.get("sense", "max")
    if sense not in ("max", "min"):
        raise ParseError(f"objective sense must be 'max' or 'min', got {sense!r}")
    if "terms" not in doc:
        raise ParseError("objective document missing 'terms'")
    row = row_from_doc({"terms": doc["terms"],
                        "constant": doc.get("constant", "0")})
    return row, sense


def objective_to_doc(row: LinRow, sense: str) -> dict:
    doc = row_to_doc(row)
    doc["sense"] = sense
    return _stamp(doc)


# --- vertex sets ----------------------------------------------------------


def vertices_to_doc(vs: VertexSet) -> dict:
    out = []
    for vertex in vs.vertices:
        out.append([[i, m, format_rat(vertex[xi_var(i, m)])]
                    for (_, i, m) in vs.variables])
    return _stamp({"vertices": out})


def vertices_from_doc(doc: dict) -> VertexSet:
    if "vertices" not in doc:
        raise ParseError("vertex document missing 'vertices'")
    vertices = []
    variables = None
    try:
        for entry in doc["vertices"]:
            point = {xi_var(_index(i, "measurement"), _index(m, "outcome")):
                     _fraction(v) for i, m, v in entry}
            keys = sorted(point)
            if variables is None:
                variables = keys
            elif keys != variables:
                raise ParseError("vertices use inconsistent coordinate sets")
            vertices.append(point)
    except ParseError:
        raise
    except (TypeError, ValueError) as exc:
        raise ParseError(f"malformed vertex document: {exc}") from exc
    if not vertices:
        raise ParseError("vertex document lists no vertices")
    return VertexSet(variables, vertices)


# --- polytopes ------------------------------------------------------------


def polytope_to_doc(poly: NCPolytope) -> dict:
    return _stamp({
        "equalities": [row_to_doc(r) for r in poly.equalities],
        "facets": [row_to_doc(r) for r in poly.facets],
    })


def polytope_from_doc(doc: dict, scn: Scenario) -> NCPolytope:
    for key in ("equalities", "facets"):
        if key not in doc:
            raise ParseError(f"polytope document missing {key!r}")
    equalities = [row_from_doc(r, EQ) for r in doc["equalities"]]
    facets = [row_from_doc(r, GEQ) for r in doc["facets"]]
    return NCPolytope(p_vars(scn), equalities, facets)


# --- generators -----------------------------------------------------------


def generators_from_doc(doc, scn: Scenario):
    """Compile a generator list document into Relabeling objects."""
    from .symmetry import flip_outcomes, swap_measurements, swap_preparations
    if isinstance(doc, dict):
        doc = doc.get("generators", doc)
    if not isinstance(doc, list):
        raise ParseError("generator document must be a list")
    out = []
    for entry in doc:
        try:
            kind = entry["type"]
            args = entry["args"]
            if kind == "swap_measurements":
                out.append(swap_measurements(scn, *args))
            elif kind == "swap_preparations":
                out.append(swap_preparations(scn, args))
            elif kind == "flip_outcomes":
                out.append(flip_outcomes(scn, args))
            else:
                raise ParseError(f"unknown generator type {kind!r}")
        except ParseError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed generator entry {entry!r}: {exc}") from exc
    return out


# --- results --------------------------------------------------------------


def verdict_to_doc(verdict) -> dict:
    from .feasibility import Feasible
    if isinstance(verdict, Feasible):
        return _stamp({
            "status": "feasible",
            "model": [[j, k, format_rat(v)]
                      for (_, j, k), v in sorted(verdict.nu.items())],
        })
    cert = verdict.certificate
    return _stamp({
        "status": "infeasible",
        "certificate": {
            "y": [[list(label), format_rat(v)] if not isinstance(label, str)
                  else [label, format_rat(v)]
                  for label, v in zip(cert.row_labels, cert.y)],
        },
        "inequality": row_to_doc(verdict.inequality),
        "violation": format_rat(verdict.violation),
    })


def optimum_to_doc(value, witness: DataTable) -> dict:
    return _stamp({
        "value": format_rat(value),
        "witness_table": [[i, j, m, format_rat(v)]
                          for (i, j, m), v in witness.entries],
    })


def orbits_to_doc(classes) -> dict:
    return _stamp({
        "classes": [{"representative": row_to_doc(c.representative),
                     "orbit_size": c.orbit_size}
                    for c in classes],
    })
