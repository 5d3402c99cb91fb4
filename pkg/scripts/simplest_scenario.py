"""Reproduce the four-preparation, two-measurement analysis end to end.

Prints the extremal measurement assignments, the noncontextual polytope,
the certificate for the maximally contextual table, and the exact optimum
of the two-bit multiplexing objective.  Runs in about a second.

Usage: python3 scripts/simplest_scenario.py [--output polytope.json]
"""

import argparse
import sys
import time
from fractions import Fraction
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from ncpolytope.documents import polytope_to_doc, write_document
from ncpolytope.feasibility import Infeasible, check_table, optimize
from ncpolytope.linalg import GEQ, LinRow
from ncpolytope.measurement_polytope import build_measurement_h, enumerate_vertices
from ncpolytope.ncsystem import build_f2
from ncpolytope.projection import project_to_nc_polytope
from ncpolytope.scenario import DataTable, p_var, scenario

F = Fraction


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--output", help="write the polytope document here")
    args = parser.parse_args()

    scn = scenario(g=4, l=2, d=2,
                   oe_p=[({1: F(1, 2), 2: F(1, 2)},
                          {3: F(1, 2), 4: F(1, 2)})])

    start = time.perf_counter()
    vs = enumerate_vertices(build_measurement_h(scn))
    print(f"extremal measurement assignments ({len(vs)}):")
    for v in vs.as_tuples():
        print("   ", tuple(str(x) for x in v))

    poly = project_to_nc_polytope(build_f2(scn, vs))
    print(f"polytope: {len(poly.equalities)} equalities, "
          f"{len(poly.facets)} facets "
          f"({time.perf_counter() - start:.2f} s)")
    for row in poly.facets:
        print("   ", row)

    # the table that maximally violates the nontrivial facet
    p0 = {(1, 1): 1, (1, 2): 0, (1, 3): 1, (1, 4): 0,
          (2, 1): 1, (2, 2): 0, (2, 3): 0, (2, 4): 1}
    entries = {}
    for (i, j), v in p0.items():
        entries[i, j, 0] = F(v)
        entries[i, j, 1] = 1 - F(v)
    verdict = check_table(scn, vs, DataTable.make(entries))
    assert isinstance(verdict, Infeasible)
    print("extremal table verdict: infeasible")
    print("    inequality:", verdict.inequality)
    print("    violation: ", verdict.violation)

    # two-bit multiplexing: average probability of recovering the queried
    # bit when P1..P4 encode the bit pairs 00, 11, 01, 10
    w = F(1, 8)
    objective = LinRow({p_var((1, 1, 0)): w, p_var((2, 1, 0)): w,
                        p_var((1, 2, 1)): w, p_var((2, 2, 1)): w,
                        p_var((1, 3, 0)): w, p_var((2, 3, 1)): w,
                        p_var((1, 4, 1)): w, p_var((2, 4, 0)): w},
                       F(0), GEQ)
    value, witness = optimize(scn, vs, objective, "max")
    print("multiplexing optimum:", value)

    if args.output:
        with open(args.output, "w") as fh:
            write_document(polytope_to_doc(poly), fh)
        print("polytope written to", args.output)


if __name__ == "__main__":
    main()
