"""Exact feasibility checking of numeric data tables, with certificates.

A table admits a noncontextual model iff the system ``M x = b*, x >= 0``
over the vertex-distribution unknowns has a solution.  Infeasibility is
certified by a Farkas dual ``y`` with ``0 <= y.M <= 1`` and ``y.b* < 0``;
reading the linking-block entries of ``y`` as coefficients on the table
probabilities turns the certificate into a violated noncontextuality
inequality whose constant term is the sum of the normalization-block
entries.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .linalg import EQ, GEQ, ONE, ZERO, LinRow, LinearSystem, canonicalize_row
from .measurement_polytope import VertexSet
from .ncsystem import (LINKING, NORMALIZATION, F2System, NumericF2, build_f2,
                       bind_table, nu_var)
from .scenario import DataTable, DimensionMismatch, Scenario, p_var, validate_table
from .simplex import INFEASIBLE, OPTIMAL, UNBOUNDED, solve_standard


class PrimalFeasible(Exception):
    """farkas_certificate was called on a feasible system."""


class MalformedTable(Exception):
    """The table fails normalization; it is malformed, not contextual."""


@dataclass
class Certificate:
    """A verified Farkas dual for an infeasible table."""

    y: list                  # indexed like NumericF2.row_labels
    row_labels: list
    value: Fraction          # y . b*, strictly negative

    def entries(self, block) -> dict:
        return {label[1]: v for label, v in zip(self.row_labels, self.y)
                if label[0] == block}


@dataclass
class Feasible:
    nu: dict                 # an explicit noncontextual model


@dataclass
class Infeasible:
    certificate: Certificate
    inequality: LinRow       # canonical GEQ row over p-coordinates
    violation: Fraction      # amount by which the table violates it


Verdict = Feasible | Infeasible


def check_table(scn: Scenario, vertices: VertexSet, table: DataTable) -> Verdict:
    """Decide noncontextuality of a numeric table, with witness or certificate."""
    report = validate_table(scn, table)  # raises DimensionMismatch on shape
    if not report.normalized:
        raise MalformedTable("table entries are not normalized probabilities")
    f2 = build_f2(scn, vertices)
    numeric = bind_table(f2, table)
    res = solve_standard(numeric.matrix, numeric.rhs, [ZERO] * len(numeric.nu_vars))
    if res.status == OPTIMAL:
        return Feasible(dict(zip(numeric.nu_vars, res.x)))
    cert = farkas_certificate(numeric)
    inequality, violation = certificate_to_inequality(cert, f2)
    return Infeasible(cert, inequality, violation)


def farkas_certificate(numeric: NumericF2) -> Certificate:
    """Most-violated certificate: min y.b* subject to 0 <= y.M <= 1.

    Solved to optimality so |y.b*| is the largest violation the box
    normalization allows.  When the minimum is unbounded (possible when
    the table breaks an operational equivalence exactly), the unbounded
    direction itself is the certificate: it satisfies y.M = 0.
    """
    y = _solve_box_dual(numeric)
    value = _dot(y, numeric.rhs)
    if value >= 0:
        raise PrimalFeasible("the primal system M x = b* has a solution")
    _verify(y, numeric)
    return Certificate(y, list(numeric.row_labels), value)


def _solve_box_dual(numeric: NumericF2):
    """Exact solution of  min y.b*  s.t.  0 <= y.M <= 1,  y free."""
    nrows = len(numeric.matrix)
    ncols = len(numeric.nu_vars)
    # Standard form: y = u - w with u, w >= 0; slacks s, t >= 0 with
    # (y.M)_k - s_k = 0 and (y.M)_k + t_k = 1.
    n = 2 * nrows + 2 * ncols
    A = []
    b = []
    for k in range(ncols):
        col = [numeric.matrix[i][k] for i in range(nrows)]
        A.append(col + [-a for a in col]
                 + [-ONE if q == k else ZERO for q in range(ncols)]
                 + [ZERO] * ncols)
        b.append(ZERO)
    for k in range(ncols):
        col = [numeric.matrix[i][k] for i in range(nrows)]
        A.append(col + [-a for a in col]
                 + [ZERO] * ncols
                 + [ONE if q == k else ZERO for q in range(ncols)])
        b.append(ONE)
    c = list(numeric.rhs) + [-v for v in numeric.rhs] + [ZERO] * (2 * ncols)
    res = solve_standard(A, b, c)
    if res.status == OPTIMAL:
        u = res.x[:nrows]
        w = res.x[nrows:2 * nrows]
        return [a - d for a, d in zip(u, w)]
    if res.status == UNBOUNDED:
        u = res.ray[:nrows]
        w = res.ray[nrows:2 * nrows]
        return [a - d for a, d in zip(u, w)]
    raise AssertionError("box dual LP cannot be infeasible (y = 0 works)")


def _verify(y, numeric: NumericF2):
    """Independent re-check of the Farkas conditions before returning."""
    for k in range(len(numeric.nu_vars)):
        ym = _dot(y, [numeric.matrix[i][k] for i in range(len(y))])
        if not (0 <= ym <= 1):
            raise AssertionError(f"certificate violates box constraint: (y.M)_{k} = {ym}")
    if _dot(y, numeric.rhs) >= 0:
        raise AssertionError("certificate has y.b* >= 0")


def _dot(a, b):
    return sum((x * y for x, y in zip(a, b)), ZERO)


def certificate_to_inequality(cert: Certificate, f2: F2System):
    """Translate a certificate into a violated noncontextuality inequality.

    The inequality ``sum(gamma.p) + gamma0 >= 0`` holds for every feasible
    table; the violation reported is the (positive) amount by which the
    canonicalized inequality fails on the submitted table.
    """
    coeffs = {p_var(coord): v for coord, v in cert.entries(LINKING).items() if v}
    gamma0 = sum(cert.entries(NORMALIZATION).values(), ZERO)
    raw = LinRow(coeffs, gamma0, GEQ)
    inequality = canonicalize_row(raw)
    # The canonical row is a positive rescaling of y.b >= 0, so the exact
    # violation is minus its value on the table encoded in the certificate.
    scale = _scale_factor(raw, inequality)
    violation = -cert.value * scale
    return inequality, violation


def _scale_factor(raw: LinRow, canonical: LinRow) -> Fraction:
    for v, c in raw.coeffs.items():
        return canonical.coeffs[v] / c
    return canonical.const / raw.const


def optimize(scn: Scenario, vertices: VertexSet, objective: LinRow, sense="max"):
    """Exact optimum of a linear functional of the table over the NC polytope.

    Works directly on the vertex-distribution parametrization (no
    projection needed): substitute the linking map into the objective and
    solve one LP over the distributions.  Returns the optimal value and a
    witness table attaining it.
    """
    if sense not in ("max", "min"):
        raise ValueError("sense must be 'max' or 'min'")
    from .ncsystem import reconstruct_table  # local import to avoid cycle
    f2 = build_f2(scn, vertices)
    bad = [v for v in objective.coeffs if v not in set(f2.p_vars)]
    if bad:
        raise DimensionMismatch(f"objective mentions unknown coordinates {bad[:3]}")
    # Objective in nu variables: p(m|M_i,P_j) = sum_k xi_k(i,m) nu_j(k).
    nverts = len(vertices)
    cost = {v: ZERO for v in f2.nu_vars}
    for var, gamma in objective.coeffs.items():
        _, i, j, m = var
        for k in range(1, nverts + 1):
            xi = vertices.component(k, i, m)
            if xi:
                cost[nu_var(j, k)] += gamma * xi
    c = [cost[v] for v in f2.nu_vars]
    if sense == "max":
        c = [-a for a in c]
    rows = [r for r, lab in zip(f2.eq_rows(), f2.eq_labels) if lab[0] != LINKING]
    A = [[row.coeffs.get(v, ZERO) for v in f2.nu_vars] for row in rows]
    b = [-row.const for row in rows]
    res = solve_standard(A, b, c)
    assert res.status == OPTIMAL, "the NC polytope is nonempty and bounded"
    nu = dict(zip(f2.nu_vars, res.x))
    value = (-res.value if sense == "max" else res.value) + objective.const
    return value, reconstruct_table(f2, nu)
