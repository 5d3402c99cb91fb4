"""Projection of the vertex-distribution system onto data-table space.

Eliminating the distribution unknowns from the finite system yields the
generalized-noncontextual polytope: every data table admitting a
noncontextual model satisfies its affine-hull equalities exactly and all of
its facet inequalities, and conversely.

The pipeline substitutes the equality rows away first (preferring to
eliminate distribution variables, so data-table coordinates stay free
wherever possible), then removes the remaining distribution variables one
at a time by Fourier-Motzkin elimination with Chernikov ancestor pruning,
running an exact-LP irredundancy pass after every elimination step to keep
the intermediate row count at the true facet count.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .linalg import (EQ, GEQ, ONE, ZERO, LinRow, LinearSystem,
                     canonicalize_row, reduce_modulo, rref,
                     row_reduce_equalities)
from .ncsystem import F2System, nu_var
from .scenario import p_vars
from .simplex import OPTIMAL, UNBOUNDED, minimize_over_rows, solve_standard


@dataclass
class NCPolytope:
    """Affine-hull equalities plus irredundant facets over p-coordinates.

    ``equalities`` are in reduced row echelon form over the canonical
    coordinate order (pivoting on the latest coordinate, so low-index
    probabilities stay free); ``facets`` are canonical rows over the free
    coordinates only, i.e. already reduced modulo the equalities.
    """

    variables: list    # all p-coordinates, canonical order
    equalities: list
    facets: list

    def contains(self, probs: dict) -> bool:
        """Exact membership of a full coordinate assignment."""
        point = {("p",) + c: p for c, p in probs.items()}
        return (all(r.satisfied_by(point) for r in self.equalities)
                and all(r.satisfied_by(point) for r in self.facets))

    def reduce(self, row: LinRow) -> LinRow:
        return reduce_modulo(row, self.equalities, self.variables)


# --- Fourier-Motzkin on dense integer rows -------------------------------
#
# A dense row is (coeff_0, ..., coeff_{d-1}, const) of ints, meaning
# coeffs . x + const >= 0.  Ancestor sets are frozensets of original row
# indices, used for the Chernikov cardinality rule.


def _normalize(row):
    g = 0
    for a in row:
        g = gcd(g, abs(a))
    return tuple(a // g for a in row) if g > 1 else tuple(row)


def _combine(pos_row, pos_val, neg_row, neg_val, col):
    # pos_val = pos_row[col] > 0, neg_val = neg_row[col] < 0.
    return _normalize(tuple(pos_val * bn - neg_val * bp
                            for bp, bn in zip(pos_row, neg_row)))


def fm_step(rows, ancestors, col, eliminations_done):
    """One Fourier-Motzkin elimination with Chernikov ancestor pruning.

    ``col`` is the index of the coordinate to eliminate; the output rows
    have that coordinate removed.  A combined row whose ancestor set
    exceeds ``1 + eliminations_done`` (counting this step) is provably
    redundant and dropped.
    """
    limit = 1 + eliminations_done + 1
    pos, neg, zero = [], [], []
    for row, anc in zip(rows, ancestors):
        v = row[col]
        (pos if v > 0 else neg if v < 0 else zero).append((row, anc, v))

    def strip(row):
        return row[:col] + row[col + 1:]

    out_rows, out_anc = [], []
    seen = {}
    for row, anc, _ in zero:
        key = strip(row)
        if key not in seen or len(anc) < len(seen[key]):
            seen[key] = anc
    for prow, panc, pval in pos:
        for nrow, nanc, nval in neg:
            anc = panc | nanc
            if len(anc) > limit:
                continue
            combo = strip(_pad(_combine(prow, pval, nrow, nval, col)))
            if not any(combo[:-1]) and combo[-1] >= 0:
                continue  # trivially true
            if combo in seen:
                if len(anc) < len(seen[combo]):
                    seen[combo] = anc
            else:
                seen[combo] = anc
    for key in sorted(seen):
        out_rows.append(key)
        out_anc.append(seen[key])
    return out_rows, out_anc


def _pad(row):
    return row


def fm_eliminate_var(rows, var):
    """Public single-variable elimination on GEQ LinRows.

    The solution set of the output is exactly the projection of the
    input's solution set along ``var``.
    """
    variables = sorted({v for r in rows for v in r.coeffs} | {var})
    col = variables.index(var)
    dense = []
    for r in rows:
        if r.kind != GEQ:
            raise ValueError("fm_eliminate_var expects GEQ rows only")
        dense.append(_dense_row(r, variables))
    anc = [frozenset([i]) for i in range(len(dense))]
    out, _ = fm_step(dense, anc, col, 0)
    rest = variables[:col] + variables[col + 1:]
    return [_lift_row(row, rest) for row in out]


def _dense_row(row: LinRow, variables):
    entries = [row.coeffs.get(v, ZERO) for v in variables] + [row.const]
    lcm = 1
    for e in entries:
        lcm = lcm * e.denominator // gcd(lcm, e.denominator)
    return _normalize(tuple(int(e * lcm) for e in entries))


def _lift_row(dense, variables, kind=GEQ) -> LinRow:
    coeffs = {v: Fraction(a) for v, a in zip(variables, dense[:-1]) if a}
    return LinRow(coeffs, Fraction(dense[-1]), kind)


# --- LP-certified irredundancy -------------------------------------------


def irredundant_rows(rows, witnesses=None):
    """Minimal subset of dense rows defining the same region.

    Each surviving row is certified non-redundant by a point that violates
    it while satisfying all other survivors; each removed row is certified
    implied by an exact LP.  ``witnesses`` (scaled integer points, see
    :func:`_scale_point`) from earlier passes short-circuit most LPs.
    """
    rows = sorted(set(rows))
    if witnesses is None:
        witnesses = []
    alive = [True] * len(rows)

    def value(point, row):
        ints, den = point
        return sum(a * w for a, w in zip(row[:-1], ints)) + row[-1] * den

    # witness index -> row index it is known to violate
    for idx, row in enumerate(rows):
        others = [r for k, r in enumerate(rows) if alive[k] and k != idx]
        certified = False
        for point in witnesses:
            if value(point, row) < 0 and all(value(point, r) >= 0 for r in others):
                certified = True
                break
        if certified:
            continue
        dim = len(row) - 1
        bound = row[:-1] + (row[-1] + 1,)  # keeps the LP bounded below
        res = minimize_over_rows(others + [bound], [Fraction(a) for a in row[:-1]])
        assert res.status == OPTIMAL
        if res.value + row[-1] >= 0:
            alive[idx] = False
        else:
            witnesses.append(_scale_point(res.x))
    return [r for k, r in enumerate(rows) if alive[k]], witnesses


def _scale_point(x):
    den = 1
    for v in x:
        den = den * v.denominator // gcd(den, v.denominator)
    return tuple(int(v * den) for v in x), den


def remove_redundant(rows, equalities=()):
    """Minimal sub-list of GEQ LinRows defining the same region, modulo
    the given equalities.  Survivors are returned as given (not reduced)."""
    variables = sorted({v for r in rows for v in r.coeffs}
                       | {v for e in equalities for v in e.coeffs})
    eqs = rref(list(equalities), variables) if equalities else []
    reduced = [reduce_modulo(r, eqs, variables) for r in rows]
    free = [v for v in variables
            if not any(max(e.coeffs, key=variables.index) == v for e in eqs)]
    dense = [_dense_row(r, free) for r in reduced]
    keep_set = set(irredundant_rows(dense)[0])
    out = []
    seen = set()
    for orig, d in zip(rows, dense):
        if d in keep_set and d not in seen:
            seen.add(d)
            out.append(orig)
    return out


# --- Full projection -----------------------------------------------------


FM_MAX_NU_DIM = 9


def project_to_nc_polytope(f2: F2System, progress=None, engine=None) -> NCPolytope:
    """Eliminate every distribution variable; return the NC polytope.

    Two exact engines produce identical output.  ``"fm"`` eliminates the
    distribution coordinates one by one (Fourier-Motzkin with an LP
    irredundancy pass per step); its per-step LP count grows quickly with
    the distribution dimension, so for larger systems the default is
    ``"hull"``: enumerate the vertices of the distribution polytope, map
    them through the linking rows, and convert the resulting point set
    back to facets via a polar double description.
    """
    subs, reduced, equalities, all_p = _affine_hull(f2)
    if engine is None:
        nu_dim = sum(1 for v in reduced.variables if v[0] == "nu")
        engine = "fm" if nu_dim <= FM_MAX_NU_DIM else "hull"
    if engine == "hull":
        facets = _hull_facets(f2, equalities, all_p, progress)
    elif engine == "fm":
        facets = _fm_facets(f2, reduced, progress)
    else:
        raise ValueError(f"unknown projection engine {engine!r}")
    facets.sort(key=lambda r: r.key(all_p))
    return NCPolytope(all_p, equalities, facets)


def _affine_hull(f2: F2System):
    """Equality reduction; pure-p pivot rows are the affine-hull equalities."""
    prefer = set(f2.nu_vars)
    subs, reduced = row_reduce_equalities(f2.system, prefer=prefer)
    # Substitutions whose pivot is a p-coordinate are guaranteed pure-p by
    # the nu-first pivot preference.
    eq_rows = []
    for var, (coeffs, const) in subs.items():
        if var[0] == "p":
            row = dict(coeffs)
            row[var] = row.get(var, ZERO) - ONE
            eq_rows.append(LinRow(row, const, EQ))
    all_p = p_vars(f2.scenario)
    return subs, reduced, rref(eq_rows, all_p), all_p


def _fm_facets(f2: F2System, reduced, progress):
    free = reduced.variables
    dense = [_dense_row(r, free) for r in reduced.rows]
    ancestors = [frozenset([i]) for i in range(len(dense))]
    eliminations = 0
    witnesses = []
    while True:
        nu_cols = [k for k, v in enumerate(free) if v[0] == "nu"]
        if not nu_cols:
            break
        col = _pick_column(dense, nu_cols, free, f2.nu_vars)
        dense, ancestors = fm_step(dense, ancestors, col, eliminations)
        free = free[:col] + free[col + 1:]
        # Projecting a feasible point just drops the eliminated coordinate.
        witnesses = [(w[:col] + w[col + 1:], den) for w, den in witnesses]
        dense, witnesses = irredundant_rows(dense, witnesses)
        # After LP filtering every survivor is a facet of the current
        # projection, so Chernikov bookkeeping restarts from a clean system.
        ancestors = [frozenset([i]) for i in range(len(dense))]
        eliminations = 0
        if progress:
            progress(len(free), len(dense))

    # The equality reduction alone can eliminate every distribution
    # variable, in which case the loop body never ran; one final pass
    # guarantees the survivors are deduplicated and irredundant.
    dense = [r for r in dense if any(r[:-1])]
    dense, witnesses = irredundant_rows(dense, witnesses)
    return [canonicalize_row(_lift_row(r, free)) for r in dense]


# --- Hull engine ----------------------------------------------------------
#
# Vertices of the image of a polytope are images of its vertices, so the
# projection can be computed as: enumerate the distribution-polytope
# vertices, push them through the linking map, keep the extreme points,
# and recover the facet description by a polar double description around
# an interior point.  Everything below is exact integer/rational.


def _hull_facets(f2: F2System, equalities, all_p, progress):
    nu_rows = [r for r in f2.system.rows
               if all(v[0] == "nu" for v in r.coeffs)]
    nu_system = LinearSystem(list(f2.nu_vars), nu_rows)
    subs, reduced = row_reduce_equalities(nu_system)
    free_nu = reduced.variables
    ineqs = [_dense_row(r, free_nu) for r in reduced.rows]
    nu_vertices = _cone_dd_vertices(ineqs, len(free_nu))
    if progress:
        progress(len(free_nu), len(nu_vertices))

    pivots = {max(e.coeffs, key=all_p.index) for e in equalities}
    free_p = [v for v in all_p if v not in pivots]
    nverts = len(f2.vertices)
    points = set()
    for vy in nu_vertices:
        point = dict(zip(free_nu, vy))
        for var, (coeffs, const) in subs.items():
            point[var] = sum((c * point[w] for w, c in coeffs.items()), const)
        coords = []
        for (_, i, j, m) in free_p:
            coords.append(sum((f2.vertices.component(k, i, m)
                               * point[nu_var(j, k)]
                               for k in range(1, nverts + 1)), ZERO))
        points.add(tuple(coords))
    points = _extreme_points(sorted(points))
    if progress:
        progress(len(free_p), len(points))

    dim = len(free_p)
    if dim == 0 or len(points) == 1:
        return []
    center = [sum(p[k] for p in points) / len(points) for k in range(dim)]
    # Far points first keeps intermediate ray counts close to the output.
    points.sort(key=lambda p: sum((x - y) ** 2 for x, y in zip(p, center)),
                reverse=True)
    polar = [_int_scaled([-(x - c) for x, c in zip(p, center)] + [ONE])
             for p in points]
    facets = set()
    for ray in _cone_dd(polar, dim):
        t = ray[-1]
        assert t > 0, "polar of a full-dimensional hull is bounded"
        u = [Fraction(a, t) for a in ray[:-1]]
        const = ONE + sum(ui * ci for ui, ci in zip(u, center))
        facets.add(_int_scaled([-ui for ui in u] + [const]))
    return [canonicalize_row(_lift_row(r, free_p)) for r in sorted(facets)]


def _extreme_points(points):
    """Drop every point that is a convex combination of the others."""
    alive = list(points)
    dim = len(points[0])
    for idx in range(len(alive)):
        target = alive[idx]
        others = [q for k, q in enumerate(alive) if k != idx and q is not None]
        A = [[q[r] for q in others] for r in range(dim)]
        A.append([ONE] * len(others))
        b = list(target) + [ONE]
        res = solve_standard(A, b, [ZERO] * len(others))
        if res.status == OPTIMAL:
            alive[idx] = None
    return [q for q in alive if q is not None]


def _int_scaled(vec):
    den = 1
    for v in vec:
        den = den * v.denominator // gcd(den, v.denominator)
    ints = [int(v * den) for v in vec]
    g = 0
    for a in ints:
        g = gcd(g, abs(a))
    if g > 1:
        ints = [a // g for a in ints]
    return tuple(ints)


def _rank_int(rows, ncols) -> int:
    """Rank by fraction-free integer elimination with gcd reduction."""
    rows = [list(r) for r in rows]
    rank = 0
    for col in range(ncols):
        piv = None
        for i in range(rank, len(rows)):
            if rows[i][col]:
                piv = i
                break
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        prow = rows[rank]
        pval = prow[col]
        for i in range(rank + 1, len(rows)):
            f = rows[i][col]
            if f:
                merged = [a * pval - b * f for a, b in zip(rows[i], prow)]
                g = 0
                for a in merged:
                    g = gcd(g, abs(a))
                rows[i] = [a // g for a in merged] if g > 1 else merged
        rank += 1
        if rank == len(rows):
            break
    return rank


def _cone_dd(ineqs, dim):
    """Extreme rays of {(y, t): t >= 0, a.y + a0 t >= 0 for each row}.

    Double description starting from a full-rank subset of the rows (the
    initial simplicial cone's rays are the columns of the subset's
    inverse), with combinatorial adjacency certified by an exact rank
    test.  ``ineqs`` are integer tuples with the constant last.
    """
    D = dim + 1
    rows = [tuple([0] * dim + [1])] + [tuple(r) for r in ineqs]
    init = []
    for k, row in enumerate(rows):
        if len(init) == D:
            break
        if _rank_int([rows[i] for i in init] + [row], D) > len(init):
            init.append(k)
    if len(init) < D:
        raise ValueError("inequality rows do not span the space")

    matrix = [[Fraction(rows[k][c]) for c in range(D)] for k in init]
    rays = [_int_scaled(col) for col in _inverse_columns(matrix)]
    constraints = [rows[k] for k in init]
    rest = [rows[k] for k in range(len(rows)) if k not in set(init)]

    def tight_set(ray):
        return frozenset(i for i, c in enumerate(constraints)
                         if sum(a * r for a, r in zip(c, ray)) == 0)

    tights = [tight_set(r) for r in rays]
    for new in rest:
        constraints.append(new)
        values = [sum(a * r for a, r in zip(new, ray)) for ray in rays]
        keep_rays, keep_tights = [], []
        pos, neg = [], []
        for ray, tset, val in zip(rays, tights, values):
            if val > 0:
                pos.append((ray, tset, val))
            elif val < 0:
                neg.append((ray, tset, val))
            if val >= 0:
                keep_rays.append(ray)
                keep_tights.append(tset | ({len(constraints) - 1}
                                           if val == 0 else frozenset()))
        for rp, tp, vp in pos:
            for rn, tn, vn in neg:
                common = tp & tn
                if len(common) < D - 2:
                    continue
                if _rank_int([constraints[i] for i in common], D) != D - 2:
                    continue
                combo = _int_scaled([Fraction(vp * bn - vn * bp)
                                     for bp, bn in zip(rp, rn)])
                keep_rays.append(combo)
                keep_tights.append(tight_set(combo))
        rays, tights = keep_rays, keep_tights
    return rays


def _cone_dd_vertices(ineqs, dim):
    """Vertices of a bounded region {y: a.y + a0 >= 0}, via _cone_dd."""
    out = set()
    for ray in _cone_dd(ineqs, dim):
        t = ray[-1]
        if t == 0:
            raise ValueError("region is unbounded")
        out.add(tuple(Fraction(a, t) for a in ray[:-1]))
    return sorted(out)


def _inverse_columns(matrix):
    n = len(matrix)
    aug = [row[:] + [ONE if i == j else ZERO for j in range(n)]
           for i, row in enumerate(matrix)]
    for col in range(n):
        piv = next(i for i in range(col, n) if aug[i][col])
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = ONE / aug[col][col]
        aug[col] = [a * inv for a in aug[col]]
        prow = aug[col]
        for i in range(n):
            if i != col and aug[i][col]:
                f = aug[i][col]
                aug[i] = [a - f * b for a, b in zip(aug[i], prow)]
    return [[aug[i][n + j] for i in range(n)] for j in range(n)]


def _pick_column(dense, nu_cols, free, nu_order):
    """Greedy heuristic: minimize pos*neg - pos - neg, ties by registry order."""
    rank = {v: k for k, v in enumerate(nu_order)}
    best = None
    for col in nu_cols:
        pos = sum(1 for r in dense if r[col] > 0)
        neg = sum(1 for r in dense if r[col] < 0)
        score = pos * neg - pos - neg
        key = (score, rank[free[col]])
        if best is None or key < best[0]:
            best = (key, col)
    return best[1]
