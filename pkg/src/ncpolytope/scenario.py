"""Prepare-and-measure scenarios, operational equivalences, and data tables.

A scenario fixes ``g`` preparations, ``l`` measurements with ``d`` outcomes
each, and two lists of operational equivalences: convex mixtures of
preparations that are statistically indistinguishable, and likewise for
measurement effects.  Indices are 1-based to match the usual P_1..P_g,
M_1..M_l notation; outcomes run 0..d-1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .linalg import ZERO, ONE, rat

PREP = "prep"
MEAS = "meas"


class InvalidScenario(Exception):
    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(f"{code}: {msg}" for code, msg in self.errors))


class DimensionMismatch(Exception):
    pass


class PadExceedsD(Exception):
    pass


@dataclass(frozen=True)
class PrepEquivalence:
    """Two convex mixtures of preparations that are operationally equivalent.

    ``lhs`` and ``rhs`` map preparation index -> weight; each side must be a
    convex combination (nonnegative, summing to one).
    """

    lhs: tuple  # ((j, Fraction), ...) sorted by j
    rhs: tuple

    @staticmethod
    def make(lhs: dict, rhs: dict) -> "PrepEquivalence":
        return PrepEquivalence(
            tuple(sorted((j, rat(w)) for j, w in lhs.items())),
            tuple(sorted((j, rat(w)) for j, w in rhs.items())))

    def lhs_map(self) -> dict:
        return dict(self.lhs)

    def rhs_map(self) -> dict:
        return dict(self.rhs)

    def difference(self) -> dict:
        """alpha - beta weights, the coefficient vector of the induced equality."""
        diff = dict(self.lhs)
        for j, w in self.rhs:
            diff[j] = diff.get(j, ZERO) - w
        return {j: w for j, w in diff.items() if w != 0}


@dataclass(frozen=True)
class MeasEquivalence:
    """Two convex mixtures of measurement effects that are equivalent.

    Sides map effect index ``(i, m)`` -> weight.
    """

    lhs: tuple  # (((i, m), Fraction), ...) sorted
    rhs: tuple

    @staticmethod
    def make(lhs: dict, rhs: dict) -> "MeasEquivalence":
        return MeasEquivalence(
            tuple(sorted((im, rat(w)) for im, w in lhs.items())),
            tuple(sorted((im, rat(w)) for im, w in rhs.items())))

    def lhs_map(self) -> dict:
        return dict(self.lhs)

    def rhs_map(self) -> dict:
        return dict(self.rhs)

    def difference(self) -> dict:
        diff = dict(self.lhs)
        for im, w in self.rhs:
            diff[im] = diff.get(im, ZERO) - w
        return {im: w for im, w in diff.items() if w != 0}


@dataclass(frozen=True)
class Scenario:
    g: int
    l: int
    d: int
    oe_p: tuple = ()
    oe_m: tuple = ()
    # Outcomes that exist only as padding (see pad_outcomes); data tables are
    # expected to assign them probability zero.
    padded: frozenset = frozenset()

    def preparations(self):
        return range(1, self.g + 1)

    def measurements(self):
        return range(1, self.l + 1)

    def outcomes(self):
        return range(self.d)

    def coords(self):
        """All (i, j, m) data-table coordinates in canonical order."""
        for i in self.measurements():
            for j in self.preparations():
                for m in self.outcomes():
                    yield (i, j, m)

    def effects(self):
        for i in self.measurements():
            for m in self.outcomes():
                yield (i, m)


def scenario(g, l, d, oe_p=(), oe_m=()) -> Scenario:
    """Build and validate a scenario from plain dicts of weights."""
    return validate_scenario(Scenario(
        g, l, d,
        tuple(e if isinstance(e, PrepEquivalence) else PrepEquivalence.make(*e)
              for e in oe_p),
        tuple(e if isinstance(e, MeasEquivalence) else MeasEquivalence.make(*e)
              for e in oe_m)))


def validate_scenario(raw: Scenario) -> Scenario:
    """Check every scenario invariant, reporting all violations at once."""
    errors = []
    if raw.g < 1 or raw.l < 1 or raw.d < 2:
        errors.append(("IndexOutOfRange",
                       f"need g >= 1, l >= 1, d >= 2; got ({raw.g}, {raw.l}, {raw.d})"))
    for label, eq in [(f"{PREP}[{s}]", e) for s, e in enumerate(raw.oe_p)] + \
                     [(f"{MEAS}[{r}]", e) for r, e in enumerate(raw.oe_m)]:
        is_prep = label.startswith(PREP)
        for side_name, side in (("lhs", eq.lhs), ("rhs", eq.rhs)):
            total = ZERO
            for key, w in side:
                total += w
                if w < 0:
                    errors.append(("NonConvexWeights",
                                   f"{label}.{side_name} has negative weight {w}"))
                if is_prep:
                    if not (1 <= key <= raw.g):
                        errors.append(("IndexOutOfRange",
                                       f"{label}.{side_name} references P_{key}"))
                else:
                    i, m = key
                    if not (1 <= i <= raw.l and 0 <= m < raw.d):
                        errors.append(("IndexOutOfRange",
                                       f"{label}.{side_name} references [{m}|M_{i}]"))
            if total != 1:
                errors.append(("NonConvexWeights",
                               f"{label}.{side_name} weights sum to {total}, not 1"))
        if eq.lhs == eq.rhs:
            errors.append(("DegenerateEquivalence", f"{label} has lhs == rhs"))
    if errors:
        raise InvalidScenario(errors)
    return raw


@dataclass(frozen=True)
class DataTable:
    """The grid of probabilities p(m | M_i, P_j), stored exactly."""

    entries: tuple  # (((i, j, m), Fraction), ...) sorted

    @staticmethod
    def make(entries: dict) -> "DataTable":
        return DataTable(tuple(sorted((c, rat(p)) for c, p in entries.items())))

    def as_dict(self) -> dict:
        return dict(self.entries)

    def __getitem__(self, coord):
        return self.as_dict()[coord]


@dataclass
class TableReport:
    normalized: bool
    oe_residuals: list  # [(equivalence id, max absolute violation), ...]
    padded_violations: list = field(default_factory=list)

    @property
    def respects_equivalences(self) -> bool:
        return all(res == 0 for _, res in self.oe_residuals)


def validate_table(scn: Scenario, table: DataTable) -> TableReport:
    """Check normalization and evaluate every OE-induced equality residual.

    Tables violating the operational equivalences are legal input (the
    feasibility check will simply report them infeasible); the residuals
    here are diagnostics.
    """
    probs = table.as_dict()
    expected = set(scn.coords())
    if set(probs) != expected:
        raise DimensionMismatch(
            f"table has {len(probs)} entries, scenario needs {len(expected)}")
    normalized = all(0 <= p <= 1 for p in probs.values())
    for i in scn.measurements():
        for j in scn.preparations():
            if sum(probs[i, j, m] for m in scn.outcomes()) != 1:
                normalized = False
    residuals = []
    for s, eq in enumerate(scn.oe_p):
        diff = eq.difference()
        worst = max((abs(sum(w * probs[i, j, m] for j, w in diff.items()))
                     for i in scn.measurements() for m in scn.outcomes()),
                    default=ZERO)
        residuals.append(((PREP, s), worst))
    for r, eq in enumerate(scn.oe_m):
        diff = eq.difference()
        worst = max((abs(sum(w * probs[i, j, m] for (i, m), w in diff.items()))
                     for j in scn.preparations()),
                    default=ZERO)
        residuals.append(((MEAS, r), worst))
    padded_violations = [(i, j, m) for (i, j, m), p in probs.items()
                         if (i, m) in scn.padded and p != 0]
    return TableReport(normalized, residuals, sorted(padded_violations))


def pad_outcomes(scn: Scenario, true_counts) -> Scenario:
    """Pad measurements with fewer than d outcomes up to a common d.

    ``true_counts[i-1]`` is the number of outcomes measurement i actually
    has; the remaining outcomes are recorded as padding and must carry zero
    probability in any data table for the padded scenario.
    """
    if len(true_counts) != scn.l:
        raise DimensionMismatch(f"need {scn.l} outcome counts, got {len(true_counts)}")
    padded = set(scn.padded)
    for i, d_star in zip(scn.measurements(), true_counts):
        if d_star > scn.d:
            raise PadExceedsD(f"measurement {i} has {d_star} > d = {scn.d} outcomes")
        padded.update((i, m) for m in range(d_star, scn.d))
    return Scenario(scn.g, scn.l, scn.d, scn.oe_p, scn.oe_m, frozenset(padded))


# Canonical flat indexing of data-table coordinates (i major, j, then m).

def flatten_coord(scn: Scenario, coord) -> int:
    i, j, m = coord
    if not (1 <= i <= scn.l and 1 <= j <= scn.g and 0 <= m < scn.d):
        raise DimensionMismatch(f"coordinate {coord} outside scenario")
    return ((i - 1) * scn.g + (j - 1)) * scn.d + m + 1


def unflatten_coord(scn: Scenario, flat: int):
    if not (1 <= flat <= scn.l * scn.g * scn.d):
        raise DimensionMismatch(f"flat index {flat} outside scenario")
    rest, m = divmod(flat - 1, scn.d)
    i, j = divmod(rest, scn.g)
    return (i + 1, j + 1, m)


def p_var(coord) -> tuple:
    """Variable id for a data-table coordinate."""
    i, j, m = coord
    return ("p", i, j, m)


def p_vars(scn: Scenario) -> list:
    return [p_var(c) for c in scn.coords()]
