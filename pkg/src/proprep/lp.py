"""Exact-rational linear programming and the sequential-rule stress LP.

The solver is a dense two-phase primal simplex over Fractions with
Bland's pivot rule, so it terminates and every verdict is exact.  Before
returning an optimum it certifies optimality: the primal point is
checked against every constraint, a dual multiplier vector is solved for
from the final basis, and dual feasibility plus equality of the two
objective values is verified.  A strict inequality reported by this
module is therefore a proof, not a numerical observation.

The stress LP for committee size k maximizes the fraction of voters
behind the k-th sequential pick, relative to the electorate, subject to
the earlier picks being made in order.  Its variables are the fractions
x_A of voters submitting each non-empty ballot A over the k eventual
winners.  A value above 1/(k-1) at k = 6 is what makes the published
justified-representation counterexamples possible; strictly smaller
values for k = 3, 4, 5 are what rule them out.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Hashable, Sequence

from . import fixtures
from .axioms import check_jr
from .core import BallotProfile, WeightVector, format_rational
from .rules import wrav_run

RELATIONS = ("<=", ">=", "=")


class CertificateError(RuntimeError):
    """The solver produced a solution that fails its own optimality proof."""


@dataclass(frozen=True)
class LinearConstraint:
    coefficients: tuple[Fraction, ...]
    relation: str
    rhs: Fraction

    def __post_init__(self):
        if self.relation not in RELATIONS:
            raise ValueError(f"relation must be one of {RELATIONS}")


@dataclass(frozen=True)
class LinearProgram:
    """maximize objective . x subject to constraints, x >= 0 implicit."""

    labels: tuple[Hashable, ...]
    objective: tuple[Fraction, ...]
    constraints: tuple[LinearConstraint, ...]

    def __post_init__(self):
        nvars = len(self.labels)
        if len(self.objective) != nvars:
            raise ValueError("objective length must match variable count")
        for constraint in self.constraints:
            if len(constraint.coefficients) != nvars:
                raise ValueError("constraint length must match variable count")

    @property
    def num_variables(self) -> int:
        return len(self.labels)


@dataclass(frozen=True)
class SimplexResult:
    status: str  # optimal | infeasible | unbounded
    value: Fraction | None = None
    solution: tuple[Fraction, ...] | None = None
    basis: tuple[int, ...] | None = None
    dual: tuple[Fraction, ...] | None = None  # one multiplier per input constraint


def serialize_lp(lp: LinearProgram) -> str:
    """Debug rendering, one constraint per line; not a stable format."""
    lines = ["max " + " + ".join(
        f"{format_rational(c)}*x{j}" for j, c in enumerate(lp.objective) if c
    )]
    for constraint in lp.constraints:
        terms = " + ".join(
            f"{format_rational(c)}*x{j}" for j, c in enumerate(constraint.coefficients) if c
        )
        lines.append(f"{terms or '0'} {constraint.relation} {format_rational(constraint.rhs)}")
    return "\n".join(lines) + "\n"


def _pivot(tableau: list[list[Fraction]], basis: list[int], row: int, col: int) -> None:
    pivot_value = tableau[row][col]
    tableau[row] = [entry / pivot_value for entry in tableau[row]]
    for r, other in enumerate(tableau):
        if r != row and other[col]:
            factor = other[col]
            tableau[r] = [a - factor * b for a, b in zip(other, tableau[row])]
    basis[row] = col


def _run_simplex(
    tableau: list[list[Fraction]],
    basis: list[int],
    allowed: list[bool],
) -> str:
    """Bland's rule on the given tableau; the last row is the objective.

    Returns 'optimal' or 'unbounded'.  The objective row holds reduced
    costs z_j - c_j; a negative entry means the column improves the
    maximization objective.
    """
    num_rows = len(tableau) - 1
    num_cols = len(tableau[0]) - 1
    obj = len(tableau) - 1
    while True:
        entering = -1
        for j in range(num_cols):
            if allowed[j] and tableau[obj][j] < 0:
                entering = j
                break
        if entering == -1:
            return "optimal"
        leaving = -1
        best_ratio: Fraction | None = None
        for r in range(num_rows):
            coeff = tableau[r][entering]
            if coeff > 0:
                ratio = tableau[r][-1] / coeff
                if (
                    best_ratio is None
                    or ratio < best_ratio
                    or (ratio == best_ratio and basis[r] < basis[leaving])
                ):
                    best_ratio = ratio
                    leaving = r
        if leaving == -1:
            return "unbounded"
        _pivot(tableau, basis, leaving, entering)


def _set_objective_row(
    tableau: list[list[Fraction]], basis: list[int], costs: list[Fraction]
) -> None:
    obj = len(tableau) - 1
    tableau[obj] = [-c for c in costs] + [Fraction(0)]
    for r, b in enumerate(basis):
        cost = costs[b]
        if cost:
            tableau[obj] = [a + cost * t for a, t in zip(tableau[obj], tableau[r])]


def simplex_solve(lp: LinearProgram, verify: bool = True) -> SimplexResult:
    """Solve max c.x, A x (<=|=|>=) b, x >= 0 exactly.

    With verify=True (the default) an optimal result is accompanied by an
    internally checked certificate; CertificateError would indicate a
    solver bug, not a property of the input.
    """
    nvars = lp.num_variables

    # Normalize to rows with non-negative rhs: <= rows take a slack
    # (initially basic), = and > rows take an artificial for phase 1.
    rows: list[tuple[list[Fraction], str, Fraction]] = []
    row_origin: list[tuple[int, int]] = []  # (input index, sign)
    for index, constraint in enumerate(lp.constraints):
        coeffs = list(constraint.coefficients)
        relation, rhs, sign = constraint.relation, constraint.rhs, 1
        if relation == ">=":
            coeffs, rhs, relation, sign = [-c for c in coeffs], -rhs, "<=", -1
        if rhs < 0:
            coeffs, rhs, sign = [-c for c in coeffs], -rhs, -sign
            relation = {"<=": ">=", "=": "="}[relation]
        rows.append((coeffs, relation, rhs))
        row_origin.append((index, sign))

    num_rows = len(rows)
    num_slack = sum(1 for _, relation, _ in rows if relation in ("<=", ">="))
    slack_base = nvars
    art_base = nvars + num_slack
    num_art = sum(1 for _, relation, _ in rows if relation in ("=", ">="))
    num_cols = art_base + num_art

    matrix: list[list[Fraction]] = []
    rhs_vector: list[Fraction] = []
    basis: list[int] = []
    slack_at, art_at = slack_base, art_base
    for coeffs, relation, rhs in rows:
        row = coeffs + [Fraction(0)] * (num_cols - nvars)
        if relation == "<=":
            row[slack_at] = Fraction(1)
            basis.append(slack_at)
            slack_at += 1
        elif relation == ">=":
            row[slack_at] = Fraction(-1)
            slack_at += 1
            row[art_at] = Fraction(1)
            basis.append(art_at)
            art_at += 1
        else:
            row[art_at] = Fraction(1)
            basis.append(art_at)
            art_at += 1
        matrix.append(row)
        rhs_vector.append(rhs)

    original_matrix = [row[:] for row in matrix]
    original_rhs = rhs_vector[:]

    tableau = [row + [rhs] for row, rhs in zip(matrix, rhs_vector)]
    tableau.append([Fraction(0)] * (num_cols + 1))
    allowed = [True] * num_cols

    if num_art:
        costs = [Fraction(0)] * art_base + [Fraction(-1)] * num_art
        _set_objective_row(tableau, basis, costs)
        status = _run_simplex(tableau, basis, allowed)
        assert status == "optimal"  # phase 1 is bounded below by construction
        if tableau[-1][-1] != 0:
            return SimplexResult("infeasible")
        # pivot leftover artificials out; an all-zero row is redundant
        kept = list(range(num_rows))
        for r in range(num_rows - 1, -1, -1):
            if basis[r] >= art_base:
                col = next(
                    (j for j in range(art_base) if tableau[r][j] != 0), None
                )
                if col is None:
                    del tableau[r]
                    del basis[r]
                    del kept[r]
                else:
                    _pivot(tableau, basis, r, col)
        for j in range(art_base, num_cols):
            allowed[j] = False
    else:
        kept = list(range(num_rows))

    costs = list(lp.objective) + [Fraction(0)] * (num_cols - nvars)
    _set_objective_row(tableau, basis, costs)
    status = _run_simplex(tableau, basis, allowed)
    if status == "unbounded":
        return SimplexResult("unbounded")

    solution_std = [Fraction(0)] * num_cols
    for r, b in enumerate(basis):
        solution_std[b] = tableau[r][-1]
    value = tableau[-1][-1]
    solution = tuple(solution_std[:nvars])

    dual = _dual_from_basis(
        original_matrix, original_rhs, kept, basis, costs, len(lp.constraints), row_origin
    )
    if verify:
        _verify_certificate(lp, solution, value, dual)

    return SimplexResult("optimal", value, solution, tuple(sorted(basis)), dual)


def _dual_from_basis(
    matrix: list[list[Fraction]],
    rhs: list[Fraction],
    kept: list[int],
    basis: list[int],
    costs: list[Fraction],
    num_constraints: int,
    row_origin: list[tuple[int, int]],
) -> tuple[Fraction, ...]:
    """Solve B^T y = c_B on the kept rows, mapped back to input order."""
    size = len(kept)
    system = [[matrix[kept[r]][basis[c]] for r in range(size)] for c in range(size)]
    target = [costs[b] for b in basis]
    y = _gaussian_solve(system, target)
    dual = [Fraction(0)] * num_constraints
    for r, y_r in zip(kept, y):
        index, sign = row_origin[r]
        dual[index] = sign * y_r
    return tuple(dual)


def _gaussian_solve(matrix: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    size = len(matrix)
    work = [row[:] + [b] for row, b in zip(matrix, rhs)]
    for col in range(size):
        pivot_row = next(r for r in range(col, size) if work[r][col] != 0)
        work[col], work[pivot_row] = work[pivot_row], work[col]
        pivot_value = work[col][col]
        work[col] = [entry / pivot_value for entry in work[col]]
        for r in range(size):
            if r != col and work[r][col]:
                factor = work[r][col]
                work[r] = [a - factor * b for a, b in zip(work[r], work[col])]
    return [work[r][size] for r in range(size)]


def _verify_certificate(
    lp: LinearProgram,
    solution: Sequence[Fraction],
    value: Fraction,
    dual: Sequence[Fraction],
) -> None:
    if any(x < 0 for x in solution):
        raise CertificateError("negative primal variable")
    for constraint, y in zip(lp.constraints, dual):
        lhs = sum(c * x for c, x in zip(constraint.coefficients, solution))
        if constraint.relation == "<=" and not (lhs <= constraint.rhs and y >= 0):
            raise CertificateError("primal or dual infeasibility on a <= row")
        if constraint.relation == ">=" and not (lhs >= constraint.rhs and y <= 0):
            raise CertificateError("primal or dual infeasibility on a >= row")
        if constraint.relation == "=" and lhs != constraint.rhs:
            raise CertificateError("primal infeasibility on an = row")
    primal_value = sum(c * x for c, x in zip(lp.objective, solution))
    if primal_value != value:
        raise CertificateError("objective mismatch")
    for j in range(lp.num_variables):
        reduced = sum(
            dual[i] * constraint.coefficients[j]
            for i, constraint in enumerate(lp.constraints)
        )
        if reduced < lp.objective[j]:
            raise CertificateError("dual constraint violated")
    dual_value = sum(y * c.rhs for y, c in zip(dual, lp.constraints))
    if dual_value != value:
        raise CertificateError("strong duality gap")


def build_lp_k(k: int) -> LinearProgram:
    """The stress LP for committee size k (2 <= k <= 8).

    One variable per non-empty subset A of the k winners, holding the
    fraction of voters with that ballot.  Maximize the round-k approval
    weight of the last winner, relative to the electorate; subject to the
    fractions summing to one and, for every i < j, the round-i weight of
    winner i being at least that of winner j.
    """
    if not 2 <= k <= 8:
        raise ValueError(f"k must be between 2 and 8, got {k}")
    subsets = [
        frozenset(c for c in range(1, k + 1) if mask >> (c - 1) & 1)
        for mask in range(1, 1 << k)
    ]
    nvars = len(subsets)

    def round_weight_coeff(subset: frozenset[int], candidate: int, round_index: int) -> Fraction:
        # contribution of one x_A unit to the round-r approval weight of c,
        # after winners 1..r-1 are in
        if candidate not in subset:
            return Fraction(0)
        already = sum(1 for c in subset if c < round_index)
        return Fraction(1, 1 + already)

    objective = tuple(round_weight_coeff(A, k, k) for A in subsets)
    constraints = [LinearConstraint((Fraction(1),) * nvars, "=", Fraction(1))]
    for i in range(1, k):
        for j in range(i + 1, k + 1):
            coeffs = tuple(
                round_weight_coeff(A, i, i) - round_weight_coeff(A, j, i) for A in subsets
            )
            constraints.append(LinearConstraint(coeffs, ">=", Fraction(0)))
    return LinearProgram(tuple(subsets), objective, tuple(constraints))


def rav_counterexample(k: int, source: str = "fixture") -> BallotProfile:
    """A profile where harmonic sequential voting fails justified
    representation at committee size k (defined for k >= 6 only).

    source='fixture' uses the published 5992-voter instance; source='lp'
    rescales a freshly solved optimum of the k=6 stress LP to integer
    ballot counts (with the electorate divisible by 5) and appends the
    single-minded block.  For k > 6 either base is padded with one extra
    single-minded block per extra seat.  The output is checked before it
    is returned: the sequential run must leave some single-minded block's
    candidate out, and the justified representation check must fail.
    """
    if k < 6:
        raise ValueError(
            "no such profile exists: the rule provides justified representation for k <= 5"
        )
    if source == "fixture":
        base = fixtures.load_profile("table1")
        block = 1000
    elif source == "lp":
        base, block = _counterexample_from_lp()
    else:
        raise ValueError(f"unknown source {source!r}")

    if k == 6:
        profile = base
    else:
        extra = [
            (frozenset({base.num_candidates + offset}), block)
            for offset in range(1, k - 5)
        ]
        profile = BallotProfile.from_ballots(
            base.num_candidates + k - 6,
            [(b.approved, b.count) for b in base.ballots] + extra,
        )

    trace = wrav_run(profile, k, WeightVector.harmonic(k))
    single_minded = set(range(7, profile.num_candidates + 1))
    if single_minded <= set(trace.committee.members):
        raise CertificateError("construction failed: every single-minded block got its seat")
    if check_jr(profile, trace.committee).satisfied:
        raise CertificateError("construction failed: justified representation holds")
    return profile


def _counterexample_from_lp() -> tuple[BallotProfile, int]:
    lp = build_lp_k(6)
    result = simplex_solve(lp)
    assert result.status == "optimal"
    scale = lcm(*(x.denominator for x in result.solution if x))
    scale *= 5 // gcd(scale, 5)  # the appended block must have integer size n/5
    ballots = []
    for subset, x in sorted(
        zip(lp.labels, result.solution), key=lambda item: sorted(item[0])
    ):
        if x:
            ballots.append((subset, int(x * scale)))
    ballots.append((frozenset({7}), scale // 5))
    return BallotProfile.from_ballots(7, ballots), scale // 5
