"""Multi-winner voting rules over approval ballots.

Score maximization (PAV and its weighted family, Monroe) is exhaustive
over all size-k committees, guarded by a configurable cap on the search
space; the sequential rules (reweighted approval voting, greedy
assignment) run their published round structure with full traces.

Every argmax in this module breaks ties toward the lowest candidate
index.  Sequential traces flag rounds where a tie actually occurred, so
callers can tell when results depend on that convention.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb

from .core import BallotProfile, Committee, Rational, WeightVector
from .matching import FlowNetwork

DEFAULT_MAX_COMMITTEES = 10_000_000


class SearchSpaceError(RuntimeError):
    """The exhaustive search would exceed the configured instance-size cap."""


def _check_search_space(size: int, cap: int, what: str) -> None:
    if size > cap:
        raise SearchSpaceError(f"{what} needs {size} candidates committees, cap is {cap}")


@dataclass(frozen=True)
class RavRound:
    selected: int
    weight: Rational
    runner_up: Rational | None  # best weight among the other available candidates
    tie: bool


@dataclass(frozen=True)
class RavTrace:
    rounds: tuple[RavRound, ...]
    committee: Committee


@dataclass(frozen=True)
class MonroeAssignment:
    """A valid voter-to-member mapping attaining the committee's score."""

    mapping: dict[int, int]
    score: int

    def loads(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for member in self.mapping.values():
            out[member] = out.get(member, 0) + 1
        return out


@dataclass(frozen=True)
class GreedyMonroeRound:
    selected: int
    voters: frozenset[int]
    covered: int


@dataclass(frozen=True)
class GreedyMonroeTrace:
    rounds: tuple[GreedyMonroeRound, ...]
    committee: Committee


def wpav_score(profile: BallotProfile, committee: Committee, weights: WeightVector) -> Rational:
    """Sum over voters of w_1 + ... + w_p, p the voter's approved members."""
    if len(weights) < committee.k:
        raise ValueError(f"weight vector has {len(weights)} entries, committee size is {committee.k}")
    wmask = committee.mask
    total = Fraction(0)
    for ballot, mask in zip(profile.ballots, profile.masks):
        total += ballot.count * weights.satisfaction((mask & wmask).bit_count())
    return total


def wpav_winners(
    profile: BallotProfile,
    k: int,
    weights: WeightVector,
    max_committees: int = DEFAULT_MAX_COMMITTEES,
) -> Committee:
    """Exhaustive score maximization over all size-k committees.

    Ties go to the lexicographically smallest member tuple, which is the
    first maximum found when enumerating combinations in order.
    """
    m = profile.num_candidates
    if k > m:
        raise ValueError(f"committee size {k} exceeds {m} candidates")
    if len(weights) < k:
        raise ValueError("weight vector too short")
    _check_search_space(comb(m, k), max_committees, "score maximization")
    grouped = list(zip(profile.masks, (b.count for b in profile.ballots)))
    satisfaction = weights._prefix_sums
    best_score: Fraction | None = None
    best: tuple[int, ...] | None = None
    for members in combinations(range(1, m + 1), k):
        wmask = 0
        for c in members:
            wmask |= 1 << (c - 1)
        score = sum(count * satisfaction[(mask & wmask).bit_count()] for mask, count in grouped)
        if best_score is None or score > best_score:
            best_score = score
            best = members
    return Committee(best)


def pav_winners(
    profile: BallotProfile, k: int, max_committees: int = DEFAULT_MAX_COMMITTEES
) -> Committee:
    return wpav_winners(profile, k, WeightVector.harmonic(k), max_committees)


def wrav_run(profile: BallotProfile, k: int, weights: WeightVector) -> RavTrace:
    """Sequential selection: k rounds of approval-weight maximization.

    In each round a voter contributes w_{p+1} to every candidate she
    approves, p being her number of already-selected approved candidates.
    The trace records each round's exact winning weight, the best weight
    among the remaining candidates, and whether those two were equal.
    """
    m = profile.num_candidates
    if k > m:
        raise ValueError(f"committee size {k} exceeds {m} candidates")
    if len(weights) < k:
        raise ValueError("weight vector too short")
    grouped = list(zip(profile.masks, (b.count for b in profile.ballots)))
    selected: list[int] = []
    selected_mask = 0
    rounds: list[RavRound] = []
    for _ in range(k):
        scores: dict[int, Fraction] = {}
        for c in range(1, m + 1):
            if selected_mask >> (c - 1) & 1:
                continue
            bit = 1 << (c - 1)
            weight = Fraction(0)
            for mask, count in grouped:
                if mask & bit:
                    weight += count * weights.marginal((mask & selected_mask).bit_count())
            scores[c] = weight
        top = max(scores.values())
        winner = min(c for c, w in scores.items() if w == top)
        others = [w for c, w in scores.items() if c != winner]
        runner_up = max(others) if others else None
        rounds.append(
            RavRound(winner, scores[winner], runner_up, runner_up == scores[winner])
        )
        selected.append(winner)
        selected_mask |= 1 << (winner - 1)
    return RavTrace(tuple(rounds), Committee.of(selected))


def rav_run(profile: BallotProfile, k: int) -> RavTrace:
    return wrav_run(profile, k, WeightVector.harmonic(k))


def monroe_score(profile: BallotProfile, committee: Committee) -> tuple[int, MonroeAssignment]:
    """Best number of voters assignable to an approved member under
    near-equal loads.

    A valid mapping gives every member a load of floor(n/k) or
    ceil(n/k), with exactly n mod k members at the ceiling.  The score is
    computed as a maximum flow in which each member has floor(n/k) base
    capacity plus access to a shared pool of n mod k single-unit
    overflows; this restricts above-floor loads to what a valid mapping
    permits, and any such flow extends to a valid mapping by filling the
    remaining load targets with unmatched voters.  (Plain ceiling
    capacities would overcount: a matching may saturate more than
    n mod k members at the ceiling, which no valid mapping can realize.)
    """
    n, k = profile.n, committee.k
    floor_load, remainder = divmod(n, k)
    groups = len(profile.ballots)
    members = committee.members
    member_node = {c: groups + 1 + idx for idx, c in enumerate(members)}
    overflow = groups + k + 1
    sink = overflow + 1
    network = FlowNetwork(sink + 1)
    group_edges: dict[tuple[int, int], int] = {}
    for g, ballot in enumerate(profile.ballots, start=1):
        network.add_edge(0, g, ballot.count)
        for c in sorted(ballot.approved):
            if c in member_node:
                group_edges[(g, c)] = network.add_edge(g, member_node[c], ballot.count)
    for c in members:
        network.add_edge(member_node[c], sink, floor_load)
        if remainder:
            network.add_edge(member_node[c], overflow, 1)
    if remainder:
        network.add_edge(overflow, sink, remainder)
    score = network.max_flow(0, sink)

    # matched loads per member, then load targets of a valid mapping
    matched: dict[int, dict[int, int]] = {c: {} for c in members}
    load = {c: 0 for c in members}
    for (g, c), edge_id in group_edges.items():
        flow = network.flow_on(edge_id)
        if flow:
            matched[c][g] = flow
            load[c] += flow
    ceil_members = {c for c in members if load[c] > floor_load}
    for c in members:
        if len(ceil_members) == remainder:
            break
        if c not in ceil_members:
            ceil_members.add(c)
    target = {c: floor_load + (1 if c in ceil_members else 0) for c in members}

    mapping: dict[int, int] = {}
    for g, (first, last) in enumerate(profile.voter_ranges, start=1):
        voter = first
        for c in members:
            for _ in range(matched[c].get(g, 0)):
                mapping[voter] = c
                voter += 1
    unassigned = [v for v in range(1, n + 1) if v not in mapping]
    fill = iter(unassigned)
    for c in members:
        while load[c] < target[c]:
            mapping[next(fill)] = c
            load[c] += 1

    assignment = MonroeAssignment(mapping, score)
    assert sorted(assignment.loads().values()) == sorted(target.values())
    assert sum(
        1 for v, c in mapping.items() if c in profile.expanded[v - 1]
    ) == score
    return score, assignment


def monroe_winners(
    profile: BallotProfile, k: int, max_committees: int = DEFAULT_MAX_COMMITTEES
) -> Committee:
    """Exhaustive maximization of the assignment score; lexicographic ties."""
    m = profile.num_candidates
    if k > m:
        raise ValueError(f"committee size {k} exceeds {m} candidates")
    _check_search_space(comb(m, k), max_committees, "assignment score maximization")
    best_score = -1
    best: tuple[int, ...] | None = None
    for members in combinations(range(1, m + 1), k):
        score, _ = monroe_score(profile, Committee(members))
        if score > best_score:
            best_score = score
            best = members
    return Committee(best)


def greedy_monroe(profile: BallotProfile, k: int) -> GreedyMonroeTrace:
    """Greedy assignment rule: k rounds of (candidate, voter group) picks.

    Round t uses a group of size ceil(n/k) while t <= n mod k, floor(n/k)
    afterwards, so the groups partition the voters.  The round picks the
    available candidate covering the most not-yet-assigned approvers
    (capped at the group size, lowest index on ties); the group takes
    that candidate's unassigned approvers in voter order, padded with the
    lowest-indexed other unassigned voters.  Padding cannot change any
    round's objective value, which counts approvers only.
    """
    m = profile.num_candidates
    if k > m:
        raise ValueError(f"committee size {k} exceeds {m} candidates")
    n = profile.n
    floor_size, remainder = divmod(n, k)
    masks = profile.expanded_masks
    unassigned = list(range(1, n + 1))
    available = set(range(1, m + 1))
    rounds: list[GreedyMonroeRound] = []
    selected: list[int] = []
    for t in range(1, k + 1):
        group_size = floor_size + 1 if t <= remainder else floor_size
        best_candidate = None
        best_covered = -1
        for c in sorted(available):
            bit = 1 << (c - 1)
            approvers = sum(1 for v in unassigned if masks[v - 1] & bit)
            covered = min(group_size, approvers)
            if covered > best_covered:
                best_covered = covered
                best_candidate = c
        bit = 1 << (best_candidate - 1)
        group = [v for v in unassigned if masks[v - 1] & bit][:group_size]
        if len(group) < group_size:
            padding = (v for v in unassigned if not masks[v - 1] & bit)
            while len(group) < group_size:
                group.append(next(padding))
        rounds.append(GreedyMonroeRound(best_candidate, frozenset(group), best_covered))
        selected.append(best_candidate)
        available.remove(best_candidate)
        taken = set(group)
        unassigned = [v for v in unassigned if v not in taken]
    return GreedyMonroeTrace(tuple(rounds), Committee.of(selected))


def hybrid_pr_pav(
    profile: BallotProfile, k: int, max_committees: int = DEFAULT_MAX_COMMITTEES
) -> Committee:
    """Perfect representation when attainable, PAV otherwise.

    If k divides n and some committee admits a perfect voter partition,
    the lexicographically smallest such committee wins; in every other
    case the harmonic-weight score maximizer is returned.
    """
    from .axioms import exists_pr_committee

    if profile.n % k == 0:
        found = exists_pr_committee(profile, k, max_committees=max_committees)
        if found is not None:
            return found
    return pav_winners(profile, k, max_committees)
