"""Representation axioms with self-certifying witnesses.

A group of voters is cohesive at level l when it has at least l*n/k
members (exact rational comparison, never rounded) and at least l
commonly approved candidates.  The axioms differ in what such a group is
owed by a committee W:

* justified representation (level 1 only): some member of the group
  approves a candidate in W;
* extended justified representation: some member of the group approves
  at least l candidates in W;
* proportional justified representation: the group's ballots jointly
  touch at least l candidates in W.

The checkers enumerate candidate sets rather than voter sets, relying on
witness maximality: if any cohesive group violates an axiom, then so
does the inclusion-maximal group with the same commonly approved set T
(adding a voter who also approves all of T and also fails the axiom's
per-voter condition preserves both cohesion and the deficiency, and the
group-size threshold only becomes easier to meet).  For the proportional
variant the deficiency "the group touches fewer than l members of W" is
rephrased as "every group ballot's winners lie inside some fixed
U subset of W with |U| = l-1"; the condition is monotone in U, so it
suffices to enumerate U of exactly that size.  Witnesses always report
the maximal violating voter set, and failing verdicts carry everything
needed to re-check the violation directly against the definitions.

Requiring |T| = l with T inside the common approval set is equivalent to
requiring the common approval set itself to have size at least l; the
enumeration uses the former, verdicts report T.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb

from .core import BallotProfile, Committee, Rational, VoterGroup
from .matching import BipartiteCapGraph, max_bmatching
from .rules import DEFAULT_MAX_COMMITTEES, SearchSpaceError, _check_search_space


class NotApplicableError(ValueError):
    """Perfect representation is undefined unless k divides n."""


@dataclass(frozen=True)
class Witness:
    """A concrete axiom violation: the cohesive group and its common set."""

    level: int
    candidates: frozenset[int]
    voters: VoterGroup
    quota: Rational


@dataclass(frozen=True)
class AxiomVerdict:
    satisfied: bool
    witness: Witness | None = None


@dataclass(frozen=True)
class PrCertificate:
    """A perfect partition: per member, the n/k voters it represents."""

    groups: tuple[tuple[int, frozenset[int]], ...]

    def verify(self, profile: BallotProfile, committee: Committee) -> bool:
        n, k = profile.n, committee.k
        if n % k != 0 or len(self.groups) != k:
            return False
        members = [member for member, _ in self.groups]
        if sorted(members) != list(committee.members):
            return False
        seen: set[int] = set()
        for member, voters in self.groups:
            if len(voters) != n // k:
                return False
            if seen & voters:
                return False
            seen |= voters
            if any(member not in profile.expanded[v - 1] for v in voters):
                return False
        return len(seen) == n


def _voters_of_ballots(profile: BallotProfile, indices: list[int]) -> VoterGroup:
    voters: list[int] = []
    for b in indices:
        first, last = profile.voter_ranges[b]
        voters.extend(range(first, last + 1))
    return VoterGroup(voters, profile.n)


def check_jr(profile: BallotProfile, committee: Committee) -> AxiomVerdict:
    """Justified representation, checked in polynomial time.

    A violation is a candidate c outside W approved by at least n/k
    voters none of whom approves any member of W.  Candidates inside W
    cannot witness a violation (their approvers are represented), so only
    the outsiders are scanned, lowest index first.
    """
    n, k = profile.n, committee.k
    threshold = Fraction(n, k)
    wmask = committee.mask
    for c in range(1, profile.num_candidates + 1):
        bit = 1 << (c - 1)
        if wmask & bit:
            continue
        ballots = [
            i
            for i, mask in enumerate(profile.masks)
            if mask & bit and not mask & wmask
        ]
        count = sum(profile.ballots[i].count for i in ballots)
        if count >= threshold:
            return AxiomVerdict(
                False,
                Witness(1, frozenset({c}), _voters_of_ballots(profile, ballots), threshold),
            )
    return AxiomVerdict(True)


def check_ejr(
    profile: BallotProfile,
    committee: Committee,
    max_search: int = DEFAULT_MAX_COMMITTEES,
) -> AxiomVerdict:
    """Extended justified representation, by candidate-set enumeration.

    For each level l and each size-l candidate set T (in lexicographic
    order), the maximal group of voters who approve all of T while
    approving fewer than l committee members is a violation iff it meets
    the l*n/k threshold.
    """
    n, k = profile.n, committee.k
    wmask = committee.mask
    for level in range(1, k + 1):
        _check_search_space(comb(profile.num_candidates, level), max_search, "candidate sets")
        threshold = Fraction(level * n, k)
        deprived = [
            (i, mask, profile.ballots[i].count)
            for i, mask in enumerate(profile.masks)
            if (mask & wmask).bit_count() < level
        ]
        if sum(count for _, _, count in deprived) < threshold:
            continue
        for T in combinations(range(1, profile.num_candidates + 1), level):
            tmask = 0
            for c in T:
                tmask |= 1 << (c - 1)
            ballots = [i for i, mask, _ in deprived if mask & tmask == tmask]
            count = sum(profile.ballots[i].count for i in ballots)
            if count >= threshold:
                return AxiomVerdict(
                    False,
                    Witness(
                        level, frozenset(T), _voters_of_ballots(profile, ballots), threshold
                    ),
                )
    return AxiomVerdict(True)


def check_pjr(
    profile: BallotProfile,
    committee: Committee,
    max_search: int = DEFAULT_MAX_COMMITTEES,
) -> AxiomVerdict:
    """Proportional justified representation, by (T, U) enumeration.

    A violation at level l is a size-l candidate set T and a size-(l-1)
    subset U of the committee such that voters who approve all of T and
    whose approved committee members all lie in U meet the l*n/k
    threshold.  The first witness in lexicographic (l, T, U) order is
    reported, with the maximal voter set for that (T, U).
    """
    n, k = profile.n, committee.k
    wmask = committee.mask
    for level in range(1, k + 1):
        space = comb(profile.num_candidates, level) * comb(k, level - 1)
        _check_search_space(space, max_search, "candidate set pairs")
        threshold = Fraction(level * n, k)
        grouped = list(zip(profile.masks, (b.count for b in profile.ballots)))
        for T in combinations(range(1, profile.num_candidates + 1), level):
            tmask = 0
            for c in T:
                tmask |= 1 << (c - 1)
            approvers = [
                (i, mask, count)
                for i, (mask, count) in enumerate(grouped)
                if mask & tmask == tmask
            ]
            if sum(count for _, _, count in approvers) < threshold:
                continue
            for U in combinations(committee.members, level - 1):
                umask = 0
                for c in U:
                    umask |= 1 << (c - 1)
                ballots = [i for i, mask, _ in approvers if not mask & wmask & ~umask]
                count = sum(profile.ballots[i].count for i in ballots)
                if count >= threshold:
                    return AxiomVerdict(
                        False,
                        Witness(
                            level,
                            frozenset(T),
                            _voters_of_ballots(profile, ballots),
                            threshold,
                        ),
                    )
    return AxiomVerdict(True)


def provides_pr(
    profile: BallotProfile, committee: Committee
) -> tuple[bool, PrCertificate | None]:
    """Perfect representation: an equal-size approved-representative
    partition.

    Reduced to a bipartite b-matching between ballot groups (capacity:
    multiplicity) and committee members (capacity: n/k); the committee
    provides perfect representation iff a matching of size n exists.
    Raises NotApplicableError when k does not divide n.
    """
    n, k = profile.n, committee.k
    if n % k != 0:
        raise NotApplicableError(f"k={k} does not divide n={n}")
    share = n // k
    members = committee.members
    member_pos = {c: j for j, c in enumerate(members, start=1)}
    edges = []
    for g, ballot in enumerate(profile.ballots, start=1):
        for c in sorted(ballot.approved):
            if c in member_pos:
                edges.append((g, member_pos[c]))
    if not edges:
        return False, None
    graph = BipartiteCapGraph(
        left_count=len(profile.ballots),
        right_count=k,
        edges=tuple(edges),
        left_caps=tuple(b.count for b in profile.ballots),
        right_caps=(share,) * k,
    )
    size, matching = max_bmatching(graph)
    if size < n:
        return False, None
    next_voter = [first for first, _ in profile.voter_ranges]
    assigned: dict[int, list[int]] = {c: [] for c in members}
    for g, pos in matching:
        assigned[members[pos - 1]].append(next_voter[g - 1])
        next_voter[g - 1] += 1
    certificate = PrCertificate(
        tuple((c, frozenset(assigned[c])) for c in members)
    )
    assert certificate.verify(profile, committee)
    return True, certificate


def exists_pr_committee(
    profile: BallotProfile, k: int, max_committees: int = DEFAULT_MAX_COMMITTEES
) -> Committee | None:
    """First committee, in lexicographic order, that provides perfect
    representation; None if no committee does.
    """
    m = profile.num_candidates
    if k > m:
        raise ValueError(f"committee size {k} exceeds {m} candidates")
    if profile.n % k != 0:
        raise NotApplicableError(f"k={k} does not divide n={profile.n}")
    _check_search_space(comb(m, k), max_committees, "perfect representation search")
    for members in combinations(range(1, m + 1), k):
        ok, _ = provides_pr(profile, Committee(members))
        if ok:
            return Committee(members)
    return None


def avg_satisfaction(
    profile: BallotProfile, group: VoterGroup, committee: Committee
) -> Rational:
    """Mean number of approved committee members over the group, exact."""
    voters = VoterGroup(group, profile.n)
    wmask = committee.mask
    masks = profile.expanded_masks
    total = sum((masks[v - 1] & wmask).bit_count() for v in voters)
    return Fraction(total, len(voters))


def satisfaction_bounds(level: int, n: int, axiom: str) -> Rational:
    """Worst-case average satisfaction a level-l cohesive group is
    guaranteed when k divides n: 1 - 1/l + 1/(l*n) under justified
    representation, (l-1)/2 under the extended variant.
    """
    if level < 1 or n < 1:
        raise ValueError("level and n must be positive")
    if axiom == "jr":
        return 1 - Fraction(1, level) + Fraction(1, level * n)
    if axiom == "ejr":
        return Fraction(level - 1, 2)
    raise ValueError(f"no satisfaction bound for axiom {axiom!r}")


def pjr_oracle(profile: BallotProfile, committee: Committee) -> AxiomVerdict:
    """Proportional justified representation straight from the definition.

    Enumerates every voter subset at every level; exponential in n and
    guarded accordingly.  Exists to cross-check check_pjr.
    """
    n, k = profile.n, committee.k
    if n > 14:
        raise SearchSpaceError(f"direct enumeration is limited to n <= 14, got {n}")
    masks = profile.expanded_masks
    full = (1 << profile.num_candidates) - 1
    wmask = committee.mask
    for level in range(1, k + 1):
        threshold = Fraction(level * n, k)
        for subset in range(1, 1 << n):
            if subset.bit_count() < threshold:
                continue
            common = full
            union = 0
            for v in range(n):
                if subset >> v & 1:
                    common &= masks[v]
                    union |= masks[v]
            if common.bit_count() < level:
                continue
            if (union & wmask).bit_count() < level:
                voters = VoterGroup(
                    (v + 1 for v in range(n) if subset >> v & 1), n
                )
                T = []
                for c in range(1, profile.num_candidates + 1):
                    if common >> (c - 1) & 1:
                        T.append(c)
                        if len(T) == level:
                            break
                return AxiomVerdict(
                    False, Witness(level, frozenset(T), voters, threshold)
                )
    return AxiomVerdict(True)
