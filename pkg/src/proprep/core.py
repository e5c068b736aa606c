"""Election data model: approval profiles, committees, weight vectors.

All quantities that enter a comparison (scores, quotas, approval weights)
are exact rationals.  Floats never participate in any decision; decimal
strings exist purely for display.

Candidate indices are 1-based (1..m), as are voter indices in the expanded
per-voter numbering (1..n).  A profile stores ballots in grouped form, one
entry per distinct line of the input file, each with a multiplicity; the
expansion to individual voters is deterministic (ballot order, then
multiplicity order).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable

# Exact rational scalar used throughout the package.  fractions.Fraction
# already guarantees the canonical form we need: positive denominator and
# gcd(|numerator|, denominator) == 1 after every operation.
Rational = Fraction


class ProfileFormatError(ValueError):
    """Raised when a profile document violates the file format."""

    def __init__(self, message: str, line_number: int | None = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


def parse_rational(text: str) -> Fraction:
    """Parse 'p', 'p/q' or a plain decimal string into an exact rational."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational: {text!r}") from exc


def format_rational(value: Fraction) -> str:
    """Render as 'p/q', or just 'p' for integers."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def format_decimal(value: Fraction, places: int = 2) -> str:
    """Render rounded to `places` decimals (ties away from zero).

    Computed with integer arithmetic only; the result is for display and
    never feeds back into any computation.
    """
    if places < 0:
        raise ValueError("places must be >= 0")
    sign = "-" if value < 0 else ""
    scaled = abs(value) * 10**places
    # round half away from zero
    whole, frac = divmod(scaled.numerator, scaled.denominator)
    if 2 * frac >= scaled.denominator:
        whole += 1
    digits = str(whole).rjust(places + 1, "0")
    if places == 0:
        return sign + digits
    return f"{sign}{digits[:-places]}.{digits[-places:]}"


@dataclass(frozen=True)
class Ballot:
    """A distinct approval set together with how many voters submitted it."""

    approved: frozenset[int]
    count: int

    def __post_init__(self):
        if not self.approved:
            raise ValueError("approval set must be non-empty")
        if self.count < 1:
            raise ValueError("ballot multiplicity must be >= 1")


@dataclass(frozen=True)
class BallotProfile:
    """An approval election: m candidates and a grouped list of ballots."""

    num_candidates: int
    ballots: tuple[Ballot, ...]

    def __post_init__(self):
        if self.num_candidates < 1:
            raise ValueError("need at least one candidate")
        if not self.ballots:
            raise ValueError("need at least one voter")
        for ballot in self.ballots:
            for c in ballot.approved:
                if not 1 <= c <= self.num_candidates:
                    raise ValueError(f"candidate index {c} out of range 1..{self.num_candidates}")

    @classmethod
    def from_ballots(
        cls, num_candidates: int, ballots: Iterable[tuple[Iterable[int], int]]
    ) -> "BallotProfile":
        return cls(
            num_candidates,
            tuple(Ballot(frozenset(approved), count) for approved, count in ballots),
        )

    @classmethod
    def from_approval_sets(
        cls, num_candidates: int, approval_sets: Iterable[Iterable[int]]
    ) -> "BallotProfile":
        """One ballot per voter, multiplicity 1 each."""
        return cls.from_ballots(num_candidates, ((a, 1) for a in approval_sets))

    @property
    def m(self) -> int:
        return self.num_candidates

    @cached_property
    def n(self) -> int:
        """Total number of voters (sum of multiplicities)."""
        return sum(ballot.count for ballot in self.ballots)

    @cached_property
    def masks(self) -> tuple[int, ...]:
        """Per-ballot approval bitmask; bit c-1 stands for candidate c."""
        return tuple(_mask_of(ballot.approved) for ballot in self.ballots)

    @cached_property
    def voter_ranges(self) -> tuple[tuple[int, int], ...]:
        """Per-ballot (first, last) voter index in the expanded numbering."""
        ranges = []
        start = 1
        for ballot in self.ballots:
            ranges.append((start, start + ballot.count - 1))
            start += ballot.count
        return tuple(ranges)

    @cached_property
    def expanded(self) -> tuple[frozenset[int], ...]:
        """Approval set of each individual voter, indices 1..n."""
        out: list[frozenset[int]] = []
        for ballot in self.ballots:
            out.extend([ballot.approved] * ballot.count)
        return tuple(out)

    @cached_property
    def expanded_masks(self) -> tuple[int, ...]:
        out: list[int] = []
        for ballot, mask in zip(self.ballots, self.masks):
            out.extend([mask] * ballot.count)
        return tuple(out)

    def canonical(self) -> "BallotProfile":
        """Merge identical approval sets and sort ballots by member list."""
        counts: dict[frozenset[int], int] = {}
        for ballot in self.ballots:
            counts[ballot.approved] = counts.get(ballot.approved, 0) + ballot.count
        merged = sorted(counts.items(), key=lambda item: sorted(item[0]))
        return BallotProfile.from_ballots(self.num_candidates, merged)


def _mask_of(candidates: Iterable[int]) -> int:
    mask = 0
    for c in candidates:
        mask |= 1 << (c - 1)
    return mask


@dataclass(frozen=True, order=True)
class Committee:
    """A size-k subset of candidates, stored strictly increasing."""

    members: tuple[int, ...]

    def __post_init__(self):
        if not self.members:
            raise ValueError("committee must be non-empty")
        if any(b <= a for a, b in zip(self.members, self.members[1:])):
            raise ValueError("committee members must be strictly increasing")
        if self.members[0] < 1:
            raise ValueError("candidate indices are 1-based")

    @classmethod
    def of(cls, members: Iterable[int]) -> "Committee":
        return cls(tuple(sorted(set(members))))

    @property
    def k(self) -> int:
        return len(self.members)

    @cached_property
    def mask(self) -> int:
        return _mask_of(self.members)

    def __contains__(self, candidate: int) -> bool:
        return candidate in set(self.members)

    def __iter__(self):
        return iter(self.members)


class VoterGroup(frozenset):
    """A non-empty set of voter indices in the expanded numbering."""

    def __new__(cls, voters: Iterable[int], n: int | None = None):
        group = super().__new__(cls, voters)
        if not group:
            raise ValueError("voter group must be non-empty")
        for v in group:
            if not isinstance(v, int) or v < 1 or (n is not None and v > n):
                raise ValueError(f"voter index {v} out of range")
        return group


@dataclass(frozen=True)
class WeightVector:
    """Finite non-increasing score vector, first entry 1.

    Applying a vector to an election with committee size k requires
    len(entries) >= k; there is deliberately no implicit zero-padding.
    """

    entries: tuple[Fraction, ...]

    def __post_init__(self):
        if not self.entries:
            raise ValueError("weight vector must be non-empty")
        if self.entries[0] != 1:
            raise ValueError("first weight must be 1")
        if any(w < 0 for w in self.entries):
            raise ValueError("weights must be non-negative")
        if any(b > a for a, b in zip(self.entries, self.entries[1:])):
            raise ValueError("weights must be non-increasing")

    @classmethod
    def of(cls, entries: Iterable[Fraction | int | str]) -> "WeightVector":
        return cls(tuple(Fraction(w) for w in entries))

    @classmethod
    def harmonic(cls, length: int) -> "WeightVector":
        """(1, 1/2, 1/3, ...): the PAV / RAV default."""
        return cls(tuple(Fraction(1, j) for j in range(1, length + 1)))

    @classmethod
    def one_zero(cls, length: int) -> "WeightVector":
        """(1, 0, 0, ...): plain approval voting repeated."""
        return cls((Fraction(1),) + (Fraction(0),) * (length - 1))

    def __len__(self) -> int:
        return len(self.entries)

    def extended_to(self, length: int) -> "WeightVector":
        """Repeat the last entry until the vector has at least `length` entries."""
        if len(self.entries) >= length:
            return self
        tail = (self.entries[-1],) * (length - len(self.entries))
        return WeightVector(self.entries + tail)

    @cached_property
    def _prefix_sums(self) -> tuple[Fraction, ...]:
        sums = [Fraction(0)]
        for w in self.entries:
            sums.append(sums[-1] + w)
        return tuple(sums)

    def satisfaction(self, approved_winners: int) -> Fraction:
        """w_1 + ... + w_p for a voter with p approved committee members."""
        return self._prefix_sums[approved_winners]

    def marginal(self, approved_winners: int) -> Fraction:
        """w_{p+1}: the weight of one more approved committee member."""
        return self.entries[approved_winners]


def quota(profile: BallotProfile, k: int, level: int) -> Fraction:
    """The exact group-size threshold level*n/k, never rounded."""
    if not 1 <= k <= profile.num_candidates:
        raise ValueError(f"committee size {k} out of range 1..{profile.num_candidates}")
    if not 1 <= level <= k:
        raise ValueError(f"cohesion level {level} out of range 1..{k}")
    return Fraction(level * profile.n, k)


_HEADER_RE = re.compile(r"^election n=(\d+) m=(\d+)$")
_BALLOT_RE = re.compile(r"^(\d+):((?: \d+)+)$")


def parse_profile(text: str) -> BallotProfile:
    """Parse a profile document.

    Format, byte for byte::

        election n=<voters> m=<candidates>
        <multiplicity>: <idx> <idx> ...

    Candidate indices are 1-based and strictly increasing within a line,
    separated by single spaces.  Lines starting with '#' and blank lines
    are ignored.  The declared n must equal the sum of multiplicities.
    """
    header: tuple[int, int] | None = None
    ballots: list[Ballot] = []
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip("\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        if header is None:
            match = _HEADER_RE.match(line)
            if not match:
                raise ProfileFormatError(
                    f"expected 'election n=<int> m=<int>', got {line!r}", line_number
                )
            header = (int(match.group(1)), int(match.group(2)))
            continue
        match = _BALLOT_RE.match(line)
        if not match:
            raise ProfileFormatError(
                f"expected '<multiplicity>: <idx> <idx> ...', got {line!r}", line_number
            )
        count = int(match.group(1))
        if count < 1:
            raise ProfileFormatError("multiplicity must be >= 1", line_number)
        indices = [int(tok) for tok in match.group(2).split()]
        if not indices:
            raise ProfileFormatError("empty approval set", line_number)
        _, m = header
        for idx in indices:
            if not 1 <= idx <= m:
                raise ProfileFormatError(f"candidate index {idx} out of range 1..{m}", line_number)
        if any(b <= a for a, b in zip(indices, indices[1:])):
            raise ProfileFormatError(
                "candidate indices must be strictly increasing", line_number
            )
        ballots.append(Ballot(frozenset(indices), count))

    if header is None:
        raise ProfileFormatError("missing 'election' header")
    declared_n, m = header
    if not ballots:
        raise ProfileFormatError("profile has no ballots")
    profile = BallotProfile(m, tuple(ballots))
    if profile.n != declared_n:
        raise ProfileFormatError(
            f"declared n={declared_n} but multiplicities sum to {profile.n}"
        )
    return profile


def serialize_profile(profile: BallotProfile) -> str:
    """Inverse of parse_profile; round-trips ballot for ballot."""
    lines = [f"election n={profile.n} m={profile.num_candidates}"]
    for ballot in profile.ballots:
        members = " ".join(str(c) for c in sorted(ballot.approved))
        lines.append(f"{ballot.count}: {members}")
    return "\n".join(lines) + "\n"
