"""Embedded benchmark profiles, shipped as package data.

Each fixture is a profile-format file; load_profile parses it into the
shared data model.  The CLI accepts 'fixture:<name>' wherever a profile
path is expected.
"""

from __future__ import annotations

from importlib import resources

from ..core import BallotProfile, parse_profile

PROFILE_NAMES = (
    "table1",
    "table2",
    "table3",
    "thm3",
    "example1",
    "wrav_pjr",
    "avgsat3",
)


def load_text(filename: str) -> str:
    return (resources.files(__package__) / filename).read_text(encoding="utf-8")


def load_profile(name: str) -> BallotProfile:
    if name not in PROFILE_NAMES:
        raise KeyError(f"unknown fixture {name!r}; known: {', '.join(PROFILE_NAMES)}")
    return parse_profile(load_text(f"{name}.profile"))
