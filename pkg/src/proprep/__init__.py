"""Exact computation for approval-based committee elections.

Voting rules (score-based, sequential, assignment-based), representation
axioms with machine-checkable witnesses, a rational-arithmetic simplex
solver, and generators for the profiles that separate the axioms.
"""

from .core import (
    Ballot,
    BallotProfile,
    Committee,
    ProfileFormatError,
    Rational,
    VoterGroup,
    WeightVector,
    format_decimal,
    format_rational,
    parse_profile,
    parse_rational,
    quota,
    serialize_profile,
)
from .axioms import (
    AxiomVerdict,
    NotApplicableError,
    PrCertificate,
    Witness,
    avg_satisfaction,
    check_ejr,
    check_jr,
    check_pjr,
    exists_pr_committee,
    pjr_oracle,
    provides_pr,
    satisfaction_bounds,
)
from .matching import (
    BipartiteCapGraph,
    FlowNetwork,
    X3CInstance,
    max_bmatching,
    parse_x3c,
    serialize_x3c,
    x3c_to_pr,
)
from .rules import (
    GreedyMonroeTrace,
    MonroeAssignment,
    RavTrace,
    SearchSpaceError,
    greedy_monroe,
    hybrid_pr_pav,
    monroe_score,
    monroe_winners,
    pav_winners,
    rav_run,
    wpav_score,
    wpav_winners,
    wrav_run,
)
from .lp import (
    CertificateError,
    LinearConstraint,
    LinearProgram,
    SimplexResult,
    build_lp_k,
    rav_counterexample,
    simplex_solve,
)

__version__ = "0.1.0"
