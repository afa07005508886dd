"""combprism: exact desk-scale machinery for comb inequalities over
subdivided prisms, matching slacks, and a two-party slack protocol."""

from .errors import GuardError, OracleMismatchError
from .graphs import Edge, Graph, PrismGraph, build_complete, build_prism, delta
from .inequalities import (
    Comb,
    CombClass,
    CombInequality,
    CombValidation,
    OddSetInequality,
    classify_comb,
    comb_slack,
    enumerate_uniform_combs,
    is_valid_inequality,
    iter_uniform_combs,
    odd_set_slack,
    validate_comb,
)
from .protocol import (
    BitAudit,
    CombSlackOracle,
    EstimateResult,
    Message,
    ProtocolOutcome,
    RandomSource,
    Transcript,
    bit_account,
    estimate_expectation,
    run_pm_protocol,
)
from .reduction import (
    ConditionReport,
    ReductionInstance,
    SweepSummary,
    build_comb_from_odd_set,
    build_tour_from_matching,
    exhaustive_reduction_sweep,
    verify_conditions,
)
from .slacklab import FacetReport, SlackMatrix, affine_dim, build_slack_matrix, facet_check
from .structures import (
    OddSet,
    PerfectMatching,
    Tour,
    TwoMatching,
    enumerate_odd_sets,
    enumerate_perfect_matchings,
    enumerate_tours,
    enumerate_two_matchings,
    extend_matching_to_2matching,
    restrict_2matching_to_matching,
)

__version__ = "0.1.0"
