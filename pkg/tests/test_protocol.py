"""Protocol exactness, bit budgets, sampling statistics, determinism."""

import json
import random

import pytest

from combprism import (
    CombSlackOracle,
    OddSet,
    OddSetInequality,
    PerfectMatching,
    bit_account,
    build_complete,
    enumerate_odd_sets,
    enumerate_perfect_matchings,
    estimate_expectation,
    odd_set_slack,
    run_pm_protocol,
)
from combprism.errors import OracleMismatchError


def g(n):
    return build_complete(n)


# ---------------------------------------------------------------------------
# the three paths
# ---------------------------------------------------------------------------

def test_small_set_shortcut():
    m = PerfectMatching(g(6), ((0, 3), (1, 4), (2, 5)))
    out = run_pm_protocol(OddSet((0, 1, 2)), m, 2, 1)
    assert out.case_taken == "small_set"
    assert out.output_value == 2  # all three matching edges cross
    assert out.transcript.total_bits == 9  # 3 vertex ids at 3 bits
    audit = bit_account(out, 6)
    assert audit.within_budget and audit.budget_bits == 12


def test_case_b_worked_instance():
    m = PerfectMatching(g(6), ((0, 1), (2, 3), (4, 5)))
    out = run_pm_protocol(OddSet((0, 1, 2, 3, 4)), m, 3, 1)
    assert out.case_taken == "case_B"
    assert out.output_value == 0
    assert out.transcript.total_bits == 13  # 4*3 vertex bits + case bit + 0-bit oracle
    assert bit_account(out, 6).budget_bits == 13


def test_case_a_exact_expectation():
    m = PerfectMatching(g(8), ((0, 5), (1, 2), (3, 4), (6, 7)))
    out = run_pm_protocol(OddSet((0, 1, 2, 3, 4)), m, 2, 1)
    assert out.case_taken == "case_A"
    assert out.output_value == 0  # delta(S) & M = {(0,5)} only
    assert out.transcript.total_bits == 4 * 3 + 1 + 5
    assert bit_account(out, 8).within_budget


def test_case_a_budget_on_k6():
    m = PerfectMatching(g(6), ((0, 5), (1, 2), (3, 4)))
    out = run_pm_protocol(OddSet((0, 1, 2, 3, 4)), m, 2, 1)
    assert out.case_taken == "case_A"
    audit = bit_account(out, 6)
    assert audit.budget_bits == 17  # 4*3 + 1 + ceil(log2 15)
    assert audit.within_budget


def test_case_a_sample_outputs_zero_or_payout():
    m = PerfectMatching(g(8), ((0, 5), (1, 6), (2, 7), (3, 4)))
    s = OddSet((0, 1, 2, 3, 4))
    seen = set()
    for seed in range(40):
        out = run_pm_protocol(s, m, 2, 1, mode="sample", seed=seed)
        seen.add(out.output_value)
        assert out.output_value in (0, 4)  # payout constant is |M| = 4
    assert seen == {0, 4}


# ---------------------------------------------------------------------------
# exactness sweep
# ---------------------------------------------------------------------------

def test_exact_mode_equals_slack_k6_all_pairs_all_params():
    matchings = enumerate_perfect_matchings(6)
    odd_sets = [s for size in (1, 3, 5) for s in enumerate_odd_sets(6, size)]
    for t in (2, 3, 4):
        for h in range(1, t):
            for s in odd_sets:
                ineq = OddSetInequality(s)
                for m in matchings:
                    out = run_pm_protocol(s, m, t, h)
                    assert out.output_value == odd_set_slack(ineq, m)
                    assert bit_account(out, 6, t).within_budget


def test_all_three_cases_reachable_on_k8():
    matchings = enumerate_perfect_matchings(8)
    odd_sets = [s for size in (1, 3, 5, 7) for s in enumerate_odd_sets(8, size)]
    cases = set()
    for s in odd_sets[:: 7]:
        for m in matchings[:: 11]:
            out = run_pm_protocol(s, m, 2, 1)
            cases.add(out.case_taken)
            assert out.output_value == odd_set_slack(OddSetInequality(s), m)
    assert cases == {"small_set", "case_A", "case_B"}


def test_choice_randomization_does_not_change_exact_output():
    rng = random.Random(99)
    matchings = enumerate_perfect_matchings(8)
    for s in enumerate_odd_sets(8, 5)[::5]:
        for m in matchings[::13]:
            expected = odd_set_slack(OddSetInequality(s), m)
            for _ in range(3):
                out = run_pm_protocol(s, m, 3, 2, choice_rng=rng)
                assert out.output_value == expected


# ---------------------------------------------------------------------------
# sampling statistics
# ---------------------------------------------------------------------------

def test_case_b_estimate_is_exact_with_zero_se():
    m = PerfectMatching(g(6), ((0, 1), (2, 3), (4, 5)))
    est = estimate_expectation(OddSet((0, 1, 2, 3, 4)), m, 3, 1, trials=200, seed=1)
    assert est.mean == 0.0
    assert est.std_error == 0.0


def test_case_a_estimate_slack_zero():
    m = PerfectMatching(g(8), ((0, 5), (1, 2), (3, 4), (6, 7)))
    est = estimate_expectation(OddSet((0, 1, 2, 3, 4)), m, 2, 1, trials=10**4, seed=3)
    assert abs(est.mean - 0.0) <= 5 * est.std_error


def test_case_a_estimate_slack_two():
    m = PerfectMatching(g(8), ((0, 5), (1, 6), (2, 7), (3, 4)))
    est = estimate_expectation(OddSet((0, 1, 2, 3, 4)), m, 2, 1, trials=10**4, seed=5)
    assert est.std_error > 0
    assert abs(est.mean - 2.0) <= 5 * est.std_error


# ---------------------------------------------------------------------------
# transcripts, oracle, determinism
# ---------------------------------------------------------------------------

def test_same_seed_identical_transcript():
    m = PerfectMatching(g(8), ((0, 5), (1, 6), (2, 7), (3, 4)))
    s = OddSet((0, 1, 2, 3, 4))
    a = run_pm_protocol(s, m, 2, 1, mode="sample", seed=42)
    b = run_pm_protocol(s, m, 2, 1, mode="sample", seed=42)
    assert json.dumps(a.transcript.to_json()) == json.dumps(b.transcript.to_json())
    assert a.output_value == b.output_value
    c = run_pm_protocol(s, m, 2, 1, mode="sample", seed=43)
    assert json.dumps(a.transcript.to_json()) != json.dumps(c.transcript.to_json()) or a.output_value == c.output_value


def test_transcript_message_order_follows_script():
    m = PerfectMatching(g(6), ((0, 1), (2, 3), (4, 5)))
    out = run_pm_protocol(OddSet((0, 1, 2, 3, 4)), m, 2, 1)
    senders = [msg.sender for msg in out.transcript.messages]
    assert senders == ["alice", "bob", "alice", "bob", "alice", "oracle"]


def test_oracle_bit_cost_feeds_budget():
    m = PerfectMatching(g(6), ((0, 1), (2, 3), (4, 5)))
    out = run_pm_protocol(OddSet((0, 1, 2, 3, 4)), m, 2, 1, oracle=CombSlackOracle(bit_cost=7))
    audit = bit_account(out, 6)
    assert audit.oracle_bits == 7
    assert audit.budget_bits == 4 * 3 + 1 + 7
    assert audit.within_budget


def test_dishonest_oracle_is_a_hard_failure():
    m = PerfectMatching(g(6), ((0, 1), (2, 3), (4, 5)))
    bad = CombSlackOracle(bit_cost=0, evaluate=lambda ineq, tour: 123)
    with pytest.raises(OracleMismatchError):
        run_pm_protocol(OddSet((0, 1, 2, 3, 4)), m, 2, 1, oracle=bad)


def test_parameter_validation():
    m = PerfectMatching(g(6), ((0, 1), (2, 3), (4, 5)))
    with pytest.raises(ValueError):
        run_pm_protocol(OddSet((0, 1, 2)), m, 2, 2)  # h >= t
    with pytest.raises(ValueError):
        run_pm_protocol(OddSet((0, 1, 6)), m, 2, 1)  # vertex outside K_6
    with pytest.raises(ValueError):
        run_pm_protocol(OddSet((0, 1, 2)), m, 2, 1, mode="bogus")
    with pytest.raises(ValueError):
        estimate_expectation(OddSet((0, 1, 2)), m, 2, 1, trials=0, seed=1)
