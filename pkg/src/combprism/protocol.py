"""Two-party protocol computing odd-set slack in expectation, with bit accounting.

Alice holds an odd set S of K_m, Bob holds a perfect matching M.  The
protocol outputs a nonnegative number whose expectation is exactly the
odd-set slack |delta(S) & M| - 1:

* |S| < 5: Alice sends the whole set, Bob outputs the slack directly.
* Otherwise Alice sends a vertex w1 of S, Bob answers with its matching
  partner w2, Alice sends w3 in S \\ {w1, w2}, Bob answers w4, and Alice
  sends one case bit.
* Case A (w2 or w4 outside S): Alice now knows a crossing matching edge e.
  Bob samples one of his |M| edges uniformly and sends it; Alice outputs
  |M| if it crosses S and differs from e, else 0.  The payout constant |M|
  makes the expectation exactly |delta(S) & M| - 1 under uniform sampling.
* Case B (both edges inside S): each party locally builds one half of a
  comb/tour pair over the t-layer prism -- Alice the (h,t)-uniform comb from
  (S, w1, w3), Bob the tour from (M, w1..w4) -- with no further
  communication, and a pluggable comb-slack oracle (declared cost r bits)
  supplies the answer, which equals the odd-set slack exactly.

Exact mode replaces case A's sampling by the uniform average over all |M|
choices, so the output equals the slack on every path.  Message sizes are
fixed-width: vertex ids cost ceil(log2 m) bits, edges ceil(log2 C(m,2)),
the case flag one bit.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import OracleMismatchError
from .inequalities import CombInequality, OddSetInequality, comb_slack, odd_set_slack
from .reduction import _uniform_comb, build_tour_from_matching
from .structures import OddSet, PerfectMatching


class RandomSource:
    """Seeded deterministic stream: identical seed, identical run."""

    def __init__(self, seed: int):
        self.seed = int(seed)
        self._rng = random.Random(self.seed)

    def choice(self, seq):
        return self._rng.choice(seq)

    def randrange(self, n: int) -> int:
        return self._rng.randrange(n)

    def spawn_seed(self) -> int:
        return self._rng.randrange(1 << 63)


@dataclass(frozen=True)
class Message:
    sender: str
    label: str
    bits: int
    payload: object

    def to_json(self) -> dict:
        return {"sender": self.sender, "label": self.label, "bits": self.bits, "payload": self.payload}


@dataclass(frozen=True)
class Transcript:
    messages: tuple[Message, ...]

    @property
    def total_bits(self) -> int:
        return sum(m.bits for m in self.messages)

    def oracle_bits(self) -> int:
        return sum(m.bits for m in self.messages if m.sender == "oracle")

    def to_json(self) -> dict:
        return {"total_bits": self.total_bits, "messages": [m.to_json() for m in self.messages]}


@dataclass(frozen=True)
class ProtocolOutcome:
    output_value: int | Fraction
    transcript: Transcript
    case_taken: str  # small_set | case_A | case_B

    def to_json(self) -> dict:
        val = self.output_value
        if isinstance(val, Fraction):
            val = int(val) if val.denominator == 1 else {"num": val.numerator, "den": val.denominator}
        return {"output": val, "case": self.case_taken, "bits": self.transcript.total_bits}


@dataclass(frozen=True)
class CombSlackOracle:
    """Stand-in for an r-bit comb-slack subprotocol.

    Evaluation must agree with the local comb_slack computation; the
    declared bit cost only feeds the transcript accounting.
    """

    bit_cost: int = 0
    evaluate: object = None

    def __call__(self, ineq: CombInequality, tour) -> int:
        fn = self.evaluate if self.evaluate is not None else comb_slack
        return fn(ineq, tour)


def vertex_bits(base_m: int) -> int:
    return max(1, math.ceil(math.log2(base_m)))

def edge_bits(base_m: int) -> int:
    return max(1, math.ceil(math.log2(base_m * (base_m - 1) // 2)))


def run_pm_protocol(
    odd_set: OddSet,
    matching: PerfectMatching,
    t: int,
    h: int,
    oracle: CombSlackOracle | None = None,
    mode: str = "exact",
    seed: int | None = None,
    choice_rng: random.Random | None = None,
) -> ProtocolOutcome:
    """One protocol execution; exact mode returns the exact expectation.

    ``choice_rng`` randomizes Alice's otherwise smallest-index choices of w1
    and w3 (correctness is choice-independent).  ``seed`` drives Bob's edge
    sampling in sample mode.
    """
    if mode == "mc":
        mode = "sample"
    if mode not in ("exact", "sample"):
        raise ValueError(f"mode must be exact|sample, got {mode!r}")
    if not (1 <= h < t):
        raise ValueError(f"need 1 <= h < t, got h={h}, t={t}")
    oracle = oracle if oracle is not None else CombSlackOracle()
    m = matching.graph.n
    s = odd_set.vertex_set
    if s and max(s) >= m:
        raise ValueError("odd set vertices exceed the matching's graph")
    wv = vertex_bits(m)
    we = edge_bits(m)
    msgs: list[Message] = []
    slack = odd_set_slack(OddSetInequality(odd_set), matching)

    if len(s) < 5:
        msgs.append(Message("alice", "odd-set", len(s) * wv, list(odd_set.vertices)))
        return ProtocolOutcome(slack, Transcript(tuple(msgs)), "small_set")

    def pick(candidates: list[int]) -> int:
        return candidates[0] if choice_rng is None else choice_rng.choice(candidates)

    w1 = pick(sorted(s))
    w2 = matching.partner(w1)
    w3 = pick(sorted(s - {w1, w2}))
    w4 = matching.partner(w3)
    msgs.append(Message("alice", "w1", wv, w1))
    msgs.append(Message("bob", "w2", wv, w2))
    msgs.append(Message("alice", "w3", wv, w3))
    msgs.append(Message("bob", "w4", wv, w4))

    case_a = w2 not in s or w4 not in s
    msgs.append(Message("alice", "case", 1, "A" if case_a else "B"))

    if case_a:
        known = (w1, w2) if w2 not in s else (w3, w4)
        known = (min(known), max(known))
        payout = len(matching.edges)  # |M|; unbiased under uniform 1/|M| sampling

        def value(edge) -> int:
            crosses = (edge[0] in s) != (edge[1] in s)
            return payout if crosses and edge != known else 0

        if mode == "exact":
            total = sum(value(e) for e in matching.edges)
            msgs.append(Message("bob", "sampled-edge", we, "averaged-over-all-matching-edges"))
            out: int | Fraction = Fraction(total, len(matching.edges))
            if out.denominator == 1:
                out = int(out)
        else:
            rng = RandomSource(0 if seed is None else seed)
            sampled = rng.choice(matching.edges)
            msgs.append(Message("bob", "sampled-edge", we, list(sampled)))
            out = value(sampled)
        return ProtocolOutcome(out, Transcript(tuple(msgs)), "case_A")

    # Case B: both matching edges are inside S; local constructions only.
    comb = _uniform_comb(m, t, h, s, w1, w3)
    tour = build_tour_from_matching(matching, w1, w2, w3, w4, t)
    ineq = CombInequality(comb)
    local = comb_slack(ineq, tour)
    reported = oracle(ineq, tour)
    if reported != local:
        raise OracleMismatchError(f"oracle reported {reported}, local comb slack is {local}")
    msgs.append(Message("oracle", "comb-slack", oracle.bit_cost, reported))
    return ProtocolOutcome(reported, Transcript(tuple(msgs)), "case_B")


@dataclass(frozen=True)
class BitAudit:
    case_taken: str
    total_bits: int
    budget_bits: int
    vertex_bits: int
    edge_bits: int
    oracle_bits: int

    @property
    def within_budget(self) -> bool:
        return self.total_bits <= self.budget_bits

    def to_json(self) -> dict:
        return {
            "case": self.case_taken,
            "total_bits": self.total_bits,
            "budget_bits": self.budget_bits,
            "budget_ok": self.within_budget,
        }


def bit_account(outcome: ProtocolOutcome, base_m: int, t: int | None = None) -> BitAudit:
    """Audit a transcript against the per-case bit budgets.

    small set: 4*ceil(log2 m); case A adds 1 + ceil(log2 C(m,2)); case B
    adds 1 + r, where r is the oracle's transcript cost.
    """
    wv = vertex_bits(base_m)
    we = edge_bits(base_m)
    r = outcome.transcript.oracle_bits()
    if outcome.case_taken == "small_set":
        budget = 4 * wv
    elif outcome.case_taken == "case_A":
        budget = 4 * wv + 1 + we
    elif outcome.case_taken == "case_B":
        budget = 4 * wv + 1 + r
    else:
        raise ValueError(f"unknown case {outcome.case_taken!r}")
    return BitAudit(
        case_taken=outcome.case_taken,
        total_bits=outcome.transcript.total_bits,
        budget_bits=budget,
        vertex_bits=wv,
        edge_bits=we,
        oracle_bits=r,
    )


@dataclass(frozen=True)
class EstimateResult:
    mean: float
    std_error: float
    trials: int

    def to_json(self) -> dict:
        return {"mc_mean": self.mean, "mc_se": self.std_error, "trials": self.trials}


def estimate_expectation(
    odd_set: OddSet,
    matching: PerfectMatching,
    t: int,
    h: int,
    trials: int,
    seed: int,
    oracle: CombSlackOracle | None = None,
) -> EstimateResult:
    """Sample mean and standard error over independent protocol runs.

    Each trial gets a derived seed from the master stream, so runs are
    reproducible and parallelizable.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    master = RandomSource(seed)
    values = []
    for _ in range(trials):
        outcome = run_pm_protocol(
            odd_set, matching, t, h, oracle=oracle, mode="sample", seed=master.spawn_seed()
        )
        values.append(float(outcome.output_value))
    mean = sum(values) / trials
    if trials > 1:
        var = sum((v - mean) ** 2 for v in values) / (trials - 1)
        se = math.sqrt(var / trials)
    else:
        se = 0.0
    return EstimateResult(mean=mean, std_error=se, trials=trials)
