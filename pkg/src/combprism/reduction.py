"""Slack-preserving translation from odd-set/matching pairs to comb/tour pairs.

Given an odd set S (|S| >= 5) of K_m, a perfect matching M, and two matching
edges (w1,w2), (w3,w4) inside S, the builders produce over the t-layer prism
of K_m:

* a (h,t)-uniform comb whose handle contains the bottom copy of S, the full
  columns of w1 and w3, and the first h layers of every other S-column; the
  teeth are the full columns of S \\ {w1, w3} (s-2 of them, an odd count);

* a tour that starts from the closed walk through the columns of w1, w3, w4,
  w2 (using both matching edges and the top edge joining the w1 and w3
  columns) and then splices in one column pair per remaining matching edge,
  each splice consuming one reusable top edge and creating two.

The constructed pair always satisfies:

    |delta(H) & T|   = |delta(S) & M| + s - 2
    |delta(T_i) & T| = 2  for every tooth
    comb slack       = odd-set slack   (exactly)

``verify_conditions`` checks the four contract conditions per instance and
``exhaustive_reduction_sweep`` grinds through every instance at desk scale.
"""

from __future__ import annotations

import inspect
import random
from dataclasses import dataclass, field

from .errors import GuardError
from .graphs import PrismGraph, canon_edge, _prism
from .inequalities import (
    Comb,
    CombInequality,
    OddSetInequality,
    classify_comb,
    comb_slack,
    odd_set_slack,
    validate_comb,
)
from .structures import (
    OddSet,
    PerfectMatching,
    Tour,
    enumerate_odd_sets,
    enumerate_perfect_matchings,
)

MAX_SWEEP_BASE = 8

# Input surfaces audited for the locality conditions: the comb may depend
# only on the odd set plus two matching edges, the tour only on the matching
# plus the four witness vertices.
COMB_BUILDER_INPUTS = ("base_m", "t", "h", "s_vertices", "w1", "w3")
TOUR_BUILDER_INPUTS = ("matching", "w1", "w2", "w3", "w4", "t")


@dataclass(frozen=True)
class ReductionInstance:
    """A fully validated input tuple for the comb/tour builders."""

    base_m: int
    odd_set: OddSet
    matching: PerfectMatching
    w1: int
    w2: int
    w3: int
    w4: int
    h: int
    t: int

    def __post_init__(self):
        if self.base_m % 2 != 0 or self.base_m < 6:
            raise ValueError(f"base graph needs an even vertex count >= 6, got {self.base_m}")
        if self.matching.graph.n != self.base_m:
            raise ValueError("matching does not live on the declared base graph")
        s = self.odd_set.vertex_set
        if len(s) < 5:
            raise ValueError(f"odd set must have at least 5 vertices, got {len(s)}")
        if max(s) >= self.base_m:
            raise ValueError("odd set vertices exceed the base graph")
        ws = (self.w1, self.w2, self.w3, self.w4)
        if len(set(ws)) != 4:
            raise ValueError(f"witness vertices must be distinct, got {ws}")
        if any(w not in s for w in ws):
            raise ValueError("witness vertices must all lie inside the odd set")
        medges = self.matching.edge_set
        if canon_edge(self.w1, self.w2) not in medges or canon_edge(self.w3, self.w4) not in medges:
            raise ValueError("(w1,w2) and (w3,w4) must both be matching edges")
        if not (1 <= self.h < self.t):
            raise ValueError(f"need 1 <= h < t, got h={self.h}, t={self.t}")

    @property
    def s(self) -> int:
        return len(self.odd_set)


def _uniform_comb(base_m: int, t: int, h: int, s_vertices: frozenset[int], w1: int, w3: int) -> Comb:
    # Locality: this signature is the entire comb input surface.
    def vid(i, j):
        return (j - 1) * base_m + i

    others = sorted(s_vertices - {w1, w3})
    teeth = tuple(tuple(vid(v, j) for j in range(1, t + 1)) for v in others)
    handle = [vid(v, 1) for v in sorted(s_vertices)]
    handle += [vid(w1, j) for j in range(2, t + 1)]
    handle += [vid(w3, j) for j in range(2, t + 1)]
    for v in others:
        handle += [vid(v, j) for j in range(2, h + 1)]
    return Comb(tuple(handle), teeth)


def build_comb_from_odd_set(inst: ReductionInstance) -> Comb:
    """(h,t)-uniform comb over the prism, built from S, w1, w3 alone."""
    return _uniform_comb(inst.base_m, inst.t, inst.h, inst.odd_set.vertex_set, inst.w1, inst.w3)


def build_tour_from_matching(
    matching: PerfectMatching,
    w1: int,
    w2: int,
    w3: int,
    w4: int,
    t: int,
    rng: random.Random | None = None,
    record_steps: bool = False,
):
    """Prism tour containing every matching edge, every vertical path, and
    the top edge joining the w1 and w3 columns.

    The deterministic policy inserts remaining matching edges in
    lexicographic order, always breaks the lexicographically smallest
    reusable top edge, and attaches the smaller base index first.  Passing a
    seeded ``rng`` randomizes all three choices instead (the constructed
    edge set changes, the guaranteed properties do not).

    With ``record_steps`` the return value is ``(tour, steps)`` where each
    step is the edge set of the growing closed walk.
    """
    m = matching.graph.n
    if m < 4:
        raise ValueError("need at least two matching edges to seed the walk")
    if t < 2:
        raise ValueError(f"t must be at least 2, got {t}")
    ws = (w1, w2, w3, w4)
    if len(set(ws)) != 4:
        raise ValueError(f"witness vertices must be distinct, got {ws}")
    medges = matching.edge_set
    if canon_edge(w1, w2) not in medges or canon_edge(w3, w4) not in medges:
        raise ValueError("(w1,w2) and (w3,w4) must both be matching edges")

    prism = _prism(m, t)

    def vid(i, j):
        return (j - 1) * m + i

    def up(i):
        return [vid(i, j) for j in range(1, t + 1)]

    def down(i):
        return [vid(i, j) for j in range(t, 0, -1)]

    seq = up(w1) + down(w3) + up(w4) + down(w2)
    reserved = canon_edge(w1, w3)  # base pair of the protected top edge
    usable: list[tuple[int, int]] = [canon_edge(w2, w4)]

    def edge_set_of(cycle):
        return frozenset(canon_edge(a, b) for a, b in zip(cycle, cycle[1:] + cycle[:1]))

    steps = [edge_set_of(seq)] if record_steps else None

    remaining = sorted(e for e in matching.edges if e != canon_edge(w1, w2) and e != canon_edge(w3, w4))
    if rng is not None:
        rng.shuffle(remaining)
    for a, b in remaining:
        if rng is not None:
            q, r = usable[rng.randrange(len(usable))]
            if rng.random() < 0.5:
                q, r = r, q
            if rng.random() < 0.5:
                a, b = b, a
        else:
            q, r = min(usable)
        qt, rt = vid(q, t), vid(r, t)
        pos = next(
            i for i in range(len(seq))
            if {seq[i], seq[(i + 1) % len(seq)]} == {qt, rt}
        )
        insert = down(a) + up(b) if seq[pos] == qt else down(b) + up(a)
        seq = seq[: pos + 1] + insert + seq[pos + 1:]
        usable.remove(canon_edge(q, r))
        usable.append(canon_edge(q, a))
        usable.append(canon_edge(b, r))
        usable.sort()
        if record_steps:
            steps.append(edge_set_of(seq))
        # invariant: the walk keeps a breakable top edge besides the reserved one
        assert usable and reserved not in usable

    tour = Tour.from_cycle(prism, seq)
    if record_steps:
        return tour, steps
    return tour


@dataclass(frozen=True)
class ConditionReport:
    """Per-instance outcome of the four contract conditions plus diagnostics.

    c1: the comb is (h,t)-uniform.  c2/c3: the builders' input surfaces
    match the permitted argument lists (audited from their signatures).
    c4: comb slack equals odd-set slack exactly.
    """

    uniform_params: tuple[int, int] | None
    expected_params: tuple[int, int]
    comb_structure_ok: bool
    comb_inputs: tuple[str, ...]
    tour_inputs: tuple[str, ...]
    sl_comb: int
    sl_odd: int
    tour_has_matching_edges: bool
    tour_has_vertical_paths: bool
    tour_has_top_edge: bool
    tooth_crossings: tuple[int, ...]
    handle_crossings: int
    matching_crossings: int
    teeth_count: int

    @property
    def c1(self) -> bool:
        return self.comb_structure_ok and self.uniform_params == self.expected_params

    @property
    def c2(self) -> bool:
        return tuple(self.comb_inputs) == COMB_BUILDER_INPUTS

    @property
    def c3(self) -> bool:
        return tuple(self.tour_inputs) == TOUR_BUILDER_INPUTS

    @property
    def c4(self) -> bool:
        return self.sl_comb == self.sl_odd

    @property
    def tour_properties_ok(self) -> bool:
        return (
            self.tour_has_matching_edges
            and self.tour_has_vertical_paths
            and self.tour_has_top_edge
        )

    @property
    def crossing_counts_ok(self) -> bool:
        return (
            all(c == 2 for c in self.tooth_crossings)
            and self.handle_crossings == self.matching_crossings + self.teeth_count
        )

    @property
    def all_ok(self) -> bool:
        return self.c1 and self.c2 and self.c3 and self.c4 and self.tour_properties_ok and self.crossing_counts_ok

    def to_json(self) -> dict:
        return {
            "c1": self.c1,
            "c2": self.c2,
            "c3": self.c3,
            "c4": self.c4,
            "sl_comb": self.sl_comb,
            "sl_odd": self.sl_odd,
            "tour_properties_ok": self.tour_properties_ok,
            "crossing_counts_ok": self.crossing_counts_ok,
            "all_ok": self.all_ok,
        }


def _builder_inputs(fn, drop=("rng", "record_steps")) -> tuple[str, ...]:
    params = [p for p in inspect.signature(fn).parameters if p not in drop]
    return tuple(params)


def verify_conditions(inst: ReductionInstance, rng: random.Random | None = None) -> ConditionReport:
    """Build the comb/tour pair for one instance and check all conditions."""
    comb = build_comb_from_odd_set(inst)
    tour = build_tour_from_matching(
        inst.matching, inst.w1, inst.w2, inst.w3, inst.w4, inst.t, rng=rng
    )
    prism: PrismGraph = tour.graph

    structure = validate_comb(comb)
    uniform = classify_comb(comb).uniform_params if structure.ok else None

    sl_c = comb_slack(CombInequality(comb), tour)
    sl_o = odd_set_slack(OddSetInequality(inst.odd_set), inst.matching)

    tour_edges = tour.edge_set
    has_matching = all(e in tour_edges for e in inst.matching.edges)
    has_verticals = all(e in tour_edges for e in prism.vertical_edges)
    top_edge = canon_edge(prism.vertex_id(inst.w1, inst.t), prism.vertex_id(inst.w3, inst.t))
    has_top = top_edge in tour_edges

    handle = set(comb.handle)
    handle_crossings = sum(1 for u, v in tour.edges if (u in handle) != (v in handle))
    tooth_crossings = tuple(
        sum(1 for u, v in tour.edges if (u in tooth) != (v in tooth))
        for tooth in comb.tooth_sets
    )
    matching_crossings = sl_o + 1

    return ConditionReport(
        uniform_params=uniform,
        expected_params=(inst.h, inst.t),
        comb_structure_ok=structure.ok,
        comb_inputs=_builder_inputs(_uniform_comb),
        tour_inputs=_builder_inputs(build_tour_from_matching),
        sl_comb=sl_c,
        sl_odd=sl_o,
        tour_has_matching_edges=has_matching,
        tour_has_vertical_paths=has_verticals,
        tour_has_top_edge=has_top,
        tooth_crossings=tooth_crossings,
        handle_crossings=handle_crossings,
        matching_crossings=matching_crossings,
        teeth_count=comb.k,
    )


@dataclass
class SweepSummary:
    base_m: int
    t_values: tuple[int, ...]
    checked: int = 0
    passed: int = 0
    failed: int = 0
    skipped_pairs: int = 0
    usable_pairs: int = 0
    failures: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "base_m": self.base_m,
            "t_values": list(self.t_values),
            "checked": self.checked,
            "passed": self.passed,
            "failed": self.failed,
            "skipped_pairs": self.skipped_pairs,
            "usable_pairs": self.usable_pairs,
            "failures": self.failures[:20],
        }


def exhaustive_reduction_sweep(
    base_m: int,
    t_values=(2, 3, 4),
    h_values=None,
    allow_large: bool = False,
    on_report=None,
) -> SweepSummary:
    """Check every instance over K_{base_m}: all odd sets with |S| >= 5, all
    perfect matchings, all ordered witness choices with both edges inside S,
    all requested (h, t).

    (S, M) pairs with fewer than two matching edges inside S cannot seed the
    construction and are counted as skipped.
    """
    if base_m % 2 != 0 or base_m < 6:
        raise ValueError(f"sweep needs an even base_m >= 6, got {base_m}")
    if base_m > MAX_SWEEP_BASE and not allow_large:
        raise GuardError(f"base_m={base_m} exceeds the sweep guard ({MAX_SWEEP_BASE})")
    t_values = tuple(sorted(set(t_values)))
    if any(t < 2 for t in t_values):
        raise ValueError("every t must be at least 2")

    summary = SweepSummary(base_m=base_m, t_values=t_values)
    matchings = enumerate_perfect_matchings(base_m)
    odd_sets = [
        s for size in range(5, base_m + 1, 2) for s in enumerate_odd_sets(base_m, size)
    ]

    for odd in odd_sets:
        sset = odd.vertex_set
        for matching in matchings:
            inside = [e for e in matching.edges if e[0] in sset and e[1] in sset]
            if len(inside) < 2:
                summary.skipped_pairs += 1
                continue
            summary.usable_pairs += 1
            for e in inside:
                for f in inside:
                    if e == f:
                        continue
                    for w1, w2 in (e, e[::-1]):
                        for w3, w4 in (f, f[::-1]):
                            for t in t_values:
                                hs = h_values if h_values is not None else range(1, t)
                                for h in hs:
                                    if not (1 <= h < t):
                                        continue
                                    inst = ReductionInstance(
                                        base_m, odd, matching, w1, w2, w3, w4, h, t
                                    )
                                    report = verify_conditions(inst)
                                    summary.checked += 1
                                    if report.all_ok:
                                        summary.passed += 1
                                    else:
                                        summary.failed += 1
                                        if len(summary.failures) < 20:
                                            summary.failures.append(
                                                {
                                                    "odd_set": list(odd.vertices),
                                                    "matching": [list(me) for me in matching.edges],
                                                    "w": [w1, w2, w3, w4],
                                                    "h": h,
                                                    "t": t,
                                                    "report": report.to_json(),
                                                }
                                            )
                                    if on_report is not None:
                                        on_report(inst, report)
    return summary
