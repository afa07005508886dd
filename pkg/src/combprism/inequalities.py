"""Comb and odd-set inequalities: structure checks, classification, exact slack.

A comb is a handle H together with an odd number k >= 3 of teeth T_1..T_k
such that every tooth meets H, the teeth are pairwise disjoint, and H keeps
at least one vertex outside all teeth.  The comb inequality

    x(delta(H)) + sum_i x(delta(T_i)) >= 3k + 1

is valid for tours of a complete graph; the odd-set inequality
x(delta(U)) >= 1 (|U| odd) is valid for perfect matchings.  All slack
arithmetic is exact integer arithmetic on crossing counts -- no floating
point anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations, product

import numpy as np

from . import _kernels
from .graphs import Graph
from .structures import OddSet, PerfectMatching, Tour, enumerate_tours

DEFAULT_COMB_CAP = 10**6


@dataclass(frozen=True)
class Comb:
    """Handle plus teeth, canonically ordered for deterministic output."""

    handle: tuple[int, ...]
    teeth: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "handle", tuple(sorted(set(self.handle))))
        object.__setattr__(
            self, "teeth", tuple(sorted(tuple(sorted(set(t))) for t in self.teeth))
        )

    @property
    def k(self) -> int:
        return len(self.teeth)

    @cached_property
    def handle_set(self) -> frozenset[int]:
        return frozenset(self.handle)

    @cached_property
    def tooth_sets(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(t) for t in self.teeth)

    @cached_property
    def max_vertex(self) -> int:
        return max(max(self.handle, default=-1), max((v for t in self.teeth for v in t), default=-1))

    def to_json(self) -> dict:
        return {"handle": list(self.handle), "teeth": [list(t) for t in self.teeth]}

    @classmethod
    def from_json(cls, data: dict) -> "Comb":
        return cls(tuple(data["handle"]), tuple(tuple(t) for t in data["teeth"]))


@dataclass(frozen=True)
class CombValidation:
    """Report-style structural check: every violated condition is listed."""

    tooth_count: int
    handle_meets_every_tooth: bool
    teeth_pairwise_disjoint: bool
    handle_not_covered: bool
    odd_tooth_count: bool
    at_least_three_teeth: bool

    @property
    def ok(self) -> bool:
        return (
            self.handle_meets_every_tooth
            and self.teeth_pairwise_disjoint
            and self.handle_not_covered
            and self.odd_tooth_count
            and self.at_least_three_teeth
        )

    def violations(self) -> list[str]:
        out = []
        if not self.handle_meets_every_tooth:
            out.append("a tooth does not intersect the handle")
        if not self.teeth_pairwise_disjoint:
            out.append("two teeth share a vertex")
        if not self.handle_not_covered:
            out.append("the teeth cover the whole handle")
        if not self.odd_tooth_count:
            out.append(f"tooth count {self.tooth_count} is even")
        if not self.at_least_three_teeth:
            out.append(f"tooth count {self.tooth_count} is below 3")
        return out


def validate_comb(comb: Comb) -> CombValidation:
    """Check the three structural comb conditions plus the odd-k requirement."""
    h = comb.handle_set
    teeth = comb.tooth_sets
    union: set[int] = set()
    disjoint = True
    for t in teeth:
        if union & t:
            disjoint = False
        union |= t
    return CombValidation(
        tooth_count=len(teeth),
        handle_meets_every_tooth=all(h & t for t in teeth),
        teeth_pairwise_disjoint=disjoint,
        handle_not_covered=bool(h - union),
        odd_tooth_count=len(teeth) % 2 == 1,
        at_least_three_teeth=len(teeth) >= 3,
    )


@dataclass(frozen=True)
class CombClass:
    """Subclass flags for a structurally valid comb.

    A 2-matching (blossom) comb has every tooth of size exactly two, one
    vertex inside the handle and one outside.  A simple comb has
    |H & T_i| = 1 or |T_i \\ H| = 1 for every tooth.  Uniform parameters
    (h, t) are set when every tooth has size t and meets the handle in
    exactly h vertices, with 1 <= h < t.
    """

    is_two_matching: bool
    is_simple: bool
    uniform_params: tuple[int, int] | None


def classify_comb(comb: Comb) -> CombClass:
    report = validate_comb(comb)
    if not report.ok:
        raise ValueError(f"cannot classify an invalid comb: {'; '.join(report.violations())}")
    h = comb.handle_set
    sizes = {len(t) for t in comb.tooth_sets}
    overlaps = {len(h & t) for t in comb.tooth_sets}
    two_matching = sizes == {2} and overlaps == {1}
    simple = all(len(h & t) == 1 or len(t - h) == 1 for t in comb.tooth_sets)
    uniform = None
    if len(sizes) == 1 and len(overlaps) == 1:
        hh, tt = overlaps.pop(), sizes.pop()
        if 1 <= hh < tt:
            uniform = (hh, tt)
    return CombClass(is_two_matching=two_matching, is_simple=simple, uniform_params=uniform)


@dataclass(frozen=True)
class CombInequality:
    """x(delta(H)) + sum_i x(delta(T_i)) >= 3k+1 for the wrapped comb."""

    comb: Comb

    @property
    def rhs(self) -> int:
        return 3 * self.comb.k + 1

    def coefficient_vector(self, graph: Graph) -> np.ndarray:
        """Per-edge left-hand-side coefficients in the graph's edge order."""
        if self.comb.max_vertex >= graph.n:
            raise ValueError("comb vertices exceed the graph's vertex range")
        h = self.comb.handle_set
        tooth_of: dict[int, int] = {}
        for i, t in enumerate(self.comb.tooth_sets):
            for v in t:
                tooth_of[v] = i
        vec = np.zeros(len(graph.edges), dtype=np.int64)
        for pos, (u, v) in enumerate(graph.edges):
            c = 1 if (u in h) != (v in h) else 0
            tu = tooth_of.get(u, -1)
            tv = tooth_of.get(v, -1)
            if tu != tv:
                if tu != -1:
                    c += 1
                if tv != -1:
                    c += 1
            vec[pos] = c
        return vec

    def label(self) -> str:
        hs = ".".join(map(str, self.comb.handle))
        ts = "|".join(".".join(map(str, t)) for t in self.comb.teeth)
        return f"comb h={hs} teeth={ts}"

    def to_json(self) -> dict:
        data = self.comb.to_json()
        data["rhs"] = self.rhs
        return data


@dataclass(frozen=True)
class OddSetInequality:
    """x(delta(U)) >= 1 for an odd vertex set U."""

    odd_set: OddSet

    @property
    def rhs(self) -> int:
        return 1

    def coefficient_vector(self, graph: Graph) -> np.ndarray:
        s = self.odd_set.vertex_set
        if s and max(s) >= graph.n:
            raise ValueError("odd set vertices exceed the graph's vertex range")
        vec = np.zeros(len(graph.edges), dtype=np.int64)
        for pos, (u, v) in enumerate(graph.edges):
            if (u in s) != (v in s):
                vec[pos] = 1
        return vec

    def label(self) -> str:
        return "odd-set " + ".".join(map(str, self.odd_set.vertices))

    def to_json(self) -> dict:
        data = self.odd_set.to_json()
        data["rhs"] = self.rhs
        return data


def comb_slack(ineq: CombInequality, tour: Tour) -> int:
    """Exact slack of a tour against a comb inequality (LHS - RHS).

    Nonnegative for every structurally valid comb whose teeth each leave the
    handle; validity over all tours is checked separately by
    is_valid_inequality.
    """
    comb = ineq.comb
    if comb.max_vertex >= tour.graph.n:
        raise ValueError("comb and tour live on different vertex universes")
    h = comb.handle_set
    tooth_of: dict[int, int] = {}
    for i, t in enumerate(comb.tooth_sets):
        for v in t:
            tooth_of[v] = i
    lhs = 0
    for u, v in tour.edges:
        if (u in h) != (v in h):
            lhs += 1
        tu = tooth_of.get(u, -1)
        tv = tooth_of.get(v, -1)
        if tu != tv:
            if tu != -1:
                lhs += 1
            if tv != -1:
                lhs += 1
    return lhs - ineq.rhs


def odd_set_slack(ineq: OddSetInequality, matching: PerfectMatching) -> int:
    """|delta(S) & M| - 1, exact."""
    s = ineq.odd_set.vertex_set
    n = matching.graph.n
    if n % 2 != 0:
        raise ValueError("matchings live on an even vertex count")
    if s and max(s) >= n:
        raise ValueError("odd set and matching live on different vertex universes")
    crossing = sum(1 for u, v in matching.edges if (u in s) != (v in s))
    return crossing - 1


def is_valid_inequality(
    ineq: CombInequality, n: int, allow_large: bool = False
) -> tuple[bool, Tour | None]:
    """True iff slack >= 0 for every tour of K_n; otherwise a violating tour."""
    report = validate_comb(ineq.comb)
    if not report.ok:
        raise ValueError(f"structurally invalid comb: {'; '.join(report.violations())}")
    tours = enumerate_tours(n, allow_large=allow_large)
    graph = tours[0].graph
    incidence = tours_incidence_matrix(tours)
    coeffs = ineq.coefficient_vector(graph)[None, :]
    rhs = np.array([ineq.rhs], dtype=np.int64)
    mins, args = _kernels.min_slack(coeffs, rhs, incidence)
    if mins[0] >= 0:
        return True, None
    return False, tours[int(args[0])]


def tours_incidence_matrix(tours: list[Tour]) -> np.ndarray:
    """Stacked 0/1 incidence vectors, one row per tour."""
    if not tours:
        raise ValueError("need at least one tour")
    graph = tours[0].graph
    idx = graph.edge_index
    mat = np.zeros((len(tours), len(graph.edges)), dtype=np.int64)
    for r, tour in enumerate(tours):
        for e in tour.edges:
            mat[r, idx[e]] = 1
    return mat


# ---------------------------------------------------------------------------
# Uniform comb enumeration
# ---------------------------------------------------------------------------

def iter_uniform_combs(n: int, h: int, t: int):
    """Yield every (h,t)-uniform comb of K_n in a fixed deterministic order.

    Order: tooth count k = 3, 5, ... ascending; tooth collections with
    increasing minima, each tooth lexicographic; then handle completions
    (per-tooth h-subsets in lexicographic product order, then nonempty
    subsets of the free vertices in binary counting order).

    The class is empty exactly when t > floor((n-1)/3): k >= 3 disjoint
    teeth of size t plus one handle-only vertex need 3t + 1 vertices.
    """
    if not (1 <= h < t):
        raise ValueError(f"uniform parameters need 1 <= h < t, got h={h}, t={t}")
    verts = list(range(n))

    def teeth_collections(pool: list[int], k: int, min_first: int):
        if k == 0:
            yield ()
            return
        for tooth in combinations(pool, t):
            if tooth[0] < min_first:
                continue
            rest = [v for v in pool if v not in tooth]
            for more in teeth_collections(rest, k - 1, tooth[0] + 1):
                yield (tooth,) + more

    k = 3
    while k * t + 1 <= n:
        for teeth in teeth_collections(verts, k, -1):
            covered = {v for tooth in teeth for v in tooth}
            free = [v for v in verts if v not in covered]
            overlap_choices = [list(combinations(tooth, h)) for tooth in teeth]
            for parts in product(*overlap_choices):
                core = [v for part in parts for v in part]
                for mask in range(1, 1 << len(free)):
                    extra = [free[i] for i in range(len(free)) if mask >> i & 1]
                    yield Comb(tuple(core + extra), teeth)
        k += 2


def enumerate_uniform_combs(n: int, h: int, t: int, cap: int = DEFAULT_COMB_CAP) -> list[Comb]:
    """First `cap` combs of the (h,t)-uniform class on K_n (all of them if fewer)."""
    if cap < 0:
        raise ValueError("cap must be nonnegative")
    out = []
    for comb in iter_uniform_combs(n, h, t):
        out.append(comb)
        if len(out) >= cap:
            break
    return out
