"""Tours, perfect matchings, 2-matchings and odd sets at desk scale.

Everything here is exhaustively enumerable: tours up to K_10, perfect
matchings up to K_12, 2-matchings on graphs with up to 12 vertices.  The
guards keep accidental runtimes in seconds; every enumerator accepts
``allow_large=True`` as an explicit override.

Enumeration order is deterministic (lexicographic over the canonical
representations), so repeated runs emit byte-identical output.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations, permutations

import numpy as np

from .errors import GuardError
from .graphs import Edge, Graph, PrismGraph, build_complete, canon_edge, _prism

MAX_TOUR_N = 10
MAX_MATCHING_N = 12
MAX_TWO_MATCHING_VERTICES = 12


@dataclass(frozen=True)
class Tour:
    """Hamiltonian cycle, stored as a canonical cyclic vertex sequence.

    Canonical form: rotated so the minimum vertex comes first, then the
    lexicographically smaller of the two directions, so rotations and
    reflections of the same cycle compare equal.
    """

    graph: Graph
    cycle: tuple[int, ...]

    @classmethod
    def from_cycle(cls, graph: Graph, seq) -> "Tour":
        seq = tuple(seq)
        if len(seq) != graph.n or len(seq) < 3:
            raise ValueError(f"tour must visit all {graph.n} vertices exactly once, got {len(seq)}")
        if sorted(seq) != list(range(graph.n)):
            raise ValueError("tour sequence is not a permutation of the vertex set")
        for a, b in zip(seq, seq[1:] + seq[:1]):
            if not graph.has_edge(a, b):
                raise ValueError(f"consecutive tour vertices ({a},{b}) are not adjacent")
        i = seq.index(min(seq))
        rot = seq[i:] + seq[:i]
        alt = (rot[0],) + tuple(reversed(rot[1:]))
        return cls(graph, min(rot, alt))

    @cached_property
    def edges(self) -> tuple[Edge, ...]:
        out = [canon_edge(a, b) for a, b in zip(self.cycle, self.cycle[1:] + self.cycle[:1])]
        return tuple(sorted(out))

    @cached_property
    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges)

    def incidence_vector(self) -> np.ndarray:
        vec = np.zeros(len(self.graph.edges), dtype=np.int64)
        idx = self.graph.edge_index
        for e in self.edges:
            vec[idx[e]] = 1
        return vec

    def to_json(self) -> dict:
        return {"cycle": list(self.cycle)}


@dataclass(frozen=True)
class PerfectMatching:
    """Edge set covering every vertex exactly once."""

    graph: Graph
    edges: tuple[Edge, ...]

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(sorted(canon_edge(*e) for e in self.edges)))
        seen: set[int] = set()
        for u, v in self.edges:
            if u in seen or v in seen:
                raise ValueError(f"vertex covered twice in matching {self.edges}")
            if not self.graph.has_edge(u, v):
                raise ValueError(f"({u},{v}) is not an edge of the graph")
            seen.add(u)
            seen.add(v)
        if len(seen) != self.graph.n:
            raise ValueError("matching does not cover every vertex")

    @cached_property
    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges)

    @cached_property
    def _partner(self) -> dict[int, int]:
        p = {}
        for u, v in self.edges:
            p[u] = v
            p[v] = u
        return p

    def partner(self, v: int) -> int:
        return self._partner[v]

    def incidence_vector(self) -> np.ndarray:
        vec = np.zeros(len(self.graph.edges), dtype=np.int64)
        idx = self.graph.edge_index
        for e in self.edges:
            vec[idx[e]] = 1
        return vec

    def to_json(self) -> dict:
        return {"edges": [list(e) for e in self.edges]}


@dataclass(frozen=True)
class TwoMatching:
    """Edge set in which every vertex has degree exactly 2 (disjoint cycle cover)."""

    graph: Graph
    edges: tuple[Edge, ...]

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(sorted(canon_edge(*e) for e in self.edges)))
        deg = [0] * self.graph.n
        for u, v in self.edges:
            if not self.graph.has_edge(u, v):
                raise ValueError(f"({u},{v}) is not an edge of the graph")
            deg[u] += 1
            deg[v] += 1
        bad = [v for v, d in enumerate(deg) if d != 2]
        if bad:
            raise ValueError(f"vertices {bad} do not have degree 2")

    @cached_property
    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges)

    def to_json(self) -> dict:
        return {"edges": [list(e) for e in self.edges]}


@dataclass(frozen=True)
class OddSet:
    """Vertex set of odd cardinality."""

    vertices: tuple[int, ...]

    def __post_init__(self):
        vs = tuple(sorted(self.vertices))
        if len(set(vs)) != len(vs):
            raise ValueError("odd set contains repeated vertices")
        if len(vs) % 2 == 0:
            raise ValueError(f"set size {len(vs)} is even")
        object.__setattr__(self, "vertices", vs)

    def __len__(self) -> int:
        return len(self.vertices)

    @cached_property
    def vertex_set(self) -> frozenset[int]:
        return frozenset(self.vertices)

    def to_json(self) -> dict:
        return {"vertices": list(self.vertices)}


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------

def enumerate_tours(n: int, allow_large: bool = False) -> list[Tour]:
    """All (n-1)!/2 undirected Hamiltonian cycles of K_n, lexicographic order."""
    if n < 3:
        raise GuardError(f"tours need n >= 3, got n={n}")
    if n > MAX_TOUR_N and not allow_large:
        raise GuardError(f"n={n} exceeds the tour enumeration guard ({MAX_TOUR_N}); pass allow_large to override")
    graph = build_complete(n)
    tours = []
    for perm in permutations(range(1, n)):
        if perm[0] < perm[-1]:  # one representative per direction
            tours.append(Tour(graph, (0,) + perm))
    return tours


def enumerate_perfect_matchings(n: int, allow_large: bool = False) -> list[PerfectMatching]:
    """All (n-1)!! perfect matchings of K_n, lexicographic order."""
    if n < 2 or n % 2 != 0:
        raise ValueError(f"perfect matchings need even n >= 2, got n={n}")
    if n > MAX_MATCHING_N and not allow_large:
        raise GuardError(f"n={n} exceeds the matching enumeration guard ({MAX_MATCHING_N}); pass allow_large to override")
    graph = build_complete(n)
    out: list[PerfectMatching] = []

    def rec(remaining: list[int], acc: list[Edge]):
        if not remaining:
            out.append(PerfectMatching(graph, tuple(acc)))
            return
        u = remaining[0]
        for v in remaining[1:]:
            acc.append((u, v))
            rec([w for w in remaining if w != u and w != v], acc)
            acc.pop()

    rec(list(range(n)), [])
    return out


def enumerate_odd_sets(n: int, size: int) -> list[OddSet]:
    """All C(n, size) vertex subsets of odd cardinality `size`, lexicographic."""
    if size % 2 == 0:
        raise ValueError(f"odd set size must be odd, got {size}")
    if not (1 <= size <= n):
        raise ValueError(f"size {size} out of range for n={n}")
    return [OddSet(c) for c in combinations(range(n), size)]


def enumerate_two_matchings(graph: Graph, allow_large: bool = False) -> list[TwoMatching]:
    """All edge sets giving every vertex degree exactly 2, by backtracking."""
    if graph.n > MAX_TWO_MATCHING_VERTICES and not allow_large:
        raise GuardError(
            f"{graph.n} vertices exceeds the 2-matching enumeration guard ({MAX_TWO_MATCHING_VERTICES})"
        )
    n = graph.n
    forward = [tuple(u for u in graph.adjacency[v] if u > v) for v in range(n)]
    deg = [0] * n
    chosen: list[Edge] = []
    out: list[TwoMatching] = []

    def rec(v: int):
        if v == n:
            out.append(TwoMatching(graph, tuple(chosen)))
            return
        need = 2 - deg[v]
        if need == 0:
            rec(v + 1)
            return
        cands = [u for u in forward[v] if deg[u] < 2]
        if len(cands) < need:
            return
        for combo in combinations(cands, need):
            for u in combo:
                deg[u] += 1
                chosen.append((v, u))
            deg[v] += need
            rec(v + 1)
            deg[v] -= need
            for u in combo:
                deg[u] -= 1
                chosen.pop()

    rec(0)
    return out


# ---------------------------------------------------------------------------
# Matching <-> 2-matching correspondence over the 3-layer prism
# ---------------------------------------------------------------------------

def extend_matching_to_2matching(matching: PerfectMatching) -> TwoMatching:
    """Lift a perfect matching of K_m to a 2-matching of the 3-layer prism.

    The witness uses both cliques' copies of every matching edge plus all
    vertical edges, so the bottom-layer restriction recovers the matching.
    """
    m = matching.graph.n
    prism = _prism(m, 3)
    top = 2 * m
    edges = list(prism.vertical_edges)
    for u, v in matching.edges:
        edges.append((u, v))
        edges.append((top + u, top + v))
    return TwoMatching(prism, tuple(edges))


def restrict_2matching_to_matching(x: TwoMatching) -> tuple[Edge, ...]:
    """Bottom-layer edges of a 2-matching over a 3-layer prism.

    Interior path vertices force all vertical edges into any 2-matching, so
    each bottom vertex keeps at most one clique edge and the restriction is a
    matching of the base graph.
    """
    g = x.graph
    if not isinstance(g, PrismGraph) or g.t != 3:
        raise ValueError("restriction is defined over a 3-layer prism")
    bottom = tuple(e for e in x.edges if e[1] < g.base_n)
    seen: set[int] = set()
    for u, v in bottom:
        if u in seen or v in seen:
            raise ValueError("bottom restriction is not a matching")
        seen.update((u, v))
    return bottom
