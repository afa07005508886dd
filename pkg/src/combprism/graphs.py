"""Complete graphs, subdivided prisms, and boundary (cut) computation.

Vertices are the integers 0..n-1 and edges are stored as sorted (u, v)
tuples in lexicographic order, so every derived artifact (JSON dumps,
incidence vectors, CSV columns) is bit-stable across runs.

A t-layer prism over K_m stacks t copies of the vertex set: layer 1 and
layer t carry a full clique, and each base vertex i contributes a vertical
path through all t layers.  Canonical vertex ids are

    id(i, j) = (j - 1) * m + i        for i in 0..m-1, j in 1..t

so layer 1 occupies ids 0..m-1 and layer t occupies the last m ids.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import combinations

Edge = tuple[int, int]


def canon_edge(u: int, v: int) -> Edge:
    """Sorted endpoint pair; self-loops are rejected."""
    if u == v:
        raise ValueError(f"self-loop ({u},{v}) is not a valid edge")
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Immutable undirected graph on vertices 0..n-1."""

    n: int
    edges: tuple[Edge, ...]

    @cached_property
    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges)

    @cached_property
    def edge_index(self) -> dict[Edge, int]:
        """Position of each edge in the canonical sorted edge order."""
        return {e: i for i, e in enumerate(self.edges)}

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        nbrs: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            nbrs[u].append(v)
            nbrs[v].append(u)
        return tuple(tuple(sorted(a)) for a in nbrs)

    def has_edge(self, u: int, v: int) -> bool:
        return canon_edge(u, v) in self.edge_set

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])


@dataclass(frozen=True)
class PrismGraph(Graph):
    """t-layer prism over K_{base_n}: two cliques joined by vertical paths.

    Layers 2..t-1 carry only vertical edges, so every interior path vertex
    has degree exactly 2.
    """

    base_n: int
    t: int

    def vertex_id(self, i: int, j: int) -> int:
        """Canonical id of base vertex i in layer j (1-based layers)."""
        if not (0 <= i < self.base_n and 1 <= j <= self.t):
            raise ValueError(f"vertex ({i}, layer {j}) outside prism over K_{self.base_n} with {self.t} layers")
        return (j - 1) * self.base_n + i

    def base_vertex(self, v: int) -> int:
        return v % self.base_n

    def layer(self, v: int) -> int:
        return v // self.base_n + 1

    @cached_property
    def bottom_vertices(self) -> tuple[int, ...]:
        return tuple(range(self.base_n))

    @cached_property
    def top_vertices(self) -> tuple[int, ...]:
        return tuple(range((self.t - 1) * self.base_n, self.t * self.base_n))

    def vertical_path(self, i: int) -> tuple[int, ...]:
        """Ids of base vertex i across layers 1..t, bottom to top."""
        return tuple(self.vertex_id(i, j) for j in range(1, self.t + 1))

    @cached_property
    def vertical_edges(self) -> tuple[Edge, ...]:
        out = []
        for i in range(self.base_n):
            path = self.vertical_path(i)
            out.extend(canon_edge(a, b) for a, b in zip(path, path[1:]))
        return tuple(sorted(out))

    @cached_property
    def bottom_edges(self) -> tuple[Edge, ...]:
        return tuple(e for e in self.edges if e[1] < self.base_n)

    def to_json(self) -> dict:
        return {
            "base_n": self.base_n,
            "t": self.t,
            "edges": [list(e) for e in self.edges],
        }


@lru_cache(maxsize=None)
def build_complete(n: int) -> Graph:
    """Complete graph K_n with C(n,2) edges."""
    if n < 1:
        raise ValueError(f"complete graph needs at least one vertex, got n={n}")
    return Graph(n, tuple(combinations(range(n), 2)))


@lru_cache(maxsize=None)
def _prism(base_n: int, t: int) -> PrismGraph:
    # Unguarded constructor: degenerate base_n=2 prisms (cycles) are useful
    # internally for the matching round-trip machinery.
    if base_n < 2 or t < 2:
        raise ValueError(f"prism needs base_n >= 2 and t >= 2, got base_n={base_n}, t={t}")
    edges: list[Edge] = []
    top = (t - 1) * base_n
    for i, j in combinations(range(base_n), 2):
        edges.append((i, j))
        edges.append((top + i, top + j))
    for i in range(base_n):
        for j in range(1, t):
            edges.append(((j - 1) * base_n + i, j * base_n + i))
    return PrismGraph(t * base_n, tuple(sorted(edges)), base_n, t)


def build_prism(base_n: int, t: int) -> PrismGraph:
    """Prism over K_{base_n} with t layers: t*base_n vertices and
    2*C(base_n,2) + (t-1)*base_n edges."""
    if base_n < 3:
        raise ValueError(f"base_n must be at least 3, got {base_n}")
    if t < 2:
        raise ValueError(f"t must be at least 2, got {t}")
    return _prism(base_n, t)


def delta(graph: Graph, vertices) -> tuple[Edge, ...]:
    """Edges of `graph` with exactly one endpoint in `vertices`.

    Symmetric in complementation: delta(S) == delta(V \\ S).
    """
    s = set(vertices)
    for v in s:
        if not (0 <= v < graph.n):
            raise ValueError(f"vertex {v} out of range for graph on {graph.n} vertices")
    return tuple(e for e in graph.edges if (e[0] in s) != (e[1] in s))
