"""Slack matrices, exact affine rank, and facet checks at desk scale.

Rows are inequalities (a uniform comb class or odd sets), columns are the
complete tour or matching family of K_n, entries are exact integer slacks.
Rank computations run fraction-free over the integers (with an exact
rational fallback), so dimensions are never subject to rounding.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _kernels
from .errors import GuardError
from .inequalities import (
    CombInequality,
    OddSetInequality,
    enumerate_uniform_combs,
    tours_incidence_matrix,
    validate_comb,
)
from .structures import (
    enumerate_odd_sets,
    enumerate_perfect_matchings,
    enumerate_tours,
)

MAX_SLACK_TOUR_N = 9
MAX_SLACK_MATCHING_N = 10
DEFAULT_ROW_CAP = 10**4


@dataclass(frozen=True)
class SlackMatrix:
    family: str
    n: int
    row_labels: tuple[str, ...]
    col_labels: tuple[str, ...]
    entries: np.ndarray  # int64, rows x cols
    row_cap: int
    truncated: bool

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("inequality," + ",".join(self.col_labels) + "\n")
        for label, row in zip(self.row_labels, self.entries):
            buf.write(label + "," + ",".join(str(int(x)) for x in row) + "\n")
        return buf.getvalue()

    def metadata(self) -> dict:
        return {
            "family": self.family,
            "n": self.n,
            "rows": len(self.row_labels),
            "cols": len(self.col_labels),
            "row_cap": self.row_cap,
            "truncated": self.truncated,
        }


def _tour_label(tour) -> str:
    return "-".join(map(str, tour.cycle))


def _matching_label(matching) -> str:
    return "|".join(f"{u}-{v}" for u, v in matching.edges)


def build_slack_matrix(
    family: str,
    n: int,
    h: int | None = None,
    t: int | None = None,
    cap: int = DEFAULT_ROW_CAP,
    size: int | None = None,
) -> SlackMatrix:
    """Exact slack matrix of an inequality family against the full vertex family.

    family "uniform-combs": rows are the (h,t)-uniform combs of K_n (capped),
    columns all tours.  family "odd-sets": rows are odd sets (one size, or
    every odd size when size is None), columns all perfect matchings.
    """
    if cap < 1:
        raise ValueError("cap must be positive")
    if family == "uniform-combs":
        if h is None or t is None:
            raise ValueError("uniform-combs needs h and t")
        if n > MAX_SLACK_TOUR_N:
            raise GuardError(f"n={n} exceeds the tour slack-matrix guard ({MAX_SLACK_TOUR_N})")
        combs = enumerate_uniform_combs(n, h, t, cap=cap + 1)
        truncated = len(combs) > cap
        combs = combs[:cap]
        ineqs = [CombInequality(c) for c in combs]
        tours = enumerate_tours(n)
        graph = tours[0].graph
        incidence = tours_incidence_matrix(tours)
        col_labels = tuple(_tour_label(x) for x in tours)
        row_labels = tuple(iq.label() for iq in ineqs)
        if not ineqs:
            entries = np.zeros((0, len(tours)), dtype=np.int64)
        else:
            coeffs = np.stack([iq.coefficient_vector(graph) for iq in ineqs])
            rhs = np.array([iq.rhs for iq in ineqs], dtype=np.int64)
            entries = _kernels.slack_block(coeffs, rhs, incidence)
        return SlackMatrix(family, n, row_labels, col_labels, entries, cap, truncated)

    if family == "odd-sets":
        if n % 2 != 0:
            raise ValueError("odd-set rows pair with perfect matchings; n must be even")
        if n > MAX_SLACK_MATCHING_N:
            raise GuardError(f"n={n} exceeds the matching slack-matrix guard ({MAX_SLACK_MATCHING_N})")
        sizes = [size] if size is not None else list(range(1, n, 2))
        odd_sets = [s for sz in sizes for s in enumerate_odd_sets(n, sz)]
        truncated = len(odd_sets) > cap
        odd_sets = odd_sets[:cap]
        ineqs = [OddSetInequality(s) for s in odd_sets]
        matchings = enumerate_perfect_matchings(n)
        graph = matchings[0].graph
        incidence = np.stack([m.incidence_vector() for m in matchings])
        col_labels = tuple(_matching_label(m) for m in matchings)
        row_labels = tuple(iq.label() for iq in ineqs)
        coeffs = np.stack([iq.coefficient_vector(graph) for iq in ineqs])
        rhs = np.array([iq.rhs for iq in ineqs], dtype=np.int64)
        entries = _kernels.slack_block(coeffs, rhs, incidence)
        return SlackMatrix(family, n, row_labels, col_labels, entries, cap, truncated)

    raise ValueError(f"unknown family {family!r}; expected uniform-combs or odd-sets")


def affine_dim(vectors) -> int:
    """Dimension of the affine hull of integer vectors: rank of {v - v0}."""
    rows = list(vectors)
    if not rows:
        raise ValueError("affine hull of an empty set is undefined")
    arr = np.asarray(rows, dtype=np.int64)
    if arr.ndim == 1:
        arr = arr[None, :]
    if arr.shape[0] == 1:
        return 0
    return _kernels.integer_rank(arr[1:] - arr[0])


@lru_cache(maxsize=8)
def _tour_context(n: int):
    tours = tuple(enumerate_tours(n))
    incidence = tours_incidence_matrix(list(tours))
    full_dim = affine_dim(incidence)
    return tours, incidence, full_dim


@dataclass(frozen=True)
class FacetReport:
    n: int
    valid: bool
    full_dim: int
    tight_count: int
    tight_dim: int | None
    is_facet: bool
    note: str

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "valid": self.valid,
            "full_dim": self.full_dim,
            "tight_count": self.tight_count,
            "tight_dim": self.tight_dim,
            "facet": self.is_facet,
            "note": self.note,
        }


def facet_check(ineq, n: int) -> FacetReport:
    """Facet test over K_n: valid, and tight tours span a dim-1 affine hull.

    Accepts any inequality exposing coefficient_vector(graph) and rhs in
    the >= sense (comb inequalities do).
    """
    if n < 6:
        raise ValueError(f"facet checks need n >= 6, got {n}")
    if isinstance(ineq, CombInequality):
        report = validate_comb(ineq.comb)
        if not report.ok:
            raise ValueError(f"structurally invalid comb: {'; '.join(report.violations())}")
    tours, incidence, full_dim = _tour_context(n)
    coeffs = ineq.coefficient_vector(tours[0].graph)
    slacks = incidence @ coeffs - ineq.rhs
    valid = bool(slacks.min() >= 0)
    tight = incidence[slacks == 0]
    if tight.shape[0] == 0:
        return FacetReport(n, valid, full_dim, 0, None, False, "no tight tours")
    tight_dim = affine_dim(tight)
    is_facet = valid and tight_dim == full_dim - 1
    note = "" if is_facet else f"tight dim {tight_dim} vs full dim {full_dim}"
    return FacetReport(n, valid, full_dim, int(tight.shape[0]), tight_dim, is_facet, note)
