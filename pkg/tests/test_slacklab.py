"""Slack matrices, exact affine rank, facet checks."""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import pytest

from combprism import (
    CombInequality,
    affine_dim,
    build_slack_matrix,
    enumerate_tours,
    enumerate_uniform_combs,
    facet_check,
)
from combprism.errors import GuardError
from combprism.inequalities import tours_incidence_matrix


def fraction_elimination_rank(rows):
    """Test-local exact rank, independent of the production kernels."""
    m = [[Fraction(int(x)) for x in row] for row in rows]
    if not m:
        return 0
    rank, cols = 0, len(m[0])
    for c in range(cols):
        piv = next((i for i in range(rank, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(rank + 1, len(m)):
            if m[i][c] != 0:
                f = m[i][c] / m[rank][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
        if rank == len(m):
            break
    return rank


# ---------------------------------------------------------------------------
# slack matrices
# ---------------------------------------------------------------------------

def test_odd_set_matrix_k4_is_all_zero():
    # every odd set of K_4 is crossed by exactly one edge of any matching
    matrix = build_slack_matrix("odd-sets", 4)
    assert matrix.entries.shape == (8, 3)
    assert (matrix.entries == 0).all()


def test_odd_set_matrix_k6_size3_entries():
    matrix = build_slack_matrix("odd-sets", 6, size=3)
    assert matrix.entries.shape == (20, 15)
    assert set(np.unique(matrix.entries)) == {0, 2}


def test_uniform_comb_matrix_k7_nonnegative():
    matrix = build_slack_matrix("uniform-combs", 7, h=1, t=2)
    assert matrix.entries.shape == (840, 360)
    assert matrix.entries.min() >= 0
    assert not matrix.truncated


def test_matrix_caps_and_guards():
    matrix = build_slack_matrix("uniform-combs", 7, h=1, t=2, cap=10)
    assert matrix.entries.shape[0] == 10
    assert matrix.truncated
    with pytest.raises(GuardError):
        build_slack_matrix("uniform-combs", 10, h=1, t=2)
    with pytest.raises(GuardError):
        build_slack_matrix("odd-sets", 12)
    with pytest.raises(ValueError):
        build_slack_matrix("odd-sets", 7)
    with pytest.raises(ValueError):
        build_slack_matrix("nope", 6)


def test_csv_output_is_deterministic():
    a = build_slack_matrix("odd-sets", 6, size=3).to_csv()
    b = build_slack_matrix("odd-sets", 6, size=3).to_csv()
    assert a == b
    header = a.splitlines()[0]
    assert header.startswith("inequality,")
    assert len(header.split(",")) == 16  # label column + 15 matchings


# ---------------------------------------------------------------------------
# affine dimension
# ---------------------------------------------------------------------------

def test_affine_dim_points():
    assert affine_dim([[3, 1, 4]]) == 0
    assert affine_dim([[0, 0], [1, 1]]) == 1
    assert affine_dim([[0, 0], [1, 1], [2, 2]]) == 1
    assert affine_dim([[0, 0], [1, 0], [0, 1]]) == 2
    with pytest.raises(ValueError):
        affine_dim([])


@pytest.mark.parametrize("n,expected", [(5, 5), (6, 9), (7, 14)])
def test_tour_affine_dims(n, expected):
    inc = tours_incidence_matrix(enumerate_tours(n))
    assert affine_dim(inc) == expected  # n(n-3)/2, recomputed not assumed
    diffs = inc[1:] - inc[0]
    assert fraction_elimination_rank(diffs.tolist()) == expected


def test_affine_dim_matches_fraction_oracle_on_random_matrices():
    rng = np.random.default_rng(17)
    for _ in range(25):
        rows = rng.integers(1, 8)
        cols = rng.integers(1, 8)
        mat = rng.integers(-4, 5, size=(rows, cols))
        if rng.random() < 0.5 and rows >= 2:
            mat[-1] = mat[0] * rng.integers(-2, 3)  # force rank deficiency
        from combprism._kernels import integer_rank

        assert integer_rank(mat) == fraction_elimination_rank(mat.tolist())


# ---------------------------------------------------------------------------
# facet checks
# ---------------------------------------------------------------------------

def test_facet_check_confirms_k7_pair_comb():
    comb = enumerate_uniform_combs(7, 1, 2, cap=1)[0]
    report = facet_check(CombInequality(comb), 7)
    assert report.valid
    assert report.full_dim == 14
    assert report.tight_dim == 13
    assert report.is_facet


@dataclass(frozen=True)
class ShiftedInequality:
    """A comb inequality with its threshold lowered: valid but never tight."""

    inner: CombInequality
    shift: int

    @property
    def rhs(self):
        return self.inner.rhs - self.shift

    def coefficient_vector(self, graph):
        return self.inner.coefficient_vector(graph)


def test_strictly_slack_inequality_is_not_a_facet():
    comb = enumerate_uniform_combs(7, 1, 2, cap=1)[0]
    report = facet_check(ShiftedInequality(CombInequality(comb), 2), 7)
    assert report.valid
    assert report.tight_count == 0
    assert not report.is_facet
    assert report.note == "no tight tours"


def test_facet_check_rejects_small_n_and_invalid_combs():
    comb = enumerate_uniform_combs(7, 1, 2, cap=1)[0]
    with pytest.raises(ValueError):
        facet_check(CombInequality(comb), 5)
    from combprism import Comb

    bad = Comb((1, 2, 3), ((1, 4), (2, 5), (3, 6)))
    with pytest.raises(ValueError):
        facet_check(CombInequality(bad), 7)
