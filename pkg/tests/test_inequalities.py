"""Comb validation, classification, exact slack, validity, uniform enumeration."""

from itertools import combinations

import pytest

from combprism import (
    Comb,
    CombInequality,
    OddSet,
    OddSetInequality,
    PerfectMatching,
    build_complete,
    classify_comb,
    comb_slack,
    enumerate_odd_sets,
    enumerate_perfect_matchings,
    enumerate_tours,
    enumerate_uniform_combs,
    is_valid_inequality,
    odd_set_slack,
    validate_comb,
)


# ---------------------------------------------------------------------------
# structural validation
# ---------------------------------------------------------------------------

def test_validate_worked_comb_on_k9():
    c = Comb((0, 1, 2, 3), ((1, 4), (2, 5), (3, 6)))
    report = validate_comb(c)
    assert report.ok
    assert report.violations() == []


def test_validate_flags_shared_tooth_vertex():
    c = Comb((0, 1, 2, 3), ((1, 4), (2, 4), (3, 6)))
    report = validate_comb(c)
    assert not report.teeth_pairwise_disjoint
    assert not report.ok


def test_validate_flags_covered_handle():
    c = Comb((1, 2, 3), ((1, 4), (2, 5), (3, 6)))
    report = validate_comb(c)
    assert not report.handle_not_covered
    assert "cover" in "; ".join(report.violations())


def test_validate_flags_even_and_too_few_teeth():
    report = validate_comb(Comb((0, 1), ((1, 2),)))
    assert not report.odd_tooth_count or not report.at_least_three_teeth
    assert not report.ok


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------

def test_classify_pair_teeth_comb():
    c = Comb((0, 2, 4, 6), ((0, 1), (2, 3), (4, 5)))
    cls = classify_comb(c)
    assert cls.is_two_matching
    assert cls.is_simple
    assert cls.uniform_params == (1, 2)


def test_classify_13_uniform_not_two_matching():
    c = Comb((0, 3, 6, 9), ((0, 1, 2), (3, 4, 5), (6, 7, 8)))
    cls = classify_comb(c)
    assert cls.uniform_params == (1, 3)
    assert not cls.is_two_matching
    assert cls.is_simple  # one handle vertex per tooth


def test_classify_24_uniform_not_simple():
    c = Comb(
        (0, 1, 4, 5, 8, 9, 12),
        ((0, 1, 2, 3), (4, 5, 6, 7), (8, 9, 10, 11)),
    )
    cls = classify_comb(c)
    assert cls.uniform_params == (2, 4)
    assert not cls.is_simple
    assert not cls.is_two_matching


def test_classify_rejects_invalid_comb():
    with pytest.raises(ValueError):
        classify_comb(Comb((1, 2, 3), ((1, 4), (2, 5), (3, 6))))


def test_classification_implication_chain():
    # uniform (1,2) => 2-matching => simple, over the whole K_7 class
    for comb in enumerate_uniform_combs(7, 1, 2, cap=10**4):
        cls = classify_comb(comb)
        assert cls.uniform_params == (1, 2)
        assert cls.is_two_matching
        assert cls.is_simple


# ---------------------------------------------------------------------------
# slack
# ---------------------------------------------------------------------------

def slow_comb_slack(comb, tour):
    """Definition-level recount, independent of the production path."""
    lhs = 0
    h = set(comb.handle)
    for u, v in tour.edges:
        if (u in h) != (v in h):
            lhs += 1
    for tooth in comb.teeth:
        ts = set(tooth)
        for u, v in tour.edges:
            if (u in ts) != (v in ts):
                lhs += 1
    return lhs - (3 * len(comb.teeth) + 1)


def test_comb_slack_agrees_with_recount_on_k7():
    tours = enumerate_tours(7)[::37]
    combs = enumerate_uniform_combs(7, 1, 2, cap=50)
    for comb in combs[::7]:
        ineq = CombInequality(comb)
        for tour in tours:
            assert comb_slack(ineq, tour) == slow_comb_slack(comb, tour)


def test_comb_slack_rejects_universe_mismatch():
    comb = Comb((0, 2, 4, 6, 8), ((0, 1), (2, 3), (4, 5)))
    tour = enumerate_tours(5)[0]
    with pytest.raises(ValueError):
        comb_slack(CombInequality(comb), tour)


def test_odd_set_slack_worked_values():
    g = build_complete(6)
    m = PerfectMatching(g, ((0, 1), (2, 3), (4, 5)))
    assert odd_set_slack(OddSetInequality(OddSet((0, 1, 2, 3, 4))), m) == 0
    assert odd_set_slack(OddSetInequality(OddSet((0,))), m) == 0
    assert odd_set_slack(OddSetInequality(OddSet((0, 2, 4))), m) == 2


def test_odd_set_slack_rejects_universe_mismatch():
    g = build_complete(4)
    m = PerfectMatching(g, ((0, 1), (2, 3)))
    with pytest.raises(ValueError):
        odd_set_slack(OddSetInequality(OddSet((0, 1, 4))), m)


@pytest.mark.parametrize("n", [6, 8])
def test_odd_set_slack_nonnegative_and_tightness(n):
    # slack >= 0 always, and slack == 0 iff exactly one matching edge crosses
    matchings = enumerate_perfect_matchings(n)
    for size in range(1, n, 2):
        for s in enumerate_odd_sets(n, size):
            ineq = OddSetInequality(s)
            sset = s.vertex_set
            for m in matchings:
                sl = odd_set_slack(ineq, m)
                crossings = sum(1 for u, v in m.edges if (u in sset) != (v in sset))
                assert sl >= 0
                assert (sl == 0) == (crossings == 1)


# ---------------------------------------------------------------------------
# validity over all tours
# ---------------------------------------------------------------------------

def test_validity_of_hand_built_comb_on_k9():
    c = Comb((0, 1, 2, 3), ((1, 4), (2, 5), (3, 6)))
    ok, witness = is_valid_inequality(CombInequality(c), 9)
    assert ok and witness is None


def test_validity_whole_class_k7():
    for comb in enumerate_uniform_combs(7, 1, 2, cap=10**4):
        ok, _ = is_valid_inequality(CombInequality(comb), 7)
        assert ok


def test_validity_rejects_invalid_structure():
    c = Comb((1, 2, 3), ((1, 4), (2, 5), (3, 6)))
    with pytest.raises(ValueError):
        is_valid_inequality(CombInequality(c), 7)


def test_degenerate_contained_teeth_are_caught_as_invalid():
    # teeth fully inside the handle satisfy the three structural conditions
    # but the resulting inequality is violated by some tour
    c = Comb((0, 1, 2, 3), ((0,), (1,), (2,)))
    assert validate_comb(c).ok
    ok, witness = is_valid_inequality(CombInequality(c), 6)
    assert not ok
    assert witness is not None
    assert comb_slack(CombInequality(c), witness) < 0


# ---------------------------------------------------------------------------
# uniform comb enumeration
# ---------------------------------------------------------------------------

def brute_force_uniform_count(n, h, t):
    """Count (h,t)-uniform combs by checking every (teeth, handle) structure."""
    count = 0
    pool = list(range(n))

    def teeth_sets(avail, k, lo):
        if k == 0:
            yield ()
            return
        for tooth in combinations(avail, t):
            if tooth[0] < lo:
                continue
            rest = [v for v in avail if v not in tooth]
            for more in teeth_sets(rest, k - 1, tooth[0] + 1):
                yield (tooth,) + more

    k = 3
    while k * t + 1 <= n:
        for teeth in teeth_sets(pool, k, -1):
            covered = {v for tooth in teeth for v in tooth}
            free = [v for v in pool if v not in covered]
            from itertools import product

            for parts in product(*[list(combinations(tooth, h)) for tooth in teeth]):
                for r in range(1, len(free) + 1):
                    count += sum(1 for _ in combinations(free, r))
        k += 2
    return count


def test_uniform_comb_counts_against_brute_force():
    assert len(enumerate_uniform_combs(7, 1, 2, cap=10**5)) == brute_force_uniform_count(7, 1, 2) == 840
    assert len(enumerate_uniform_combs(8, 1, 2, cap=10**5)) == brute_force_uniform_count(8, 1, 2) == 10080


def test_uniform_combs_all_classify_correctly():
    combs = enumerate_uniform_combs(10, 1, 3, cap=200)
    assert combs  # floor((10-1)/3) = 3 >= 3, so the class is nonempty
    for comb in combs:
        assert validate_comb(comb).ok
        assert classify_comb(comb).uniform_params == (1, 3)


def test_uniform_comb_empty_exactly_when_bound_fails():
    assert enumerate_uniform_combs(9, 1, 3, cap=10) == []  # floor(8/3) = 2 < 3
    assert enumerate_uniform_combs(7, 1, 2, cap=10) != []
    for n in range(3, 13):
        for t in range(2, 6):
            for h in range(1, t):
                empty = not enumerate_uniform_combs(n, h, t, cap=1)
                assert empty == (t > (n - 1) // 3), (n, h, t)


def test_uniform_comb_rejects_bad_params():
    with pytest.raises(ValueError):
        enumerate_uniform_combs(10, 3, 3, cap=10)
    with pytest.raises(ValueError):
        enumerate_uniform_combs(10, 0, 2, cap=10)


def test_uniform_comb_cap_and_determinism():
    first = enumerate_uniform_combs(8, 1, 2, cap=100)
    again = enumerate_uniform_combs(8, 1, 2, cap=100)
    assert first == again
    assert len(first) == 100
    assert first == enumerate_uniform_combs(8, 1, 2, cap=10**5)[:100]
