"""Oracle tests: the verifier itself is checked against independent
brute-force re-derivations before anything else trusts it."""

from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dynmatch.errors import InternalInvariantError, OracleSizeError
from dynmatch.oracle import (
    approx_ratio,
    check_maximal,
    check_no_3_aug_path,
    check_wellformed,
    exact_mcm,
    max_matching_by_enumeration,
)

from helpers import all_matchings, reference_no_3_aug, snap


def test_wellformed_accepts_consistent_state():
    check_wellformed(snap(4, [(0, 1), (2, 3)], [(0, 1)]))


def test_wellformed_rejects_matched_non_edge():
    s = snap(4, [(0, 1)], [(2, 3)])
    with pytest.raises(InternalInvariantError):
        check_wellformed(s)


def test_wellformed_rejects_overlapping_pairs():
    s = snap(4, [(0, 1), (1, 2)])
    bad = s.__class__(n=4, edges=s.edges, matching=((0, 1), (1, 2)), free=s.free)
    with pytest.raises(InternalInvariantError):
        check_wellformed(bad)


def test_wellformed_rejects_free_flag_mismatch():
    s = snap(3, [(0, 1)], [(0, 1)])
    bad = s.__class__(n=3, edges=s.edges, matching=s.matching, free=(True, False, True))
    with pytest.raises(InternalInvariantError):
        check_wellformed(bad)


def test_wellformed_rejects_unnormalized_edge():
    s = snap(3, [(0, 1)])
    bad = s.__class__(n=3, edges=((1, 0),), matching=(), free=s.free)
    with pytest.raises(InternalInvariantError):
        check_wellformed(bad)


def test_maximal_finds_witness():
    ok, witness = check_maximal(snap(4, [(0, 1), (2, 3)], [(0, 1)]))
    assert not ok and witness == (2, 3)
    ok, witness = check_maximal(snap(4, [(0, 1), (2, 3)], [(0, 1), (2, 3)]))
    assert ok and witness is None


def test_three_aug_path_on_p4():
    # path 0-1-2-3 with only the middle edge matched: 0-1-2-3 augments
    ok, path = check_no_3_aug_path(snap(4, [(0, 1), (1, 2), (2, 3)], [(1, 2)]))
    assert not ok
    assert path == (0, 1, 2, 3)


def test_three_aug_path_symmetric_branch():
    # fb = {f1} exactly, fa has another option: witness must reorient
    s = snap(4, [(1, 2), (0, 1), (0, 2), (1, 3)], [(1, 2)])
    ok, path = check_no_3_aug_path(s)
    assert not ok
    f1, a, b, f2 = path
    assert {a, b} == {1, 2}
    assert s.free[f1] and s.free[f2] and f1 != f2
    edges = set(s.edges)
    assert (min(f1, a), max(f1, a)) in edges
    assert (min(f2, b), max(f2, b)) in edges


def test_one_aug_edge_reported():
    ok, path = check_no_3_aug_path(snap(2, [(0, 1)]))
    assert not ok and path == (0, 1)


def test_no_three_aug_on_clean_state():
    ok, path = check_no_3_aug_path(snap(4, [(0, 1), (1, 2), (2, 3)], [(0, 1), (2, 3)]))
    assert ok and path is None


def test_three_aug_agrees_with_reference_on_all_n4_states():
    """Cross-check against an independent brute force over every graph on 4
    vertices and every matching of each graph."""
    vertices = range(4)
    all_edges = list(combinations(vertices, 2))
    for mask in range(1 << len(all_edges)):
        edges = tuple(e for i, e in enumerate(all_edges) if mask >> i & 1)
        for matching in all_matchings(edges):
            s = snap(4, edges, matching)
            got, _ = check_no_3_aug_path(s)
            want = reference_no_3_aug(4, edges, matching)
            assert got == want, f"edges={edges} matching={matching}"


def test_exact_mcm_examples():
    assert exact_mcm(snap(4, [(0, 1), (1, 2), (2, 3)])) == 2
    assert exact_mcm(snap(3, [(0, 1), (1, 2), (0, 2)])) == 1
    assert exact_mcm(snap(1, [])) == 0


def test_exact_mcm_matches_enumeration_on_random_graphs():
    import random

    rnd = random.Random(411)
    for _ in range(40):
        n = rnd.randint(2, 8)
        pool = list(combinations(range(n), 2))
        edges = tuple(sorted(rnd.sample(pool, rnd.randint(0, len(pool)))))
        s = snap(n, edges)
        assert exact_mcm(s) == max_matching_by_enumeration(s)


def test_exact_mcm_guard_allows_small_n_dense():
    edges = tuple(combinations(range(10), 2))  # K10, m=45 > 40 but n <= 20
    assert exact_mcm(snap(10, edges)) == 5


def test_exact_mcm_guard_rejects_large():
    edges = tuple((0, v) for v in range(1, 42))  # star: m=41, n=42
    with pytest.raises(OracleSizeError):
        exact_mcm(snap(42, edges))


def test_petersen_mcm_is_five():
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    s = snap(10, outer + spokes + inner)
    assert len(s.edges) == 15
    assert exact_mcm(s) == 5


def test_approx_ratio_cases():
    assert approx_ratio(snap(3, [])) == Fraction(1)
    assert approx_ratio(snap(2, [(0, 1)])) == float("inf")
    r = approx_ratio(snap(4, [(0, 1), (1, 2), (2, 3)], [(1, 2)]))
    assert r == Fraction(2, 1) and isinstance(r, Fraction)
    assert approx_ratio(snap(4, [(0, 1), (2, 3)], [(0, 1), (2, 3)])) == 1


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 7), st.data())
def test_maximal_matchings_are_at_least_half_mcm(n, data):
    """Sanity on the oracle trio: any maximal matching found greedily is
    within factor 2, so approx_ratio must be <= 2 for it."""
    pool = list(combinations(range(n), 2))
    edges = tuple(sorted(data.draw(st.sets(st.sampled_from(pool), max_size=len(pool)))))
    used = set()
    matching = []
    for u, v in edges:
        if u not in used and v not in used:
            used.update((u, v))
            matching.append((u, v))
    s = snap(n, edges, matching)
    ok, _ = check_maximal(s)
    assert ok
    if matching:
        assert approx_ratio(s) <= 2
