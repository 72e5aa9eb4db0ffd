from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from apollonian.core import validate_packing
from apollonian.enumerate import (MAX_BOUND, TraversalConfig, count_circles, count_tangent_pairs,
                                  histogram, per_coordinate_counts, recursive_histogram, traverse,
                                  walk)
from apollonian.errors import CapacityError, UsageError

from oracles import circles_with_quadruples, tangent_pairs


def test_bugeye_small_counts(bug):
    # -1, 2, 2, 3, 3, 6, 6, 6, 6
    assert count_circles(bug, 10) == 9
    assert count_circles(bug, 4) == 5
    assert count_circles(bug, 3) == 3


def test_coins_small_counts(coin):
    assert count_circles(coin, 25) == 3
    assert count_circles(coin, 29) == 4
    assert count_circles(coin, 41) == 5
    assert count_circles(coin, 158) == 16


def test_bugeye_histogram_below_ten(bug):
    h = histogram(bug, 1, 10)
    assert h.as_dict() == {2: 2, 3: 2, 6: 4}
    assert h.total() == 8


def test_coins_histogram_entries(coin):
    h = histogram(coin, 1, 200)
    assert h[24] == 1 and h[25] == 0 and h[21] == 1 and h[28] == 1


@pytest.mark.parametrize("x", [10, 57, 100, 1000, 5000])
def test_counts_match_oracle(bug, coin, x):
    for p in (bug, coin):
        want = len(circles_with_quadruples(p.root, x))
        assert count_circles(p, x) == want


@pytest.mark.parametrize("hi", [50, 1000, 10**4])
def test_histogram_matches_recursive_oracle(bug, coin, hi):
    for p in (bug, coin):
        a = histogram(p, 1, hi)
        b = recursive_histogram(p, 1, hi)
        assert np.array_equal(a.counts, b.counts)


def test_histogram_matches_breadth_first_oracle(bug):
    x = 3000
    want = Counter(k for k, _ in circles_with_quadruples(bug.root, x) if k > 0)
    h = histogram(bug, 1, x)
    assert h.as_dict() == dict(want)


def test_histogram_subinterval(bug):
    full = histogram(bug, 1, 5000)
    part = histogram(bug, 1200, 5000)
    assert np.array_equal(full.counts[1199:], part.counts)


@pytest.mark.parametrize("x", [10, 100, 1000])
def test_tangent_pairs_identity(bug, coin, x):
    for p in (bug, coin):
        if x <= max(p.root):
            continue
        n = count_circles(p, x)
        got = count_tangent_pairs(p, x)
        assert got == 3 * n - 6
        assert got == len(tangent_pairs(p.root, x))


def test_tangent_pairs_small_values(bug):
    assert count_tangent_pairs(bug, 10) == 21
    assert count_tangent_pairs(bug, 4) == 9
    with pytest.raises(UsageError):
        count_tangent_pairs(bug, 3)


def test_per_coordinate_counts(bug):
    assert per_coordinate_counts(bug, 10) == (0, 3, 3, 2)
    assert per_coordinate_counts(bug, 4) == (0, 1, 1, 2)
    assert sum(per_coordinate_counts(bug, 10**4)) == count_circles(bug, 10**4) - 1


def test_per_coordinate_shares_even_out(bug):
    c = np.array(per_coordinate_counts(bug, 10**6), dtype=float)
    share = c / c.sum()
    assert np.allclose(share, 0.25, atol=2e-3)


@pytest.mark.parametrize("x", [2000, 20000])
def test_mirror_subtree_holds_half_of_bugeye(bug, x):
    # S4 at the root yields the second 3-circle, whose subtree mirrors the rest
    sizes = Counter()
    current = {}

    def visit(v):
        if v.is_root_child:
            current["g"] = v.generator_used
        sizes[current["g"]] += 1

    traverse(bug, TraversalConfig(x), visit)
    assert sorted(sizes) == [1, 2, 3, 4]
    assert sizes[2] == sizes[3]
    assert sizes[4] == sizes[1] + sizes[2] + sizes[3] + 1


def test_traverse_matches_kernel_and_record_interval(bug):
    seen = []
    visits = traverse(bug, TraversalConfig(500), lambda v: seen.append(v.new_curvature))
    assert visits == len(seen) == count_circles(bug, 500) - 4
    assert all(0 < k < 500 for k in seen)
    inside = []
    traverse(bug, TraversalConfig(1000, 100, 500), lambda v: inside.append(v.new_curvature))
    assert sorted(inside) == sorted(k for k in seen if k >= 100)


def test_visit_order_is_depth_first(bug):
    order = []
    traverse(bug, TraversalConfig(40), lambda v: order.append((v.quadruple, v.generator_used)))
    # first visit is the S1 root child, followed by its own descendants
    assert order[0] == ((15, 2, 2, 3), 1)
    assert order[1][0][0] == 15


@pytest.mark.parametrize("threads", [2, 3, 4])
def test_thread_invariance(bug, coin, threads):
    for p, x in ((bug, 2 * 10**5), (coin, 10**6)):
        one = walk(p, x, hist_range=(1, x))
        many = walk(p, x, hist_range=(1, x), threads=threads)
        assert one.visits == many.visits
        assert np.array_equal(one.coord, many.coord)
        assert np.array_equal(one.hist, many.hist)


def test_checked_walk_agrees(bug):
    a = walk(bug, 10**5)
    b = walk(bug, 10**5, check=True)
    assert a.visits == b.visits


def test_capacity_and_usage_errors(bug):
    with pytest.raises(CapacityError):
        TraversalConfig(MAX_BOUND + 1)
    with pytest.raises(UsageError):
        TraversalConfig(0)
    with pytest.raises(CapacityError):
        histogram(bug, 1, 10**6, memory_budget=1000)
    with pytest.raises(UsageError):
        histogram(bug, 10, 5)
    with pytest.raises(UsageError):
        walk(bug, 100, edges=[50, 40, 100])


def test_known_counts_at_scale(bug):
    # frozen from an independent run of the recursive enumerator at 1e4 and the kernel beyond
    assert count_circles(bug, 10**4) == 67167
    assert count_circles(bug, 10**5) == 1359171
    assert count_circles(bug, 10**6) == 27463395


@settings(max_examples=25, deadline=None)
@given(st.integers(4, 3000), st.sampled_from(["bugeye", "coins", "-6,11,14,15"]))
def test_count_matches_oracle_property(x, name):
    from apollonian.core import packing_from_spec
    p = packing_from_spec(name)
    assert count_circles(p, x) == len(circles_with_quadruples(p.root, x))


@settings(max_examples=25, deadline=None)
@given(st.integers(5, 2000), st.integers(5, 2000))
def test_count_is_monotone(x, y):
    p = validate_packing((-1, 2, 2, 3))
    lo, hi = sorted((x, y))
    assert count_circles(p, lo) <= count_circles(p, hi)
