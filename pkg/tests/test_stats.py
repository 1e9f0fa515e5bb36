"""Statistics: percentiles, A12, bootstrap, Scott-Knott splits and ranks."""

from random import Random

import pytest

from short.stats import (
    a12,
    bootstrap_significant,
    median_iqr,
    scott_knott,
    segment_ordered,
    sk_split,
)


def test_median_iqr_interpolates():
    med, iqr = median_iqr([1, 2, 3, 4])
    assert med == pytest.approx(2.5)
    assert iqr == pytest.approx(1.5)  # 3.25 - 1.75, linear interpolation


def test_median_iqr_constant():
    med, iqr = median_iqr([7, 7, 7])
    assert med == 7.0
    assert iqr == 0.0


def test_median_iqr_empty_raises():
    with pytest.raises(ValueError):
        median_iqr([])


def test_a12_identity():
    assert a12([1, 2, 3], [1, 2, 3]) == pytest.approx(0.5)


def test_a12_disjoint():
    assert a12([10, 11], [1, 2]) == 1.0
    assert a12([1, 2], [10, 11]) == 0.0


def test_a12_ties_count_half():
    assert a12([1], [1]) == pytest.approx(0.5)
    assert a12([1, 2], [1]) == pytest.approx(0.75)


def test_a12_symmetry_property():
    rng = Random(5)
    for _ in range(50):
        xs = [rng.uniform(0, 10) for _ in range(rng.randint(1, 12))]
        ys = [rng.uniform(0, 10) for _ in range(rng.randint(1, 12))]
        assert a12(xs, ys) + a12(ys, xs) == pytest.approx(1.0)


def test_sk_split_step():
    idx, gain = sk_split([0, 0, 10, 10])
    assert idx == 2
    assert gain == pytest.approx(25.0)  # (2/4)*25 + (2/4)*25


def test_sk_split_leftmost_tie():
    idx, _ = sk_split([5, 5, 5, 5])
    assert idx == 1  # all cuts gain 0; leftmost wins


def test_bootstrap_identical_not_significant():
    assert not bootstrap_significant([3, 3, 3], [3, 3, 3], rng=Random(1))


def test_bootstrap_disjoint_significant():
    xs = [1.0] * 12
    ys = [9.0] * 12
    assert bootstrap_significant(xs, ys, rng=Random(1))


def test_scott_knott_identical_groups_single_rank():
    groups = [[4.0, 4.0, 4.0]] * 5
    assert scott_knott(groups) == [1, 1, 1, 1, 1]


def test_scott_knott_three_clear_ranks():
    rng = Random(9)
    groups = []
    for mean in (0.0, 50.0, 100.0):
        groups.append([rng.gauss(mean, 0.1) for _ in range(10)])
    assert scott_knott(groups, rng=Random(2)) == [1, 2, 3]


def test_scott_knott_rank_labels_follow_means():
    rng = Random(11)
    # shuffled input order; ranks must still track the means
    groups = [
        [rng.gauss(100.0, 0.1) for _ in range(10)],
        [rng.gauss(0.0, 0.1) for _ in range(10)],
        [rng.gauss(50.0, 0.1) for _ in range(10)],
    ]
    assert scott_knott(groups, rng=Random(2)) == [3, 1, 2]


def test_segment_ordered_step_function_two_segments():
    groups = [[1.0] * 20 for _ in range(10)] + [[9.0] * 20 for _ in range(10)]
    segs = segment_ordered(groups, rng=Random(3))
    assert segs == [(0, 10), (10, 20)]


def test_segment_ordered_flat_is_one_segment():
    groups = [[2.0] * 10 for _ in range(8)]
    assert segment_ordered(groups, rng=Random(3)) == [(0, 8)]


def test_segment_ordered_no_reordering():
    # high-low-high: consecutive-only segmentation cannot merge the two highs
    groups = [[9.0] * 15, [1.0] * 15, [9.0] * 15]
    segs = segment_ordered(groups, rng=Random(3))
    assert (0, 1) in segs and (1, 2) in segs and (2, 3) in segs


def test_segment_ordered_deterministic():
    rng = Random(17)
    groups = [[rng.gauss(x, 1.0) for _ in range(20)] for x in (0, 0, 5, 5, 5, 9)]
    one = segment_ordered(groups, rng=Random(4))
    two = segment_ordered(groups, rng=Random(4))
    assert one == two
