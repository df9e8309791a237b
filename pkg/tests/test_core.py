from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qcluster.core import (Clustering, is_balanced, partition_from_clusters, partition_from_labels,
                           partitions_equal)
from qcluster.errors import InvalidInput

labels_st = st.lists(st.integers(0, 6), min_size=1, max_size=30)


def sizes_to_clustering(sizes):
    return Clustering(np.repeat(np.arange(len(sizes)), sizes))


class TestFromLabels:
    def test_grouping(self):
        c = partition_from_labels([0, 0, 1])
        assert c.clusters == (frozenset({0, 1}), frozenset({2}))
        assert c.k == 2

    def test_single_label(self):
        c = partition_from_labels([5, 5, 5])
        assert c.clusters == (frozenset({0, 1, 2}),)
        assert c.k == 1

    def test_relabel_by_first_occurrence(self):
        c = partition_from_labels([2, 0, 2, 1])
        assert c.to_list() == [0, 1, 0, 2]
        assert c.clusters == (frozenset({0, 2}), frozenset({1}), frozenset({3}))

    @pytest.mark.parametrize("bad", [[], [-1, 0], [0.5, 1.0], [[0, 1]]])
    def test_rejects(self, bad):
        with pytest.raises(InvalidInput):
            partition_from_labels(bad)

    def test_labels_read_only(self):
        c = partition_from_labels([1, 0])
        with pytest.raises(ValueError):
            c.labels[0] = 3


class TestFromClusters:
    def test_roundtrip(self):
        c = partition_from_clusters([{3, 1}, {0}, {2}], 4)
        assert c.to_list() == [0, 1, 2, 1]

    @pytest.mark.parametrize("blocks,n", [([{0, 1}, {1, 2}], 3), ([{0}], 2), ([{0, 5}], 2)])
    def test_rejects_non_partitions(self, blocks, n):
        with pytest.raises(InvalidInput):
            partition_from_clusters(blocks, n)


    def test_empty_blocks_dropped(self):
        assert partition_from_clusters([set(), {0, 1}, set()], 2).k == 1


class TestEquality:
    def test_examples(self):
        assert partitions_equal(partition_from_labels([0, 0, 1]), partition_from_labels([1, 1, 0]))
        assert not partitions_equal(partition_from_labels([0, 1]), partition_from_labels([0, 0]))

    def test_mismatched_n(self):
        with pytest.raises(InvalidInput):
            partitions_equal(partition_from_labels([0]), partition_from_labels([0, 0]))

    @given(labels_st)
    def test_canonical_idempotent(self, labels):
        c = partition_from_labels(labels)
        assert partition_from_labels(c.labels).to_list() == c.to_list()
        assert partitions_equal(c, c)

    @given(labels_st, st.permutations(range(7)))
    def test_bijection_on_labels(self, labels, perm):
        a = partition_from_labels(labels)
        b = partition_from_labels([perm[x] for x in labels])
        assert partitions_equal(a, b) and a == b and hash(a) == hash(b)

    @given(st.lists(st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(0, 2)),
                    min_size=1, max_size=8))
    def test_equivalence_relation(self, rows):
        a, b, c = (partition_from_labels([r[i] for r in rows]) for i in range(3))
        assert partitions_equal(a, b) == partitions_equal(b, a)
        if partitions_equal(a, b) and partitions_equal(b, c):
            assert partitions_equal(a, c)

    @given(labels_st)
    def test_clusters_cover_and_disjoint(self, labels):
        c = partition_from_labels(labels)
        blocks = c.clusters
        assert sum(len(b) for b in blocks) == c.n
        assert set().union(*blocks) == set(range(c.n))
        assert [min(b) for b in blocks] == sorted(min(b) for b in blocks)
        assert c.sizes() == [len(b) for b in blocks]


class TestBalanced:
    def test_uniform(self):
        assert is_balanced(sizes_to_clustering([20] * 5))

    def test_second_condition(self):
        assert is_balanced(sizes_to_clustering([96, 1, 1, 1, 1]))

    def test_unbalanced(self):
        assert not is_balanced(sizes_to_clustering([196, 1, 1, 1, 1]))
