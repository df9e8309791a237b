"""Partition data model.

Elements are dense ids ``0..n-1``.  A :class:`Clustering` is stored in
canonical form: clusters are ordered by their smallest member and labels are
renumbered to match, so two equal partitions always have equal label arrays.
"""
from __future__ import annotations

from collections.abc import Iterable, Sequence

import numpy as np

from .errors import InvalidInput

__all__ = [
    "Clustering",
    "partition_from_labels",
    "partition_from_clusters",
    "partitions_equal",
    "is_balanced",
]


class Clustering:
    """Immutable partition of ``{0, ..., n-1}`` in canonical form."""

    __slots__ = ("_labels", "_clusters")

    def __init__(self, labels: Sequence[int]):
        arr = np.asarray(labels)
        if arr.ndim != 1 or arr.size == 0:
            raise InvalidInput("labels must be a non-empty 1-d sequence")
        if not np.issubdtype(arr.dtype, np.integer):
            raise InvalidInput("labels must be integers")
        if arr.min() < 0:
            raise InvalidInput("labels must be non-negative")
        # first-occurrence order == order by smallest member id
        _, first, inverse = np.unique(arr, return_index=True, return_inverse=True)
        rank = np.empty(first.size, dtype=np.int64)
        rank[np.argsort(first, kind="stable")] = np.arange(first.size)
        canon = rank[inverse.ravel()]
        canon.setflags(write=False)
        self._labels = canon
        self._clusters = None

    @property
    def labels(self) -> np.ndarray:
        return self._labels

    @property
    def n(self) -> int:
        return int(self._labels.size)

    @property
    def k(self) -> int:
        return int(self._labels.max()) + 1

    @property
    def clusters(self) -> tuple[frozenset[int], ...]:
        if self._clusters is None:
            order = np.argsort(self._labels, kind="stable")
            bounds = np.cumsum(np.bincount(self._labels))[:-1]
            self._clusters = tuple(
                frozenset(int(x) for x in block) for block in np.split(order, bounds)
            )
        return self._clusters

    def sizes(self) -> list[int]:
        return np.bincount(self._labels).tolist()

    def cluster_of(self, u: int) -> int:
        return int(self._labels[u])

    def to_list(self) -> list[int]:
        return self._labels.tolist()

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Clustering):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self._labels, other._labels))

    def __hash__(self) -> int:
        return hash(self._labels.tobytes())

    def __repr__(self) -> str:
        body = [sorted(c) for c in self.clusters]
        if self.n > 30:
            return f"Clustering(n={self.n}, k={self.k}, sizes={self.sizes()})"
        return f"Clustering({body})"


def partition_from_labels(labels: Sequence[int]) -> Clustering:
    """Build a canonical clustering from one label per element."""
    if len(labels) == 0:
        raise InvalidInput("labels must be non-empty")
    return Clustering(labels)


def partition_from_clusters(clusters: Iterable[Iterable[int]], n: int) -> Clustering:
    """Build a clustering from disjoint blocks that together cover ``range(n)``."""
    labels = np.full(n, -1, dtype=np.int64)
    for i, block in enumerate(clusters):
        for u in block:
            if not 0 <= u < n:
                raise InvalidInput(f"element {u} out of range for n={n}")
            if labels[u] != -1:
                raise InvalidInput(f"element {u} appears in two clusters")
            labels[u] = i
    if (labels < 0).any():
        missing = np.flatnonzero(labels < 0)[:5].tolist()
        raise InvalidInput(f"elements not covered: {missing} ...")
    return Clustering(labels)


def partitions_equal(a: Clustering, b: Clustering) -> bool:
    """True iff ``a`` and ``b`` are the same partition up to relabeling."""
    if a.n != b.n:
        raise InvalidInput(f"clusterings over different n ({a.n} vs {b.n})")
    return a == b


def is_balanced(c: Clustering) -> bool:
    """Max cluster size at most ``4n/k`` or min cluster size at least ``n/(20k)``."""
    sizes = c.sizes()
    n, k = c.n, len(sizes)
    return max(sizes) * k <= 4 * n or min(sizes) * 20 * k >= n
