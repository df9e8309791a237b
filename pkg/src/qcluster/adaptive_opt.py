"""Information-theoretically optimal adaptive clustering (heaviest-subgraph based).

Phases: grow a fully queried graph ``G'`` until its heaviest subgraph reaches
the size threshold, move such subgraphs to an active list (attaching ``G'``
vertices with positive total weight to them), route every further vertex by
majority vote against each active cluster or into ``G'`` on failure, and
finish with the exact ML partition of whatever is left in ``G'``.
"""
from __future__ import annotations

import heapq
import math
from collections.abc import Collection

import numpy as np

from .config import AlgoConfig, RunResult, log, separation
from .core import partition_from_clusters
from .errors import InstanceTooLarge, InvalidInput, ResidualTooLarge
from .mlcore import WeightedPairGraph, heaviest_subgraph, ml_blocks
from .oracle import Oracle

__all__ = [
    "threshold_c",
    "probe_size",
    "recovery_threshold",
    "info_optimal_budget",
    "majority_member_test",
    "run_info_optimal",
    "QueriedBatch",
]


def threshold_c(p: float, n: int, cfg: AlgoConfig = AlgoConfig()) -> int:
    """``ceil(alpha * 16 / (1-2p)^2 * ln n)``, at least 1."""
    s = separation(p)
    return max(1, math.ceil(cfg.alpha * 16.0 / s**2 * log(n) - 1e-9))


def probe_size(p: float, n: int, cfg: AlgoConfig = AlgoConfig()) -> int:
    """Members consulted per majority vote; ``threshold_c`` under ``probe_alpha``."""
    s = separation(p)
    return max(1, math.ceil(cfg.probe_scale * 16.0 / s**2 * log(n) - 1e-9))


def recovery_threshold(p: float, n: int, cfg: AlgoConfig = AlgoConfig()) -> float:
    """Cluster size ``c' ln n`` (``c' = 6c``) above which recovery is guaranteed."""
    return cfg.alpha * 96.0 / separation(p) ** 2 * log(n)


def info_optimal_budget(n: int, k: int, p: float, cfg: AlgoConfig = AlgoConfig()) -> float:
    """Scaled query ceiling ``c' k n ln n`` with ``c' = 96 / (1-2p)^2``."""
    return max(cfg.alpha, cfg.probe_scale) * 96.0 / separation(p) ** 2 * k * n * log(n)


def majority_member_test(o: Oracle, v: int, cluster: Collection[int], l: int) -> bool:
    """Query ``v`` against the ``l`` smallest-id members; strict majority of +1 wins."""
    if l < 1:
        raise InvalidInput("l must be at least 1")
    if len(cluster) < l:
        raise InvalidInput(f"cluster has {len(cluster)} members, fewer than l={l}")
    if v in cluster:
        raise InvalidInput(f"element {v} already in the cluster")
    members = heapq.nsmallest(l, cluster)
    yes = sum(1 for u in members if o.query(v, u) > 0)
    return 2 * yes > l


class QueriedBatch:
    """Vertex set kept fully queried against itself, with a dense weight matrix."""

    def __init__(self, oracle: Oracle):
        self.oracle = oracle
        self.vertices: list[int] = []
        self.matrix = np.zeros((0, 0), dtype=np.int8)

    def __len__(self) -> int:
        return len(self.vertices)

    def __contains__(self, v: int) -> bool:
        return v in self._pos()

    def _pos(self) -> dict[int, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    def add(self, new) -> None:
        new = [int(v) for v in new]
        if not new:
            return
        old = np.asarray(self.vertices, dtype=np.int64)
        nw = np.asarray(new, dtype=np.int64)
        m0, m1 = old.size, nw.size
        cross = np.zeros((m1, m0), dtype=np.int8)
        if m0:
            ii, jj = np.meshgrid(np.arange(m1), np.arange(m0), indexing="ij")
            cross = self.oracle.query_many(nw[ii.ravel()], old[jj.ravel()]).reshape(m1, m0)
        inner = np.zeros((m1, m1), dtype=np.int8)
        if m1 > 1:
            iu, ju = np.triu_indices(m1, 1)
            ans = self.oracle.query_many(nw[iu], nw[ju])
            inner[iu, ju] = ans
            inner[ju, iu] = ans
        self.matrix = np.block([[self.matrix, cross.T], [cross, inner]]).astype(np.int8)
        self.vertices.extend(new)

    def remove(self, gone) -> None:
        gone = set(gone)
        keep = [i for i, v in enumerate(self.vertices) if v not in gone]
        self.vertices = [self.vertices[i] for i in keep]
        self.matrix = self.matrix[np.ix_(keep, keep)]

    def graph(self) -> WeightedPairGraph:
        return WeightedPairGraph(self.vertices, self.matrix)

    def row_sums(self, cols) -> dict[int, int]:
        """Total weight from each vertex to the vertex set ``cols``."""
        pos = self._pos()
        ix = [pos[c] for c in cols]
        sums = self.matrix[:, ix].astype(np.int64).sum(axis=1)
        return {v: int(s) for v, s in zip(self.vertices, sums)}


def run_info_optimal(o: Oracle, n: int, p: float, cfg: AlgoConfig = AlgoConfig()) -> RunResult:
    """Adaptive clustering recovering every cluster of size at least ``c' ln n``."""
    if not o.symmetric:
        raise InvalidInput("the algorithm assumes a symmetric oracle (p == q)")
    if n != o.n:
        raise InvalidInput(f"n={n} does not match the oracle's {o.n}")
    t = threshold_c(p, n, cfg)
    l = probe_size(p, n, cfg)
    log_ = [("config", f"threshold={t} probes={l}")]
    batch = QueriedBatch(o)
    active: list[set[int]] = []
    owner = np.full(n, -1, dtype=np.int64)

    def extract() -> None:
        while len(batch) >= t:
            if len(batch) > cfg.subgraph_cap:
                raise InstanceTooLarge(
                    f"G' has {len(batch)} vertices, above subgraph cap {cfg.subgraph_cap}")
            S, w = heaviest_subgraph(batch.graph(), cfg.subgraph_cap, cfg.solver)
            if len(S) < t:
                return
            sums = batch.row_sums(sorted(S))
            batch.remove(S)
            attached = [z for z in batch.vertices if sums[z] > 0]
            batch.remove(attached)
            cluster = set(S) | set(attached)
            if (owner[list(cluster)] >= 0).any():
                raise AssertionError("element assigned twice")
            owner[list(cluster)] = len(active)
            active.append(cluster)
            log_.append(("extract", f"active#{len(active) - 1} |S|={len(S)} w={w} "
                                   f"attached={len(attached)}"))

    for v in range(n):
        placed = False
        for ci, cluster in enumerate(active):
            ll = min(l, len(cluster))
            if ll < l:
                log_.append(("route", f"active#{ci} probed with {ll} < {l} members"))
            if majority_member_test(o, v, cluster, ll):
                cluster.add(v)
                owner[v] = ci
                placed = True
                break
        if not placed:
            batch.add([v])
            extract()

    residual: list[frozenset[int]] = []
    unclustered: list[int] = []
    if len(batch):
        if len(batch) > cfg.ml_cap:
            if not cfg.residual_fallback:
                raise ResidualTooLarge(
                    f"residual G' has {len(batch)} vertices, above ML cap {cfg.ml_cap}")
            unclustered = sorted(batch.vertices)
            residual = [frozenset([u]) for u in unclustered]
            log_.append(("residual", f"residual {len(batch)} > cap; singleton fallback"))
        else:
            residual = ml_blocks(batch.graph(), cfg.ml_cap)
            log_.append(("residual", f"ML on {len(batch)} residual vertices -> {len(residual)} blocks"))

    final = [frozenset(c) for c in active]
    clustering = partition_from_clusters(final + residual, n)
    return RunResult("info_optimal", clustering, o.stats, final, residual, unclustered,
                     recovery_threshold(p, n, cfg), 0, log_)
