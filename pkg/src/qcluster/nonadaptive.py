"""Non-adaptive clustering: every query is fixed before any answer is read.

Each algorithm draws a seeded uniform sample ``V'`` and queries every pair
in ``V x V'``.  The pair list depends only on ``(n, parameters, seed)``, so
:func:`nonadaptive_pairs` can emit it without an oracle (dry run).
Clusters are recovered inside the sample and grown from the pre-issued
sample-to-vertex answers.
"""
from __future__ import annotations

import math

import numpy as np

from .adaptive_eff import EffParams, cluster_batch_by_symdiff
from .adaptive_opt import threshold_c
from .config import AlgoConfig, RunResult, log, separation
from .core import partition_from_clusters
from .errors import InstanceTooLarge, InvalidInput
from .mlcore import WeightedPairGraph, heaviest_subgraph
from .oracle import Oracle

__all__ = [
    "sample_size",
    "draw_sample",
    "nonadaptive_pairs",
    "nonadaptive_budget",
    "run_nonadaptive_k2",
    "run_nonadaptive_general",
]


def sample_size(n: int, p: float, cfg: AlgoConfig, *, k: int = 2, R: float = 1.0,
                mode: str = "k2") -> int:
    """Sample size for each non-adaptive variant, capped at ``n``.

    ``k2``: ``alpha 4 c ln n`` with ``c = 64 / (1-2p)^4``;
    ``efficient``: ``alpha 128 R k^2 ln n / (1-2p)^4``;
    ``info_optimal``: ``alpha 192 R k ln n / (1-2p)^2``.
    """
    s = separation(p)
    if R < 1:
        raise InvalidInput("R must be at least 1")
    if mode == "k2":
        raw = cfg.alpha * 4.0 * 64.0 / s**4 * log(n)
    elif mode == "efficient":
        raw = cfg.alpha * 2.0 * 64.0 * R * k * k / s**4 * log(n)
    elif mode == "info_optimal":
        raw = cfg.alpha * 2.0 * 96.0 * R * k / s**2 * log(n)
    else:
        raise InvalidInput(f"unknown mode {mode!r}")
    return min(n, max(1, math.ceil(raw - 1e-9)))


def draw_sample(n: int, m: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return np.sort(rng.choice(n, size=m, replace=False))


def _pairs_for_sample(n: int, sample: np.ndarray) -> np.ndarray:
    m = sample.size
    iu, ju = np.triu_indices(m, 1)
    inner = np.stack([sample[iu], sample[ju]], axis=1)
    mask = np.ones(n, dtype=bool)
    mask[sample] = False
    rest = np.flatnonzero(mask)
    cross = np.stack([np.repeat(rest, m), np.tile(sample, rest.size)], axis=1)
    pairs = np.concatenate([inner, cross]).astype(np.int64)
    return np.sort(pairs, axis=1)


def nonadaptive_pairs(algo: str, n: int, p: float, cfg: AlgoConfig = AlgoConfig(), *,
                      k: int = 2, R: float = 1.0, mode: str = "efficient"):
    """The complete query list of a non-adaptive run, computed without an oracle.

    ``algo`` is ``nonadaptive_k2`` or ``nonadaptive_general``.  Returns the
    sample and an ``(P, 2)`` array of ``(min, max)`` pairs in query order.
    """
    if algo == "nonadaptive_k2":
        m = sample_size(n, p, cfg, mode="k2")
    elif algo == "nonadaptive_general":
        m = sample_size(n, p, cfg, k=k, R=R, mode=mode)
    else:
        raise InvalidInput(f"{algo!r} is not a non-adaptive algorithm")
    sample = draw_sample(n, m, cfg.seed)
    return sample, _pairs_for_sample(n, sample)


def nonadaptive_budget(n: int, p: float, cfg: AlgoConfig = AlgoConfig(), *, k: int = 2,
                       R: float = 1.0, mode: str = "k2") -> int:
    """Exact query count: ``|V'|(|V'|-1)/2 + (n - |V'|)|V'|`` (at most ``n |V'|``)."""
    m = sample_size(n, p, cfg, k=k, R=R, mode=mode)
    return m * (m - 1) // 2 + (n - m) * m


class _Answers:
    """Pre-issued answers in matrix form: rows are all of V, columns the sample."""

    def __init__(self, n: int, sample: np.ndarray, pairs: np.ndarray, ans: np.ndarray):
        col = np.full(n, -1, dtype=np.int64)
        col[sample] = np.arange(sample.size)
        self.X = np.zeros((n, sample.size), dtype=np.int8)
        a, b = pairs[:, 0], pairs[:, 1]
        in_b = col[b] >= 0
        self.X[a[in_b], col[b[in_b]]] = ans[in_b]
        in_a = col[a] >= 0
        self.X[b[in_a], col[a[in_a]]] = ans[in_a]
        self.sample = sample
        self.col = col

    def sample_graph(self) -> WeightedPairGraph:
        M = self.X[self.sample].copy()
        np.fill_diagonal(M, 0)
        return WeightedPairGraph(self.sample.tolist(), M)

    def yes_fraction(self, vertices: np.ndarray, group) -> np.ndarray:
        cols = self.col[np.asarray(sorted(group), dtype=np.int64)]
        block = self.X[np.ix_(vertices, cols)]
        # a member's answer with itself is undefined; exclude it from its own vote
        own = np.isin(vertices, list(group))
        yes = (block > 0).sum(axis=1)
        total = np.full(vertices.size, cols.size) - own
        return np.where(total > 0, yes / np.maximum(total, 1), 0.0)


def _issue(o: Oracle, pairs: np.ndarray) -> np.ndarray:
    return o.query_many(pairs[:, 0], pairs[:, 1])


def _grow_from_answers(ans: _Answers, n: int, groups: list[frozenset[int]]):
    """Attach every vertex outside the groups to the group it agrees with most (> 1/2)."""
    clusters = [set(gr) for gr in groups]
    if not clusters:
        return clusters, np.arange(n)
    taken = np.zeros(n, dtype=bool)
    for gr in groups:
        taken[list(gr)] = True
    rest = np.flatnonzero(~taken)
    if rest.size:
        frac = np.stack([ans.yes_fraction(rest, gr) for gr in groups], axis=1)
        best = frac.argmax(axis=1)
        ok = frac[np.arange(rest.size), best] > 0.5
        for v, b in zip(rest[ok], best[ok]):
            clusters[b].add(int(v))
        rest = rest[~ok]
    return clusters, rest


def run_nonadaptive_k2(o: Oracle, n: int, p: float, cfg: AlgoConfig = AlgoConfig()) -> RunResult:
    """Two-cluster recovery from one batch of up-front queries."""
    if not o.symmetric:
        raise InvalidInput("the algorithm assumes a symmetric oracle (p == q)")
    if n != o.n:
        raise InvalidInput(f"n={n} does not match the oracle's {o.n}")
    sample, pairs = nonadaptive_pairs("nonadaptive_k2", n, p, cfg)
    ans = _Answers(n, sample, pairs, _issue(o, pairs))
    m = sample.size
    params = EffParams(m, m / 2.0, cfg.alpha)
    groups = cluster_batch_by_symdiff(ans.sample_graph(), params, n, p)
    log_ = [("sample", f"|V'|={m} pairs={len(pairs)} groups={[len(g) for g in groups]}")]
    if not groups:
        log_.append(("recover", "no subcluster of half the sample; all unclustered"))
        return RunResult("nonadaptive_k2", partition_from_clusters([[u] for u in range(n)], n),
                         o.stats, [], [frozenset([u]) for u in range(n)], list(range(n)),
                         m / 2.0, 0, log_)
    seed_group = max(groups, key=lambda gr: (len(gr), -min(gr)))
    first = set(seed_group)
    rest = np.setdiff1d(np.arange(n), np.asarray(sorted(first)))
    if rest.size:
        frac = ans.yes_fraction(rest, seed_group)
        first.update(int(v) for v in rest[frac > 0.5])
    second = frozenset(range(n)) - first
    blocks = [frozenset(first)] + ([second] if second else [])
    return RunResult("nonadaptive_k2", partition_from_clusters(blocks, n), o.stats, blocks, [],
                     [], m / 2.0, 0, log_)


def run_nonadaptive_general(o: Oracle, n: int, k: int, R: float, p: float,
                            mode: str = "efficient",
                            cfg: AlgoConfig = AlgoConfig()) -> RunResult:
    """``k``-cluster recovery under a known max/min cluster-size ratio ``R``."""
    if not o.symmetric:
        raise InvalidInput("the algorithm assumes a symmetric oracle (p == q)")
    if n != o.n:
        raise InvalidInput(f"n={n} does not match the oracle's {o.n}")
    if mode not in ("efficient", "info_optimal"):
        raise InvalidInput(f"unknown mode {mode!r}")
    m = sample_size(n, p, cfg, k=k, R=R, mode=mode)
    if mode == "info_optimal" and m > cfg.subgraph_cap:
        raise InstanceTooLarge(f"sample of {m} exceeds subgraph cap {cfg.subgraph_cap}")
    sample, pairs = nonadaptive_pairs("nonadaptive_general", n, p, cfg, k=k, R=R, mode=mode)
    ans = _Answers(n, sample, pairs, _issue(o, pairs))
    g = ans.sample_graph()
    log_ = [("sample", f"mode={mode} |V'|={m} pairs={len(pairs)}")]
    if mode == "efficient":
        floor = cfg.alpha * 64.0 * k * log(n) / separation(p) ** 4
        groups = cluster_batch_by_symdiff(g, EffParams(m, floor, cfg.alpha), n, p)
    else:
        floor = float(threshold_c(p, n, cfg))
        groups = []
        left = list(g.vertices)
        while left:
            S, w = heaviest_subgraph(g.subgraph(left), cfg.subgraph_cap, cfg.solver)
            if len(S) < floor:
                break
            groups.append(S)
            left = [v for v in left if v not in S]
    log_.append(("recover", f"groups={[len(gr) for gr in groups]}"))
    clusters, rest = _grow_from_answers(ans, n, groups)
    blocks = [frozenset(c) for c in clusters]
    residual = [frozenset([int(u)]) for u in rest]
    return RunResult("nonadaptive_general", partition_from_clusters(blocks + residual, n),
                     o.stats, blocks, residual, [int(u) for u in rest], floor, 0, log_)
