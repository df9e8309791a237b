"""Polynomial-time adaptive clustering by positive-neighbourhood differences.

A batch ``V'`` is kept fully queried.  Vertices whose +1-degree clears
``T(|V'|)`` are linked when their +1 neighbourhoods differ in at most
``theta(|V'|)`` places (the pair itself excluded); linked components of
sufficient size become clusters, which are then grown over every unassigned
vertex by majority vote.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .adaptive_opt import QueriedBatch, probe_size
from .config import AlgoConfig, RunResult, log, separation
from .core import partition_from_clusters
from .errors import InvalidInput
from .mlcore import WeightedPairGraph, ml_blocks
from .oracle import Oracle

__all__ = [
    "EffParams",
    "eff_params",
    "threshold_T",
    "threshold_theta",
    "symdiff_matrix",
    "cluster_batch_by_symdiff",
    "size_estimates",
    "efficient_budget",
    "run_efficient_known_k",
    "run_efficient_unknown_k",
]


@dataclass(frozen=True)
class EffParams:
    N: int
    min_cluster_out: float
    log_scale: float = 1.0

    def __post_init__(self):
        if self.N < 1 or self.min_cluster_out <= 0:
            raise InvalidInput("N and min_cluster_out must be positive")


def eff_params(n: int, k: int, p: float, cfg: AlgoConfig = AlgoConfig()) -> EffParams:
    """Batch size ``alpha 64 k^2 ln n / (1-2p)^4`` and output floor ``alpha 64 k ln n / (1-2p)^4``."""
    if k < 1:
        raise InvalidInput("k must be at least 1")
    unit = cfg.alpha * 64.0 * log(n) / separation(p) ** 4
    return EffParams(max(1, math.ceil(unit * k * k - 1e-9)), unit * k, cfg.alpha)


def threshold_T(a: float, N: float, n: int, p: float, log_scale: float = 1.0) -> float:
    """Degree floor ``p a + 6/(1-2p) sqrt(N ln n)``."""
    return p * a + 6.0 / separation(p) * math.sqrt(N * log_scale * log(n))


def threshold_theta(a: float, N: float, n: int, p: float, log_scale: float = 1.0) -> float:
    """Neighbourhood-difference ceiling ``2p(1-p) a + 2 sqrt(N ln n)``."""
    separation(p)
    return 2.0 * p * (1.0 - p) * a + 2.0 * math.sqrt(N * log_scale * log(n))


def symdiff_matrix(plus: np.ndarray) -> np.ndarray:
    """``|N+(u) ^ N+(v)|`` for all pairs of a 0/1 adjacency, ``u`` and ``v`` excluded."""
    A = plus.astype(np.float64)
    D = A @ (1.0 - A).T
    D = D + D.T - 2.0 * A
    np.fill_diagonal(D, 0.0)
    return np.rint(D).astype(np.int64)


def cluster_batch_by_symdiff(g: WeightedPairGraph, params: EffParams, n: int, p: float,
                             info: dict | None = None) -> list[frozenset[int]]:
    """Groups of the batch whose members share +1 neighbourhoods.

    Linked pairs are closed transitively (single link).  Groups smaller than
    ``params.min_cluster_out`` are dropped; the rest are ordered by smallest
    member.
    """
    g.require_complete()
    m = len(g)
    if m == 0:
        return []
    plus = g.matrix > 0
    deg = plus.sum(axis=1)
    T = threshold_T(m, params.N, n, p, params.log_scale)
    theta = threshold_theta(m, params.N, n, p, params.log_scale)
    cand = np.flatnonzero(deg >= T)
    if info is not None:
        info.update(T=T, theta=theta, candidates=int(cand.size),
                    comparisons=int(cand.size * (cand.size - 1) // 2 * max(m - 2, 0)))
    if cand.size == 0:
        return []
    # differences range over the whole batch, not just the candidates
    D = _symdiff_rows(plus, cand)
    link = np.triu(D <= theta, 1)
    iu, ju = np.nonzero(link)
    adj = coo_matrix((np.ones(iu.size), (iu, ju)), shape=(cand.size, cand.size))
    ncomp, comp = connected_components(adj, directed=False)
    verts = np.asarray(g.vertices)
    groups = []
    for c in range(ncomp):
        members = verts[cand[comp == c]]
        if members.size >= params.min_cluster_out:
            groups.append(frozenset(int(x) for x in members))
    groups.sort(key=min)
    return groups


def size_estimates(g: WeightedPairGraph, p: float) -> np.ndarray:
    """Estimate of ``|C_v|`` inside the batch for every batch vertex ``v``.

    ``(|N+(v)| - p m) / (1-2p) + 1`` with ``m = |V'| - 1`` the vertices other
    than ``v``; the degree has mean ``p m + (1-2p)(|C_v| - 1)``, so the
    estimate is unbiased.
    """
    deg = (g.matrix > 0).sum(axis=1)
    return (deg - p * (len(g) - 1)) / separation(p) + 1.0


def efficient_budget(n: int, k: int, p: float, cfg: AlgoConfig = AlgoConfig()) -> float:
    """Scaled query ceiling ``C n k^2 ln n / (1-2p)^4`` with ``C = 64 (alpha + probe_alpha/4)``.

    Batch queries are at most ``n N`` and vote queries at most ``n k l``;
    ``n (k + 1)`` absorbs the ceilings of ``N`` and ``l``.
    """
    C = 64.0 * (cfg.alpha + cfg.probe_scale / 4.0)
    return C * n * k * k * log(n) / separation(p) ** 4 + n * (k + 1)


def _symdiff_rows(plus: np.ndarray, rows: np.ndarray) -> np.ndarray:
    A = plus.astype(np.float64)
    R = A[rows]
    D = R @ (1.0 - R).T
    D = D + D.T - 2.0 * A[np.ix_(rows, rows)]
    np.fill_diagonal(D, 0.0)
    return np.rint(D).astype(np.int64)


def _grow(o: Oracle, groups, assigned: np.ndarray, l: int, batch: QueriedBatch,
          log_: list) -> list[set[int]]:
    """Majority-vote growth of each new group over every unassigned vertex."""
    grown = [set(gr) for gr in groups]
    for gr in grown:
        assigned[list(gr)] = True
    for ci, gr in enumerate(grown):
        probes = np.asarray(sorted(gr)[:l], dtype=np.int64)
        if probes.size < l:
            log_.append(("grow", f"group#{ci} probed with {probes.size} < {l} members"))
        cand = np.flatnonzero(~assigned)
        if cand.size == 0:
            break
        us = np.repeat(cand, probes.size)
        vs = np.tile(probes, cand.size)
        yes = (o.query_many(us, vs).reshape(cand.size, probes.size) > 0).sum(axis=1)
        joined = cand[2 * yes > probes.size]
        gr.update(int(x) for x in joined)
        assigned[joined] = True
    batch.remove(set().union(*grown) if grown else set())
    return grown


def _finish(name, o, n, clusters, assigned, cfg, threshold, rounds, log_) -> RunResult:
    rest = np.flatnonzero(~assigned).tolist()
    residual: list[frozenset[int]] = []
    unclustered: list[int] = []
    if rest and cfg.ml_fallback and len(rest) <= cfg.ml_cap:
        residual = ml_blocks(WeightedPairGraph.from_oracle(o, rest), cfg.ml_cap)
        log_.append(("finish", f"ML fallback on {len(rest)} residual vertices"))
    elif rest:
        unclustered = rest
        residual = [frozenset([u]) for u in rest]
        log_.append(("finish", f"{len(rest)} vertices left unclustered"))
    final = [frozenset(c) for c in clusters]
    return RunResult(name, partition_from_clusters(final + residual, n), o.stats, final,
                     residual, unclustered, threshold, rounds, log_)


def run_efficient_known_k(o: Oracle, n: int, k: int, p: float,
                          cfg: AlgoConfig = AlgoConfig()) -> RunResult:
    """Known-``k`` variant; batches are filled with ascending ids."""
    if not o.symmetric:
        raise InvalidInput("the algorithm assumes a symmetric oracle (p == q)")
    if n != o.n:
        raise InvalidInput(f"n={n} does not match the oracle's {o.n}")
    params = eff_params(n, k, p, cfg)
    l = probe_size(p, n, cfg)
    log_ = [("config", f"N={params.N} min_out={params.min_cluster_out:.2f} probes={l}")]
    assigned = np.zeros(n, dtype=bool)
    batch = QueriedBatch(o)
    clusters: list[set[int]] = []
    cursor = 0
    while True:
        inside = set(batch.vertices)
        fresh = []
        while len(batch) + len(fresh) < params.N and cursor < n:
            if not assigned[cursor] and cursor not in inside:
                fresh.append(cursor)
            cursor += 1
        batch.add(fresh)
        if not len(batch):
            break
        info: dict = {}
        groups = cluster_batch_by_symdiff(batch.graph(), params, n, p, info)
        log_.append(("batch", f"|V'|={len(batch)} candidates={info.get('candidates', 0)} "
                                  f"groups={[len(gr) for gr in groups]}"))
        if not groups:
            log_.append(("batch", "no group reached the size floor; abort"))
            break
        clusters.extend(_grow(o, groups, assigned, l, batch, log_))
        if assigned.all():
            break
    return _finish("efficient_known_k", o, n, clusters, assigned, cfg,
                   params.min_cluster_out, 0, log_)


def run_efficient_unknown_k(o: Oracle, n: int, p: float,
                            cfg: AlgoConfig = AlgoConfig()) -> RunResult:
    """Unknown-``k`` variant: guess ``l = 2`` and double until a batch yields a group.

    ``rounds`` in the result counts the guesses tried up to the first
    successful batch (0 if none succeeded).
    """
    if not o.symmetric:
        raise InvalidInput("the algorithm assumes a symmetric oracle (p == q)")
    if n != o.n:
        raise InvalidInput(f"n={n} does not match the oracle's {o.n}")
    rng = np.random.default_rng(cfg.seed)
    s = separation(p)
    l = probe_size(p, n, cfg)
    ell = 2
    tries = 1
    first_success = 0
    assigned = np.zeros(n, dtype=bool)
    batch = QueriedBatch(o)
    clusters: list[set[int]] = []
    params = eff_params(n, ell, p, cfg)
    log_ = [("config", f"probes={l}")]
    while not assigned.all():
        params = eff_params(n, ell, p, cfg)
        inside = np.zeros(n, dtype=bool)
        inside[batch.vertices] = True
        avail = np.flatnonzero(~assigned & ~inside)
        need = params.N - len(batch)
        whole = need >= avail.size
        if whole:
            fresh = avail
        elif need > 0:
            fresh = np.sort(rng.choice(avail, size=need, replace=False))
        else:
            fresh = avail[:0]
        batch.add(fresh.tolist())
        g = batch.graph()
        est = size_estimates(g, p)
        trigger = cfg.alpha * 6.0 * ell * log(n) / s**4
        groups = []
        if est.size and est.max() > trigger:
            groups = cluster_batch_by_symdiff(g, params, n, p)
        log_.append(("guess", f"l={ell} |V'|={len(batch)} max_est={est.max() if est.size else 0:.1f} "
                              f"trigger={trigger:.2f} groups={[len(gr) for gr in groups]}"))
        if groups:
            if not first_success:
                first_success = tries
            clusters.extend(_grow(o, groups, assigned, l, batch, log_))
            continue
        if whole:
            log_.append(("guess", "whole remaining graph sampled without a group; abort"))
            break
        ell *= 2
        tries += 1
    return _finish("efficient_unknown_k", o, n, clusters, assigned, cfg,
                   params.min_cluster_out, first_success, log_)
