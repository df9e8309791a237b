"""Simulated faulty pairwise oracle.

Each unordered pair ``{u, v}`` gets a uniform draw from a counter-based hash
of ``(seed, min(u, v), max(u, v))``.  Answers are therefore lazy, independent
of query order, and reproducible without materializing the ``n x n`` matrix.
A same-cluster pair answers ``+1`` unless the draw falls below ``p``; a
cross-cluster pair answers ``+1`` only when the draw falls below ``q``.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import TextIO

import numpy as np

from .core import Clustering
from .errors import InvalidErrorRate, InvalidInput, SelfQuery

__all__ = [
    "QueryStats",
    "Oracle",
    "ReplayOracle",
    "build_oracle",
    "query",
    "query_stats",
    "pair_uniform",
    "pair_uniform_many",
]

_M64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def _splitmix64(x: int) -> int:
    z = (x + _GOLDEN) & _M64
    z = ((z ^ (z >> 30)) * _MIX1) & _M64
    z = ((z ^ (z >> 27)) * _MIX2) & _M64
    return z ^ (z >> 31)


def _splitmix64_np(x: np.ndarray) -> np.ndarray:
    z = x + np.uint64(_GOLDEN)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
    return z ^ (z >> np.uint64(31))


def pair_uniform(seed: int, u: int, v: int) -> float:
    """Uniform draw in ``[0, 1)`` keyed by the seed and the unordered pair."""
    lo, hi = (u, v) if u < v else (v, u)
    h = _splitmix64(_splitmix64(seed & _M64) ^ ((lo << 32) | hi))
    return (h >> 11) * (1.0 / (1 << 53))


def pair_uniform_many(seed: int, us: np.ndarray, vs: np.ndarray) -> np.ndarray:
    """Vectorized :func:`pair_uniform`; bit-identical to the scalar path."""
    us = np.asarray(us, dtype=np.uint64)
    vs = np.asarray(vs, dtype=np.uint64)
    lo = np.minimum(us, vs)
    hi = np.maximum(us, vs)
    key = np.uint64(_splitmix64(seed & _M64)) ^ ((lo << np.uint64(32)) | hi)
    h = _splitmix64_np(key)
    return (h >> np.uint64(11)).astype(np.float64) * (1.0 / (1 << 53))


@dataclass(frozen=True)
class QueryStats:
    distinct_pairs: int = 0
    total_calls: int = 0


class Oracle:
    """Faulty oracle with persistent answers and query accounting.

    ``q`` defaults to ``p`` (the symmetric model every shipped algorithm
    assumes).  The oracle is mutable and meant to be owned by one trial.
    """

    def __init__(self, truth: Clustering, p: float, q: float | None = None, seed: int = 0):
        q = p if q is None else q
        for name, val in (("p", p), ("q", q)):
            if not 0.0 <= val < 0.5:
                raise InvalidErrorRate(f"{name}={val} must lie in [0, 0.5)")
        self.truth = truth
        self.n = truth.n
        self.p = float(p)
        self.q = float(q)
        self.seed = int(seed)
        self._labels = truth.labels
        self._cache: dict[tuple[int, int], int] = {}
        self._total_calls = 0

    @property
    def symmetric(self) -> bool:
        return self.p == self.q

    def _check(self, u: int, v: int) -> tuple[int, int]:
        if u == v:
            raise SelfQuery(f"self query on element {u}")
        if not (0 <= u < self.n and 0 <= v < self.n):
            raise InvalidInput(f"pair ({u}, {v}) out of range for n={self.n}")
        return (u, v) if u < v else (v, u)

    def answer(self, u: int, v: int) -> int:
        """Pure answer function; no caching or accounting."""
        lo, hi = self._check(int(u), int(v))
        r = pair_uniform(self.seed, lo, hi)
        if self._labels[lo] == self._labels[hi]:
            return 1 if r >= self.p else -1
        return 1 if r < self.q else -1

    def answers_many(self, us, vs) -> np.ndarray:
        """Pure vectorized answers (int8 array of +-1); no accounting."""
        us = np.asarray(us, dtype=np.int64)
        vs = np.asarray(vs, dtype=np.int64)
        if us.size and ((us == vs).any()):
            raise SelfQuery("self query in batch")
        if us.size and (min(us.min(), vs.min()) < 0 or max(us.max(), vs.max()) >= self.n):
            raise InvalidInput("pair out of range")
        r = pair_uniform_many(self.seed, us, vs)
        same = self._labels[us] == self._labels[vs]
        plus = np.where(same, r >= self.p, r < self.q)
        return np.where(plus, 1, -1).astype(np.int8)

    def query(self, u: int, v: int) -> int:
        key = self._check(int(u), int(v))
        self._total_calls += 1
        ans = self._cache.get(key)
        if ans is None:
            ans = self.answer(*key)
            self._cache[key] = ans
        return ans

    def query_many(self, us, vs) -> np.ndarray:
        """Query a batch of pairs; accounting is identical to repeated :meth:`query`."""
        us = np.asarray(us, dtype=np.int64).ravel()
        vs = np.asarray(vs, dtype=np.int64).ravel()
        if us.size == 0:
            return np.empty(0, dtype=np.int8)
        fresh = self.answers_many(us, vs)
        out = np.empty(us.size, dtype=np.int8)
        cache = self._cache
        lo = np.minimum(us, vs).tolist()
        hi = np.maximum(us, vs).tolist()
        for i, key in enumerate(zip(lo, hi)):
            ans = cache.get(key)
            if ans is None:
                ans = int(fresh[i])
                cache[key] = ans
            out[i] = ans
        self._total_calls += us.size
        return out

    @property
    def stats(self) -> QueryStats:
        return QueryStats(len(self._cache), self._total_calls)

    def queried_pairs(self) -> list[tuple[int, int]]:
        """Distinct pairs in first-query order, each as ``(min, max)``."""
        return list(self._cache)

    def cached(self) -> dict[tuple[int, int], int]:
        return dict(self._cache)

    def dump_csv(self, fh: TextIO | None = None) -> str | None:
        """Write cached answers as ``u,v,answer`` rows sorted by pair."""
        target = io.StringIO() if fh is None else fh
        w = csv.writer(target, lineterminator="\n")
        w.writerow(["u", "v", "answer"])
        for (u, v), a in sorted(self._cache.items()):
            w.writerow([u, v, a])
        return target.getvalue() if fh is None else None


class ReplayOracle(Oracle):
    """Oracle reconstructed from a dump; pairs absent from the dump are an error."""

    def __init__(self, truth: Clustering, answers: dict[tuple[int, int], int], p: float = 0.0,
                 q: float | None = None):
        super().__init__(truth, p, q, seed=0)
        self._answers = {((u, v) if u < v else (v, u)): int(a) for (u, v), a in answers.items()}

    @classmethod
    def from_csv(cls, truth: Clustering, fh: TextIO, p: float = 0.0, q: float | None = None):
        rows = csv.DictReader(fh)
        answers = {(int(r["u"]), int(r["v"])): int(r["answer"]) for r in rows}
        return cls(truth, answers, p, q)

    def answer(self, u: int, v: int) -> int:
        key = self._check(int(u), int(v))
        try:
            return self._answers[key]
        except KeyError:
            raise InvalidInput(f"pair {key} not present in replay dump") from None

    def answers_many(self, us, vs) -> np.ndarray:
        return np.array([self.answer(u, v) for u, v in zip(np.ravel(us), np.ravel(vs))],
                        dtype=np.int8)


def build_oracle(truth: Clustering, p: float, q: float | None = None, seed: int = 0) -> Oracle:
    return Oracle(truth, p, q, seed)


def query(o: Oracle, u: int, v: int) -> int:
    return o.query(u, v)


def query_stats(o: Oracle) -> QueryStats:
    return o.stats
