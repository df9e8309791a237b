"""Ground truths, recovery metrics, single trials and parameter sweeps.

Sweep output is tidy CSV (or JSON with the same fields).  Trial ``i`` of a
sweep uses seed ``base_seed + i``; the truth, oracle and algorithm streams
are split from it with :class:`numpy.random.SeedSequence`, so adding trials
never perturbs earlier ones and all cells of one trial index share truth
and oracle randomness.
"""
from __future__ import annotations

import csv
import io
import itertools
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields

import numpy as np

from .adaptive_eff import eff_params, run_efficient_known_k, run_efficient_unknown_k
from .adaptive_opt import recovery_threshold, run_info_optimal
from .bounds import adaptive_query_lower_bound, nonadaptive_query_lower_bound
from .config import AlgoConfig, RunResult
from .core import Clustering
from .errors import InstanceTooLarge, InvalidInput
from .mlcore import WeightedPairGraph, ml_partition_exact
from .nonadaptive import run_nonadaptive_general, run_nonadaptive_k2
from .oracle import Oracle

__all__ = [
    "ALGORITHMS",
    "SCHEMA",
    "Metrics",
    "TrialRecord",
    "parse_shape",
    "gen_ground_truth",
    "true_ratio",
    "compare",
    "pairwise_error",
    "derive_seeds",
    "run_algorithm",
    "run_trial",
    "SweepSpec",
    "sweep",
    "records_to_csv",
    "records_to_json",
]

SCHEMA = "qcluster.trial.v1"
ALGORITHMS = (
    "info_optimal",
    "efficient_known_k",
    "efficient_unknown_k",
    "nonadaptive_k2",
    "nonadaptive_general",
    "full_query_ml",
)


# ------------------------------------------------------------ ground truth

def parse_shape(shape) -> tuple:
    """Accept ``"balanced"``, ``"ratio:R"``, ``"sizes:a,b,..."`` or the tuple forms."""
    if isinstance(shape, tuple):
        return shape
    if shape == "balanced":
        return ("balanced",)
    kind, _, arg = str(shape).partition(":")
    try:
        if kind == "ratio":
            return ("ratio", float(arg))
        if kind == "sizes":
            return ("sizes", [int(x) for x in arg.split(",") if x])
    except ValueError:
        pass
    raise InvalidInput(f"cannot parse shape {shape!r}")


def _shape_sizes(n: int, k: int, shape: tuple) -> list[int]:
    kind = shape[0]
    if kind == "balanced":
        base, extra = divmod(n, k)
        return [base + (i < extra) for i in range(k)]
    if kind == "ratio":
        R = float(shape[1])
        if R < 1:
            raise InvalidInput("ratio must be at least 1")
        if k == 1:
            return [n]
        small = int(n // (R + k - 1))
        if small < 1:
            raise InvalidInput(f"ratio {R} infeasible for n={n}, k={k}")
        return [n - (k - 1) * small] + [small] * (k - 1)
    if kind == "sizes":
        sizes = [int(s) for s in shape[1]]
        if sum(sizes) != n or min(sizes) < 1:
            raise InvalidInput(f"sizes {sizes} must be positive and sum to n={n}")
        if len(sizes) != k:
            raise InvalidInput(f"{len(sizes)} sizes given for k={k}")
        return sizes
    raise InvalidInput(f"unknown shape {shape!r}")


def gen_ground_truth(n: int, k: int, shape="balanced", seed: int = 0) -> Clustering:
    """Random ground truth with the requested cluster sizes.

    ``ratio`` makes one cluster ``R`` times the size of the other ``k-1``
    (up to integer rounding).  Elements are assigned through a seeded
    permutation so ids carry no cluster structure.
    """
    if not 1 <= k <= n:
        raise InvalidInput(f"need 1 <= k <= n, got k={k}, n={n}")
    sizes = _shape_sizes(n, k, parse_shape(shape))
    labels = np.repeat(np.arange(k), sizes)
    np.random.default_rng(seed).shuffle(labels)
    return Clustering(labels)


def true_ratio(truth: Clustering) -> float:
    sizes = truth.sizes()
    return max(sizes) / min(sizes)


# ------------------------------------------------------------------ metrics

@dataclass(frozen=True)
class Metrics:
    exact_match: bool
    recovered_large: int
    qualifying: int
    pairwise_error: float


def pairwise_error(truth: Clustering, estimate: Clustering) -> float:
    """Fraction of element pairs whose same/different relation is wrong."""
    n = truth.n
    if estimate.n != n:
        raise InvalidInput(f"mismatched n ({n} vs {estimate.n})")
    if n < 2:
        return 0.0
    a = truth.labels.astype(np.int64)
    b = estimate.labels.astype(np.int64)
    joint = np.unique(a * (b.max() + 1) + b, return_counts=True)[1]
    pairs = lambda c: int((c * (c - 1) // 2).sum())  # noqa: E731
    same_t = pairs(np.bincount(a))
    same_e = pairs(np.bincount(b))
    both = pairs(joint)
    return (same_t + same_e - 2 * both) / (n * (n - 1) / 2)


def compare(truth: Clustering, estimate: Clustering, min_size: float = 1) -> Metrics:
    """Exact match, truth clusters of size >= ``min_size`` present verbatim, pair error."""
    if truth.n != estimate.n:
        raise InvalidInput(f"mismatched n ({truth.n} vs {estimate.n})")
    blocks = set(estimate.clusters)
    big = [c for c in truth.clusters if len(c) >= min_size]
    return Metrics(truth == estimate, sum(1 for c in big if c in blocks), len(big),
                   pairwise_error(truth, estimate))


# -------------------------------------------------------------------- trials

@dataclass
class TrialRecord:
    n: int
    k: int
    p: float
    q: float
    algorithm: str
    alpha: float
    probe_alpha: float
    seed: int
    distinct_pairs: int
    total_calls: int
    exact_match: bool
    recovered_large: int
    qualifying: int
    size_threshold: float
    pairwise_error: float
    rounds: int
    wall_time_ms: float | None = None
    error: str = ""


def derive_seeds(seed: int) -> tuple[int, int, int]:
    """Independent (truth, oracle, algorithm) seeds split from one trial seed."""
    a, b, c = np.random.SeedSequence(seed).generate_state(3, dtype=np.uint64)
    return int(a), int(b), int(c)


def _full_query_ml(o: Oracle, n: int, cfg: AlgoConfig) -> RunResult:
    if n > cfg.ml_cap:
        raise InstanceTooLarge(f"full_query_ml limited to n <= {cfg.ml_cap}")
    g = WeightedPairGraph.from_oracle(o, range(n))
    part = ml_partition_exact(g, cfg.ml_cap)
    return RunResult("full_query_ml", part, o.stats, [], list(part.clusters), [], 1.0, 0,
                     [("ml", f"all {n * (n - 1) // 2} pairs")])


def run_algorithm(algorithm: str, o: Oracle, truth: Clustering, p: float,
                  cfg: AlgoConfig, ratio: float | None = None,
                  mode: str = "efficient") -> RunResult:
    """Dispatch by name; ``k`` (and ``R`` when not given) are read off the truth."""
    n, k = truth.n, truth.k
    if algorithm == "info_optimal":
        return run_info_optimal(o, n, p, cfg)
    if algorithm == "efficient_known_k":
        return run_efficient_known_k(o, n, k, p, cfg)
    if algorithm == "efficient_unknown_k":
        return run_efficient_unknown_k(o, n, p, cfg)
    if algorithm == "nonadaptive_k2":
        return run_nonadaptive_k2(o, n, p, cfg)
    if algorithm == "nonadaptive_general":
        R = true_ratio(truth) if ratio is None else ratio
        return run_nonadaptive_general(o, n, k, R, p, mode, cfg)
    if algorithm == "full_query_ml":
        return _full_query_ml(o, n, cfg)
    raise InvalidInput(f"unknown algorithm {algorithm!r}; expected one of {ALGORITHMS}")


def run_trial(truth: Clustering, algorithm: str, p: float, q: float | None = None,
              alpha: float = 1.0, seed: int = 0, *, probe_alpha: float | None = None,
              cfg: AlgoConfig | None = None, ratio: float | None = None,
              mode: str = "efficient", timing: bool = True) -> tuple[TrialRecord, RunResult]:
    """One oracle, one algorithm run, one record.  The oracle is built fresh."""
    _, oracle_seed, algo_seed = derive_seeds(seed)
    q = p if q is None else q
    base = cfg or AlgoConfig()
    cfg = AlgoConfig(**{**asdict(base), "alpha": alpha, "seed": algo_seed,
                        "probe_alpha": probe_alpha if probe_alpha is not None else base.probe_alpha})
    o = Oracle(truth, p, q, oracle_seed)
    t0 = time.perf_counter()
    res = run_algorithm(algorithm, o, truth, p, cfg, ratio, mode)
    wall = (time.perf_counter() - t0) * 1e3
    m = compare(truth, res.clustering, res.size_threshold)
    rec = TrialRecord(truth.n, truth.k, p, q, algorithm, alpha, cfg.probe_scale, seed,
                      res.stats.distinct_pairs, res.stats.total_calls, m.exact_match,
                      m.recovered_large, m.qualifying, float(res.size_threshold),
                      m.pairwise_error, res.rounds, round(wall, 3) if timing else None)
    return rec, res


# -------------------------------------------------------------------- sweeps

@dataclass
class SweepSpec:
    n: list[int]
    k: list[int]
    p: list[float]
    algorithms: list[str]
    alphas: list[float]
    trials: int = 1
    base_seed: int = 0
    q: list[float] | None = None
    probe_alpha: float | None = None
    shape: str = "balanced"
    mode: str = "efficient"
    bounds: bool = False
    workers: int = 1
    record_timing: bool = False
    residual_fallback: bool = True
    ml_fallback: bool = False

    @classmethod
    def from_dict(cls, d: dict) -> SweepSpec:
        known = {f.name for f in fields(cls)}
        extra = set(d) - known
        if extra:
            raise InvalidInput(f"unknown sweep keys: {sorted(extra)}")
        spec = cls(**d)
        for name in ("n", "k", "p", "algorithms", "alphas"):
            if not getattr(spec, name):
                raise InvalidInput(f"sweep grid axis {name!r} is empty")
        for a in spec.algorithms:
            if a not in ALGORITHMS:
                raise InvalidInput(f"unknown algorithm {a!r}")
        if spec.trials < 1:
            raise InvalidInput("trials must be at least 1")
        return spec

    @classmethod
    def from_json(cls, text: str) -> SweepSpec:
        return cls.from_dict(json.loads(text))

    def cells(self) -> list[tuple]:
        qs = self.q if self.q else [None]
        return list(itertools.product(self.n, self.k, self.p, qs, self.algorithms, self.alphas))


def _run_cell_trial(task) -> tuple[int, int, dict]:
    ci, ti, cell, spec = task
    n, k, p, q, algo, alpha = cell
    seed = spec.base_seed + ti
    truth_seed = derive_seeds(seed)[0]
    cfg = AlgoConfig(residual_fallback=spec.residual_fallback, ml_fallback=spec.ml_fallback)
    try:
        truth = gen_ground_truth(n, k, spec.shape, truth_seed)
        rec, _ = run_trial(truth, algo, p, q, alpha, seed, probe_alpha=spec.probe_alpha,
                           cfg=cfg, mode=spec.mode, timing=spec.record_timing)
        row = asdict(rec)
    except (InvalidInput, InstanceTooLarge) as exc:
        row = asdict(TrialRecord(n, k, p, p if q is None else q, algo, alpha,
                                 spec.probe_alpha or alpha, seed, 0, 0, False, 0, 0, 0.0,
                                 math.nan, 0, None, f"{type(exc).__name__}: {exc}"))
    if spec.bounds:
        # P(+1) on a cross pair against P(+1) on a same pair
        lo, hi = (p if q is None else q), 1.0 - p
        lb = adaptive_query_lower_bound(n, k, lo, hi)
        row["lb_adaptive_js"] = lb.js_form
        row["lb_adaptive_kl"] = lb.kl_form
        row["lb_nonadaptive"] = nonadaptive_query_lower_bound(n, k, lo, hi)
        cfg_b = AlgoConfig(alpha=alpha, probe_alpha=spec.probe_alpha)
        row["eff_batch_N"] = eff_params(n, k, p, cfg_b).N
        row["recovery_threshold"] = recovery_threshold(p, n, cfg_b)
    return ci, ti, row


def sweep(spec: SweepSpec) -> list[dict]:
    """Run every (cell, trial) and return rows sorted by (cell, trial)."""
    tasks = [(ci, ti, cell, spec) for ci, cell in enumerate(spec.cells())
             for ti in range(spec.trials)]
    if spec.workers > 1:
        with ProcessPoolExecutor(max_workers=spec.workers) as pool:
            out = list(pool.map(_run_cell_trial, tasks, chunksize=1))
    else:
        out = [_run_cell_trial(t) for t in tasks]
    out.sort(key=lambda r: (r[0], r[1]))
    return [{"schema": SCHEMA, "cell": ci, "trial": ti, **row} for ci, ti, row in out]


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def records_to_csv(rows: list[dict]) -> str:
    if not rows:
        return ""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    header = list(rows[0])
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt(r.get(h)) for h in header])
    return buf.getvalue()


def records_to_json(rows: list[dict]) -> str:
    def clean(v):
        if isinstance(v, float) and not math.isfinite(v):
            return None if math.isnan(v) else ("inf" if v > 0 else "-inf")
        return v
    return json.dumps([{k: clean(v) for k, v in r.items()} for r in rows], indent=1)
