"""Acceptance gate: ten criteria at their stated tolerances.

Run with ``pytest tests/test_acceptance.py``; a summary with one PASS/FAIL
line per criterion is printed at the end.  Desk-scale constant multipliers
(``alpha``, ``probe_alpha``) are fixed below and were chosen by the sweeps
recorded alongside the project notes.
"""
from __future__ import annotations

import math
import time

import numpy as np
import pytest

from conftest import ml_reference_dfs, random_graph
from qcluster.adaptive_eff import efficient_budget
from qcluster.adaptive_opt import info_optimal_budget
from qcluster.bounds import (adaptive_query_lower_bound, js_bernoulli, js_symmetric_closed_form,
                             nonadaptive_query_lower_bound, sbm_feasibility)
from qcluster.config import AlgoConfig
from qcluster.core import partition_from_labels
from qcluster.harness import SweepSpec, derive_seeds, gen_ground_truth, run_trial, sweep
from qcluster.mlcore import (WeightedPairGraph, heaviest_subgraph_bnb, heaviest_subgraph_enum,
                             ml_partition_exact, partition_objective)
from qcluster.nonadaptive import (nonadaptive_pairs, run_nonadaptive_general, run_nonadaptive_k2)
from qcluster.oracle import Oracle

P = 0.1
# criterion 6 / 7 (efficient): n = 400, k = 4
EFF_ALPHA, EFF_PROBE = 0.02, 0.12
# criterion 7 (info_optimal): n = 200, k = 3
INFO_ALPHA, INFO_PROBE = 0.06, 0.12
# criterion 8: k = 3, n in {100, 200, 400, 800}
SCALE_ALPHA = 0.01
# criterion 9: k = 2, n = 500
K2_ALPHA = 0.03


def test_c01_ml_oracle_equivalence(report):
    rng = np.random.default_rng(101)
    t0 = time.perf_counter()
    agree = 0
    for i in range(200):
        n = int(rng.integers(2, 11))
        k = int(rng.integers(1, min(3, n) + 1))
        p = float(rng.choice([0.1, 0.2, 0.3]))
        truth = gen_ground_truth(n, k, "balanced", i)
        o = Oracle(truth, p, seed=i)
        g = WeightedPairGraph.from_oracle(o, range(n))
        got = ml_partition_exact(g)
        best, labels = ml_reference_dfs(g.matrix)
        agree += partition_objective(g, got.labels) == best and got.to_list() == labels
    elapsed = time.perf_counter() - t0
    ok = report(1, agree == 200 and elapsed < 60, f"{agree}/200 agree, {elapsed:.1f}s")
    assert ok


def test_c02_subgraph_bnb_vs_enum(report):
    rng = np.random.default_rng(202)
    t0 = time.perf_counter()
    agree = 0
    for _ in range(500):
        g = random_graph(rng, int(rng.integers(1, 17)), plus=float(rng.uniform(0.2, 0.8)))
        agree += heaviest_subgraph_bnb(g) == heaviest_subgraph_enum(g)
    elapsed = time.perf_counter() - t0
    ok = report(2, agree == 500 and elapsed < 60, f"{agree}/500 agree, {elapsed:.1f}s")
    assert ok


NOISELESS = {
    "info_optimal": (0.05, (90, 200), (2, 3)),
    "efficient_known_k": (0.02, (100, 300), (2, 4)),
    "efficient_unknown_k": (0.02, (100, 300), (2, 4)),
    "nonadaptive_k2": (0.05, (100, 300), (2, 2)),
    "nonadaptive_general": (0.01, (100, 300), (2, 3)),
    "full_query_ml": (1.0, (4, 12), (1, 3)),
}


def test_c03_noiseless_exactness(report):
    lines, all_ok = [], True
    for algo, (alpha, nr, kr) in NOISELESS.items():
        rng = np.random.default_rng(303)
        exact = qualifying = 0
        for i in range(50):
            n = int(rng.integers(nr[0], nr[1] + 1))
            k = min(n, int(rng.integers(kr[0], kr[1] + 1)))
            truth = gen_ground_truth(n, k, "balanced", i)
            rec, res = run_trial(truth, algo, 0.0, alpha=alpha, seed=i)
            if min(truth.sizes()) >= res.size_threshold:
                qualifying += 1
                exact += rec.exact_match
        all_ok &= exact == qualifying == 50
        lines.append(f"{algo} {exact}/{qualifying}")
    ok = report(3, all_ok, ", ".join(lines))
    assert ok


def test_c04_oracle_calibration(report):
    M, p = 10_000, 0.3
    half = M + 1
    truth = partition_from_labels([0] * half + [1] * half)
    o = Oracle(truth, p, p, seed=404)
    left = np.arange(0, M // 2) * 2
    same = np.concatenate([o.answers_many(left, left + 1), o.answers_many(left + half, left + half + 1)])
    cross = o.answers_many(np.arange(M), np.arange(M) + half)
    sigma = math.sqrt(p * (1 - p) / M)
    f_same, f_cross = (same == -1).mean(), (cross == 1).mean()
    calibrated = abs(f_same - p) <= 3 * sigma and abs(f_cross - p) <= 3 * sigma
    # replay: the same pairs queried in shuffled order and orientation
    us, vs = np.triu_indices(120, 1)
    a, b = Oracle(truth, p, p, 9), Oracle(truth, p, p, 9)
    a.query_many(us, vs)
    perm = np.random.default_rng(4).permutation(us.size)
    b.query_many(vs[perm], us[perm])
    identical = a.dump_csv() == b.dump_csv()
    ok = report(4, calibrated and identical,
                f"same-flip {f_same:.4f}, cross-flip {f_cross:.4f} (3 sigma {3 * sigma:.4f}), "
                f"replay identical={identical}")
    assert ok


def test_c05_neighbourhood_means(report):
    # u, v plus m = 2000 other vertices: a others in cluster A, b in B
    m, a, p, seeds = 2000, 1200, P, 200
    b = m - a
    q = 2 * p * (1 - p)
    others = np.arange(2, m + 2)
    # same: u, v both in A; cross: u in A, v in B
    same_truth = partition_from_labels([0, 0] + [0] * a + [1] * b)
    cross_truth = partition_from_labels([0, 1] + [0] * a + [1] * b)
    deg, sd_same, sd_cross = [], [], []
    for s in range(seeds):
        for truth, sink in ((same_truth, sd_same), (cross_truth, sd_cross)):
            o = Oracle(truth, p, seed=s)
            ru = o.answers_many(np.zeros(m, dtype=np.int64), others) > 0
            rv = o.answers_many(np.ones(m, dtype=np.int64), others) > 0
            sink.append(int((ru != rv).sum()))
            if truth is same_truth:
                deg.append(int(ru.sum()))
    checks = []
    # E|N+(u)| = p m + (1-2p)|C_u|, |C_u| = a
    mean_deg = p * m + (1 - 2 * p) * a
    var_deg = m * p * (1 - p)
    checks.append(("deg", np.mean(deg), mean_deg, var_deg))
    checks.append(("same", np.mean(sd_same), q * m, m * q * (1 - q)))
    dc = 1 - q
    mean_cross = q * m + (1 - 2 * p) ** 2 * (a + b)
    checks.append(("cross", np.mean(sd_cross), mean_cross, m * dc * (1 - dc)))
    ok_all, parts = True, []
    for name, got, want, var in checks:
        z = (got - want) / math.sqrt(var / seeds)
        ok_all &= abs(z) <= 3
        parts.append(f"{name} {got:.1f} vs {want:.1f} (z={z:+.2f})")
    ok = report(5, ok_all, ", ".join(parts))
    assert ok


@pytest.fixture(scope="module")
def c6_rows():
    spec = SweepSpec.from_dict({"n": [400], "k": [4], "p": [P],
                                "algorithms": ["efficient_known_k", "efficient_unknown_k"],
                                "alphas": [EFF_ALPHA], "probe_alpha": EFF_PROBE, "trials": 50,
                                "record_timing": True})
    t0 = time.perf_counter()
    rows = sweep(spec)
    return rows, time.perf_counter() - t0


def test_c06_scaled_recovery(c6_rows, report):
    rows, elapsed = c6_rows
    known = [r for r in rows if r["algorithm"] == "efficient_known_k"]
    unknown = [r for r in rows if r["algorithm"] == "efficient_unknown_k"]
    bound = math.ceil(math.log2(4)) + 1
    k_ok = sum(r["exact_match"] for r in known)
    u_ok = sum(r["exact_match"] and 1 <= r["rounds"] <= bound for r in unknown)
    ok = report(6, k_ok >= 45 and u_ok >= 45 and elapsed < 300,
                f"known-k exact {k_ok}/50, unknown-k exact within {bound} rounds {u_ok}/50, "
                f"{elapsed:.1f}s (alpha={EFF_ALPHA}, probe_alpha={EFF_PROBE})")
    assert ok


def test_c07_query_budgets(c6_rows, report):
    rows, _ = c6_rows
    cfg = AlgoConfig(alpha=EFF_ALPHA, probe_alpha=EFF_PROBE)
    eff_cap = efficient_budget(400, 4, P, cfg)
    eff_viol = sum(r["distinct_pairs"] > eff_cap for r in rows)
    eff_max = max(r["distinct_pairs"] for r in rows)
    info_cfg = AlgoConfig(alpha=INFO_ALPHA, probe_alpha=INFO_PROBE, residual_fallback=True)
    info_cap = info_optimal_budget(200, 3, P, info_cfg)
    info_viol = info_max = 0
    for s in range(50):
        truth = gen_ground_truth(200, 3, "balanced", s)
        rec, _ = run_trial(truth, "info_optimal", P, alpha=INFO_ALPHA, seed=s,
                           probe_alpha=INFO_PROBE, cfg=info_cfg)
        info_viol += rec.distinct_pairs > info_cap
        info_max = max(info_max, rec.distinct_pairs)
    ok = report(7, eff_viol == 0 and info_viol == 0,
                f"efficient {eff_viol} violations (max {eff_max} <= {eff_cap:.0f}), "
                f"info_optimal {info_viol} violations (max {info_max} <= {info_cap:.0f})")
    assert ok


def test_c08_query_scaling(report):
    ns = [100, 200, 400, 800]
    spec = SweepSpec.from_dict({"n": ns, "k": [3], "p": [P], "algorithms": ["efficient_known_k"],
                                "alphas": [SCALE_ALPHA], "probe_alpha": EFF_PROBE, "trials": 10})
    rows = sweep(spec)
    means = [np.mean([r["distinct_pairs"] for r in rows if r["n"] == n]) for n in ns]
    slope = np.polyfit(np.log(ns), np.log(means), 1)[0]
    ok = report(8, 0.9 <= slope <= 1.2,
                f"exponent {slope:.3f} (means {[int(m) for m in means]}, alpha={SCALE_ALPHA})")
    assert ok


def test_c09_non_adaptivity(report):
    matched = 0
    for s in range(20):
        for algo in ("nonadaptive_k2", "nonadaptive_general"):
            cfg = AlgoConfig(alpha=0.01 if algo == "nonadaptive_k2" else 0.002, seed=s)
            truth = gen_ground_truth(300, 3, "balanced", s)
            o = Oracle(truth, P, seed=s)
            if algo == "nonadaptive_k2":
                run_nonadaptive_k2(o, 300, P, cfg)
            else:
                run_nonadaptive_general(o, 300, 3, 1.0, P, "efficient", cfg)
            _, pairs = nonadaptive_pairs(algo, 300, P, cfg, k=3, R=1.0)
            matched += o.queried_pairs() == [tuple(r) for r in pairs.tolist()]
    exact = 0
    for s in range(50):
        truth = gen_ground_truth(500, 2, "balanced", derive_seeds(s)[0])
        rec, _ = run_trial(truth, "nonadaptive_k2", P, alpha=K2_ALPHA, seed=s)
        exact += rec.exact_match
    ok = report(9, matched == 40 and exact >= 45,
                f"dry-run lists match {matched}/40, k=2 recovery {exact}/50 (alpha={K2_ALPHA})")
    assert ok


def test_c10_bounds(report):
    grid = np.linspace(0.01, 0.49, 49)
    worst = max(abs(js_symmetric_closed_form(p) - js_bernoulli(p, 1 - p)) for p in grid)
    lb = adaptive_query_lower_bound(1000, 10, 0.25, 0.75).js_form
    na = nonadaptive_query_lower_bound(1000, 10, 0.25, 0.75)
    sig4 = abs(lb / 18_207 - 1) < 5e-4 and abs(na / 62_878 - 1) < 5e-4
    sbm = sbm_feasibility(9, 1, 2, 1000, math.comb(1000, 2)) and \
        not sbm_feasibility(4, 4, 2, 1000, math.comb(1000, 2))
    ok = report(10, worst <= 1e-12 and sig4 and sbm,
                f"closed form max err {worst:.1e}, nk/D={lb:.1f}, nonadaptive={na:.1f}, "
                f"sbm checks {sbm}")
    assert ok


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
