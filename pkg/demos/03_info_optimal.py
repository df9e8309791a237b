"""
Adaptive clustering with heaviest subgraphs
===========================================

The unscaled constant makes the size threshold exceed n here, so alpha
scales it down; probe_alpha keeps the majority votes long enough to be
reliable.
"""
from qcluster import AlgoConfig, Oracle, info_optimal_budget, run_info_optimal, threshold_c
from qcluster.harness import gen_ground_truth

n, k, p = 200, 3, 0.1
print("unscaled threshold:", threshold_c(p, n), "for n =", n)

cfg = AlgoConfig(alpha=0.06, probe_alpha=0.12, residual_fallback=True)
truth = gen_ground_truth(n, k, "balanced", seed=1)
o = Oracle(truth, p, seed=1)
res = run_info_optimal(o, n, p, cfg)

for phase, event in res.phase_log[:6]:
    print(f"  {phase:7s} {event}")
print("  ...")
print("exact recovery:", res.clustering == truth)
print(f"distinct pairs {o.stats.distinct_pairs} of {n * (n - 1) // 2}, "
      f"scaled ceiling {info_optimal_budget(n, k, p, cfg):.0f}")
