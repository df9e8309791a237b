"""
Polynomial-time clustering, known and unknown k
===============================================

A batch is fully queried; vertices with similar +1 neighbourhoods are
linked; groups grow by majority vote.  Without k, the guess doubles until a
batch shows a large enough cluster.
"""
from qcluster import AlgoConfig, Oracle, efficient_budget, run_efficient_known_k, run_efficient_unknown_k
from qcluster.harness import gen_ground_truth

n, k, p = 400, 4, 0.1
truth = gen_ground_truth(n, k, "balanced", seed=5)

cfg = AlgoConfig(alpha=0.02, probe_alpha=0.12)
o = Oracle(truth, p, seed=5)
res = run_efficient_known_k(o, n, k, p, cfg)
print("known k   exact:", res.clustering == truth, " pairs:", o.stats.distinct_pairs,
      f" ceiling: {efficient_budget(n, k, p, cfg):.0f}")

o = Oracle(truth, p, seed=5)
res = run_efficient_unknown_k(o, n, p, AlgoConfig(alpha=0.02, probe_alpha=0.12, seed=5))
print("unknown k exact:", res.clustering == truth, " pairs:", o.stats.distinct_pairs,
      " guesses until first cluster:", res.rounds)
for phase, event in res.phase_log:
    if phase == "guess":
        print("  ", event)
