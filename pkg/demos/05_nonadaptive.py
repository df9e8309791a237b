"""
Non-adaptive querying
=====================

Every query is chosen before any answer arrives: a seeded sample V' and
all pairs touching it.  The list can be produced without an oracle.
"""
from qcluster import (AlgoConfig, Oracle, nonadaptive_pairs, partition_from_labels,
                      run_nonadaptive_general, run_nonadaptive_k2)
from qcluster.harness import gen_ground_truth

n, p = 500, 0.1
cfg = AlgoConfig(alpha=0.03, seed=11)
sample, pairs = nonadaptive_pairs("nonadaptive_k2", n, p, cfg)
print(f"dry run: |V'| = {sample.size}, {len(pairs)} pairs fixed up front")

truth = gen_ground_truth(n, 2, "balanced", seed=2)
o = Oracle(truth, p, seed=2)
res = run_nonadaptive_k2(o, n, p, cfg)
print("k=2 exact:", res.clustering == truth,
      " log equals dry run:", o.queried_pairs() == [tuple(r) for r in pairs.tolist()])

# general k with a size ratio R
truth = gen_ground_truth(600, 3, "ratio:2", seed=4)
o = Oracle(truth, p, seed=4)
res = run_nonadaptive_general(o, 600, 3, 2.0, p, "efficient", AlgoConfig(alpha=0.005, seed=4))
print("k=3, R=2 exact:", res.clustering == truth, " sizes:", truth.sizes())

# tiny clusters escape a small fixed sample
truth = partition_from_labels([0] * 160 + [1 + i // 4 for i in range(40)])
res = run_nonadaptive_general(Oracle(truth, 0.0), 200, 11, 40.0, 0.0, "efficient",
                              AlgoConfig(alpha=3e-6, seed=0))
print(f"ten clusters of 4 with {res.stats.distinct_pairs} queries (< n^2/16 = 2500):",
      f"{len(res.unclustered)} vertices left unclustered")
