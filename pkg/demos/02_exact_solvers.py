"""
Exact references on small graphs
================================

The ML partition maximizes total intra-cluster weight over all set
partitions; the heaviest subgraph maximizes the weight of a single subset.
"""
import numpy as np

from qcluster import (Oracle, WeightedPairGraph, heaviest_subgraph, heaviest_subgraph_enum,
                      ml_partition_exact, partition_from_labels, partition_objective)

truth = partition_from_labels([0, 0, 0, 0, 1, 1, 1, 2, 2, 2])
o = Oracle(truth, p=0.2, seed=3)
g = WeightedPairGraph.from_oracle(o, range(truth.n))   # all 45 pairs

# at this noise level the likelihood can prefer a partition other than the truth
ml = ml_partition_exact(g)
print("truth     ", truth.to_list(), partition_objective(g, truth.labels))
print("ML        ", ml.to_list(), partition_objective(g, ml.labels))

S, w = heaviest_subgraph(g)
print("heaviest subgraph", sorted(S), "weight", w)
print("enumeration agrees:", heaviest_subgraph_enum(g) == (S, w))

# a planted clique inside 22 random vertices
rng = np.random.default_rng(0)
m = np.where(rng.random((22, 22)) < 0.3, 1, -1).astype(np.int8)
m = np.triu(m, 1)
m = m + m.T
clique = [2, 5, 8, 11, 14, 17, 20]
m[np.ix_(clique, clique)] = 1
np.fill_diagonal(m, 0)
# vertices with enough +1 edges into the clique may join it
S, w = heaviest_subgraph(WeightedPairGraph(range(22), m))
print("planted", clique, "found", sorted(S))
