"""
A seeded faulty oracle
======================

Answers are a pure function of (seed, pair), cached on first use, and
counted two ways: distinct pairs (the cost) and total calls (waste).
"""
import io

import numpy as np

from qcluster import Oracle, ReplayOracle, partition_from_labels

truth = partition_from_labels([0] * 50 + [1] * 50)
o = Oracle(truth, p=0.2, seed=7)

print("query(3, 5) =", o.query(3, 5), " query(5, 3) =", o.query(5, 3))
print("stats after a repeat:", o.stats)

# flip rate on fresh same-cluster pairs of a larger truth
big = Oracle(partition_from_labels([0] * 20_000), p=0.2, seed=7)
us = np.arange(0, 20_000, 2)
same = big.answers_many(us, us + 1)
print(f"same-cluster -1 rate on {us.size} pairs: {(same == -1).mean():.2f} (p = 0.2)")

# the order of queries does not matter
a, b = Oracle(truth, 0.2, seed=7), Oracle(truth, 0.2, seed=7)
iu, ju = np.triu_indices(100, 1)
a.query_many(iu, ju)
b.query_many(ju[::-1], iu[::-1])
print("dumps identical across query orders:", a.dump_csv() == b.dump_csv())

# a dump can stand in for the oracle later
replay = ReplayOracle.from_csv(truth, io.StringIO(a.dump_csv()))
print("replayed answer equals original:", replay.query(10, 60) == a.query(10, 60))
