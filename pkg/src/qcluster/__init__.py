"""Clustering ``n`` elements from noisy same-cluster queries.

A seeded faulty oracle answers pair queries; adaptive and non-adaptive
algorithms recover the clustering from few queries; exact small-instance
maximum-likelihood solvers serve as references; the bounds module gives
divergence-based reference values; the harness runs sweeps.
"""
from __future__ import annotations

from .adaptive_eff import (EffParams, cluster_batch_by_symdiff, eff_params, efficient_budget,
                           run_efficient_known_k, run_efficient_unknown_k, size_estimates,
                           symdiff_matrix, threshold_T, threshold_theta)
from .adaptive_opt import (QueriedBatch, info_optimal_budget, majority_member_test, probe_size,
                           recovery_threshold, run_info_optimal, threshold_c)
from .bounds import (AdaptiveBound, adaptive_query_lower_bound, js_bernoulli,
                     js_symmetric_closed_form, kl_bernoulli, nonadaptive_query_lower_bound,
                     sbm_feasibility, sbm_rhs)
from .config import AlgoConfig, RunResult
from .core import (Clustering, is_balanced, partition_from_clusters, partition_from_labels,
                   partitions_equal)
from .errors import (IncompleteGraph, InstanceTooLarge, InvalidErrorRate, InvalidInput,
                     ResidualTooLarge, SelfQuery)
from .harness import (Metrics, SweepSpec, TrialRecord, compare, gen_ground_truth,
                      pairwise_error, run_trial, sweep)
from .mlcore import (WeightedPairGraph, heaviest_subgraph, heaviest_subgraph_bnb,
                     heaviest_subgraph_enum, ml_blocks, ml_partition_exact, partition_objective)
from .nonadaptive import (nonadaptive_budget, nonadaptive_pairs, run_nonadaptive_general,
                          run_nonadaptive_k2, sample_size)
from .oracle import Oracle, QueryStats, ReplayOracle, build_oracle, query, query_stats

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
