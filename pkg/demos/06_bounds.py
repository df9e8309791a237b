"""
Divergences and reference lower bounds
======================================
"""
import math

from qcluster import (adaptive_query_lower_bound, js_bernoulli, js_symmetric_closed_form,
                      kl_bernoulli, nonadaptive_query_lower_bound, sbm_feasibility)

print("D(0.25 || 0.75) =", round(kl_bernoulli(0.25, 0.75), 6))
print("symmetric closed form at p=0.25:", js_symmetric_closed_form(0.25), js_bernoulli(0.25, 0.75))

n, k = 1000, 10
lb = adaptive_query_lower_bound(n, k, 0.25, 0.75)
print(f"adaptive   nk/Delta = {lb.js_form:.1f}, nk/min D = {lb.kl_form:.1f}")
print(f"non-adaptive        = {nonadaptive_query_lower_bound(n, k, 0.25, 0.75):.1f}")

print("noisier oracles need more queries:")
for p in (0.05, 0.1, 0.2, 0.3, 0.4):
    print(f"  p={p:.2f}  {adaptive_query_lower_bound(n, k, p, 1 - p).js_form:12.1f}")

Q = math.comb(1000, 2)
print("SBM a=9, b=1 fully observed:", sbm_feasibility(9, 1, 2, 1000, Q))
print("SBM a=9, b=1, Q=1000:      ", sbm_feasibility(9, 1, 2, 1000, 1000))
