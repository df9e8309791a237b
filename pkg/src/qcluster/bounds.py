"""Bernoulli divergences and reference lower-bound values (natural log).

Infinity (``math.inf``) is returned, not raised, when a divergence is
unbounded or the oracle is uninformative, so sweep tables can hold it.
"""
from __future__ import annotations

import math
from typing import NamedTuple

from .errors import InvalidInput

__all__ = [
    "kl_bernoulli",
    "js_bernoulli",
    "js_symmetric_closed_form",
    "AdaptiveBound",
    "adaptive_query_lower_bound",
    "nonadaptive_query_lower_bound",
    "sbm_feasibility",
    "sbm_rhs",
]


def _check_prob(name: str, x: float) -> None:
    if not 0.0 <= x <= 1.0 or math.isnan(x):
        raise InvalidInput(f"{name}={x} is not a probability")


def kl_bernoulli(p: float, q: float) -> float:
    """``D(Ber(p) || Ber(q))`` in nats, with ``0 ln 0 = 0``."""
    _check_prob("p", p)
    _check_prob("q", q)
    if p == q:
        return 0.0
    total = 0.0
    if p > 0.0:
        if q == 0.0:
            return math.inf
        total += p * math.log(p / q)
    if p < 1.0:
        if q == 1.0:
            return math.inf
        total += (1.0 - p) * math.log((1.0 - p) / (1.0 - q))
    return max(total, 0.0)


def js_bernoulli(p: float, q: float) -> float:
    """Symmetrized divergence ``(D(p||q) + D(q||p)) / 2``."""
    return 0.5 * (kl_bernoulli(p, q) + kl_bernoulli(q, p))


def js_symmetric_closed_form(p: float) -> float:
    """``(1-2p) ln((1-p)/p)``, the symmetrized divergence between ``p`` and ``1-p``."""
    if not 0.0 < p < 1.0:
        raise InvalidInput("p must lie in (0, 1)")
    return (1.0 - 2.0 * p) * math.log((1.0 - p) / p)


class AdaptiveBound(NamedTuple):
    js_form: float   # n k / Delta(p||q)
    kl_form: float   # n k / min(D(p||q), D(q||p))


def adaptive_query_lower_bound(n: int, k: int, p: float, q: float) -> AdaptiveBound:
    """Constant-free adaptive lower-bound reference values."""
    delta = js_bernoulli(p, q)
    dmin = min(kl_bernoulli(p, q), kl_bernoulli(q, p))
    nk = float(n) * k
    return AdaptiveBound(nk / delta if delta > 0 else math.inf,
                         nk / dmin if dmin > 0 else math.inf)


def nonadaptive_query_lower_bound(n: int, k: int, p: float, q: float) -> float:
    """``n k ln n / (D(p||q) + D(q||p))``."""
    total = kl_bernoulli(p, q) + kl_bernoulli(q, p)
    if total == 0.0:
        return math.inf
    return n * k * math.log(n) / total


def sbm_rhs(k: int, n: int, Q: float) -> float:
    """``(n/2) sqrt(k/Q)``: separation that ``sqrt(a) - sqrt(b)`` must reach."""
    return 0.5 * n * math.sqrt(k / Q)


def sbm_feasibility(a: float, b: float, k: int, n: int, Q: float) -> bool:
    """False when ``sqrt(a) - sqrt(b) < (n/2) sqrt(k/Q)`` rules recovery out.

    Uses the simplified condition that drops the ``ab log n / n`` correction.
    """
    if not a >= b >= 0:
        raise InvalidInput("need a >= b >= 0")
    if Q < 1:
        raise InvalidInput("Q must be at least 1")
    if a == b:
        return False
    return math.sqrt(a) - math.sqrt(b) >= sbm_rhs(k, n, Q)
