"""Tuning surface shared by every algorithm, and the common run result."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .core import Clustering
from .errors import InvalidInput
from .mlcore import ML_CAP, SUBGRAPH_CAP
from .oracle import QueryStats

__all__ = ["AlgoConfig", "RunResult", "log", "separation"]


def log(x: float) -> float:
    """The one logarithm used for every ``log n`` in the thresholds (natural)."""
    return math.log(x)


def separation(p: float) -> float:
    """``1 - 2p``; positive for every admissible error rate."""
    if not 0.0 <= p < 0.5:
        raise InvalidInput(f"p={p} must lie in [0, 0.5)")
    return 1.0 - 2.0 * p


@dataclass(frozen=True)
class AlgoConfig:
    """Constant multipliers and solver limits.

    ``alpha`` scales every size constant (the subgraph threshold, batch and
    sample sizes, minimum output cluster size) and the ``log n`` inside the
    concentration slack of the batch thresholds.  ``probe_alpha`` scales only
    the number of members a candidate is tested against in majority votes;
    it defaults to ``alpha``.
    """

    alpha: float = 1.0
    probe_alpha: float | None = None
    ml_cap: int = ML_CAP
    subgraph_cap: int = SUBGRAPH_CAP
    residual_fallback: bool = False
    ml_fallback: bool = False
    seed: int = 0
    solver: str = "bnb"

    def __post_init__(self):
        if not self.alpha > 0:
            raise InvalidInput("alpha must be positive")
        if self.probe_alpha is not None and not self.probe_alpha > 0:
            raise InvalidInput("probe_alpha must be positive")

    @property
    def probe_scale(self) -> float:
        return self.alpha if self.probe_alpha is None else self.probe_alpha


@dataclass
class RunResult:
    algorithm: str
    clustering: Clustering
    stats: QueryStats
    active: list[frozenset[int]] = field(default_factory=list)
    residual: list[frozenset[int]] = field(default_factory=list)
    unclustered: list[int] = field(default_factory=list)
    size_threshold: float = 0.0
    rounds: int = 0
    phase_log: list[tuple[str, str]] = field(default_factory=list)

    def phase_log_json(self) -> str:
        return json.dumps([list(e) for e in self.phase_log])
