"""Fairness and privacy audits built on the sublinear estimators.

Fairness: demographic-parity disparity is the largest pairwise W_1 between
per-group score distributions. Privacy: TV and hockey-stick divergences at
``tau = exp(alpha)`` between loss distributions with and without a target
record, plus the ``(1 + e^alpha) * epsilon`` slack that converts a summary-level
divergence into a bound on the true one.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .distances import hockey_stick, tv
from .errors import ConfigError, DataError
from .estimators import EstimatePlan, EstimatorConfig, plan_tv, stva, swa
from .streams import split_sources


@dataclass
class AuditReport:
    kind: str
    pairwise: Dict[Tuple[str, str], float]
    maximum: float
    plan: EstimatePlan
    group_counts: Dict[str, int]
    assigned_buckets: Dict[str, int] = field(default_factory=dict)
    hockey_stick: Dict[float, float] = field(default_factory=dict)
    correction: Dict[float, float] = field(default_factory=dict)
    tv: Optional[float] = None
    below_threshold: bool = False

    @property
    def sublinearity(self) -> float:
        return self.plan.counters / max(self.group_counts.values())

    def as_dict(self) -> dict:
        out = {
            "kind": self.kind,
            "pairwise": {f"{a}|{b}": v for (a, b), v in self.pairwise.items()},
            "maximum": self.maximum,
            "plan": {"bucket_width": self.plan.bucket_width, "counters": self.plan.counters, "n_min": self.plan.n_min},
            "group_counts": self.group_counts,
            "assigned_buckets": self.assigned_buckets,
            "sublinearity": self.sublinearity,
            "below_threshold": self.below_threshold,
        }
        if self.kind == "privacy":
            out["tv"] = self.tv
            out["hockey_stick"] = {str(a): v for a, v in self.hockey_stick.items()}
            out["correction"] = {str(a): v for a, v in self.correction.items()}
        return out


def _sources(xs, sources: int):
    return split_sources(xs, min(sources, len(xs))) if sources > 1 else [xs]


def audit_fairness(groups: Mapping[str, Sequence[float]], cfg: EstimatorConfig, *, bucket_width: Optional[float] = None,
                   counters: Optional[int] = None, sources: int = 1) -> AuditReport:
    """Pairwise W_1 between every pair of groups and their maximum."""
    if len(groups) < 2:
        raise ConfigError("fairness audit needs at least two groups")
    for g, xs in groups.items():
        if len(xs) == 0:
            raise DataError(f"group {g!r} has no samples")
    names = sorted(groups)
    pairwise = {}
    assigned = {}
    plan = None
    low = False
    for a, b in itertools.combinations(names, 2):
        rep = swa(_sources(groups[a], sources), _sources(groups[b], sources), cfg, 1.0,
                  bucket_width=bucket_width, counters=counters)
        pairwise[(a, b)] = rep.value
        assigned[a], assigned[b] = rep.assigned_a, rep.assigned_b
        plan = rep.plan
        low = low or rep.below_threshold
    return AuditReport("fairness", pairwise, max(pairwise.values()), plan,
                       {g: len(groups[g]) for g in names}, assigned, below_threshold=low)


def audit_privacy(losses_in: Sequence[float], losses_out: Sequence[float], cfg: EstimatorConfig,
                  alphas: Sequence[float] = (0.0,), *, bucket_width: Optional[float] = None,
                  counters: Optional[int] = None, sources: int = 1) -> AuditReport:
    """TV and hockey-stick divergences between IN and OUT loss distributions."""
    if len(losses_in) == 0 or len(losses_out) == 0:
        raise DataError("both loss streams must be non-empty")
    alphas = [float(a) for a in alphas]
    if any(not math.isfinite(a) or a < 0 for a in alphas):
        raise ConfigError("alphas must be finite and >= 0")
    rep = stva(_sources(losses_in, sources), _sources(losses_out, sources), cfg,
               bucket_width=bucket_width, counters=counters)
    s_in, s_out = rep.summaries
    tv_value = tv(s_in, s_out)
    hs = {a: hockey_stick(s_in, s_out, math.exp(a)) for a in alphas}
    corr = {a: (1.0 + math.exp(a)) * cfg.epsilon for a in alphas}
    return AuditReport("privacy", {("in", "out"): tv_value}, tv_value, rep.plan,
                       {"in": rep.n_a, "out": rep.n_b}, {"in": rep.assigned_a, "out": rep.assigned_b},
                       hockey_stick=hs, correction=corr, tv=tv_value, below_threshold=rep.below_threshold)
