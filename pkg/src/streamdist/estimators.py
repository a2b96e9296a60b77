"""Parameter planning and the end-to-end Wasserstein / TV estimators.

Planning turns an accuracy target and a tail model into a bucket width ``b``,
a counter budget ``k`` (rounded up to an even number >= 4) and a minimum
stream length. Every threshold carries an unspecified constant; it is exposed
as ``EstimatorConfig.const`` and defaults to 1.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Union

import numpy as np

from .bucketing import BucketSpec
from .distances import tv, wasserstein_report
from .errors import ConfigError, DataError
from .summaries import DistributionSummary, merge_summaries
from .tails import SubGaussian, SubWeibull, TailModel, combine_tails

log = logging.getLogger(__name__)

QUARTER_EPS = "quarter-eps"
HALF_EPS = "half-eps"


@dataclass(frozen=True)
class EstimatorConfig:
    epsilon: float
    delta: float
    tail: TailModel
    lipschitz: float = 1.0
    const: float = 1.0
    wasserstein_bucket_rule: str = QUARTER_EPS
    tail_other: Optional[TailModel] = None
    lipschitz_other: Optional[float] = None

    def __post_init__(self):
        for name in ("epsilon", "delta"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and 0.0 < v < 1.0):
                raise ConfigError(f"{name} must lie in (0, 1), got {v!r}")
        for name in ("lipschitz", "const"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                raise ConfigError(f"{name} must be a positive number, got {v!r}")
        if self.lipschitz_other is not None and not self.lipschitz_other > 0:
            raise ConfigError("lipschitz_other must be positive")
        if not isinstance(self.tail, (SubGaussian, SubWeibull)):
            raise ConfigError("tail must be SubGaussian or SubWeibull")
        if self.wasserstein_bucket_rule not in (QUARTER_EPS, HALF_EPS):
            raise ConfigError(f"wasserstein_bucket_rule must be {QUARTER_EPS!r} or {HALF_EPS!r}")

    @property
    def effective_tail(self) -> TailModel:
        """Worst of the two sides' tails (max sigma / max alpha)."""
        if self.tail_other is None:
            return self.tail
        return combine_tails(self.tail, self.tail_other)

    @property
    def effective_lipschitz(self) -> float:
        if self.lipschitz_other is None:
            return self.lipschitz
        return max(self.lipschitz, self.lipschitz_other)


@dataclass(frozen=True)
class EstimatePlan:
    bucket_width: float
    counters: int
    n_min: int

    def __post_init__(self):
        if not self.bucket_width > 0 or self.counters < 4 or self.counters % 2 or self.n_min < 1:
            raise ConfigError(f"invalid plan {self}")


def even_counters(x: float) -> int:
    """Smallest even integer >= max(x, 4)."""
    k = max(4, math.ceil(x - 1e-9))
    return k + (k % 2)


# -- individual thresholds ---------------------------------------------------------

def sca_counters(epsilon: float, bucket_width: float, tail: TailModel, const: float = 1.0) -> int:
    """Counter budget that keeps the sup CDF error of a summary within ``epsilon``."""
    if isinstance(tail, SubGaussian):
        k = math.ceil(8.0 * tail.sigma / bucket_width * math.sqrt(math.log(4.0 / epsilon)))
    else:
        k = math.ceil(const / (2.0 * bucket_width) * math.log(4.0 / epsilon) ** tail.alpha)
    return even_counters(k)


def spa_counters(epsilon: float, bucket_width: float, tail: TailModel, const: float = 1.0) -> int:
    """Counter budget for a pointwise PDF error of ``epsilon``."""
    if isinstance(tail, SubGaussian):
        k = math.ceil(8.0 * tail.sigma / bucket_width * math.sqrt(math.log(1.0 / epsilon)))
    else:
        k = math.ceil(const / bucket_width * math.log(1.0 / epsilon) ** tail.alpha)
    return even_counters(k)


def spa_l1_counters(epsilon: float, bucket_width: float, tail: TailModel, const: float = 1.0) -> int:
    """Counter budget for an l1 PDF error of ``epsilon``."""
    if isinstance(tail, SubGaussian):
        k = math.ceil(8.0 * tail.sigma / bucket_width * math.sqrt(math.log(6.0 / epsilon)))
    else:
        k = math.ceil(const / bucket_width * math.log(6.0 / epsilon) ** tail.alpha)
    return even_counters(k)


def sca_min_length(epsilon: float, delta: float, tail: TailModel, const: float = 1.0) -> int:
    if isinstance(tail, SubGaussian):
        return max(1, math.ceil(const * math.log(1.0 / delta)))
    return max(1, math.ceil(const / epsilon * math.log(1.0 / delta)))


def tv_bucket_width(epsilon: float, lipschitz: float, tail: TailModel) -> float:
    """Bucket width keeping TV(true, bucketed) within ``epsilon``."""
    if isinstance(tail, SubGaussian):
        return epsilon / (tail.sigma * lipschitz * math.sqrt(math.log(2.0 / epsilon)))
    lg = math.log(2.0 * tail.c_alpha / epsilon)
    if lg <= 0:
        raise ConfigError("c_alpha too small for this epsilon: log(2 c_alpha / epsilon) must be positive")
    return epsilon / (lipschitz * lg ** tail.alpha)


def tv_concentration_length(epsilon: float, delta: float, bucket_width: float, tail: TailModel,
                            const: float = 1.0) -> int:
    """Samples needed for the bucketed empirical measure to be ``epsilon``-close in TV."""
    if isinstance(tail, SubGaussian):
        support = 4.0 * tail.sigma * math.sqrt(math.pi) / bucket_width
    else:
        support = 2.0 * tail.c_alpha / bucket_width * math.gamma(1.0 + tail.alpha)
    return max(1, math.ceil(const / epsilon ** 2 * max(support, math.log(1.0 / delta))))


# -- plans --------------------------------------------------------------------------

def plan_wasserstein(cfg: EstimatorConfig) -> EstimatePlan:
    eps, delta, c = cfg.epsilon, cfg.delta, cfg.const
    tail, ell = cfg.effective_tail, cfg.effective_lipschitz
    b = eps / 4.0 if cfg.wasserstein_bucket_rule == QUARTER_EPS else eps / 2.0
    lg = max(math.log(ell / eps), 0.0)
    ld = math.log(1.0 / delta)
    spread = max(1.0 / eps ** 2, 1.0 / ell ** 2, ell ** 2)
    if isinstance(tail, SubGaussian):
        k = c * tail.sigma / eps * lg
        n_min = c * ld * spread
    else:
        k = c / eps * lg ** tail.alpha
        n_min = c * ld * max(spread, ld ** (2.0 * tail.alpha - 1.0))
    return EstimatePlan(b, even_counters(k), max(1, math.ceil(n_min)))


def plan_tv(cfg: EstimatorConfig) -> EstimatePlan:
    eps, delta, c = cfg.epsilon, cfg.delta, cfg.const
    tail, ell = cfg.effective_tail, cfg.effective_lipschitz
    b = tv_bucket_width(eps, ell, tail)
    l1 = math.log(1.0 / eps)
    ld = math.log(1.0 / delta)
    if isinstance(tail, SubGaussian):
        k = c * tail.sigma ** 2 * ell / eps * l1
        n_pac = c / eps ** 2 * max(tail.sigma ** 2 * ell * l1 / eps, ld)
    else:
        k = c * ell / eps * l1 ** (2.0 * tail.alpha)
        n_pac = c / eps ** 2 * max(ell * l1 ** tail.alpha / eps * math.gamma(1.0 + tail.alpha), ld)
    n_min = max(math.ceil(n_pac), tv_concentration_length(eps, delta, b, tail, c))
    return EstimatePlan(b, even_counters(k), n_min)


# -- estimators -------------------------------------------------------------------

@dataclass
class EstimateReport:
    """Result of :func:`swa` / :func:`stva`."""

    metric: str
    value: float
    plan: EstimatePlan
    n_a: int
    n_b: int
    assigned_a: int
    assigned_b: int
    parameter: Optional[float] = None
    breakpoints: int = 0
    below_threshold: bool = False
    summaries: tuple = field(default=(), repr=False)

    @property
    def sublinearity(self) -> float:
        """Counter budget over the longer stream length."""
        return self.plan.counters / max(self.n_a, self.n_b)


Streams = Union[np.ndarray, Sequence[float], Sequence[Sequence[float]]]


def _as_sources(streams) -> List[np.ndarray]:
    if isinstance(streams, np.ndarray):
        if streams.ndim == 1:
            return [streams]
        return [np.asarray(s, dtype=np.float64) for s in streams]
    streams = list(streams)
    if streams and all(np.ndim(s) == 0 for s in streams):
        return [np.asarray(streams, dtype=np.float64)]
    return [np.asarray(s, dtype=np.float64) for s in streams]


def summarize_sources(sources, spec: BucketSpec, capacity: int, tail: Optional[TailModel] = None) -> DistributionSummary:
    """One summary per source, merged in source order."""
    parts = _as_sources(sources)
    if not parts or sum(p.size for p in parts) == 0:
        raise DataError("no samples on this side")
    summaries = [DistributionSummary.from_samples(p, spec, capacity, tail) for p in parts]
    return merge_summaries(summaries)


def _resolve(plan: EstimatePlan, bucket_width, counters, origin) -> tuple:
    b = plan.bucket_width if bucket_width is None else float(bucket_width)
    k = plan.counters if counters is None else int(counters)
    final = EstimatePlan(b, k, plan.n_min)
    return final, BucketSpec(b, origin)


def swa(streams_a, streams_b, cfg: EstimatorConfig, p: float = 1.0, *, bucket_width: Optional[float] = None,
        counters: Optional[int] = None, origin: float = 0.0) -> EstimateReport:
    """Sublinear Wasserstein-p estimate between two (multi-source) streams.

    ``bucket_width`` and ``counters`` override the planned values.
    """
    plan, spec = _resolve(plan_wasserstein(cfg), bucket_width, counters, origin)
    sa = summarize_sources(streams_a, spec, plan.counters, cfg.tail)
    sb = summarize_sources(streams_b, spec, plan.counters, cfg.tail_other or cfg.tail)
    rep = wasserstein_report(sa, sb, p)
    low = min(sa.n, sb.n) < plan.n_min
    if low:
        log.warning("stream shorter than planned minimum (%d < %d); estimate is unguaranteed", min(sa.n, sb.n), plan.n_min)
    return EstimateReport("wasserstein", rep.value, plan, sa.n, sb.n, sa.assigned_buckets, sb.assigned_buckets,
                          parameter=rep.parameter, breakpoints=rep.breakpoints, below_threshold=low, summaries=(sa, sb))


def stva(streams_a, streams_b, cfg: EstimatorConfig, *, bucket_width: Optional[float] = None,
         counters: Optional[int] = None, origin: float = 0.0) -> EstimateReport:
    """Sublinear TV estimate between two (multi-source) streams."""
    plan, spec = _resolve(plan_tv(cfg), bucket_width, counters, origin)
    sa = summarize_sources(streams_a, spec, plan.counters, cfg.tail)
    sb = summarize_sources(streams_b, spec, plan.counters, cfg.tail_other or cfg.tail)
    value = tv(sa, sb)
    low = min(sa.n, sb.n) < plan.n_min
    if low:
        log.warning("stream shorter than planned minimum (%d < %d); estimate is unguaranteed", min(sa.n, sb.n), plan.n_min)
    return EstimateReport("tv", value, plan, sa.n, sb.n, sa.assigned_buckets, sb.assigned_buckets,
                          below_threshold=low, summaries=(sa, sb))
