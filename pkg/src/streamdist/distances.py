"""Distances between bucketed distributions, plus brute-force oracles.

Every function here accepts either a :class:`DistributionSummary` or an exact
:class:`BucketedEmpirical`; both expose ``spec`` and ``masses()``.

Wasserstein-p uses the quantile coupling: both inverse CDFs are step
functions, so the integral over (0, 1] is exact once the two sets of
cumulative breakpoints are merged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

import numpy as np

from .bucketing import BucketedEmpirical
from .errors import ConfigError, DataError


@dataclass(frozen=True)
class DistanceReport:
    metric: str
    value: float
    parameter: Optional[float] = None
    breakpoints: int = 0


def _check_p(p: float) -> float:
    p = float(p)
    if not math.isfinite(p) or p < 1.0:
        raise ConfigError(f"p must be a finite number >= 1, got {p}")
    return p


def _step_distribution(dist) -> Tuple[np.ndarray, np.ndarray]:
    """Support points (midpoints) and cumulative probabilities, last exactly 1."""
    idx, w = dist.masses()
    if idx.size == 0:
        raise DataError("distribution is empty")
    cum = np.cumsum(w)
    cdf = cum.astype(np.float64) / float(cum[-1])
    cdf[-1] = 1.0
    return dist.spec.midpoints(idx), cdf


def _wasserstein_steps(xa, qa, xb, qb, p) -> Tuple[float, int]:
    # union of breakpoints; on (r_{t-1}, r_t] each inverse CDF is constant
    r = np.union1d(qa, qb)
    lengths = np.diff(np.concatenate(([0.0], r)))
    ia = np.minimum(np.searchsorted(qa, r, side="left"), qa.size - 1)
    ib = np.minimum(np.searchsorted(qb, r, side="left"), qb.size - 1)
    gap = np.abs(xa[ia] - xb[ib])
    terms = lengths * (gap if p == 1.0 else gap ** p)
    total = math.fsum(terms.tolist())
    value = total if p == 1.0 else total ** (1.0 / p)
    return value, int(r.size)


def wasserstein_report(a, b, p: float = 1.0) -> DistanceReport:
    p = _check_p(p)
    xa, qa = _step_distribution(a)
    xb, qb = _step_distribution(b)
    value, bp = _wasserstein_steps(xa, qa, xb, qb, p)
    return DistanceReport("wasserstein", value, p, bp)


def wasserstein_p(a, b, p: float = 1.0) -> float:
    """Exact W_p between the step inverse CDFs of ``a`` and ``b``.

    Bucket specs may differ between the two arguments.
    """
    return wasserstein_report(a, b, p).value


def _aligned_pdfs(a, b) -> Tuple[np.ndarray, np.ndarray]:
    if a.spec != b.spec:
        raise ConfigError(f"bucket spec mismatch: {a.spec} != {b.spec}")
    ia, wa = a.masses()
    ib, wb = b.masses()
    if ia.size == 0 or ib.size == 0:
        raise DataError("distribution is empty")
    pa = wa.astype(np.float64) / float(np.sum(wa, dtype=wa.dtype))
    pb = wb.astype(np.float64) / float(np.sum(wb, dtype=wb.dtype))
    support = np.union1d(ia, ib)
    va = np.zeros(support.size)
    vb = np.zeros(support.size)
    va[np.searchsorted(support, ia)] = pa
    vb[np.searchsorted(support, ib)] = pb
    return va, vb


def tv(a, b) -> float:
    """Half the l1 distance between bucket probabilities (same spec required)."""
    va, vb = _aligned_pdfs(a, b)
    return min(1.0, 0.5 * math.fsum(np.abs(va - vb).tolist()))


def lp_distance(a, b, p: float = 2.0) -> float:
    p = _check_p(p)
    va, vb = _aligned_pdfs(a, b)
    d = np.abs(va - vb)
    if p == 1.0:
        return math.fsum(d.tolist())
    return math.fsum((d ** p).tolist()) ** (1.0 / p)


def hockey_stick(a, b, tau: float) -> float:
    """``sum_i max(p_a(i) - tau * p_b(i), 0)``; equals :func:`tv` at ``tau = 1``."""
    tau = float(tau)
    if not math.isfinite(tau) or tau < 1.0:
        raise ConfigError(f"tau must be a finite number >= 1, got {tau}")
    va, vb = _aligned_pdfs(a, b)
    if tau == 1.0:
        # same arithmetic path as tv so the identity holds bit for bit
        return tv(a, b)
    return min(1.0, math.fsum(np.maximum(va - tau * vb, 0.0).tolist()))


def distance_report(metric: str, a, b, p: float = 1.0, tau: float = 1.0) -> DistanceReport:
    metric = metric.lower()
    if metric == "wasserstein":
        return wasserstein_report(a, b, p)
    if metric == "tv":
        return DistanceReport("tv", tv(a, b))
    if metric == "lp":
        return DistanceReport("lp", lp_distance(a, b, p), float(p))
    if metric in ("hockeystick", "hockey_stick"):
        return DistanceReport("hockeystick", hockey_stick(a, b, tau), float(tau))
    raise ConfigError(f"unknown metric {metric!r}")


# -- oracles ---------------------------------------------------------------------

def oracle_wasserstein1(xs, ys) -> float:
    """Exact empirical W_1 between two equal-size samples (sorted pairing)."""
    x = np.sort(np.asarray(xs, dtype=np.float64))
    y = np.sort(np.asarray(ys, dtype=np.float64))
    if x.size == 0 or x.size != y.size:
        raise ConfigError("oracle_wasserstein1 needs two non-empty samples of equal size")
    return math.fsum(np.abs(x - y).tolist()) / x.size


def oracle_tv(a: BucketedEmpirical, b: BucketedEmpirical) -> float:
    """TV between exact bucketed histograms, in rational arithmetic."""
    if a.spec != b.spec:
        raise ConfigError(f"bucket spec mismatch: {a.spec} != {b.spec}")
    if a.n == 0 or b.n == 0:
        raise DataError("distribution is empty")
    ca, cb = a.counts_dict(), b.counts_dict()
    total = sum(abs(Fraction(ca.get(i, 0), a.n) - Fraction(cb.get(i, 0), b.n)) for i in ca.keys() | cb.keys())
    return float(total / 2)


def riemann_wasserstein(a, b, p: float = 1.0, points: int = 1_000_000) -> float:
    """Midpoint-rule W_p on a uniform grid of quantile levels (cross-check only)."""
    p = _check_p(p)
    xa, qa = _step_distribution(a)
    xb, qb = _step_distribution(b)
    r = (np.arange(points, dtype=np.float64) + 0.5) / points
    ga = xa[np.minimum(np.searchsorted(qa, r, side="left"), qa.size - 1)]
    gb = xb[np.minimum(np.searchsorted(qb, r, side="left"), qb.size - 1)]
    return float(np.mean(np.abs(ga - gb) ** p) ** (1.0 / p))
