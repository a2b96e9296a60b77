"""Fixed-width bucketing of the real line and exact bucketed histograms.

Bucket ``i`` is the half-open interval ``[x0 + i*b, x0 + (i+1)*b)``; its
representative point is the midpoint ``x0 + i*b + b/2``. Indices range over
all of Z. Floating-point floor is taken as-is, with no snapping at edges.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Tuple

import numpy as np

from .errors import ConfigError, DataError

# indices are stored as int64; keep a margin so midpoints stay representable
_INDEX_LIMIT = float(1 << 62)


@dataclass(frozen=True)
class BucketSpec:
    width: float
    origin: float = 0.0

    def __post_init__(self):
        w = float(self.width)
        o = float(self.origin)
        if not math.isfinite(w) or w <= 0.0:
            raise ConfigError(f"bucket width must be finite and > 0, got {self.width!r}")
        if not math.isfinite(o):
            raise ConfigError(f"bucket origin must be finite, got {self.origin!r}")
        object.__setattr__(self, "width", w)
        object.__setattr__(self, "origin", o)

    def bucket_of(self, x: float) -> int:
        return int(bucket_indices(np.array([x], dtype=np.float64), self)[0])

    def midpoint(self, i: int) -> float:
        return self.origin + i * self.width + self.width / 2

    def midpoints(self, idx) -> np.ndarray:
        idx = np.asarray(idx, dtype=np.int64)
        return self.origin + idx.astype(np.float64) * self.width + self.width / 2


def bucket_of(x: float, spec: BucketSpec) -> int:
    return spec.bucket_of(x)


def midpoint(i: int, spec: BucketSpec) -> float:
    return spec.midpoint(i)


def bucket_indices(samples, spec: BucketSpec) -> np.ndarray:
    """Vectorised ``floor((x - x0) / b)`` as int64."""
    xs = np.asarray(samples, dtype=np.float64)
    if not np.all(np.isfinite(xs)):
        raise DataError("samples must be finite")
    with np.errstate(over="ignore", invalid="ignore"):
        q = np.floor((xs - spec.origin) / spec.width)
    if q.size and (not np.all(np.isfinite(q)) or np.abs(q).max() >= _INDEX_LIMIT):
        raise DataError("sample too far from the origin for this bucket width")
    return q.astype(np.int64)


def snap_to_midpoints(samples, spec: BucketSpec) -> np.ndarray:
    """Replace each sample by the midpoint of its bucket."""
    return spec.midpoints(bucket_indices(samples, spec))


class BucketedEmpirical:
    """Exact per-bucket counts of a finite sample.

    This is the ground truth that sketched summaries are checked against, so
    everything is kept in integers until a probability is asked for.
    """

    def __init__(self, spec: BucketSpec, indices: np.ndarray, counts: np.ndarray):
        self.spec = spec
        self.indices = np.asarray(indices, dtype=np.int64)
        self.counts = np.asarray(counts, dtype=np.int64)
        self.n = int(self.counts.sum())

    @classmethod
    def from_samples(cls, samples, spec: BucketSpec) -> "BucketedEmpirical":
        idx = bucket_indices(samples, spec)
        uniq, cnt = np.unique(idx, return_counts=True)
        return cls(spec, uniq, cnt)

    def counts_dict(self) -> Dict[int, int]:
        return {int(i): int(c) for i, c in zip(self.indices, self.counts)}

    def _require_nonempty(self):
        if self.n == 0:
            raise DataError("empty bucketed distribution has no pdf/cdf")

    def pdf(self, i: int) -> float:
        self._require_nonempty()
        pos = np.searchsorted(self.indices, i)
        if pos < self.indices.size and self.indices[pos] == i:
            return float(self.counts[pos]) / self.n
        return 0.0

    def cdf(self, i: int) -> float:
        self._require_nonempty()
        pos = int(np.searchsorted(self.indices, i, side="right"))
        return float(int(self.counts[:pos].sum())) / self.n

    def pdf_exact(self, i: int) -> Fraction:
        self._require_nonempty()
        return Fraction(self.counts_dict().get(int(i), 0), self.n)

    def cdf_many(self, idx) -> np.ndarray:
        self._require_nonempty()
        cum = np.concatenate(([0], np.cumsum(self.counts)))
        pos = np.searchsorted(self.indices, np.asarray(idx, dtype=np.int64), side="right")
        return cum[pos] / self.n

    def pdf_many(self, idx) -> np.ndarray:
        self._require_nonempty()
        idx = np.asarray(idx, dtype=np.int64)
        pos = np.searchsorted(self.indices, idx)
        out = np.zeros(idx.shape)
        ok = pos < self.indices.size
        hit = np.zeros(idx.shape, dtype=bool)
        hit[ok] = self.indices[pos[ok]] == idx[ok]
        out[hit] = self.counts[pos[hit]] / self.n
        return out

    def masses(self) -> Tuple[np.ndarray, np.ndarray]:
        """``(bucket indices, integer weights)`` sorted by index."""
        return self.indices.copy(), self.counts.copy()

    def __len__(self) -> int:
        return int(self.indices.size)

    def __repr__(self) -> str:
        return f"BucketedEmpirical(width={self.spec.width}, origin={self.spec.origin}, buckets={len(self)}, n={self.n})"


def bucketize_exact(samples: Iterable[float], spec: BucketSpec) -> BucketedEmpirical:
    if not isinstance(samples, (np.ndarray, list, tuple)):
        samples = list(samples)
    return BucketedEmpirical.from_samples(np.asarray(samples, dtype=np.float64), spec)
