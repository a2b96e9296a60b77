"""Sublinear PDF/CDF summaries of a sample stream.

A :class:`DistributionSummary` buckets each sample and feeds the bucket index
to a :class:`~streamdist.mmg.CounterSketch`. Probabilities are the sketch
counters divided by the counter total (not by ``n``; the two differ once the
sketch has had to decrement). The same state answers both PDF queries and
CDF / quantile queries, so one object serves both the PDF and CDF learners.

Binary layout (little-endian), version 1::

    magic    4s   b"SLDS"
    version  u16
    tail     u8 tag (0 none, 1 sub-Gaussian, 2 sub-Weibull), f64, f64
    origin   f64
    width    f64
    capacity u32
    n        u64
    entries  u32, then ``entries`` x (index i64, count u64) ascending by index
"""

from __future__ import annotations

import json
import math
import struct
from typing import Iterable, Optional, Tuple

import numpy as np

from .bucketing import BucketSpec, bucket_indices
from .errors import ConfigError, DataError, FormatError
from .mmg import UINT64_MAX, CounterSketch
from .tails import SubGaussian, SubWeibull, TailModel, tail_from_tag

MAGIC = b"SLDS"
VERSION = 1
_HEADER = struct.Struct("<4sHBddddIQI")
HEADER_SIZE = _HEADER.size
_ENTRY = np.dtype([("index", "<i8"), ("count", "<u8")])
ENTRY_SIZE = _ENTRY.itemsize


class DistributionSummary:
    """Mergeable bucketed summary of one distribution.

    Parameters
    ----------
    spec : BucketSpec
        Bucket origin and width.
    capacity : int
        Counter budget ``k`` of the underlying sketch.
    tail : SubGaussian or SubWeibull, optional
        Annotation carried through merges and serialization.
    """

    def __init__(self, spec: BucketSpec, capacity: int, tail: Optional[TailModel] = None, sketch: Optional[CounterSketch] = None):
        self.spec = spec
        self.sketch = sketch if sketch is not None else CounterSketch(capacity)
        if self.sketch.capacity != capacity:
            raise ConfigError("sketch capacity does not match")
        self.tail = tail
        self._cache = None

    @classmethod
    def from_samples(cls, samples, spec: BucketSpec, capacity: int, tail: Optional[TailModel] = None) -> "DistributionSummary":
        s = cls(spec, capacity, tail)
        s.update_many(samples)
        return s

    @property
    def capacity(self) -> int:
        return self.sketch.capacity

    @property
    def n(self) -> int:
        return self.sketch.processed_weight

    @property
    def assigned_buckets(self) -> int:
        return self.sketch.size

    def copy(self) -> "DistributionSummary":
        return DistributionSummary(self.spec, self.capacity, self.tail, self.sketch.copy())

    # -- building --------------------------------------------------------------
    def update(self, x: float) -> "DistributionSummary":
        if not isinstance(x, (int, float, np.integer, np.floating)) or not math.isfinite(x):
            raise DataError(f"sample must be a finite number, got {x!r}")
        return self.update_many(np.array([x], dtype=np.float64))

    def update_many(self, samples) -> "DistributionSummary":
        idx = bucket_indices(samples, self.spec)
        self.sketch.update_many(idx.ravel())
        self._cache = None
        return self

    def merge(self, other: "DistributionSummary") -> "DistributionSummary":
        """Fold ``other`` into this summary in place."""
        if not isinstance(other, DistributionSummary):
            raise ConfigError("can only merge another DistributionSummary")
        if other.spec != self.spec:
            raise ConfigError(f"bucket spec mismatch: {self.spec} != {other.spec}")
        if other.capacity != self.capacity:
            raise ConfigError(f"capacity mismatch: {self.capacity} != {other.capacity}")
        self.sketch.merge(other.sketch)
        if self.tail is None:
            self.tail = other.tail
        self._cache = None
        return self

    # -- queries -----------------------------------------------------------------
    def _state(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Assigned indices, counts and normalised cumulative probabilities."""
        if self._cache is None:
            if self.n == 0:
                raise DataError("summary is empty")
            items, counts = self.sketch.counters()
            if items.size == 0:
                raise DataError("summary has no assigned buckets (every counter was decremented away)")
            cum = np.cumsum(counts, dtype=np.uint64)
            total = float(cum[-1])
            cdf = cum.astype(np.float64) / total
            cdf[-1] = 1.0
            self._cache = (items, counts, cdf)
        return self._cache

    def masses(self) -> Tuple[np.ndarray, np.ndarray]:
        """``(bucket indices, counter values)`` ascending by index."""
        items, counts, _ = self._state()
        return items.copy(), counts.copy()

    def pdf_estimate(self, i: int) -> float:
        return float(self.pdf_many(np.array([i]))[0])

    def pdf_many(self, idx) -> np.ndarray:
        items, counts, _ = self._state()
        idx = np.asarray(idx, dtype=np.int64)
        total = float(np.sum(counts, dtype=np.uint64))
        pos = np.searchsorted(items, idx)
        out = np.zeros(idx.shape)
        ok = pos < items.size
        hit = np.zeros(idx.shape, dtype=bool)
        hit[ok] = items[pos[ok]] == idx[ok]
        out[hit] = counts[pos[hit]].astype(np.float64) / total
        return out

    def cdf_estimate(self, i: int) -> float:
        return float(self.cdf_many(np.array([i]))[0])

    def cdf_many(self, idx) -> np.ndarray:
        items, _, cdf = self._state()
        pos = np.searchsorted(items, np.asarray(idx, dtype=np.int64), side="right")
        return np.concatenate(([0.0], cdf))[pos]

    def pseudoinverse(self, r: float) -> float:
        return float(self.pseudoinverse_many(np.array([r], dtype=np.float64))[0])

    def pseudoinverse_many(self, rs) -> np.ndarray:
        """Midpoint of the smallest assigned bucket whose CDF reaches ``r``."""
        rs = np.asarray(rs, dtype=np.float64)
        if rs.size and (not np.all(np.isfinite(rs)) or rs.min() <= 0.0 or rs.max() > 1.0):
            raise ConfigError("quantile level must lie in (0, 1]")
        items, _, cdf = self._state()
        return self.spec.midpoints(items[np.searchsorted(cdf, rs, side="left")])

    # -- comparison / persistence ---------------------------------------------
    def __eq__(self, other) -> bool:
        if not isinstance(other, DistributionSummary):
            return NotImplemented
        return (
            _bits(self.spec.origin) == _bits(other.spec.origin)
            and _bits(self.spec.width) == _bits(other.spec.width)
            and _tail_key(self.tail) == _tail_key(other.tail)
            and self.sketch == other.sketch
        )

    def __repr__(self) -> str:
        return (
            f"DistributionSummary(width={self.spec.width}, origin={self.spec.origin}, "
            f"capacity={self.capacity}, assigned={self.assigned_buckets}, n={self.n})"
        )

    def to_bytes(self) -> bytes:
        return serialize(self)

    @classmethod
    def from_bytes(cls, data: bytes) -> "DistributionSummary":
        return deserialize(data)


def summary_update(summary: DistributionSummary, x: float) -> DistributionSummary:
    return summary.update(x)


def summary_merge(a: DistributionSummary, b: DistributionSummary) -> DistributionSummary:
    """Merged copy of ``a`` and ``b``; the inputs are left untouched."""
    return a.copy().merge(b)


def merge_summaries(summaries: Iterable[DistributionSummary]) -> DistributionSummary:
    summaries = list(summaries)
    if not summaries:
        raise ConfigError("nothing to merge")
    out = summaries[0].copy()
    for s in summaries[1:]:
        out.merge(s)
    return out


def _bits(x: float) -> bytes:
    return struct.pack("<d", x)


def _tail_key(tail):
    if tail is None:
        return (0, _bits(0.0), _bits(0.0))
    p0, p1 = tail.params
    return (tail.tag, _bits(p0), _bits(p1))


# -- binary format -----------------------------------------------------------------

def serialize(summary: DistributionSummary) -> bytes:
    items, counts = summary.sketch.counters()
    tag, p0, p1 = (0, 0.0, 0.0) if summary.tail is None else (summary.tail.tag, *summary.tail.params)
    head = _HEADER.pack(
        MAGIC, VERSION, tag, p0, p1, summary.spec.origin, summary.spec.width,
        summary.capacity, summary.n, items.size,
    )
    body = np.empty(items.size, dtype=_ENTRY)
    body["index"] = items
    body["count"] = counts
    return head + body.tobytes()


def deserialize(data: bytes) -> DistributionSummary:
    """Decode a binary (or JSON mirror) summary, validating every invariant."""
    data = bytes(data)
    if data[:4] != MAGIC:
        stripped = data.lstrip()
        if stripped[:1] == b"{":
            return from_json(stripped.decode("utf-8", errors="strict"))
        raise FormatError("bad magic; not a summary file")
    if len(data) < HEADER_SIZE:
        raise FormatError("truncated header")
    magic, version, tag, p0, p1, origin, width, capacity, n, entries = _HEADER.unpack_from(data)
    if version != VERSION:
        raise FormatError(f"unsupported summary version {version}")
    expected = HEADER_SIZE + entries * ENTRY_SIZE
    if len(data) != expected:
        raise FormatError(f"expected {expected} bytes for {entries} entries, got {len(data)}")
    body = np.frombuffer(data, dtype=_ENTRY, count=entries, offset=HEADER_SIZE)
    return _assemble(tag, p0, p1, origin, width, capacity, n, body["index"], body["count"])


def _assemble(tag, p0, p1, origin, width, capacity, n, items, counts) -> DistributionSummary:
    try:
        tail = tail_from_tag(tag, p0, p1)
        spec = BucketSpec(width, origin)
        sketch = CounterSketch.from_counters(capacity, items, counts, n)
    except (ConfigError, TypeError, ValueError) as exc:
        raise FormatError(f"invalid summary: {exc}") from None
    return DistributionSummary(spec, capacity, tail, sketch)


def to_json(summary: DistributionSummary) -> str:
    items, counts = summary.sketch.counters()
    tail = None
    if isinstance(summary.tail, SubGaussian):
        tail = {"kind": "subgaussian", "sigma": summary.tail.sigma}
    elif isinstance(summary.tail, SubWeibull):
        tail = {"kind": "subweibull", "alpha": summary.tail.alpha, "c_alpha": summary.tail.c_alpha}
    doc = {
        "magic": MAGIC.decode(),
        "version": VERSION,
        "tail": tail,
        "origin": summary.spec.origin,
        "width": summary.spec.width,
        "capacity": summary.capacity,
        "n": summary.n,
        "entries": [[int(i), int(c)] for i, c in zip(items, counts)],
    }
    return json.dumps(doc)


def from_json(text: str) -> DistributionSummary:
    try:
        doc = json.loads(text)
        if doc.get("magic") != MAGIC.decode():
            raise FormatError("bad magic in JSON summary")
        if doc.get("version") != VERSION:
            raise FormatError(f"unsupported summary version {doc.get('version')}")
        t = doc.get("tail")
        if t is None:
            tag, p0, p1 = 0, 0.0, 0.0
        elif t["kind"] == "subgaussian":
            tag, p0, p1 = 1, float(t["sigma"]), 0.0
        elif t["kind"] == "subweibull":
            tag, p0, p1 = 2, float(t["alpha"]), float(t.get("c_alpha", 1.0))
        else:
            raise FormatError(f"unknown tail kind {t['kind']!r}")
        entries = doc["entries"]
        idx = [int(e[0]) for e in entries]
        cnt = [int(e[1]) for e in entries]
        if any(c < 1 or c > UINT64_MAX for c in cnt) or any(abs(i) >= 1 << 63 for i in idx):
            raise FormatError("entry out of range")
        n = int(doc["n"])
        capacity = int(doc["capacity"])
        origin, width = float(doc["origin"]), float(doc["width"])
    except FormatError:
        raise
    except (ValueError, KeyError, TypeError, IndexError) as exc:
        raise FormatError(f"malformed JSON summary: {exc}") from None
    return _assemble(tag, p0, p1, origin, width, capacity, n,
                     np.array(idx, dtype=np.int64), np.array(cnt, dtype=np.uint64))


def save(summary: DistributionSummary, path, fmt: str = "binary") -> None:
    if fmt == "json":
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(to_json(summary))
    else:
        with open(path, "wb") as fh:
            fh.write(serialize(summary))


def load(path) -> DistributionSummary:
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        raise DataError(f"cannot read summary {path}: {exc}") from None
    return deserialize(data)
