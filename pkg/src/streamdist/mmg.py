"""Mergeable Misra-Gries counter sketch over integer items.

The sketch keeps at most ``k`` counters. When a new item arrives and every
counter is taken, all counters are reduced by the ``k/2``-th largest counter
value; counters that reach zero are released. Estimates never exceed the true
frequency and the deficit is at most ``4 * F_res(k/4) / k``, where ``F_res(t)``
is the total weight minus the ``t`` largest true frequencies. Merging folds the
counters of one sketch into another as weighted updates, and the bound then
holds for the concatenated stream.

Counters live in two parallel arrays sorted by item, so prefix sums
(cumulants) are a scan and iteration order is deterministic.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Optional, Tuple

import numpy as np

from ._jit import njit
from .errors import ConfigError, CounterOverflowError

UINT64_MAX = (1 << 64) - 1
_U64_MAX = np.uint64(UINT64_MAX)


@njit
def _mmg_update_batch(items, counts, size, kstar, xs, ws):
    """Apply weighted updates ``(xs[t], ws[t])`` in order.

    ``items[:size]`` is sorted ascending and ``counts[:size]`` holds the
    matching strictly positive counters; ``len(items)`` is the capacity.
    Returns ``(new_size, processed)``. ``processed < len(xs)`` signals a counter
    overflow on update ``processed``, which is left unapplied.
    """
    capacity = items.shape[0]
    n_updates = xs.shape[0]
    for t in range(n_updates):
        x = xs[t]
        delta = ws[t]
        pos = np.searchsorted(items[:size], x)
        if pos < size and items[pos] == x:
            if counts[pos] > _U64_MAX - delta:
                return size, t
            counts[pos] += delta
        elif size < capacity:
            if pos < size:
                items[pos + 1:size + 1] = items[pos:size].copy()
                counts[pos + 1:size + 1] = counts[pos:size].copy()
            items[pos] = x
            counts[pos] = delta
            size += 1
        else:
            # kstar-th largest value, counting multiplicity
            ck = np.sort(counts[:size])[size - kstar]
            w = 0
            for r in range(size):
                c = counts[r]
                if c > ck:
                    items[w] = items[r]
                    counts[w] = c - ck
                    w += 1
            size = w
            if delta > ck:
                pos = np.searchsorted(items[:size], x)
                if pos < size:
                    items[pos + 1:size + 1] = items[pos:size].copy()
                    counts[pos + 1:size + 1] = counts[pos:size].copy()
                items[pos] = x
                counts[pos] = delta - ck
                size += 1
    return size, n_updates


class CounterSketch:
    """Deterministic mergeable heavy-hitter sketch.

    Parameters
    ----------
    capacity : int
        Number of counters ``k``; must be even and at least 4.
    """

    __slots__ = ("capacity", "decrement_rank", "_items", "_counts", "_size", "processed_weight")

    def __init__(self, capacity: int):
        if isinstance(capacity, bool) or not isinstance(capacity, (int, np.integer)):
            raise ConfigError(f"capacity must be an integer, got {capacity!r}")
        capacity = int(capacity)
        if capacity < 4 or capacity % 2:
            raise ConfigError(f"capacity must be an even integer >= 4, got {capacity}")
        if capacity >= 1 << 32:
            raise ConfigError("capacity must fit in 32 bits")
        self.capacity = capacity
        self.decrement_rank = capacity // 2
        self._items = np.zeros(capacity, dtype=np.int64)
        self._counts = np.zeros(capacity, dtype=np.uint64)
        self._size = 0
        self.processed_weight = 0

    # -- construction helpers -------------------------------------------------
    @classmethod
    def from_counters(cls, capacity: int, items, counts, processed_weight: int) -> "CounterSketch":
        """Rebuild a sketch from its stored state (used by deserialization)."""
        sk = cls(capacity)
        items = np.asarray(items, dtype=np.int64)
        counts = np.asarray(counts, dtype=np.uint64)
        if items.shape != counts.shape or items.ndim != 1:
            raise ConfigError("items and counts must be 1-D arrays of equal length")
        if items.size > capacity:
            raise ConfigError("more counters than capacity")
        if items.size and (np.any(np.diff(items) <= 0)):
            raise ConfigError("items must be strictly ascending")
        if np.any(counts == 0):
            raise ConfigError("stored counts must be positive")
        total = sum(int(c) for c in counts)
        if not 0 <= processed_weight <= UINT64_MAX or total > processed_weight:
            raise ConfigError("counter sum exceeds processed weight")
        sk._items[: items.size] = items
        sk._counts[: counts.size] = counts
        sk._size = int(items.size)
        sk.processed_weight = int(processed_weight)
        return sk

    def copy(self) -> "CounterSketch":
        sk = CounterSketch(self.capacity)
        sk._items[:] = self._items
        sk._counts[:] = self._counts
        sk._size = self._size
        sk.processed_weight = self.processed_weight
        return sk

    # -- updates ----------------------------------------------------------------
    def update(self, item: int, weight: int = 1) -> "CounterSketch":
        return self.update_many(np.array([item], dtype=np.int64), np.array([_as_weight(weight)], dtype=np.uint64))

    def update_many(self, items, weights=None) -> "CounterSketch":
        """Feed ``items`` (with optional per-item ``weights``) in order."""
        xs = np.ascontiguousarray(items, dtype=np.int64)
        if xs.ndim != 1:
            raise ConfigError("items must be one-dimensional")
        if weights is None:
            ws = np.ones(xs.shape[0], dtype=np.uint64)
            total = int(xs.shape[0])
        else:
            ws = _as_weight_array(weights)
            if ws.shape != xs.shape:
                raise ConfigError("items and weights differ in length")
            total = None
        if xs.shape[0] == 0:
            return self
        if total is None:
            total = _exact_sum(ws)
        if self.processed_weight + total > UINT64_MAX:
            raise CounterOverflowError("processed weight would exceed 2**64 - 1")
        new_size, done = _mmg_update_batch(self._items, self._counts, self._size, self.decrement_rank, xs, ws)
        self._size = int(new_size)
        done = int(done)
        if done < xs.shape[0]:
            self.processed_weight += _exact_sum(ws[:done])
            raise CounterOverflowError(f"counter for item {int(xs[done])} would exceed 2**64 - 1")
        self.processed_weight += total
        return self

    def merge(self, other: "CounterSketch") -> "CounterSketch":
        """Fold ``other`` into this sketch, ascending by item."""
        if not isinstance(other, CounterSketch):
            raise ConfigError("can only merge another CounterSketch")
        if other.capacity != self.capacity:
            raise ConfigError(f"capacity mismatch: {self.capacity} != {other.capacity}")
        if self.processed_weight + other.processed_weight > UINT64_MAX:
            raise CounterOverflowError("processed weight would exceed 2**64 - 1")
        extra = other.processed_weight
        n = other._size
        if n:
            xs = other._items[:n].copy()
            ws = other._counts[:n].copy()
            new_size, done = _mmg_update_batch(self._items, self._counts, self._size, self.decrement_rank, xs, ws)
            self._size = int(new_size)
            if int(done) < n:
                raise CounterOverflowError(f"counter for item {int(xs[done])} would exceed 2**64 - 1")
        self.processed_weight += extra
        return self

    # -- queries -------------------------------------------------------------
    def estimate(self, item: int) -> int:
        pos = int(np.searchsorted(self._items[: self._size], item))
        if pos < self._size and self._items[pos] == item:
            return int(self._counts[pos])
        return 0

    def estimate_many(self, items) -> np.ndarray:
        xs = np.asarray(items, dtype=np.int64)
        keys = self._items[: self._size]
        pos = np.searchsorted(keys, xs)
        out = np.zeros(xs.shape, dtype=np.uint64)
        ok = pos < self._size
        hit = np.zeros(xs.shape, dtype=bool)
        hit[ok] = keys[pos[ok]] == xs[ok]
        out[hit] = self._counts[pos[hit]]
        return out

    def estimate_cumulate(self, item: int) -> int:
        """Sum of counters over assigned items ``<= item``."""
        pos = int(np.searchsorted(self._items[: self._size], item, side="right"))
        return sum(int(c) for c in self._counts[:pos])

    def estimate_cumulate_many(self, items) -> np.ndarray:
        cum = np.concatenate(([0], np.cumsum(self._counts[: self._size], dtype=np.uint64))).astype(np.uint64)
        pos = np.searchsorted(self._items[: self._size], np.asarray(items, dtype=np.int64), side="right")
        return cum[pos]

    @property
    def size(self) -> int:
        """Number of assigned counters."""
        return self._size

    @property
    def counter_total(self) -> int:
        return sum(int(c) for c in self._counts[: self._size])

    def counters(self) -> Tuple[np.ndarray, np.ndarray]:
        """Copies of the assigned ``(items, counts)``, ascending by item."""
        return self._items[: self._size].copy(), self._counts[: self._size].copy()

    def __iter__(self) -> Iterator[Tuple[int, int]]:
        for x, c in zip(self._items[: self._size], self._counts[: self._size]):
            yield int(x), int(c)

    def __len__(self) -> int:
        return self._size

    def __eq__(self, other) -> bool:
        if not isinstance(other, CounterSketch):
            return NotImplemented
        n = self._size
        return (
            self.capacity == other.capacity
            and self.processed_weight == other.processed_weight
            and n == other._size
            and np.array_equal(self._items[:n], other._items[:n])
            and np.array_equal(self._counts[:n], other._counts[:n])
        )

    def __repr__(self) -> str:
        return f"CounterSketch(capacity={self.capacity}, assigned={self._size}, processed_weight={self.processed_weight})"


def merge_all(sketches: Iterable[CounterSketch], capacity: Optional[int] = None) -> CounterSketch:
    """Merge sketches left to right into a fresh sketch."""
    sketches = list(sketches)
    if not sketches and capacity is None:
        raise ConfigError("nothing to merge")
    out = CounterSketch(capacity if capacity is not None else sketches[0].capacity)
    for sk in sketches:
        out.merge(sk)
    return out


def _exact_sum(ws: np.ndarray) -> int:
    if ws.size == 0:
        return 0
    if int(ws.max()) <= UINT64_MAX // ws.size:
        return int(ws.sum(dtype=np.uint64))
    return sum(int(w) for w in ws)


def _as_weight(w) -> int:
    if isinstance(w, bool) or not isinstance(w, (int, np.integer)):
        raise ConfigError(f"weight must be a positive integer, got {w!r}")
    w = int(w)
    if w < 1:
        raise ConfigError(f"weight must be >= 1, got {w}")
    if w > UINT64_MAX:
        raise CounterOverflowError("weight exceeds 2**64 - 1")
    return w


def _as_weight_array(weights) -> np.ndarray:
    arr = np.asarray(weights)
    if arr.dtype == np.uint64:
        ws = arr
    elif arr.dtype.kind in "iu":
        if arr.size and int(arr.min()) < 1:
            raise ConfigError("weights must be >= 1")
        ws = arr.astype(np.uint64)
    elif arr.dtype == object:
        ws = np.array([_as_weight(w) for w in arr.ravel()], dtype=np.uint64).reshape(arr.shape)
    else:
        raise ConfigError(f"weights must be integers, got dtype {arr.dtype}")
    if ws.size and int(ws.min()) < 1:
        raise ConfigError("weights must be >= 1")
    return np.ascontiguousarray(ws)
