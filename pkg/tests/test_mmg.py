import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from streamdist._jit import python_version
from streamdist.errors import ConfigError, CounterOverflowError
from streamdist.mmg import UINT64_MAX, CounterSketch, _mmg_update_batch, merge_all

from oracles import check_cumulant_bound, check_point_bound, exact_frequencies, random_stream

A, B, C, D, E = range(5)


def test_init():
    sk = CounterSketch(8)
    assert len(sk) == 0 and sk.decrement_rank == 4 and sk.processed_weight == 0


@pytest.mark.parametrize("k", [3, 2, 0, -4, 7, 4.0, True])
def test_init_rejects_bad_capacity(k):
    with pytest.raises(ConfigError):
        CounterSketch(k)


def test_capacity_four_holds_four_items_exactly():
    sk = CounterSketch(4).update_many([A, B, C, D])
    assert dict(sk) == {A: 1, B: 1, C: 1, D: 1}


def test_exact_regime_small():
    sk = CounterSketch(4).update_many([A, A, B])
    assert (sk.estimate(A), sk.estimate(B), sk.estimate(C)) == (2, 1, 0)


def test_decrement_walkthrough():
    # counters {a:3, b:2, c:1, d:1}; e arrives, 2nd largest is 2 -> {a:1}; e (1 <= 2) dropped
    sk = CounterSketch(4).update_many([A, A, A, B, B, C, D, E])
    assert dict(sk) == {A: 1}
    assert sk.estimate(A) == 1 and sk.estimate(E) == 0
    assert sk.processed_weight == 8


def test_heavy_newcomer_is_inserted_with_excess():
    sk = CounterSketch(4).update_many([A, A, A, B, B, C, D])
    sk.update(E, 5)
    assert dict(sk) == {A: 1, E: 3}


def test_empty_estimates():
    sk = CounterSketch(6)
    assert sk.estimate(123) == 0 and sk.estimate_cumulate(10**6) == 0


def test_cumulate_examples():
    sk = CounterSketch(4).update_many([1, 2, 3])
    assert sk.estimate_cumulate(2) == 2
    assert sk.estimate_cumulate(3) == sk.counter_total == 3
    assert sk.estimate_cumulate(0) == 0


def test_adversarial_k16():
    rng = np.random.default_rng(3)
    # round-robin over the universe with a few heavy items mixed in
    items = np.concatenate([np.arange(1000).repeat(8), rng.integers(0, 5, 2000)])
    rng.shuffle(items)
    sk = CounterSketch(16).update_many(items)
    freq = exact_frequencies(items)
    assert check_point_bound(sk, freq, 16) == []


def test_random_streams_point_and_cumulant_bounds():
    rng = np.random.default_rng(11)
    for _ in range(60):
        items, w = random_stream(rng, max_n=3000)
        k = int(rng.choice([8, 16, 32]))
        sk = CounterSketch(k).update_many(items, w)
        freq = exact_frequencies(items, w)
        assert check_point_bound(sk, freq, k) == []
        assert check_cumulant_bound(sk, freq, k) == []
        assert sk.processed_weight == int(w.sum())


def test_merge_identity_and_exact_union():
    s = CounterSketch(8).update_many([1, 1, 2, 9])
    before = s.copy()
    s.merge(CounterSketch(8))
    assert s == before
    t = CounterSketch(8).update_many([2, 3, 3])
    s.merge(t)
    assert dict(s) == {1: 2, 2: 2, 3: 2, 9: 1}
    assert s.processed_weight == 7


def test_merge_rejects_capacity_mismatch():
    with pytest.raises(ConfigError):
        CounterSketch(8).merge(CounterSketch(10))


def test_merged_sources_obey_point_bound():
    rng = np.random.default_rng(5)
    for S in (2, 5, 10):
        parts = [random_stream(rng, max_n=1000, universe=300) for _ in range(S)]
        k = 16
        merged = merge_all(CounterSketch(k).update_many(x, w) for x, w in parts)
        items = np.concatenate([p[0] for p in parts])
        weights = np.concatenate([p[1] for p in parts])
        assert check_point_bound(merged, exact_frequencies(items, weights), k) == []


def test_overflow_is_detected():
    sk = CounterSketch(4)
    sk.update(1, UINT64_MAX - 1)
    with pytest.raises(CounterOverflowError):
        sk.update(1, 5)
    with pytest.raises(CounterOverflowError):
        sk.update(1, 1 << 64)


@pytest.mark.parametrize("w", [0, -1, 1.5])
def test_weight_validation(w):
    with pytest.raises(ConfigError):
        CounterSketch(4).update(1, w)


def test_from_counters_validation():
    with pytest.raises(ConfigError):
        CounterSketch.from_counters(4, [2, 1], [1, 1], 2)
    with pytest.raises(ConfigError):
        CounterSketch.from_counters(4, [1, 2], [1, 0], 2)
    with pytest.raises(ConfigError):
        CounterSketch.from_counters(4, [1, 2], [3, 3], 5)
    sk = CounterSketch.from_counters(4, [1, 2], [3, 3], 9)
    assert dict(sk) == {1: 3, 2: 3} and sk.processed_weight == 9


def test_python_fallback_matches_kernel():
    py = python_version(_mmg_update_batch)
    rng = np.random.default_rng(2)
    for _ in range(20):
        items, w = random_stream(rng, max_n=2000, universe=200)
        k = int(rng.choice([4, 8, 16]))
        out = []
        for fn in (_mmg_update_batch, py):
            it = np.zeros(k, np.int64)
            ct = np.zeros(k, np.uint64)
            size, done = fn(it, ct, 0, k // 2, items, w.astype(np.uint64))
            out.append((int(size), int(done), it[:size].tolist(), ct[:size].tolist()))
        assert out[0] == out[1]


@settings(max_examples=150, deadline=None)
@given(
    st.lists(st.tuples(st.integers(-50, 50), st.integers(1, 16)), max_size=400),
    st.sampled_from([4, 6, 8, 16]),
)
def test_property_bounds(stream, k):
    items = np.array([x for x, _ in stream], dtype=np.int64)
    w = np.array([c for _, c in stream], dtype=np.int64)
    sk = CounterSketch(k).update_many(items, w)
    freq = exact_frequencies(items, w)
    assert len(sk) <= k
    assert check_point_bound(sk, freq, k) == []
    assert check_cumulant_bound(sk, freq, k) == []
    keys = [j for j, _ in sk]
    assert keys == sorted(keys)
    assert all(c > 0 for _, c in sk)


@settings(max_examples=80, deadline=None)
@given(st.lists(st.lists(st.integers(0, 30), max_size=60), min_size=1, max_size=6), st.sampled_from([4, 8]))
def test_property_merge_bound(parts, k):
    merged = merge_all((CounterSketch(k).update_many(p) for p in parts), capacity=k)
    flat = [x for p in parts for x in p]
    assert merged.processed_weight == len(flat)
    assert check_point_bound(merged, exact_frequencies(flat), k) == []


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 6), max_size=50), st.lists(st.integers(0, 6), max_size=50))
def test_property_exact_regime_merge(a, b):
    # at most 7 distinct items with k = 8: no decrement ever fires
    m = CounterSketch(8).update_many(a).merge(CounterSketch(8).update_many(b))
    assert dict(m) == dict(exact_frequencies(a + b))


def test_env_flag_selects_python_path():
    import json
    import os
    import subprocess
    import sys

    code = (
        "import json, numpy as np, streamdist._jit as j, streamdist.mmg as m\n"
        "sk = m.CounterSketch(8).update_many(np.arange(200) % 13)\n"
        "print(json.dumps([j.USE_NUMBA, hasattr(m._mmg_update_batch, 'py_func'), list(sk)]))\n"
    )
    results = []
    for flag in ("1", "0"):
        env = dict(os.environ, STREAMDIST_DISABLE_NUMBA=flag)
        out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
        results.append(json.loads(out.stdout))
    assert results[0][:2] == [False, False] and results[1][:2] == [True, True]
    assert results[0][2] == results[1][2]
