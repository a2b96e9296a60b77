import json
import struct

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from streamdist.bucketing import BucketSpec, bucketize_exact
from streamdist.errors import ConfigError, DataError, FormatError
from streamdist.estimators import sca_counters
from streamdist.summaries import (
    ENTRY_SIZE,
    HEADER_SIZE,
    DistributionSummary,
    deserialize,
    from_json,
    load,
    merge_summaries,
    save,
    serialize,
    summary_merge,
    to_json,
)
from streamdist.tails import SubGaussian, SubWeibull

from oracles import exact_frequencies, residual

HALF = BucketSpec(0.5)


def test_fresh_update():
    s = DistributionSummary(HALF, 8).update(0.1)
    assert s.masses()[0].tolist() == [0] and s.masses()[1].tolist() == [1]


def test_exact_regime():
    xs = [0.1, 0.6, 1.1, 1.6]
    s = DistributionSummary.from_samples(xs, HALF, 8)
    assert s.cdf_estimate(0) == 0.25 and s.cdf_estimate(3) == 1.0
    assert s.cdf_estimate(-5) == 0.0 and s.cdf_estimate(99) == 1.0
    assert s.pdf_estimate(2) == 0.25 and s.pdf_estimate(7) == 0.0


def test_bounded_space():
    xs = np.random.default_rng(0).standard_normal(10_000)
    spec = BucketSpec(0.1)
    s = DistributionSummary.from_samples(xs, spec, 64)
    assert s.assigned_buckets <= 64 < len(bucketize_exact(xs, spec))


def test_point_mass_and_pseudoinverse():
    s = DistributionSummary.from_samples([0.1] * 4, HALF, 4)
    assert s.pdf_estimate(0) == 1.0
    assert s.pseudoinverse(1.0) == 0.25
    two = DistributionSummary.from_samples([0.1, 0.6], HALF, 4)
    assert two.pseudoinverse(0.5) == 0.25 and two.pseudoinverse(0.51) == 0.75
    for r in (0.0, -0.1, 1.01, np.nan):
        with pytest.raises(ConfigError):
            two.pseudoinverse(r)


def test_empty_summary_queries_raise():
    s = DistributionSummary(HALF, 4)
    with pytest.raises(DataError):
        s.cdf_estimate(0)
    with pytest.raises(DataError):
        s.update(float("nan"))


def test_pseudoinverse_against_linear_scan():
    xs = np.random.default_rng(4).normal(0, 2, 5000)
    s = DistributionSummary.from_samples(xs, BucketSpec(0.1), 40)
    items, _ = s.masses()
    qs = s.cdf_many(items)
    rs = np.linspace(0.001, 1.0, 1000)
    got = s.pseudoinverse_many(rs)
    for r, x in zip(rs, got):
        j = next(t for t in range(items.size) if qs[t] >= r)
        assert x == s.spec.midpoint(int(items[j]))


def test_pdf_error_bound_random_streams():
    rng = np.random.default_rng(8)
    spec = BucketSpec(0.1)
    for _ in range(30):
        n = int(rng.integers(100, 5000))
        xs = rng.normal(0, rng.uniform(0.5, 3), n)
        k = int(rng.choice([8, 16, 32, 64]))
        s = DistributionSummary.from_samples(xs, spec, k)
        if s.assigned_buckets == 0:
            continue  # all counters decremented away; no estimate exists
        exact = bucketize_exact(xs, spec)
        bound = 4 * residual(exact_frequencies(exact.indices.repeat(exact.counts)), k // 4) / n
        idx = np.arange(exact.indices[0] - 2, exact.indices[-1] + 3)
        assert np.max(np.abs(s.pdf_many(idx) - exact.pdf_many(idx))) <= bound + 1e-12


def test_merge_identity_and_exact_concat():
    a = DistributionSummary.from_samples([0.1, 0.6], HALF, 8)
    assert summary_merge(a, DistributionSummary(HALF, 8)) == a
    b = DistributionSummary.from_samples([1.1, 5.0], HALF, 8)
    m = summary_merge(a, b)
    assert dict(m.sketch) == {0: 1, 1: 1, 2: 1, 10: 1} and m.n == 4
    assert a.n == 2  # inputs untouched


def test_merge_rejects_mismatch():
    a = DistributionSummary(HALF, 8)
    with pytest.raises(ConfigError):
        a.merge(DistributionSummary(BucketSpec(0.25), 8))
    with pytest.raises(ConfigError):
        a.merge(DistributionSummary(HALF, 10))


def test_multi_source_cdf_error():
    eps, spec = 0.05, BucketSpec(0.05)
    k = sca_counters(eps, spec.width, SubGaussian(5.0))
    xs = np.random.default_rng(21).normal(0, 5, 100_000)
    exact = bucketize_exact(xs, spec)
    grid = np.arange(exact.indices[0], exact.indices[-1] + 1)
    truth = exact.cdf_many(grid)
    single = DistributionSummary.from_samples(xs, spec, k)
    merged = merge_summaries(DistributionSummary.from_samples(p, spec, k) for p in np.array_split(xs, 10))
    e1 = np.max(np.abs(single.cdf_many(grid) - truth))
    e10 = np.max(np.abs(merged.cdf_many(grid) - truth))
    assert e1 <= eps and e10 <= e1 + 0.01


# -- serialization ---------------------------------------------------------------

def _random_summary(rng):
    k = int(rng.choice([4, 8, 64, 256]))
    spec = BucketSpec(float(rng.uniform(1e-3, 2)), float(rng.normal(0, 10)))
    tail = [None, SubGaussian(float(rng.uniform(0.1, 9))), SubWeibull(float(rng.uniform(0.2, 3)), float(rng.uniform(0.5, 4)))][rng.integers(3)]
    s = DistributionSummary(spec, k, tail)
    n = int(rng.integers(0, 3000))
    if n:
        s.update_many(rng.normal(0, rng.uniform(0.1, 50), n))
    return s


def test_roundtrip_empty_and_length():
    e = DistributionSummary(HALF, 64)
    assert deserialize(serialize(e)) == e
    s = DistributionSummary.from_samples(np.random.default_rng(0).normal(0, 3, 5000), BucketSpec(0.05), 64)
    blob = serialize(s)
    assert len(blob) == HEADER_SIZE + ENTRY_SIZE * s.assigned_buckets
    assert deserialize(blob) == s
    assert DistributionSummary.from_bytes(s.to_bytes()) == s


def test_roundtrip_json_and_files(tmp_path):
    s = DistributionSummary.from_samples([0.1, 0.2, 3.3], HALF, 8, SubWeibull(0.5, 2.0))
    assert from_json(to_json(s)) == s
    assert deserialize(to_json(s).encode()) == s
    for fmt in ("binary", "json"):
        path = tmp_path / f"s.{fmt}"
        save(s, path, fmt)
        assert load(path) == s
    with pytest.raises(DataError):
        load(tmp_path / "missing")


def test_roundtrip_many_random():
    rng = np.random.default_rng(99)
    for _ in range(200):
        s = _random_summary(rng)
        assert deserialize(serialize(s)) == s


def _blob():
    s = DistributionSummary.from_samples(np.random.default_rng(1).normal(0, 1, 500), BucketSpec(0.1), 16)
    return bytearray(serialize(s)), s


def test_corruption_rejected():
    blob, s = _blob()
    bad = []
    bad.append(blob[:10])                          # truncated header
    bad.append(blob[:-1])                          # truncated body
    bad.append(blob + b"\0")                       # trailing junk
    x = bytearray(blob); x[0:4] = b"XXXX"; bad.append(x)
    x = bytearray(blob); struct.pack_into("<H", x, 4, 2); bad.append(x)
    x = bytearray(blob); x[6] = 9; bad.append(x)   # unknown tail tag
    # counter sum raised above n
    x = bytearray(blob); struct.pack_into("<Q", x, HEADER_SIZE + 8, s.n + 1); bad.append(x)
    # n lowered below the counter sum
    x = bytearray(blob); struct.pack_into("<Q", x, HEADER_SIZE - 12, 1); bad.append(x)
    # entries out of order
    x = bytearray(blob); x[HEADER_SIZE:HEADER_SIZE + 16], x[HEADER_SIZE + 16:HEADER_SIZE + 32] = (
        blob[HEADER_SIZE + 16:HEADER_SIZE + 32], blob[HEADER_SIZE:HEADER_SIZE + 16]); bad.append(x)
    # zero count
    x = bytearray(blob); struct.pack_into("<Q", x, HEADER_SIZE + 8, 0); bad.append(x)
    # negative width
    x = bytearray(blob); struct.pack_into("<d", x, 31, -1.0); bad.append(x)
    for b in bad:
        with pytest.raises(FormatError):
            deserialize(bytes(b))


def test_json_corruption_rejected():
    s = DistributionSummary.from_samples([0.1, 0.6], HALF, 4)
    doc = json.loads(to_json(s))
    for mutate in (
        lambda d: d.update(version=7),
        lambda d: d.update(n=1),
        lambda d: d.pop("entries"),
        lambda d: d.update(entries=[[0, -1]]),
        lambda d: d.update(tail={"kind": "cauchy"}),
    ):
        d = json.loads(json.dumps(doc))
        mutate(d)
        with pytest.raises(FormatError):
            from_json(json.dumps(d))
    with pytest.raises(FormatError):
        from_json("{not json")


@settings(max_examples=100, deadline=None)
@given(
    st.lists(st.floats(-1e4, 1e4, allow_nan=False), max_size=300),
    st.sampled_from([4, 8, 32]),
    st.floats(1e-2, 10),
)
def test_property_summary_invariants(xs, k, b):
    s = DistributionSummary.from_samples(xs, BucketSpec(b), k)
    assert s.n == len(xs)
    assert deserialize(serialize(s)) == s
    if s.assigned_buckets:
        items, counts = s.masses()
        assert s.sketch.counter_total <= s.n
        cdf = s.cdf_many(np.arange(items[0] - 1, items[-1] + 2))
        assert np.all(np.diff(cdf) >= 0) and cdf[-1] == 1.0
