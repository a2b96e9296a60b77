import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from streamdist.errors import ConfigError, DataError
from streamdist.streams import (
    SourceStream,
    generate,
    parse_source,
    read_grouped,
    read_samples,
    split_sources,
    tail_diagnostic,
    write_samples,
)
from streamdist.tails import SubGaussian, SubWeibull, combine_tails, parse_tail


def test_generation_basics():
    assert generate(SourceStream("gaussian", 1, 0, (0, 1))).size == 0
    a = generate(parse_source("gaussian:0,1", seed=5, length=1000))
    b = generate(parse_source("gaussian:0,1", seed=5, length=1000))
    assert np.array_equal(a, b)
    xs = generate(parse_source("gaussian:0,1", seed=0, length=100_000))
    assert abs(xs.mean()) <= 0.02 and abs((xs ** 2).mean() - 1) <= 0.05


def test_weibull_survival():
    alpha = 2.0
    xs = generate(parse_source(f"weibull:{alpha}", seed=3, length=200_000))
    for t in (0.5, 1.0, 4.0):
        assert np.mean(xs >= t) == pytest.approx(np.exp(-t ** (1 / alpha)), abs=0.005)


@pytest.mark.parametrize("text", ["cauchy:1", "gaussian:0", "gaussian:0,-1", "weibull:0", "gaussian:a,b"])
def test_bad_sources(text):
    with pytest.raises(ConfigError):
        parse_source(text)


def test_split_examples():
    xs = np.arange(10.0)
    assert np.array_equal(split_sources(xs, 1)[0], xs)
    assert [p.tolist() for p in split_sources(xs, 10)] == [[float(i)] for i in range(10)]
    for s in (0, 11, 2.5):
        with pytest.raises(ConfigError):
            split_sources(xs, s)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(allow_nan=False), min_size=1, max_size=200), st.data())
def test_property_split_roundtrip(xs, data):
    s = data.draw(st.integers(1, len(xs)))
    parts = split_sources(xs, s)
    assert len(parts) == s and all(p.size for p in parts)
    assert np.array_equal(np.concatenate(parts), np.asarray(xs))


def test_files(tmp_path):
    xs = np.random.default_rng(0).normal(size=50)
    p = tmp_path / "x.txt"
    write_samples(p, xs)
    assert np.array_equal(read_samples(p), xs)
    (tmp_path / "bad.txt").write_text("1.0\nfoo\n")
    with pytest.raises(DataError):
        read_samples(tmp_path / "bad.txt")
    (tmp_path / "inf.txt").write_text("1.0\ninf\n")
    with pytest.raises(DataError):
        read_samples(tmp_path / "inf.txt")
    (tmp_path / "g.csv").write_text("group,value\na,1\nb,2\na,3\n")
    g = read_grouped(tmp_path / "g.csv")
    assert g["a"].tolist() == [1.0, 3.0] and g["b"].tolist() == [2.0]
    assert np.array_equal(generate(parse_source(f"file:{p}", length=10)), xs[:10])


def test_tail_diagnostics():
    xs = generate(parse_source("gaussian:0,3", seed=1, length=20_000))
    assert tail_diagnostic(xs, SubGaussian(3.0)).consistent
    assert not tail_diagnostic(np.full(100, 100.0), SubGaussian(1.0)).consistent
    ex = generate(parse_source("exponential", seed=2, length=50_000))
    assert tail_diagnostic(ex, SubWeibull(1.0, 1.0)).consistent
    assert not tail_diagnostic(ex * 10, SubWeibull(1.0, 1.0)).consistent
    with pytest.raises(DataError):
        tail_diagnostic([1.0], SubGaussian(1.0))


def test_tail_parsing():
    assert parse_tail("subgaussian:2") == SubGaussian(2.0)
    assert parse_tail("subweibull:1.5") == SubWeibull(1.5, 1.0)
    assert parse_tail("subweibull:1.5,3") == SubWeibull(1.5, 3.0)
    for bad in ("subgaussian:-1", "laplace:1", "subgaussian:", "subweibull:1,2,3"):
        with pytest.raises(ConfigError):
            parse_tail(bad)
    assert combine_tails(SubGaussian(1), SubGaussian(4)) == SubGaussian(4)
    assert combine_tails(SubGaussian(1), SubWeibull(2)) == SubWeibull(2)
