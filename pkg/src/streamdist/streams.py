"""Reproducible sample sources, source splitting and tail sanity checks."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from .errors import ConfigError, DataError
from .tails import SubGaussian, SubWeibull, TailModel

GENERATORS = ("gaussian", "weibull_tail", "exponential", "file")


@dataclass(frozen=True)
class SourceStream:
    """Recipe for one sample stream.

    ``params`` holds ``(mean, sigma)`` for ``gaussian`` and ``(alpha,)`` for
    ``weibull_tail``; ``path`` is used by ``file``.
    """

    kind: str
    seed: int = 0
    length: int = 0
    params: tuple = ()
    path: Optional[str] = None

    def __post_init__(self):
        if self.kind not in GENERATORS:
            raise ConfigError(f"unknown generator {self.kind!r}; expected one of {GENERATORS}")
        if self.length < 0:
            raise ConfigError("stream length must be >= 0")
        if not 0 <= int(self.seed) < 1 << 64:
            raise ConfigError("seed must be an unsigned 64-bit integer")
        if self.kind == "gaussian":
            if len(self.params) != 2 or not float(self.params[1]) > 0:
                raise ConfigError("gaussian needs (mean, sigma) with sigma > 0")
        elif self.kind == "weibull_tail":
            if len(self.params) != 1 or not float(self.params[0]) > 0:
                raise ConfigError("weibull_tail needs (alpha,) with alpha > 0")
        elif self.kind == "file" and not self.path:
            raise ConfigError("file source needs a path")


def parse_source(text: str, seed: int = 0, length: int = 0) -> SourceStream:
    """Parse ``gaussian:MEAN,SIGMA``, ``weibull:ALPHA``, ``exponential`` or ``file:PATH``."""
    kind, _, rest = text.partition(":")
    kind = kind.strip().lower()
    if kind == "file":
        return SourceStream("file", seed, length, path=rest)
    try:
        params = tuple(float(v) for v in rest.split(",")) if rest else ()
    except ValueError:
        raise ConfigError(f"bad generator parameters in {text!r}") from None
    if kind in ("weibull", "weibull_tail", "subweibull"):
        kind = "weibull_tail"
    elif kind in ("normal", "gauss"):
        kind = "gaussian"
    elif kind == "exp":
        kind = "exponential"
    return SourceStream(kind, seed, length, params)


def generate(stream: SourceStream) -> np.ndarray:
    if stream.kind == "file":
        xs = read_samples(stream.path)
        return xs[: stream.length] if stream.length else xs
    rng = np.random.default_rng(int(stream.seed))
    n = stream.length
    if stream.kind == "gaussian":
        mean, sigma = (float(v) for v in stream.params)
        return rng.normal(mean, sigma, n)
    if stream.kind == "exponential":
        return rng.exponential(1.0, n)
    # survival exp(-t^(1/alpha)) on t >= 0  <=>  X = E^alpha with E ~ Exp(1)
    alpha = float(stream.params[0])
    return rng.exponential(1.0, n) ** alpha


def split_sources(samples: Sequence[float], sources: int) -> List[np.ndarray]:
    """Contiguous split into ``sources`` near-equal parts, in order."""
    xs = np.asarray(samples)
    if isinstance(sources, bool) or int(sources) != sources or sources < 1:
        raise ConfigError(f"number of sources must be a positive integer, got {sources!r}")
    if sources > xs.shape[0]:
        raise ConfigError(f"cannot split {xs.shape[0]} samples into {sources} non-empty sources")
    return np.array_split(xs, int(sources))


# -- files -------------------------------------------------------------------------

def read_samples(path) -> np.ndarray:
    """One finite decimal per line; blank lines are ignored."""
    values = []
    try:
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.strip()
                if not line:
                    continue
                try:
                    v = float(line)
                except ValueError:
                    raise DataError(f"{path}:{lineno}: not a number: {line!r}") from None
                if not math.isfinite(v):
                    raise DataError(f"{path}:{lineno}: non-finite value")
                values.append(v)
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from None
    return np.array(values, dtype=np.float64)


def read_grouped(path) -> Dict[str, np.ndarray]:
    """Two-column CSV ``group,value``; a header row is skipped if present."""
    groups: Dict[str, list] = {}
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            for lineno, row in enumerate(csv.reader(fh), 1):
                if not row or all(not c.strip() for c in row):
                    continue
                if len(row) != 2:
                    raise DataError(f"{path}:{lineno}: expected 'group,value'")
                g, v = row[0].strip(), row[1].strip()
                try:
                    x = float(v)
                except ValueError:
                    if lineno == 1:
                        continue
                    raise DataError(f"{path}:{lineno}: not a number: {v!r}") from None
                if not math.isfinite(x):
                    raise DataError(f"{path}:{lineno}: non-finite value")
                groups.setdefault(g, []).append(x)
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from None
    return {g: np.array(v, dtype=np.float64) for g, v in groups.items()}


def write_samples(path, samples) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for x in np.asarray(samples, dtype=np.float64):
            fh.write(f"{float(x)!r}\n")


# -- tail diagnostics ------------------------------------------------------------

@dataclass
class TailDiagnostic:
    model: TailModel
    consistent: bool
    statistic: float
    bound: float
    violation_at: Optional[float] = None
    detail: Dict[str, float] = field(default_factory=dict)


def tail_diagnostic(samples, model: TailModel, slack: float = 0.5, c_sigma: float = 1.0,
                    delta: float = 0.05, grid_points: int = 200) -> TailDiagnostic:
    """Heuristic check of a declared tail model against a sample.

    Sub-Gaussian: the mean of ``x**2`` must not exceed
    ``c_sigma * (1 + slack)**2 * sigma**2``.

    Sub-Weibull: on a grid of thresholds ``t`` the empirical survival
    ``P(X >= t)`` must stay below ``1.5 * c_alpha * exp(-t**(1/alpha))``. The
    grid stops where the Chernoff margin still holds with probability
    ``1 - delta``, i.e. ``t <= log(n c_alpha / (12 log(1/delta)))**alpha``;
    beyond that a single sample could trip the check.
    """
    xs = np.asarray(samples, dtype=np.float64)
    if xs.ndim != 1 or xs.size < 2:
        raise DataError("tail diagnostic needs at least 2 samples")
    if not np.all(np.isfinite(xs)):
        raise DataError("samples must be finite")
    if isinstance(model, SubGaussian):
        second = float(np.mean(xs * xs))
        bound = c_sigma * (1.0 + slack) ** 2 * model.sigma ** 2
        return TailDiagnostic(model, second <= bound, second, bound)
    if isinstance(model, SubWeibull):
        n = xs.size
        reach = math.log(n * model.c_alpha / (12.0 * math.log(1.0 / delta)))
        if reach <= 0:
            return TailDiagnostic(model, True, 0.0, 0.0, detail={"t_max": 0.0})
        t_max = reach ** model.alpha
        ts = np.linspace(t_max / grid_points, t_max, grid_points)
        srt = np.sort(xs)
        survival = (n - np.searchsorted(srt, ts, side="left")) / n
        bound = 1.5 * model.c_alpha * np.exp(-ts ** (1.0 / model.alpha))
        bad = np.nonzero(survival > bound)[0]
        worst = float(np.max(survival / bound))
        if bad.size:
            return TailDiagnostic(model, False, worst, 1.0, float(ts[bad[-1]]), {"t_max": t_max})
        return TailDiagnostic(model, True, worst, 1.0, None, {"t_max": t_max})
    raise ConfigError(f"unsupported tail model {model!r}")
