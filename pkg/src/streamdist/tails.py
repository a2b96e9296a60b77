"""Tail descriptions used for parameter planning and stored with summaries."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

from .errors import ConfigError


def _positive(name, value):
    value = float(value)
    if not math.isfinite(value) or value <= 0:
        raise ConfigError(f"{name} must be a finite positive number, got {value!r}")
    return value


@dataclass(frozen=True)
class SubGaussian:
    """Tail ``P(|X - EX| >= t) <= 2 exp(-t^2 / sigma^2)``."""

    sigma: float

    def __post_init__(self):
        object.__setattr__(self, "sigma", _positive("sigma", self.sigma))

    tag = 1

    @property
    def params(self):
        return (self.sigma, 0.0)


@dataclass(frozen=True)
class SubWeibull:
    """Tail ``P(X >= t) <= c_alpha exp(-t^(1/alpha))``."""

    alpha: float
    c_alpha: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "alpha", _positive("alpha", self.alpha))
        object.__setattr__(self, "c_alpha", _positive("c_alpha", self.c_alpha))

    tag = 2

    @property
    def params(self):
        return (self.alpha, self.c_alpha)


TailModel = Union[SubGaussian, SubWeibull]


def tail_from_tag(tag: int, p0: float, p1: float):
    if tag == 0:
        return None
    if tag == 1:
        return SubGaussian(p0)
    if tag == 2:
        return SubWeibull(p0, p1)
    raise ConfigError(f"unknown tail tag {tag}")


def combine_tails(a: TailModel, b: TailModel) -> TailModel:
    """The weaker of two tail models, as needed when planning for both sides.

    Mixed kinds resolve to the sub-Weibull side since a sub-Gaussian tail is
    also sub-Weibull with alpha = 1/2.
    """
    if isinstance(a, SubGaussian) and isinstance(b, SubGaussian):
        return SubGaussian(max(a.sigma, b.sigma))
    if isinstance(a, SubWeibull) and isinstance(b, SubWeibull):
        return SubWeibull(max(a.alpha, b.alpha), max(a.c_alpha, b.c_alpha))
    return a if isinstance(a, SubWeibull) else b


def parse_tail(text: str) -> TailModel:
    """Parse ``subgaussian:SIGMA`` or ``subweibull:ALPHA[,CALPHA]``."""
    kind, _, rest = text.partition(":")
    kind = kind.strip().lower()
    try:
        vals = [float(v) for v in rest.split(",")] if rest else []
    except ValueError:
        raise ConfigError(f"bad tail parameters in {text!r}") from None
    if kind in ("subgaussian", "sub-gaussian", "gaussian") and len(vals) == 1:
        return SubGaussian(vals[0])
    if kind in ("subweibull", "sub-weibull", "weibull") and len(vals) in (1, 2):
        return SubWeibull(*vals)
    raise ConfigError(f"tail must be subgaussian:SIGMA or subweibull:ALPHA[,CALPHA], got {text!r}")
