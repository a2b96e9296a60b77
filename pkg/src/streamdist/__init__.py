"""Sublinear, mergeable distribution summaries with Wasserstein and TV estimates.

A stream of real values is bucketed to a grid of width ``b`` and fed to a
mergeable Misra-Gries sketch over bucket indices. The sketch yields PDF, CDF
and quantile estimates, and two summaries yield W_p, TV, l_p and hockey-stick
distances.
"""

from .audit import AuditReport, audit_fairness, audit_privacy
from .bucketing import BucketedEmpirical, BucketSpec, bucket_indices, bucketize_exact, snap_to_midpoints
from .distances import (
    DistanceReport,
    distance_report,
    hockey_stick,
    lp_distance,
    oracle_tv,
    oracle_wasserstein1,
    riemann_wasserstein,
    tv,
    wasserstein_p,
)
from .errors import ConfigError, CounterOverflowError, DataError, FormatError, StreamDistError
from .estimators import (
    EstimatePlan,
    EstimateReport,
    EstimatorConfig,
    plan_tv,
    plan_wasserstein,
    sca_counters,
    spa_counters,
    spa_l1_counters,
    stva,
    swa,
    tv_bucket_width,
)
from .mmg import CounterSketch, merge_all
from .streams import SourceStream, generate, parse_source, split_sources, tail_diagnostic
from .summaries import DistributionSummary, deserialize, merge_summaries, serialize
from .tails import SubGaussian, SubWeibull, parse_tail

__version__ = "0.1.0"
