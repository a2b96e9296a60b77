"""Command-line entry point: ``streamdist <command> ...``.

Exit codes: 0 success, 2 configuration error, 3 data or format error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import List, Optional

from . import summaries as _summaries
from .audit import audit_fairness, audit_privacy
from .bucketing import BucketSpec
from .distances import distance_report
from .errors import ConfigError, DataError, StreamDistError
from .estimators import HALF_EPS, QUARTER_EPS, EstimatorConfig, plan_tv, plan_wasserstein
from .experiments import parse_grid, sweep, write_csv
from .streams import generate, parse_source, read_grouped, read_samples
from .summaries import DistributionSummary, merge_summaries
from .tails import parse_tail

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DATA = 3


def _emit(obj) -> None:
    json.dump(obj, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


def _config(args) -> EstimatorConfig:
    return EstimatorConfig(
        epsilon=args.epsilon, delta=args.delta, tail=parse_tail(args.tail), lipschitz=args.lipschitz,
        const=args.const, wasserstein_bucket_rule=getattr(args, "bucket_rule", QUARTER_EPS),
    )


def _plan_dict(plan) -> dict:
    return {"bucket_width": plan.bucket_width, "counters": plan.counters, "n_min": plan.n_min}


# -- commands ----------------------------------------------------------------------

def cmd_summarize(args) -> int:
    xs = read_samples(args.input)
    tail = parse_tail(args.tail) if args.tail else None
    spec = BucketSpec(args.bucket_width, args.origin)
    s = DistributionSummary.from_samples(xs, spec, args.counters, tail)
    _summaries.save(s, args.out, args.format)
    _emit({"mode": args.mode, "n": s.n, "assigned_buckets": s.assigned_buckets, "capacity": s.capacity,
           "bucket_width": spec.width, "origin": spec.origin, "out": args.out})
    return EXIT_OK


def cmd_merge(args) -> int:
    merged = merge_summaries(_summaries.load(p) for p in args.summaries)
    _summaries.save(merged, args.out, args.format)
    _emit({"n": merged.n, "assigned_buckets": merged.assigned_buckets, "inputs": len(args.summaries), "out": args.out})
    return EXIT_OK


def cmd_dist(args) -> int:
    a = _summaries.load(args.summary_a)
    b = _summaries.load(args.summary_b)
    p = args.p if args.p is not None else (2.0 if args.metric == "lp" else 1.0)
    rep = distance_report(args.metric, a, b, p=p, tau=args.tau)
    _emit({"metric": rep.metric, "value": rep.value, "parameter": rep.parameter, "breakpoints": rep.breakpoints})
    return EXIT_OK


def cmd_plan(args) -> int:
    cfg = _config(args)
    plan = plan_wasserstein(cfg) if args.metric == "wasserstein" else plan_tv(cfg)
    _emit({"metric": args.metric, **_plan_dict(plan)})
    return EXIT_OK


def cmd_experiment(args) -> int:
    da = parse_source(args.dist_a, seed=args.seed, length=args.n)
    db = parse_source(args.dist_b, seed=args.seed + 1, length=args.n)
    a, b = generate(da), generate(db)
    rows = sweep(a, b, args.bucket_width, parse_grid(args.counters_grid), args.sources, args.metric)
    if args.out == "-":
        write_csv(rows, sys.stdout)
    else:
        with open(args.out, "w", newline="", encoding="utf-8") as fh:
            write_csv(rows, fh)
    return EXIT_OK


def cmd_audit_fairness(args) -> int:
    groups = read_grouped(args.scores)
    rep = audit_fairness(groups, _config(args), bucket_width=args.bucket_width, counters=args.counters,
                         sources=args.sources)
    _emit(rep.as_dict())
    return EXIT_OK


def cmd_audit_privacy(args) -> int:
    try:
        alphas = [float(a) for a in args.alphas.split(",") if a.strip()]
    except ValueError:
        raise ConfigError(f"bad --alphas {args.alphas!r}") from None
    rep = audit_privacy(read_samples(args.in_losses), read_samples(args.out_losses), _config(args), alphas,
                        bucket_width=args.bucket_width, counters=args.counters, sources=args.sources)
    _emit(rep.as_dict())
    return EXIT_OK


# -- parser ------------------------------------------------------------------------

def _add_estimator_args(p, metric_default_rule=False):
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--tail", required=True, help="subgaussian:SIGMA or subweibull:ALPHA[,CALPHA]")
    p.add_argument("--lipschitz", type=float, required=True)
    p.add_argument("--const", type=float, default=1.0)
    if metric_default_rule:
        p.add_argument("--bucket-rule", choices=(QUARTER_EPS, HALF_EPS), default=QUARTER_EPS)


def _add_overrides(p):
    p.add_argument("--bucket-width", type=float, default=None, help="override the planned bucket width")
    p.add_argument("--counters", type=int, default=None, help="override the planned counter budget")
    p.add_argument("--sources", type=int, default=1, help="split each stream into this many sources")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="streamdist", description="Sublinear distribution summaries and distances.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("summarize", help="summarize a sample file")
    p.add_argument("--input", required=True)
    p.add_argument("--mode", choices=("pdf", "cdf"), default="cdf")
    p.add_argument("--bucket-width", type=float, required=True)
    p.add_argument("--origin", type=float, default=0.0)
    p.add_argument("--counters", type=int, required=True)
    p.add_argument("--tail", default=None)
    p.add_argument("--format", choices=("binary", "json"), default="binary")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_summarize)

    p = sub.add_parser("merge", help="merge summary files")
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=("binary", "json"), default="binary")
    p.add_argument("summaries", nargs="+")
    p.set_defaults(func=cmd_merge)

    p = sub.add_parser("dist", help="distance between two summary files")
    p.add_argument("--metric", choices=("wasserstein", "tv", "lp", "hockeystick"), required=True)
    p.add_argument("--p", type=float, default=None)
    p.add_argument("--tau", type=float, default=1.0)
    p.add_argument("summary_a")
    p.add_argument("summary_b")
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("plan", help="bucket width / counters / minimum length")
    p.add_argument("--metric", choices=("wasserstein", "tv"), required=True)
    _add_estimator_args(p, metric_default_rule=True)
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("experiment", help="synthetic accuracy sweeps")
    esub = p.add_subparsers(dest="experiment", required=True)
    e = esub.add_parser("synthetic")
    e.add_argument("--dist-a", default="gaussian:0,5")
    e.add_argument("--dist-b", default="gaussian:1,5")
    e.add_argument("--n", type=int, default=100_000)
    e.add_argument("--bucket-width", type=float, default=0.05)
    e.add_argument("--counters-grid", default="100:2000:100")
    e.add_argument("--sources", type=int, default=10)
    e.add_argument("--metric", choices=("wasserstein", "tv"), default="wasserstein")
    e.add_argument("--seed", type=int, default=7)
    e.add_argument("--out", default="-")
    e.set_defaults(func=cmd_experiment)

    p = sub.add_parser("audit", help="fairness and privacy audits")
    asub = p.add_subparsers(dest="audit", required=True)
    a = asub.add_parser("fairness")
    a.add_argument("--scores", required=True, help="CSV with group,value rows")
    _add_estimator_args(a, metric_default_rule=True)
    _add_overrides(a)
    a.set_defaults(func=cmd_audit_fairness)
    a = asub.add_parser("privacy")
    a.add_argument("--in", dest="in_losses", required=True)
    a.add_argument("--out-losses", required=True)
    a.add_argument("--alphas", default="0")
    _add_estimator_args(a)
    _add_overrides(a)
    a.set_defaults(func=cmd_audit_privacy)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse usage errors
        return EXIT_CONFIG if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except StreamDistError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


def main_exit() -> None:
    sys.exit(main())


if __name__ == "__main__":  # pragma: no cover
    main_exit()
