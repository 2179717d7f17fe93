"""Command-line entry point: ``budget-stream acquire | sweep | report``.

Exit codes: 0 success, 1 data/runtime error, 2 usage or config error.
No command mutates its inputs; all outputs go under the requested output
location.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import fields, replace
from pathlib import Path

from .datasets import (
    ParseError,
    SchemaError,
    generate_synthetic,
    load_dataset,
    split_stream,
)
from .engine import run_stream, write_training_csv
from .harness import (
    SweepConfig,
    SweepError,
    read_aggregates_csv,
    stream_budget_units,
    sweep,
)
from .policies import POLICY_NAMES, PolicyParams, make_policy
from .report import write_report
from .tree import TreeParams

SEED_ENV_VAR = "BUDGET_STREAM_SEED"


class ConfigError(ValueError):
    """Malformed run configuration; reported with exit code 2."""


def _alpha_flag(text: str) -> float:
    value = float(text)
    if not 0.0 < value <= 1.0:
        raise argparse.ArgumentTypeError("must be in (0, 1]")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="budget-stream",
        description="Simulate online budgeted feature-value acquisition from data streams.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    acquire = sub.add_parser(
        "acquire", help="run one acquisition pass and write the training set + trace"
    )
    acquire.add_argument("--data", required=True, help="data CSV (last column = label)")
    acquire.add_argument("--costs", required=True, help="costs CSV (feature,cost)")
    acquire.add_argument("--policy", required=True, choices=POLICY_NAMES)
    acquire.add_argument("--alpha", required=True, type=_alpha_flag,
                         help="budget as a fraction of full acquisition cost, in (0, 1]")
    acquire.add_argument("--seed", required=True, type=int)
    acquire.add_argument("--out", required=True, help="output directory")
    acquire.add_argument("--warmup-fraction", type=float, default=0.2)
    acquire.add_argument("--variance-floor", type=float, default=1e-6)
    acquire.add_argument("--rebuild-interval", type=int, default=1)
    acquire.set_defaults(handler=cmd_acquire)

    sweep_cmd = sub.add_parser("sweep", help="run the full budget-sweep experiment grid")
    sweep_cmd.add_argument("--config", required=True, help="JSON sweep configuration")
    sweep_cmd.add_argument("--out", required=True, help="output directory")
    sweep_cmd.add_argument("--runs", type=int, default=None, help="override config runs")
    sweep_cmd.add_argument("--threads", type=int, default=1, help="max parallel workers")
    sweep_cmd.set_defaults(handler=cmd_sweep)

    report = sub.add_parser("report", help="render budget-vs-AUC curves from aggregates")
    report.add_argument("--results", required=True, help="aggregate CSV from sweep")
    report.add_argument("--out", required=True, help="output SVG path")
    report.set_defaults(handler=cmd_report)
    return parser


def cmd_acquire(args) -> int:
    dataset = load_dataset(args.data, args.costs)
    split = split_stream(dataset, args.seed)
    budget = stream_budget_units(dataset, args.alpha, len(split.stream))
    params = PolicyParams(
        warmup_fraction=args.warmup_fraction,
        variance_floor=args.variance_floor,
        rebuild_interval=args.rebuild_interval,
    )
    policy = make_policy(args.policy, seed=args.seed, params=params, dataset=dataset)
    training, trace = run_stream(dataset, split, policy, budget)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_training_csv(training, dataset, out / "training.csv")
    trace.write_csv(out / "trace.csv", dataset.feature_names)
    print(
        f"acquired {len(training)} instances "
        f"({training.fully_acquired_count()} complete) -> {out}"
    )
    return 0


def cmd_sweep(args) -> int:
    try:
        with open(args.config, encoding="utf-8") as fh:
            document = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{args.config}: not valid JSON: {exc}") from exc
    data_spec, config = parse_sweep_config(document)
    if args.runs is not None:
        if args.runs < 1:
            raise ConfigError("runs override must be >= 1")
        config = replace(config, runs=args.runs)
    try:
        config.validate()
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    dataset = load_config_dataset(data_spec)
    result = sweep(dataset, config, threads=max(1, args.threads))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    result.write_results_csv(out / "results.csv")
    result.write_aggregates_csv(out / "aggregates.csv")
    print(f"wrote {len(result.rows)} result rows -> {out}")
    return 0


_TOP_KEYS = {
    "data",
    "policies",
    "alphas",
    "runs",
    "base_seed",
    "warmup_fraction",
    "variance_floor",
    "rebuild_interval",
    "tree",
    "include_complete",
}
_TREE_KEYS = {f.name for f in fields(TreeParams)}
_SYNTHETIC_KEYS = {
    "n_instances",
    "n_informative",
    "n_noise",
    "cost_profile",
    "seed",
    "label_noise",
}


def parse_sweep_config(document) -> tuple[dict, SweepConfig]:
    """Validate a JSON sweep config; returns (data spec, SweepConfig)."""
    if not isinstance(document, dict):
        raise ConfigError("config must be a JSON object")
    for key in document:
        if key not in _TOP_KEYS:
            raise ConfigError(f"unknown config key: {key}")
    if "data" not in document:
        raise ConfigError("missing config key: data")
    data_spec = document["data"]
    if not isinstance(data_spec, dict) or not (
        {"csv", "costs"} == set(data_spec) or {"synthetic"} == set(data_spec)
    ):
        raise ConfigError('data must be {"csv": ..., "costs": ...} or {"synthetic": {...}}')
    if "synthetic" in data_spec:
        for key in data_spec["synthetic"]:
            if key not in _SYNTHETIC_KEYS:
                raise ConfigError(f"unknown config key: data.synthetic.{key}")

    tree_doc = document.get("tree", {})
    if not isinstance(tree_doc, dict):
        raise ConfigError("tree must be a JSON object")
    for key in tree_doc:
        if key not in _TREE_KEYS:
            raise ConfigError(f"unknown config key: tree.{key}")

    base_seed = document.get("base_seed")
    if base_seed is None:
        base_seed = int(os.environ.get(SEED_ENV_VAR, "0"))

    kwargs = {}
    if "policies" in document:
        kwargs["policies"] = tuple(document["policies"])
    if "alphas" in document:
        kwargs["alphas"] = tuple(document["alphas"])
    if "runs" in document:
        kwargs["runs"] = document["runs"]
    if "include_complete" in document:
        kwargs["include_complete"] = bool(document["include_complete"])
    for key in ("warmup_fraction", "variance_floor", "rebuild_interval"):
        if key in document:
            kwargs[key] = document[key]
    kwargs.update(tree_doc)
    try:
        config = SweepConfig(base_seed=int(base_seed), **kwargs)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    return data_spec, config


def load_config_dataset(data_spec: dict):
    if "synthetic" in data_spec:
        return generate_synthetic(**data_spec["synthetic"])
    return load_dataset(data_spec["csv"], data_spec["costs"])


def cmd_report(args) -> int:
    aggregates = read_aggregates_csv(args.results)
    if not aggregates:
        raise ValueError(f"{args.results}: no data rows")
    out = Path(args.out)
    if out.parent != Path(""):
        out.parent.mkdir(parents=True, exist_ok=True)
    write_report(aggregates, out, out.with_suffix(".md"))
    print(f"wrote {out} and {out.with_suffix('.md')}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (SchemaError, ParseError, SweepError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
