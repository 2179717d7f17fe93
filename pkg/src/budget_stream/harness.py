"""Budget-sweep experiments: policies x budget fractions x seeded runs.

Each grid cell splits the data 70/30, runs the acquisition loop over the
stream under budget alpha * |stream| * sum(costs), trains the cost-aware tree
on the acquired training set, and scores macro one-vs-rest AUC on the
held-out rows. Cells are independent, so they parallelize across processes;
results are emitted in a canonical order either way.
"""

from __future__ import annotations

import csv
import hashlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ._validation import check_fraction
from .datasets import Dataset, split_stream
from .engine import run_complete, run_stream
from .metrics import multiclass_auc
from .policies import POLICY_NAMES, PolicyParams, make_policy
from .tree import CostAwareTreeClassifier, TreeParams
from .units import format_units, fraction_from_decimal, scaled_floor

COMPLETE = "complete"

RESULTS_HEADER = ["policy", "alpha", "seed", "auc", "total_spent", "full_instances"]
AGGREGATES_HEADER = ["policy", "alpha", "mean_auc", "std_auc"]


class SweepError(RuntimeError):
    """A grid cell failed; the message carries the grid coordinates."""


@dataclass(frozen=True)
class SweepConfig:
    policies: tuple[str, ...] = POLICY_NAMES
    alphas: tuple[float, ...] = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9)
    runs: int = 10
    base_seed: int = 0
    warmup_fraction: float = 0.2
    variance_floor: float = 1e-6
    rebuild_interval: int = 1
    max_depth: int = 12
    min_leaf: int = 5
    cost_exponent: float = 1.0
    missing_policy: str = "weighted"
    include_complete: bool = True

    def validate(self) -> None:
        if not self.policies:
            raise ValueError("policies must not be empty")
        for name in self.policies:
            if name not in POLICY_NAMES:
                raise ValueError(f"unknown policy {name!r}; choose from {POLICY_NAMES}")
        if len(set(self.policies)) != len(self.policies):
            raise ValueError("policies must not repeat")
        if not self.alphas:
            raise ValueError("alphas must not be empty")
        for a in self.alphas:
            check_fraction(a, "alpha")
        if any(b <= a for a, b in zip(self.alphas, self.alphas[1:])):
            raise ValueError("alphas must be strictly increasing")
        if self.runs < 1:
            raise ValueError("runs must be >= 1")
        check_fraction(self.warmup_fraction, "warmup_fraction", closed_top=False)
        self.tree_params()  # validates tree fields

    def policy_params(self) -> PolicyParams:
        return PolicyParams(
            warmup_fraction=self.warmup_fraction,
            variance_floor=self.variance_floor,
            rebuild_interval=self.rebuild_interval,
            tree_params=self.tree_params(),
        )

    def tree_params(self) -> TreeParams:
        return TreeParams(
            max_depth=self.max_depth,
            min_leaf=self.min_leaf,
            cost_exponent=self.cost_exponent,
            missing_policy=self.missing_policy,
        )


@dataclass(frozen=True)
class RunRow:
    policy: str
    alpha: float
    seed: int  # the run's split seed, shared across policies of the same run
    auc: float
    total_spent_units: int
    full_instances: int


@dataclass(frozen=True)
class AggregateRow:
    policy: str
    alpha: float
    mean_auc: float
    std_auc: float


@dataclass
class SweepResult:
    rows: list[RunRow] = field(default_factory=list)
    aggregates: list[AggregateRow] = field(default_factory=list)

    def write_results_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(RESULTS_HEADER)
            for r in self.rows:
                writer.writerow(
                    [
                        r.policy,
                        repr(float(r.alpha)),
                        r.seed,
                        repr(float(r.auc)),
                        format_units(r.total_spent_units),
                        r.full_instances,
                    ]
                )

    def write_aggregates_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(AGGREGATES_HEADER)
            for a in self.aggregates:
                writer.writerow(
                    [
                        a.policy,
                        repr(float(a.alpha)),
                        repr(float(a.mean_auc)),
                        repr(float(a.std_auc)),
                    ]
                )


def derive_seed(base_seed: int, *parts) -> int:
    """Stable per-cell seed so distinct grid cells never share rng streams."""
    text = "|".join(str(p) for p in parts)
    digest = hashlib.blake2b(text.encode("utf-8"), digest_size=8).digest()
    return (int(base_seed) ^ int.from_bytes(digest, "big")) & ((1 << 63) - 1)


def stream_budget_units(dataset: Dataset, alpha: float, stream_length: int) -> int:
    """Total budget: alpha times the cost of acquiring the whole stream."""
    return scaled_floor(
        fraction_from_decimal(alpha) * stream_length, dataset.total_cost_units
    )


def run_once(
    dataset: Dataset,
    policy_name: str,
    alpha: float,
    run_index: int,
    config: SweepConfig,
) -> RunRow:
    """One grid cell: split, acquire, train, evaluate."""
    split_seed = derive_seed(config.base_seed, "split", run_index)
    split = split_stream(dataset, split_seed)
    if policy_name == COMPLETE:
        training, _ = run_complete(dataset, split)
    else:
        budget = stream_budget_units(dataset, alpha, len(split.stream))
        policy_seed = derive_seed(
            config.base_seed, "policy", policy_name, repr(float(alpha)), run_index
        )
        policy = make_policy(
            policy_name, seed=policy_seed, params=config.policy_params(), dataset=dataset
        )
        training, _ = run_stream(dataset, split, policy, budget)

    X_train, y_train = training.to_arrays()
    classifier = CostAwareTreeClassifier(
        costs=dataset.costs(),
        max_depth=config.max_depth,
        min_leaf=config.min_leaf,
        cost_exponent=config.cost_exponent,
        missing_policy=config.missing_policy,
    ).fit(X_train, y_train)

    test = list(split.test)
    scores = np.zeros((len(test), dataset.class_count))
    scores[:, classifier.classes_] = classifier.predict_proba(dataset.X[test])
    auc = multiclass_auc(scores, dataset.y[test], dataset.class_count)
    return RunRow(
        policy=policy_name,
        alpha=alpha,
        seed=split_seed,
        auc=auc,
        total_spent_units=training.total_spent_units(),
        full_instances=training.fully_acquired_count(),
    )


# Worker-side state for process pools, installed once per worker instead of
# pickling the dataset into every task.
_WORKER_DATASET: Dataset | None = None
_WORKER_CONFIG: SweepConfig | None = None


def _init_worker(dataset: Dataset, config: SweepConfig) -> None:
    global _WORKER_DATASET, _WORKER_CONFIG
    _WORKER_DATASET = dataset
    _WORKER_CONFIG = config


def _run_cell(cell: tuple[str, float, int]) -> RunRow:
    policy, alpha, run_index = cell
    try:
        return run_once(_WORKER_DATASET, policy, alpha, run_index, _WORKER_CONFIG)
    except Exception as exc:
        raise SweepError(
            f"cell policy={policy} alpha={alpha} run={run_index}: {exc}"
        ) from exc


def sweep(dataset: Dataset, config: SweepConfig, threads: int = 1) -> SweepResult:
    """Run the full grid and aggregate mean/std AUC per (policy, alpha).

    The Complete baseline runs once per seed (it does not depend on alpha) and
    its aggregate is replicated across the alpha grid so budget-vs-AUC plots
    get a flat reference line.
    """
    config.validate()
    cells: list[tuple[str, float, int]] = [
        (policy, alpha, run)
        for policy in config.policies
        for alpha in config.alphas
        for run in range(config.runs)
    ]
    if config.include_complete:
        cells += [(COMPLETE, 1.0, run) for run in range(config.runs)]

    if threads > 1 and len(cells) > 1:
        with ProcessPoolExecutor(
            max_workers=min(threads, len(cells)),
            initializer=_init_worker,
            initargs=(dataset, config),
        ) as pool:
            rows = list(pool.map(_run_cell, cells, chunksize=4))
    else:
        _init_worker(dataset, config)
        rows = [_run_cell(cell) for cell in cells]

    aggregates: list[AggregateRow] = []
    by_cell: dict[tuple[str, float], list[float]] = {}
    for row in rows:
        by_cell.setdefault((row.policy, row.alpha), []).append(row.auc)
    for policy in config.policies:
        for alpha in config.alphas:
            values = by_cell[(policy, alpha)]
            aggregates.append(
                AggregateRow(policy, alpha, float(np.mean(values)), _std(values))
            )
    if config.include_complete:
        values = by_cell[(COMPLETE, 1.0)]
        mean, std = float(np.mean(values)), _std(values)
        for alpha in config.alphas:
            aggregates.append(AggregateRow(COMPLETE, alpha, mean, std))
    return SweepResult(rows=rows, aggregates=aggregates)


def _std(values: list[float]) -> float:
    return float(np.std(values, ddof=1)) if len(values) >= 2 else 0.0


def read_aggregates_csv(path) -> list[AggregateRow]:
    """Strict reader for the aggregate CSV; names the offending row on error."""
    rows: list[AggregateRow] = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != AGGREGATES_HEADER:
            raise ValueError(f"{path}: expected header {AGGREGATES_HEADER}, got {header}")
        for row_number, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 4:
                raise ValueError(f"{path}: row {row_number}: expected 4 cells")
            policy = row[0]
            try:
                alpha, mean_auc, std_auc = (float(c) for c in row[1:])
            except ValueError as exc:
                raise ValueError(f"{path}: row {row_number}: non-numeric cell") from exc
            rows.append(AggregateRow(policy, alpha, mean_auc, std_auc))
    return rows
