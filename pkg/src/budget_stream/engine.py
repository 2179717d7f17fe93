"""The acquisition loop: per-instance budgeting, select/acquire/prune cycles,
label sampling, training-set accumulation, and a per-acquisition audit trace.

All money moves through integer micro-units, so the budget-safety invariants
(spend never exceeds an instance's budget; the sum of instance budgets never
exceeds the total budget) hold exactly, not within a float tolerance.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator

from ._validation import as_float_matrix, as_label_vector, check_fraction
from .datasets import Dataset, FeatureSpec, StreamSplit
from .policies import AcquisitionPolicy, PolicyParams, make_policy
from .units import format_units, fraction_from_decimal, scaled_floor, to_units


class ContractError(RuntimeError):
    """An engine invariant was violated; this is a bug, not a user error."""


@dataclass
class Instance:
    """One stream instance with its partially acquired feature values."""

    row: int  # index into the source dataset
    budget_units: int
    acquired: dict[int, float] = field(default_factory=dict)
    spent_units: int = 0
    label: int | None = None


@dataclass
class TrainingSet:
    """Finalized instances accumulated over a run, in arrival order."""

    n_features: int
    class_count: int
    instances: list[Instance] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.instances)

    def append(self, instance: Instance) -> None:
        self.instances.append(instance)

    def to_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Masked feature matrix (NaN = never acquired) plus label vector."""
        X = np.full((len(self.instances), self.n_features), np.nan)
        y = np.empty(len(self.instances), dtype=np.int64)
        for i, instance in enumerate(self.instances):
            for fid, value in instance.acquired.items():
                X[i, fid] = value
            if instance.label is None:
                raise ContractError(f"instance {i} was never labeled")
            y[i] = instance.label
        return X, y

    def total_spent_units(self) -> int:
        return sum(inst.spent_units for inst in self.instances)

    def total_budget_units(self) -> int:
        return sum(inst.budget_units for inst in self.instances)

    def fully_acquired_count(self) -> int:
        return sum(
            1 for inst in self.instances if len(inst.acquired) == self.n_features
        )


@dataclass
class TraceRecord:
    index: int  # position in the stream
    budget_units: int
    acquisitions: list[tuple[int, int, int]]  # (feature id, cost, cumulative spend)
    leftover_units: int


@dataclass
class AcquisitionTrace:
    """Per-acquisition audit of a run; reconciles exactly with the spend."""

    records: list[TraceRecord] = field(default_factory=list)

    def total_spent_units(self) -> int:
        return sum(cost for rec in self.records for _, cost, _ in rec.acquisitions)

    def write_csv(self, path, feature_names: list[str]) -> None:
        """One row per acquisition; label-only instances get a single row
        with empty feature/cost cells."""
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(
                ["instance_index", "budget", "feature", "cost", "cumulative_spent", "leftover"]
            )
            for rec in self.records:
                budget = format_units(rec.budget_units)
                leftover = format_units(rec.leftover_units)
                if not rec.acquisitions:
                    writer.writerow([rec.index, budget, "", "", "0", leftover])
                    continue
                for fid, cost, cumulative in rec.acquisitions:
                    writer.writerow(
                        [
                            rec.index,
                            budget,
                            feature_names[fid],
                            format_units(cost),
                            format_units(cumulative),
                            leftover,
                        ]
                    )


def prune_potential(
    pf: list[int], spent_units: int, budget_units: int, costs_units: list[int]
) -> list[int]:
    """Keep exactly the features still affordable under the remaining budget."""
    return [fid for fid in pf if costs_units[fid] + spent_units <= budget_units]


def acquire(
    instance: Instance, fid: int, dataset: Dataset, costs_units: list[int]
) -> None:
    """Copy one feature value into the instance and charge its cost."""
    if fid in instance.acquired:
        raise ContractError(f"feature {fid} acquired twice")
    cost = costs_units[fid]
    if instance.spent_units + cost > instance.budget_units:
        raise ContractError(
            f"acquiring feature {fid} would exceed the instance budget"
        )
    instance.acquired[fid] = float(dataset.X[instance.row, fid])
    instance.spent_units += cost


def run_stream(
    dataset: Dataset,
    split: StreamSplit,
    policy: AcquisitionPolicy,
    total_budget_units: int,
    rollover: bool = False,
) -> tuple[TrainingSet, AcquisitionTrace]:
    """Run the full acquisition loop over the stream.

    Per arriving instance: allocate a budget, initialize the potential set to
    the individually affordable features, then select/acquire/charge/prune
    until the potential set empties; the label is revealed only afterwards
    (it is free and must not influence acquisition).

    By default an instance's unspent budget is forfeited; with ``rollover``
    it carries into the next instance's budget instead (total spend still
    never exceeds the overall budget).
    """
    if total_budget_units < 0:
        raise ValueError("budget must be >= 0")
    costs = dataset.costs_units
    n = dataset.n_features
    training = TrainingSet(n_features=n, class_count=dataset.class_count)
    trace = AcquisitionTrace()
    policy.start_stream(costs, total_budget_units, len(split.stream))
    carried = 0
    for position, row in enumerate(split.stream):
        budget = policy.budget_for(position) + carried
        instance = Instance(row=row, budget_units=budget)
        policy.start_instance(position, budget)
        pf = [fid for fid in range(n) if costs[fid] <= budget]
        acquisitions: list[tuple[int, int, int]] = []
        while pf:
            fid = policy.select_feature(pf, instance.acquired)
            if fid not in pf:
                raise ContractError(
                    f"policy {policy.name!r} selected feature {fid} outside the potential set"
                )
            acquire(instance, fid, dataset, costs)
            acquisitions.append((fid, costs[fid], instance.spent_units))
            pf.remove(fid)
            pf = prune_potential(pf, instance.spent_units, budget, costs)
        instance.label = int(dataset.y[row])
        training.append(instance)
        leftover = budget - instance.spent_units
        trace.records.append(TraceRecord(position, budget, acquisitions, leftover))
        if rollover:
            carried = leftover
        policy.update(instance, training)
    return training, trace


def run_complete(
    dataset: Dataset, split: StreamSplit
) -> tuple[TrainingSet, AcquisitionTrace]:
    """Complete feature-value acquisition of the stream (no budget pressure)."""
    costs = dataset.costs_units
    n = dataset.n_features
    full_cost = dataset.total_cost_units
    training = TrainingSet(n_features=n, class_count=dataset.class_count)
    trace = AcquisitionTrace()
    for position, row in enumerate(split.stream):
        instance = Instance(row=row, budget_units=full_cost)
        acquisitions = []
        for fid in range(n):
            acquire(instance, fid, dataset, costs)
            acquisitions.append((fid, costs[fid], instance.spent_units))
        instance.label = int(dataset.y[row])
        training.append(instance)
        trace.records.append(TraceRecord(position, full_cost, acquisitions, 0))
    return training, trace


def write_training_csv(
    training: TrainingSet, dataset: Dataset, path
) -> None:
    """Acquired training set as CSV; never-acquired values are empty cells."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(dataset.feature_names + ["label"])
        for instance in training.instances:
            cells = [
                repr(instance.acquired[fid]) if fid in instance.acquired else ""
                for fid in range(training.n_features)
            ]
            writer.writerow(cells + [dataset.label_names[instance.label]])


class BudgetedAcquirer(BaseEstimator):
    """Sklearn-style front end for the acquisition loop.

    Treats the rows of ``X`` (in order) as the arrival stream and returns a
    copy of ``X`` with every value the policy did not acquire masked to NaN,
    ready to feed into any missing-tolerant estimator. The total budget is
    ``alpha`` times the cost of acquiring everything.
    """

    def __init__(
        self,
        policy: str = "variance_cost",
        alpha: float = 0.3,
        costs=None,
        seed: int = 0,
        warmup_fraction: float = 0.2,
        variance_floor: float = 1e-6,
        rebuild_interval: int = 1,
    ):
        self.policy = policy
        self.alpha = alpha
        self.costs = costs
        self.seed = seed
        self.warmup_fraction = warmup_fraction
        self.variance_floor = variance_floor
        self.rebuild_interval = rebuild_interval

    def fit_transform(self, X, y) -> np.ndarray:
        X = as_float_matrix(X)
        y = as_label_vector(y, n_rows=X.shape[0])
        check_fraction(self.alpha, "alpha")
        classes, y_encoded = np.unique(y, return_inverse=True)
        if len(classes) < 2:
            raise ValueError("need at least 2 classes")
        if self.costs is None:
            cost_units = [to_units(1)] * X.shape[1]
        else:
            cost_units = [to_units(c) for c in self.costs]
        features = [
            FeatureSpec(i, f"f{i}", c) for i, c in enumerate(cost_units)
        ]
        dataset = Dataset(
            features, X, y_encoded, len(classes), [str(c) for c in classes]
        )
        split = StreamSplit(stream=tuple(range(X.shape[0])), test=(), seed=self.seed)
        budget = scaled_floor(
            fraction_from_decimal(self.alpha) * X.shape[0], dataset.total_cost_units
        )
        params = PolicyParams(
            warmup_fraction=self.warmup_fraction,
            variance_floor=self.variance_floor,
            rebuild_interval=self.rebuild_interval,
        )
        policy = make_policy(self.policy, seed=self.seed, params=params, dataset=dataset)
        training, trace = run_stream(dataset, split, policy, budget)
        masked, _ = training.to_arrays()
        self.classes_ = classes
        self.n_features_in_ = X.shape[1]
        self.total_budget_units_ = budget
        self.total_spent_units_ = training.total_spent_units()
        self.trace_ = trace
        self.X_acquired_ = masked
        return masked

    def fit(self, X, y):
        self.fit_transform(X, y)
        return self
