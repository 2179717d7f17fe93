"""Feature-value acquisition policies.

Two random policies (uniform and inverse-cost weighted), two adaptive
policies (variance-per-cost sampling and a tree walk that falls back to
variance sampling), and a non-viable upper-bound policy driven by a feature
ranking computed from complete data.

Random policies spread the budget evenly over the stream. Adaptive policies
first spend a fraction of the budget acquiring complete instances, then
spread what remains evenly over the rest of the stream.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from ._validation import check_fraction
from .stats import FeatureStats
from .tree import Inner, TreeNode, TreeParams, grow_tree, info_gain
from .units import SCALE, fraction_from_decimal

DEFAULT_VARIANCE_FLOOR = 1e-6

POLICY_NAMES = ("random", "cost", "variance_cost", "classifier", "oracle")


@dataclass(frozen=True)
class WarmupPlan:
    """How many leading instances are acquired completely, and what remains."""

    complete_count: int
    remaining_budget_units: int
    remaining_count: int

    @classmethod
    def plan(
        cls,
        warmup_fraction: float,
        total_budget_units: int,
        stream_length: int,
        total_cost_units: int,
    ) -> "WarmupPlan":
        target = fraction_from_decimal(warmup_fraction) * total_budget_units
        complete = min(int(target // total_cost_units), stream_length)
        return cls(
            complete_count=complete,
            remaining_budget_units=total_budget_units - complete * total_cost_units,
            remaining_count=stream_length - complete,
        )


class WalkAction(enum.Enum):
    ACQUIRE = "acquire"
    FALL_BACK = "fall_back"
    LEAF_REACHED = "leaf_reached"


class AcquisitionPolicy:
    """Contract shared by all policies.

    A policy is configured at construction, bound to a single run via
    ``start_stream``, and owned by that run's acquisition loop; distinct runs
    must hold distinct policy objects.
    """

    name = "base"
    adaptive = False

    def __init__(self, seed: int = 0):
        self.seed = seed

    def start_stream(
        self, costs_units: list[int], total_budget_units: int, stream_length: int
    ) -> None:
        if total_budget_units < 0:
            raise ValueError("budget must be >= 0")
        if any(c <= 0 for c in costs_units):
            raise ValueError("costs must be positive")
        self.costs_units = list(costs_units)
        self.costs = [c / SCALE for c in costs_units]
        self.total_cost_units = sum(costs_units)
        self.total_budget_units = total_budget_units
        self.stream_length = stream_length
        self.rng = np.random.default_rng(self.seed)
        self.instances_done = 0

    def budget_for(self, position: int) -> int:
        """Per-instance budget: an equal share of the total, floored."""
        if self.stream_length <= 0:
            return 0
        return self.total_budget_units // self.stream_length

    def start_instance(self, position: int, budget_units: int) -> None:
        pass

    def selection_weights(self, pf: list[int]) -> list[float]:
        raise NotImplementedError

    def selection_distribution(self, pf: list[int]) -> list[tuple[int, float]]:
        """Normalized selection probabilities over the potential feature set."""
        if not pf:
            raise ValueError("potential feature set is empty")
        weights = self.selection_weights(pf)
        total = sum(weights)
        return [(fid, w / total) for fid, w in zip(pf, weights)]

    def select_feature(self, pf: list[int], acquired: dict[int, float]) -> int:
        if not pf:
            raise ValueError("potential feature set is empty")
        return self._sample(pf, self.selection_weights(pf))

    def _sample(self, fids: list[int], weights: list[float]) -> int:
        total = sum(weights)
        r = self.rng.random() * total
        acc = 0.0
        for fid, w in zip(fids, weights):
            acc += w
            if r < acc:
                return fid
        return fids[-1]

    def update(self, instance, training_set) -> None:
        self.instances_done += 1


class PureRandomPolicy(AcquisitionPolicy):
    """Uniform selection over the potential set; the evaluation baseline."""

    name = "random"

    def selection_weights(self, pf):
        return [1.0] * len(pf)


class CostSensitiveRandomPolicy(AcquisitionPolicy):
    """Selection probability inversely proportional to acquisition cost."""

    name = "cost"

    def selection_weights(self, pf):
        return [1.0 / self.costs[fid] for fid in pf]


class _AdaptivePolicy(AcquisitionPolicy):
    adaptive = True

    def __init__(
        self,
        seed: int = 0,
        warmup_fraction: float = 0.2,
        variance_floor: float = DEFAULT_VARIANCE_FLOOR,
    ):
        super().__init__(seed)
        check_fraction(warmup_fraction, "warmup_fraction", closed_top=False)
        if variance_floor <= 0:
            raise ValueError("variance_floor must be > 0")
        self.warmup_fraction = warmup_fraction
        self.variance_floor = variance_floor

    def start_stream(self, costs_units, total_budget_units, stream_length):
        super().start_stream(costs_units, total_budget_units, stream_length)
        self.warmup = WarmupPlan.plan(
            self.warmup_fraction,
            total_budget_units,
            stream_length,
            self.total_cost_units,
        )
        self.stats = [FeatureStats() for _ in costs_units]
        self._in_warmup = False

    def budget_for(self, position):
        if position < self.warmup.complete_count:
            return self.total_cost_units
        if self.warmup.remaining_count <= 0:
            return 0
        return self.warmup.remaining_budget_units // self.warmup.remaining_count

    def start_instance(self, position, budget_units):
        self._in_warmup = position < self.warmup.complete_count

    def _variance_weight(self, fid: int) -> float:
        # Unobserved or constant-so-far features keep a small floor weight so
        # exploration never starves them permanently.
        variance = self.stats[fid].rescaled_variance()
        if variance is None or variance <= 0.0:
            variance = self.variance_floor
        return variance / self.costs[fid]

    def selection_weights(self, pf):
        return [self._variance_weight(fid) for fid in pf]

    def select_feature(self, pf, acquired):
        if not pf:
            raise ValueError("potential feature set is empty")
        if self._in_warmup:
            # Every feature gets acquired during warm-up; id order is as good
            # as any and keeps runs reproducible.
            return pf[0]
        return self._sample(pf, self.selection_weights(pf))

    def update(self, instance, training_set):
        for fid, value in instance.acquired.items():
            self.stats[fid].observe(value)
        super().update(instance, training_set)


class VarianceCostPolicy(_AdaptivePolicy):
    """Samples features proportionally to rescaled variance divided by cost."""

    name = "variance_cost"


class TreeWalkPolicy(_AdaptivePolicy):
    """Walks the current decision tree root-down to pick useful features.

    Inner nodes met on the walk name the features to acquire; the walk ends
    when it meets a feature outside the potential set or reaches a leaf, after
    which the instance's remaining picks use variance-per-cost sampling. The
    tree is regrown from the training set every ``rebuild_interval`` instances
    once warm-up has finished.
    """

    name = "classifier"

    def __init__(
        self,
        seed: int = 0,
        warmup_fraction: float = 0.2,
        variance_floor: float = DEFAULT_VARIANCE_FLOOR,
        rebuild_interval: int = 1,
        tree_params: TreeParams = TreeParams(),
    ):
        super().__init__(seed, warmup_fraction, variance_floor)
        if rebuild_interval < 1:
            raise ValueError("rebuild_interval must be >= 1")
        self.rebuild_interval = rebuild_interval
        self.tree_params = tree_params

    def start_stream(self, costs_units, total_budget_units, stream_length):
        super().start_stream(costs_units, total_budget_units, stream_length)
        self.tree: TreeNode | None = None
        self._walking = False

    def start_instance(self, position, budget_units):
        super().start_instance(position, budget_units)
        self._walking = self.tree is not None and not self._in_warmup

    def tree_walk_step(
        self, acquired: dict[int, float], pf: list[int]
    ) -> tuple[WalkAction, int | None]:
        """One step of the root-down walk.

        Already-acquired features descend by their stored value without
        charge; the first unacquired feature either gets acquired (if still
        affordable) or aborts the walk.
        """
        if self.tree is None:
            raise RuntimeError("tree_walk_step called before any tree was grown")
        node = self.tree
        while isinstance(node, Inner):
            fid = node.feature
            if fid in acquired:
                node = node.left if acquired[fid] <= node.threshold else node.right
                continue
            if fid in pf:
                return WalkAction.ACQUIRE, fid
            return WalkAction.FALL_BACK, None
        return WalkAction.LEAF_REACHED, None

    def select_feature(self, pf, acquired):
        if not pf:
            raise ValueError("potential feature set is empty")
        if self._in_warmup:
            return pf[0]
        if self._walking:
            action, fid = self.tree_walk_step(acquired, pf)
            if action is WalkAction.ACQUIRE:
                return fid
            self._walking = False
        return self._sample(pf, self.selection_weights(pf))

    def update(self, instance, training_set):
        super().update(instance, training_set)
        past_warmup = self.instances_done - self.warmup.complete_count
        if self.instances_done >= max(self.warmup.complete_count, 1) and (
            past_warmup % self.rebuild_interval == 0
        ):
            X, y = training_set.to_arrays()
            self.tree = grow_tree(
                X, y, training_set.class_count, self.costs, self.tree_params
            )


class OraclePolicy(AcquisitionPolicy):
    """Upper-bound policy following a fixed ranking from complete data.

    Not viable online (the ranking needs data that has not arrived yet); it
    estimates how well any acquisition policy could do.
    """

    name = "oracle"

    def __init__(self, ranking: list[int], seed: int = 0):
        super().__init__(seed)
        self.ranking = list(ranking)
        self._rank = {fid: i for i, fid in enumerate(self.ranking)}

    def start_stream(self, costs_units, total_budget_units, stream_length):
        super().start_stream(costs_units, total_budget_units, stream_length)
        missing = set(range(len(costs_units))) - set(self.ranking)
        if missing:
            raise ValueError(f"ranking does not cover features {sorted(missing)}")

    def _best(self, pf: list[int]) -> int:
        return min(pf, key=self._rank.__getitem__)

    def selection_weights(self, pf):
        best = self._best(pf)
        return [1.0 if fid == best else 0.0 for fid in pf]

    def select_feature(self, pf, acquired):
        if not pf:
            raise ValueError("potential feature set is empty")
        return self._best(pf)


def rank_features_by_gain_per_cost(dataset) -> list[int]:
    """Feature ids ordered by best-threshold information gain per unit cost.

    Descending by gain/cost; ties broken by lower cost, then lower id.
    """
    scored = []
    for spec in dataset.features:
        gain, _ = info_gain(dataset.X[:, spec.id], dataset.y, dataset.class_count)
        scored.append((-gain / spec.cost, spec.cost_units, spec.id))
    scored.sort()
    return [fid for _, _, fid in scored]


@dataclass(frozen=True)
class PolicyParams:
    """Tunables shared by policy construction across a sweep."""

    warmup_fraction: float = 0.2
    variance_floor: float = DEFAULT_VARIANCE_FLOOR
    rebuild_interval: int = 1
    tree_params: TreeParams = field(default_factory=TreeParams)


def make_policy(
    name: str,
    seed: int = 0,
    params: PolicyParams = PolicyParams(),
    dataset=None,
) -> AcquisitionPolicy:
    """Build a fresh policy instance by registry name."""
    if name == "random":
        return PureRandomPolicy(seed)
    if name == "cost":
        return CostSensitiveRandomPolicy(seed)
    if name == "variance_cost":
        return VarianceCostPolicy(
            seed,
            warmup_fraction=params.warmup_fraction,
            variance_floor=params.variance_floor,
        )
    if name == "classifier":
        return TreeWalkPolicy(
            seed,
            warmup_fraction=params.warmup_fraction,
            variance_floor=params.variance_floor,
            rebuild_interval=params.rebuild_interval,
            tree_params=params.tree_params,
        )
    if name == "oracle":
        if dataset is None:
            raise ValueError("the oracle policy needs the complete dataset")
        return OraclePolicy(rank_features_by_gain_per_cost(dataset), seed)
    raise ValueError(f"unknown policy {name!r}; choose from {POLICY_NAMES}")
