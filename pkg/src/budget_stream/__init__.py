"""Online budgeted feature-value acquisition from data streams.

A simulator for the setting where each arriving instance's feature values
can be bought, at per-feature cost, only while the instance is active:
acquisition policies, exact budget accounting, a cost-aware decision tree,
multi-class AUC, and a budget-sweep experiment harness.
"""

from .datasets import (
    Dataset,
    FeatureSpec,
    ParseError,
    SchemaError,
    StreamSplit,
    generate_synthetic,
    load_dataset,
    random_costs,
    save_dataset,
    split_stream,
    with_costs,
)
from .engine import (
    AcquisitionTrace,
    BudgetedAcquirer,
    ContractError,
    Instance,
    TrainingSet,
    acquire,
    prune_potential,
    run_complete,
    run_stream,
    write_training_csv,
)
from .harness import (
    AggregateRow,
    RunRow,
    SweepConfig,
    SweepResult,
    derive_seed,
    run_once,
    stream_budget_units,
    sweep,
)
from .metrics import binary_auc, multiclass_auc
from .policies import (
    AcquisitionPolicy,
    CostSensitiveRandomPolicy,
    OraclePolicy,
    POLICY_NAMES,
    PolicyParams,
    PureRandomPolicy,
    TreeWalkPolicy,
    VarianceCostPolicy,
    WalkAction,
    WarmupPlan,
    make_policy,
    rank_features_by_gain_per_cost,
)
from .stats import FeatureStats
from .tree import (
    CostAwareTreeClassifier,
    TreeParams,
    format_tree,
    grow_tree,
    info_gain,
    predict_scores,
)

__version__ = "0.1.0"

__all__ = [
    "AcquisitionPolicy",
    "AcquisitionTrace",
    "AggregateRow",
    "BudgetedAcquirer",
    "ContractError",
    "CostAwareTreeClassifier",
    "CostSensitiveRandomPolicy",
    "Dataset",
    "FeatureSpec",
    "FeatureStats",
    "Instance",
    "OraclePolicy",
    "POLICY_NAMES",
    "ParseError",
    "PolicyParams",
    "PureRandomPolicy",
    "RunRow",
    "SchemaError",
    "StreamSplit",
    "SweepConfig",
    "SweepResult",
    "TrainingSet",
    "TreeParams",
    "TreeWalkPolicy",
    "VarianceCostPolicy",
    "WalkAction",
    "WarmupPlan",
    "acquire",
    "binary_auc",
    "derive_seed",
    "format_tree",
    "generate_synthetic",
    "grow_tree",
    "info_gain",
    "load_dataset",
    "make_policy",
    "multiclass_auc",
    "predict_scores",
    "prune_potential",
    "random_costs",
    "rank_features_by_gain_per_cost",
    "run_complete",
    "run_once",
    "run_stream",
    "save_dataset",
    "split_stream",
    "stream_budget_units",
    "sweep",
    "with_costs",
    "write_training_csv",
]
