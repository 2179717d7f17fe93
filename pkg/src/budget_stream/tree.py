"""Decision tree whose splits trade information gain against acquisition cost.

Binary numeric splits with midpoint thresholds, a gain/cost**omega split
criterion, and fractional-weight routing of instances that are missing the
split feature. Training sets produced under tight budgets are mostly missing
values, so missing-value handling is load-bearing rather than a corner case.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin

from ._validation import as_float_matrix, as_label_vector

MISSING_POLICIES = ("weighted", "majority")


@dataclass
class Leaf:
    counts: np.ndarray  # per-class training mass reaching this leaf

    @property
    def mass(self) -> float:
        return float(self.counts.sum())


@dataclass
class Inner:
    feature: int
    threshold: float
    left: "TreeNode"
    right: "TreeNode"
    mass: float


TreeNode = Leaf | Inner


@dataclass(frozen=True)
class TreeParams:
    max_depth: int = 12
    min_leaf: int = 5
    cost_exponent: float = 1.0
    missing_policy: str = "weighted"

    def __post_init__(self):
        if self.max_depth < 1:
            raise ValueError("max_depth must be >= 1")
        if self.min_leaf < 1:
            raise ValueError("min_leaf must be >= 1")
        if self.cost_exponent < 0:
            raise ValueError("cost_exponent must be >= 0")
        if self.missing_policy not in MISSING_POLICIES:
            raise ValueError(f"missing_policy must be one of {MISSING_POLICIES}")


def _entropy_rows(counts: np.ndarray) -> np.ndarray:
    """Shannon entropy (bits) of each row of class-mass counts."""
    totals = counts.sum(axis=1)
    p = counts / np.where(totals > 0, totals, 1.0)[:, None]
    plogp = np.zeros_like(p)
    mask = p > 0
    plogp[mask] = p[mask] * np.log2(p[mask])
    return -plogp.sum(axis=1)


def _best_split(
    values: np.ndarray,
    labels: np.ndarray,
    weights: np.ndarray,
    class_count: int,
    min_child: float = 0.0,
) -> tuple[float, float] | None:
    """Best midpoint threshold for present values; (gain, threshold) or None.

    Candidate thresholds are midpoints between consecutive distinct sorted
    values; children lighter than ``min_child`` are not considered.
    """
    order = np.argsort(values, kind="mergesort")
    sv = values[order]
    boundaries = np.nonzero(sv[:-1] < sv[1:])[0]
    if len(boundaries) == 0:
        return None

    member = np.zeros((len(values), class_count))
    member[np.arange(len(values)), labels[order]] = weights[order]
    cum = member.cumsum(axis=0)
    total = cum[-1]
    total_weight = total.sum()

    left = cum[boundaries]
    left_weight = left.sum(axis=1)
    right_weight = total_weight - left_weight
    if min_child > 0:
        keep = (left_weight >= min_child) & (right_weight >= min_child)
        if not keep.any():
            return None
        boundaries = boundaries[keep]
        left = left[keep]
        left_weight = left_weight[keep]
        right_weight = right_weight[keep]

    parent_entropy = _entropy_rows(total[None, :])[0]
    child_entropy = (
        left_weight * _entropy_rows(left)
        + right_weight * _entropy_rows(total[None, :] - left)
    ) / total_weight
    gains = parent_entropy - child_entropy
    best = int(np.argmax(gains))
    cut = boundaries[best]
    threshold = (sv[cut] + sv[cut + 1]) / 2.0
    return float(gains[best]), float(threshold)


def info_gain(values, labels, class_count: int) -> tuple[float, float]:
    """Best-threshold information gain (bits) of one feature.

    Instances with a missing value are excluded from the gain computation and
    the gain is scaled by the present fraction. All-missing or constant
    features yield (0.0, nan).
    """
    values = np.asarray(values, dtype=np.float64)
    labels = as_label_vector(labels, n_rows=len(values), name="labels")
    labels = labels.astype(np.int64)
    if class_count < 1 or labels.min(initial=0) < 0 or labels.max(initial=0) >= class_count:
        raise ValueError("labels must lie in [0, class_count)")
    present = ~np.isnan(values)
    n_present = int(present.sum())
    if n_present < 2:
        return 0.0, math.nan
    result = _best_split(
        values[present], labels[present], np.ones(n_present), class_count
    )
    if result is None:
        return 0.0, math.nan
    gain, threshold = result
    return gain * (n_present / len(values)), threshold


def grow_tree(
    X, y, class_count: int, costs=None, params: TreeParams = TreeParams()
) -> TreeNode:
    """Induce a tree maximising gain(f) / cost(f)**cost_exponent at each split."""
    X = as_float_matrix(X, allow_nan=True)
    y = as_label_vector(y, n_rows=X.shape[0]).astype(np.int64)
    if len(y) == 0:
        raise ValueError("training set is empty")
    if y.min() < 0 or y.max() >= class_count:
        raise ValueError("labels must lie in [0, class_count)")
    if costs is None:
        costs = np.ones(X.shape[1])
    else:
        costs = np.asarray(costs, dtype=np.float64)
        if costs.shape != (X.shape[1],):
            raise ValueError("costs must have one entry per feature")
        if (costs <= 0).any():
            raise ValueError("costs must be positive")
    return _grow(X, y, np.ones(len(y)), 0, class_count, costs, params)


def _grow(X, y, w, depth, class_count, costs, params) -> TreeNode:
    counts = np.bincount(y, weights=w, minlength=class_count)
    mass = counts.sum()
    if (
        depth >= params.max_depth
        or mass < 2 * params.min_leaf
        or np.count_nonzero(counts) <= 1
    ):
        return Leaf(counts)

    active = w > 0
    best_feature = -1
    best_criterion = 0.0
    best_threshold = math.nan
    for f in range(X.shape[1]):
        col = X[:, f]
        present = active & ~np.isnan(col)
        present_weight = w[present].sum()
        if present.sum() < 2 or present_weight <= 0:
            continue
        result = _best_split(
            col[present], y[present], w[present], class_count, params.min_leaf
        )
        if result is None:
            continue
        gain, threshold = result
        gain *= present_weight / mass
        if gain <= 0:
            continue
        criterion = gain / costs[f] ** params.cost_exponent
        if criterion > best_criterion:
            best_criterion = criterion
            best_feature = f
            best_threshold = threshold
    if best_feature < 0:
        return Leaf(counts)

    col = X[:, best_feature]
    present = ~np.isnan(col)
    go_left = active & present & (col <= best_threshold)
    go_right = active & present & (col > best_threshold)
    missing = active & ~present
    left_w = np.where(go_left, w, 0.0)
    right_w = np.where(go_right, w, 0.0)
    if missing.any():
        left_mass = left_w.sum()
        right_mass = right_w.sum()
        if params.missing_policy == "weighted":
            share = left_mass / (left_mass + right_mass)
            left_w[missing] = w[missing] * share
            right_w[missing] = w[missing] * (1.0 - share)
        elif left_mass >= right_mass:
            left_w[missing] = w[missing]
        else:
            right_w[missing] = w[missing]

    left = _grow(X, y, left_w, depth + 1, class_count, costs, params)
    right = _grow(X, y, right_w, depth + 1, class_count, costs, params)
    return Inner(best_feature, best_threshold, left, right, float(mass))


def predict_scores(
    tree: TreeNode, row, class_count: int, missing_policy: str = "weighted"
) -> np.ndarray:
    """Laplace-smoothed class distribution for one (possibly partial) row.

    Missing split features combine both children weighted by training mass
    ("weighted") or follow the heavier child ("majority").
    """
    row = np.asarray(row, dtype=np.float64)
    scores = np.zeros(class_count)
    stack: list[tuple[TreeNode, float]] = [(tree, 1.0)]
    while stack:
        node, weight = stack.pop()
        if isinstance(node, Leaf):
            scores += weight * (node.counts + 1.0) / (node.mass + class_count)
            continue
        value = row[node.feature]
        if math.isnan(value):
            left_mass = node.left.mass
            right_mass = node.right.mass
            if missing_policy == "weighted":
                share = left_mass / (left_mass + right_mass)
                stack.append((node.left, weight * share))
                stack.append((node.right, weight * (1.0 - share)))
            elif left_mass >= right_mass:
                stack.append((node.left, weight))
            else:
                stack.append((node.right, weight))
        elif value <= node.threshold:
            stack.append((node.left, weight))
        else:
            stack.append((node.right, weight))
    return scores


def predict_matrix(
    tree: TreeNode, X, class_count: int, missing_policy: str = "weighted"
) -> np.ndarray:
    X = as_float_matrix(X, allow_nan=True)
    return np.stack(
        [predict_scores(tree, row, class_count, missing_policy) for row in X]
    )


def tree_depth(tree: TreeNode) -> int:
    if isinstance(tree, Leaf):
        return 0
    return 1 + max(tree_depth(tree.left), tree_depth(tree.right))


def format_tree(tree: TreeNode, feature_names: list[str] | None = None) -> str:
    """Indented text rendering for debugging; not a stable format."""
    lines: list[str] = []

    def name(f: int) -> str:
        return feature_names[f] if feature_names else f"f{f}"

    def walk(node: TreeNode, indent: str) -> None:
        if isinstance(node, Leaf):
            counts = ", ".join(f"{c:g}" for c in node.counts)
            lines.append(f"{indent}leaf [{counts}]")
        else:
            lines.append(f"{indent}{name(node.feature)} <= {node.threshold:g}")
            walk(node.left, indent + "  ")
            lines.append(f"{indent}{name(node.feature)} > {node.threshold:g}")
            walk(node.right, indent + "  ")

    walk(tree, "")
    return "\n".join(lines)


class CostAwareTreeClassifier(ClassifierMixin, BaseEstimator):
    """Sklearn-style classifier over the cost-aware tree.

    Accepts NaN entries as missing values in both fit and predict. ``costs``
    is an optional per-feature acquisition cost vector; equal costs (or
    ``cost_exponent=0``) reduce the split criterion to plain information gain.
    """

    def __init__(
        self,
        costs=None,
        max_depth: int = 12,
        min_leaf: int = 5,
        cost_exponent: float = 1.0,
        missing_policy: str = "weighted",
    ):
        self.costs = costs
        self.max_depth = max_depth
        self.min_leaf = min_leaf
        self.cost_exponent = cost_exponent
        self.missing_policy = missing_policy

    def fit(self, X, y):
        X = as_float_matrix(X, allow_nan=True)
        y = as_label_vector(y, n_rows=X.shape[0])
        self.classes_, y_encoded = np.unique(y, return_inverse=True)
        self.n_features_in_ = X.shape[1]
        params = TreeParams(
            max_depth=self.max_depth,
            min_leaf=self.min_leaf,
            cost_exponent=self.cost_exponent,
            missing_policy=self.missing_policy,
        )
        self.tree_ = grow_tree(X, y_encoded, len(self.classes_), self.costs, params)
        return self

    def predict_proba(self, X) -> np.ndarray:
        X = as_float_matrix(X, allow_nan=True)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(
                f"X has {X.shape[1]} features, expected {self.n_features_in_}"
            )
        return predict_matrix(self.tree_, X, len(self.classes_), self.missing_policy)

    def predict(self, X) -> np.ndarray:
        return self.classes_[np.argmax(self.predict_proba(X), axis=1)]
