import math

import numpy as np
import pytest
from sklearn.base import clone

from budget_stream.tree import (
    CostAwareTreeClassifier,
    Inner,
    Leaf,
    TreeParams,
    format_tree,
    grow_tree,
    info_gain,
    predict_scores,
    tree_depth,
)


def entropy(labels):
    total = len(labels)
    if total == 0:
        return 0.0
    h = 0.0
    for c in set(labels):
        p = labels.count(c) / total
        h -= p * math.log2(p)
    return h


def brute_force_info_gain(values, labels):
    """Independent oracle: try every midpoint threshold the slow way."""
    present = [(v, y) for v, y in zip(values, labels) if not math.isnan(v)]
    if len(present) < 2:
        return 0.0
    present_values = sorted({v for v, _ in present})
    labels_present = [y for _, y in present]
    base = entropy(labels_present)
    best = 0.0
    for lo, hi in zip(present_values, present_values[1:]):
        threshold = (lo + hi) / 2.0
        left = [y for v, y in present if v <= threshold]
        right = [y for v, y in present if v > threshold]
        gain = base - (
            len(left) * entropy(left) + len(right) * entropy(right)
        ) / len(present)
        best = max(best, gain)
    return best * len(present) / len(values)


def test_pure_binary_split_gains_one_bit():
    gain, threshold = info_gain([1.0, 2.0, 3.0, 4.0], [0, 0, 1, 1], 2)
    assert gain == pytest.approx(1.0, abs=1e-12)
    assert threshold == pytest.approx(2.5)


def test_uniform_labels_gain_zero():
    gain, threshold = info_gain([1.0, 2.0, 3.0], [1, 1, 1], 3)
    assert gain == 0.0


def test_constant_values_gain_zero():
    gain, threshold = info_gain([2.0, 2.0, 2.0], [0, 1, 0], 2)
    assert gain == 0.0
    assert math.isnan(threshold)


def test_all_missing_gain_zero():
    gain, threshold = info_gain([math.nan, math.nan], [0, 1], 2)
    assert gain == 0.0


def test_missing_values_scale_gain_by_present_fraction():
    values = [1.0, 2.0, 3.0, 4.0, math.nan, math.nan, math.nan, math.nan]
    labels = [0, 0, 1, 1, 0, 1, 0, 1]
    gain, threshold = info_gain(values, labels, 2)
    assert gain == pytest.approx(0.5, abs=1e-12)  # 1 bit * 4/8 present
    assert threshold == pytest.approx(2.5)


def test_info_gain_matches_brute_force():
    rng = np.random.default_rng(21)
    for _ in range(80):
        m = int(rng.integers(2, 50))
        k = int(rng.integers(2, 6))
        values = np.round(rng.random(m) * 4, 1)
        values[rng.random(m) < 0.2] = np.nan
        labels = rng.integers(0, k, m)
        gain, _ = info_gain(values, labels, k)
        assert gain == pytest.approx(
            brute_force_info_gain(list(values), list(labels)), abs=1e-9
        )
        assert 0.0 <= gain <= math.log2(k) + 1e-12


def test_induce_pure_labels_gives_leaf():
    X = np.array([[1.0], [2.0], [3.0]])
    tree = grow_tree(X, np.array([1, 1, 1]), 2, params=TreeParams(min_leaf=1))
    assert isinstance(tree, Leaf)


def test_induce_single_separating_feature_gives_depth_one():
    rng = np.random.default_rng(0)
    noise = rng.random(20)
    separating = np.array([0.0] * 10 + [1.0] * 10)
    X = np.column_stack([separating, noise])
    y = np.array([0] * 10 + [1] * 10)
    tree = grow_tree(X, y, 2, params=TreeParams(min_leaf=1))
    assert isinstance(tree, Inner)
    assert tree.feature == 0
    assert tree_depth(tree) == 1
    assert isinstance(tree.left, Leaf) and isinstance(tree.right, Leaf)


def test_induce_prefers_cheaper_feature_on_equal_gain():
    # two identical perfectly separating features; cost 1 vs 10
    col = np.array([0.0] * 10 + [1.0] * 10)
    X = np.column_stack([col, col])
    y = np.array([0] * 10 + [1] * 10)
    tree = grow_tree(X, y, 2, costs=[10.0, 1.0], params=TreeParams(min_leaf=1))
    assert tree.feature == 1
    tree = grow_tree(X, y, 2, costs=[1.0, 10.0], params=TreeParams(min_leaf=1))
    assert tree.feature == 0


def test_zero_cost_exponent_is_cost_blind():
    rng = np.random.default_rng(4)
    X = rng.random((120, 4))
    y = ((X[:, 0] > 0.4) & (X[:, 2] > 0.6)).astype(int)
    costs = [9.0, 0.5, 4.0, 2.0]
    blind = grow_tree(X, y, 2, costs=costs, params=TreeParams(cost_exponent=0.0))
    equal = grow_tree(X, y, 2, costs=[1.0, 1.0, 1.0, 1.0], params=TreeParams())

    def shape(node):
        if isinstance(node, Leaf):
            return ("leaf", tuple(np.round(node.counts, 9)))
        return (node.feature, round(node.threshold, 12), shape(node.left), shape(node.right))

    assert shape(blind) == shape(equal)


def test_training_accuracy_on_separable_data():
    rng = np.random.default_rng(9)
    X = rng.random((400, 5))
    y = ((X[:, 1] > 0.5) ^ (X[:, 3] > 0.5)).astype(int)
    clf = CostAwareTreeClassifier().fit(X, y)
    assert (clf.predict(X) == y).mean() >= 0.99


def test_predict_scores_symmetric_leaf():
    leaf = Leaf(np.array([2.0, 2.0]))
    assert predict_scores(leaf, [0.0], 2) == pytest.approx([0.5, 0.5])


def test_predict_scores_weighted_missing_combination():
    # children masses 3 and 1 with pure leaves; Laplace k=2:
    # 0.75*(4/5,1/5) + 0.25*(1/3,2/3)
    tree = Inner(0, 0.5, Leaf(np.array([3.0, 0.0])), Leaf(np.array([0.0, 1.0])), 4.0)
    scores = predict_scores(tree, [np.nan], 2)
    assert scores == pytest.approx([0.68333333, 0.31666667], abs=1e-8)
    assert scores.sum() == pytest.approx(1.0, abs=1e-9)


def test_predict_scores_majority_missing_follows_heavier_child():
    tree = Inner(0, 0.5, Leaf(np.array([3.0, 0.0])), Leaf(np.array([0.0, 1.0])), 4.0)
    scores = predict_scores(tree, [np.nan], 2, missing_policy="majority")
    assert scores == pytest.approx([4 / 5, 1 / 5])


def test_single_leaf_tree_gives_smoothed_prior():
    leaf = Leaf(np.array([6.0, 2.0]))
    for row in ([0.3], [np.nan]):
        assert predict_scores(leaf, row, 2) == pytest.approx([7 / 10, 3 / 10])


def test_scores_are_probability_vectors_under_missingness():
    rng = np.random.default_rng(17)
    X = rng.random((150, 4))
    X[rng.random((150, 4)) < 0.5] = np.nan
    y = rng.integers(0, 3, 150)
    tree = grow_tree(X, y, 3)
    for row in [np.full(4, np.nan), X[0], X[1]]:
        scores = predict_scores(tree, row, 3)
        assert (scores >= 0).all()
        assert scores.sum() == pytest.approx(1.0, abs=1e-9)


def test_grow_tree_rejects_empty_training_set():
    with pytest.raises(ValueError):
        grow_tree(np.empty((0, 2)), np.empty(0, dtype=int), 2)


def test_max_depth_respected():
    rng = np.random.default_rng(2)
    X = rng.random((500, 3))
    y = rng.integers(0, 2, 500)
    tree = grow_tree(X, y, 2, params=TreeParams(max_depth=3, min_leaf=1))
    assert tree_depth(tree) <= 3


def test_classifier_remaps_arbitrary_labels():
    X = np.array([[0.0], [0.1], [0.9], [1.0]] * 5)
    y = np.array([5, 5, 9, 9] * 5)
    clf = CostAwareTreeClassifier(min_leaf=1).fit(X, y)
    assert list(clf.classes_) == [5, 9]
    assert set(clf.predict(X)) <= {5, 9}
    proba = clf.predict_proba(X)
    assert proba.shape == (20, 2)
    assert proba.sum(axis=1) == pytest.approx(np.ones(20))


def test_classifier_clone_and_params():
    clf = CostAwareTreeClassifier(max_depth=7, min_leaf=3, cost_exponent=0.5)
    params = clf.get_params()
    assert params["max_depth"] == 7
    assert params["min_leaf"] == 3
    cloned = clone(clf)
    assert cloned.get_params() == params


def test_format_tree_mentions_features_and_leaves():
    tree = Inner(0, 0.5, Leaf(np.array([3.0, 0.0])), Leaf(np.array([0.0, 1.0])), 4.0)
    text = format_tree(tree, ["temp"])
    assert "temp <= 0.5" in text
    assert "leaf" in text


def test_tree_params_validation():
    with pytest.raises(ValueError):
        TreeParams(max_depth=0)
    with pytest.raises(ValueError):
        TreeParams(min_leaf=0)
    with pytest.raises(ValueError):
        TreeParams(cost_exponent=-1)
    with pytest.raises(ValueError):
        TreeParams(missing_policy="drop")
