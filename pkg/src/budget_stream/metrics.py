"""Area under the ROC curve, binary and macro one-vs-rest multi-class."""

from __future__ import annotations

import numpy as np

from ._validation import as_float_matrix, as_label_vector


def _average_ranks(x: np.ndarray) -> np.ndarray:
    """1-based ranks with ties assigned their group's average rank."""
    _, inverse, counts = np.unique(x, return_inverse=True, return_counts=True)
    starts = np.concatenate(([0], np.cumsum(counts)))[:-1]
    group_rank = starts + (counts + 1) / 2.0
    return group_rank[inverse]


def binary_auc(scores, labels) -> float:
    """Mann-Whitney AUC: P(score_pos > score_neg) with ties counting 1/2.

    Computed from average ranks; rank sums are half-integers, so the result
    is the correctly rounded exact value.
    """
    scores = np.asarray(scores, dtype=np.float64)
    labels = as_label_vector(labels, n_rows=len(scores), name="labels")
    positive = labels == 1
    n_pos = int(positive.sum())
    n_neg = len(labels) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValueError("binary_auc needs both classes present")
    ranks = _average_ranks(scores)
    numerator = ranks[positive].sum() - n_pos * (n_pos + 1) / 2.0
    return numerator / (n_pos * n_neg)


def multiclass_auc(scores, labels, class_count: int | None = None) -> float:
    """Macro one-vs-rest AUC over the classes present in ``labels``.

    ``scores`` is an (n_samples, n_classes) matrix of class scores. Classes
    absent from the labels are skipped; fewer than two present classes is an
    error.
    """
    scores = as_float_matrix(scores, name="scores")
    labels = as_label_vector(labels, n_rows=scores.shape[0], name="labels")
    if class_count is not None and scores.shape[1] != class_count:
        raise ValueError(
            f"scores has {scores.shape[1]} columns, expected {class_count}"
        )
    present = np.unique(labels)
    if len(present) < 2:
        raise ValueError("multiclass_auc needs at least two classes present")
    per_class = [
        binary_auc(scores[:, int(c)], (labels == c).astype(np.int64))
        for c in present
    ]
    return float(np.mean(per_class))
