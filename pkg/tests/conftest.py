"""Shared test helpers plus the acceptance-criteria summary reporter."""

from __future__ import annotations

from contextlib import contextmanager

import numpy as np
import pytest

from budget_stream import Dataset, FeatureSpec
from budget_stream.units import to_units

_CRITERIA: dict[int, tuple[str, str]] = {}


def record_criterion(number: int, name: str, status: str) -> None:
    _CRITERIA[number] = (name, status)


@contextmanager
def criterion(number: int, name: str):
    """Record a pass/fail line for one acceptance criterion."""
    try:
        yield
    except BaseException:
        record_criterion(number, name, "FAIL")
        raise
    record_criterion(number, name, "PASS")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        name, status = _CRITERIA[number]
        terminalreporter.write_line(f"criterion {number} ({name}): {status}")


def make_dataset(X, y, costs, class_count=None, names=None) -> Dataset:
    """Small helper to build in-memory datasets for engine/policy tests."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if names is None:
        names = [f"f{i}" for i in range(X.shape[1])]
    features = [
        FeatureSpec(i, names[i], to_units(c)) for i, c in enumerate(costs)
    ]
    if class_count is None:
        class_count = int(y.max()) + 1
    return Dataset(features, X, y, class_count)


def random_small_dataset(rng: np.random.Generator) -> Dataset:
    """Random tiny dataset for fuzzing the engine."""
    m = int(rng.integers(12, 30))
    n = int(rng.integers(2, 6))
    k = int(rng.integers(2, 4))
    X = rng.normal(size=(m, n))
    y = rng.integers(0, k, m)
    while len(np.unique(y)) < 2:
        y = rng.integers(0, k, m)
    costs = [round(float(c), 2) for c in rng.uniform(0.5, 12.0, n)]
    return make_dataset(X, y, costs, class_count=k)
