import math

import numpy as np
import pytest

from budget_stream.datasets import (
    COST_PROFILES,
    Dataset,
    FeatureSpec,
    ParseError,
    SchemaError,
    generate_synthetic,
    load_costs,
    load_dataset,
    random_costs,
    save_dataset,
    split_stream,
    with_costs,
)
from budget_stream.units import SCALE, to_units


def write(path, text):
    path.write_text(text, encoding="utf-8")


def test_load_small_dataset_with_sensor_costs(tmp_path):
    # accelerometer/gyroscope-style costs of 10 and 9
    write(tmp_path / "data.csv", "f1,f2,label\n1.5,2.5,yes\n0.5,1.0,no\n")
    write(tmp_path / "costs.csv", "feature,cost\nf1,10\nf2,9\n")
    ds = load_dataset(tmp_path / "data.csv", tmp_path / "costs.csv")
    assert ds.n_features == 2
    assert ds.costs_units == [10 * SCALE, 9 * SCALE]
    assert ds.class_count == 2
    assert ds.label_names == ["yes", "no"]  # first-appearance order
    assert list(ds.y) == [0, 1]


def test_missing_cost_entry_names_the_feature(tmp_path):
    write(tmp_path / "data.csv", "f1,f2,label\n1,2,a\n3,4,b\n")
    write(tmp_path / "costs.csv", "feature,cost\nf1,10\n")
    with pytest.raises(SchemaError, match="f2"):
        load_dataset(tmp_path / "data.csv", tmp_path / "costs.csv")


def test_single_label_value_rejected(tmp_path):
    write(tmp_path / "data.csv", "f1,label\n1,a\n2,a\n3,a\n")
    write(tmp_path / "costs.csv", "feature,cost\nf1,1\n")
    with pytest.raises(SchemaError, match="label"):
        load_dataset(tmp_path / "data.csv", tmp_path / "costs.csv")


def test_non_numeric_cell_reports_row_and_column(tmp_path):
    write(tmp_path / "data.csv", "f1,f2,label\n1,2,a\n3,oops,b\n")
    write(tmp_path / "costs.csv", "feature,cost\nf1,1\nf2,1\n")
    with pytest.raises(ParseError, match="row 3.*f2"):
        load_dataset(tmp_path / "data.csv", tmp_path / "costs.csv")


def test_empty_cell_needs_missing_tolerant_mode(tmp_path):
    write(tmp_path / "data.csv", "f1,f2,label\n1,,a\n3,4,b\n")
    write(tmp_path / "costs.csv", "feature,cost\nf1,1\nf2,1\n")
    with pytest.raises(ParseError, match="empty cell"):
        load_dataset(tmp_path / "data.csv", tmp_path / "costs.csv")
    ds = load_dataset(tmp_path / "data.csv", tmp_path / "costs.csv", allow_missing=True)
    assert math.isnan(ds.X[0, 1])


def test_non_positive_cost_rejected(tmp_path):
    write(tmp_path / "costs.csv", "feature,cost\nf1,0\n")
    with pytest.raises(SchemaError, match="positive"):
        load_costs(tmp_path / "costs.csv")


def test_duplicate_cost_entry_rejected(tmp_path):
    write(tmp_path / "costs.csv", "feature,cost\nf1,1\nf1,2\n")
    with pytest.raises(SchemaError, match="duplicate"):
        load_costs(tmp_path / "costs.csv")


def test_round_trip_save_load(tmp_path):
    ds = generate_synthetic(60, 2, 4, "informative-cheap", seed=3)
    save_dataset(ds, tmp_path / "d.csv", tmp_path / "c.csv")
    again = load_dataset(tmp_path / "d.csv", tmp_path / "c.csv")
    assert ds.equals(again)


def test_split_seventy_thirty_arithmetic():
    ds = generate_synthetic(10, 1, 1, "uniform", seed=0)
    split = split_stream(ds, seed=4)
    assert len(split.stream) == 7
    assert len(split.test) == 3


def test_split_determinism():
    ds = generate_synthetic(50, 1, 3, "uniform", seed=0)
    assert split_stream(ds, 9) == split_stream(ds, 9)


def test_split_differs_across_seeds():
    ds = generate_synthetic(1000, 1, 3, "uniform", seed=0)
    assert split_stream(ds, 1).stream != split_stream(ds, 2).stream


def test_split_partition_property_over_many_seeds():
    ds = generate_synthetic(43, 2, 3, "uniform", seed=5)
    for seed in range(100):
        split = split_stream(ds, seed)
        combined = sorted(split.stream + split.test)
        assert combined == list(range(ds.n_rows))
        assert len(split.stream) == (7 * 43 + 5) // 10


def test_split_rejects_tiny_datasets():
    ds = generate_synthetic(9, 1, 1, "uniform", seed=0)
    with pytest.raises(ValueError):
        split_stream(ds, 0)


def entropy_bits(labels):
    h = 0.0
    for c in np.unique(labels):
        p = float(np.mean(labels == c))
        if p > 0:
            h -= p * math.log2(p)
    return h


def best_threshold_gain(values, labels):
    """Oracle for the generator contract, written independently of the tree."""
    order = np.argsort(values)
    v, y = values[order], labels[order]
    base = entropy_bits(y)
    best = 0.0
    for i in range(len(v) - 1):
        if v[i] == v[i + 1]:
            continue
        left, right = y[: i + 1], y[i + 1 :]
        split = (len(left) * entropy_bits(left) + len(right) * entropy_bits(right)) / len(y)
        best = max(best, base - split)
    return best


def test_synthetic_informative_features_carry_signal():
    ds = generate_synthetic(1000, 2, 18, "informative-cheap", seed=12)
    for j in (0, 1):
        assert best_threshold_gain(ds.X[:, j], ds.y) >= 0.3
    for j in range(2, 20):
        assert best_threshold_gain(ds.X[:, j], ds.y) <= 0.05


def test_synthetic_noise_label_correlation_is_negligible():
    ds = generate_synthetic(1500, 2, 18, "informative-cheap", seed=8)
    y = ds.y.astype(float)
    for j in range(2, 20):
        col = ds.X[:, j]
        if col.std() == 0:
            continue
        r = np.corrcoef(col, y)[0, 1]
        assert abs(r) < 0.1


def test_synthetic_rejects_zero_informative():
    with pytest.raises(ValueError):
        generate_synthetic(100, 0, 5, "uniform", seed=0)


def test_synthetic_determinism():
    a = generate_synthetic(300, 2, 6, "informative-cheap", seed=77)
    b = generate_synthetic(300, 2, 6, "informative-cheap", seed=77)
    assert a.equals(b)
    c = generate_synthetic(300, 2, 6, "informative-cheap", seed=78)
    assert not a.equals(c)


def test_synthetic_cost_profiles():
    cheap = generate_synthetic(20, 2, 2, "informative-cheap", seed=0)
    assert cheap.features[0].cost < max(f.cost for f in cheap.features[2:])
    expensive = generate_synthetic(20, 2, 2, "informative-expensive", seed=0)
    assert expensive.features[0].cost > max(f.cost for f in expensive.features[2:])
    uniform = generate_synthetic(20, 2, 2, "uniform", seed=0)
    assert len({f.cost_units for f in uniform.features}) == 1
    with pytest.raises(ValueError, match="cost_profile"):
        generate_synthetic(20, 2, 2, "bogus", seed=0)
    assert set(COST_PROFILES) == {"informative-cheap", "informative-expensive", "uniform"}


def test_synthetic_label_noise_bounds():
    with pytest.raises(ValueError):
        generate_synthetic(100, 1, 1, "uniform", seed=0, label_noise=0.2)


def test_random_costs_seeded_and_in_range():
    costs = random_costs(10, seed=3, low=1.0, high=10.0)
    assert costs == random_costs(10, seed=3, low=1.0, high=10.0)
    assert all(1.0 * SCALE <= c <= 10.0 * SCALE for c in costs)
    assert costs != random_costs(10, seed=4)


def test_with_costs_replaces_costs():
    ds = generate_synthetic(30, 1, 2, "uniform", seed=1)
    new = with_costs(ds, [to_units(5), to_units(6), to_units(7)])
    assert new.costs_units == [5 * SCALE, 6 * SCALE, 7 * SCALE]
    assert np.array_equal(new.X, ds.X)
    with pytest.raises(ValueError):
        with_costs(ds, [to_units(1)])


def test_dataset_invariants_enforced():
    X = np.zeros((4, 2))
    y = np.array([0, 1, 0, 1])
    good = [FeatureSpec(0, "a", SCALE), FeatureSpec(1, "b", SCALE)]
    Dataset(good, X, y, 2)
    with pytest.raises(SchemaError):
        Dataset([FeatureSpec(0, "a", SCALE), FeatureSpec(2, "b", SCALE)], X, y, 2)
    with pytest.raises(SchemaError):
        Dataset([FeatureSpec(0, "a", SCALE), FeatureSpec(1, "a", SCALE)], X, y, 2)
    with pytest.raises(SchemaError):
        Dataset([FeatureSpec(0, "a", 0), FeatureSpec(1, "b", SCALE)], X, y, 2)
