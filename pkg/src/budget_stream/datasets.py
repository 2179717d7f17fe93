"""Dataset schema, CSV ingestion, stream/test splitting, synthetic data.

Data CSV: UTF-8, header row, comma separated, decimal-point reals, last
column is the label. Costs CSV: two columns ``feature,cost`` with a header.
Labels are factorized to 0..k-1 in first-appearance order; features are
numeric reals (categoricals must be pre-encoded).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .units import SCALE, format_units, to_units


class SchemaError(ValueError):
    """The file's structure or metadata does not match the expected schema."""


class ParseError(ValueError):
    """A cell could not be parsed; the message names the row and column."""


@dataclass(frozen=True)
class FeatureSpec:
    id: int
    name: str
    cost_units: int  # acquisition cost in micro cost-units, > 0

    @property
    def cost(self) -> float:
        return self.cost_units / SCALE


@dataclass(eq=False)
class Dataset:
    """Immutable-by-convention numeric dataset. Safe to share across runs."""

    features: list[FeatureSpec]
    X: np.ndarray  # (n_rows, n_features) float64; NaN only when loaded missing-tolerant
    y: np.ndarray  # (n_rows,) int64 in [0, class_count)
    class_count: int
    label_names: list[str] = field(default_factory=list)

    def __post_init__(self):
        if self.class_count < 2:
            raise SchemaError("dataset needs at least 2 distinct labels")
        if self.X.shape != (len(self.y), len(self.features)):
            raise SchemaError("feature matrix shape does not match rows/features")
        ids = [f.id for f in self.features]
        if ids != list(range(len(self.features))):
            raise SchemaError("feature ids must be dense 0..n-1")
        names = [f.name for f in self.features]
        if len(set(names)) != len(names):
            raise SchemaError("feature names must be unique")
        if any(f.cost_units <= 0 for f in self.features):
            raise SchemaError("feature costs must be positive")
        if not self.label_names:
            self.label_names = [str(c) for c in range(self.class_count)]

    @property
    def n_rows(self) -> int:
        return len(self.y)

    @property
    def n_features(self) -> int:
        return len(self.features)

    @property
    def feature_names(self) -> list[str]:
        return [f.name for f in self.features]

    @property
    def costs_units(self) -> list[int]:
        return [f.cost_units for f in self.features]

    @property
    def total_cost_units(self) -> int:
        return sum(f.cost_units for f in self.features)

    def costs(self) -> np.ndarray:
        return np.array([f.cost_units / SCALE for f in self.features])

    def equals(self, other: "Dataset") -> bool:
        return (
            self.features == other.features
            and self.class_count == other.class_count
            and self.label_names == other.label_names
            and np.array_equal(self.X, other.X, equal_nan=True)
            and np.array_equal(self.y, other.y)
        )


@dataclass(frozen=True)
class StreamSplit:
    """Seeded 70/30 partition; ``stream`` order is the arrival order."""

    stream: tuple[int, ...]
    test: tuple[int, ...]
    seed: int


def load_costs(path) -> dict[str, int]:
    """Read a ``feature,cost`` CSV into a name -> micro-units mapping."""
    costs: dict[str, int] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or len(header) != 2:
            raise SchemaError(f"{path}: costs file must have two columns (feature,cost)")
        for row_number, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 2:
                raise ParseError(f"{path}: row {row_number}: expected 2 cells, got {len(row)}")
            name, cell = row[0], row[1]
            if name in costs:
                raise SchemaError(f"{path}: duplicate cost entry for feature {name!r}")
            try:
                units = to_units(cell)
            except ValueError as exc:
                raise ParseError(f"{path}: row {row_number}, column cost: {exc}") from exc
            if units <= 0:
                raise SchemaError(f"{path}: cost for feature {name!r} must be positive")
            costs[name] = units
    if not costs:
        raise SchemaError(f"{path}: costs file has no entries")
    return costs


def load_dataset(data_path, costs_path, *, allow_missing: bool = False) -> Dataset:
    """Load a data CSV plus its costs CSV.

    ``allow_missing`` accepts empty cells as missing values (NaN); it exists
    to inspect acquired training sets and is not valid for source datasets.
    """
    cost_map = load_costs(costs_path)
    with open(data_path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise SchemaError(f"{data_path}: empty file")
        if len(header) < 2:
            raise SchemaError(f"{data_path}: need at least one feature column and a label column")
        feature_names = header[:-1]
        if len(set(feature_names)) != len(feature_names):
            raise SchemaError(f"{data_path}: duplicate feature names in header")
        for name in feature_names:
            if name not in cost_map:
                raise SchemaError(f"{costs_path}: missing cost for feature {name!r}")
        rows: list[list[float]] = []
        raw_labels: list[str] = []
        for row_number, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise ParseError(
                    f"{data_path}: row {row_number}: expected {len(header)} cells, got {len(row)}"
                )
            values = []
            for name, cell in zip(feature_names, row):
                cell = cell.strip()
                if cell == "":
                    if allow_missing:
                        values.append(float("nan"))
                        continue
                    raise ParseError(f"{data_path}: row {row_number}, column {name}: empty cell")
                try:
                    values.append(float(cell))
                except ValueError as exc:
                    raise ParseError(
                        f"{data_path}: row {row_number}, column {name}: not numeric: {cell!r}"
                    ) from exc
            rows.append(values)
            raw_labels.append(row[-1].strip())
    if not rows:
        raise SchemaError(f"{data_path}: no data rows")

    label_names: list[str] = []
    label_index: dict[str, int] = {}
    y = np.empty(len(raw_labels), dtype=np.int64)
    for i, raw in enumerate(raw_labels):
        if raw not in label_index:
            label_index[raw] = len(label_names)
            label_names.append(raw)
        y[i] = label_index[raw]
    if len(label_names) < 2:
        raise SchemaError(f"{data_path}: need at least 2 distinct labels, found {len(label_names)}")

    features = [
        FeatureSpec(i, name, cost_map[name]) for i, name in enumerate(feature_names)
    ]
    X = np.array(rows, dtype=np.float64)
    return Dataset(features, X, y, len(label_names), label_names)


def save_dataset(dataset: Dataset, data_path, costs_path) -> None:
    """Write a Dataset back to data + costs CSVs (round-trips exactly)."""
    with open(data_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(dataset.feature_names + ["label"])
        for row, label in zip(dataset.X, dataset.y):
            cells = ["" if np.isnan(v) else repr(float(v)) for v in row]
            writer.writerow(cells + [dataset.label_names[label]])
    with open(costs_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["feature", "cost"])
        for spec in dataset.features:
            writer.writerow([spec.name, format_units(spec.cost_units)])


def split_stream(dataset: Dataset, seed: int) -> StreamSplit:
    """Deterministic 70/30 split; the 70% side, in shuffled order, is the stream."""
    m = dataset.n_rows
    if m < 10:
        raise ValueError(f"need at least 10 rows to split, got {m}")
    rng = np.random.default_rng(seed)
    perm = rng.permutation(m)
    n_stream = (7 * m + 5) // 10  # round(0.7 m), half away from zero
    stream = tuple(int(i) for i in perm[:n_stream])
    test = tuple(sorted(int(i) for i in perm[n_stream:]))
    return StreamSplit(stream=stream, test=test, seed=seed)


COST_PROFILES = {
    # informative cost, cycle of noise costs (heterogeneous noise costs
    # mirror real sensor suites, where uninformative channels span cheap
    # auxiliary sensors and expensive ones)
    "informative-cheap": ("1", ("0.5", "2.5")),
    "informative-expensive": ("10", ("2",)),
    "uniform": ("1", ("1",)),
}


# Shape of the synthetic label function: a coarse halves split plus thin flip
# bands. Bands are thin enough that carving them out needs a training set rich
# in anchor-feature values, so policies that concentrate budget on informative
# features measurably beat ones that scatter it.
_FLIP_CELLS = 20
_FLIP_BAND_WIDTH = 0.011
# Jitter of the copied informative features: large next to the band width
# (copies carry the coarse signal but cannot resolve the bands), small next to
# the halves split (copies stay individually predictive).
_COPY_JITTER = 0.015
# Noise features: constant center value with a small uniform-spread share.
# Constant-so-far columns have zero observed range, spread ones tiny rescaled
# variance, so adaptive policies can discount them from few observations.
_NOISE_SPREAD = 0.005


def _staircase_labels(x: np.ndarray) -> np.ndarray:
    """1 above 0.5, 0 below, flipped inside thin evenly spaced bands."""
    in_band = np.abs((x * _FLIP_CELLS) % 1.0 - 0.5) < _FLIP_BAND_WIDTH * _FLIP_CELLS / 2
    return (x > 0.5) ^ in_band


def generate_synthetic(
    n_instances: int,
    n_informative: int,
    n_noise: int,
    cost_profile: str = "informative-cheap",
    seed: int = 0,
    label_noise: float = 0.005,
) -> Dataset:
    """Binary-label dataset for desk-scale experiments.

    The label is a deterministic multi-threshold function of the informative
    features (halves split with thin flip bands) with a small random flip
    rate on top. Extra informative features are jittered copies of the first,
    so each is individually predictive. Noise features are independent of the
    label and carry almost no min-max-rescaled variance.
    """
    if n_informative < 1:
        raise ValueError("n_informative must be >= 1")
    if n_noise < 0:
        raise ValueError("n_noise must be >= 0")
    if n_instances < 1:
        raise ValueError("n_instances must be >= 1")
    if not 0.0 <= label_noise <= 0.05:
        raise ValueError("label_noise must be in [0, 0.05]")
    if cost_profile not in COST_PROFILES:
        raise ValueError(
            f"unknown cost_profile {cost_profile!r}; choose from {sorted(COST_PROFILES)}"
        )

    rng = np.random.default_rng(seed)
    m, k = n_instances, n_informative

    # Anchor: mostly uniform with some mass pushed to the extremes, which
    # raises its rescaled variance without touching the label structure.
    anchor = rng.uniform(0.0, 1.0, m)
    extreme = rng.random(m)
    anchor = np.where(extreme < 0.15, anchor * 0.02, anchor)
    anchor = np.where(extreme > 0.85, 1.0 - (1.0 - anchor) * 0.02, anchor)
    informative = np.empty((m, k))
    informative[:, 0] = anchor
    if k > 1:
        jitter = rng.uniform(-_COPY_JITTER, _COPY_JITTER, (m, k - 1))
        informative[:, 1:] = np.clip(anchor[:, None] + jitter, 0.0, 1.0)

    labels = _staircase_labels(anchor)
    flips = rng.random(m) < label_noise
    labels = labels ^ flips

    noise = np.full((m, n_noise), 0.5)
    spread = rng.random((m, n_noise)) < _NOISE_SPREAD
    noise = np.where(spread, rng.uniform(0.0, 1.0, (m, n_noise)), noise)

    informative_cost_raw, noise_cycle = COST_PROFILES[cost_profile]
    informative_cost = to_units(informative_cost_raw)
    noise_costs = [to_units(noise_cycle[j % len(noise_cycle)]) for j in range(n_noise)]
    features = [FeatureSpec(i, f"inf_{i}", informative_cost) for i in range(k)]
    features += [
        FeatureSpec(k + j, f"noise_{j}", noise_costs[j]) for j in range(n_noise)
    ]
    X = np.hstack([informative, noise]) if n_noise else informative
    return Dataset(features, X, labels.astype(np.int64), 2, ["0", "1"])


def random_costs(n_features: int, seed: int, low: float = 1.0, high: float = 10.0) -> list[int]:
    """Seeded uniform costs (micro-units), rounded to two decimals."""
    if not 0 < low <= high:
        raise ValueError("need 0 < low <= high")
    rng = np.random.default_rng(seed)
    draws = rng.uniform(low, high, n_features)
    return [to_units(f"{d:.2f}") for d in draws]


def with_costs(dataset: Dataset, cost_units: list[int]) -> Dataset:
    """Copy of a dataset with replaced per-feature costs."""
    if len(cost_units) != dataset.n_features:
        raise ValueError("need one cost per feature")
    features = [
        FeatureSpec(f.id, f.name, c) for f, c in zip(dataset.features, cost_units)
    ]
    return Dataset(features, dataset.X, dataset.y, dataset.class_count, list(dataset.label_names))
