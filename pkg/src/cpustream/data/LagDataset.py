import math
from dataclasses import dataclass
from typing import Iterator, Union
import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from ..errors import ValidationError
from .TimeSeries import TimeSeries


@dataclass(frozen=True)
class LagInstance:
    """features are ordered x(t-L) ... x(t-1), target is x(t)"""

    features: tuple[float, ...]
    target: float


class LagDataset:
    def __init__(self, features: np.ndarray, targets: np.ndarray, window_size: int):
        features = np.asarray(features, dtype=float)
        targets = np.asarray(targets, dtype=float)
        if window_size < 1:
            raise ValidationError(f"window size must be >= 1, got {window_size}")
        if features.ndim != 2 or features.shape != (len(targets), window_size):
            raise ValidationError(
                f"features shape {features.shape} does not match "
                f"{len(targets)} targets with window size {window_size}"
            )
        if not (np.all(np.isfinite(features)) and np.all(np.isfinite(targets))):
            raise ValidationError("lag instances must be finite")
        self.features = features
        self.targets = targets
        self.window_size = window_size

    def __len__(self) -> int:
        return len(self.targets)

    def __getitem__(self, i: int) -> LagInstance:
        return LagInstance(tuple(self.features[i].tolist()), float(self.targets[i]))

    def __iter__(self) -> Iterator[LagInstance]:
        for i in range(len(self)):
            yield self[i]

    @property
    def instances(self) -> list[LagInstance]:
        return list(self)

    def rows(self) -> Iterator[tuple[list[float], float]]:
        """(features, target) pairs as plain Python floats"""
        return zip(self.features.tolist(), self.targets.tolist())

    def slice(self, start: int, stop: int = None) -> "LagDataset":
        return LagDataset(self.features[start:stop], self.targets[start:stop], self.window_size)

    def persistence_series(self) -> np.ndarray:
        """
        The most recent lag of the first instance followed by every target.

        Lag-1 differences of this series are exactly the errors of the
        persistence forecast over the dataset.
        """
        if len(self) == 0:
            return np.empty(0)
        return np.concatenate(([self.features[0, -1]], self.targets))


def _values_of(series: Union[TimeSeries, np.ndarray, list]) -> np.ndarray:
    if isinstance(series, TimeSeries):
        return series.values
    return np.asarray(series, dtype=float)


def make_lag_dataset(series, L: int) -> LagDataset:
    values = _values_of(series)
    n = len(values)
    if L < 1:
        raise ValidationError(f"window size must be >= 1, got {L}")
    if n <= L:
        raise ValidationError(
            f"series length n={n} must exceed window size L={L}"
        )
    windows = sliding_window_view(values, L)[:-1]
    return LagDataset(windows.copy(), values[L:].copy(), L)


def _split_index(n: int, train_fraction: float) -> int:
    if not 0.0 < train_fraction < 1.0:
        raise ValidationError(f"train fraction must be in (0, 1), got {train_fraction}")
    return math.floor(n * train_fraction)


def chronological_split(dataset: LagDataset, train_fraction: float) -> tuple[LagDataset, LagDataset]:
    """First floor(n * fraction) instances train, the rest test. No shuffling."""
    cut = _split_index(len(dataset), train_fraction)
    if len(dataset) == 0:
        raise ValidationError("cannot split an empty dataset")
    return dataset.slice(0, cut), dataset.slice(cut)


def split_series(series: TimeSeries, train_fraction: float) -> tuple[TimeSeries, TimeSeries]:
    cut = _split_index(len(series), train_fraction)
    if cut == 0 or cut == len(series):
        raise ValidationError(
            f"a {train_fraction} split of {len(series)} points leaves one side empty"
        )
    return (
        TimeSeries(series.timestamps[:cut], series.values[:cut]),
        TimeSeries(series.timestamps[cut:], series.values[cut:]),
    )


def make_holdout_datasets(
    train_series: TimeSeries, test_series: TimeSeries, L: int
) -> tuple[LagDataset, LagDataset]:
    """
    Featurize a train/test pair so that every test point is a target.

    The test windows are seeded with the last L training values.
    """
    train_values = _values_of(train_series)
    test_values = _values_of(test_series)
    train = make_lag_dataset(train_values, L)
    if len(test_values) == 0:
        raise ValidationError("test series is empty")
    test = make_lag_dataset(np.concatenate((train_values[-L:], test_values)), L)
    return train, test
