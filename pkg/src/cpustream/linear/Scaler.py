import numpy as np
from ..errors import ValidationError

# floor on the standard deviation used for division
MIN_STD = 1e-9


class RunningScaler:
    """Per-feature running mean and variance via the weighted Welford recurrence."""

    def __init__(self, n_features: int):
        self.n_features = n_features
        self.count = 0.0
        self.mean = np.zeros(n_features)
        self.m2 = np.zeros(n_features)

    def _check(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.n_features,):
            raise ValidationError(
                f"expected {self.n_features} features, got shape {x.shape}"
            )
        return x

    def learn_one(self, x, w: float = 1.0) -> None:
        x = self._check(x)
        if w <= 0:
            return
        self.count += w
        delta = x - self.mean
        self.mean += (w / self.count) * delta
        self.m2 += w * delta * (x - self.mean)
        np.maximum(self.m2, 0.0, out=self.m2)

    @property
    def variance(self) -> np.ndarray:
        if self.count == 0:
            return np.zeros(self.n_features)
        return self.m2 / self.count

    def transform_one(self, x) -> np.ndarray:
        x = self._check(x)
        if self.count == 0:
            return np.zeros(self.n_features)
        return (x - self.mean) / np.maximum(np.sqrt(self.variance), MIN_STD)

    def copy(self) -> "RunningScaler":
        clone = RunningScaler(self.n_features)
        clone.count = self.count
        clone.mean = self.mean.copy()
        clone.m2 = self.m2.copy()
        return clone

    def to_snapshot(self) -> dict:
        return {"count": self.count, "mean": self.mean.tolist(), "m2": self.m2.tolist()}


def scaler_transform(scaler: RunningScaler, features, w: float = 1.0) -> np.ndarray:
    """Learn the raw features, then standardize them with the updated moments."""
    scaler.learn_one(features, w)
    return scaler.transform_one(features)
