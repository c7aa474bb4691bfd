from abc import ABC, abstractmethod
from typing import Sequence
import numpy as np
from .errors import ValidationError


def check_features(x, n_features: int) -> list[float]:
    """Validate the feature dimension and return the features as floats."""
    if isinstance(x, np.ndarray):
        values = x.tolist()
    else:
        values = list(x)
    if len(values) != n_features:
        raise ValidationError(
            f"expected {n_features} features, got {len(values)}"
        )
    return values


class Regressor(ABC):
    """
    One-step-ahead regressor over lag vectors.

    Online models implement learn_one and inherit fit as a single pass over
    the dataset; batch models override fit and report no incremental support.
    """

    name: str = "regressor"

    def __init__(self, n_features: int):
        if n_features < 1:
            raise ValidationError(f"n_features must be >= 1, got {n_features}")
        self.n_features = n_features

    def get_support_incremental(self) -> bool:
        return True

    def get_support_refit(self) -> bool:
        return False

    def get_standardized(self) -> bool:
        return False

    @abstractmethod
    def predict_one(self, x: Sequence[float]) -> float:
        pass

    def learn_one(self, x: Sequence[float], y: float, w: float = 1.0) -> None:
        raise NotImplementedError(f"{self.name} does not learn incrementally")

    def fit(self, dataset) -> "Regressor":
        for x, y in dataset.rows():
            self.learn_one(x, y)
        return self

    def predict_many(self, X: np.ndarray) -> np.ndarray:
        return np.array([self.predict_one(row) for row in X], dtype=float)

    @abstractmethod
    def to_snapshot(self) -> dict:
        pass
