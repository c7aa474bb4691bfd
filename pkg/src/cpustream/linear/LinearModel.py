import logging
from abc import abstractmethod
import numpy as np
from ..errors import NumericError, ValidationError
from ..regressor import Regressor
from .Scaler import MIN_STD, RunningScaler, scaler_transform

logger = logging.getLogger(__name__)


class LinearModel(Regressor):
    """
    y_hat = w . x + b, optionally on running-standardized features.

    The bias is an implicit always-1 coordinate.
    """

    name = "linear"

    def __init__(self, n_features: int, standardize: bool = False):
        super().__init__(n_features)
        self.weights = np.zeros(n_features)
        self.bias = 0.0
        self.standardize = standardize
        self.scaler = RunningScaler(n_features) if standardize else None
        self.n_updates = 0

    def get_standardized(self) -> bool:
        return self.standardize

    def _check(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.n_features,):
            raise ValidationError(
                f"expected {self.n_features} features, got shape {x.shape}"
            )
        return x

    def _raw_predict(self, z: np.ndarray) -> float:
        return float(np.dot(self.weights, z) + self.bias)

    def predict_one(self, x) -> float:
        x = self._check(x)
        if self.standardize:
            x = self.scaler.transform_one(x)
        return self._raw_predict(x)

    def predict_many(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if self.standardize:
            if self.scaler.count == 0:
                X = np.zeros_like(X)
            else:
                std = np.maximum(np.sqrt(self.scaler.variance), MIN_STD)
                X = (X - self.scaler.mean) / std
        return X @ self.weights + self.bias

    def learn_one(self, x, y: float, w: float = 1.0) -> None:
        x = self._check(x)
        if w <= 0:
            return
        saved = (self.weights.copy(), self.bias, self.scaler.copy() if self.scaler else None)
        z = scaler_transform(self.scaler, x, w) if self.standardize else x
        self._update(z, float(y), w)
        if not (np.all(np.isfinite(self.weights)) and np.isfinite(self.bias)):
            self.weights, self.bias, self.scaler = saved
            raise NumericError(f"{self.name} update produced non-finite weights; rolled back")
        self.n_updates += 1

    @abstractmethod
    def _update(self, z: np.ndarray, y: float, w: float) -> None:
        pass

    def _hyperparams(self) -> dict:
        return {}

    def to_snapshot(self) -> dict:
        return {
            "kind": self.name,
            "weights": self.weights.tolist(),
            "bias": self.bias,
            "standardize": self.standardize,
            "scaler": self.scaler.to_snapshot() if self.scaler else None,
            "params": self._hyperparams(),
        }


class SGDRegressor(LinearModel):
    """Squared-loss SGD with a constant or inverse-time learning rate."""

    name = "sgd"
    SCHEDULES = ("constant", "inverse-time")

    def __init__(
        self,
        n_features: int,
        learning_rate: float = 0.01,
        schedule: str = "constant",
        decay: float = 0.01,
        standardize: bool = True,
    ):
        super().__init__(n_features, standardize)
        if learning_rate < 0:
            raise ValidationError(f"learning_rate must be >= 0, got {learning_rate}")
        if schedule not in self.SCHEDULES:
            raise ValidationError(f"schedule must be one of {self.SCHEDULES}, got {schedule}")
        if decay < 0:
            raise ValidationError(f"decay must be >= 0, got {decay}")
        self.learning_rate = learning_rate
        self.schedule = schedule
        self.decay = decay

    def current_rate(self) -> float:
        if self.schedule == "constant":
            return self.learning_rate
        return self.learning_rate / (1.0 + self.decay * self.n_updates)

    def _update(self, z: np.ndarray, y: float, w: float) -> None:
        # overflow surfaces as inf and is caught by the rollback
        with np.errstate(over="ignore", invalid="ignore"):
            step = self.current_rate() * w * (y - self._raw_predict(z))
            self.weights = self.weights + step * z
            self.bias = self.bias + step

    def _hyperparams(self) -> dict:
        return {"learning_rate": self.learning_rate, "schedule": self.schedule, "decay": self.decay}


class PassiveAggressiveRegressor(LinearModel):
    """
    epsilon-insensitive Passive-Aggressive regression.

    A positive sample weight triggers one update; PA steps are exact, so
    repeating them changes nothing.
    """

    name = "pa"
    VARIANTS = ("PA", "PA-I", "PA-II")

    def __init__(
        self,
        n_features: int,
        C: float = 1.0,
        epsilon: float = 0.1,
        variant: str = "PA-I",
        standardize: bool = True,
    ):
        super().__init__(n_features, standardize)
        if variant not in self.VARIANTS:
            raise ValidationError(f"variant must be one of {self.VARIANTS}, got {variant}")
        if C < 0 or (variant == "PA-II" and C == 0):
            raise ValidationError(f"C must be positive for {variant}, got {C}")
        if epsilon < 0:
            raise ValidationError(f"epsilon must be >= 0, got {epsilon}")
        self.C = C
        self.epsilon = epsilon
        self.variant = variant

    def _step_size(self, loss: float, sq_norm: float) -> float:
        if self.variant == "PA":
            return loss / sq_norm
        if self.variant == "PA-I":
            return min(self.C, loss / sq_norm)
        return loss / (sq_norm + 1.0 / (2.0 * self.C))

    def _update(self, z: np.ndarray, y: float, w: float) -> None:
        residual = y - self._raw_predict(z)
        loss = max(0.0, abs(residual) - self.epsilon)
        if loss == 0.0:
            return
        with np.errstate(over="ignore", invalid="ignore"):
            tau = self._step_size(loss, float(np.dot(z, z)) + 1.0)
            signed = tau if residual > 0 else -tau
            self.weights = self.weights + signed * z
            self.bias = self.bias + signed

    def _hyperparams(self) -> dict:
        return {"C": self.C, "epsilon": self.epsilon, "variant": self.variant}
