import numpy as np
from ..errors import ValidationError
from ..regressor import Regressor, check_features

RIDGE_JITTER = 1e-8


class OrdinaryLeastSquares(Regressor):
    """Batch least squares through the normal equations with a tiny ridge on the Gram diagonal."""

    name = "ols"

    def __init__(self, n_features: int):
        super().__init__(n_features)
        self.weights = np.zeros(n_features)
        self.bias = 0.0
        self.fitted = False

    def get_support_incremental(self) -> bool:
        return False

    def get_support_refit(self) -> bool:
        return True

    def fit(self, dataset) -> "OrdinaryLeastSquares":
        X, y = dataset.features, dataset.targets
        n, L = X.shape
        if L != self.n_features:
            raise ValidationError(f"expected {self.n_features} features, got {L}")
        if n < L + 1:
            raise ValidationError(f"ols needs at least {L + 1} instances, got {n}")
        A = np.hstack((X, np.ones((n, 1))))
        gram = A.T @ A
        gram[np.diag_indices_from(gram)] += RIDGE_JITTER
        solution = np.linalg.solve(gram, A.T @ y)
        self.weights = solution[:-1]
        self.bias = float(solution[-1])
        self.fitted = True
        return self

    def predict_one(self, x) -> float:
        if not self.fitted:
            raise ValidationError("ols is not fitted")
        return float(np.dot(self.weights, check_features(x, self.n_features)) + self.bias)

    def predict_many(self, X: np.ndarray) -> np.ndarray:
        if not self.fitted:
            raise ValidationError("ols is not fitted")
        return np.asarray(X, dtype=float) @ self.weights + self.bias

    def to_snapshot(self) -> dict:
        return {
            "kind": self.name,
            "weights": self.weights.tolist(),
            "bias": self.bias,
            "fitted": self.fitted,
        }


def ols_fit(train) -> OrdinaryLeastSquares:
    return OrdinaryLeastSquares(train.window_size).fit(train)
