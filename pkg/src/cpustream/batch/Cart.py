import logging
from dataclasses import dataclass, asdict
from typing import Callable, Optional
import numpy as np
from ..errors import ValidationError
from ..regressor import Regressor, check_features

logger = logging.getLogger(__name__)

MAX_DEPTH_CAP = 30
# gains below this fraction of the node SSE are rounding noise
_MIN_GAIN = 1e-12


@dataclass
class CartParams:
    max_depth: Optional[int] = None
    min_samples_split: int = 2
    min_samples_leaf: int = 1

    def __post_init__(self):
        if self.max_depth is not None and self.max_depth < 1:
            raise ValidationError(f"max_depth must be >= 1, got {self.max_depth}")
        if self.min_samples_split < 1 or self.min_samples_leaf < 1:
            raise ValidationError("min_samples_split and min_samples_leaf must be >= 1")

    @property
    def depth_cap(self) -> int:
        return MAX_DEPTH_CAP if self.max_depth is None else min(self.max_depth, MAX_DEPTH_CAP)


default_cart_params = CartParams()


def _best_split_on(x: np.ndarray, y: np.ndarray, min_leaf: int):
    """returns (gain, threshold) of the best midpoint split on one feature, or None"""
    order = np.argsort(x, kind="stable")
    xs, ys = x[order], y[order]
    n = len(ys)
    csum = np.cumsum(ys)
    csq = np.cumsum(ys * ys)
    left_n = np.arange(1, n)
    right_n = n - left_n
    sse_left = csq[:-1] - csum[:-1] ** 2 / left_n
    sse_right = (csq[-1] - csq[:-1]) - (csum[-1] - csum[:-1]) ** 2 / right_n
    sse_parent = csq[-1] - csum[-1] ** 2 / n

    valid = (xs[:-1] < xs[1:]) & (left_n >= min_leaf) & (right_n >= min_leaf)
    if not valid.any():
        return None
    gain = np.where(valid, sse_parent - sse_left - sse_right, -np.inf)
    i = int(np.argmax(gain))
    return float(gain[i]) / n, float((xs[i] + xs[i + 1]) / 2.0)


class CartTree(Regressor):
    """
    Batch regression tree grown by exact variance reduction.

    Thresholds are midpoints between consecutive distinct sorted values.
    Nodes live in parallel arrays; a feature of -1 marks a leaf.
    """

    name = "cart"

    def __init__(
        self,
        n_features: int,
        params: CartParams = default_cart_params,
        feature_sampler: Callable[[], np.ndarray] = None,
    ):
        super().__init__(n_features)
        self.params = params
        self._feature_sampler = feature_sampler
        self._reset()

    def _reset(self) -> None:
        self.feature: list[int] = []
        self.threshold: list[float] = []
        self.left: list[int] = []
        self.right: list[int] = []
        self.value: list[float] = []
        self.n_samples: list[int] = []
        self.depths: list[int] = []

    def get_support_incremental(self) -> bool:
        return False

    def get_support_refit(self) -> bool:
        return True

    @property
    def fitted(self) -> bool:
        return bool(self.value)

    def fit(self, dataset) -> "CartTree":
        X = np.asarray(dataset.features, dtype=float)
        y = np.asarray(dataset.targets, dtype=float)
        return self.fit_arrays(X, y)

    def fit_arrays(self, X: np.ndarray, y: np.ndarray) -> "CartTree":
        if len(y) == 0:
            raise ValidationError("cannot fit a tree on an empty dataset")
        if X.shape[1] != self.n_features:
            raise ValidationError(f"expected {self.n_features} features, got {X.shape[1]}")
        self._reset()
        self._grow(X, y, np.arange(len(y)), depth=0)
        return self

    def _add_node(self, y: np.ndarray, depth: int) -> int:
        self.feature.append(-1)
        self.threshold.append(0.0)
        self.left.append(-1)
        self.right.append(-1)
        self.value.append(float(np.mean(y)))
        self.n_samples.append(len(y))
        self.depths.append(depth)
        return len(self.value) - 1

    def _candidate_features(self) -> np.ndarray:
        if self._feature_sampler is None:
            return np.arange(self.n_features)
        return np.sort(self._feature_sampler())

    def _grow(self, X: np.ndarray, y: np.ndarray, rows: np.ndarray, depth: int) -> int:
        params = self.params
        ys = y[rows]
        node = self._add_node(ys, depth)
        if (
            depth >= params.depth_cap
            or len(rows) < params.min_samples_split
            or len(rows) < 2 * params.min_samples_leaf
            or np.ptp(ys) == 0.0
        ):
            return node

        centered = ys - ys.mean()
        sse_parent = float(np.dot(centered, centered))
        best = None
        for feature in self._candidate_features():
            found = _best_split_on(X[rows, feature], centered, params.min_samples_leaf)
            # strict comparison keeps the lowest feature on ties
            if found is not None and (best is None or found[0] > best[0]):
                best = (found[0], int(feature), found[1])
        if best is None or best[0] * len(rows) <= _MIN_GAIN * sse_parent:
            return node

        _, feature, threshold = best
        goes_left = X[rows, feature] <= threshold
        self.feature[node] = feature
        self.threshold[node] = threshold
        self.left[node] = self._grow(X, y, rows[goes_left], depth + 1)
        self.right[node] = self._grow(X, y, rows[~goes_left], depth + 1)
        return node

    def _leaf_index(self, x: list[float]) -> int:
        node = 0
        while self.feature[node] >= 0:
            node = self.left[node] if x[self.feature[node]] <= self.threshold[node] else self.right[node]
        return node

    def predict_one(self, x) -> float:
        if not self.fitted:
            raise ValidationError("tree is not fitted")
        return self.value[self._leaf_index(check_features(x, self.n_features))]

    def predict_many(self, X: np.ndarray) -> np.ndarray:
        if not self.fitted:
            raise ValidationError("tree is not fitted")
        X = np.asarray(X, dtype=float)
        feature = np.array(self.feature)
        threshold = np.array(self.threshold)
        left, right = np.array(self.left), np.array(self.right)
        nodes = np.zeros(len(X), dtype=int)
        active = feature[nodes] >= 0
        while active.any():
            idx = np.flatnonzero(active)
            current = nodes[idx]
            go_left = X[idx, feature[current]] <= threshold[current]
            nodes[idx] = np.where(go_left, left[current], right[current])
            active = feature[nodes] >= 0
        return np.array(self.value)[nodes]

    @property
    def node_count(self) -> int:
        return len(self.value)

    @property
    def depth(self) -> int:
        return max(self.depths) if self.depths else 0

    def to_snapshot(self) -> dict:
        return {
            "kind": self.name,
            "n_features": self.n_features,
            "params": asdict(self.params),
            "nodes": [
                {
                    "kind": "node",
                    "feature": self.feature[i],
                    "threshold": self.threshold[i],
                    "left": self.left[i],
                    "right": self.right[i],
                    "value": self.value[i],
                    "n": self.n_samples[i],
                }
                for i in range(len(self.value))
            ],
        }


def cart_fit(train, params: CartParams = default_cart_params) -> CartTree:
    return CartTree(train.window_size, params).fit(train)


def cart_predict(tree: CartTree, features) -> float:
    return tree.predict_one(features)
