import math
import logging
from dataclasses import dataclass, asdict
from typing import Optional
import numpy as np
from joblib import Parallel, delayed
from ..errors import ValidationError
from ..regressor import Regressor
from ..seeding import mix_seed, make_rng
from .Cart import CartTree, CartParams, default_cart_params

logger = logging.getLogger(__name__)


@dataclass
class ForestParams:
    n_trees: int = 100
    bootstrap: bool = True
    # None = ceil(L / 3), at least 1
    features_per_split: Optional[int] = None
    seed: int = 0
    n_jobs: int = 1
    tree_params: CartParams = default_cart_params

    def __post_init__(self):
        if self.n_trees < 1:
            raise ValidationError(f"n_trees must be >= 1, got {self.n_trees}")

    def resolve_features(self, n_features: int) -> int:
        m = self.features_per_split
        if m is None:
            m = max(1, math.ceil(n_features / 3))
        if not 1 <= m <= n_features:
            raise ValidationError(f"features_per_split {m} outside [1, {n_features}]")
        return m


default_forest_params = ForestParams()


def _fit_tree(X: np.ndarray, y: np.ndarray, seed: int, bootstrap: bool, m: int,
              tree_params: CartParams) -> CartTree:
    rng = make_rng(seed)
    n, L = X.shape
    rows = rng.integers(0, n, size=n) if bootstrap else np.arange(n)

    def sampler() -> np.ndarray:
        return rng.choice(L, size=m, replace=False)

    return CartTree(L, tree_params, sampler).fit_arrays(X[rows], y[rows])


class RandomForest(Regressor):
    """Bagged CART trees with a random feature subset per node; predicts the tree mean."""

    name = "rf"

    def __init__(self, n_features: int, params: ForestParams = default_forest_params):
        super().__init__(n_features)
        self.params = params
        self.features_per_split = params.resolve_features(n_features)
        self.trees: list[CartTree] = []

    def get_support_incremental(self) -> bool:
        return False

    def get_support_refit(self) -> bool:
        return True

    @property
    def fitted(self) -> bool:
        return bool(self.trees)

    def fit(self, dataset) -> "RandomForest":
        X = np.asarray(dataset.features, dtype=float)
        y = np.asarray(dataset.targets, dtype=float)
        if len(y) == 0:
            raise ValidationError("cannot fit a forest on an empty dataset")
        if X.shape[1] != self.n_features:
            raise ValidationError(f"expected {self.n_features} features, got {X.shape[1]}")
        params = self.params
        # per-tree seeds; results do not depend on n_jobs
        self.trees = Parallel(n_jobs=params.n_jobs)(
            delayed(_fit_tree)(
                X, y, mix_seed(params.seed, "tree", i), params.bootstrap,
                self.features_per_split, params.tree_params,
            )
            for i in range(params.n_trees)
        )
        logger.debug(f"rf: fitted {len(self.trees)} trees on {len(y)} instances")
        return self

    def predict_one(self, x) -> float:
        if not self.fitted:
            raise ValidationError("forest is not fitted")
        return math.fsum(tree.predict_one(x) for tree in self.trees) / len(self.trees)

    def predict_many(self, X: np.ndarray) -> np.ndarray:
        if not self.fitted:
            raise ValidationError("forest is not fitted")
        return np.mean([tree.predict_many(X) for tree in self.trees], axis=0)

    def to_snapshot(self) -> dict:
        params = asdict(self.params)
        params.pop("tree_params")
        return {
            "kind": self.name,
            "n_features": self.n_features,
            "params": params,
            "members": [dict(tree.to_snapshot(), kind="member") for tree in self.trees],
        }


def rf_fit(train, params: ForestParams = default_forest_params) -> RandomForest:
    return RandomForest(train.window_size, params).fit(train)


def rf_predict(forest: RandomForest, features) -> float:
    return forest.predict_one(features)
