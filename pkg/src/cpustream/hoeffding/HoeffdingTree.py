import math
import logging
from dataclasses import dataclass, asdict
from typing import Callable, Optional
import numpy as np
from ..errors import ValidationError
from ..regressor import Regressor, check_features
from ..linear.Scaler import RunningScaler, scaler_transform
from .SplitObserver import SplitObserver, SplitCandidate, variance

logger = logging.getLogger(__name__)

LEAF_MODES = ("mean", "perceptron", "adaptive")


@dataclass
class TreeParams:
    delta: float = 1e-7
    grace_period: int = 200
    tau: float = 0.05
    leaf_mode: str = "mean"
    depth_limit: int = 20
    max_thresholds: int = 64
    learning_rate: float = 0.01

    def __post_init__(self):
        if not 0.0 < self.delta < 1.0:
            raise ValidationError(f"delta must be in (0, 1), got {self.delta}")
        if self.grace_period < 1:
            raise ValidationError(f"grace_period must be >= 1, got {self.grace_period}")
        if self.tau < 0:
            raise ValidationError(f"tau must be >= 0, got {self.tau}")
        if self.leaf_mode not in LEAF_MODES:
            raise ValidationError(f"leaf_mode must be one of {LEAF_MODES}, got {self.leaf_mode}")
        if self.depth_limit < 0:
            raise ValidationError(f"depth_limit must be >= 0, got {self.depth_limit}")
        if self.max_thresholds < 2:
            raise ValidationError(f"max_thresholds must be >= 2, got {self.max_thresholds}")
        if self.learning_rate < 0:
            raise ValidationError(f"learning_rate must be >= 0, got {self.learning_rate}")


default_tree_params = TreeParams()


def hoeffding_bound(range_R: float, delta: float, n: float) -> float:
    """eps = sqrt(R^2 ln(1/delta) / (2n))"""
    if range_R <= 0:
        raise ValidationError(f"range R must be > 0, got {range_R}")
    if not 0.0 < delta <= 1.0:
        raise ValidationError(f"delta must be in (0, 1], got {delta}")
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")
    return math.sqrt(range_R * range_R * math.log(1.0 / delta) / (2.0 * n))


class LeafStats:
    """Target moments learned at a leaf plus one split observer per candidate feature."""

    def __init__(self, features: list[int], max_thresholds: int = 64):
        self.n = 0.0
        self.total = 0.0
        self.total_sq = 0.0
        self.features = list(features)
        self.observers = [SplitObserver(max_thresholds) for _ in self.features]

    def update(self, x: list[float], y: float, w: float = 1.0) -> None:
        self.n += w
        self.total += w * y
        self.total_sq += w * y * y
        for feature, observer in zip(self.features, self.observers):
            observer.update(x[feature], y, w)

    @property
    def mean(self) -> float:
        return self.total / self.n if self.n else 0.0

    @property
    def variance(self) -> float:
        return variance(self.n, self.total, self.total_sq)


def rank_splits(stats: LeafStats) -> list[SplitCandidate]:
    """Best candidate per feature, highest merit first, lowest feature on ties."""
    candidates = []
    for feature, observer in zip(stats.features, stats.observers):
        candidate = observer.best_split(feature, stats.n, stats.total, stats.total_sq)
        if candidate is not None:
            candidates.append(candidate)
    return sorted(candidates, key=lambda c: (-c.merit, c.feature, c.threshold))


def best_split(stats: LeafStats) -> Optional[SplitCandidate]:
    if stats.n < 2:
        return None
    ranked = rank_splits(stats)
    return ranked[0] if ranked else None


class _Leaf:
    def __init__(self, stats: LeafStats, depth: int, prior=(0.0, 0.0, 0.0), model=None):
        self.stats = stats
        self.depth = depth
        # moments inherited from the parent at split time
        self.prior = list(prior)
        self.last_attempt = 0.0
        self.model = model

    @property
    def count(self) -> float:
        return self.prior[0] + self.stats.n

    def mean(self) -> float:
        n = self.count
        return (self.prior[1] + self.stats.total) / n if n else 0.0


class _LeafModel:
    """Delta-rule perceptron with running absolute errors of itself and of the leaf mean."""

    def __init__(self, n_features: int):
        self.weights = np.zeros(n_features)
        self.bias = 0.0
        self.err_model = 0.0
        self.err_mean = 0.0

    def predict(self, z: np.ndarray) -> float:
        return float(np.dot(self.weights, z) + self.bias)

    def learn(self, z: np.ndarray, y: float, w: float, learning_rate: float) -> None:
        step = learning_rate * w * (y - self.predict(z))
        self.weights = self.weights + step * z
        self.bias += step

    def copy(self) -> "_LeafModel":
        clone = _LeafModel(len(self.weights))
        clone.weights = self.weights.copy()
        clone.bias = self.bias
        return clone

    def to_snapshot(self) -> dict:
        return {
            "weights": self.weights.tolist(),
            "bias": self.bias,
            "err_model": self.err_model,
            "err_mean": self.err_mean,
        }


class _Split:
    def __init__(self, feature: int, threshold: float, left, right, depth: int):
        self.feature = feature
        self.threshold = threshold
        self.children = [left, right]
        self.depth = depth

    def branch(self, x: list[float]) -> int:
        return 0 if x[self.feature] <= self.threshold else 1


class HoeffdingTree(Regressor):
    """
    Incremental regression tree grown on Hoeffding-bound split decisions.

    Splits compare the two best per-feature candidates by variance
    reduction: a leaf splits when second/best < 1 - eps (R = 1) or when
    eps < tau. A feature_sampler, when given, picks the candidate features
    of every new leaf.
    """

    name = "ht"

    def __init__(
        self,
        n_features: int,
        params: TreeParams = default_tree_params,
        feature_sampler: Callable[[], list[int]] = None,
    ):
        super().__init__(n_features)
        self.params = params
        self._feature_sampler = feature_sampler
        self._uses_model = params.leaf_mode != "mean"
        self._scaler = RunningScaler(n_features) if self._uses_model else None
        self.n_splits = 0
        self.n_learned = 0.0
        self._root = self._new_leaf(depth=0)

    def _sample_features(self) -> list[int]:
        if self._feature_sampler is None:
            return list(range(self.n_features))
        return sorted(self._feature_sampler())

    def _new_leaf(self, depth: int, prior=(0.0, 0.0, 0.0), model: _LeafModel = None) -> _Leaf:
        stats = LeafStats(self._sample_features(), self.params.max_thresholds)
        if self._uses_model and model is None:
            model = _LeafModel(self.n_features)
        return _Leaf(stats, depth, prior, model)

    def _make_split(self, feature: int, threshold: float, left, right, depth: int) -> _Split:
        return _Split(feature, threshold, left, right, depth)

    @staticmethod
    def _route(node, x: list[float]) -> _Leaf:
        while isinstance(node, _Split):
            node = node.children[0 if x[node.feature] <= node.threshold else 1]
        return node

    def _sort(self, x: list[float]):
        """returns (leaf, parent split or None, branch index)"""
        parent, branch, node = None, 0, self._root
        while isinstance(node, _Split):
            parent, branch = node, (0 if x[node.feature] <= node.threshold else 1)
            node = node.children[branch]
        return node, parent, branch

    def _standardize(self, x: list[float]) -> Optional[np.ndarray]:
        if not self._uses_model:
            return None
        return self._scaler.transform_one(x)

    def _leaf_predict(self, leaf: _Leaf, z: Optional[np.ndarray]) -> float:
        mode = self.params.leaf_mode
        if mode == "mean":
            return leaf.mean()
        if mode == "perceptron":
            return leaf.model.predict(z)
        if leaf.model.err_model < leaf.model.err_mean:
            return leaf.model.predict(z)
        return leaf.mean()

    def _learn_leaf(self, leaf: _Leaf, x: list[float], z, y: float, w: float) -> None:
        if leaf.model is not None:
            leaf.model.err_mean += w * abs(y - leaf.mean())
            leaf.model.err_model += w * abs(y - leaf.model.predict(z))
            leaf.model.learn(z, y, w, self.params.learning_rate)
        leaf.stats.update(x, y, w)

    def _attempt_split(self, leaf: _Leaf) -> Optional[_Split]:
        params = self.params
        if leaf.depth >= params.depth_limit:
            return None
        if leaf.stats.n - leaf.last_attempt < params.grace_period:
            return None
        leaf.last_attempt = leaf.stats.n

        ranked = rank_splits(leaf.stats)
        if not ranked or ranked[0].merit <= 0.0:
            return None
        best = ranked[0]
        second = max(ranked[1].merit, 0.0) if len(ranked) > 1 else 0.0
        eps = hoeffding_bound(1.0, params.delta, leaf.stats.n)
        if second / best.merit < 1.0 - eps or eps < params.tau:
            return self._split_leaf(leaf, best)
        return None

    def _split_leaf(self, leaf: _Leaf, best: SplitCandidate) -> _Split:
        stats = leaf.stats
        observer = stats.observers[stats.features.index(best.feature)]
        left = observer.partition(best.threshold)
        right = (stats.n - left[0], stats.total - left[1], stats.total_sq - left[2])

        children = []
        for part in (left, right):
            share = part[0] / stats.n
            prior = [p + share * q for p, q in zip(part, leaf.prior)]
            model = leaf.model.copy() if leaf.model is not None else None
            children.append(self._new_leaf(leaf.depth + 1, prior, model))

        self.n_splits += 1
        logger.debug(
            f"{self.name}: split at depth {leaf.depth} on x[{best.feature}] <= "
            f"{best.threshold:.6g} (merit {best.merit:.6g}, n {stats.n:g})"
        )
        return self._make_split(best.feature, best.threshold, children[0], children[1], leaf.depth)

    def learn_one(self, x, y: float, w: float = 1.0) -> None:
        self.learn_values(check_features(x, self.n_features), y, w)

    def learn_values(self, x: list[float], y: float, w: float = 1.0) -> None:
        """learn_one for a feature list the caller has already checked"""
        if w <= 0:
            return
        y = float(y)
        z = scaler_transform(self._scaler, x, w) if self._uses_model else None
        leaf, parent, branch = self._sort(x)
        self._learn_leaf(leaf, x, z, y, w)
        self.n_learned += w
        split = self._attempt_split(leaf)
        if split is None:
            return
        if parent is None:
            self._root = split
        else:
            parent.children[branch] = split

    def predict_one(self, x) -> float:
        return self.predict_values(check_features(x, self.n_features))

    def predict_values(self, x: list[float]) -> float:
        return self._leaf_predict(self._route(self._root, x), self._standardize(x))

    # structure

    def _children_of(self, node) -> list:
        return node.children if isinstance(node, _Split) else []

    def _walk(self, node=None):
        stack = [self._root if node is None else node]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(self._children_of(node)))

    @property
    def root(self):
        return self._root

    @property
    def node_count(self) -> int:
        return sum(1 for _ in self._walk())

    @property
    def leaf_count(self) -> int:
        return sum(1 for node in self._walk() if isinstance(node, _Leaf))

    def leaves(self) -> list[_Leaf]:
        return [node for node in self._walk(self._root) if isinstance(node, _Leaf)]

    @property
    def depth(self) -> int:
        return max(node.depth for node in self._walk() if isinstance(node, _Leaf))

    def _node_snapshot(self, node) -> dict:
        if isinstance(node, _Leaf):
            return {
                "kind": "leaf",
                "depth": node.depth,
                "stats": [node.stats.n, node.stats.total, node.stats.total_sq],
                "prior": list(node.prior),
                "features": list(node.stats.features),
                "observers": [o.to_snapshot() for o in node.stats.observers],
                "model": node.model.to_snapshot() if node.model is not None else None,
            }
        return {
            "kind": "split",
            "feature": node.feature,
            "threshold": node.threshold,
            "children": [self._node_snapshot(child) for child in node.children],
        }

    def to_snapshot(self) -> dict:
        return {
            "kind": self.name,
            "n_features": self.n_features,
            "params": asdict(self.params),
            "scaler": self._scaler.to_snapshot() if self._scaler else None,
            "root": self._node_snapshot(self._root),
        }
