import logging
from collections import deque
from typing import Callable
from ..driftdetect.Adwin import AdwinDetector
from ..errors import ValidationError
from ..linear.Scaler import scaler_transform
from ..seeding import make_rng
from .HoeffdingTree import HoeffdingTree, TreeParams, default_tree_params, _Leaf, _Split

logger = logging.getLogger(__name__)


class _AdaptiveSplit(_Split):
    def __init__(self, feature, threshold, left, right, depth, drift_delta: float, error_window: int):
        super().__init__(feature, threshold, left, right, depth)
        self.detector = AdwinDetector(delta=drift_delta)
        self.alternate = None
        self.alternate_age = 0
        self.errors = deque(maxlen=error_window)
        self.alternate_errors = deque(maxlen=error_window)


class HatTree(HoeffdingTree):
    """
    Hoeffding Adaptive Tree.

    Every split node runs ADWIN over the normalized absolute error of the
    tree's prediction. An error increase starts an alternate subtree at that
    node; once the alternate has seen grace_period instances it replaces the
    node whenever its error over the last min(error_window, age) instances is
    strictly lower. Alternates that never win are dropped at
    alternate_max_age.
    """

    name = "hat"

    def __init__(
        self,
        n_features: int,
        params: TreeParams = default_tree_params,
        drift_delta: float = 0.002,
        alternate_max_age: int = 5000,
        error_window: int = 1000,
        bootstrap_sampling: bool = False,
        seed: int = 0,
        feature_sampler: Callable[[], list[int]] = None,
    ):
        if alternate_max_age < params.grace_period:
            raise ValidationError("alternate_max_age must be >= grace_period")
        if error_window < 1:
            raise ValidationError(f"error_window must be >= 1, got {error_window}")
        self.drift_delta = drift_delta
        self.alternate_max_age = alternate_max_age
        self.error_window = error_window
        self.bootstrap_sampling = bootstrap_sampling
        self._rng = make_rng(seed)
        self._y_min = None
        self._y_max = None
        self.n_alternates = 0
        self.n_replacements = 0
        self.n_discarded = 0
        super().__init__(n_features, params, feature_sampler)

    def _make_split(self, feature, threshold, left, right, depth) -> _AdaptiveSplit:
        return _AdaptiveSplit(
            feature, threshold, left, right, depth, self.drift_delta, self.error_window
        )

    def _normalized_error(self, y_hat: float, y: float) -> float:
        error = abs(y_hat - y)
        span = self._y_max - self._y_min
        if span <= 0:
            return 0.0 if error == 0 else 1.0
        return min(error / span, 1.0)

    def learn_values(self, x: list[float], y: float, w: float = 1.0) -> None:
        if self.bootstrap_sampling:
            w *= int(self._rng.poisson(1.0))
        if w <= 0:
            return
        y = float(y)
        z = scaler_transform(self._scaler, x, w) if self._uses_model else None
        self._y_min = y if self._y_min is None else min(self._y_min, y)
        self._y_max = y if self._y_max is None else max(self._y_max, y)

        error = self._normalized_error(self._leaf_predict(self._route(self._root, x), z), y)
        self._root = self._learn_node(self._root, x, z, y, w, error)
        self.n_learned += w

    def _learn_node(self, node, x, z, y: float, w: float, error: float):
        if isinstance(node, _Leaf):
            self._learn_leaf(node, x, z, y, w)
            return self._attempt_split(node) or node

        signal = node.detector.update(error)
        if node.alternate is not None:
            alternate_error = self._normalized_error(
                self._leaf_predict(self._route(node.alternate, x), z), y
            )
            node.errors.append(error)
            node.alternate_errors.append(alternate_error)
            node.alternate_age += 1
            node.alternate = self._learn_node(node.alternate, x, z, y, w, alternate_error)

            if node.alternate_age >= self.params.grace_period and sum(node.alternate_errors) < sum(node.errors):
                self.n_replacements += 1
                logger.debug(
                    f"hat: alternate replaced subtree at depth {node.depth} "
                    f"after {node.alternate_age} instances"
                )
                return node.alternate
            if node.alternate_age >= self.alternate_max_age:
                self.n_discarded += 1
                logger.debug(f"hat: discarded alternate at depth {node.depth}")
                self._clear_alternate(node)
        elif signal and node.detector.drift_increased:
            node.alternate = self._new_leaf(node.depth)
            self.n_alternates += 1
            logger.debug(f"hat: error increase at depth {node.depth}, alternate started")

        branch = node.branch(x)
        node.children[branch] = self._learn_node(node.children[branch], x, z, y, w, error)
        return node

    @staticmethod
    def _clear_alternate(node: _AdaptiveSplit) -> None:
        node.alternate = None
        node.alternate_age = 0
        node.errors.clear()
        node.alternate_errors.clear()

    def _children_of(self, node) -> list:
        if isinstance(node, _AdaptiveSplit) and node.alternate is not None:
            return node.children + [node.alternate]
        return super()._children_of(node)

    def leaves(self) -> list[_Leaf]:
        """leaves of the active tree, alternates excluded"""
        stack, leaves = [self._root], []
        while stack:
            node = stack.pop()
            if isinstance(node, _Leaf):
                leaves.append(node)
            else:
                stack.extend(reversed(node.children))
        return leaves

    def _node_snapshot(self, node) -> dict:
        snapshot = super()._node_snapshot(node)
        if isinstance(node, _AdaptiveSplit):
            snapshot["detector"] = node.detector.to_snapshot()
            snapshot["alternate"] = (
                self._node_snapshot(node.alternate) if node.alternate is not None else None
            )
            snapshot["alternate_age"] = node.alternate_age
        return snapshot
