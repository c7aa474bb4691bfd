import math
import logging
from dataclasses import dataclass, asdict, field
from typing import Optional, Union
import numpy as np
from ..driftdetect.Adwin import AdwinDetector
from ..errors import ValidationError
from ..hoeffding.HoeffdingTree import HoeffdingTree, TreeParams, default_tree_params
from ..regressor import Regressor, check_features
from ..seeding import mix_seed, make_rng
from .Bagging import poisson_weight

logger = logging.getLogger(__name__)


@dataclass
class EnsembleConfig:
    n_models: int = 10
    poisson_lambda: float = 6.0
    # int = feature count, float = fraction of L, None = per-model default
    subspace_size: Optional[Union[int, float]] = None
    warning_delta: float = 0.01
    drift_delta: float = 0.002
    seed: int = 0
    tree_params: TreeParams = field(default_factory=lambda: default_tree_params)
    # test hooks: force every Poisson weight to k, disable warning/drift logic
    fixed_weight: Optional[int] = None
    detectors: bool = True

    def __post_init__(self):
        if self.n_models < 1:
            raise ValidationError(f"n_models must be >= 1, got {self.n_models}")
        if not self.poisson_lambda > 0:
            raise ValidationError(f"poisson_lambda must be > 0, got {self.poisson_lambda}")
        if not self.warning_delta > self.drift_delta:
            raise ValidationError("warning_delta must be larger than drift_delta")
        if self.fixed_weight is not None and self.fixed_weight < 0:
            raise ValidationError("fixed_weight must be >= 0")

    def resolve_subspace(self, n_features: int, default: int) -> int:
        size = self.subspace_size
        if size is None:
            m = default
        elif isinstance(size, float):
            m = max(1, round(size * n_features))
        else:
            m = size
        if not 1 <= m <= n_features:
            raise ValidationError(f"subspace size {m} outside [1, {n_features}]")
        return m


default_ensemble_config = EnsembleConfig()


class ArfMember:
    def __init__(self, index: int, seed: int):
        self.index = index
        self.seed = seed
        self.weight_rng = make_rng(mix_seed(seed, "weights"))
        self.tree_rng = make_rng(mix_seed(seed, "trees"))
        self.tree: HoeffdingTree = None
        self.patch: Optional[list[int]] = None
        self.background: Optional[HoeffdingTree] = None
        self.background_patch: Optional[list[int]] = None
        self.warning_detector: AdwinDetector = None
        self.drift_detector: AdwinDetector = None
        self.abs_error = 0.0
        self.n_seen = 0

    @property
    def mae(self) -> float:
        return self.abs_error / self.n_seen if self.n_seen else 0.0


class AdaptiveRandomForest(Regressor):
    """
    Adaptive Random Forest regressor.

    Members are Hoeffding trees drawing ceil(sqrt(L)) + 1 candidate features
    per leaf, trained with Poisson(lambda) weights. Each member watches its
    own normalized absolute error with two ADWIN detectors: a warning starts
    a background tree, a drift swaps it in (or a fresh tree).
    """

    name = "arf"

    def __init__(self, n_features: int, config: EnsembleConfig = default_ensemble_config):
        super().__init__(n_features)
        self.config = config
        self.subspace_size = self._resolve_subspace()
        self.n_replacements = 0
        self.n_warnings = 0
        self.total_weight_seen = 0
        self.n_seen = 0
        self._y_min = None
        self._y_max = None
        self.members: list[ArfMember] = []
        # member predictions for the last x seen by predict_one, reused by learn_one
        self._last_x = None
        self._last_predictions = None
        for index in range(config.n_models):
            member = ArfMember(index, mix_seed(config.seed, "member", index))
            member.tree, member.patch = self._grow_tree(member)
            self._reset_detectors(member)
            self.members.append(member)

    def _resolve_subspace(self) -> int:
        return self.config.resolve_subspace(
            self.n_features, min(self.n_features, math.ceil(math.sqrt(self.n_features)) + 1)
        )

    def _grow_tree(self, member: ArfMember) -> tuple[HoeffdingTree, Optional[list[int]]]:
        m, rng = self.subspace_size, member.tree_rng

        def sampler() -> list[int]:
            return rng.choice(self.n_features, size=m, replace=False).tolist()

        return HoeffdingTree(self.n_features, self.config.tree_params, sampler), None

    def _view(self, member: ArfMember, x: list[float], patch=None) -> list[float]:
        return x

    def _reset_detectors(self, member: ArfMember) -> None:
        member.warning_detector = AdwinDetector(delta=self.config.warning_delta)
        member.drift_detector = AdwinDetector(delta=self.config.drift_delta)

    def _normalized_error(self, y_hat: float, y: float) -> float:
        error = abs(y_hat - y)
        span = self._y_max - self._y_min
        if span <= 0:
            return 0.0 if error == 0 else 1.0
        return min(error / span, 1.0)

    def learn_one(self, x, y: float, w: float = 1.0) -> None:
        x = check_features(x, self.n_features)
        y = float(y)
        self._y_min = y if self._y_min is None else min(self._y_min, y)
        self._y_max = y if self._y_max is None else max(self._y_max, y)
        self.n_seen += 1
        cached = self._last_predictions if self._last_x == x else None
        self._last_x = self._last_predictions = None
        for member in self.members:
            y_hat = None if cached is None else cached[member.index]
            self._learn_member(member, x, y, w, y_hat)

    def _learn_member(self, member: ArfMember, x: list[float], y: float, w: float, y_hat: float = None) -> None:
        config = self.config
        view = self._view(member, x, member.patch)
        if y_hat is None:
            y_hat = member.tree.predict_values(view)
        member.abs_error += abs(y_hat - y)
        member.n_seen += 1

        if config.detectors:
            error = self._normalized_error(y_hat, y)
            warning = member.warning_detector.update(error)
            if warning and member.warning_detector.drift_increased and member.background is None:
                member.background, member.background_patch = self._grow_tree(member)
                self.n_warnings += 1
                logger.debug(f"{self.name}: member {member.index} warning, background tree started")
            drift = member.drift_detector.update(error)
            if drift and member.drift_detector.drift_increased:
                self._replace_tree(member)

        k = config.fixed_weight if config.fixed_weight is not None else poisson_weight(
            member.weight_rng, config.poisson_lambda
        )
        weight = k * w
        if weight <= 0:
            return
        self.total_weight_seen += weight
        member.tree.learn_values(view, y, weight)
        if member.background is not None:
            member.background.learn_values(self._view(member, x, member.background_patch), y, weight)

    def _replace_tree(self, member: ArfMember) -> None:
        if member.background is not None:
            member.tree, member.patch = member.background, member.background_patch
        else:
            member.tree, member.patch = self._grow_tree(member)
        member.background = member.background_patch = None
        self._reset_detectors(member)
        self.n_replacements += 1
        logger.debug(f"{self.name}: member {member.index} drift, tree replaced")

    def member_predictions(self, x) -> list[float]:
        x = check_features(x, self.n_features)
        predictions = [m.tree.predict_values(self._view(m, x, m.patch)) for m in self.members]
        self._last_x, self._last_predictions = x, tuple(predictions)
        return predictions

    def predict_one(self, x) -> float:
        predictions = self.member_predictions(x)
        return math.fsum(predictions) / len(predictions)

    def to_snapshot(self) -> dict:
        config = asdict(self.config)
        config.pop("tree_params")
        return {
            "kind": self.name,
            "n_features": self.n_features,
            "config": config,
            "members": [self._member_snapshot(m) for m in self.members],
        }

    def _member_snapshot(self, member: ArfMember) -> dict:
        return {
            "kind": "member",
            "patch": member.patch,
            "tree": member.tree.to_snapshot(),
            "background": member.background.to_snapshot() if member.background else None,
            "warning_detector": member.warning_detector.to_snapshot(),
            "drift_detector": member.drift_detector.to_snapshot(),
        }
