import dataclasses
from typing import Callable
from ..batch.Cart import CartTree, CartParams
from ..batch.Ols import OrdinaryLeastSquares
from ..batch.RandomForest import RandomForest, ForestParams
from ..ensembles.AdaptiveRandomForest import AdaptiveRandomForest, EnsembleConfig
from ..ensembles.StreamingRandomPatches import StreamingRandomPatches
from ..errors import ConfigError, CpuStreamError
from ..hoeffding.HatTree import HatTree
from ..hoeffding.HoeffdingTree import HoeffdingTree, TreeParams
from ..linear.LinearModel import SGDRegressor, PassiveAggressiveRegressor
from ..regressor import Regressor, check_features

FROZEN_PREFIX = "frozen-"

# the order models appear in in reports
MODEL_ORDER = ("ht", "hat", "arf", "srp", "sgd", "pa", "ols", "cart", "rf", "persistence")
BATCH_MODELS = frozenset({"ols", "cart", "rf"})

# trees in the benchmark answer with whichever leaf predictor has been more accurate
BENCH_TREE_DEFAULTS = {"leaf_mode": "adaptive"}
HAT_OPTIONS = ("drift_delta", "alternate_max_age", "error_window", "bootstrap_sampling")
SGD_OPTIONS = ("learning_rate", "schedule", "decay", "standardize")
PA_OPTIONS = ("C", "epsilon", "variant", "standardize")


class PersistenceModel(Regressor):
    """Naive forecast: the next value equals the most recent lag."""

    name = "persistence"

    def predict_one(self, x) -> float:
        return float(check_features(x, self.n_features)[-1])

    def learn_one(self, x, y: float, w: float = 1.0) -> None:
        check_features(x, self.n_features)

    def fit(self, dataset) -> "PersistenceModel":
        return self

    def to_snapshot(self) -> dict:
        return {"kind": self.name, "n_features": self.n_features}


class FrozenModel(Regressor):
    """Wraps a model so that only fit trains it; learn_one is ignored."""

    def __init__(self, inner: Regressor):
        super().__init__(inner.n_features)
        self.inner = inner
        self.name = FROZEN_PREFIX + inner.name

    def get_standardized(self) -> bool:
        return self.inner.get_standardized()

    def fit(self, dataset) -> "FrozenModel":
        self.inner.fit(dataset)
        return self

    def learn_one(self, x, y: float, w: float = 1.0) -> None:
        pass

    def predict_one(self, x) -> float:
        return self.inner.predict_one(x)

    def predict_many(self, X):
        return self.inner.predict_many(X)

    def to_snapshot(self) -> dict:
        return self.inner.to_snapshot()


def _take(params: dict, names) -> dict:
    return {name: params.pop(name) for name in list(params) if name in names}


def _field_names(cls) -> tuple:
    return tuple(f.name for f in dataclasses.fields(cls))


def _tree_params(params: dict) -> TreeParams:
    return TreeParams(**{**BENCH_TREE_DEFAULTS, **_take(params, _field_names(TreeParams))})


def _build_ht(n_features, seed, params):
    return HoeffdingTree(n_features, _tree_params(params))


def _build_hat(n_features, seed, params):
    options = _take(params, HAT_OPTIONS)
    return HatTree(n_features, _tree_params(params), seed=seed, **options)


def _ensemble_config(seed, params) -> EnsembleConfig:
    tree_params = _tree_params(params)
    options = _take(params, set(_field_names(EnsembleConfig)) - {"seed", "tree_params"})
    return EnsembleConfig(seed=seed, tree_params=tree_params, **options)


def _build_arf(n_features, seed, params):
    return AdaptiveRandomForest(n_features, _ensemble_config(seed, params))


def _build_srp(n_features, seed, params):
    return StreamingRandomPatches(n_features, _ensemble_config(seed, params))


def _build_sgd(n_features, seed, params):
    return SGDRegressor(n_features, **_take(params, SGD_OPTIONS))


def _build_pa(n_features, seed, params):
    return PassiveAggressiveRegressor(n_features, **_take(params, PA_OPTIONS))


def _build_ols(n_features, seed, params):
    return OrdinaryLeastSquares(n_features)


def _build_cart(n_features, seed, params):
    return CartTree(n_features, CartParams(**_take(params, _field_names(CartParams))))


def _build_rf(n_features, seed, params):
    tree_params = CartParams(**_take(params, _field_names(CartParams)))
    options = _take(params, set(_field_names(ForestParams)) - {"seed", "tree_params"})
    return RandomForest(n_features, ForestParams(seed=seed, tree_params=tree_params, **options))


def _build_persistence(n_features, seed, params):
    return PersistenceModel(n_features)


MODEL_FACTORIES: dict[str, Callable[[int, int, dict], Regressor]] = {
    "ht": _build_ht,
    "hat": _build_hat,
    "arf": _build_arf,
    "srp": _build_srp,
    "sgd": _build_sgd,
    "pa": _build_pa,
    "ols": _build_ols,
    "cart": _build_cart,
    "rf": _build_rf,
    "persistence": _build_persistence,
}


def _base_name(name: str) -> str:
    return name[len(FROZEN_PREFIX):] if name.startswith(FROZEN_PREFIX) else name


def validate_model_name(name: str) -> None:
    if _base_name(name) not in MODEL_FACTORIES:
        known = ", ".join(MODEL_ORDER)
        raise ConfigError(f"unknown model '{name}' (known: {known}, or {FROZEN_PREFIX}<name>)")


def is_batch_model(name: str) -> bool:
    validate_model_name(name)
    return name in BATCH_MODELS


def is_frozen_model(name: str) -> bool:
    validate_model_name(name)
    return name.startswith(FROZEN_PREFIX)


def build_model(name: str, n_features: int, seed: int, params: dict = None) -> Regressor:
    """
    Instantiate a registered model with benchmark defaults.

    params override hyperparameters by name; keys the model does not
    understand raise ConfigError.
    """
    validate_model_name(name)
    remaining = dict(params or {})
    try:
        model = MODEL_FACTORIES[_base_name(name)](n_features, seed, remaining)
    except (TypeError, CpuStreamError) as e:
        raise ConfigError(f"invalid parameters for '{name}': {e}") from e
    if remaining:
        raise ConfigError(f"unknown parameters for '{name}': {', '.join(sorted(remaining))}")
    return FrozenModel(model) if name.startswith(FROZEN_PREFIX) else model


def model_rank(name: str) -> tuple:
    """Report ordering: registry order, plain before frozen."""
    validate_model_name(name)
    return MODEL_ORDER.index(_base_name(name)), name.startswith(FROZEN_PREFIX)
