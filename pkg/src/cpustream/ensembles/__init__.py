from .Bagging import poisson_weight
from .AdaptiveRandomForest import (
    AdaptiveRandomForest,
    ArfMember,
    EnsembleConfig,
    default_ensemble_config,
)
from .StreamingRandomPatches import StreamingRandomPatches
