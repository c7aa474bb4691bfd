from typing import Optional
from ..hoeffding.HoeffdingTree import HoeffdingTree
from .AdaptiveRandomForest import AdaptiveRandomForest, ArfMember

PATCH_FRACTION = 0.6


class StreamingRandomPatches(AdaptiveRandomForest):
    """
    Streaming Random Patches regressor.

    Same bagging and drift handling as ARF, but every tree is bound at birth
    to a fixed sorted feature patch of max(1, round(0.6 L)) features and sees
    only those coordinates.
    """

    name = "srp"

    def _resolve_subspace(self) -> int:
        return self.config.resolve_subspace(
            self.n_features, max(1, round(PATCH_FRACTION * self.n_features))
        )

    def _grow_tree(self, member: ArfMember) -> tuple[HoeffdingTree, Optional[list[int]]]:
        patch = sorted(
            member.tree_rng.choice(self.n_features, size=self.subspace_size, replace=False).tolist()
        )
        return HoeffdingTree(len(patch), self.config.tree_params), patch

    def _view(self, member: ArfMember, x: list[float], patch=None) -> list[float]:
        return [x[i] for i in patch]
