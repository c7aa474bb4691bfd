from .SplitObserver import SplitObserver, SplitCandidate
from .HoeffdingTree import (
    HoeffdingTree,
    LeafStats,
    TreeParams,
    default_tree_params,
    hoeffding_bound,
    best_split,
    rank_splits,
)
from .HatTree import HatTree
