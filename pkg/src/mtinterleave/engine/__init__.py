from .levels import AugmentedPair, augment, extend_trees, generate_candidates, prepare
from .maps import (
    PairTables,
    PathMapCache,
    TreeMap,
    build_pair_tables,
    construct_map,
    extend_assignment,
    find_two_eps_pair,
    is_eps_good,
    nearest_image_ancestor,
    refined_target_nodes,
    target_nodes,
)
from .search import (
    Direction,
    DistanceReport,
    InterleaveResult,
    SearchConfig,
    Witness,
    choose_direction,
    compute_interleaving_distance,
    interleaving_distance,
    is_eps_interleaved,
)

__all__ = [
    "AugmentedPair",
    "augment",
    "extend_trees",
    "generate_candidates",
    "prepare",
    "PairTables",
    "PathMapCache",
    "TreeMap",
    "build_pair_tables",
    "construct_map",
    "extend_assignment",
    "find_two_eps_pair",
    "is_eps_good",
    "nearest_image_ancestor",
    "refined_target_nodes",
    "target_nodes",
    "Direction",
    "DistanceReport",
    "InterleaveResult",
    "SearchConfig",
    "Witness",
    "choose_direction",
    "compute_interleaving_distance",
    "interleaving_distance",
    "is_eps_interleaved",
]
