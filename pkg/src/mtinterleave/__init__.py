"""Exact interleaving distance between merge trees."""

from .engine import (
    Direction,
    DistanceReport,
    SearchConfig,
    compute_interleaving_distance,
    generate_candidates,
    interleaving_distance,
    is_eps_interleaved,
)
from .errors import (
    InstanceTooLarge,
    InvalidTree,
    MergeTreeError,
    SearchBudgetExceeded,
)
from .ingest import (
    ScalarSeries,
    merge_tree_of_series,
    parse_tree_document,
    write_tree_document,
)
from .mergetree import MergeTree, find_lca, node_to_root_path, validate_tree
from .oracle import oracle_distance

__version__ = "0.1.0"

__all__ = [
    "Direction",
    "DistanceReport",
    "SearchConfig",
    "compute_interleaving_distance",
    "generate_candidates",
    "interleaving_distance",
    "is_eps_interleaved",
    "InstanceTooLarge",
    "InvalidTree",
    "MergeTreeError",
    "SearchBudgetExceeded",
    "ScalarSeries",
    "merge_tree_of_series",
    "parse_tree_document",
    "write_tree_document",
    "MergeTree",
    "find_lca",
    "node_to_root_path",
    "validate_tree",
    "oracle_distance",
    "__version__",
]
