"""Leaf-assignment enumeration and the binary search over candidate values."""

from __future__ import annotations

import enum
import logging
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import islice, product
from math import prod
from typing import Optional

from ..errors import SearchBudgetExceeded
from ..mergetree import MergeTree, as_value
from .levels import AugmentedPair, generate_candidates, prepare
from .maps import (
    PairTables,
    PathMapCache,
    TreeMap,
    build_pair_tables,
    construct_map,
    is_eps_good,
    refined_target_nodes,
    target_nodes,
)

log = logging.getLogger(__name__)


class Direction(str, enum.Enum):
    F_TO_G = "f->g"
    G_TO_F = "g->f"


@dataclass(frozen=True)
class SearchConfig:
    refinement: bool = True
    max_maps: int = 10**7
    parallel: bool = False
    deterministic_witness: bool = False
    workers: Optional[int] = None
    # below this many assignments the search stays in-process
    parallel_min_maps: int = 4096

    def __post_init__(self):
        if self.max_maps < 1:
            raise ValueError("max_maps must be at least 1")


@dataclass
class Witness:
    direction: Direction
    epsilon: Fraction
    aug: AugmentedPair
    assignment: dict[int, int]
    tree_map: TreeMap


@dataclass
class InterleaveResult:
    interleaved: bool
    epsilon: Fraction
    direction: Direction
    witness: Optional[Witness] = None
    maps_enumerated: int = 0
    target_sizes: list[int] = field(default_factory=list)
    refined_target_sizes: Optional[list[int]] = None
    early_exit: Optional[str] = None

    @property
    def kappa(self) -> Optional[int]:
        sizes = self.refined_target_sizes
        return max(sizes) if sizes else None


@dataclass
class DistanceReport:
    epsilon_star: Fraction
    candidate_count: int
    trace: list[tuple[Fraction, bool, int]]
    witness: Optional[Witness]
    result: InterleaveResult
    total_maps: int
    wall_time: float
    direction: Direction


def choose_direction(mf: MergeTree, mg: MergeTree) -> Direction:
    """Map from the tree whose leaf count makes the product smaller; ties go f->g."""
    nf, ng = len(mf.leaves()), len(mg.leaves())
    return Direction.F_TO_G if ng**nf <= nf**ng else Direction.G_TO_F


# ---------------------------------------------------------------------------


class _Search:
    """Everything the enumeration needs for one (direction, epsilon)."""

    def __init__(self, aug: AugmentedPair, tables: PairTables, lists: list[list[int]]):
        self.aug = aug
        self.tables = tables
        self.leaves = tables.leaves
        self.lists = lists
        self.cache = PathMapCache(aug, tables)

    def check(self, choice) -> Optional[TreeMap]:
        assignment = dict(zip(self.leaves, choice))
        phi = construct_map(assignment, self.aug, self.tables, self.cache)
        if phi is not None and is_eps_good(phi, self.aug, self.tables, self.aug.epsilon):
            return phi
        return None

    def scan(self, start: int, stop: int):
        """Try assignments ``start..stop-1`` of the lexicographic product."""
        count = 0
        for choice in islice(product(*self.lists), start, stop):
            count += 1
            phi = self.check(choice)
            if phi is not None:
                return choice, phi, count
        return None, None, count


_worker_search: Optional[_Search] = None


def _init_worker(search: _Search) -> None:
    global _worker_search
    _worker_search = search


def _scan_chunk(bounds):
    choice, _, count = _worker_search.scan(*bounds)
    return bounds[0], choice, count


def _scan_parallel(search: _Search, limit: int, workers: Optional[int]):
    nchunks = max(4, 4 * (workers or 1))
    step = max(1, -(-limit // nchunks))
    chunks = [(s, min(s + step, limit)) for s in range(0, limit, step)]
    total = 0
    hit = None
    with ProcessPoolExecutor(max_workers=workers, initializer=_init_worker, initargs=(search,)) as pool:
        futures = [pool.submit(_scan_chunk, c) for c in chunks]
        for fut in as_completed(futures):
            start, choice, count = fut.result()
            total += count
            if choice is not None:
                hit = choice
                for other in futures:
                    other.cancel()
                break
    if hit is None:
        return None, None, total
    return hit, search.check(hit), total


def is_eps_interleaved(mf: MergeTree, mg: MergeTree, epsilon, cfg: Optional[SearchConfig] = None) -> InterleaveResult:
    """Decide whether an epsilon-good map exists between the two trees."""
    cfg = cfg or SearchConfig()
    eps = as_value(epsilon)
    if eps < 0:
        raise ValueError("epsilon must be non-negative")
    direction = choose_direction(mf, mg)
    src, dst = (mf, mg) if direction is Direction.F_TO_G else (mg, mf)
    aug = prepare(src, dst, eps)
    f, g = aug.aug_f, aug.aug_g
    lf, lg = f.leaves(), g.leaves()
    res = InterleaveResult(False, eps, direction)

    if g.value(lg[0]) - f.value(lf[0]) > eps:
        res.early_exit = "min-leaf-gap"
        return res

    tables = build_pair_tables(aug, eps)
    targets = {u: target_nodes(aug, f.value(u) + eps) for u in lf}
    res.target_sizes = [len(targets[u]) for u in lf]
    search = _Search(aug, tables, [targets[u] for u in lf])
    if cfg.refinement and all(targets.values()):
        refined = [refined_target_nodes(u, aug, tables, eps, search.cache, targets) for u in lf]
        res.refined_target_sizes = [len(r) for r in refined]
        search.lists = refined
    if not all(search.lists):
        res.early_exit = "empty-targets"
        return res

    total = prod(len(x) for x in search.lists)
    limit = min(total, cfg.max_maps)
    use_pool = cfg.parallel and not cfg.deterministic_witness and limit >= cfg.parallel_min_maps
    if use_pool:
        choice, phi, count = _scan_parallel(search, limit, cfg.workers)
    else:
        choice, phi, count = search.scan(0, limit)
    res.maps_enumerated = count
    if choice is None:
        if total > cfg.max_maps:
            raise SearchBudgetExceeded(cfg.max_maps, eps)
        return res
    assignment = dict(zip(lf, choice))
    res.interleaved = True
    res.witness = Witness(direction, eps, aug, assignment, phi)
    return res


def compute_interleaving_distance(mf: MergeTree, mg: MergeTree, cfg: Optional[SearchConfig] = None) -> DistanceReport:
    """Binary search for the least candidate value at which the trees interleave."""
    cfg = cfg or SearchConfig()
    t0 = time.perf_counter()
    pi = generate_candidates(mf, mg)
    lo, hi = 0, len(pi) - 1
    best: Optional[InterleaveResult] = None
    trace = []
    total = 0
    while lo <= hi:
        mid = (lo + hi) // 2
        r = is_eps_interleaved(mf, mg, pi[mid], cfg)
        total += r.maps_enumerated
        trace.append((pi[mid], r.interleaved, r.maps_enumerated))
        log.debug("eps=%s interleaved=%s maps=%d", pi[mid], r.interleaved, r.maps_enumerated)
        if r.interleaved:
            best = r
            hi = mid - 1
        else:
            lo = mid + 1
    if best is None:
        raise AssertionError(
            f"trees not interleaved at the largest candidate {pi[-1]}; this is an engine bug"
        )
    return DistanceReport(
        epsilon_star=best.epsilon,
        candidate_count=len(pi),
        trace=trace,
        witness=best.witness,
        result=best,
        total_maps=total,
        wall_time=time.perf_counter() - t0,
        direction=best.direction,
    )


def interleaving_distance(mf: MergeTree, mg: MergeTree, cfg: Optional[SearchConfig] = None) -> Fraction:
    return compute_interleaving_distance(mf, mg, cfg).epsilon_star
