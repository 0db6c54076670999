"""Candidate values, root extension and level augmentation."""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Mapping, Optional

from ..mergetree import MergeTree, as_value


def generate_candidates(mf: MergeTree, mg: MergeTree) -> list[Fraction]:
    """Sorted distinct values that may equal the interleaving distance.

    Cross-tree value gaps, plus half of every within-tree gap.
    """
    vf = mf.values()
    vg = mg.values()
    out = {abs(a - b) for a in vf for b in vg}
    for vals in (vf, vg):
        out.update(abs(a - b) / 2 for a, b in combinations(vals, 2))
    return sorted(out)


def extend_trees(mf: MergeTree, mg: MergeTree, epsilon) -> tuple[MergeTree, MergeTree]:
    """Return copies whose roots satisfy ``root_g == root_f + epsilon``."""
    eps = as_value(epsilon)
    ef, eg = mf.copy(), mg.copy()
    t = ef.value(ef.root) + eps
    rg = eg.value(eg.root)
    if rg < t:
        eg.add_root(t)
    elif rg > t:
        ef.add_root(rg - eps)
    return ef, eg


@dataclass(frozen=True)
class AugmentedPair:
    aug_f: MergeTree
    aug_g: MergeTree
    epsilon: Fraction
    origin_f: Mapping[int, Optional[int]]
    origin_g: Mapping[int, Optional[int]]
    levels_f: Mapping[Fraction, tuple[int, ...]]
    levels_g: Mapping[Fraction, tuple[int, ...]]

    def level_values(self) -> list[Fraction]:
        return sorted(self.levels_f)


def _split_edges(tree: MergeTree, levels: list[Fraction]) -> None:
    for child, parent in tree.edges():
        lo, hi = tree.value(child), tree.value(parent)
        i = bisect_right(levels, lo)
        j = bisect_left(levels, hi)
        cur = child
        for h in levels[i:j]:
            cur = tree.insert_node_on_edge(cur, h)


def _level_table(tree: MergeTree) -> dict[Fraction, tuple[int, ...]]:
    table: dict[Fraction, list[int]] = {}
    for u in sorted(tree.nodes):
        table.setdefault(tree.value(u), []).append(u)
    return {h: tuple(ids) for h, ids in table.items()}


def augment(
    mf: MergeTree,
    mg: MergeTree,
    epsilon,
    original_f: Optional[MergeTree] = None,
    original_g: Optional[MergeTree] = None,
) -> AugmentedPair:
    """Insert degree-two nodes so both trees carry every matched level.

    Levels of the first tree are its own node values together with the
    second tree's node values shifted down by epsilon; the second tree gets
    the same set shifted up.  Inputs must already be extended and are left
    untouched.
    """
    eps = as_value(epsilon)
    if mg.value(mg.root) != mf.value(mf.root) + eps:
        raise ValueError("trees are not extended: root_g must equal root_f + epsilon")
    levels = sorted(set(mf.values()) | {v - eps for v in mg.values()})
    af, ag = mf.copy(), mg.copy()
    _split_edges(af, levels)
    _split_edges(ag, [h + eps for h in levels])
    of = original_f.nodes if original_f is not None else mf.nodes
    og = original_g.nodes if original_g is not None else mg.nodes
    return AugmentedPair(
        aug_f=af,
        aug_g=ag,
        epsilon=eps,
        origin_f={u: (u if u in of else None) for u in af.nodes},
        origin_g={u: (u if u in og else None) for u in ag.nodes},
        levels_f=_level_table(af),
        levels_g=_level_table(ag),
    )


def prepare(mf: MergeTree, mg: MergeTree, epsilon) -> AugmentedPair:
    """Extend then augment, keeping provenance relative to the inputs."""
    ef, eg = extend_trees(mf, mg, epsilon)
    return augment(ef, eg, epsilon, mf, mg)
