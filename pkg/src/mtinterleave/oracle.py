"""Brute-force reference for the interleaving distance.

Scans every candidate value in ascending order, tries every leaf
assignment in both directions, and checks epsilon-goodness straight from
its definition at every node of the augmented trees.  It borrows the
augmentation routine from the engine but re-checks its output before use;
map construction and all goodness checks are independent.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Optional

from .engine.levels import AugmentedPair, generate_candidates, prepare
from .engine.maps import TreeMap
from .errors import InstanceTooLarge
from .mergetree import MergeTree, ancestor_at_value, find_lca

MAX_LEAVES_F = 4
MAX_LEAVES_G = 5


@dataclass
class OracleReport:
    epsilon_star: Fraction
    candidates: list[Fraction]
    verdicts: list[bool]
    # per candidate: (f->g verdict, g->f verdict)
    direction_verdicts: list[tuple[bool, bool]] = field(default_factory=list)
    maps_checked: int = 0

    def is_monotone(self) -> bool:
        return all(a <= b for a, b in zip(self.verdicts, self.verdicts[1:]))


def _check_augmentation(aug: AugmentedPair) -> None:
    f, g, eps = aug.aug_f, aug.aug_g, aug.epsilon
    if g.value(g.root) != f.value(f.root) + eps:
        raise AssertionError("augmented roots are not epsilon apart")
    # levels outside a tree's value span have nothing to host them, so
    # correspondence is only demanded where a path actually crosses
    shared = set(f.values()) | {h - eps for h in g.values()}
    for tree, levels in ((f, sorted(shared)), (g, sorted(h + eps for h in shared))):
        for c, p in tree.edges():
            lo, hi = tree.value(c), tree.value(p)
            if any(lo < h < hi for h in levels):
                raise AssertionError(f"edge {c}->{p} crosses a level without a node")


def _descendant_leaves(tree: MergeTree) -> dict[int, list[int]]:
    out: dict[int, list[int]] = {}
    for leaf in tree.leaves():
        x = leaf
        while x is not None:
            out.setdefault(x, []).append(leaf)
            x = tree.parent(x)
    return out


def _build_map(assignment: dict[int, int], aug: AugmentedPair, below) -> Optional[TreeMap]:
    """Send each node to the point above its leaves' images at the shifted value.

    Returns None when two leaves under one node disagree about that point.
    """
    f, g, eps = aug.aug_f, aug.aug_g, aug.epsilon
    mapping = {}
    for x in f.nodes:
        images = set()
        for leaf in below[x]:
            locus = ancestor_at_value(g, assignment[leaf], f.value(x) + eps)
            if not locus.is_node:
                raise AssertionError("shifted level falls inside an edge of the augmented tree")
            images.add(locus.node)
        if len(images) != 1:
            return None
        mapping[x] = images.pop()
    return TreeMap(mapping, frozenset(mapping.values()))


def oracle_eps_good_check(phi: TreeMap, aug: AugmentedPair, epsilon) -> bool:
    """Check the three defining properties node by node."""
    f, g = aug.aug_f, aug.aug_g
    eps = Fraction(epsilon)
    m = phi.mapping
    if set(m) != set(f.nodes):
        return False
    # range shift
    for x, y in m.items():
        if g.value(y) != f.value(x) + eps:
            return False
    # edges go to edges (the map is continuous and monotone)
    for c, p in f.edges():
        if g.parent(m[c]) != m[p]:
            return False
    # ancestor shift: equal-valued points glued together must meet within 2 eps
    by_value: dict[Fraction, list[int]] = {}
    for x in f.nodes:
        by_value.setdefault(f.value(x), []).append(x)
    for h, xs in by_value.items():
        for x, y in combinations(xs, 2):
            if m[x] == m[y] and f.value(find_lca(f, x, y)) - h > 2 * eps:
                return False
    # ancestor closeness, at every uncovered node
    image = set(m.values())
    for w in g.nodes:
        if w in image:
            continue
        a = g.parent(w)
        while a not in image:
            a = g.parent(a)
        if g.value(a) - g.value(w) > 2 * eps:
            return False
    return True


def oracle_one_direction(src: MergeTree, dst: MergeTree, epsilon) -> tuple[bool, int, Optional[TreeMap]]:
    """Exhaustive search for an epsilon-good map src -> dst."""
    eps = Fraction(epsilon)
    aug = prepare(src, dst, eps)
    _check_augmentation(aug)
    f, g = aug.aug_f, aug.aug_g
    below = _descendant_leaves(f)
    sources = f.leaves()
    choices = []
    for u in sources:
        level = f.value(u) + eps
        # one candidate per target leaf whose root path crosses the level
        options = []
        for w in g.leaves():
            if g.value(w) <= level:
                locus = ancestor_at_value(g, w, level)
                if locus.is_node and locus.node not in options:
                    options.append(locus.node)
        if not options:
            return False, 0, None
        choices.append(sorted(options))
    checked = 0
    for combo in product(*choices):
        checked += 1
        phi = _build_map(dict(zip(sources, combo)), aug, below)
        if phi is not None and oracle_eps_good_check(phi, aug, eps):
            return True, checked, phi
    return False, checked, None


def _guard(mf: MergeTree, mg: MergeTree) -> None:
    nf, ng = len(mf.leaves()), len(mg.leaves())
    if nf > MAX_LEAVES_F or ng > MAX_LEAVES_G:
        raise InstanceTooLarge(
            f"oracle limited to {MAX_LEAVES_F} x {MAX_LEAVES_G} leaves, got {nf} x {ng}"
        )


def oracle_distance(mf: MergeTree, mg: MergeTree, full_scan: bool = True) -> OracleReport:
    """Linear scan of the candidate list, both directions at every value.

    With ``full_scan=False`` the scan stops at the first accepted value.
    """
    _guard(mf, mg)
    pi = generate_candidates(mf, mg)
    verdicts, per_dir = [], []
    checked = 0
    star = None
    for eps in pi:
        fg, n1, _ = oracle_one_direction(mf, mg, eps)
        gf, n2, _ = oracle_one_direction(mg, mf, eps)
        checked += n1 + n2
        verdicts.append(fg or gf)
        per_dir.append((fg, gf))
        if star is None and (fg or gf):
            star = eps
            if not full_scan:
                break
    if star is None:
        raise AssertionError("no candidate accepted; the candidate set must contain the distance")
    return OracleReport(star, pi, verdicts, per_dir, checked)
