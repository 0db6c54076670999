"""Leaf-pair tables, path maps, map assembly and the goodness test."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Mapping, Optional

from ..errors import PathLengthMismatch
from ..mergetree import MergeTree, NodePath, find_lca, node_to_root_path
from .levels import AugmentedPair

PathMap = dict  # node of aug_f -> node of aug_g, along one path


@dataclass(frozen=True)
class TreeMap:
    mapping: Mapping[int, int]
    image: frozenset

    def __getitem__(self, u: int) -> int:
        return self.mapping[u]

    def __len__(self) -> int:
        return len(self.mapping)


class PairTables:
    """LCA and 2-epsilon pair of every unordered pair of source leaves.

    Keys are ``(a, b)`` with ``a < b`` by id; the stored pair is oriented as
    (node on a's path, node on b's path).  Lookups accept either order.
    """

    def __init__(self, leaves, paths, lcas, pairs):
        self.leaves = list(leaves)
        self.paths: dict[int, NodePath] = paths
        self._lca = lcas
        self._pair = pairs

    def lca(self, a: int, b: int) -> int:
        return self._lca[(a, b) if a < b else (b, a)]

    def two_eps_pair(self, a: int, b: int) -> Optional[tuple[int, int]]:
        if a < b:
            return self._pair[(a, b)]
        p = self._pair[(b, a)]
        return None if p is None else (p[1], p[0])

    def items(self):
        for key in sorted(self._lca):
            yield key, self._lca[key], self._pair[key]

    def __len__(self):
        return len(self._lca)


def find_two_eps_pair(tree: MergeTree, pi: NodePath, pj: NodePath, v: int, epsilon) -> Optional[tuple[int, int]]:
    """Highest equal-value node pair below ``v`` that sits more than 2*eps under it.

    Walks down ``pj`` from just under the LCA and pairs each node with the
    node of ``pi`` at the same value, if any.
    """
    top = tree.value(v)
    gap = 2 * epsilon
    on_i = {tree.value(x): x for x in pi.nodes[: pi.index(v)]}
    for y in reversed(pj.nodes[: pj.index(v)]):
        h = tree.value(y)
        if top - h > gap and h in on_i:
            return on_i[h], y
    return None


def build_pair_tables(aug: AugmentedPair, epsilon) -> PairTables:
    tree = aug.aug_f
    eps = Fraction(epsilon)
    leaves = tree.leaves()
    paths = {u: node_to_root_path(tree, u) for u in leaves}
    lcas, pairs = {}, {}
    for a, b in combinations(sorted(leaves), 2):
        v = find_lca(tree, a, b)
        lcas[(a, b)] = v
        pairs[(a, b)] = find_two_eps_pair(tree, paths[a], paths[b], v, eps)
    return PairTables(leaves, paths, lcas, pairs)


def target_nodes(aug: AugmentedPair, level) -> list[int]:
    """Nodes of the augmented target tree sitting exactly at ``level``."""
    return list(aug.levels_g.get(Fraction(level), ()))


def extend_assignment(u: int, target: int, p: NodePath, p_prime: NodePath) -> PathMap:
    """Zip a source path with a target path, bottom up."""
    if p.start != u or p_prime.start != target:
        raise ValueError("paths must start at the assigned nodes")
    if len(p) != len(p_prime):
        raise PathLengthMismatch(
            f"path from {u} has {len(p)} nodes but path from {target} has {len(p_prime)}"
        )
    return dict(zip(p.nodes, p_prime.nodes))


class PathMapCache:
    """Memoises the path map of each (leaf, target) choice for one augmented pair."""

    def __init__(self, aug: AugmentedPair, tables: PairTables):
        self.aug = aug
        self.tables = tables
        self._tpaths: dict[int, NodePath] = {}
        self._maps: dict[tuple[int, int], PathMap] = {}

    def target_path(self, w: int) -> NodePath:
        p = self._tpaths.get(w)
        if p is None:
            p = self._tpaths[w] = node_to_root_path(self.aug.aug_g, w)
        return p

    def __call__(self, leaf: int, target: int) -> PathMap:
        key = (leaf, target)
        m = self._maps.get(key)
        if m is None:
            m = self._maps[key] = extend_assignment(
                leaf, target, self.tables.paths[leaf], self.target_path(target)
            )
        return m


def construct_map(
    assignment: Mapping[int, int],
    aug: AugmentedPair,
    tables: PairTables,
    cache: Optional[PathMapCache] = None,
) -> Optional[TreeMap]:
    """Glue per-leaf path maps; None unless every leaf pair agrees at its LCA."""
    if cache is None:
        cache = PathMapCache(aug, tables)
    leaves = tables.leaves
    local = {u: cache(u, assignment[u]) for u in leaves}
    for (a, b), v, _ in tables.items():
        if local[a][v] != local[b][v]:
            return None
    mapping: dict[int, int] = {}
    for u in leaves:
        for x, y in local[u].items():
            prev = mapping.setdefault(x, y)
            assert prev == y, f"path maps disagree at node {x} despite LCA agreement"
    return TreeMap(mapping, frozenset(mapping.values()))


def nearest_image_ancestor(tree: MergeTree, w: int, image) -> int:
    nodes = tree.nodes
    x = w
    while x not in image:
        x = nodes[x].parent
    return x


def is_eps_good(phi: TreeMap, aug: AugmentedPair, tables: PairTables, epsilon) -> bool:
    """Ancestor-Shift via 2-epsilon pairs, Ancestor-Closeness at uncovered target leaves."""
    m = phi.mapping
    for _, _, pair in tables.items():
        if pair is not None and m[pair[0]] == m[pair[1]]:
            return False
    g = aug.aug_g
    gap = 2 * Fraction(epsilon)
    for w in g.leaves():
        if w in phi.image:
            continue
        wa = nearest_image_ancestor(g, w, phi.image)
        if g.value(wa) - g.value(w) > gap:
            return False
    return True


def refined_target_nodes(
    u_k: int,
    aug: AugmentedPair,
    tables: PairTables,
    epsilon,
    cache: Optional[PathMapCache] = None,
    targets: Optional[Mapping[int, list[int]]] = None,
) -> list[int]:
    """Targets of ``u_k`` that every other leaf can pair with compatibly.

    A target survives when each other leaf has at least one target of its
    own whose path map meets ours at their LCA and, if the leaf pair has a
    2-epsilon pair, keeps that pair's images apart.
    """
    eps = Fraction(epsilon)
    f = aug.aug_f
    if cache is None:
        cache = PathMapCache(aug, tables)
    if targets is None:
        targets = {u: target_nodes(aug, f.value(u) + eps) for u in tables.leaves}
    out = []
    for t in targets[u_k]:
        phi_k = cache(u_k, t)
        ok = True
        for u_l in tables.leaves:
            if u_l == u_k:
                continue
            v = tables.lca(u_k, u_l)
            pair = tables.two_eps_pair(u_k, u_l)
            found = False
            for t_l in targets[u_l]:
                phi_l = cache(u_l, t_l)
                if phi_k[v] != phi_l[v]:
                    continue
                if pair is None or phi_k[pair[0]] != phi_l[pair[1]]:
                    found = True
                    break
            if not found:
                ok = False
                break
        if ok:
            out.append(t)
    return out
