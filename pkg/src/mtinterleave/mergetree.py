"""Merge-tree data model and the basic tree queries.

Node values are :class:`fractions.Fraction` throughout; level equality and
halved differences must be exact.  A tree is a table ``id -> MergeNode`` plus
a root id.  Trees are treated as read-only once built; the only mutators
(:meth:`MergeTree.insert_node_on_edge`, :meth:`MergeTree.add_root`) are meant
for the construction phases of ingestion, extension and augmentation, which
always work on a private copy.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Union

from .errors import (
    CycleDetected,
    InvalidTree,
    MultipleRoots,
    NoRoot,
    NonIncreasingEdge,
    OrphanNode,
    TargetOutOfRange,
    UnknownNode,
    ValueNotInteriorToEdge,
)

ValueLike = Union[int, Fraction, str]

_DECIMAL = re.compile(r"[+-]?(?:\d+(?:\.\d*)?|\.\d+)")
_RATIONAL = re.compile(r"[+-]?\d+/\d+")


def parse_value(text: str) -> Fraction:
    """Parse a decimal ("2.5") or rational ("5/2") literal exactly."""
    s = text.strip()
    if _DECIMAL.fullmatch(s) or _RATIONAL.fullmatch(s):
        try:
            return Fraction(s)
        except ZeroDivisionError:
            raise ValueError(f"zero denominator in {text!r}") from None
    raise ValueError(f"not a decimal or rational literal: {text!r}")


def as_value(x: ValueLike) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not scalar values")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_value(x)
    raise TypeError(f"cannot use {type(x).__name__} as an exact scalar value")


def format_value(v: Fraction) -> str:
    """Canonical text form: ``3``, ``-1/2``, ``7/2``."""
    return str(v)


@dataclass
class MergeNode:
    id: int
    value: Fraction
    parent: Optional[int] = None
    children: list[int] = field(default_factory=list)


class MergeTree:
    """A rooted tree whose node values strictly increase towards the root."""

    def __init__(self, nodes: dict[int, MergeNode], root: int, *, validate: bool = True):
        self._nodes = nodes
        self._root = root
        self._leaves: Optional[list[int]] = None
        if validate:
            validate_tree(self)

    # -- construction ------------------------------------------------------

    @classmethod
    def from_records(cls, records: Iterable[tuple[int, ValueLike, Optional[int]]]) -> "MergeTree":
        """Build and validate a tree from ``(id, value, parent)`` triples."""
        nodes: dict[int, MergeNode] = {}
        for nid, value, parent in records:
            if nid in nodes:
                raise InvalidTree(f"duplicate node id {nid}", nid)
            nodes[nid] = MergeNode(int(nid), as_value(value), parent)
        for node in nodes.values():
            if node.parent is not None and node.parent in nodes:
                nodes[node.parent].children.append(node.id)
        for node in nodes.values():
            node.children.sort(key=lambda c: (nodes[c].value, c))
        roots = sorted(n.id for n in nodes.values() if n.parent is None)
        if not nodes:
            raise NoRoot("empty tree")
        tree = cls(nodes, roots[0] if roots else min(nodes), validate=False)
        validate_tree(tree)
        return tree

    @classmethod
    def single(cls, value: ValueLike, node_id: int = 0) -> "MergeTree":
        return cls({node_id: MergeNode(node_id, as_value(value))}, node_id)

    def copy(self) -> "MergeTree":
        nodes = {
            k: MergeNode(n.id, n.value, n.parent, list(n.children))
            for k, n in self._nodes.items()
        }
        return MergeTree(nodes, self._root, validate=False)

    # -- read access -------------------------------------------------------

    @property
    def root(self) -> int:
        return self._root

    @property
    def nodes(self) -> dict[int, MergeNode]:
        return self._nodes

    def __len__(self) -> int:
        return len(self._nodes)

    def __contains__(self, u) -> bool:
        return u in self._nodes

    def __iter__(self):
        return iter(sorted(self._nodes))

    def node(self, u: int) -> MergeNode:
        try:
            return self._nodes[u]
        except KeyError:
            raise UnknownNode(f"no node {u!r} in tree") from None

    def value(self, u: int) -> Fraction:
        return self.node(u).value

    def parent(self, u: int) -> Optional[int]:
        return self.node(u).parent

    def children(self, u: int) -> list[int]:
        return self.node(u).children

    def leaves(self) -> list[int]:
        if self._leaves is None:
            self._leaves = sorted(
                (n.id for n in self._nodes.values() if not n.children),
                key=lambda u: (self._nodes[u].value, u),
            )
        return self._leaves

    def edges(self) -> list[tuple[int, int]]:
        """``(child, parent)`` pairs ordered by child id."""
        return [(u, self._nodes[u].parent) for u in sorted(self._nodes) if self._nodes[u].parent is not None]

    def values(self) -> list[Fraction]:
        return [self._nodes[u].value for u in sorted(self._nodes)]

    def records(self) -> list[tuple[int, Fraction, Optional[int]]]:
        return [(u, self._nodes[u].value, self._nodes[u].parent) for u in sorted(self._nodes)]

    def next_id(self) -> int:
        return max(self._nodes) + 1

    def is_ancestor(self, a: int, u: int) -> bool:
        """True if ``a`` lies on the path from ``u`` to the root (``a == u`` counts)."""
        self.node(a)
        x: Optional[int] = u
        while x is not None:
            if x == a:
                return True
            x = self.node(x).parent
        return False

    def __repr__(self) -> str:
        return f"MergeTree(n={len(self)}, leaves={len(self.leaves())}, root={self._root})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, MergeTree):
            return NotImplemented
        return self._root == other._root and self.records() == other.records()

    __hash__ = None  # mutable during build phases

    # -- build-phase mutation ----------------------------------------------

    def _attach_child(self, parent: int, child: int) -> None:
        kids = self._nodes[parent].children
        kids.append(child)
        kids.sort(key=lambda c: (self._nodes[c].value, c))

    def insert_node_on_edge(self, child: int, value: ValueLike) -> int:
        return insert_node_on_edge(self, child, value)

    def add_root(self, value: ValueLike) -> int:
        """Put a fresh root above the current one; returns the new id."""
        value = as_value(value)
        old = self._root
        if not value > self._nodes[old].value:
            raise ValueNotInteriorToEdge(
                f"new root value {value} must exceed current root value {self._nodes[old].value}"
            )
        z = self.next_id()
        self._nodes[z] = MergeNode(z, value, None, [old])
        self._nodes[old].parent = z
        self._root = z
        return z


# ---------------------------------------------------------------------------
# validation


def validate_tree(tree: MergeTree) -> None:
    """Raise an :class:`InvalidTree` subclass naming the first offending node.

    Checks run in a fixed order (dangling parents, root count, parent/child
    link consistency, reachability, edge monotonicity) and within each check
    nodes are visited in ascending id order.
    """
    nodes = tree.nodes
    if not nodes:
        raise NoRoot("empty tree")
    ids = sorted(nodes)
    for u in ids:
        p = nodes[u].parent
        if p is not None and p not in nodes:
            raise OrphanNode(f"node {u} points to missing parent {p}", u)
    roots = [u for u in ids if nodes[u].parent is None]
    if not roots:
        raise NoRoot("no node without a parent; the parent links form a cycle", ids[0])
    if len(roots) > 1:
        raise MultipleRoots(f"nodes {roots} all lack a parent", roots[1])
    if tree.root != roots[0]:
        raise InvalidTree(f"declared root {tree.root} is not the parentless node {roots[0]}", tree.root)
    for u in ids:
        expected = sorted(c for c in ids if nodes[c].parent == u)
        if sorted(nodes[u].children) != expected:
            raise InvalidTree(f"children of {u} disagree with parent links", u)
    seen = {tree.root}
    queue = deque([tree.root])
    while queue:
        x = queue.popleft()
        for c in nodes[x].children:
            if c in seen:
                raise CycleDetected(f"node {c} reached twice", c)
            seen.add(c)
            queue.append(c)
    for u in ids:
        if u not in seen:
            raise CycleDetected(f"node {u} is not reachable from root {tree.root}", u)
    for u in ids:
        p = nodes[u].parent
        if p is not None and not nodes[u].value < nodes[p].value:
            raise NonIncreasingEdge(
                f"edge {u}->{p} has values {nodes[u].value} >= {nodes[p].value}", u
            )


# ---------------------------------------------------------------------------
# paths, LCA, shifts


class NodePath:
    """Node ids from a start node up to the root, with O(1) step lookups."""

    __slots__ = ("nodes", "_pos")

    def __init__(self, nodes: Iterable[int]):
        self.nodes = tuple(nodes)
        self._pos = {u: i for i, u in enumerate(self.nodes)}

    def __len__(self) -> int:
        return len(self.nodes)

    def __iter__(self):
        return iter(self.nodes)

    def __getitem__(self, i):
        return self.nodes[i]

    def __contains__(self, u) -> bool:
        return u in self._pos

    def __eq__(self, other) -> bool:
        if isinstance(other, NodePath):
            return self.nodes == other.nodes
        if isinstance(other, (list, tuple)):
            return self.nodes == tuple(other)
        return NotImplemented

    def __repr__(self) -> str:
        return f"NodePath({list(self.nodes)})"

    @property
    def start(self) -> int:
        return self.nodes[0]

    @property
    def root(self) -> int:
        return self.nodes[-1]

    def index(self, u: int) -> int:
        return self._pos[u]

    def parent(self, u: int) -> Optional[int]:
        i = self._pos[u] + 1
        return self.nodes[i] if i < len(self.nodes) else None

    def child(self, u: int) -> Optional[int]:
        i = self._pos[u] - 1
        return self.nodes[i] if i >= 0 else None


def node_to_root_path(tree: MergeTree, u: int) -> NodePath:
    tree.node(u)
    out = []
    x: Optional[int] = u
    nodes = tree.nodes
    while x is not None:
        out.append(x)
        x = nodes[x].parent
    return NodePath(out)


def find_lca(tree: MergeTree, u: int, v: int) -> int:
    """Least common ancestor by walking both root-to-node paths in step."""
    pu = node_to_root_path(tree, u).nodes[::-1]
    pv = node_to_root_path(tree, v).nodes[::-1]
    lca = pu[0]
    for x, y in zip(pu, pv):
        if x != y:
            break
        lca = x
    return lca


def leaves(tree: MergeTree) -> list[int]:
    return list(tree.leaves())


@dataclass(frozen=True)
class AncestorLocus:
    """A point of the tree: either a node, or an interior point of an edge."""

    value: Fraction
    node: Optional[int] = None
    edge: Optional[tuple[int, int]] = None

    @property
    def is_node(self) -> bool:
        return self.node is not None


def ancestor_at_value(tree: MergeTree, u: int, target: ValueLike) -> AncestorLocus:
    """The unique point above ``u`` (inclusive) whose value is ``target``."""
    target = as_value(target)
    nodes = tree.nodes
    x = tree.node(u)
    if target < x.value:
        raise TargetOutOfRange(f"target {target} lies below node {u} (value {x.value})")
    while True:
        if x.value == target:
            return AncestorLocus(target, node=x.id)
        if x.parent is None:
            raise TargetOutOfRange(f"target {target} lies above the root (value {x.value})")
        p = nodes[x.parent]
        if target < p.value:
            return AncestorLocus(target, edge=(x.id, p.id))
        x = p


def insert_node_on_edge(tree: MergeTree, child: int, value: ValueLike) -> int:
    """Split the edge above ``child`` with a fresh degree-two node at ``value``."""
    value = as_value(value)
    c = tree.node(child)
    if c.parent is None:
        raise ValueNotInteriorToEdge(f"node {child} is the root; there is no edge above it")
    p = tree.nodes[c.parent]
    if not c.value < value < p.value:
        raise ValueNotInteriorToEdge(
            f"value {value} is not strictly between {c.value} and {p.value}"
        )
    z = tree.next_id()
    tree.nodes[z] = MergeNode(z, value, p.id, [child])
    p.children.remove(child)
    tree._attach_child(p.id, z)
    c.parent = z
    tree._leaves = None
    return z


def canonical_form(tree: MergeTree, u: Optional[int] = None):
    """Id-free nested tuple; equal forms mean value-labelled isomorphism."""
    if u is None:
        u = tree.root
    kids = sorted(canonical_form(tree, c) for c in tree.children(u))
    return (tree.value(u), tuple(kids))
