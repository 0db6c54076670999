"""Merge trees of 1D piecewise-linear series, and the text file formats.

Tree files are line oriented::

    # merge-tree v1
    # name: example
    0	0	2
    1	2	2
    2	4	-

one ``id<TAB>value<TAB>parent`` record per line, ``-`` marking the root.
Values are exact decimal (``2.5``) or rational (``5/2``) literals.  Series
files are CSV with a ``position,value`` header.
"""

from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from .errors import (
    DocumentSyntaxError,
    DuplicateId,
    EqualAdjacentValues,
    InvalidTree,
    MalformedSeries,
)
from .mergetree import MergeNode, MergeTree, as_value, format_value, parse_value

FORMAT_VERSION = 1
_HEADER = re.compile(r"#\s*merge-tree\s+v(\d+)\s*")
_NAME = re.compile(r"#\s*name:\s*(.*?)\s*")


@dataclass
class ScalarSeries:
    positions: list[Fraction]
    values: list[Fraction]

    def __post_init__(self):
        self.positions = [as_value(p) for p in self.positions]
        self.values = [as_value(v) for v in self.values]
        if not self.values:
            raise MalformedSeries("a series needs at least one sample")
        if len(self.positions) != len(self.values):
            raise MalformedSeries("positions and values differ in length")
        for i in range(1, len(self.positions)):
            if not self.positions[i - 1] < self.positions[i]:
                raise MalformedSeries(
                    f"positions must strictly increase (row {i}: {self.positions[i]})"
                )

    @classmethod
    def from_values(cls, values: Sequence) -> "ScalarSeries":
        return cls(list(range(len(values))), list(values))

    def __len__(self):
        return len(self.values)

    def reversed(self) -> "ScalarSeries":
        return ScalarSeries([-p for p in reversed(self.positions)], list(reversed(self.values)))


# ---------------------------------------------------------------------------
# sublevel-set sweep


class _DisjointSet:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        self.parent[rb] = ra
        return ra


def merge_tree_of_series(series: Union[ScalarSeries, Sequence]) -> MergeTree:
    """Sweep samples upward, tracking sublevel components with union-find.

    Each strict local minimum opens a leaf; a sample whose two neighbours
    belong to different components closes them under a merge node.  Merges
    at one value collapse into a single node.  The global maximum becomes the
    root, so regular samples never produce nodes.
    """
    if not isinstance(series, ScalarSeries):
        series = ScalarSeries.from_values(series)
    vals = series.values
    n = len(vals)
    for i in range(1, n):
        if vals[i - 1] == vals[i]:
            raise EqualAdjacentValues(
                f"samples {i - 1} and {i} share the value {vals[i]}"
            )

    nodes: dict[int, MergeNode] = {}
    dsu = _DisjointSet(n)
    top: dict[int, int] = {}  # component representative -> highest node id
    done = [False] * n

    counter = iter(range(2 * n + 1))

    def new_node(value, kids):
        nid = next(counter)
        nodes[nid] = MergeNode(nid, value, None, [])
        for k in kids:
            nodes[k].parent = nid
            nodes[nid].children.append(k)
        return nid

    def join(value, a, b):
        # a, b: node ids topping two components that meet at `value`
        if nodes[a].value == value and nodes[b].value == value:
            for k in nodes[b].children:
                nodes[k].parent = a
                nodes[a].children.append(k)
            del nodes[b]
            return a
        for keep, other in ((a, b), (b, a)):
            if nodes[keep].value == value:
                nodes[other].parent = keep
                nodes[keep].children.append(other)
                return keep
        return new_node(value, [a, b])

    for i in sorted(range(n), key=lambda k: (vals[k], k)):
        done[i] = True
        nbrs = [j for j in (i - 1, i + 1) if 0 <= j < n and done[j]]
        if not nbrs:
            top[i] = new_node(vals[i], [])
        elif len(nbrs) == 1:
            r = dsu.find(nbrs[0])
            t = top.pop(r)
            top[dsu.union(r, i)] = t
        else:
            ra, rb = dsu.find(nbrs[0]), dsu.find(nbrs[1])
            ta, tb = top.pop(ra), top.pop(rb)
            r = dsu.union(ra, i)
            r = dsu.union(r, rb)
            top[r] = join(vals[i], ta, tb)

    (last,) = top.values()
    vmax = max(vals)
    root = last if nodes[last].value == vmax else new_node(vmax, [last])

    # renumber densely in creation order, since joins may delete ids
    remap = {old: k for k, old in enumerate(sorted(nodes))}
    table = {}
    for old, node in nodes.items():
        kids = [remap[c] for c in node.children]
        table[remap[old]] = MergeNode(
            remap[old], node.value, None if node.parent is None else remap[node.parent], kids
        )
    for node in table.values():
        node.children.sort(key=lambda c: (table[c].value, c))
    return MergeTree(table, remap[root])


# ---------------------------------------------------------------------------
# tree documents


@dataclass
class TreeDocument:
    records: list[tuple[int, Fraction, Optional[int]]]
    name: Optional[str] = None
    version: int = FORMAT_VERSION

    def to_tree(self) -> MergeTree:
        return MergeTree.from_records(self.records)


def read_tree_document(data: Union[bytes, str]) -> TreeDocument:
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise DocumentSyntaxError(f"not UTF-8: {exc}") from None
    records = []
    seen: set[int] = set()
    name = None
    version = FORMAT_VERSION
    for lineno, raw in enumerate(data.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            m = _HEADER.fullmatch(line)
            if m:
                version = int(m.group(1))
                if version != FORMAT_VERSION:
                    raise DocumentSyntaxError(f"unsupported format version {version}", lineno)
                continue
            m = _NAME.fullmatch(line)
            if m:
                name = m.group(1)
            continue
        fields = re.split(r"\t+|\s+", line)
        if len(fields) != 3:
            raise DocumentSyntaxError(f"expected 3 fields, got {len(fields)}", lineno)
        sid, sval, spar = fields
        try:
            nid = int(sid)
        except ValueError:
            raise DocumentSyntaxError(f"bad node id {sid!r}", lineno) from None
        if nid < 0:
            raise DocumentSyntaxError(f"node ids must be non-negative, got {nid}", lineno)
        if nid in seen:
            raise DuplicateId(f"node id {nid} appears twice", lineno)
        seen.add(nid)
        try:
            value = parse_value(sval)
        except ValueError as exc:
            raise DocumentSyntaxError(str(exc), lineno) from None
        if spar == "-":
            parent = None
        else:
            try:
                parent = int(spar)
            except ValueError:
                raise DocumentSyntaxError(f"bad parent id {spar!r}", lineno) from None
        records.append((nid, value, parent))
    if not records:
        raise DocumentSyntaxError("document holds no records")
    return TreeDocument(records, name, version)


def parse_tree_document(data: Union[bytes, str]) -> MergeTree:
    """Parse and validate a tree file; structural errors propagate as InvalidTree."""
    return read_tree_document(data).to_tree()


def write_tree_document(tree: MergeTree, name: Optional[str] = None) -> bytes:
    lines = [f"# merge-tree v{FORMAT_VERSION}"]
    if name:
        lines.append(f"# name: {name}")
    for nid, value, parent in tree.records():
        lines.append(f"{nid}\t{format_value(value)}\t{'-' if parent is None else parent}")
    return ("\n".join(lines) + "\n").encode("utf-8")


def load_tree(path) -> MergeTree:
    with open(path, "rb") as fh:
        return parse_tree_document(fh.read())


def save_tree(tree: MergeTree, path, name: Optional[str] = None) -> None:
    with open(path, "wb") as fh:
        fh.write(write_tree_document(tree, name))


# ---------------------------------------------------------------------------
# series CSV


def read_series_csv(data: Union[bytes, str]) -> ScalarSeries:
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    rows = list(csv.reader(io.StringIO(data)))
    rows = [r for r in rows if r and any(c.strip() for c in r)]
    if not rows:
        raise MalformedSeries("empty CSV")
    header = [c.strip().lower() for c in rows[0]]
    if header != ["position", "value"]:
        raise MalformedSeries(f"expected header 'position,value', got {','.join(rows[0])!r}")
    positions, values = [], []
    for k, row in enumerate(rows[1:], start=2):
        if len(row) != 2:
            raise MalformedSeries(f"line {k}: expected 2 columns, got {len(row)}")
        try:
            positions.append(parse_value(row[0]))
            values.append(parse_value(row[1]))
        except ValueError as exc:
            raise MalformedSeries(f"line {k}: {exc}") from None
    return ScalarSeries(positions, values)


def write_series_csv(series: ScalarSeries) -> bytes:
    lines = ["position,value"]
    lines += [f"{format_value(p)},{format_value(v)}" for p, v in zip(series.positions, series.values)]
    return ("\n".join(lines) + "\n").encode("utf-8")


def series_local_minima(values: Sequence) -> int:
    """Count strict local minima, endpoints included (used as a cross-check)."""
    n = len(values)
    if n == 1:
        return 1
    count = 0
    for i, v in enumerate(values):
        left = i == 0 or values[i - 1] > v
        right = i == n - 1 or values[i + 1] > v
        count += left and right
    return count


__all__ = [
    "ScalarSeries",
    "TreeDocument",
    "merge_tree_of_series",
    "parse_tree_document",
    "read_tree_document",
    "write_tree_document",
    "load_tree",
    "save_tree",
    "read_series_csv",
    "write_series_csv",
    "series_local_minima",
    "InvalidTree",
]
