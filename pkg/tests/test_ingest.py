from fractions import Fraction as F
import random

import pytest

from mtinterleave.errors import DocumentSyntaxError, DuplicateId, EqualAdjacentValues, MalformedSeries, MultipleRoots
from mtinterleave.ingest import (
    ScalarSeries,
    merge_tree_of_series,
    parse_tree_document,
    read_series_csv,
    read_tree_document,
    series_local_minima,
    write_series_csv,
    write_tree_document,
)
from mtinterleave.mergetree import MergeTree, canonical_form, validate_tree

from corpus import random_merge_tree, random_series


def shape(tree):
    """(sorted leaf values, sorted internal non-root values, root value)."""
    lv = sorted(tree.value(u) for u in tree.leaves())
    inner = sorted(tree.value(u) for u in tree.nodes if tree.children(u) and u != tree.root)
    return lv, inner, tree.value(tree.root)


def quartic_samples(n=1000):
    xs = [F(-5, 2) + F(5, n) * k for k in range(n + 1)]
    return xs, [x**4 - 4 * x**2 + x for x in xs]


class TestSeries:
    def test_monotone_is_chain(self):
        t = merge_tree_of_series([0, 1, 2, 3])
        assert t.records() == [(0, 0, 1), (1, 3, None)]

    def test_hand_sweep(self):
        t = merge_tree_of_series([3, 0, 2, 1, 4])
        assert t.records() == [(0, 0, 2), (1, 1, 2), (2, 2, 3), (3, 4, None)]

    def test_single_sample(self):
        t = merge_tree_of_series([7])
        assert len(t) == 1 and t.value(t.root) == 7

    def test_decreasing(self):
        t = merge_tree_of_series([5, 4, 1])
        assert shape(t) == ([1], [], 5)

    def test_equal_neighbours_rejected(self):
        with pytest.raises(EqualAdjacentValues):
            merge_tree_of_series([1, 2, 2, 0])

    def test_equal_non_neighbours_ok(self):
        # minima at 0 and 0 merge at the shared peak value 3
        t = merge_tree_of_series([0, 3, 0, 3, 0])
        validate_tree(t)
        assert shape(t) == ([0, 0, 0], [], 3)

    def test_quartic_has_two_basins(self):
        xs, ys = quartic_samples()
        t = merge_tree_of_series(ScalarSeries(xs, ys))
        lv, inner, _ = shape(t)
        assert len(lv) == 2
        assert len(inner) == 1
        assert len(t) == 4

    def test_positions_must_increase(self):
        with pytest.raises(MalformedSeries):
            ScalarSeries([0, 0], [1, 2])

    def test_empty_series(self):
        with pytest.raises(MalformedSeries):
            ScalarSeries([], [])


@pytest.mark.parametrize("seed", range(40))
def test_series_invariants(seed):
    rng = random.Random(seed)
    vals = random_series(rng, rng.randint(1, 15))
    t = merge_tree_of_series(vals)
    validate_tree(t)
    assert len(t.leaves()) == series_local_minima(vals)
    pool = list(vals)
    for v in t.values():
        pool.remove(v)
    # mirror symmetry
    assert canonical_form(merge_tree_of_series(vals[::-1])) == canonical_form(t)


class TestDocuments:
    def test_parse_chain(self):
        t = parse_tree_document(b"0\t0.5\t1\n1\t2\t-\n")
        assert t.records() == [(0, F(1, 2), 1), (1, 2, None)]

    def test_two_roots(self):
        with pytest.raises(MultipleRoots):
            parse_tree_document("0\t0\t-\n1\t1\t-\n")

    def test_rational_literal(self):
        t = parse_tree_document("0 1/3 1\n1 2 -\n")
        assert t.value(0) == F(1, 3)

    def test_comments_and_blank_lines(self):
        doc = read_tree_document("# merge-tree v1\n# name: demo\n\n0\t1\t-\n")
        assert doc.name == "demo"
        assert doc.records == [(0, 1, None)]

    def test_duplicate_id(self):
        with pytest.raises(DuplicateId):
            parse_tree_document("0\t0\t1\n0\t1\t-\n")

    @pytest.mark.parametrize("bad,line", [("0\t1\n", 1), ("0\t0\t-\nx\t1\t0\n", 2), ("0\tfoo\t-\n", 1)])
    def test_syntax_error_reports_line(self, bad, line):
        with pytest.raises(DocumentSyntaxError) as e:
            parse_tree_document(bad)
        assert e.value.line == line

    def test_single_node_round_trip(self):
        data = write_tree_document(MergeTree.single(3))
        body = [ln for ln in data.decode().splitlines() if not ln.startswith("#")]
        assert body == ["0\t3\t-"]

    def test_rational_value_written_exactly(self):
        t = MergeTree.from_records([(0, F(7, 2), 1), (1, 4, None)])
        data = write_tree_document(t)
        assert b"7/2" in data
        assert parse_tree_document(data).value(0) == F(7, 2)

    def test_name_header(self):
        data = write_tree_document(MergeTree.single(0), name="x")
        assert data.startswith(b"# merge-tree v1\n# name: x\n")

    @pytest.mark.parametrize("seed", range(30))
    def test_round_trip_corpus(self, seed):
        rng = random.Random(seed)
        t = random_merge_tree(rng, rng.randint(1, 4), 10)
        data = write_tree_document(t)
        back = parse_tree_document(data)
        assert back == t
        assert write_tree_document(back) == data


class TestCsv:
    def test_round_trip(self):
        s = ScalarSeries([0, F(1, 2), 3], [1, 0, F(5, 2)])
        back = read_series_csv(write_series_csv(s))
        assert back.positions == s.positions and back.values == s.values

    def test_bad_header(self):
        with pytest.raises(MalformedSeries):
            read_series_csv("x,y\n0,1\n")

    def test_bad_row(self):
        with pytest.raises(MalformedSeries):
            read_series_csv("position,value\n0,1,2\n")

    def test_bad_number(self):
        with pytest.raises(MalformedSeries):
            read_series_csv("position,value\n0,abc\n")

    def test_empty(self):
        with pytest.raises(MalformedSeries):
            read_series_csv("")
