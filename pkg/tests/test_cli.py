import json
import os
import random
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from mtinterleave.cli import main, replay_manifest
from mtinterleave.ingest import save_tree
from mtinterleave.report import load_schema

from corpus import random_pair

DATA = Path(__file__).parent / "data"
GOLDEN = DATA / "golden"
FA = str(DATA / "fixture_f.tree")
FB = str(DATA / "fixture_g.tree")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestDistance:
    def test_identical(self, capsys):
        assert run(capsys, "distance", FA, FA)[:2] == (0, "0\n")

    def test_golden(self, capsys):
        code, out, _ = run(capsys, "distance", FA, FB)
        assert code == 0
        assert out == (GOLDEN / "fixture_distance.txt").read_text()

    def test_decimal_is_marked(self, capsys):
        code, out, _ = run(capsys, "distance", FA, FB, "--decimal")
        lines = out.splitlines()
        assert lines[0] == "1" and "approximate" in lines[1]

    def test_golden_witness(self, capsys, tmp_path):
        w = tmp_path / "w.json"
        run(capsys, "distance", FA, FB, "--deterministic-witness", "--witness", str(w))
        assert w.read_bytes() == (GOLDEN / "fixture_witness.json").read_bytes()
        data = json.loads(w.read_text())
        jsonschema.validate(data, load_schema("witness"))
        assert data["direction"] == "f->g"
        assert data["epsilon"] == "1"

    def test_json_manifest(self, capsys, tmp_path):
        m = tmp_path / "m.json"
        code, _, _ = run(capsys, "distance", FA, FB, "--json", str(m))
        assert code == 0
        data = json.loads(m.read_text())
        jsonschema.validate(data, load_schema("run_manifest"))
        jsonschema.validate(data["result"]["witness"], load_schema("witness"))
        assert data["result"]["epsilon_star"] == "1"
        assert data["subcommand"] == "distance"
        # round trip through text keeps the payload intact
        assert json.loads(json.dumps(data)) == data

    def test_replay(self, capsys, tmp_path):
        m = tmp_path / "m.json"
        run(capsys, "distance", FA, FB, "--json", str(m), "--no-refine")
        data = json.loads(m.read_text())
        assert replay_manifest(data) == data["result"]

    def test_missing_file(self, capsys):
        code, out, err = run(capsys, "distance", "no/such.tree", FB)
        assert code == 2 and out == "" and "no/such.tree" in err

    def test_invalid_tree(self, capsys):
        bad = str(DATA / "flat_edge.tree")
        code, out, err = run(capsys, "distance", FA, bad)
        assert code == 2 and out == ""
        assert "flat_edge.tree" in err and "NonIncreasingEdge" in err

    def test_budget(self, capsys, tmp_path):
        from corpus import four_by_ten_pair

        f, g = four_by_ten_pair()
        save_tree(f, tmp_path / "f.tree")
        save_tree(g, tmp_path / "g.tree")
        code, out, err = run(capsys, "distance", str(tmp_path / "f.tree"), str(tmp_path / "g.tree"), "--max-maps", "2")
        assert code == 3 and out == "" and "budget" in err


class TestCheck:
    def test_interleaved(self, capsys):
        assert run(capsys, "check", FA, FB, "--epsilon", "1")[:2] == (0, "interleaved\n")

    def test_not_interleaved(self, capsys):
        assert run(capsys, "check", FA, FB, "--epsilon", "1/2")[:2] == (1, "not-interleaved\n")

    @pytest.mark.parametrize("eps", ["-1", "abc", "1/0"])
    def test_bad_epsilon(self, capsys, eps):
        code, out, err = run(capsys, "check", FA, FB, "--epsilon", eps)
        assert code == 2 and out == "" and "--epsilon" in err

    def test_witness_and_manifest(self, capsys, tmp_path):
        w, m = tmp_path / "w.json", tmp_path / "m.json"
        run(capsys, "check", FA, FB, "--epsilon", "2", "--witness", str(w), "--json", str(m))
        jsonschema.validate(json.loads(w.read_text()), load_schema("witness"))
        data = json.loads(m.read_text())
        jsonschema.validate(data, load_schema("run_manifest"))
        assert data["epsilon"] == "2"
        assert replay_manifest(data) == data["result"]

    def test_no_witness_when_not_interleaved(self, capsys, tmp_path):
        w = tmp_path / "w.json"
        run(capsys, "check", FA, FB, "--epsilon", "1/2", "--witness", str(w))
        assert not w.exists()


class TestIngest:
    def test_monotone_chain(self, capsys, tmp_path):
        csv = tmp_path / "s.csv"
        csv.write_text("position,value\n0,0\n1,1\n2,2\n")
        out = tmp_path / "t.tree"
        assert run(capsys, "ingest", str(csv), str(out))[:2] == (0, "")
        assert out.read_text().splitlines()[-2:] == ["0\t0\t1", "1\t2\t-"]

    def test_hand_derived(self, capsys, tmp_path):
        out = tmp_path / "t.tree"
        run(capsys, "ingest", str(DATA / "series_31.csv"), str(out))
        assert out.read_bytes() == (GOLDEN / "series_31.tree").read_bytes()

    def test_idempotent(self, capsys, tmp_path):
        a, b = tmp_path / "a.tree", tmp_path / "b.tree"
        run(capsys, "ingest", str(DATA / "series_31.csv"), str(a))
        run(capsys, "ingest", str(DATA / "series_31.csv"), str(b))
        assert a.read_bytes() == b.read_bytes()

    def test_equal_neighbours(self, capsys, tmp_path):
        code, out, err = run(capsys, "ingest", str(DATA / "flat.csv"), str(tmp_path / "x.tree"))
        assert code == 2 and out == "" and "flat.csv" in err

    def test_malformed_csv(self, capsys, tmp_path):
        csv = tmp_path / "bad.csv"
        csv.write_text("a,b\n1,2\n")
        code, _, err = run(capsys, "ingest", str(csv), str(tmp_path / "x.tree"))
        assert code == 2 and "bad.csv" in err


class TestCandidates:
    def test_golden(self, capsys):
        code, out, _ = run(capsys, "candidates", FA, FB)
        assert code == 0
        assert out == (GOLDEN / "fixture_candidates.txt").read_text() == "1\n2\n3\n5\n"

    def test_single_nodes(self, capsys, tmp_path):
        p = tmp_path / "one.tree"
        p.write_text("0\t5\t-\n")
        assert run(capsys, "candidates", str(p), str(p))[:2] == (0, "0\n")

    def test_ascending(self, capsys):
        six = str(DATA / "six_leaves.tree")
        _, out, _ = run(capsys, "candidates", six, FA)
        from fractions import Fraction

        vals = [Fraction(x) for x in out.split()]
        assert all(a < b for a, b in zip(vals, vals[1:]))

    def test_bad_input(self, capsys):
        code, out, _ = run(capsys, "candidates", FA, str(DATA / "flat_edge.tree"))
        assert code == 2 and out == ""


class TestOracle:
    def test_fixture_compare(self, capsys, tmp_path):
        m = tmp_path / "m.json"
        assert run(capsys, "oracle", FA, FB, "--compare", "--json", str(m))[:2] == (0, "1\n")
        data = json.loads(m.read_text())
        jsonschema.validate(data, load_schema("run_manifest"))
        assert data["result"]["engine_epsilon_star"] == "1"
        assert replay_manifest(data) == data["result"]

    def test_too_large(self, capsys):
        code, out, err = run(capsys, "oracle", str(DATA / "six_leaves.tree"), FB)
        assert code == 5 and out == "" and "six_leaves.tree" in err

    def test_mismatch_exit(self, capsys, monkeypatch):
        import mtinterleave.cli as cli
        from fractions import Fraction

        real = cli.compute_interleaving_distance

        def off_by_one(a, b, cfg):
            rep = real(a, b, cfg)
            rep.epsilon_star += Fraction(1)
            return rep

        monkeypatch.setattr(cli, "compute_interleaving_distance", off_by_one)
        code, out, err = run(capsys, "oracle", FA, FB, "--compare")
        assert code == 4 and out == "" and "mismatch" in err

    def test_random_compare(self, capsys, tmp_path):
        rng = random.Random(2024)
        for k in range(50):
            f, g = random_pair(rng)
            a, b = tmp_path / f"a{k}.tree", tmp_path / f"b{k}.tree"
            save_tree(f, a)
            save_tree(g, b)
            code, _, err = run(capsys, "oracle", str(a), str(b), "--compare")
            assert code == 0, err


def test_module_entry_point():
    env = dict(os.environ, MT_INTERLEAVE_LOG="debug")
    proc = subprocess.run(
        [sys.executable, "-m", "mtinterleave", "distance", FA, FB],
        capture_output=True,
        text=True,
        env=env,
    )
    assert proc.returncode == 0
    assert proc.stdout == "1\n"
    assert "DEBUG" in proc.stderr


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as e:
        main(["distance", FA])
    assert e.value.code == 2
    assert capsys.readouterr().out == ""
