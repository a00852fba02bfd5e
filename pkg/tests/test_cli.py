"""Tests for the command-line interface."""

import io
import json
import os
import subprocess
import sys

import pytest

from secant.cli import main

DATA = os.path.join(os.path.dirname(__file__), "data")
GOLDEN = os.path.join(DATA, "table_rank8_golden.json")


def run_cli(*argv):
    buf = io.StringIO()
    code = main(list(argv), out=buf)
    return code, buf.getvalue()


class TestClassify:
    def test_tame_g2(self):
        code, out = run_cli("classify", "G2[1,0]")
        assert code == 0
        assert "tame" in out

    def test_wild_wedge3(self):
        code, out = run_cli("classify", "A5[0,0,1,0,0]")
        assert code == 0
        assert "wild" in out
        assert "certificate replays: True" in out

    def test_json_schema(self):
        code, out = run_cli("classify", "A5[0,0,1,0,0]", "--json")
        assert code == 0
        doc = json.loads(out)
        assert doc["schema"] == "secant/classify/v1"
        assert doc["status"] == "wild"
        assert doc["certificate_replays"] is True
        assert doc["certificate"]["base_case"]

    def test_bad_descriptor_exit_1(self, capsys):
        code, _ = run_cli("classify", "Z9[1]")
        assert code == 1
        assert "Z9" in capsys.readouterr().err

    def test_trivial_module_exit_1(self, capsys):
        code, _ = run_cli("classify", "A2[0,0]")
        assert code == 1


class TestRank:
    def write(self, tmp_path, doc):
        path = tmp_path / "t.json"
        path.write_text(json.dumps(doc))
        return str(path)

    def test_matrix(self, tmp_path):
        path = self.write(tmp_path, {
            "shape": "matrix", "dims": [2, 2],
            "coords": ["1", "0", "0", "1"]})
        code, out = run_cli("rank", "matrix", path, "--json")
        assert code == 0
        assert json.loads(out)["rank"] == 2

    def test_wedge3_witness_file(self, tmp_path):
        coords = ["0"] * 20
        # lexicographic triple positions of the rank-3 witness
        from secant.ranks import WEDGE3_TRIPLES
        tidx = {t: i for i, t in enumerate(WEDGE3_TRIPLES)}
        coords[tidx[(0, 1, 3)]] = "1"
        coords[tidx[(0, 2, 4)]] = "-1"
        coords[tidx[(1, 2, 5)]] = "1"
        path = self.write(tmp_path, {
            "shape": "wedge3", "dims": [6], "coords": coords})
        code, out = run_cli("rank", "wedge3", path, "--json")
        assert code == 0
        assert json.loads(out)["rank"] == 3

    def test_coform_certificate(self, tmp_path):
        # e0 wedge e2: skew, zero contraction with the interleaved form
        path = self.write(tmp_path, {
            "shape": "coform", "dims": [4],
            "coords": ["0", "0", "1", "0", "0", "0", "0", "0", "-1", "0",
                       "0", "0", "0", "0", "0", "0"]})
        code, out = run_cli("rank", "coform", path, "--json")
        assert code == 0
        doc = json.loads(out)
        assert doc["certificate"]["pairs"]

    def test_jordan(self, tmp_path):
        coords = ["1", "1", "0"] + ["0"] * 24  # diag(1, 1, 0)
        path = self.write(tmp_path, {
            "shape": "jordan", "dims": [27], "coords": coords})
        code, out = run_cli("rank", "jordan", path, "--json")
        assert code == 0
        assert json.loads(out)["rank"] == 2

    def test_shape_mismatch_exit_1(self, tmp_path, capsys):
        path = self.write(tmp_path, {
            "shape": "matrix", "dims": [2, 2],
            "coords": ["1", "0", "0", "1"]})
        code, _ = run_cli("rank", "skew", path)
        assert code == 1
        assert "mismatch" in capsys.readouterr().err

    def test_missing_file_exit_1(self, capsys):
        code, _ = run_cli("rank", "matrix", "/does/not/exist.json")
        assert code == 1

    def test_malformed_json_exit_1(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text("{nope")
        code, _ = run_cli("rank", "matrix", str(path))
        assert code == 1


class TestChopTree:
    def test_wild_chain(self):
        code, out = run_cli("chop-tree", "E8[0,0,0,0,0,0,1,0]")
        assert code == 0
        assert "base case" in out
        assert "replays: True" in out

    def test_tame_has_no_chain(self):
        code, out = run_cli("chop-tree", "G2[1,0]")
        assert code == 0
        assert "no reduction chain" in out

    def test_json(self):
        code, out = run_cli("chop-tree", "E8[0,0,0,0,0,0,1,0]", "--json")
        doc = json.loads(out)
        assert doc["schema"] == "secant/chop-tree/v1"
        assert doc["status"] == "wild"
        assert doc["certificate"]["chain"]


class TestWitness:
    def test_sp6(self):
        code, out = run_cli("witness", "sp6", "--json")
        assert code == 0
        doc = json.loads(out)
        assert doc["rank"] == 3
        assert doc["contraction_is_zero"] is True
        assert doc["summand_planes_isotropic"] is True

    def test_sl6(self):
        code, out = run_cli("witness", "sl6", "--json")
        assert code == 0
        doc = json.loads(out)
        ranks = [r["rank"] for r in doc["representatives"]]
        assert ranks == [1, 2, 2, 3]

    def test_f4_requires_seed_in_json_mode(self, capsys):
        code, _ = run_cli("witness", "f4", "--json")
        assert code == 1
        assert "--seed" in capsys.readouterr().err

    def test_f4_with_seed(self):
        code, out = run_cli("witness", "f4", "--json", "--seed", "0")
        assert code == 0
        doc = json.loads(out)
        assert doc["found"] is True
        assert doc["stats"] == [4, 1]
        assert doc["membership_ok"] is True

    def test_f4_human(self):
        code, out = run_cli("witness", "f4")
        assert code == 0
        assert "tangent rank 21" in out


class TestOrbitDim:
    def test_long_root_small_types(self):
        code, out = run_cli("orbit-dim", "G2", "--element", "root", "--json")
        assert code == 0
        assert json.loads(out)["orbit_dim"] == 6
        code, out = run_cli("orbit-dim", "A1", "--element", "root", "--json")
        assert json.loads(out)["orbit_dim"] == 2

    def test_pair_class(self):
        code, out = run_cli("orbit-dim", "A3", "--element", "pair:0",
                            "--json")
        assert code == 0
        doc = json.loads(out)
        assert doc["orbit_dim"] == 8
        assert doc["inner_product"] == "0"

    def test_unknown_pair_exit_1(self, capsys):
        code, _ = run_cli("orbit-dim", "G2", "--element", "pair:9")
        assert code == 1
        assert "available" in capsys.readouterr().err

    def test_3a1_requires_e8(self, capsys):
        code, _ = run_cli("orbit-dim", "G2", "--element", "3a1")
        assert code == 1

    def test_bad_type_exit_1(self, capsys):
        code, _ = run_cli("orbit-dim", "Q5", "--element", "root")
        assert code == 1


class TestOracle:
    def test_gr2_4_with_check(self):
        code, out = run_cli("oracle", "gr2-4", "--prime", "2", "--check",
                            "--json")
        assert code == 0
        doc = json.loads(out)
        assert doc["schema"] == "secant/oracle/v1"
        assert doc["layer_counts"] == {"0": 1, "1": 35, "2": 28}
        assert doc["max_rank"] == 2
        assert doc["check"]["rank1_layer_is_cone"] is True
        assert doc["check"]["closed_form"]["agrees"] is True

    def test_segre_check(self):
        code, out = run_cli("oracle", "segre-2x2", "--prime", "3", "--check",
                            "--json")
        assert code == 0
        doc = json.loads(out)
        assert doc["check"]["closed_form"]["kind"] == "matrix rank"
        assert doc["check"]["closed_form"]["agrees"] is True

    def test_cap_exit_2(self, capsys):
        code, _ = run_cli("oracle", "spinor10", "--prime", "3")
        assert code == 2
        assert "cap" in capsys.readouterr().err

    def test_unknown_family_exit_1(self, capsys):
        code, _ = run_cli("oracle", "mystery-9", "--prime", "2")
        assert code == 1


class TestTable:
    def test_golden_bytes(self):
        code, out = run_cli("table", "--max-rank", "8", "--format", "json")
        assert code == 0
        with open(GOLDEN, "r", encoding="utf-8") as fh:
            assert out == fh.read()

    def test_markdown_shape(self):
        code, out = run_cli("table", "--max-rank", "3")
        assert code == 0
        assert out.startswith("| pair | verdict |")
        assert "`G2[1,0]`" in out

    def test_set_matches_transcription(self):
        with open(os.path.join(DATA, "tame_table_rank8.json")) as fh:
            want = set(json.load(fh)["rows"])
        code, out = run_cli("table", "--max-rank", "8", "--format", "json")
        got = {r["descriptor"] for r in json.loads(out)["rows"]}
        assert got == want

    def test_all_rows_tame(self):
        code, out = run_cli("table", "--max-rank", "4", "--format", "json")
        doc = json.loads(out)
        assert all(r["status"] == "tame" for r in doc["rows"])
        assert doc["count"] == len(doc["rows"])


class TestPlumbing:
    def test_usage_error_exit_1(self, capsys):
        code = main(["no-such-command"])
        assert code == 1

    def test_subprocess_entry(self):
        # the module entry point works end to end in a real process
        proc = subprocess.run(
            [sys.executable, "-m", "secant.cli", "classify", "G2[1,0]"],
            capture_output=True, text=True)
        assert proc.returncode == 0
        assert "tame" in proc.stdout

    def test_json_outputs_parse(self):
        for argv in (
            ["classify", "A5[0,0,1,0,0]", "--json"],
            ["witness", "sp6", "--json"],
            ["oracle", "segre-2x2", "--prime", "2", "--json"],
            ["table", "--max-rank", "2", "--json"],
            ["orbit-dim", "A2", "--element", "root", "--json"],
        ):
            code, out = run_cli(*argv)
            assert code == 0
            doc = json.loads(out)
            assert doc["schema"].startswith("secant/")
            assert doc["schema"].endswith("/v1")
