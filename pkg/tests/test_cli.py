import json
import subprocess
import sys

import numpy as np
import pytest

from arena_model.cli import main
from arena_model.estimator import counting_matrix
from arena_model.fileio import write_matrix


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def machine(capsys, *argv):
    code, out, err = run(capsys, *argv, "--format", "machine")
    assert code == 0, err
    doc = json.loads(out)
    assert doc["schema"] == "arena-model/1"
    return doc


def probs(doc):
    return {r["result"]: r["probability"] for r in doc["result"]["results"]}


class TestPredict:
    def test_hearthstone_fixture(self, capsys, data_dir):
        doc = machine(capsys, "predict", data_dir / "hearthstone_12_3.txt", "--shape", "12,3")
        p = probs(doc)
        assert doc["config"]["engine"] == "grid"
        assert abs(sum(p.values()) - 1) < 1e-6
        assert abs(p["12-1"] - 0.20) <= 0.02
        assert abs(p["12-0"] - 3.0e-4) <= 1e-4
        dens = doc["result"]["posterior_density"]
        assert len(dens["x"]) == len(dens["density"]) == 101

    def test_fifa_fixture_with_baseline(self, capsys, data_dir):
        doc = machine(capsys, "predict", data_dir / "fifa" / "italy.txt", "--fifa", "--baseline")
        rows = {r["result"]: r for r in doc["result"]["results"]}
        assert rows["5-0"]["baseline"] == 0.1 and rows["0-1"]["baseline"] == 0.2
        expected = [0.102, 0.171, 0.244, 0.259, 0.167, 0.056]
        got = [rows[k]["probability"] for k in ("0-1", "1-1", "2-1", "3-1", "4-1", "5-0")]
        assert np.allclose(got, expected, atol=0.01)
        assert "exact" in rows["5-0"]

    def test_empty_history_is_occupancy(self, capsys, tmp_path):
        f = tmp_path / "empty.txt"
        f.write_text("# nothing yet\n")
        doc = machine(capsys, "predict", f, "--shape", "3,2")
        assert probs(doc) == {"3-0": 0.125, "3-1": 0.1875, "2-2": 0.1875, "1-2": 0.25, "0-2": 0.25}

    def test_bad_history_line(self, capsys, tmp_path):
        f = tmp_path / "bad.txt"
        f.write_text("3,0\n2,5\n")
        code, _, err = run(capsys, "predict", f, "--shape", "3,2")
        assert code == 2 and "line 2" in err

    def test_table_output(self, capsys, data_dir):
        code, out, _ = run(capsys, "predict", data_dir / "fifa" / "brazil.txt", "--fifa")
        assert code == 0 and "5-0" in out and "engine exact" in out


class TestSimulate:
    def test_matrix_deterministic_and_balanced(self, capsys, tmp_path):
        outs = []
        for k in range(2):
            path = tmp_path / f"m{k}.txt"
            code, out, _ = run(capsys, "simulate", "matrix", "--players", 1024, "--rounds", 8,
                               "--rho", 1, "--seed", 7, "--out", path)
            assert code == 0 and "seed 7" in out
            outs.append(path.read_bytes())
        assert outs[0] == outs[1]
        rows = outs[0].decode().split()
        assert len(rows) == 1024
        assert all(sum(r[k] == "1" for r in rows) == 512 for k in range(8))

    def test_matrix_then_estimate(self, capsys, tmp_path):
        path = tmp_path / "m.txt"
        run(capsys, "simulate", "matrix", "--players", 8192, "--rounds", 8, "--rho", 1, "--seed", 3, "--out", path)
        doc = machine(capsys, "estimate", path)
        assert abs(doc["result"]["rho_hat"] - 1) < 0.1

    def test_seed_echoed_when_drawn(self, capsys):
        doc = machine(capsys, "simulate", "matrix", "--players", 4, "--rounds", 2, "--rho", 1)
        assert isinstance(doc["config"]["seed"], int)
        assert len(doc["result"]["rows"]) == 4

    def test_game_two_two(self, capsys):
        doc = machine(capsys, "simulate", "game", "--shape", "2,2", "--log2-extra", 12, "--seed", 1)
        assert doc["config"]["players"] == 2 ** 16
        for r in doc["result"]["results"]:
            assert abs(r["frequency"] - 0.25) < 0.01

    def test_game_records(self, capsys, tmp_path):
        path = tmp_path / "g.csv"
        code, _, _ = run(capsys, "simulate", "game", "--shape", "2,1", "--seed", 5, "--out", path)
        lines = path.read_text().splitlines()
        assert code == 0 and lines[0] == "player,round,run,i,j,won" and len(lines) > 1

    def test_invalid_config(self, capsys):
        code, _, err = run(capsys, "simulate", "matrix", "--players", 3, "--rounds", 2, "--rho", 1)
        assert code == 2 and "even" in err


class TestEstimate:
    def test_counting_matrix(self, capsys, tmp_path):
        path = tmp_path / "a8.txt"
        write_matrix(path, counting_matrix(8))
        r = machine(capsys, "estimate", path)["result"]
        assert r["T"] == 0.25 and r["beta"] == 0 and r["clamped"] == "low_T"
        assert r["M"] == 256 and r["n"] == 8

    def test_constant_rows(self, capsys, tmp_path):
        path = tmp_path / "c.txt"
        path.write_text("1111\n1111\n0000\n0000\n")
        r = machine(capsys, "estimate", path)["result"]
        assert r["beta"] == 1 and r["clamped"] == "high_T"

    def test_ragged(self, capsys, tmp_path):
        path = tmp_path / "r.txt"
        path.write_text("0101\n011\n")
        code, _, err = run(capsys, "estimate", path)
        assert code == 2 and "line 2" in err

    def test_single_round_is_domain_error(self, capsys, tmp_path):
        path = tmp_path / "s.txt"
        path.write_text("0\n1\n")
        assert run(capsys, "estimate", path)[0] == 3


class TestTable5AndBridge:
    def test_small_table5(self, capsys):
        doc = machine(capsys, "table5", "--rho", "1", "--regimes", "1024x8", "--reps", 40,
                      "--seed", 2, "--compare")
        cell = doc["result"]["cells"][0]
        assert cell["rho"] == 1 and cell["reps"] == 40 and "check" in cell
        assert doc["config"]["seed"] == 2

    def test_bad_regime(self, capsys):
        assert run(capsys, "table5", "--regimes", "1024by8", "--seed", 1)[0] == 2

    def test_bridge(self, capsys):
        r = machine(capsys, "bridge", "forward", "--x-i", 0, "--x-j", 1, "--rho", 1)["result"]
        assert r["valid"] and abs(r["mu_j"] - 638.3) < 0.05
        r = machine(capsys, "bridge", "delta", "--rho", 1, "--wins", 6, "--rounds", 8)["result"]
        assert abs(r["delta"] - 1.52216) < 1e-5
        r = machine(capsys, "bridge", "inverse", "--mu-i", 0, "--mu-j", 0, "--sigma2", 0)["result"]
        assert abs(r["rho"] - 1 / np.log(10)) < 1e-12

    def test_bridge_domain_error(self, capsys):
        assert run(capsys, "bridge", "delta", "--rho", 1, "--wins", 8, "--rounds", 8)[0] == 3
        assert run(capsys, "bridge", "inverse", "--mu-i", 0, "--mu-j", 0, "--sigma2", -1)[0] == 3


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "arena_model", "bridge", "delta", "--rho", "1", "--x", "0"],
                         capture_output=True, text=True, check=True)
    assert "delta" in out.stdout
