"""CLI surface: exit codes, formats, determinism."""

import json

import pytest

from metricembed.cli import main

EQ = {"labels": ["a", "b", "c"], "distances": [[0, 1, 1], [1, 0, 1], [1, 1, 0]]}
STAR = [[0, 1, 1, 1], [1, 0, 2, 2], [1, 2, 0, 2], [1, 2, 2, 0]]


@pytest.fixture
def eq_file(tmp_path):
    path = tmp_path / "eq.json"
    path.write_text(json.dumps(EQ))
    return str(path)


@pytest.fixture
def star_file(tmp_path):
    path = tmp_path / "star.csv"
    path.write_text("\n".join(",".join(str(v) for v in row) for row in STAR))
    return str(path)


@pytest.fixture
def circle_cfg(tmp_path):
    path = tmp_path / "circle.json"
    path.write_text(json.dumps({"type": "euclidean", "dim": 2,
                                "region": {"kind": "sphere-surface", "center": [0, 0], "radius": 1.0},
                                "p": [1, 0]}))
    return str(path)


class TestValidate:
    def test_valid(self, eq_file, capsys):
        assert main(["validate", eq_file]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["ok"] and out["n_points"] == 3

    def test_triangle_violation_exit_2(self, tmp_path, capsys):
        path = tmp_path / "bad.csv"
        path.write_text("0,1,3\n1,0,1\n3,1,0\n")
        assert main(["validate", str(path)]) == 2
        out = json.loads(capsys.readouterr().out)
        assert "(0, 2, 1)" in out["error"]

    def test_malformed_json_exit_3(self, tmp_path, capsys):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        assert main(["validate", str(path)]) == 3

    def test_missing_file_exit_3(self, capsys):
        assert main(["validate", "/nonexistent/sp.json"]) == 3


class TestCheckEmbed:
    def test_yes_exit_0(self, eq_file, capsys):
        assert main(["check-embed", eq_file, "--dim", "2"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["result"]["verdict"] == "yes"

    def test_no_with_witness_exit_1(self, eq_file, capsys):
        assert main(["check-embed", eq_file, "--dim", "1"]) == 1
        out = json.loads(capsys.readouterr().out)
        assert out["result"]["witness_tuple"] == [0, 1, 2]

    def test_star_rejected_all_criteria(self, star_file, capsys):
        for crit in ("menger", "schoenberg", "blumenthal", "all"):
            assert main(["check-embed", star_file, "--dim", "3", "--criterion", crit]) == 1
            capsys.readouterr()

    def test_realize(self, eq_file, capsys):
        assert main(["check-embed", eq_file, "--dim", "2", "--realize"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["result"]["residual"] < 1e-9
        assert len(out["result"]["coordinates"]) == 3

    def test_text_format(self, eq_file, capsys):
        assert main(["check-embed", eq_file, "--dim", "2", "--format", "text"]) == 0
        text = capsys.readouterr().out
        assert "verdict: yes" in text


class TestMinDim:
    def test_equilateral(self, eq_file, capsys):
        assert main(["min-dim", eq_file]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["result"]["m"] == 2

    def test_star_infeasible(self, star_file, capsys):
        assert main(["min-dim", star_file]) == 1
        out = json.loads(capsys.readouterr().out)
        assert out["result"]["feasible"] is False
        assert out["result"]["psd"]["witness_subset"] is not None

    def test_pair(self, tmp_path, capsys):
        path = tmp_path / "pair.csv"
        path.write_text("0,5\n5,0\n")
        assert main(["min-dim", str(path)]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["result"]["m"] == 1


class TestUndetermined:
    def test_borderline_space_exit_4(self, tmp_path, capsys):
        # triangle slack of 1e-13: valid as a metric, but the signed
        # determinant lands minutely negative inside the zero band
        eps = 1e-13
        path = tmp_path / "border.json"
        path.write_text(json.dumps({"labels": ["a", "b", "c"],
                                    "distances": [[0, 1, 2 + eps], [1, 0, 1], [2 + eps, 1, 0]]}))
        assert main(["check-embed", str(path), "--dim", "2"]) == 4
        out = json.loads(capsys.readouterr().out)
        assert out["result"]["verdict"] == "undetermined"
        assert out["result"]["borderline_count"] >= 1


class TestScan:
    def test_circle_consistent_and_deterministic(self, circle_cfg, tmp_path, capsys):
        args = ["scan", circle_cfg, "--dim", "1", "--samples", "24", "--seed", "11"]
        a_path, b_path = str(tmp_path / "a.json"), str(tmp_path / "b.json")
        assert main(args + ["--out", a_path]) == 0
        assert main(args + ["--out", b_path]) == 0
        a = (tmp_path / "a.json").read_text()
        assert a == (tmp_path / "b.json").read_text()
        payload = json.loads(a)
        assert payload["result"]["verdict"] == "consistent-with-embeddable"
        assert payload["config"]["seed"] == 11

    def test_refutation_exit_1(self, tmp_path, capsys):
        cfg = tmp_path / "plane.json"
        cfg.write_text(json.dumps({"type": "euclidean", "dim": 2,
                                   "region": {"kind": "cube", "low": [0, 0], "high": [1, 1]},
                                   "p": [0, 0]}))
        assert main(["scan", str(cfg), "--dim", "1", "--samples", "32"]) == 1
        out = json.loads(capsys.readouterr().out)
        assert out["result"]["verdict"] == "refuted"
        assert out["result"]["witness_scan"] is not None

    def test_out_directory_per_k_reports(self, circle_cfg, tmp_path):
        outdir = tmp_path / "reports"
        assert main(["scan", circle_cfg, "--dim", "1", "--samples", "16",
                     "--out", str(outdir)]) == 0
        names = sorted(f.name for f in outdir.iterdir())
        assert "transfer.json" in names
        for k in (1, 2, 3):
            assert f"scan_k{k}_theta.json" in names
            assert f"scan_k{k}_s.json" in names

    def test_out_directory_text_format(self, circle_cfg, tmp_path):
        outdir = tmp_path / "reports_txt"
        assert main(["scan", circle_cfg, "--dim", "1", "--samples", "8",
                     "--format", "text", "--out", str(outdir)]) == 0
        assert "verdict: consistent-with-embeddable" in (outdir / "transfer.txt").read_text()

    def test_bad_config_exit_3(self, tmp_path, capsys):
        cfg = tmp_path / "bad.json"
        cfg.write_text(json.dumps({"type": "unknown"}))
        assert main(["scan", str(cfg), "--dim", "1"]) == 3

    def test_custom_scales_flag(self, circle_cfg, capsys):
        assert main(["scan", circle_cfg, "--dim", "1", "--samples", "8",
                     "--scales", "0.4:0.5:6"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["result"]["scans"][0]["scales"][0] == 0.4
        assert len(out["result"]["scans"][0]["scales"]) == 6

    def test_one_point_config_consistent_all_zero(self, tmp_path, capsys):
        cfg = tmp_path / "point.json"
        cfg.write_text(json.dumps({"type": "euclidean", "dim": 2,
                                   "region": {"kind": "cube", "low": [0, 0], "high": [0, 0]},
                                   "p": [0, 0]}))
        assert main(["scan", str(cfg), "--dim", "2", "--samples", "8"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["result"]["verdict"] == "consistent-with-embeddable"
        for scan in out["result"]["scans"]:
            assert set(scan["per_scale_inf"]) == {0.0}
            assert set(scan["per_scale_sup"]) == {0.0}

    def test_nonpositive_tolerance_rejected(self, eq_file):
        with pytest.raises(SystemExit):
            main(["check-embed", eq_file, "--dim", "2", "--tol-det", "0"])
