import json
import subprocess
import sys

import numpy as np
import pytest

import rankfill as rf
from rankfill.cli import main


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    captured = capsys.readouterr()
    out = json.loads(captured.out) if captured.out.strip() else None
    err = json.loads(captured.err) if captured.err.strip() else None
    return code, out, err


@pytest.fixture
def diag_file(tmp_path, diag_problem):
    path = tmp_path / "diag.json"
    rf.write_problem_file(path, diag_problem)
    return path


@pytest.fixture
def ones_file(tmp_path, ones_problem):
    path = tmp_path / "ones.json"
    rf.write_problem_file(path, ones_problem)
    return path


class TestGen:
    def test_reproducible_bytes(self, tmp_path, capsys):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        code1, out1, _ = run(capsys, "gen", "--n", 6, "--k", 2, "--seed", 42, "--out", a)
        code2, _, _ = run(capsys, "gen", "--n", 6, "--k", 2, "--seed", 42, "--out", b)
        assert code1 == code2 == 0
        assert a.read_bytes() == b.read_bytes()
        assert out1["n"] == 6 and out1["diagnostics"]["rank"] == 4
        doc = rf.read_problem_file(a)
        rf.validate(doc.A, doc.e, doc.D, doc.f)  # must not raise

    def test_invalid_spec_exits_2(self, tmp_path, capsys):
        code, _, err = run(capsys, "gen", "--n", 2, "--k", 2,
                           "--out", tmp_path / "x.json")
        assert code == 2
        assert err["error"] == "InvalidSpec"

    def test_larger_pipeline_seed(self, tmp_path, capsys):
        out = tmp_path / "big.json"
        code, _, _ = run(capsys, "gen", "--n", 100, "--k", 4, "--seed", 7,
                         "--out", out)
        assert code == 0
        code, report, _ = run(capsys, "check", out)
        assert code == 0
        assert report["all_passed"]


class TestInvert:
    def test_diagonal_fixture_svd(self, diag_file, tmp_path, capsys):
        out = tmp_path / "inv.json"
        code, report, _ = run(capsys, "invert", diag_file, "--path", "svd",
                              "--out", out)
        assert code == 0
        assert report["residual_right"] <= 1e-15
        doc = rf.read_problem_file(out)
        assert np.allclose(doc.G, np.diag([1.0, 0.0]), atol=1e-15)
        assert np.allclose(doc.x, [[0.0], [1.0]], atol=1e-15)
        assert np.allclose(doc.inverse, np.diag([1.0, 0.5]), atol=1e-15)

    def test_direct_path_reports_agreement(self, ones_file, tmp_path, capsys):
        code, report, _ = run(capsys, "invert", ones_file, "--path", "direct",
                              "--out", tmp_path / "inv.json")
        assert code == 0
        agreement = report["path_agreement_vs_svd"]
        assert agreement["G_rel_diff"] <= 1e-12
        doc = rf.read_problem_file(tmp_path / "inv.json")
        assert np.allclose(doc.G, [[0.0, 0.0], [0.0, 1.0]], atol=1e-14)

    def test_general_path(self, tmp_path, capsys):
        src = tmp_path / "p.json"
        run(capsys, "gen", "--n", 10, "--k", 2, "--seed", 3, "--out", src)
        code, report, _ = run(capsys, "invert", src, "--path", "general",
                              "--out", tmp_path / "inv.json")
        assert code == 0
        assert report["path_agreement_vs_svd"]["G_rel_diff"] <= 1e-9

    def test_k_equal_n_exits_3(self, tmp_path, capsys):
        path = tmp_path / "kn.json"
        path.write_text(json.dumps({
            "version": 1, "field": "real", "n": 2, "k": 2,
            "A": [[1.0, 0.0], [0.0, 0.0]],
            "e": [[1.0, 0.0], [0.0, 1.0]],
            "D": [[1.0, 0.0], [0.0, 1.0]],
            "f": [[1.0, 0.0], [0.0, 1.0]],
        }))
        code, _, err = run(capsys, "invert", path, "--out", tmp_path / "o.json")
        assert code == 3
        assert err["error"] == "RankOfANotNMinusK"

    def test_validation_failure_exits_3(self, tmp_path, capsys):
        path = tmp_path / "span.json"
        path.write_text(json.dumps({
            "version": 1, "field": "real", "n": 2, "k": 1,
            "A": [[1.0, 0.0], [0.0, 0.0]],
            "e": [[1.0], [0.0]],
            "D": [[1.0]],
            "f": [[0.0], [1.0]],
        }))
        code, _, err = run(capsys, "invert", path, "--out", tmp_path / "o.json")
        assert code == 3
        assert err["error"] == "SpanDeficientE"


class TestCheck:
    def test_pipeline_all_pass(self, ones_file, tmp_path, capsys):
        inv_file = tmp_path / "inv.json"
        run(capsys, "invert", ones_file, "--out", inv_file)
        code, report, _ = run(capsys, "check", inv_file)
        assert code == 0
        assert report["inverse_source"] == "stored"
        assert report["all_passed"]
        assert report["riedel_agreement"]["passed"]
        assert report["penrose"]["AGA_minus_A"]["passed"]

    def test_computes_inverse_when_absent(self, ones_file, capsys):
        code, report, _ = run(capsys, "check", ones_file)
        assert code == 0
        assert report["inverse_source"] == "computed"

    def test_diagonal_fixture_all_residuals_zero(self, diag_file, capsys):
        code, report, _ = run(capsys, "check", diag_file)
        assert code == 0
        assert max(report["identities"]["residuals"].values()) == 0.0

    def test_corrupted_g_exits_5(self, ones_file, tmp_path, capsys):
        inv_file = tmp_path / "inv.json"
        run(capsys, "invert", ones_file, "--out", inv_file)
        doc = json.loads(inv_file.read_text())
        doc["G"][0][0] = 0.1
        inv_file.write_text(json.dumps(doc))
        code, report, _ = run(capsys, "check", inv_file)
        assert code == 5
        assert not report["all_passed"]
        assert not report["identities"]["passed"]["fG"]

    def test_parse_error_exits_2(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("{ not json")
        code, _, err = run(capsys, "check", bad)
        assert code == 2
        assert err["error"] == "ParseError"

    def test_missing_file_exits_2(self, tmp_path, capsys):
        code, _, err = run(capsys, "check", tmp_path / "absent.json")
        assert code == 2
        assert err["error"] == "ParseError"


class TestDet:
    def test_dense_fixture_values(self, ones_file, capsys):
        code, report, _ = run(capsys, "det", ones_file)
        assert code == 0
        assert report["det_lemma"] == pytest.approx(2.0, abs=1e-13)
        assert report["det_dense"] == pytest.approx(2.0, abs=1e-13)
        assert report["det_inverse_lemma"] == pytest.approx(0.5, abs=1e-13)
        assert report["relative_gap"] <= 1e-12

    def test_diagonal_fixture_values(self, diag_file, capsys):
        code, report, _ = run(capsys, "det", diag_file)
        assert code == 0
        assert report["det_lemma"] == pytest.approx(2.0, abs=1e-14)
        assert report["det_inverse_lemma"] == pytest.approx(0.5, abs=1e-14)

    def test_generated_instance_small_gap(self, tmp_path, capsys):
        src = tmp_path / "p.json"
        run(capsys, "gen", "--n", 6, "--k", 2, "--seed", 42, "--out", src)
        code, report, _ = run(capsys, "det", src)
        assert code == 0
        assert report["relative_gap"] <= 1e-10

    def test_complex_determinant_serialized_as_pair(self, tmp_path, capsys):
        src = tmp_path / "c.json"
        run(capsys, "gen", "--n", 5, "--k", 1, "--seed", 8,
            "--field", "complex", "--out", src)
        code, report, _ = run(capsys, "det", src)
        assert code == 0
        assert isinstance(report["det_lemma"], list) and len(report["det_lemma"]) == 2


class TestBench:
    def test_small_run_reports_everything(self, capsys):
        code, report, _ = run(capsys, "bench", "--n", 50, "--k", 1,
                              "--repeats", 2, "--seed", 0)
        assert code == 0
        assert report["construct_seconds"]["svd"] > 0
        assert report["construct_seconds"]["direct"] > 0
        assert report["reassemble_seconds"] > 0
        assert report["dense_invert_seconds"] > 0
        assert report["woodbury_update_on_shifted_seconds"] > 0
        assert report["residual_reassemble_max"] < 1e-8
        assert report["residual_dense_max"] < 1e-8
        assert report["status"] in ("ok", "warn", "fail")

    def test_invalid_spec_exits_2(self, capsys):
        code, _, err = run(capsys, "bench", "--n", 2, "--k", 2)
        assert code == 2
        assert err["error"] == "InvalidSpec"


def test_console_script_smoke(tmp_path):
    out = tmp_path / "p.json"
    proc = subprocess.run(
        [sys.executable, "-m", "rankfill.cli", "gen", "--n", "5", "--k", "1",
         "--seed", "1", "--out", str(out)],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["out"] == str(out)
    assert out.exists()
