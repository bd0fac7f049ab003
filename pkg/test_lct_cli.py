#!/usr/bin/env python3
"""
Test lctlab Command Line
========================

Drives ``lct_cli.main`` end to end: output files, JSON reports, exit codes
and reproducibility of reruns.
"""

import argparse
import json
import re
import sys
from pathlib import Path

import numpy as np
import pytest

from lct_cli import SUITES, _attach_spec_values, _safe_name, build_parser, main
from lct_engine import GaussianSpec, gaussian_lct_closed
from signal_io import read_signal_csv, write_signal_csv
from symplectic_core import standard_J

SMALL_GRID = "-4:0.0625:128"


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def error_of(stderr: str) -> dict:
    return json.loads(stderr.strip().splitlines()[-1])


def test_attach_spec_values():
    assert _attach_spec_values(["wigner", "--grid", "-8:0.1:64", "--json"]) == ["wigner", "--grid=-8:0.1:64", "--json"]
    assert _attach_spec_values(["radon", "--offsets", "--json"]) == ["radon", "--offsets", "--json"]
    assert _safe_name("hermite:1") == "hermite_1.csv"
    assert _safe_name("/data/corpus/a b.csv") == "a_b.csv"


def test_transform_of_gaussian(tmp_path, capsys):
    print("🧪 Testing transform...")
    out = tmp_path / "run"
    code, stdout, _ = run(capsys, "transform", "--signal", "gaussian:pi", "--matrix", "J",
                          "--grid", "-8:0.015625:1024", "--out", str(out), "--json")
    assert code == 0
    report = json.loads(stdout)
    assert report["branch"].startswith("principal")
    assert report["prefactor"] == pytest.approx([np.cos(np.pi / 4), -np.sin(np.pi / 4)])
    meta = json.loads((out / "transform.json").read_text())
    assert meta["matrix"]["n"] == 1
    g = read_signal_csv(out / "transform.csv")
    expected = gaussian_lct_closed(GaussianSpec(alpha=np.pi), standard_J()).evaluate(g.x)
    assert np.linalg.norm(g.values - expected) <= 1e-6 * np.linalg.norm(expected)


def test_reruns_are_byte_identical(tmp_path, capsys):
    outputs = []
    for name in ("first", "second"):
        out = tmp_path / name
        code, _, _ = run(capsys, "transform", "--signal", "hermite:1", "--matrix", "frft:pi/3",
                         "--grid", SMALL_GRID, "--out", str(out))
        assert code == 0
        outputs.append(((out / "transform.csv").read_bytes(), (out / "transform.json").read_bytes()))
    assert outputs[0] == outputs[1]


def test_wigner_files(tmp_path, capsys):
    code, _, _ = run(capsys, "wigner", "--signal", "gaussian:pi", "--normalize", "--grid", SMALL_GRID,
                     "--out", str(tmp_path))
    assert code == 0
    for name in ("wigner.csv", "wigner.pgm", "wigner.json", "wigner_marginal_x.csv", "wigner_marginal_xi.csv"):
        assert (tmp_path / name).exists(), name
    meta = json.loads((tmp_path / "wigner.json").read_text())
    assert meta["max"] == pytest.approx(2.0, rel=1e-6)
    assert meta["mass"] == pytest.approx(1.0, abs=1e-6)
    assert meta["form"] == "standard"


def test_wtheta_with_standard_pair_equals_wigner(tmp_path, capsys):
    print("🧪 Testing ϑ-Wigner output...")
    assert run(capsys, "wigner", "--signal", "hermite:1", "--grid", SMALL_GRID, "--out", str(tmp_path))[0] == 0
    code, stdout, _ = run(capsys, "wtheta", "--signal", "hermite:1", "--s1", "I", "--s2", "J",
                          "--grid", SMALL_GRID, "--out", str(tmp_path), "--json")
    assert code == 0
    assert (tmp_path / "wtheta.csv").read_bytes() == (tmp_path / "wigner.csv").read_bytes()
    report = json.loads(stdout)
    assert report["form"] == "nonstandard"
    assert report["marginal_l1"]["x"] <= 1e-2
    assert report["marginal_l1"]["xi"] <= 1e-2


def test_wtheta_marginal_tolerance(tmp_path, capsys):
    args = ["wtheta", "--signal", "hermite:1", "--s1", "I", "--s2", "fresnel:2", "--grid", SMALL_GRID,
            "--out", str(tmp_path), "--json"]
    code, stdout, _ = run(capsys, *args, "--tol", "marginal_l1=1.0")
    assert code == 0
    report = json.loads(stdout)
    assert report["marginal_tol"] == 1.0
    assert report["marginal_ok"] is True
    strict = json.loads(run(capsys, *args, "--tol", "marginal_l1=1e-12")[1])
    assert strict["marginal_ok"] is False
    assert json.loads((tmp_path / "wtheta.json").read_text())["marginal_ok"] is False


def test_matrix_file_uses_symplectic_tolerance(tmp_path, capsys):
    from symplectic_core import frft_matrix
    path = tmp_path / "rounded.json"
    entries = np.round(frft_matrix(np.pi / 3).entries, 6).ravel().tolist()
    path.write_text(json.dumps({"n": 1, "entries": entries}))
    args = ["transform", "--signal", "gaussian:pi", "--matrix", str(path), "--grid", SMALL_GRID,
            "--out", str(tmp_path / "out")]
    code, _, stderr = run(capsys, *args)
    assert code == 4
    assert error_of(stderr)["error"] == "NotSymplectic"
    assert run(capsys, *args, "--tol", "symplectic=1e-5")[0] == 0


def test_radon(tmp_path, capsys):
    code, _, _ = run(capsys, "radon", "--signal", "gaussian:pi", "--normalize", "--a", "1", "--b", "0",
                     "--offsets", "-2:0.125:33", "--grid", SMALL_GRID, "--out", str(tmp_path))
    assert code == 0
    assert len((tmp_path / "radon.csv").read_text().splitlines()) == 34
    meta = json.loads((tmp_path / "radon.json").read_text())
    assert meta["total"] == pytest.approx(1.0, abs=1e-3)


def test_covariance(tmp_path, capsys):
    code, stdout, _ = run(capsys, "covariance", "--signal", "gaussian:pi", "--normalize", "--s1", "I",
                          "--s2", "J", "--grid", SMALL_GRID, "--out", str(tmp_path), "--json")
    assert code == 0
    report = json.loads(stdout)
    assert np.allclose(report["sigma"], np.eye(2) / (4.0 * np.pi), atol=1e-6)
    assert report["psd"] is True
    assert json.loads((tmp_path / "covariance.json").read_text()) == report


def test_covariance_of_separable_signal(tmp_path, capsys):
    from lct_engine import Grid, SeparableSignal
    from signal_io import write_separable_csv
    g = GaussianSpec(alpha=np.pi, amplitude=2.0 ** 0.25).on_grid(Grid.symmetric(6.0, 128))
    path = tmp_path / "product.csv"
    write_separable_csv(SeparableSignal.from_product(g, g), path)
    code, stdout, _ = run(capsys, "covariance", "--signal", str(path), "--s1", "I", "--s2", "J",
                          "--out", str(tmp_path / "out"), "--json")
    assert code == 0
    report = json.loads(stdout)
    assert np.allclose(report["sigma"], np.eye(4) / (4.0 * np.pi), atol=1e-6)
    assert report["psd"] is True
    assert report["scalar_gap"] is None


def test_verify_single_signal(tmp_path, capsys):
    print("🧪 Testing verify...")
    code, _, _ = run(capsys, "verify", "heisenberg", "--signal", "gaussian:pi", "--s1", "I", "--s2", "J",
                     "--out", str(tmp_path))
    assert code == 0
    report = json.loads((tmp_path / "verify_heisenberg.json").read_text())
    assert report["summary"] == {"pass": 1, "fail": 0, "skipped": 0}


def test_verify_failure_exits_one(tmp_path, capsys):
    """The fitted growth rate of the rectangle sits just above 2πR, so a zero-width band fails"""
    args = ["verify", "paley-wiener", "--signal", "rect:1", "--s1", "I", "--s2", "J", "--out", str(tmp_path)]
    assert run(capsys, *args)[0] == 0
    assert run(capsys, *args, "--tol", "paley_wiener_rate=1e-12")[0] == 1


def test_verify_hardy_params(tmp_path, capsys):
    code, stdout, _ = run(capsys, "verify", "hardy", "--alpha", "2*pi", "--beta", "2*pi", "--matrix", "J",
                          "--out", str(tmp_path), "--json")
    assert code == 0
    assert json.loads(stdout)["classification"] == "Supercritical"
    saved = json.loads((tmp_path / "verify_hardy_params.json").read_text())
    assert saved["threshold"] == pytest.approx(np.pi ** 2)


def test_verify_single_signal_counts_skips(tmp_path, capsys):
    code, _, _ = run(capsys, "verify", "heisenberg", "--signal", "rect:1", "--s1", "I", "--s2", "J",
                     "--out", str(tmp_path))
    assert code == 1
    report = json.loads((tmp_path / "verify_heisenberg.json").read_text())
    assert report["summary"] == {"pass": 0, "fail": 0, "skipped": 1}
    assert report["strict"] is True


def test_verify_all_is_reproducible(tmp_path, capsys):
    """A Gaussian-only corpus never exercises Paley–Wiener, so the run is not ok"""
    corpus = tmp_path / "corpus"
    corpus.mkdir()
    (corpus / "corpus.json").write_text(json.dumps({"signals": [{"name": "gaussian", "spec": "gaussian:pi"}]}))
    reports = []
    for workers in ("1", "4"):
        out = tmp_path / f"out{workers}"
        code, _, _ = run(capsys, "verify", "all", "--corpus", str(corpus), "--grid", "-8:0.03125:512",
                         "--tol", "verification.random_signals=0", "--workers", workers, "--out", str(out))
        assert code == 1
        reports.append((out / "verify_all.json").read_bytes())
    assert reports[0] == reports[1]
    report = json.loads(reports[0])
    assert report["summary"]["fail"] == 0
    assert report["unverified_suites"] == ["paley-wiener"]
    assert report["strict"] is False
    assert len(report["results"]) == 4 * 3


def test_gen(tmp_path, capsys):
    code, _, _ = run(capsys, "gen", "--signal", "hermite:1", "--out", str(tmp_path))
    assert code == 0
    assert read_signal_csv(tmp_path / "hermite_1.csv").n == 1024


def test_gen_refuses_to_overwrite_corpus(tmp_path, capsys):
    from lct_engine import Grid, make_signal
    write_signal_csv(make_signal("hermite", Grid.symmetric(8.0, 1024), order=1), tmp_path / "a.csv")
    code, _, stderr = run(capsys, "gen", "--corpus", str(tmp_path), "--out", str(tmp_path))
    assert code == 3
    assert error_of(stderr)["error"] == "BadParameter"


@pytest.mark.parametrize("argv,expected,error", [
    (["transform", "--signal", "gaussian:pi", "--matrix", "rotate:1"], 2, "SpecParseError"),
    (["transform", "--signal", "gaussian:pi"], 2, "SpecParseError"),
    (["wigner", "--signal", "gaussian:pi", "--grid", "1:2"], 2, "SpecParseError"),
    (["wigner", "--signal", "gaussian:pi", "--config", "does-not-exist.json"], 2, "SpecParseError"),
    (["verify", "rs", "--signal", "gaussian:pi", "--s1", "I"], 2, "SpecParseError"),
    (["transform", "--signal", "gaussian:pi", "--matrix", "I"], 3, "NotFree"),
    (["wtheta", "--signal", "gaussian:pi", "--s1", "J", "--s2", "J"], 3, "SingularCoupling"),
    (["transform", "--signal", "rect:20", "--matrix", "J"], 3, "BadParameter"),
])
def test_error_exit_codes(tmp_path, capsys, argv, expected, error):
    print("🧪 Testing exit codes...")
    code, _, stderr = run(capsys, *argv, "--out", str(tmp_path))
    assert code == expected
    payload = error_of(stderr)
    assert payload["error"] == error
    assert payload["exit_code"] == expected


def test_argparse_errors_exit_two(capsys):
    assert run(capsys)[0] == 2
    assert run(capsys, "verify", "hudson")[0] == 2


def test_readme_features_name_real_commands():
    """Each feature header names subcommands (and verify suites) the CLI actually has"""
    readme = (Path(__file__).parent / "README.md").read_text(encoding="utf-8")
    headers = re.findall(r"^### \d+\. \*\*.+?\*\* \((.+)\)$", readme, flags=re.MULTILINE)
    assert len(headers) == 5
    sub = next(a for a in build_parser()._actions if isinstance(a, argparse._SubParsersAction))
    for header in headers:
        for token in re.findall(r"`([^`]+)`", header):
            words = token.replace("lct_cli.py", "").split()
            assert words[0] in sub.choices, token
            if len(words) > 1:
                assert words[0] == "verify"
                assert set(words[1].split("|")) == set(SUITES) | {"all"}


def main_runner():
    """Run all tests"""
    print("🚀 lctlab CLI Test Suite")
    print("=" * 50)
    return pytest.main([__file__, "-v"])


if __name__ == "__main__":
    sys.exit(main_runner())
