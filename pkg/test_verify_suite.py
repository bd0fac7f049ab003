#!/usr/bin/env python3
"""
Test Verification Suite
=======================

Per-check status mapping and the deterministic, thread-pooled report.
"""

import json
import sys

import numpy as np
import pytest

from config_loader import ConfigLoader
from lct_engine import GaussianSpec, Grid, SampledSignal, make_signal
from lct_errors import BadParameter
from verify_suite import (SUITES, CheckResult, CheckStatus, MatrixPair,
                          report_ok, resolve_suites, run_checks,
                          run_single_check)

GRID = Grid.symmetric(8.0, 512)


@pytest.fixture(scope="module")
def config():
    return ConfigLoader(None)


@pytest.fixture(scope="module")
def settings(config):
    return {
        "oversample": 2,
        "pw_xi": config.get("verification", "pw_xi"),
        "pw_eta": config.get("verification", "pw_eta"),
        "bound_orders": config.get("verification", "bound_orders"),
        "pw_rate_axis": config.get("verification", "pw_rate_axis"),
    }


def test_resolve_suites():
    assert resolve_suites("all") == list(SUITES)
    assert resolve_suites("rs") == ["rs"]
    with pytest.raises(BadParameter):
        resolve_suites("hudson")


def test_check_result_validation():
    result = CheckResult("g", "rs", "I|J", CheckStatus.PASS, {"min_eig": 0.0})
    assert result.to_dict()["status"] == "pass"
    assert result.sort_key == ("g", "rs", "I|J")
    with pytest.raises(ValueError):
        CheckResult("g", "hudson", "I|J", CheckStatus.PASS)


def test_single_checks(config, settings):
    print("🧪 Testing individual checks...")
    tolerances = config.get_section("tolerances")
    fourier = MatrixPair.from_specs("I", "J")
    assert fourier.label == "I|J"
    gaussian = GaussianSpec(alpha=np.pi).on_grid(GRID)

    passed = run_single_check("g", gaussian, "heisenberg", fourier, tolerances, settings)
    assert passed.status is CheckStatus.PASS
    assert abs(passed.metrics["slack_ratio"]) <= 1e-3

    hardy = run_single_check("g", gaussian, "hardy", MatrixPair.from_specs("frft:pi/3", "frft:5*pi/6"),
                             tolerances, settings)
    assert hardy.status is CheckStatus.PASS
    assert hardy.message == "Critical"

    rect = make_signal("rect", GRID, radius=1.0)
    skipped = run_single_check("rect", rect, "heisenberg", fourier, tolerances, settings)
    assert skipped.status is CheckStatus.SKIPPED
    assert skipped.metrics == {"error": "HeavyTails"}

    flat = run_single_check("rect", rect, "hardy", fourier, tolerances, settings)
    assert flat.status is CheckStatus.SKIPPED
    assert flat.metrics == {"error": "InsufficientDecay"}


def test_run_checks_report(config):
    print("🧪 Testing verification reports...")
    signals = [("hermite1", make_signal("hermite", GRID, order=1)),
               ("gaussian", GaussianSpec(alpha=np.pi).on_grid(GRID))]
    report = run_checks(signals, [("I", "J")], ["heisenberg", "rs"], config, max_workers=2, show_progress=False)
    assert report["ok"]
    assert report["summary"] == {"pass": 4, "fail": 0, "skipped": 0}
    assert [(r["signal"], r["check"]) for r in report["results"]] == [
        ("gaussian", "heisenberg"), ("gaussian", "rs"), ("hermite1", "heisenberg"), ("hermite1", "rs")]
    assert report["pairs"] == ["I|J"]
    assert report["signals"] == ["hermite1", "gaussian"]

    serial = run_checks(signals, [("I", "J")], ["heisenberg", "rs"], config, max_workers=1, show_progress=False)
    assert json.dumps(serial, sort_keys=True) == json.dumps(report, sort_keys=True)


def test_report_needs_a_passing_check(config):
    print("🧪 Testing report verdicts...")
    rect = ("rect", make_signal("rect", GRID, radius=1.0))
    report = run_checks([rect], [("I", "J")], ["heisenberg"], config, max_workers=1, show_progress=False)
    assert report["summary"] == {"pass": 0, "fail": 0, "skipped": 1}
    assert report["unverified_suites"] == ["heisenberg"]
    assert not report["ok"]

    cauchy = ("cauchy", SampledSignal(GRID.x0, GRID.dx, 1.0 / (1.0 + GRID.points ** 2)))
    report = run_checks([cauchy], [("I", "J")], ["hardy"], config, max_workers=1, show_progress=False)
    assert report["summary"]["skipped"] == 1
    assert not report["ok"]


def test_skips_beside_passes(config):
    signals = [("rect", make_signal("rect", GRID, radius=1.0)),
               ("gaussian", GaussianSpec(alpha=np.pi).on_grid(GRID))]
    report = run_checks(signals, [("I", "J")], ["heisenberg"], config, max_workers=1, show_progress=False)
    assert report["summary"] == {"pass": 1, "fail": 0, "skipped": 1}
    assert report["ok"] and not report["strict"]
    strict = run_checks(signals, [("I", "J")], ["heisenberg"], config, max_workers=1, show_progress=False,
                        strict=True)
    assert not strict["ok"]

    configured = ConfigLoader(None)
    configured.apply_overrides(["verification.skipped_is_failure=true"])
    report = run_checks(signals, [("I", "J")], ["heisenberg"], configured, max_workers=1, show_progress=False)
    assert report["strict"] and not report["ok"]


def test_report_ok():
    assert report_ok({"pass": 2, "fail": 0, "skipped": 3}, [], strict=False)
    assert not report_ok({"pass": 2, "fail": 0, "skipped": 3}, [], strict=True)
    assert not report_ok({"pass": 2, "fail": 1, "skipped": 0}, [], strict=False)
    assert not report_ok({"pass": 2, "fail": 0, "skipped": 0}, ["hardy"], strict=False)


def test_paley_wiener_check_reports_failed_parts(config, settings):
    rect = make_signal("rect", GRID, radius=1.0)
    fourier = MatrixPair.from_specs("I", "J")
    tolerances = config.get_section("tolerances")
    passed = run_single_check("rect", rect, "paley-wiener", fourier, tolerances, settings)
    assert passed.status is CheckStatus.PASS
    assert passed.metrics["expected_rate"] == pytest.approx(2.0 * np.pi, rel=0.05)
    assert set(passed.metrics["bound_satisfied"]) == {"1", "2", "4"}

    tolerances["paley_wiener_rate"] = 1e-12
    failed = run_single_check("rect", rect, "paley-wiener", fourier, tolerances, settings)
    assert failed.status is CheckStatus.FAIL
    assert failed.message == "rate"
    assert failed.metrics["rate_ok"] is False


def test_heisenberg_saturation_flag(config, settings):
    tolerances = config.get_section("tolerances")
    fourier = MatrixPair.from_specs("I", "J")
    gaussian = run_single_check("g", GaussianSpec(alpha=np.pi).on_grid(GRID), "heisenberg", fourier,
                                tolerances, settings)
    assert gaussian.metrics["saturated"] is True
    assert gaussian.message == "saturated"
    hermite = run_single_check("h1", make_signal("hermite", GRID, order=1), "heisenberg", fourier,
                               tolerances, settings)
    assert hermite.status is CheckStatus.PASS
    assert hermite.metrics["saturated"] is False


def main():
    """Run all tests"""
    print("🚀 Verification Suite Test Suite")
    print("=" * 50)
    return pytest.main([__file__, "-v"])


if __name__ == "__main__":
    sys.exit(main())
