#!/usr/bin/env python3
"""
Test Config Loader
==================

Defaults, file merging, ``--tol`` style overrides and validation.
"""

import json
import sys
from pathlib import Path

import pytest

from config_loader import ConfigLoader
from lct_errors import SpecParseError

BUNDLED_CONFIG = Path(__file__).parent / "lct_config.json"


def test_defaults_without_file(tmp_path):
    print("🧪 Testing defaults...")
    path = tmp_path / "none.json"
    config = ConfigLoader(str(path))
    assert config.get("grid", "n") == 1024
    assert config.get("tolerances", "psd") == 1e-8
    assert config.get("grid", "missing", "fallback") == "fallback"
    assert not path.exists()
    ConfigLoader(str(path), create_if_missing=True)
    assert path.exists()


def test_bundled_config_matches_defaults():
    assert ConfigLoader(str(BUNDLED_CONFIG)).config == ConfigLoader(None).config


def test_file_values_are_merged(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps({"grid": {"n": 2048, "bogus": 1}, "tolerances": {"psd": 1e-6}, "extra": {}}))
    config = ConfigLoader(str(path))
    assert config.get("grid", "n") == 2048
    assert config.get("grid", "dx") == 0.015625
    assert config.get("grid", "bogus") is None
    assert config.get("tolerances", "psd") == 1e-6
    assert config.get_section("extra") == {}


def test_malformed_file_falls_back(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{ not json")
    assert ConfigLoader(str(path)).get("grid", "n") == 1024


def test_overrides():
    print("🧪 Testing overrides...")
    config = ConfigLoader(None)
    config.apply_overrides(["psd=1e-6", "performance.max_workers=2", "logging.show_progress=false"])
    assert config.get("tolerances", "psd") == 1e-6
    assert config.get("performance", "max_workers") == 2
    assert config.get("logging", "show_progress") is False
    for bad in (["psd"], ["nonexistent=1"], ["psd=abc"], ["grid.nope=3"]):
        with pytest.raises(SpecParseError):
            config.apply_overrides(bad)


def test_run_defaults_and_sections():
    config = ConfigLoader(None)
    defaults = config.get_run_defaults()
    assert defaults["grid"] == (-8.0, 0.015625, 1024)
    assert defaults["oversample"] == 2
    assert defaults["seed"] == 42
    assert defaults["interpolation_order"] == 3
    section = config.get_section("tolerances")
    section["psd"] = 1.0
    assert config.get("tolerances", "psd") == 1e-8


def test_tolerance_and_verification_keys():
    """Every tolerance key has a consumer; the verification section carries the check grids"""
    config = ConfigLoader(None)
    assert set(config.get_section("tolerances")) == {
        "symplectic", "imaginary_residual", "psd", "heisenberg_slack", "saturation",
        "hardy_params", "hardy_fit", "hardy_r_squared", "marginal_l1",
        "paley_wiener_rate", "paley_wiener_bound", "normalization", "centering",
    }
    assert config.get("verification", "pw_eta") == [-2.0, -1.0, 0.0, 1.0, 2.0]
    assert config.get("verification", "pw_rate_axis") == [4.0, 6.0, 8.0]
    assert config.get("verification", "skipped_is_failure") is False
    with pytest.raises(SpecParseError):
        config.apply_overrides(["radon_l1=1e-3"])


def test_validation():
    config = ConfigLoader(None)
    assert config.validate_config()
    config.set("grid", "n", 4)
    assert not config.validate_config()
    config = ConfigLoader(None)
    config.set("phase_space", "interpolation_order", 2)
    assert not config.validate_config()
    config = ConfigLoader(None)
    config.set("tolerances", "psd", -1.0)
    assert not config.validate_config()


def test_save_and_reload(tmp_path):
    path = tmp_path / "saved.json"
    config = ConfigLoader(str(path))
    config.set("verification", "seed", 7)
    config.save_config()
    assert ConfigLoader(str(path)).get("verification", "seed") == 7


def main():
    """Run all tests"""
    print("🚀 Config Loader Test Suite")
    print("=" * 50)
    return pytest.main([__file__, "-v"])


if __name__ == "__main__":
    sys.exit(main())
