#!/usr/bin/env python3
"""
Configuration Loader
====================

Loads ``lct_config.json`` on top of built-in defaults. Every tolerance, grid
default and worker count used by the toolkit lives here so runs are
reproducible from a single file plus ``--tol key=val`` overrides.
"""

import copy
import json
import os
from typing import Any, Dict, List, Optional

from lct_errors import SpecParseError
from lct_logging import get_logger

logger = get_logger("config")

DEFAULT_CONFIG_FILE = "lct_config.json"


class ConfigLoader:
    """Load and manage configuration settings for transforms and verification"""

    def __init__(self, config_file: Optional[str] = DEFAULT_CONFIG_FILE, create_if_missing: bool = False):
        self.config_file = config_file
        self.config = self._load_default_config()
        if config_file:
            self._load_config_file(create_if_missing)

    def _load_default_config(self) -> Dict[str, Any]:
        """Load default configuration values"""
        return {
            "grid": {
                "x0": -8.0,
                "dx": 0.015625,
                "n": 1024
            },
            "transform": {
                "oversample": 2,
                "support_floor": 1e-10
            },
            "tolerances": {
                "symplectic": 1e-10,
                "imaginary_residual": 1e-8,
                "psd": 1e-8,
                "heisenberg_slack": 1e-9,
                "saturation": 1e-3,
                "hardy_params": 1e-6,
                "hardy_fit": 1e-2,
                "hardy_r_squared": 0.99,
                "marginal_l1": 1e-3,
                "paley_wiener_rate": 0.05,
                "paley_wiener_bound": 0.5,
                "normalization": 1e-6,
                "centering": 1e-6
            },
            "phase_space": {
                "interpolation_order": 3,
                "row_chunk": 256
            },
            "verification": {
                "seed": 42,
                "random_signals": 4,
                "pairs": [["I", "J"], ["I", "fresnel:2"], ["frft:pi/3", "frft:5*pi/6"]],
                "pw_xi": [-2.0, -1.0, 0.0, 1.0, 2.0],
                "pw_eta": [-2.0, -1.0, 0.0, 1.0, 2.0],
                "pw_rate_axis": [4.0, 6.0, 8.0],
                "bound_orders": [1, 2, 4],
                "skipped_is_failure": False
            },
            "performance": {
                "max_workers": 4
            },
            "logging": {
                "log_level": "INFO",
                "show_progress": True
            },
            "paths": {
                "output_dir": "lct_output",
                "corpus_dir": "signals"
            }
        }

    def _load_config_file(self, create_if_missing: bool):
        """Load configuration from JSON file if it exists"""
        if os.path.exists(self.config_file):
            try:
                with open(self.config_file, 'r') as f:
                    file_config = json.load(f)
                self._merge_config(file_config)
                logger.debug(f"Loaded configuration from {self.config_file}")
            except (json.JSONDecodeError, IOError) as e:
                logger.warning(f"Could not load config file {self.config_file}: {e}; using defaults")
        else:
            logger.debug(f"Config file {self.config_file} not found, using default configuration")
            if create_if_missing:
                self.save_config()

    def _merge_config(self, file_config: Dict[str, Any]):
        """Merge file configuration with defaults"""
        for section, settings in file_config.items():
            if section in self.config:
                if isinstance(settings, dict):
                    for key, value in settings.items():
                        if key in self.config[section]:
                            self.config[section][key] = value
                        else:
                            logger.warning(f"Unknown config key: {section}.{key}")
                else:
                    self.config[section] = settings
            else:
                logger.warning(f"Unknown config section: {section}")

    def get(self, section: str, key: str, default: Any = None) -> Any:
        """Get configuration value by section and key"""
        try:
            return self.config[section][key]
        except KeyError:
            return default

    def get_section(self, section: str) -> Dict[str, Any]:
        """Get a copy of an entire configuration section"""
        return copy.deepcopy(self.config.get(section, {}))

    def set(self, section: str, key: str, value: Any):
        """Set configuration value"""
        if section not in self.config:
            self.config[section] = {}
        self.config[section][key] = value

    def apply_overrides(self, overrides: List[str], section: str = "tolerances"):
        """Apply ``key=val`` (or ``section.key=val``) strings, e.g. from ``--tol``"""
        for item in overrides or []:
            if "=" not in item:
                raise SpecParseError(f"override must look like key=value, got {item!r}")
            key, raw = item.split("=", 1)
            target, name = (key.split(".", 1) if "." in key else (section, key))
            if name not in self.config.get(target, {}):
                raise SpecParseError(f"unknown setting {target}.{name}")
            current = self.config[target][name]
            try:
                value = type(current)(raw) if not isinstance(current, bool) else raw.lower() in ("1", "true", "yes")
            except (TypeError, ValueError):
                raise SpecParseError(f"cannot convert {raw!r} for {target}.{name}")
            self.config[target][name] = value

    def save_config(self):
        """Save current configuration to file"""
        try:
            with open(self.config_file, 'w') as f:
                json.dump(self.config, f, indent=2)
            logger.info(f"Configuration saved to {self.config_file}")
        except IOError as e:
            logger.error(f"Error saving configuration: {e}")

    def get_run_defaults(self) -> Dict[str, Any]:
        """Flat view of the settings a RunConfig is built from"""
        return {
            "grid": (self.get("grid", "x0"), self.get("grid", "dx"), self.get("grid", "n")),
            "oversample": self.get("transform", "oversample", 2),
            "seed": self.get("verification", "seed", 42),
            "output_dir": self.get("paths", "output_dir", "lct_output"),
            "max_workers": self.get("performance", "max_workers", 4),
            "interpolation_order": self.get("phase_space", "interpolation_order", 3),
            "tolerances": self.get_section("tolerances"),
        }

    def print_config(self):
        """Print current configuration"""
        print("Current Configuration:")
        print("=" * 50)
        for section, settings in self.config.items():
            print(f"\n[{section.upper()}]")
            if isinstance(settings, dict):
                for key, value in settings.items():
                    print(f"  {key}: {value}")
            else:
                print(f"  {settings}")

    def validate_config(self) -> bool:
        """Validate configuration values"""
        errors = []

        n = self.get("grid", "n")
        if not isinstance(n, int) or n < 8:
            errors.append("grid.n must be an integer >= 8")
        if self.get("grid", "dx", 0) <= 0:
            errors.append("grid.dx must be positive")

        oversample = self.get("transform", "oversample")
        if not isinstance(oversample, int) or oversample < 1:
            errors.append("transform.oversample must be an integer >= 1")

        if self.get("phase_space", "interpolation_order") not in (1, 3):
            errors.append("phase_space.interpolation_order must be 1 (bilinear) or 3 (cubic)")

        max_workers = self.get("performance", "max_workers")
        if max_workers < 1 or max_workers > 32:
            errors.append("max_workers must be between 1 and 32")

        for key, value in self.config.get("tolerances", {}).items():
            if not isinstance(value, (int, float)) or value <= 0:
                errors.append(f"tolerances.{key} must be a positive number")

        if errors:
            logger.error("Configuration validation errors:")
            for error in errors:
                logger.error(f"  - {error}")
            return False

        return True


if __name__ == "__main__":
    config = ConfigLoader()
    config.print_config()
    print(f"\nConfiguration valid: {config.validate_config()}")
