#!/usr/bin/env python3
"""
Transform Benchmarks
====================

Times the desk-scale reference workloads and records memory use:

* Gaussian LCT oracle (1024 samples on [−8, 8), four matrices, < 1 s each)
* Paley–Wiener growth check for the unit rectangle under J (< 10 s)
* signal CSV parsing of a 10⁶-row file (< 2 s)
* ``verify all`` over the bundled corpus (< 120 s)

Results are written to ``benchmark_results.json``.
"""

import argparse
import os
import platform
import tempfile
import time
from datetime import datetime
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

import numpy as np
import psutil

from config_loader import ConfigLoader
from lct_engine import (GaussianSpec, Grid, SampledSignal, gaussian_lct_closed,
                        lct_fast, make_signal)
from lct_errors import AliasRisk
from signal_io import load_corpus, read_signal_csv, write_signal_csv, write_sidecar
from symplectic_core import parse_matrix_spec
from uncertainty import paley_wiener_verify
from verify_suite import SUITES, run_checks

ORACLE_MATRICES = ("J", "frft:pi/3", "fresnel:1", "lorentz:1")


class TransformBenchmark:
    """Runtime and memory measurements for the reference workloads"""

    def __init__(self, output_file: str = "benchmark_results.json", config: Optional[ConfigLoader] = None):
        self.output_file = output_file
        self.config = config or ConfigLoader()
        self.results: List[Dict[str, Any]] = []
        self.process = psutil.Process()

    def get_memory_usage(self) -> Dict[str, float]:
        """Get current memory usage in MB"""
        memory_info = self.process.memory_info()
        return {
            "rss_mb": memory_info.rss / 1024 / 1024,
            "vms_mb": memory_info.vms / 1024 / 1024,
            "percent": self.process.memory_percent()
        }

    def get_system_info(self) -> Dict[str, Any]:
        """Get system information for benchmarking context"""
        return {
            "cpu_count": os.cpu_count(),
            "memory_total_gb": psutil.virtual_memory().total / 1024 / 1024 / 1024,
            "platform": platform.system(),
            "python_version": platform.python_version()
        }

    def _timed(self, name: str, limit: float, workload: Callable[[], Dict[str, Any]]) -> Dict[str, Any]:
        print(f"\n⏱️  {name} (limit {limit:g}s)...")
        memory_before = self.get_memory_usage()
        start = time.perf_counter()
        try:
            details = workload()
            elapsed = time.perf_counter() - start
            success = True
        except Exception as e:
            elapsed = time.perf_counter() - start
            details = {"error": f"{type(e).__name__}: {e}"}
            success = False
        memory_after = self.get_memory_usage()
        result = {
            "workload": name,
            "execution_time_seconds": elapsed,
            "limit_seconds": limit,
            "within_limit": success and elapsed <= limit,
            "memory_before_mb": memory_before["rss_mb"],
            "memory_after_mb": memory_after["rss_mb"],
            "memory_increase_mb": memory_after["rss_mb"] - memory_before["rss_mb"],
            "success": success,
            **details,
        }
        mark = "✅" if result["within_limit"] else "❌"
        print(f"  {mark} {elapsed:.3f}s, memory {memory_before['rss_mb']:.1f}MB → {memory_after['rss_mb']:.1f}MB")
        if not success:
            print(f"  ❌ Failed: {details['error']}")
        self.results.append(result)
        return result

    def benchmark_gaussian_oracle(self):
        grid = Grid.symmetric(8.0, 1024)
        spec = GaussianSpec(alpha=np.pi)
        f = spec.on_grid(grid)
        for matrix in ORACLE_MATRICES:
            S = parse_matrix_spec(matrix)

            def workload(S=S):
                oversample = 2
                try:
                    g = lct_fast(f, S, oversample=oversample)
                except AliasRisk as e:
                    oversample = e.required_factor
                    g = lct_fast(f, S, oversample=oversample)
                expected = gaussian_lct_closed(spec, S).evaluate(g.x)
                error = float(np.linalg.norm(g.values - expected) / np.linalg.norm(expected))
                return {"relative_l2_error": error, "oversample": oversample}

            self._timed(f"gaussian_oracle[{matrix}]", 1.0, workload)

    def benchmark_paley_wiener(self):
        f = make_signal("rect", Grid.symmetric(8.0, 1024), radius=1.0)

        def workload():
            report = paley_wiener_verify(f, parse_matrix_spec("J"))
            return {"fitted_rate": report.fitted_eta_rate, "expected_rate": 2.0 * np.pi * report.support_radius}

        self._timed("paley_wiener[rect:1, J]", 10.0, workload)

    def benchmark_csv_read(self, rows: int = 1_000_000):
        grid = Grid(-rows / 2 * 1e-3, 1e-3, rows)
        rng = np.random.default_rng(0)
        signal = SampledSignal.on_grid(grid, rng.normal(size=rows) + 1j * rng.normal(size=rows))
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "large.csv"
            write_signal_csv(signal, path)
            self._timed(f"read_signal_csv[{rows} rows]", 2.0, lambda: {"rows": read_signal_csv(path).n})

    def benchmark_verify_all(self, corpus_dir: str):
        grid = Grid(*self.config.get_run_defaults()["grid"])

        def workload():
            signals = load_corpus(corpus_dir, grid)
            pairs = [tuple(p) for p in self.config.get("verification", "pairs")]
            report = run_checks(signals, pairs, list(SUITES), self.config, show_progress=False)
            return {"summary": report["summary"], "ok": report["ok"]}

        self._timed(f"verify_all[{corpus_dir}]", 120.0, workload)

    def run_comprehensive_benchmark(self, corpus_dir: str, skip_verify: bool = False) -> Dict[str, Any]:
        print("=" * 80)
        print("🚀 LCT TOOLKIT PERFORMANCE BENCHMARK")
        print("=" * 80)
        system_info = self.get_system_info()
        print(f"System: {system_info['cpu_count']} CPUs, {system_info['memory_total_gb']:.1f}GB RAM")

        self.benchmark_gaussian_oracle()
        self.benchmark_paley_wiener()
        self.benchmark_csv_read()
        if not skip_verify:
            self.benchmark_verify_all(corpus_dir)

        payload = {
            "benchmark_date": datetime.now().isoformat(),
            "system_info": system_info,
            "benchmarks": self.results,
            "summary": self._generate_summary(),
        }
        write_sidecar(self.output_file, payload)
        self._print_summary(payload["summary"])
        print(f"\n💾 Results saved to {self.output_file}")
        return payload

    def _generate_summary(self) -> Dict[str, Any]:
        within = [r for r in self.results if r["within_limit"]]
        slowest = max(self.results, key=lambda r: r["execution_time_seconds"]) if self.results else None
        return {
            "total_benchmarks": len(self.results),
            "within_limit": len(within),
            "slowest_workload": slowest["workload"] if slowest else None,
            "slowest_time_seconds": slowest["execution_time_seconds"] if slowest else None,
            "peak_memory_mb": max((r["memory_after_mb"] for r in self.results), default=0.0),
        }

    def _print_summary(self, summary: Dict[str, Any]):
        print("\n" + "=" * 80)
        print("📊 BENCHMARK SUMMARY")
        print("=" * 80)
        print(f"📈 Within limit: {summary['within_limit']}/{summary['total_benchmarks']}")
        if summary["slowest_workload"]:
            print(f"🐌 Slowest: {summary['slowest_workload']} ({summary['slowest_time_seconds']:.2f}s)")
        print(f"💾 Peak memory: {summary['peak_memory_mb']:.1f}MB")


def main():
    parser = argparse.ArgumentParser(description="Benchmark the LCT toolkit reference workloads")
    parser.add_argument("--corpus", default="signals", help="Corpus directory for the verify workload")
    parser.add_argument("--output", default="benchmark_results.json", help="Output JSON file")
    parser.add_argument("--config", default="lct_config.json", help="Configuration file")
    parser.add_argument("--skip-verify", action="store_true", help="Skip the verify-all workload")
    args = parser.parse_args()

    benchmark = TransformBenchmark(args.output, ConfigLoader(args.config))
    benchmark.run_comprehensive_benchmark(args.corpus, args.skip_verify)


if __name__ == "__main__":
    main()
