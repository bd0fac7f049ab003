#!/usr/bin/env python3
"""
Verification Suite
==================

Runs the uncertainty-principle checks over a corpus of signals and a list of
matrix pairs. Every (signal, check, pair) combination is an independent task
on a thread pool; the report is sorted afterwards so its JSON form does not
depend on scheduling.

Status per check:

* ``pass``     the inequality / classification holds within tolerance
* ``fail``     it does not, or a numeric sanity check tripped
* ``skipped``  a precondition of the check is not met (heavy tails, no
               Gaussian envelope, under-sampled chirp, ...)

A report is ``ok`` when nothing failed and every requested suite passed on at
least one signal. Skips count as failures in strict mode, which the CLI uses
for a single ``--signal``.
"""

from concurrent.futures import ThreadPoolExecutor, as_completed
from enum import Enum
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import attrs
from tqdm import tqdm

from config_loader import ConfigLoader
from lct_engine import SampledSignal
from lct_errors import BadParameter, NumericError, PreconditionError
from lct_logging import get_logger
from symplectic_core import TOL_SYMPL, SymplecticMatrix, parse_matrix_spec
from uncertainty import (HardyKind, hardy_fit, heisenberg_check,
                         paley_wiener_verify, rs_check)

logger = get_logger("verify")

SUITES = ("heisenberg", "rs", "hardy", "paley-wiener")


class CheckStatus(Enum):
    PASS = "pass"
    FAIL = "fail"
    SKIPPED = "skipped"


@attrs.define(frozen=True)
class CheckResult:
    """Outcome of one check on one signal and one matrix pair"""
    signal: str = attrs.field(validator=attrs.validators.instance_of(str))
    check: str = attrs.field(validator=attrs.validators.in_(SUITES))
    pair: str = attrs.field(validator=attrs.validators.instance_of(str))
    status: CheckStatus = attrs.field(validator=attrs.validators.instance_of(CheckStatus))
    metrics: Dict[str, Any] = attrs.field(factory=dict)
    message: str = ""

    @property
    def sort_key(self) -> Tuple[str, str, str]:
        return (self.signal, self.check, self.pair)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "signal": self.signal,
            "check": self.check,
            "pair": self.pair,
            "status": self.status.value,
            "metrics": self.metrics,
            "message": self.message,
        }


@attrs.define(frozen=True)
class MatrixPair:
    label: str
    s1: SymplecticMatrix
    s2: SymplecticMatrix

    @classmethod
    def from_specs(cls, s1: str, s2: str, tol: float = TOL_SYMPL) -> "MatrixPair":
        return cls(f"{s1}|{s2}", parse_matrix_spec(s1, tol=tol), parse_matrix_spec(s2, tol=tol))


def resolve_suites(name: str) -> List[str]:
    if name == "all":
        return list(SUITES)
    if name not in SUITES:
        raise BadParameter(f"unknown suite {name!r}; choose from {', '.join(SUITES)} or all")
    return [name]


# --- individual checks ---

def _heisenberg(f: SampledSignal, pair: MatrixPair, tol: Dict[str, float], settings: Dict[str, Any]):
    report = heisenberg_check(f, pair.s1, pair.s2, oversample=settings["oversample"])
    ok = report.slack >= -tol["heisenberg_slack"] * report.rhs
    saturated = abs(report.ratio) <= tol["saturation"]
    metrics = {"lhs": report.lhs, "rhs": report.rhs, "slack": report.slack, "slack_ratio": report.ratio,
               "saturated": saturated}
    return ok, metrics, "saturated" if saturated else ""


def _rs(f: SampledSignal, pair: MatrixPair, tol: Dict[str, float], settings: Dict[str, Any]):
    report = rs_check(f, pair.s1, pair.s2, normalize_signal=True,
                      normalization_tol=tol["normalization"], centering_tol=tol["centering"])
    ok = report.is_psd(tol["psd"]) and report.scalar_gap >= -tol["psd"]
    metrics = {
        "min_eig": report.min_eig,
        "scalar_gap": report.scalar_gap,
        "upsilon": report.upsilon.tolist(),
    }
    return ok, metrics, ""


def _hardy(f: SampledSignal, pair: MatrixPair, tol: Dict[str, float], settings: Dict[str, Any]):
    result = hardy_fit(f, pair.s2, S1=pair.s1, rel_tol=tol["hardy_fit"],
                       r2_min=tol["hardy_r_squared"], oversample=settings["oversample"])
    metrics = {
        "alpha": float(result.alpha),
        "beta": float(result.beta),
        "threshold": float(result.threshold),
        "classification": result.kind.value,
    }
    # only the zero signal may decay faster than the critical Gaussian on both sides
    ok = result.kind is not HardyKind.SUPERCRITICAL
    return ok, metrics, result.kind.value


def _paley_wiener(f: SampledSignal, pair: MatrixPair, tol: Dict[str, float], settings: Dict[str, Any]):
    report = paley_wiener_verify(f, pair.s2, xi_samples=settings["pw_xi"], eta_samples=settings["pw_eta"],
                                 orders=settings["bound_orders"], rate_axis=settings["pw_rate_axis"],
                                 rate_tol=tol["paley_wiener_rate"], bound_tol=tol["paley_wiener_bound"])
    ok = all(report.bound_satisfied.values()) and report.zero_order_ok and report.rate_ok
    metrics = {
        "support_radius": report.support_radius,
        "fitted_rate": report.fitted_eta_rate,
        "expected_rate": report.expected_rate,
        "rate_ok": report.rate_ok,
        "zero_order_ok": report.zero_order_ok,
        "bound_constants": {str(k): v for k, v in report.bound_constants.items()},
        "refined_constants": {str(k): v for k, v in report.refined_constants.items()},
        "bound_satisfied": {str(k): v for k, v in report.bound_satisfied.items()},
    }
    failed = [name for name, good in (("rate", report.rate_ok), ("zero-order bound", report.zero_order_ok))
              if not good]
    failed += [f"C_{k}" for k, good in report.bound_satisfied.items() if not good]
    return ok, metrics, ", ".join(failed)


CHECKS: Dict[str, Callable] = {
    "heisenberg": _heisenberg,
    "rs": _rs,
    "hardy": _hardy,
    "paley-wiener": _paley_wiener,
}


def run_single_check(name: str, f: SampledSignal, check: str, pair: MatrixPair,
                     tolerances: Dict[str, float], settings: Dict[str, Any]) -> CheckResult:
    """Run one check, mapping precondition errors to ``skipped`` and numeric errors to ``fail``"""
    try:
        ok, metrics, message = CHECKS[check](f, pair, tolerances, settings)
    except PreconditionError as e:
        return CheckResult(name, check, pair.label, CheckStatus.SKIPPED, {"error": type(e).__name__}, e.message)
    except NumericError as e:
        return CheckResult(name, check, pair.label, CheckStatus.FAIL, {"error": type(e).__name__}, e.message)
    status = CheckStatus.PASS if ok else CheckStatus.FAIL
    return CheckResult(name, check, pair.label, status, metrics, message)


def _settings(config: ConfigLoader) -> Dict[str, Any]:
    return {
        "oversample": config.get("transform", "oversample", 2),
        "pw_xi": config.get("verification", "pw_xi"),
        "pw_eta": config.get("verification", "pw_eta"),
        "bound_orders": config.get("verification", "bound_orders"),
        "pw_rate_axis": config.get("verification", "pw_rate_axis"),
    }


def run_checks(signals: Sequence[Tuple[str, SampledSignal]], pairs: Sequence[Tuple[str, str]],
               suites: Sequence[str], config: ConfigLoader,
               max_workers: Optional[int] = None, show_progress: Optional[bool] = None,
               strict: Optional[bool] = None) -> Dict[str, Any]:
    """Fan the checks out over a thread pool and collect a deterministic report

    ``strict`` counts skipped checks as failures; it defaults to
    ``verification.skipped_is_failure``.
    """
    tolerances = config.get_section("tolerances")
    matrix_pairs = [MatrixPair.from_specs(s1, s2, tol=tolerances["symplectic"]) for s1, s2 in pairs]
    settings = _settings(config)
    workers = max_workers or config.get("performance", "max_workers", 4)
    progress = config.get("logging", "show_progress", True) if show_progress is None else show_progress

    tasks = [(name, f, check, pair) for name, f in signals for check in suites for pair in matrix_pairs]
    logger.info(f"running {len(tasks)} checks ({', '.join(suites)}) with {workers} workers")

    results: List[CheckResult] = []
    with ThreadPoolExecutor(max_workers=workers) as executor:
        future_to_task = {
            executor.submit(run_single_check, name, f, check, pair, tolerances, settings): (name, check, pair)
            for name, f, check, pair in tasks
        }
        with tqdm(total=len(tasks), desc="Verifying", unit="check", disable=not progress) as pbar:
            for future in as_completed(future_to_task):
                name, check, pair = future_to_task[future]
                result = future.result()
                results.append(result)
                pbar.set_description(f"{check}: {name}")
                pbar.update(1)
                if result.status is CheckStatus.FAIL:
                    logger.warning(f"{check} failed on {name} ({pair.label}) {result.message}")

    results.sort(key=lambda r: r.sort_key)
    summary = {status.value: sum(1 for r in results if r.status is status) for status in CheckStatus}
    unverified = [s for s in suites if not any(r.check == s and r.status is CheckStatus.PASS for r in results)]
    if strict is None:
        strict = bool(config.get("verification", "skipped_is_failure", False))
    return {
        "suites": list(suites),
        "pairs": [p.label for p in matrix_pairs],
        "signals": [name for name, _ in signals],
        "results": [r.to_dict() for r in results],
        "summary": summary,
        "strict": strict,
        "unverified_suites": unverified,
        "ok": report_ok(summary, unverified, strict),
    }


def report_ok(summary: Dict[str, int], unverified: Sequence[str], strict: bool) -> bool:
    """No failures and every suite passed at least once; in strict mode no skips either"""
    if summary[CheckStatus.FAIL.value] or unverified:
        return False
    return not (strict and summary[CheckStatus.SKIPPED.value])
