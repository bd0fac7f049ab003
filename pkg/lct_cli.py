#!/usr/bin/env python3
"""
lctlab Command Line
===================

Linear canonical transforms, phase-space distributions and uncertainty
checks from the shell. Results go to ``--out`` (CSV, PGM and JSON files);
stdout carries a short human summary, or the JSON report with ``--json``.

Exit codes: 0 success, 1 a verification check failed, 2 parse error,
3 precondition error, 4 numeric error. Errors are printed to stderr as a
JSON object.
"""

import argparse
import json
import re
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

import attrs
import numpy as np
from rich.console import Console

from config_loader import DEFAULT_CONFIG_FILE, ConfigLoader
from lct_engine import (Grid, SampledSignal, SeparableSignal, lct,
                        lct_prefactor, make_signal, normalize)
from lct_errors import BadParameter, LctError, NotFree, SpecParseError
from lct_logging import configure_logging, get_logger
from phase_space import (PhaseSpaceDistribution, RadonLineSpec, lct_intensity,
                         marginal, radon_marginal, wigner, wtheta)
from signal_io import (emit_heatmap, load_corpus, parse_signal_spec,
                       read_separable_csv, write_distribution_csv,
                       write_marginal_csv, write_separable_csv,
                       write_sidecar, write_signal_csv)
from symplectic_core import SymplecticMatrix, parse_matrix_spec, parse_number
from uncertainty import covariance_sigma, hardy_classify_params, rs_check
from verify_suite import SUITES, resolve_suites, run_checks

logger = get_logger("cli")
console = Console(highlight=False)

COMMANDS = ("transform", "wigner", "wtheta", "radon", "covariance", "verify", "gen")
BRANCH_CONVENTION = "principal: exp(-1/2 Log(i^n det B))"
# options whose values may start with '-' (x0:dx:N specs)
SPEC_VALUED_FLAGS = ("--grid", "--offsets")


def print_header(title: str):
    """Print a formatted header"""
    console.print("\n" + "=" * 60, markup=False)
    console.print(f"🔍 {title}", markup=False)
    console.print("=" * 60, markup=False)


def print_section(title: str):
    """Print a formatted section header"""
    console.print(f"\n📋 {title}", markup=False)
    console.print("-" * 40, markup=False)


def print_status(ok: bool, text: str):
    console.print(f"{'✅' if ok else '❌'} {text}", markup=False)


def print_info(text: str):
    console.print(f"   {text}", markup=False)


@attrs.define
class RunConfig:
    """One CLI invocation: parsed flags layered over lct_config.json"""
    command: str = attrs.field(validator=attrs.validators.in_(COMMANDS))
    grid: Grid = attrs.field(validator=attrs.validators.instance_of(Grid))
    output_dir: Path = attrs.field(converter=Path)
    seed: int = attrs.field(default=42, validator=attrs.validators.instance_of(int))
    signal_source: Optional[str] = None
    matrix_specs: List[str] = attrs.field(factory=list)
    tolerances: Dict[str, float] = attrs.field(factory=dict)
    oversample: int = attrs.field(default=2, validator=attrs.validators.ge(1))
    order: int = attrs.field(default=3, validator=attrs.validators.in_((1, 3)))
    max_workers: int = attrs.field(default=4, validator=attrs.validators.ge(1))
    json_output: bool = False
    normalize: bool = False
    options: Dict[str, Any] = attrs.field(factory=dict)

    @classmethod
    def from_args(cls, args: argparse.Namespace, loader: ConfigLoader) -> "RunConfig":
        defaults = loader.get_run_defaults()
        grid = Grid.from_spec(args.grid) if args.grid else Grid(*defaults["grid"])
        matrices = [m for m in (getattr(args, "matrix", None), getattr(args, "s1", None),
                                getattr(args, "s2", None)) if m]
        options = {key: getattr(args, key, None)
                   for key in ("suite", "corpus", "alpha", "beta", "a", "b", "offsets", "s1", "s2",
                               "cross_validate")}
        try:
            return cls(
                command=args.command,
                grid=grid,
                output_dir=args.out or defaults["output_dir"],
                seed=args.seed if args.seed is not None else int(defaults["seed"]),
                signal_source=getattr(args, "signal", None),
                matrix_specs=matrices,
                tolerances=defaults["tolerances"],
                oversample=args.oversample or int(defaults["oversample"]),
                order=getattr(args, "order", None) or int(defaults["interpolation_order"]),
                max_workers=args.workers or int(defaults["max_workers"]),
                json_output=bool(args.json),
                normalize=bool(args.normalize),
                options=options,
            )
        except (TypeError, ValueError) as e:
            raise BadParameter(f"invalid run configuration: {e}")

    def prepare_output(self) -> Path:
        """Create the output directory; it must be writable"""
        try:
            self.output_dir.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise BadParameter(f"output directory {self.output_dir} is not writable: {e}")
        return self.output_dir

    def matrix(self, spec: str, n: int = 1) -> SymplecticMatrix:
        return parse_matrix_spec(spec, n=n, tol=self.tolerances["symplectic"])


# --- helpers ---

def load_signal(run: RunConfig):
    """--signal as a generator spec, a signal CSV, or a separable CSV with its sidecar"""
    source = run.signal_source
    if not source:
        raise SpecParseError(f"{run.command} needs --signal")
    if source.lower().endswith(".csv") and Path(f"{source}.json").exists():
        f = read_separable_csv(source)
    else:
        f = parse_signal_spec(source, run.grid)
    return normalize(f) if run.normalize else f


def _one_dimensional(f, command: str) -> SampledSignal:
    if isinstance(f, SeparableSignal):
        raise BadParameter(f"{command} works on one-dimensional signals")
    return f


def _safe_name(name: str) -> str:
    stem = re.sub(r"[^A-Za-z0-9_.-]+", "_", Path(name).name if name.endswith(".csv") else name)
    return stem if stem.endswith(".csv") else f"{stem}.csv"


def emit_report(run: RunConfig, payload: Dict[str, Any]):
    if run.json_output:
        print(json.dumps(payload, indent=2, sort_keys=True))


def _emit_error(payload: Dict[str, Any]):
    print(json.dumps(payload, sort_keys=True), file=sys.stderr)


def _write_distribution(out: Path, stem: str, W: PhaseSpaceDistribution, meta: Dict[str, Any]) -> Dict[str, Any]:
    write_distribution_csv(W, out / f"{stem}.csv")
    emit_heatmap(W, out / f"{stem}.pgm")
    write_marginal_csv(marginal(W, "x"), out / f"{stem}_marginal_x.csv")
    write_marginal_csv(marginal(W, "xi"), out / f"{stem}_marginal_xi.csv")
    payload = W.to_dict()
    payload.update({"max": W.max_abs, "mass": float(np.real(W.mass())), **meta})
    write_sidecar(out / f"{stem}.json", payload)
    return payload


# --- commands ---

def cmd_transform(run: RunConfig, loader: ConfigLoader) -> int:
    if len(run.matrix_specs) != 1:
        raise SpecParseError("transform needs exactly one --matrix")
    f = load_signal(run)
    S = run.matrix(run.matrix_specs[0], n=f.ndim)
    print_header("Linear Canonical Transform")
    print_info(f"signal: {run.signal_source}   matrix: {run.matrix_specs[0]}   oversample: {run.oversample}")
    g = lct(f, S, oversample=run.oversample,
            support_floor=loader.get("transform", "support_floor", 1e-10))
    out = run.prepare_output()
    target = out / "transform.csv"
    if isinstance(g, SeparableSignal):
        write_separable_csv(g, target)
        grids = [grid.to_dict() for grid in g.grids]
    else:
        write_signal_csv(g, target)
        grids = [g.grid.to_dict()]
    prefactor = lct_prefactor(S)
    meta = {
        "command": "transform",
        "signal": run.signal_source,
        "matrix": S.to_dict(),
        "matrix_spec": run.matrix_specs[0],
        "branch": BRANCH_CONVENTION,
        "prefactor": [prefactor.real, prefactor.imag],
        "oversample": run.oversample,
        "output_grids": grids,
    }
    write_sidecar(out / "transform.json", meta)
    print_status(True, f"wrote {target}")
    emit_report(run, meta)
    return 0


def cmd_wigner(run: RunConfig, loader: ConfigLoader) -> int:
    f = _one_dimensional(load_signal(run), "wigner")
    print_header("Wigner Distribution")
    W = wigner(f, row_chunk=loader.get("phase_space", "row_chunk", 256), max_workers=run.max_workers,
               imaginary_tol=run.tolerances["imaginary_residual"])
    payload = _write_distribution(run.prepare_output(), "wigner", W,
                                  {"command": "wigner", "signal": run.signal_source})
    print_status(True, f"{f.n}×{f.n} distribution, max {W.max_abs:.6g}, mass {payload['mass']:.6g}")
    emit_report(run, payload)
    return 0


def _marginal_distances(f: SampledSignal, W: PhaseSpaceDistribution, matrices: Sequence[SymplecticMatrix],
                        oversample: int) -> Dict[str, Optional[float]]:
    """L1 distance of each W_ϑ marginal to |L_S f|² for S = S1, S2"""
    distances: Dict[str, Optional[float]] = {}
    for axis, S in zip(("x", "xi"), matrices):
        try:
            expected = lct_intensity(f, S, oversample=oversample)
        except NotFree:
            distances[axis] = None
            continue
        distances[axis] = marginal(W, axis).l1_distance(expected)
    return distances


def cmd_wtheta(run: RunConfig, loader: ConfigLoader) -> int:
    s1, s2 = run.options.get("s1"), run.options.get("s2")
    if not s1 or not s2:
        raise SpecParseError("wtheta needs --s1 and --s2")
    f = _one_dimensional(load_signal(run), "wtheta")
    S1, S2 = run.matrix(s1), run.matrix(s2)
    print_header("ϑ-Wigner Distribution")
    W = wtheta(f, S1, S2, order=run.order, max_workers=run.max_workers)
    distances = _marginal_distances(f, W, (S1, S2), run.oversample)
    limit = run.tolerances["marginal_l1"]
    meta = {
        "command": "wtheta",
        "signal": run.signal_source,
        "s1": s1,
        "s2": s2,
        "interpolation_order": run.order,
        "marginal_l1": distances,
        "marginal_tol": limit,
        "marginal_ok": all(d <= limit for d in distances.values() if d is not None),
    }
    payload = _write_distribution(run.prepare_output(), "wtheta", W, meta)
    print_status(True, f"{W.xgrid.n}×{W.xigrid.n} distribution, max {W.max_abs:.6g}")
    for axis, value in distances.items():
        if value is not None:
            print_status(value <= limit, f"marginal {axis}: L1 distance {value:.3e} (tolerance {limit:g})")
    emit_report(run, payload)
    return 0


def cmd_radon(run: RunConfig, loader: ConfigLoader) -> int:
    a_raw, b_raw = run.options.get("a"), run.options.get("b")
    if a_raw is None or b_raw is None:
        raise SpecParseError("radon needs --a and --b")
    offsets = run.options.get("offsets")
    line = RadonLineSpec(parse_number(a_raw), parse_number(b_raw),
                         Grid.from_spec(offsets).points if offsets else None)
    f = _one_dimensional(load_signal(run), "radon")
    print_header("Symplectic Radon Projection")
    projection = radon_marginal(f, line, order=run.order)
    out = run.prepare_output()
    write_marginal_csv(projection, out / "radon.csv")
    payload = {
        "command": "radon",
        "signal": run.signal_source,
        "a": line.direction[0],
        "b": line.direction[1],
        "grid": projection.grid.to_dict(),
        "total": projection.total(),
    }
    write_sidecar(out / "radon.json", payload)
    print_status(True, f"projection on {projection.grid.n} offsets, total {payload['total']:.6g}")
    emit_report(run, payload)
    return 0


def cmd_covariance(run: RunConfig, loader: ConfigLoader) -> int:
    f = load_signal(run)
    tol = run.tolerances
    print_header("Covariance Matrix")
    sigma = covariance_sigma(f, normalize_signal=run.normalize, normalization_tol=tol["normalization"],
                             centering_tol=tol["centering"])
    payload: Dict[str, Any] = {"command": "covariance", "signal": run.signal_source, "sigma": sigma.tolist()}
    s1, s2 = run.options.get("s1"), run.options.get("s2")
    if s1 or s2:
        if not (s1 and s2):
            raise SpecParseError("covariance needs both --s1 and --s2 (or neither)")
        report = rs_check(f, run.matrix(s1, n=f.ndim), run.matrix(s2, n=f.ndim), normalize_signal=run.normalize,
                          cross_validate=bool(run.options.get("cross_validate")),
                          normalization_tol=tol["normalization"], centering_tol=tol["centering"])
        payload.update({
            "s1": s1,
            "s2": s2,
            "upsilon": report.upsilon.tolist(),
            "omega": report.omega.omega.tolist(),
            "min_eig": report.min_eig,
            "scalar_gap": report.scalar_gap,
            "psd": report.is_psd(tol["psd"]),
        })
        if report.theta_upsilon is not None:
            payload["theta_upsilon"] = report.theta_upsilon.tolist()
        print_status(payload["psd"], f"Υ + (i/4π)Ω min eigenvalue {report.min_eig:.6e}")
    out = run.prepare_output()
    write_sidecar(out / "covariance.json", payload)
    print_info(f"Σ = {np.array2string(sigma, precision=6)}")
    emit_report(run, payload)
    return 0


def _verify_hardy_params(run: RunConfig) -> int:
    alpha, beta = run.options.get("alpha"), run.options.get("beta")
    if alpha is None or beta is None or len(run.matrix_specs) != 1:
        raise SpecParseError("hardy parameter mode needs --alpha, --beta and --matrix")
    S = run.matrix(run.matrix_specs[0])
    result = hardy_classify_params(parse_number(alpha), parse_number(beta), S,
                                   rel_tol=run.tolerances["hardy_params"])
    payload = {
        "command": "verify",
        "suite": "hardy",
        "mode": "params",
        "matrix": S.to_dict(),
        "alpha": result.alpha,
        "beta": result.beta,
        "threshold": result.threshold,
        "classification": result.kind.value,
    }
    write_sidecar(run.prepare_output() / "verify_hardy_params.json", payload)
    print_header("Hardy Classification")
    print_info(f"αβ = {result.alpha * result.beta:.6g}, π²/b² = {result.threshold:.6g} → {result.kind.value}")
    emit_report(run, payload)
    return 0


def _random_signals(run: RunConfig, count: int):
    rng = np.random.default_rng(run.seed)
    seeds = rng.integers(0, 2 ** 31 - 1, size=count)
    return [(f"randbl:{int(s)}:0.5", make_signal("randbl", run.grid, seed=int(s), cutoff=0.5)) for s in seeds]


def cmd_verify(run: RunConfig, loader: ConfigLoader) -> int:
    suite = run.options.get("suite")
    if suite == "hardy" and (run.options.get("alpha") is not None or run.options.get("beta") is not None):
        return _verify_hardy_params(run)
    suites = resolve_suites(suite)

    if run.signal_source:
        signals = [(run.signal_source, _one_dimensional(load_signal(run), "verify"))]
    else:
        corpus = run.options.get("corpus") or loader.get("paths", "corpus_dir")
        signals = load_corpus(corpus, run.grid)
        signals += _random_signals(run, int(loader.get("verification", "random_signals", 0)))
    s1, s2 = run.options.get("s1"), run.options.get("s2")
    if s1 or s2:
        if not (s1 and s2):
            raise SpecParseError("verify needs both --s1 and --s2 (or neither)")
        pairs = [(s1, s2)]
    else:
        pairs = [tuple(p) for p in loader.get("verification", "pairs")]

    print_header(f"Verification: {suite}")
    print_info(f"{len(signals)} signals × {len(pairs)} matrix pairs, seed {run.seed}")
    # an explicitly named signal must be verified, not skipped
    strict = True if run.signal_source else None
    report = run_checks(signals, pairs, suites, loader, max_workers=run.max_workers, strict=strict)
    report.update({"command": "verify", "seed": run.seed, "grid": run.grid.to_dict()})
    write_sidecar(run.prepare_output() / f"verify_{suite}.json", report)

    print_section("Results")
    for result in report["results"]:
        if result["status"] == "skipped":
            print_info(f"⏭️  {result['check']} {result['signal']} [{result['pair']}]: {result['message']}")
        else:
            print_status(result["status"] == "pass", f"{result['check']} {result['signal']} [{result['pair']}]")
    summary = report["summary"]
    print_section("Summary")
    print_info(f"pass {summary['pass']}  fail {summary['fail']}  skipped {summary['skipped']}")
    if report["unverified_suites"]:
        print_status(False, f"no passing check for {', '.join(report['unverified_suites'])}")
    if report["strict"] and summary["skipped"]:
        print_status(False, "skipped checks count as failures in strict mode")
    emit_report(run, report)
    return 0 if report["ok"] else 1


def cmd_gen(run: RunConfig, loader: ConfigLoader) -> int:
    corpus = run.options.get("corpus")
    if run.signal_source:
        signals = [(run.signal_source, _one_dimensional(load_signal(run), "gen"))]
    elif corpus:
        signals = load_corpus(corpus, run.grid)
    else:
        raise SpecParseError("gen needs --signal or --corpus")
    out = run.prepare_output()
    print_header("Signal Generation")
    written = []
    for name, f in signals:
        target = out / _safe_name(name)
        if corpus and Path(corpus).resolve() == out.resolve() and target.exists():
            raise BadParameter(f"refusing to overwrite corpus file {target}")
        write_signal_csv(f, target)
        written.append(str(target))
        print_status(True, f"{name} → {target}")
    emit_report(run, {"command": "gen", "files": written})
    return 0


COMMAND_HANDLERS: Dict[str, Callable[[RunConfig, ConfigLoader], int]] = {
    "transform": cmd_transform,
    "wigner": cmd_wigner,
    "wtheta": cmd_wtheta,
    "radon": cmd_radon,
    "covariance": cmd_covariance,
    "verify": cmd_verify,
    "gen": cmd_gen,
}


# --- argument parsing ---

def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--grid', help='Sampling grid x0:dx:N (default from config)')
    common.add_argument('--seed', type=int, help='Seed for randomized corpora (default 42)')
    common.add_argument('--out', help='Output directory (default from config)')
    common.add_argument('--tol', action='append', default=[], metavar='KEY=VAL',
                        help='Override a tolerance (or section.key=val); repeatable')
    common.add_argument('--json', action='store_true', help='Print the JSON report on stdout')
    common.add_argument('--config', help=f'Configuration file (default {DEFAULT_CONFIG_FILE})')
    common.add_argument('--oversample', type=int, help='Output oversampling factor of the chirp-FFT')
    common.add_argument('--workers', type=int, help='Worker threads')
    common.add_argument('--normalize', action='store_true', help='Normalise the input signal to unit L2 norm')
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog="lctlab",
        description="Linear canonical transforms, ϑ-Wigner distributions and uncertainty checks",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Fourier transform of a Gaussian
  python lct_cli.py transform --signal gaussian:pi --matrix J --grid -8:0.015625:1024

  # Wigner and ϑ-Wigner distributions with heatmaps
  python lct_cli.py wigner --signal gaussian:pi --normalize
  python lct_cli.py wtheta --signal hermite:1 --s1 I --s2 fresnel:2

  # Uncertainty checks
  python lct_cli.py verify heisenberg --signal gaussian:pi --s1 I --s2 J
  python lct_cli.py verify hardy --alpha 6.2832 --beta 6.2832 --matrix J
  python lct_cli.py verify all --corpus ./signals --seed 42
        """
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("transform", parents=[common], help="Apply an LCT to a signal")
    p.add_argument('--signal', help='Generator spec or CSV path')
    p.add_argument('--matrix', help='Matrix spec (I, J, frft:θ, fresnel:b, ...) or JSON path')

    p = sub.add_parser("wigner", parents=[common], help="Wigner distribution")
    p.add_argument('--signal', help='Generator spec or CSV path')

    p = sub.add_parser("wtheta", parents=[common], help="ϑ-Wigner distribution of a matrix pair")
    p.add_argument('--signal', help='Generator spec or CSV path')
    p.add_argument('--s1', help='First matrix spec')
    p.add_argument('--s2', help='Second matrix spec')
    p.add_argument('--order', type=int, choices=(1, 3), help='Interpolation order (1 bilinear, 3 cubic)')

    p = sub.add_parser("radon", parents=[common], help="Projection of W f along lines a·x + b·ξ = p")
    p.add_argument('--signal', help='Generator spec or CSV path')
    p.add_argument('--a', help='x coefficient of the line')
    p.add_argument('--b', help='ξ coefficient of the line')
    p.add_argument('--offsets', help='Offsets p as a grid p0:dp:N (default automatic)')
    p.add_argument('--order', type=int, choices=(1, 3), help='Interpolation order (1 bilinear, 3 cubic)')

    p = sub.add_parser("covariance", parents=[common], help="Covariance matrix Σ (and Υ for a pair)")
    p.add_argument('--signal', help='Generator spec or CSV path')
    p.add_argument('--s1', help='First matrix spec')
    p.add_argument('--s2', help='Second matrix spec')
    p.add_argument('--cross-validate', action='store_true', help='Also compute Υ from W_ϑ moments')

    p = sub.add_parser("verify", parents=[common], help="Run uncertainty-principle checks")
    p.add_argument('suite', choices=SUITES + ("all",))
    p.add_argument('--signal', help='Single signal (default: the corpus)')
    p.add_argument('--corpus', help='Corpus directory (CSV files and/or corpus.json)')
    p.add_argument('--s1', help='First matrix spec (default: configured pairs)')
    p.add_argument('--s2', help='Second matrix spec')
    p.add_argument('--alpha', help='Hardy parameter mode: decay rate of f')
    p.add_argument('--beta', help='Hardy parameter mode: decay rate of the transform')
    p.add_argument('--matrix', help='Hardy parameter mode: matrix spec')

    p = sub.add_parser("gen", parents=[common], help="Write generator specs or a corpus manifest as CSV")
    p.add_argument('--signal', help='Generator spec')
    p.add_argument('--corpus', help='Corpus directory to materialise')
    return parser


def _attach_spec_values(argv: Sequence[str]) -> List[str]:
    """Turn ``--grid -8:0.1:64`` into ``--grid=-8:0.1:64`` so argparse does not read it as a flag"""
    joined: List[str] = []
    skip = False
    for i, token in enumerate(argv):
        if skip:
            skip = False
            continue
        if token in SPEC_VALUED_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-") \
                and not argv[i + 1].startswith("--"):
            joined.append(f"{token}={argv[i + 1]}")
            skip = True
        else:
            joined.append(token)
    return joined


def _load_config(path: Optional[str]) -> ConfigLoader:
    if path and not Path(path).exists():
        raise SpecParseError(f"configuration file {path} does not exist")
    loader = ConfigLoader(path or DEFAULT_CONFIG_FILE)
    configure_logging(loader.get("logging", "log_level", "INFO"))
    return loader


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main function"""
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_attach_spec_values(argv))
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2

    try:
        loader = _load_config(args.config)
        loader.apply_overrides(args.tol)
        if not loader.validate_config():
            raise BadParameter("configuration failed validation")
        run = RunConfig.from_args(args, loader)
        console.quiet = run.json_output
        return COMMAND_HANDLERS[run.command](run, loader)
    except LctError as e:
        logger.debug(f"{type(e).__name__}: {e.message}")
        _emit_error(e.to_dict())
        return e.exit_code
    except OSError as e:
        _emit_error({"error": type(e).__name__, "message": str(e), "exit_code": 2})
        return 2


if __name__ == "__main__":
    sys.exit(main())
