#!/usr/bin/env python3
"""
Signal and Distribution I/O
===========================

File formats used by the command line:

* signal CSV          header ``x,re,im``, one row per sample, 17 significant digits
* separable CSV       row-major ``re,im`` rows plus a ``<file>.json`` sidecar of axes
* distribution CSV    ``x,xi,value`` (``value_re,value_im`` for complex data)
* PGM heatmap         binary P5, 8-bit, rows = ξ (largest on top), comment header
* corpus directory    ``*.csv`` signals and an optional ``corpus.json`` manifest

plus the generator mini-language ``gaussian:α[:phase]``, ``rect:R``,
``chirp:rate``, ``hermite:k``, ``randbl:seed[:cutoff]``.
"""

import json
import os
from pathlib import Path
from typing import Any, Dict, List, Tuple, Union

import numpy as np
import pandas as pd

from lct_engine import (Grid, SampledSignal, SeparableSignal, SignalKind,
                        make_signal)
from lct_errors import CsvParseError, LctError, NonuniformGrid, SpecParseError
from lct_logging import get_logger
from phase_space import Marginal, PhaseSpaceDistribution
from symplectic_core import parse_number

logger = get_logger("io")

FLOAT_FORMAT = "%.17g"
SIGNAL_COLUMNS = ["x", "re", "im"]
UNIFORM_TOL = 1e-9
CORPUS_MANIFEST = "corpus.json"

PathLike = Union[str, Path]


# --- signals ---

def write_signal_csv(signal: SampledSignal, path: PathLike):
    """Write ``x,re,im`` rows at 17 significant digits"""
    df = pd.DataFrame({"x": signal.x, "re": signal.values.real, "im": signal.values.imag})
    df.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    logger.debug(f"wrote {signal.n} samples to {path}")


def _numeric_frame(path: PathLike, columns: List[str]) -> pd.DataFrame:
    try:
        df = pd.read_csv(path, skipinitialspace=True)
    except FileNotFoundError:
        raise CsvParseError(f"no such file: {path}")
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
        raise CsvParseError(f"malformed CSV {path}: {e}")
    header = [str(c).strip() for c in df.columns]
    if header != columns:
        raise CsvParseError(f"expected header {','.join(columns)}, got {','.join(header)}", line=1)
    if all(pd.api.types.is_float_dtype(t) or pd.api.types.is_integer_dtype(t) for t in df.dtypes):
        if np.isfinite(df.to_numpy(dtype=float)).all():
            return df
    # slow path: locate the offending row
    raw = pd.read_csv(path, dtype=str, skipinitialspace=True)
    numeric = raw.apply(lambda col: pd.to_numeric(col.str.strip(), errors="coerce"))
    bad = ~np.isfinite(numeric.to_numpy(dtype=float)).all(axis=1)
    idx = int(np.argmax(bad))
    raise CsvParseError(f"non-numeric or missing value: {raw.iloc[idx].tolist()}", line=idx + 2)


def read_signal_csv(path: PathLike) -> SampledSignal:
    """Read a ``x,re,im`` CSV; spacing must be uniform within 1e-9 relative"""
    frame = _numeric_frame(path, SIGNAL_COLUMNS)
    x = frame["x"].to_numpy(dtype=float)
    if x.size < 2:
        raise CsvParseError(f"{path} has fewer than two samples")
    steps = np.diff(x)
    dx = (x[-1] - x[0]) / (x.size - 1)
    if dx <= 0 or np.max(np.abs(steps - dx)) > UNIFORM_TOL * abs(dx):
        raise NonuniformGrid(f"samples in {path} are not uniformly spaced (spacing {dx:g})")
    values = frame["re"].to_numpy(dtype=float) + 1j * frame["im"].to_numpy(dtype=float)
    return SampledSignal(x[0], dx, values)


def write_separable_csv(signal: SeparableSignal, path: PathLike):
    """Row-major ``re,im`` rows with the axes in ``<path>.json``"""
    flat = np.asarray(signal.values).reshape(-1)
    pd.DataFrame({"re": flat.real, "im": flat.imag}).to_csv(path, index=False, float_format=FLOAT_FORMAT,
                                                            lineterminator="\n")
    write_sidecar(f"{path}.json", {"axes": [g.to_dict() for g in signal.grids]})


def read_separable_csv(path: PathLike) -> SeparableSignal:
    sidecar = f"{path}.json"
    try:
        with open(sidecar, "r") as f:
            axes = json.load(f)["axes"]
        grids = tuple(Grid(a["x0"], a["dx"], a["n"]) for a in axes)
    except (IOError, KeyError, TypeError, ValueError) as e:
        raise CsvParseError(f"missing or malformed sidecar {sidecar}: {e}")
    frame = _numeric_frame(path, ["re", "im"])
    values = frame["re"].to_numpy(dtype=float) + 1j * frame["im"].to_numpy(dtype=float)
    shape = tuple(g.n for g in grids)
    if values.size != int(np.prod(shape)):
        raise CsvParseError(f"{path} has {values.size} rows, sidecar expects {int(np.prod(shape))}")
    return SeparableSignal(grids, values.reshape(shape))


# --- distributions ---

def write_sidecar(path: PathLike, payload: Dict[str, Any]):
    with open(path, "w") as f:
        json.dump(payload, f, indent=2, sort_keys=True)
        f.write("\n")


def write_distribution_csv(W: PhaseSpaceDistribution, path: PathLike):
    px, pxi = W.mesh()
    columns = {"x": px.reshape(-1), "xi": pxi.reshape(-1)}
    if W.is_complex:
        columns["value_re"] = W.values.real.reshape(-1)
        columns["value_im"] = W.values.imag.reshape(-1)
    else:
        columns["value"] = W.values.reshape(-1)
    pd.DataFrame(columns).to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")


def write_marginal_csv(m: Marginal, path: PathLike):
    pd.DataFrame({m.axis: m.grid.points, "value": np.real(m.values)}).to_csv(
        path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")


def emit_heatmap(W: PhaseSpaceDistribution, path: PathLike):
    """8-bit binary PGM: column = x, row = ξ with the largest ξ on top"""
    values = np.real(W.values)
    lo, hi = float(values.min()), float(values.max())
    if hi > lo:
        pixels = np.rint((values - lo) / (hi - lo) * 255.0)
    else:
        pixels = np.zeros_like(values)
    image = pixels.T[::-1, :].astype(np.uint8)
    header = (
        "P5\n"
        f"# xgrid {W.xgrid.x0!r} {W.xgrid.dx!r} {W.xgrid.n}\n"
        f"# xigrid {W.xigrid.x0!r} {W.xigrid.dx!r} {W.xigrid.n}\n"
        f"# range {lo!r} {hi!r}\n"
        f"# form {W.form.value}\n"
        f"{W.xgrid.n} {W.xigrid.n}\n255\n"
    )
    with open(path, "wb") as f:
        f.write(header.encode("ascii"))
        f.write(image.tobytes())


def read_heatmap_header(path: PathLike) -> Dict[str, Any]:
    """Grids, value range, form and pixel block of a heatmap written by emit_heatmap"""
    with open(path, "rb") as f:
        data = f.read()
    lines = data.split(b"\n")
    if not lines or lines[0] != b"P5":
        raise CsvParseError(f"{path} is not a P5 heatmap", line=1)
    meta: Dict[str, Any] = {}
    pos = len(lines[0]) + 1
    idx = 1
    while lines[idx].startswith(b"#"):
        key, *rest = lines[idx][1:].decode("ascii").split()
        if key in ("xgrid", "xigrid"):
            meta[key] = Grid(float(rest[0]), float(rest[1]), int(rest[2]))
        elif key == "range":
            meta["min"], meta["max"] = float(rest[0]), float(rest[1])
        else:
            meta[key] = " ".join(rest)
        pos += len(lines[idx]) + 1
        idx += 1
    width, height = (int(v) for v in lines[idx].split())
    pos += len(lines[idx]) + 1 + len(lines[idx + 1]) + 1
    meta["width"], meta["height"] = width, height
    meta["pixels"] = np.frombuffer(data[pos:pos + width * height], dtype=np.uint8).reshape(height, width)
    return meta


# --- generator specs and corpora ---

def parse_signal_spec(text: str, grid: Grid) -> SampledSignal:
    """Generator spec or CSV path → SampledSignal"""
    spec = text.strip()
    if spec.lower().endswith(".csv") or os.path.sep in spec:
        return read_signal_csv(spec)
    kind, *args = spec.split(":")
    kind = kind.lower()
    try:
        if kind == SignalKind.GAUSSIAN.value and 1 <= len(args) <= 2:
            phase = parse_number(args[1]) if len(args) == 2 else 0.0
            return make_signal(SignalKind.GAUSSIAN, grid, alpha=parse_number(args[0]), phase=phase)
        if kind in ("rect", "rectangle") and len(args) == 1:
            return make_signal(SignalKind.RECTANGLE, grid, radius=parse_number(args[0]))
        if kind == SignalKind.CHIRP.value and len(args) == 1:
            return make_signal(SignalKind.CHIRP, grid, rate=parse_number(args[0]))
        if kind == SignalKind.HERMITE.value and len(args) == 1:
            return make_signal(SignalKind.HERMITE, grid, order=int(args[0]))
        if kind == SignalKind.RANDOM_BANDLIMITED.value and 1 <= len(args) <= 2:
            cutoff = parse_number(args[1]) if len(args) == 2 else 0.5
            return make_signal(SignalKind.RANDOM_BANDLIMITED, grid, seed=int(args[0]), cutoff=cutoff)
    except LctError:
        raise
    except ValueError as e:
        raise SpecParseError(f"invalid signal spec {text!r}: {e}")
    raise SpecParseError(f"unknown signal spec {text!r}")


def load_corpus(directory: PathLike, grid: Grid) -> List[Tuple[str, SampledSignal]]:
    """CSV signals (sorted by file name) followed by the manifest's generator specs"""
    root = Path(directory)
    if not root.is_dir():
        raise SpecParseError(f"corpus directory {directory} does not exist")
    signals: List[Tuple[str, SampledSignal]] = []
    for path in sorted(root.glob("*.csv")):
        signals.append((path.name, read_signal_csv(path)))
    manifest = root / CORPUS_MANIFEST
    if manifest.exists():
        try:
            with open(manifest, "r") as f:
                entries = json.load(f).get("signals", [])
        except (IOError, ValueError, AttributeError) as e:
            raise SpecParseError(f"malformed corpus manifest {manifest}: {e}")
        for entry in entries:
            spec = entry if isinstance(entry, str) else entry.get("spec")
            if not spec:
                raise SpecParseError(f"corpus entry {entry!r} has no spec")
            name = spec if isinstance(entry, str) else entry.get("name", spec)
            signals.append((name, parse_signal_spec(spec, grid)))
    logger.info(f"loaded {len(signals)} signals from {directory}")
    return signals
