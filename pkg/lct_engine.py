#!/usr/bin/env python3
"""
LCT Engine
==========

Linear canonical transforms of sampled signals.

    (L_S f)(ξ) = (iⁿ det B)^{-1/2} ∫ e^{iπ(ξ·DB⁻¹ξ − 2x·B⁻¹ξ + x·B⁻¹Ax)} f(x) dx

Paths:

* ``lct_fast``            chirp · FFT · chirp, O(N log N), one dimension
* ``lct_nd_separable``    the same pipeline axis by axis for diagonal blocks
* ``lct_direct``          trapezoid quadrature at arbitrary (complex) targets
* ``gaussian_lct_closed`` exact image of a chirped Gaussian

plus Heisenberg–Weyl translations, dilations, inner products and the signal
generators used throughout the test corpus.
"""

import math
from concurrent.futures import ThreadPoolExecutor, as_completed
from enum import Enum
from typing import List, Optional, Sequence, Tuple, Union

import attrs
import numpy as np
from scipy.integrate import trapezoid
from scipy.interpolate import RegularGridInterpolator
from scipy.special import eval_hermite, gammaln

from lct_errors import (AliasRisk, BadParameter, GridMismatch, NotSeparable,
                        SingularL, SpecParseError)
from lct_logging import get_logger
from symplectic_core import (FreeSymplectic, SymplecticMatrix, as_free,
                             block_split, coupling_matrix, parse_number)

logger = get_logger("engine")

MIN_SAMPLES = 8
SUPPORT_FLOOR = 1e-10
SEPARABLE_TOL = 1e-12


def _frozen_complex(value) -> np.ndarray:
    arr = np.array(value, dtype=complex, copy=True)
    arr.setflags(write=False)
    return arr


def _trapezoid_weights(n: int) -> np.ndarray:
    w = np.ones(n)
    w[0] = w[-1] = 0.5
    return w


@attrs.define(frozen=True)
class Grid:
    """Uniform sample lattice x_j = x0 + j·dx, j = 0..n-1"""
    x0: float = attrs.field(converter=float)
    dx: float = attrs.field(converter=float, validator=attrs.validators.gt(0.0))
    n: int = attrs.field(converter=int, validator=attrs.validators.ge(MIN_SAMPLES))

    def __attrs_post_init__(self):
        if not (math.isfinite(self.x0) and math.isfinite(self.dx)):
            raise ValueError("grid origin and spacing must be finite")

    @property
    def points(self) -> np.ndarray:
        return self.x0 + self.dx * np.arange(self.n)

    @property
    def x_last(self) -> float:
        return self.x0 + self.dx * (self.n - 1)

    @property
    def x_max(self) -> float:
        return max(abs(self.x0), abs(self.x_last))

    def matches(self, other: "Grid", rel_tol: float = 1e-9) -> bool:
        return (self.n == other.n
                and abs(self.dx - other.dx) <= rel_tol * self.dx
                and abs(self.x0 - other.x0) <= rel_tol * max(self.dx, abs(self.x0)))

    @classmethod
    def from_spec(cls, spec: str) -> "Grid":
        """Parse ``x0:dx:N``"""
        parts = spec.split(":")
        if len(parts) != 3:
            raise SpecParseError(f"grid spec must look like x0:dx:N, got {spec!r}")
        try:
            return cls(parse_number(parts[0]), parse_number(parts[1]), int(parts[2]))
        except (ValueError, TypeError) as e:
            raise SpecParseError(f"invalid grid spec {spec!r}: {e}")

    @classmethod
    def symmetric(cls, half_width: float, n: int) -> "Grid":
        """n samples covering [−half_width, half_width)"""
        return cls(-half_width, 2.0 * half_width / n, n)

    def to_dict(self) -> dict:
        return {"x0": self.x0, "dx": self.dx, "n": self.n}


@attrs.define(frozen=True, eq=False)
class SampledSignal:
    """One-dimensional complex samples on a uniform grid; zero outside it"""
    x0: float = attrs.field(converter=float)
    dx: float = attrs.field(converter=float)
    values: np.ndarray = attrs.field(converter=_frozen_complex)
    resampled: bool = attrs.field(default=False)

    def __attrs_post_init__(self):
        if self.values.ndim != 1:
            raise BadParameter("SampledSignal values must be one-dimensional; use SeparableSignal")
        if self.dx <= 0:
            raise BadParameter(f"dx must be positive, got {self.dx}")
        if self.values.size < MIN_SAMPLES:
            raise BadParameter(f"need at least {MIN_SAMPLES} samples, got {self.values.size}")
        if not np.all(np.isfinite(self.values)):
            raise BadParameter("signal values must be finite")

    @property
    def n(self) -> int:
        return self.values.size

    @property
    def grid(self) -> Grid:
        return Grid(self.x0, self.dx, self.n)

    @property
    def x(self) -> np.ndarray:
        return self.grid.points

    @property
    def ndim(self) -> int:
        return 1

    def with_values(self, values: np.ndarray, resampled: Optional[bool] = None) -> "SampledSignal":
        return attrs.evolve(self, values=values, resampled=self.resampled if resampled is None else resampled)

    @classmethod
    def on_grid(cls, grid: Grid, values: np.ndarray, resampled: bool = False) -> "SampledSignal":
        return cls(grid.x0, grid.dx, values, resampled=resampled)


@attrs.define(frozen=True, eq=False)
class SeparableSignal:
    """n-dimensional samples on a product of uniform grids (axis k ↔ grids[k])"""
    grids: Tuple[Grid, ...] = attrs.field(converter=tuple)
    values: np.ndarray = attrs.field(converter=_frozen_complex)
    resampled: bool = attrs.field(default=False)

    def __attrs_post_init__(self):
        shape = tuple(g.n for g in self.grids)
        if self.values.shape != shape:
            raise BadParameter(f"values shape {self.values.shape} does not match grids {shape}")
        if not np.all(np.isfinite(self.values)):
            raise BadParameter("signal values must be finite")

    @property
    def ndim(self) -> int:
        return len(self.grids)

    @property
    def mesh(self) -> np.ndarray:
        """Sample coordinates, shape (*values.shape, ndim)"""
        axes = np.meshgrid(*[g.points for g in self.grids], indexing="ij")
        return np.stack(axes, axis=-1)

    def with_values(self, values: np.ndarray, resampled: Optional[bool] = None) -> "SeparableSignal":
        return attrs.evolve(self, values=values, resampled=self.resampled if resampled is None else resampled)

    @classmethod
    def from_product(cls, *factors: SampledSignal) -> "SeparableSignal":
        values = factors[0].values
        for f in factors[1:]:
            values = np.multiply.outer(values, f.values)
        return cls(tuple(f.grid for f in factors), values)


Signal = Union[SampledSignal, SeparableSignal]


def _square(value, n: Optional[int] = None) -> np.ndarray:
    arr = np.array(value, dtype=float)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1) if n is None else arr * np.eye(n)
    elif arr.ndim == 1:
        arr = np.diag(arr)
    arr.setflags(write=False)
    return arr


def _vector(value) -> np.ndarray:
    arr = np.atleast_1d(np.array(value, dtype=float))
    arr.setflags(write=False)
    return arr


@attrs.define(frozen=True, eq=False)
class GaussianSpec:
    """amplitude · exp(−(x−c)·(alpha + iπ·phase)(x−c) + 2πi momentum·x)"""
    alpha: np.ndarray = attrs.field(converter=_square)
    phase: Optional[np.ndarray] = attrs.field(default=None)
    center: Optional[np.ndarray] = attrs.field(default=None)
    momentum: Optional[np.ndarray] = attrs.field(default=None)
    amplitude: complex = attrs.field(default=1.0 + 0j, converter=complex)

    def __attrs_post_init__(self):
        n = self.alpha.shape[0]
        if self.alpha.shape != (n, n):
            raise BadParameter("alpha must be square")
        if np.max(np.abs(self.alpha - self.alpha.T)) > 1e-12 * max(1.0, np.max(np.abs(self.alpha))):
            raise BadParameter("alpha must be symmetric")
        if np.min(np.linalg.eigvalsh(self.alpha)) <= 0:
            raise BadParameter("alpha must be positive-definite")
        phase = np.zeros((n, n)) if self.phase is None else _square(self.phase, n)
        center = np.zeros(n) if self.center is None else _vector(self.center)
        momentum = np.zeros(n) if self.momentum is None else _vector(self.momentum)
        if phase.shape != (n, n) or center.shape != (n,) or momentum.shape != (n,):
            raise BadParameter("phase, center and momentum must match the dimension of alpha")
        for name, value in (("phase", phase), ("center", center), ("momentum", momentum)):
            value = np.array(value, dtype=float)
            value.setflags(write=False)
            object.__setattr__(self, name, value)

    @property
    def n(self) -> int:
        return self.alpha.shape[0]

    @property
    def is_centered(self) -> bool:
        return not (np.any(self.center) or np.any(self.momentum))

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        """Values at x (shape (...,) for n = 1, (..., n) otherwise)"""
        q = self.alpha + 1j * np.pi * self.phase
        pts = np.asarray(x, dtype=float)
        if self.n == 1:
            s = pts - self.center[0]
            exponent = -q[0, 0] * s ** 2 + 2j * np.pi * self.momentum[0] * pts
        else:
            s = pts - self.center
            exponent = -np.einsum("...i,ij,...j->...", s, q, s) + 2j * np.pi * pts @ self.momentum
        return self.amplitude * np.exp(exponent)

    def on_grid(self, grid: Grid) -> SampledSignal:
        if self.n != 1:
            raise BadParameter("on_grid needs a one-dimensional Gaussian; use on_grids")
        return SampledSignal.on_grid(grid, self.evaluate(grid.points))

    def on_grids(self, grids: Sequence[Grid]) -> SeparableSignal:
        if len(grids) != self.n:
            raise BadParameter(f"need {self.n} grids, got {len(grids)}")
        axes = np.meshgrid(*[g.points for g in grids], indexing="ij")
        return SeparableSignal(tuple(grids), self.evaluate(np.stack(axes, axis=-1)))

    def norm_squared(self) -> float:
        """∫|g|² = |amplitude|² π^{n/2} / √det(2α)"""
        return float(abs(self.amplitude) ** 2 * np.pi ** (self.n / 2) / np.sqrt(np.linalg.det(2.0 * self.alpha)))

    def normalized(self) -> "GaussianSpec":
        scale = 1.0 / math.sqrt(self.norm_squared())
        return attrs.evolve(self, amplitude=self.amplitude * scale)


# --- inner products ---

def _check_same_grid(f: Signal, g: Signal):
    if type(f) is not type(g):
        raise GridMismatch("signals have different dimensions")
    grids_f = [f.grid] if isinstance(f, SampledSignal) else f.grids
    grids_g = [g.grid] if isinstance(g, SampledSignal) else g.grids
    if len(grids_f) != len(grids_g) or not all(a.matches(b) for a, b in zip(grids_f, grids_g)):
        raise GridMismatch(f"grids differ: {grids_f} vs {grids_g}")


def integrate(values: np.ndarray, grids: Sequence[Grid]) -> complex:
    """Trapezoid integral of samples over a product grid"""
    result = np.asarray(values)
    for grid in reversed(grids):
        result = trapezoid(result, dx=grid.dx, axis=-1)
    return complex(result)


def grids_of(f: Signal) -> List[Grid]:
    return [f.grid] if isinstance(f, SampledSignal) else list(f.grids)


def inner(f: Signal, g: Signal) -> complex:
    """⟨f, g⟩ = ∫ f · conj(g) dx"""
    _check_same_grid(f, g)
    return integrate(f.values * np.conj(g.values), grids_of(f))


def norm2(f: Signal) -> float:
    return math.sqrt(max(0.0, integrate(np.abs(f.values) ** 2, grids_of(f)).real))


def normalize(f: Signal) -> Signal:
    """Rescale to unit L² norm"""
    nrm = norm2(f)
    if nrm == 0.0:
        raise BadParameter("cannot normalize the zero signal")
    return f.with_values(f.values / nrm)


def relative_l2(f: Signal, g: Signal) -> float:
    """‖f − g‖ / ‖g‖ on a shared grid"""
    _check_same_grid(f, g)
    ref = norm2(g)
    diff = math.sqrt(max(0.0, integrate(np.abs(f.values - g.values) ** 2, grids_of(f)).real))
    return diff / ref if ref > 0 else diff


# --- prefactor and chirp/FFT core ---

def lct_prefactor(F: Union[FreeSymplectic, SymplecticMatrix]) -> complex:
    """Principal branch of 1/√(iⁿ det B), computed as exp(−½ Log(iⁿ det B))"""
    F = as_free(F)
    i_pow = (1.0, 1j, -1.0, -1j)[F.n % 4]
    return complex(np.exp(-0.5 * np.log(complex(i_pow * F.det_b))))


def _envelope(values: np.ndarray) -> np.ndarray:
    """max |values| over every axis but the last"""
    mag = np.abs(values)
    if mag.ndim == 1:
        return mag
    return mag.reshape(-1, mag.shape[-1]).max(axis=0)


def effective_extent(coords: np.ndarray, values: np.ndarray, floor: float = SUPPORT_FLOOR) -> float:
    """max |x| over the samples with |f| ≥ floor·max|f| (0 for the zero signal)"""
    env = _envelope(values)
    peak = env.max() if env.size else 0.0
    if peak == 0.0:
        return 0.0
    return float(np.max(np.abs(coords[env >= floor * peak])))


def _chirp_fft(values: np.ndarray, grid: Grid, a: float, b: float, d: float, oversample: int,
               axis: int = -1, support_floor: float = SUPPORT_FLOOR,
               check: bool = True) -> Tuple[np.ndarray, Grid]:
    """Chirp–FFT–chirp along one axis, without the constant prefactor"""
    work = np.moveaxis(np.asarray(values, dtype=complex), axis, -1)
    x = grid.points
    bia, dbi = a / b, d / b
    if check:
        x_eff = effective_extent(x, work, support_floor)
        margin = 0.5 - abs(bia) * x_eff * grid.dx
        logger.debug(f"input chirp margin {margin:.3f} (|a/b|={abs(bia):.3g}, x_eff={x_eff:.3g})")
        if margin <= 0:
            factor = int(np.floor(2.0 * abs(bia) * x_eff * grid.dx)) + 1
            raise AliasRisk(f"input chirp under-sampled; refine the grid by a factor of at least {factor}",
                            side="input", required_factor=factor, margin=margin)

    m = grid.n * oversample
    u = (np.arange(m) - m // 2) / (m * grid.dx)
    g = work * np.exp(1j * np.pi * bia * x ** 2) * _trapezoid_weights(grid.n)
    spectrum = np.fft.fftshift(np.fft.fft(g, n=m, axis=-1), axes=-1)
    spectrum = grid.dx * np.exp(-2j * np.pi * grid.x0 * u) * spectrum
    xi = b * u
    dxi = abs(b) / (m * grid.dx)
    if b < 0:
        xi = xi[::-1]
        spectrum = spectrum[..., ::-1]

    if check:
        xi_eff = effective_extent(xi, spectrum, support_floor)
        margin = 0.5 - abs(dbi) * xi_eff * dxi
        logger.debug(f"output chirp margin {margin:.3f} (|d/b|={abs(dbi):.3g}, ξ_eff={xi_eff:.3g}, M={m})")
        if margin <= 0:
            factor = int(np.floor(2.0 * abs(dbi) * xi_eff * abs(b) / (grid.n * grid.dx))) + 1
            raise AliasRisk(f"output chirp under-sampled; use oversample ≥ {factor}",
                            side="output", required_factor=factor, margin=margin)

    out = spectrum * np.exp(1j * np.pi * dbi * xi ** 2)
    return np.moveaxis(out, -1, axis), Grid(float(xi[0]), dxi, m)


def _check_oversample(oversample: int):
    if not isinstance(oversample, (int, np.integer)) or oversample < 1:
        raise BadParameter(f"oversample must be an integer ≥ 1, got {oversample!r}")


def lct_fast(f: SampledSignal, S: Union[SymplecticMatrix, FreeSymplectic], oversample: int = 2,
             support_floor: float = SUPPORT_FLOOR, check: bool = True) -> SampledSignal:
    """One-dimensional LCT on the output grid ξ_k = b·(k − M/2)/(M·dx), M = N·oversample"""
    F = as_free(S)
    if F.n != 1:
        raise BadParameter(f"lct_fast is one-dimensional (n={F.n}); use lct_nd_separable")
    _check_oversample(oversample)
    blocks = F.blocks
    a, b, d = float(blocks.A[0, 0]), float(blocks.B[0, 0]), float(blocks.D[0, 0])
    values, grid = _chirp_fft(f.values, f.grid, a, b, d, oversample,
                              support_floor=support_floor, check=check)
    return SampledSignal.on_grid(grid, lct_prefactor(F) * values, resampled=f.resampled)


def is_separable(S: Union[SymplecticMatrix, FreeSymplectic]) -> bool:
    blocks = S.blocks if isinstance(S, FreeSymplectic) else block_split(S)
    for block in (blocks.A, blocks.B, blocks.C, blocks.D):
        if np.max(np.abs(block - np.diag(np.diag(block)))) > SEPARABLE_TOL:
            return False
    return True


def lct_nd_separable(f: SeparableSignal, S: Union[SymplecticMatrix, FreeSymplectic], oversample: int = 2,
                     support_floor: float = SUPPORT_FLOOR, check: bool = True) -> SeparableSignal:
    """Axis-by-axis lct_fast for matrices with diagonal blocks"""
    F = as_free(S)
    if F.n != f.ndim:
        raise BadParameter(f"matrix has n={F.n} but the signal has {f.ndim} axes")
    if not is_separable(F):
        raise NotSeparable("off-diagonal block entries exceed 1e-12")
    _check_oversample(oversample)
    values = np.asarray(f.values)
    grids = []
    prefactor = 1.0 + 0j
    for k in range(F.n):
        a, b, d = F.blocks.A[k, k], F.blocks.B[k, k], F.blocks.D[k, k]
        values, grid = _chirp_fft(values, f.grids[k], a, b, d, oversample, axis=k,
                                  support_floor=support_floor, check=check)
        grids.append(grid)
        prefactor *= complex(np.exp(-0.5 * np.log(1j * b)))
    return SeparableSignal(tuple(grids), prefactor * values, resampled=f.resampled)


def lct(f: Signal, S: Union[SymplecticMatrix, FreeSymplectic], oversample: int = 2, **kwargs) -> Signal:
    """Dispatch to lct_fast or lct_nd_separable by signal type"""
    if isinstance(f, SeparableSignal):
        return lct_nd_separable(f, S, oversample, **kwargs)
    return lct_fast(f, S, oversample, **kwargs)


# --- direct quadrature ---

def _direct_chunk(targets: np.ndarray, points: np.ndarray, h: np.ndarray, F: FreeSymplectic) -> np.ndarray:
    quad = np.einsum("ki,ij,kj->k", targets, F.db_inv, targets)
    cross = (targets @ F.b_inv.T) @ points.T
    return np.exp(1j * np.pi * quad) * (np.exp(-2j * np.pi * cross) @ h)


def lct_direct(f: Signal, S: Union[SymplecticMatrix, FreeSymplectic], targets: Sequence,
               chunk_size: int = 256, max_workers: int = 1) -> np.ndarray:
    """Trapezoid-rule LCT at arbitrary real or complex targets

    For a one-dimensional signal ``targets`` is a sequence of numbers; for an
    n-dimensional signal it is an (m, n) array.
    """
    F = as_free(S)
    grids = grids_of(f)
    if F.n != len(grids):
        raise BadParameter(f"matrix has n={F.n} but the signal has {len(grids)} axes")
    tgt = np.asarray(targets, dtype=complex)
    tgt = tgt.reshape(-1, F.n)
    if not np.all(np.isfinite(tgt)):
        raise BadParameter("targets must be finite")

    if isinstance(f, SampledSignal):
        points = f.x[:, None]
        weights = _trapezoid_weights(f.n) * f.dx
    else:
        points = f.mesh.reshape(-1, F.n)
        weights = np.ones(1)
        for grid in f.grids:
            weights = np.multiply.outer(weights, _trapezoid_weights(grid.n) * grid.dx)
        weights = weights.reshape(-1)
    phase_x = np.einsum("ki,ij,kj->k", points, F.b_inv_a, points)
    h = weights * np.asarray(f.values).reshape(-1) * np.exp(1j * np.pi * phase_x)

    chunks = [tgt[i:i + chunk_size] for i in range(0, len(tgt), chunk_size)]
    results: List[Optional[np.ndarray]] = [None] * len(chunks)
    if max_workers > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as executor:
            futures = {executor.submit(_direct_chunk, chunk, points, h, F): idx for idx, chunk in enumerate(chunks)}
            for future in as_completed(futures):
                results[futures[future]] = future.result()
    else:
        results = [_direct_chunk(chunk, points, h, F) for chunk in chunks]
    out = lct_prefactor(F) * (np.concatenate(results) if results else np.zeros(0, dtype=complex))
    logger.debug(f"direct quadrature: {len(tgt)} targets × {len(h)} samples in {len(chunks)} chunks")
    return out


def composition_is_free(S1: SymplecticMatrix, S2: SymplecticMatrix) -> bool:
    """Whether S1·S2 still has an invertible B block"""
    return (S1 @ S2).is_free


# --- closed form ---

def gaussian_lct_closed(g: GaussianSpec, S: Union[SymplecticMatrix, FreeSymplectic]) -> GaussianSpec:
    """Exact LCT of amplitude·e^{−(α+iπp)x²}

    With q = α + iπ(p − a/b) the image is
    amplitude·(ib)^{-1/2}·√(π/q)·e^{iπ(d/b)ξ²}·e^{−π²ξ²/(b²q)}.
    """
    F = as_free(S)
    if F.n != 1 or g.n != 1:
        raise BadParameter("gaussian_lct_closed is one-dimensional")
    if not g.is_centered:
        raise BadParameter("gaussian_lct_closed needs center = momentum = 0")
    a, b, d = F.blocks.A[0, 0], F.blocks.B[0, 0], F.blocks.D[0, 0]
    q = g.alpha[0, 0] + 1j * np.pi * (g.phase[0, 0] - a / b)
    k = np.pi ** 2 / (b ** 2 * q) - 1j * np.pi * d / b
    amplitude = g.amplitude * lct_prefactor(F) * np.sqrt(np.pi / q)
    return GaussianSpec(alpha=k.real, phase=k.imag / np.pi, amplitude=amplitude)


# --- translations and dilations ---

def _shift_axis(values: np.ndarray, shift: float, dx: float, axis: int) -> Tuple[np.ndarray, bool]:
    """values(x − shift) along axis; exact roll for whole-sample shifts"""
    steps = shift / dx
    whole = round(steps)
    n = values.shape[axis]
    if abs(steps - whole) <= 1e-9 * max(1.0, abs(steps)):
        out = np.zeros_like(values)
        if abs(whole) < n:
            src = [slice(None)] * values.ndim
            dst = [slice(None)] * values.ndim
            if whole >= 0:
                src[axis], dst[axis] = slice(0, n - whole), slice(whole, n)
            else:
                src[axis], dst[axis] = slice(-whole, n), slice(0, n + whole)
            out[tuple(dst)] = values[tuple(src)]
        return out, False
    freq = np.fft.fftfreq(n, dx)
    shape = [1] * values.ndim
    shape[axis] = n
    ramp = np.exp(-2j * np.pi * freq * shift).reshape(shape)
    return np.fft.ifft(np.fft.fft(values, axis=axis) * ramp, axis=axis), True


def hw_translate(f: Signal, z0: Sequence[float]) -> Signal:
    """(T(z0)f)(x) = e^{2πiξ0·(x − x0/2)} f(x − x0), z0 = (x0, ξ0)"""
    grids = grids_of(f)
    n = len(grids)
    z = np.asarray(z0, dtype=float).reshape(-1)
    if z.size != 2 * n:
        raise BadParameter(f"z0 must have {2 * n} components, got {z.size}")
    shift, momentum = z[:n], z[n:]
    values = np.asarray(f.values)
    resampled = f.resampled
    for k in range(n):
        if shift[k] != 0.0:
            values, off_grid = _shift_axis(values, shift[k], grids[k].dx, k)
            if off_grid:
                logger.warning(f"translation by {shift[k]:g} is not a multiple of dx={grids[k].dx:g}; "
                               f"using band-limited resampling")
                resampled = True
    phase = np.zeros(values.shape)
    for k in range(n):
        if momentum[k] != 0.0:
            shape = [1] * n
            shape[k] = grids[k].n
            phase = phase + (momentum[k] * (grids[k].points - 0.5 * shift[k])).reshape(shape)
    return f.with_values(values * np.exp(2j * np.pi * phase), resampled=resampled)


def weyl_phase(z1: Sequence[float], z2: Sequence[float]) -> float:
    """σ(z1, z2) = ξ1·x2 − x1·ξ2"""
    a = np.asarray(z1, dtype=float)
    b = np.asarray(z2, dtype=float)
    n = a.size // 2
    return float(a[n:] @ b[:n] - a[:n] @ b[n:])


def theta_translate(f: SampledSignal, z0: Sequence[float], S1: SymplecticMatrix, S2: SymplecticMatrix) -> SampledSignal:
    """Non-standard displacement T^ϑ(z0) = T(D⁻¹z0) for the coupling D of (S1, S2)"""
    coupling = coupling_matrix(S1, S2)
    return hw_translate(f, coupling.inverse @ np.asarray(z0, dtype=float))


def scale_signal(f: Signal, L) -> Signal:
    """f_L(x) = f(Lx)

    Scalars and diagonal L regrid exactly (x' = x/L); a general nD L is
    resampled onto the original grid by linear interpolation.
    """
    grids = grids_of(f)
    n = len(grids)
    lm = np.array(L, dtype=float)
    lm = lm.reshape(1, 1) if lm.ndim == 0 else (np.diag(lm) if lm.ndim == 1 else lm)
    if lm.shape != (n, n):
        raise BadParameter(f"L must be {n}×{n}")
    if abs(np.linalg.det(lm)) < 1e-14:
        raise SingularL("L must be invertible")

    if np.count_nonzero(lm - np.diag(np.diag(lm))) == 0:
        values = np.asarray(f.values)
        new_grids = []
        for k in range(n):
            scale = lm[k, k]
            grid = grids[k]
            if scale > 0:
                new_grids.append(Grid(grid.x0 / scale, grid.dx / scale, grid.n))
            else:
                new_grids.append(Grid(grid.x_last / scale, grid.dx / abs(scale), grid.n))
                values = np.flip(values, axis=k)
        if isinstance(f, SampledSignal):
            return SampledSignal.on_grid(new_grids[0], values, resampled=f.resampled)
        return SeparableSignal(tuple(new_grids), values, resampled=f.resampled)

    mesh = f.mesh
    pulled = mesh @ lm.T
    axes = [g.points for g in grids]
    real = RegularGridInterpolator(axes, np.real(f.values), bounds_error=False, fill_value=0.0)(pulled)
    imag = RegularGridInterpolator(axes, np.imag(f.values), bounds_error=False, fill_value=0.0)(pulled)
    return f.with_values(real + 1j * imag, resampled=True)


def restrict_to_grid(f: SampledSignal, grid: Grid) -> SampledSignal:
    """Samples of f on another grid: exact picks on a sub-lattice, else linear interpolation"""
    pos = (grid.points - f.x0) / f.dx
    idx = np.rint(pos)
    if np.all(np.abs(pos - idx) <= 1e-6):
        idx = idx.astype(int)
        inside = (idx >= 0) & (idx < f.n)
        values = np.zeros(grid.n, dtype=complex)
        values[inside] = f.values[idx[inside]]
        return SampledSignal.on_grid(grid, values, resampled=f.resampled)
    x = f.x
    values = (np.interp(grid.points, x, f.values.real, left=0.0, right=0.0)
              + 1j * np.interp(grid.points, x, f.values.imag, left=0.0, right=0.0))
    return SampledSignal.on_grid(grid, values, resampled=True)


# --- generators ---

class SignalKind(Enum):
    GAUSSIAN = "gaussian"
    RECTANGLE = "rect"
    CHIRP = "chirp"
    HERMITE = "hermite"
    RANDOM_BANDLIMITED = "randbl"


def hermite_function(k: int, x: np.ndarray) -> np.ndarray:
    """L²-normalised 2^{1/4}(2^k k!)^{-1/2} H_k(√(2π)x) e^{−πx²}"""
    log_norm = 0.25 * math.log(2.0) - 0.5 * (k * math.log(2.0) + gammaln(k + 1))
    return math.exp(log_norm) * eval_hermite(k, math.sqrt(2.0 * np.pi) * x) * np.exp(-np.pi * x ** 2)


def make_signal(kind: Union[SignalKind, str], grid: Grid, **params) -> SampledSignal:
    """Deterministic test signals

    gaussian(spec | alpha, phase), rect(radius), chirp(rate), hermite(order),
    randbl(seed, cutoff)
    """
    try:
        kind = SignalKind(kind) if isinstance(kind, str) else kind
    except ValueError:
        raise BadParameter(f"unknown signal kind {kind!r}")
    x = grid.points

    if kind is SignalKind.GAUSSIAN:
        spec = params.get("spec")
        if spec is None:
            spec = GaussianSpec(alpha=params.get("alpha", np.pi), phase=params.get("phase", 0.0))
        return spec.on_grid(grid)

    if kind is SignalKind.RECTANGLE:
        radius = float(params.get("radius", 1.0))
        if radius <= 0 or radius >= grid.x_max:
            raise BadParameter(f"rectangle radius must lie in (0, {grid.x_max:g}), got {radius:g}")
        return SampledSignal.on_grid(grid, ((x >= -radius) & (x < radius)).astype(complex))

    if kind is SignalKind.CHIRP:
        rate = float(params.get("rate", 0.5))
        return SampledSignal.on_grid(grid, np.exp(-np.pi * x ** 2 + 1j * np.pi * rate * x ** 2))

    if kind is SignalKind.HERMITE:
        order = params.get("order", 0)
        if int(order) != order or order < 0:
            raise BadParameter(f"hermite order must be a non-negative integer, got {order!r}")
        return SampledSignal.on_grid(grid, hermite_function(int(order), x).astype(complex))

    seed = int(params.get("seed", 42))
    cutoff = float(params.get("cutoff", 0.5))
    if cutoff <= 0:
        raise BadParameter("cutoff must be positive")
    rng = np.random.default_rng(seed)
    center = rng.uniform(-1.0, 1.0)
    freqs = rng.uniform(-cutoff, cutoff, size=6)
    coeffs = rng.normal(size=6) + 1j * rng.normal(size=6)
    modes = np.exp(2j * np.pi * np.outer(x, freqs)) @ coeffs
    envelope = np.exp(-np.pi * ((x - center) / 1.5) ** 2)
    return SampledSignal.on_grid(grid, envelope * modes)
