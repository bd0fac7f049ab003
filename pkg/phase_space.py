#!/usr/bin/env python3
"""
Phase-Space Distributions
=========================

Wigner and cross-Wigner distributions of sampled signals, the ϑ-Wigner
distribution attached to a pair of symplectic matrices, marginals, moments,
symplectic Radon projections, the linear perturbation B_A of the Wigner
distribution and Cohen-class translation residuals.

    W f(x, ξ) = ∫ f(x + y/2) conj f(x − y/2) e^{−2πiξy} dy
    W_ϑ f(z)  = |det D|⁻¹ W f(D⁻¹z),   D the coupling matrix of (S1, S2)

Distributions live on a product of uniform grids; resampling uses
``scipy.ndimage.map_coordinates`` with zero outside the computed window.
"""

from concurrent.futures import ThreadPoolExecutor, as_completed
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple, Union

import attrs
import numpy as np
from scipy.integrate import trapezoid
from scipy.ndimage import map_coordinates
from scipy.signal import fftconvolve, resample

from lct_engine import (Grid, SampledSignal, hw_translate, lct_fast,
                        theta_translate)
from lct_errors import (BadParameter, DegenerateLine, GridMismatch,
                        ImaginaryResidual, MomentOrderTooHigh, NotFree)
from lct_logging import get_logger
from symplectic_core import (DarbouxMatrix, SymplecticMatrix, coupling_matrix,
                             from_blocks)

logger = get_logger("phase_space")

IMAGINARY_TOL = 1e-8
SUPPORT_THRESHOLD = 1e-12
MAX_MOMENT_ORDER = 4
DEFAULT_ORDER = 3


class FormTag(Enum):
    STANDARD = "standard"
    NONSTANDARD = "nonstandard"


def _frozen(value) -> np.ndarray:
    arr = np.array(value, copy=True)
    if not np.iscomplexobj(arr):
        arr = arr.astype(float)
    arr.setflags(write=False)
    return arr


@attrs.define(frozen=True, eq=False)
class PhaseSpaceDistribution:
    """Samples of a distribution on xgrid × xigrid (values[i, j] at (x_i, ξ_j))"""
    xgrid: Grid = attrs.field(validator=attrs.validators.instance_of(Grid))
    xigrid: Grid = attrs.field(validator=attrs.validators.instance_of(Grid))
    values: np.ndarray = attrs.field(converter=_frozen)
    form: FormTag = attrs.field(default=FormTag.STANDARD, validator=attrs.validators.instance_of(FormTag))
    omega: Optional[np.ndarray] = attrs.field(default=None)

    def __attrs_post_init__(self):
        if self.values.shape != (self.xgrid.n, self.xigrid.n):
            raise BadParameter(f"values shape {self.values.shape} does not match grids "
                               f"({self.xgrid.n}, {self.xigrid.n})")
        if not np.all(np.isfinite(self.values)):
            raise BadParameter("distribution values must be finite")

    @property
    def is_complex(self) -> bool:
        return np.iscomplexobj(self.values)

    @property
    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values))) if self.values.size else 0.0

    def mass(self) -> complex:
        """∫∫ W dx dξ"""
        inner = trapezoid(self.values, dx=self.xigrid.dx, axis=1)
        total = trapezoid(inner, dx=self.xgrid.dx)
        return total if self.is_complex else float(total)

    def sample(self, px: np.ndarray, pxi: np.ndarray, order: int = DEFAULT_ORDER) -> np.ndarray:
        """Interpolated values at the points (px, pxi); zero outside the window"""
        coords = np.array([(np.asarray(px) - self.xgrid.x0) / self.xgrid.dx,
                           (np.asarray(pxi) - self.xigrid.x0) / self.xigrid.dx])

        def interp(plane):
            return map_coordinates(plane, coords, order=order, mode="constant", cval=0.0, prefilter=order > 1)

        if self.is_complex:
            return interp(self.values.real) + 1j * interp(self.values.imag)
        return interp(self.values)

    def mesh(self) -> Tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.xgrid.points, self.xigrid.points, indexing="ij")

    def to_dict(self) -> Dict:
        payload = {
            "xgrid": self.xgrid.to_dict(),
            "xigrid": self.xigrid.to_dict(),
            "form": self.form.value,
        }
        if self.omega is not None:
            payload["omega"] = self.omega.tolist()
        return payload


@attrs.define(frozen=True, eq=False)
class Marginal:
    """A sampled real density on one axis"""
    grid: Grid = attrs.field(validator=attrs.validators.instance_of(Grid))
    values: np.ndarray = attrs.field(converter=_frozen)
    axis: str = attrs.field(default="x")

    def __attrs_post_init__(self):
        if self.values.shape != (self.grid.n,):
            raise BadParameter("marginal values must match the grid")

    def at(self, points: np.ndarray) -> np.ndarray:
        return np.interp(points, self.grid.points, np.real(self.values), left=0.0, right=0.0)

    def total(self) -> float:
        return float(trapezoid(np.real(self.values), dx=self.grid.dx))

    def l1_distance(self, other: "Marginal") -> float:
        """∫|self − other| on this grid, other linearly interpolated"""
        diff = np.abs(np.real(self.values) - other.at(self.grid.points))
        return float(trapezoid(diff, dx=self.grid.dx))


@attrs.define(frozen=True, eq=False)
class RadonLineSpec:
    """Lines a·x + b·ξ = p, one per offset p"""
    a_row: np.ndarray = attrs.field(converter=lambda v: np.atleast_2d(np.array(v, dtype=float)))
    b_row: np.ndarray = attrs.field(converter=lambda v: np.atleast_2d(np.array(v, dtype=float)))
    offsets: Optional[np.ndarray] = attrs.field(default=None)

    def __attrs_post_init__(self):
        if self.a_row.shape != (1, 1) or self.b_row.shape != (1, 1):
            raise BadParameter("only one-dimensional Radon lines (n = 1) are supported")
        if np.linalg.matrix_rank(np.hstack([self.a_row, self.b_row])) < 1:
            raise DegenerateLine("(a, b) = (0, 0) does not define a line")
        if self.offsets is not None:
            object.__setattr__(self, "offsets", np.atleast_1d(np.array(self.offsets, dtype=float)))

    @property
    def direction(self) -> Tuple[float, float]:
        return float(self.a_row[0, 0]), float(self.b_row[0, 0])


@attrs.define(frozen=True)
class CohenProbe:
    r_sigma: float
    r_d: float
    max_abs: float


# --- Wigner ---

def frequency_grid(grid: Grid) -> Grid:
    """ξ_j = (j − N/2)/(N·dx), the FFT bin layout of the signal grid"""
    return Grid(-(grid.n // 2) / (grid.n * grid.dx), 1.0 / (grid.n * grid.dx), grid.n)


def _half_sampled(f: SampledSignal) -> np.ndarray:
    """Band-limited values at x0 + k·dx/2, k = 0..2N-1"""
    return resample(np.asarray(f.values), 2 * f.n)


def _wigner_rows(f2: np.ndarray, g2: np.ndarray, rows: np.ndarray, n: int) -> np.ndarray:
    lags = np.arange(-n, n)
    plus = 2 * rows[:, None] + lags[None, :]
    minus = 2 * rows[:, None] - lags[None, :]
    valid = (plus >= 0) & (plus < 2 * n) & (minus >= 0) & (minus < 2 * n)
    kernel = np.zeros(plus.shape, dtype=complex)
    kernel[valid] = f2[plus[valid]] * np.conj(g2[minus[valid]])
    # unpaired lag −N
    kernel[:, 0] = 0.0
    spectrum = np.fft.fft(np.fft.ifftshift(kernel, axes=1), axis=1)
    return np.fft.fftshift(spectrum[:, ::2], axes=1)


def _wigner_kernel(f: SampledSignal, g: SampledSignal, row_chunk: int, max_workers: int) -> np.ndarray:
    n = f.n
    f2 = _half_sampled(f)
    g2 = f2 if g is f else _half_sampled(g)
    chunks = [np.arange(start, min(start + row_chunk, n)) for start in range(0, n, row_chunk)]
    blocks: List[Optional[np.ndarray]] = [None] * len(chunks)
    if max_workers > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as executor:
            futures = {executor.submit(_wigner_rows, f2, g2, rows, n): idx for idx, rows in enumerate(chunks)}
            for future in as_completed(futures):
                blocks[futures[future]] = future.result()
    else:
        blocks = [_wigner_rows(f2, g2, rows, n) for rows in chunks]
    return f.dx * np.vstack(blocks)


def wigner(f: SampledSignal, row_chunk: int = 256, max_workers: int = 1,
           imaginary_tol: float = IMAGINARY_TOL) -> PhaseSpaceDistribution:
    """W f on the signal grid × its FFT frequency grid"""
    raw = _wigner_kernel(f, f, row_chunk, max_workers)
    peak = float(np.max(np.abs(raw))) if raw.size else 0.0
    residual = float(np.max(np.abs(raw.imag))) if raw.size else 0.0
    if residual > imaginary_tol * peak:
        raise ImaginaryResidual(f"max |Im W| = {residual:.3e} exceeds {imaginary_tol:g}·max|W|",
                                residual=residual, peak=peak)
    logger.debug(f"wigner: {f.n}×{f.n}, imaginary residual {residual:.2e}")
    return PhaseSpaceDistribution(f.grid, frequency_grid(f.grid), raw.real)


def cross_wigner(f: SampledSignal, g: SampledSignal, row_chunk: int = 256,
                 max_workers: int = 1) -> PhaseSpaceDistribution:
    """W(f, g)(x, ξ) = ∫ f(x + y/2) conj g(x − y/2) e^{−2πiξy} dy (complex)"""
    if not f.grid.matches(g.grid):
        raise GridMismatch(f"cross_wigner needs a shared grid: {f.grid} vs {g.grid}")
    raw = _wigner_kernel(f, g, row_chunk, max_workers)
    return PhaseSpaceDistribution(f.grid, frequency_grid(f.grid), raw)


def lct_intensity(f: SampledSignal, S: SymplecticMatrix, oversample: int = 2) -> Marginal:
    """|L_S f|² as a marginal (S = identity gives |f|²)"""
    if np.array_equal(S.entries, np.eye(2)):
        return Marginal(f.grid, np.abs(f.values) ** 2)
    if not S.is_free:
        raise NotFree("intensity needs the identity or a free matrix")
    g = lct_fast(f, S, oversample=oversample)
    return Marginal(g.grid, np.abs(g.values) ** 2)


def metaplectic_covariance_check(f: SampledSignal, S: SymplecticMatrix,
                                 order: int = DEFAULT_ORDER) -> float:
    """Relative L2 distance between W(L_S f) and W f ∘ S⁻¹ on the grid of W(L_S f)"""
    g = lct_fast(f, S, oversample=1)
    w_g = wigner(g)
    w_f = wigner(f)
    px, pxi = w_g.mesh()
    inv = np.linalg.inv(S.entries)
    src_x = inv[0, 0] * px + inv[0, 1] * pxi
    src_xi = inv[1, 0] * px + inv[1, 1] * pxi
    predicted = w_f.sample(src_x, src_xi, order=order)
    ref = np.linalg.norm(w_g.values)
    residual = float(np.linalg.norm(w_g.values - predicted) / ref) if ref > 0 else 0.0
    logger.debug(f"metaplectic covariance residual {residual:.3e}")
    return residual


# --- ϑ-Wigner ---

def _support_box(W: PhaseSpaceDistribution) -> np.ndarray:
    """[[x_lo, x_hi], [ξ_lo, ξ_hi]] of |W| ≥ 1e-12·max"""
    mag = np.abs(W.values)
    peak = mag.max() if mag.size else 0.0
    if peak == 0.0:
        return np.array([[W.xgrid.x0, W.xgrid.x_last], [W.xigrid.x0, W.xigrid.x_last]])
    rows = np.nonzero(mag.max(axis=1) >= SUPPORT_THRESHOLD * peak)[0]
    cols = np.nonzero(mag.max(axis=0) >= SUPPORT_THRESHOLD * peak)[0]
    x = W.xgrid.points
    xi = W.xigrid.points
    return np.array([[x[rows[0]], x[rows[-1]]], [xi[cols[0]], xi[cols[-1]]]])


def default_theta_grids(distributions: Sequence[PhaseSpaceDistribution], d: np.ndarray,
                        n: int, pad: float = 0.05) -> Tuple[Grid, Grid]:
    """n × n grid over the D-image of the support boxes, padded"""
    corners = []
    for W in distributions:
        box = _support_box(W)
        for cx in box[0]:
            for cxi in box[1]:
                corners.append(d @ np.array([cx, cxi]))
    corners = np.array(corners)
    lo = corners.min(axis=0)
    hi = corners.max(axis=0)
    span = np.maximum(hi - lo, 1e-9)
    lo = lo - pad * span
    hi = hi + pad * span
    return (Grid(lo[0], (hi[0] - lo[0]) / (n - 1), n),
            Grid(lo[1], (hi[1] - lo[1]) / (n - 1), n))


def _pullback(W: PhaseSpaceDistribution, d: np.ndarray, xgrid: Grid, xigrid: Grid,
              order: int, shift: Optional[np.ndarray] = None) -> np.ndarray:
    """|det D|⁻¹ W(D⁻¹z − shift) on xgrid × xigrid"""
    inv = np.linalg.inv(d)
    px, pxi = np.meshgrid(xgrid.points, xigrid.points, indexing="ij")
    src_x = inv[0, 0] * px + inv[0, 1] * pxi
    src_xi = inv[1, 0] * px + inv[1, 1] * pxi
    if shift is not None:
        src_x = src_x - shift[0]
        src_xi = src_xi - shift[1]
    return W.sample(src_x, src_xi, order=order) / abs(np.linalg.det(d))


def wtheta_from_wigner(W: PhaseSpaceDistribution, coupling: DarbouxMatrix,
                       grids: Optional[Tuple[Grid, Grid]] = None,
                       order: int = DEFAULT_ORDER) -> PhaseSpaceDistribution:
    omega = coupling.target_form.omega
    if grids is None and coupling.is_identity:
        return PhaseSpaceDistribution(W.xgrid, W.xigrid, W.values, FormTag.NONSTANDARD, omega)
    if grids is None:
        grids = default_theta_grids([W], coupling.d, W.xgrid.n)
    values = _pullback(W, coupling.d, grids[0], grids[1], order)
    return PhaseSpaceDistribution(grids[0], grids[1], values, FormTag.NONSTANDARD, omega)


def wtheta(f: SampledSignal, S1: SymplecticMatrix, S2: SymplecticMatrix,
           grids: Optional[Tuple[Grid, Grid]] = None, order: int = DEFAULT_ORDER,
           max_workers: int = 1) -> PhaseSpaceDistribution:
    """W_ϑ f(z) = |det D|⁻¹ W f(D⁻¹z) for the coupling D of (S1, S2)"""
    coupling = coupling_matrix(S1, S2)
    if coupling.n != 1:
        raise BadParameter("wtheta is implemented for n = 1")
    return wtheta_from_wigner(wigner(f, max_workers=max_workers), coupling, grids, order)


def gaussian_wtheta_closed(S1: SymplecticMatrix, S2: SymplecticMatrix,
                           px: np.ndarray, pxi: np.ndarray) -> np.ndarray:
    """W_ϑ of 2^{1/4}e^{−πx²}: 2/|det D|·e^{−2π|D⁻¹z|²}"""
    coupling = coupling_matrix(S1, S2)
    inv = coupling.inverse
    ux = inv[0, 0] * px + inv[0, 1] * pxi
    uxi = inv[1, 0] * px + inv[1, 1] * pxi
    return 2.0 / abs(coupling.det) * np.exp(-2.0 * np.pi * (ux ** 2 + uxi ** 2))


# --- marginals and moments ---

def marginal(W: PhaseSpaceDistribution, axis: str = "x") -> Marginal:
    """axis="x": ∫ W dξ as a function of x; axis="xi": ∫ W dx as a function of ξ"""
    values = np.real(W.values)
    if axis == "x":
        return Marginal(W.xgrid, trapezoid(values, dx=W.xigrid.dx, axis=1), "x")
    if axis in ("xi", "ξ"):
        return Marginal(W.xigrid, trapezoid(values, dx=W.xgrid.dx, axis=0), "xi")
    raise BadParameter(f"axis must be 'x' or 'xi', got {axis!r}")


def moment(W: PhaseSpaceDistribution, alpha: int, beta: int) -> float:
    """∫∫ x^α ξ^β W dx dξ"""
    if alpha < 0 or beta < 0:
        raise BadParameter("moment orders must be non-negative")
    if alpha + beta > MAX_MOMENT_ORDER:
        raise MomentOrderTooHigh(f"order {alpha + beta} exceeds {MAX_MOMENT_ORDER}")
    px, pxi = W.mesh()
    integrand = px ** alpha * pxi ** beta * np.real(W.values)
    return float(trapezoid(trapezoid(integrand, dx=W.xigrid.dx, axis=1), dx=W.xgrid.dx))


def moment_matrix(W: PhaseSpaceDistribution) -> Tuple[np.ndarray, np.ndarray]:
    """(means, central second-moment matrix) of a normalised distribution"""
    mass = moment(W, 0, 0)
    if mass == 0.0:
        raise BadParameter("distribution has zero mass")
    means = np.array([moment(W, 1, 0), moment(W, 0, 1)]) / mass
    raw = np.array([[moment(W, 2, 0), moment(W, 1, 1)],
                    [moment(W, 1, 1), moment(W, 0, 2)]]) / mass
    return means, raw - np.outer(means, means)


# --- Radon ---

def radon_marginal(f: Union[SampledSignal, PhaseSpaceDistribution], line: RadonLineSpec,
                   order: int = DEFAULT_ORDER) -> Marginal:
    """p ↦ ∫∫ δ(p − a x − b ξ) W f(x, ξ) dx dξ by quadrature along each line"""
    W = f if isinstance(f, PhaseSpaceDistribution) else wigner(f)
    a, b = line.direction
    norm = float(np.hypot(a, b))
    normal = np.array([a, b]) / norm
    tangent = np.array([-b, a]) / norm

    x_ext = max(abs(W.xgrid.x0), abs(W.xgrid.x_last))
    xi_ext = max(abs(W.xigrid.x0), abs(W.xigrid.x_last))
    if line.offsets is None:
        reach = abs(a) * x_ext + abs(b) * xi_ext
        n = W.xgrid.n
        offsets = -reach + 2.0 * reach / (n - 1) * np.arange(n)
    else:
        offsets = line.offsets
    if offsets.size < 8 or not np.allclose(np.diff(offsets), offsets[1] - offsets[0], rtol=1e-9, atol=0.0):
        raise BadParameter("radon offsets must be a uniform grid of at least 8 points")
    step = min(W.xgrid.dx, W.xigrid.dx)
    half = float(np.hypot(x_ext, xi_ext))
    t = np.arange(-half, half + 0.5 * step, step)

    base = np.outer(offsets / norm, normal)
    px = base[:, 0:1] + t[None, :] * tangent[0]
    pxi = base[:, 1:2] + t[None, :] * tangent[1]
    samples = np.real(W.sample(px, pxi, order=order))
    values = trapezoid(samples, dx=step, axis=1) / norm
    return Marginal(Grid(offsets[0], offsets[1] - offsets[0], offsets.size), values, "radon")


# --- linear perturbation ---

def _perturbation_grids(f: SampledSignal, a11: float, a22: float) -> Tuple[Grid, Grid, bool, bool]:
    xg = f.grid
    fg = frequency_grid(xg)
    x_scale = 1.0 / a11
    xi_scale = -2.0 * a22
    x_pts = xg.points * x_scale
    xi_pts = fg.points * xi_scale
    return (Grid(min(x_pts[0], x_pts[-1]), xg.dx * abs(x_scale), xg.n),
            Grid(min(xi_pts[0], xi_pts[-1]), fg.dx * abs(xi_scale), fg.n),
            x_scale < 0, xi_scale < 0)


def perturbation_pair(A11: float, A22: float, C1: float = 0.0, D2: float = 0.0) -> Tuple[SymplecticMatrix, SymplecticMatrix]:
    """S1 = [[1/A11, 0], [C1, A11]], S2 = [[0, −2A22], [1/(2A22), D2]]

    For this pair |A11|·B_A f = W_ϑ f.
    """
    if A11 == 0 or A22 == 0:
        raise BadParameter("A11 and A22 must be non-zero")
    s1 = from_blocks(1.0 / A11, 0.0, C1, A11)
    s2 = from_blocks(0.0, -2.0 * A22, 1.0 / (2.0 * A22), D2)
    return s1, s2


def linear_perturbation(f: SampledSignal, A11: float, A22: float, method: str = "wigner",
                        imaginary_tol: float = IMAGINARY_TOL) -> PhaseSpaceDistribution:
    """B_A f(x, ξ) = ∫ f(A11·x − A22·y) conj f(A11·x + A22·y) e^{−2πiξy} dy

    ``method="wigner"`` rescales W f: (2|A22|)⁻¹ W f(A11·x, −ξ/(2A22));
    ``method="direct"`` sums the lag integral with an explicit DFT matrix.
    Both use the grids x = u/A11, ξ = −2A22·ν for (u, ν) on the Wigner grid.
    """
    a11 = float(np.asarray(A11).reshape(-1)[0])
    a22 = float(np.asarray(A22).reshape(-1)[0])
    if np.size(A11) != 1 or np.size(A22) != 1:
        raise BadParameter("linear_perturbation is implemented for n = 1")
    if a11 == 0 or a22 == 0:
        raise BadParameter("A11 and A22 must be non-zero")
    xgrid, xigrid, flip_x, flip_xi = _perturbation_grids(f, a11, a22)

    if method == "wigner":
        values = np.asarray(wigner(f, imaginary_tol=imaginary_tol).values) / (2.0 * abs(a22))
    elif method == "direct":
        n = f.n
        f2 = _half_sampled(f)
        lags = np.arange(-n + 1, n)
        y = lags * f.dx / (2.0 * a22)
        xi_out = frequency_grid(f.grid).points * (-2.0 * a22)
        dft = np.exp(-2j * np.pi * np.outer(y, xi_out))
        rows = np.arange(n)
        plus = 2 * rows[:, None] + lags[None, :]
        minus = 2 * rows[:, None] - lags[None, :]
        valid = (plus >= 0) & (plus < 2 * n) & (minus >= 0) & (minus < 2 * n)
        kernel = np.zeros(plus.shape, dtype=complex)
        kernel[valid] = f2[minus[valid]] * np.conj(f2[plus[valid]])
        raw = (f.dx / (2.0 * abs(a22))) * (kernel @ dft)
        peak = float(np.max(np.abs(raw)))
        if float(np.max(np.abs(raw.imag))) > imaginary_tol * max(peak, 1e-300):
            raise ImaginaryResidual("linear perturbation has a non-negligible imaginary part")
        values = raw.real
    else:
        raise BadParameter(f"method must be 'wigner' or 'direct', got {method!r}")

    if flip_x:
        values = values[::-1, :]
    if flip_xi:
        values = values[:, ::-1]
    return PhaseSpaceDistribution(xgrid, xigrid, values)


# --- covariance residuals ---

def cohen_translation_probe(f: SampledSignal, S1: SymplecticMatrix, S2: SymplecticMatrix,
                            z0: Sequence[float], order: int = DEFAULT_ORDER) -> CohenProbe:
    """Max-norm residuals of W_ϑ(T(z0)f) against W_ϑ f(· − z0) and W_ϑ f(· − D z0)"""
    coupling = coupling_matrix(S1, S2)
    z = np.asarray(z0, dtype=float)
    w_f = wigner(f)
    w_t = wigner(hw_translate(f, z))
    grids = default_theta_grids([w_f, w_t], coupling.d, f.n)
    observed = _pullback(w_t, coupling.d, grids[0], grids[1], order)
    # W_ϑ f(z − z0) = |det D|⁻¹ W f(D⁻¹z − D⁻¹z0)
    sigma_pred = _pullback(w_f, coupling.d, grids[0], grids[1], order, shift=coupling.inverse @ z)
    d_pred = _pullback(w_f, coupling.d, grids[0], grids[1], order, shift=z)
    return CohenProbe(r_sigma=float(np.max(np.abs(observed - sigma_pred))),
                      r_d=float(np.max(np.abs(observed - d_pred))),
                      max_abs=float(np.max(np.abs(observed))))


def theta_covariance_check(f: SampledSignal, S1: SymplecticMatrix, S2: SymplecticMatrix,
                           z0: Sequence[float], order: int = DEFAULT_ORDER) -> float:
    """max |W_ϑ(T^ϑ(z0) f)(z) − W_ϑ f(z − z0)| relative to max |W_ϑ f|"""
    coupling = coupling_matrix(S1, S2)
    z = np.asarray(z0, dtype=float)
    w_f = wigner(f)
    w_t = wigner(theta_translate(f, z, S1, S2))
    grids = default_theta_grids([w_f, w_t], coupling.d, f.n)
    observed = _pullback(w_t, coupling.d, grids[0], grids[1], order)
    predicted = _pullback(w_f, coupling.d, grids[0], grids[1], order, shift=coupling.inverse @ z)
    peak = float(np.max(np.abs(predicted)))
    return float(np.max(np.abs(observed - predicted))) / peak if peak > 0 else 0.0


def smoothed_distribution(W: PhaseSpaceDistribution, kernel_width: float) -> PhaseSpaceDistribution:
    """Φ ⋆ W for the unit-mass Gaussian Φ(z) = e^{−|z|²/(2w²)}/(2πw²)"""
    if kernel_width <= 0:
        raise BadParameter("kernel_width must be positive")
    hx = int(min(np.ceil(4.0 * kernel_width / W.xgrid.dx), W.xgrid.n // 2))
    hxi = int(min(np.ceil(4.0 * kernel_width / W.xigrid.dx), W.xigrid.n // 2))
    kx = W.xgrid.dx * np.arange(-hx, hx + 1)
    kxi = W.xigrid.dx * np.arange(-hxi, hxi + 1)
    kernel = np.exp(-(kx[:, None] ** 2 + kxi[None, :] ** 2) / (2.0 * kernel_width ** 2))
    kernel *= W.xgrid.dx * W.xigrid.dx / (2.0 * np.pi * kernel_width ** 2)
    values = fftconvolve(np.real(W.values), kernel, mode="same")
    return PhaseSpaceDistribution(W.xgrid, W.xigrid, values, W.form, W.omega)
