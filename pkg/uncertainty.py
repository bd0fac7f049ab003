#!/usr/bin/env python3
"""
Uncertainty Principles
======================

Numerical verification of four uncertainty principles for linear canonical
transforms:

* Heisenberg: Δ_{S1}x_j² · Δ_{S2}ξ_k² ≥ ‖f‖⁴/(16π²) · |(S1 J S2ᵀ)_{jk}|²
* Robertson–Schrödinger: Υ + (i/4π)Ω ≥ 0 with Υ = DΣDᵀ, Ω = DJDᵀ
* Hardy: a signal and its transform cannot both decay faster than the
  critical Gaussian (αβ ≤ π²/b², eigenvalues of MBᵀNB ≤ π² in nD)
* Paley–Wiener: compact support ⇔ entire extension with controlled growth

Each check returns an attrs report; classification thresholds and tolerances
are keyword arguments fed from ``lct_config.json`` by the CLI.
"""

import math
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple, Union

import attrs
import numpy as np
import scipy.linalg

from lct_engine import (GaussianSpec, Grid, SampledSignal, SeparableSignal,
                        Signal, grids_of, hw_translate, integrate, lct,
                        lct_direct, lct_fast, lct_prefactor, norm2, normalize)
from lct_errors import (BadParameter, DegeneratePair, HeavyTails,
                        InsufficientDecay, MeanNotCentered, NotFree,
                        NotInSpTheta, NotNormalized, NotSPD, SupportViolation)
from lct_logging import get_logger
from phase_space import moment, moment_matrix, wigner, wtheta
from symplectic_core import (FreeSymplectic, SymplecticFormNS,
                             SymplecticMatrix, as_free, block_split, compose,
                             coupling_matrix, heisenberg_bound_matrix,
                             in_sp_theta, inverse)

logger = get_logger("uncertainty")

EDGE_TOL = 1e-10
PSD_TOL = 1e-8
NOISE_FLOOR = 1e-12
FIT_BAND = (0.2, 0.8)
MIN_ABOVE_FLOOR = 32
MIN_BAND_SAMPLES = 8


class HardyKind(Enum):
    SUBCRITICAL = "Subcritical"
    CRITICAL = "Critical"
    SUPERCRITICAL = "Supercritical"


@attrs.define(frozen=True, eq=False)
class SpreadReport:
    mean: np.ndarray
    spread: float = attrs.field(validator=attrs.validators.ge(0.0))
    norm_sq: float
    per_axis: Optional[np.ndarray] = None


@attrs.define(frozen=True)
class HeisenbergReport:
    lhs: float
    rhs: float
    slack: float
    diagnostics: Dict = attrs.field(factory=dict)

    @property
    def ratio(self) -> float:
        """slack / rhs (0 when rhs vanishes)"""
        return self.slack / self.rhs if self.rhs > 0 else 0.0


@attrs.define(frozen=True, eq=False)
class CovarianceReport:
    sigma: np.ndarray
    upsilon: np.ndarray
    omega: SymplecticFormNS
    min_eig: float
    scalar_gap: Optional[float] = None
    theta_upsilon: Optional[np.ndarray] = None

    def __attrs_post_init__(self):
        for name in ("sigma", "upsilon"):
            m = getattr(self, name)
            if np.max(np.abs(m - m.T)) > 1e-9 * max(1.0, np.max(np.abs(m))):
                raise BadParameter(f"{name} must be symmetric")

    def is_psd(self, tol: float = PSD_TOL) -> bool:
        return self.min_eig >= -tol * (1.0 + float(np.max(np.abs(self.upsilon))))


@attrs.define(frozen=True, eq=False)
class HardyClassification:
    kind: HardyKind
    alpha: Union[float, np.ndarray]
    beta: Union[float, np.ndarray]
    threshold: Union[float, np.ndarray]
    direct_eigenvalues: Optional[np.ndarray] = None
    critical_gaussian: Optional[GaussianSpec] = None
    r_squared: Optional[Tuple[float, float]] = None


@attrs.define(frozen=True, eq=False)
class PaleyWienerReport:
    support_radius: float = attrs.field(validator=attrs.validators.gt(0.0))
    sample_points: List[Tuple[complex, float]]
    fitted_eta_rate: Optional[float]
    expected_rate: float
    bound_constants: Dict[int, float]
    refined_constants: Dict[int, float]
    bound_satisfied: Dict[int, bool]
    zero_order_bound: float
    zero_order_ok: bool
    rate_ok: bool


# --- spreads and Heisenberg ---

def _is_identity(S: Optional[SymplecticMatrix]) -> bool:
    return S is None or np.array_equal(S.entries, np.eye(S.entries.shape[0]))


def _transformed(f: Signal, S: Optional[SymplecticMatrix], oversample: int) -> Signal:
    if _is_identity(S):
        return f
    if not S.is_free:
        raise NotFree("spread needs the identity or a free matrix")
    return lct(f, S, oversample=oversample)


def _check_edges(g: Signal, edge_tol: float):
    density = np.abs(np.asarray(g.values)) ** 2
    peak = density.max()
    if peak == 0.0:
        return
    edge = 0.0
    for axis in range(density.ndim):
        first = np.take(density, 0, axis=axis)
        last = np.take(density, -1, axis=axis)
        edge = max(edge, float(first.max()), float(last.max()))
    if edge > edge_tol * peak:
        raise HeavyTails(f"|g|² at the window edge is {edge / peak:.2e} of its peak; spread unreliable",
                         edge_ratio=edge / peak)


def _axis_coords(g: Signal) -> List[np.ndarray]:
    """Coordinates broadcast against g.values, one array per axis"""
    grids = grids_of(g)
    coords = []
    for k, grid in enumerate(grids):
        shape = [1] * len(grids)
        shape[k] = grid.n
        coords.append(grid.points.reshape(shape))
    return coords


def spread(f: Signal, S: Optional[SymplecticMatrix] = None, oversample: int = 2,
           edge_tol: float = EDGE_TOL) -> SpreadReport:
    """⟨ξ⟩ = ∫ξ|g|²/‖f‖², Δ² = ∫|ξ − ⟨ξ⟩|²|g|² for g = L_S f (g = f when S is the identity)"""
    g = _transformed(f, S, oversample)
    _check_edges(g, edge_tol)
    norm_sq = norm2(f) ** 2
    density = np.abs(np.asarray(g.values)) ** 2
    grids = grids_of(g)
    coords = _axis_coords(g)
    if norm_sq == 0.0:
        return SpreadReport(np.zeros(len(grids)), 0.0, 0.0, np.zeros(len(grids)))
    mean = np.array([integrate(c * density, grids).real / norm_sq for c in coords])
    per_axis = np.array([integrate((c - m) ** 2 * density, grids).real for c, m in zip(coords, mean)])
    return SpreadReport(mean, float(per_axis.sum()), norm_sq, per_axis)


def heisenberg_check(f: SampledSignal, S1: SymplecticMatrix, S2: SymplecticMatrix,
                     j: int = 0, k: int = 0, a: Optional[Sequence[float]] = None,
                     b: Optional[Sequence[float]] = None, oversample: int = 2,
                     edge_tol: float = EDGE_TOL) -> HeisenbergReport:
    """lhs = ∫(x_j − a_j)²|Ŝ1f|² · ∫(ξ_k − b_k)²|Ŝ2f|², rhs = ‖f‖⁴/16π² · |M_jk|²

    a and b default to the means, which minimise the left-hand side.
    """
    g1 = _transformed(f, S1, oversample)
    g2 = _transformed(f, S2, oversample)
    _check_edges(g1, edge_tol)
    _check_edges(g2, edge_tol)
    norm_sq = norm2(f) ** 2

    def second_moment(g: Signal, axis: int, center: Optional[Sequence[float]]) -> float:
        density = np.abs(np.asarray(g.values)) ** 2
        grids = grids_of(g)
        c = _axis_coords(g)[axis]
        if center is None:
            total = integrate(density, grids).real
            mu = integrate(c * density, grids).real / total if total > 0 else 0.0
        else:
            mu = float(np.atleast_1d(center)[axis])
        return integrate((c - mu) ** 2 * density, grids).real

    lhs = second_moment(g1, j, a) * second_moment(g2, k, b)
    bound = heisenberg_bound_matrix(S1, S2)
    rhs = norm_sq ** 2 / (16.0 * np.pi ** 2) * abs(bound[j, k]) ** 2
    logger.debug(f"heisenberg lhs={lhs:.6e} rhs={rhs:.6e}")
    return HeisenbergReport(float(lhs), float(rhs), float(lhs - rhs), {"bound_entry": float(bound[j, k])})


def heisenberg_nd(f: SeparableSignal, S1: SymplecticMatrix, S2: SymplecticMatrix,
                  oversample: int = 2, edge_tol: float = EDGE_TOL) -> HeisenbergReport:
    """Δ_{S1}x · Δ_{S2}ξ ≥ ‖f‖²/4π · Σ_j |(S1 J S2ᵀ)_jj|

    The trace-form comparison Tr[B⁻¹Cov_ξB⁻ᵀ]·‖|x|f‖² vs n²‖f‖⁴/16π² is
    reported in ``diagnostics`` when S2 is free.
    """
    n = f.ndim
    sx = spread(f, S1, oversample, edge_tol)
    sxi = spread(f, S2, oversample, edge_tol)
    norm_sq = norm2(f) ** 2
    bound = heisenberg_bound_matrix(S1, S2)
    lhs = math.sqrt(sx.spread) * math.sqrt(sxi.spread)
    rhs = norm_sq / (4.0 * np.pi) * float(np.sum(np.abs(np.diag(bound))))

    diagnostics: Dict = {}
    if S2.is_free:
        g = lct(f, S2, oversample=oversample)
        density = np.abs(np.asarray(g.values)) ** 2
        coords = _axis_coords(g)
        grids = grids_of(g)
        cov = np.array([[integrate(coords[p] * coords[q] * density, grids).real for q in range(n)]
                        for p in range(n)])
        b_inv = as_free(S2).b_inv
        x_sq = integrate(sum(c ** 2 for c in _axis_coords(f)) * np.abs(np.asarray(f.values)) ** 2,
                         grids_of(f)).real
        diagnostics = {
            "trace_lhs": float(np.trace(b_inv @ cov @ b_inv.T) * x_sq),
            "trace_rhs": float(n ** 2 * norm_sq ** 2 / (16.0 * np.pi ** 2)),
        }
    return HeisenbergReport(float(lhs), float(rhs), float(lhs - rhs), diagnostics)


# --- covariance and Robertson–Schrödinger ---

def _spectral_derivatives(f: SeparableSignal) -> List[np.ndarray]:
    """D_k f = (2πi)⁻¹ ∂f/∂x_k, applied as multiplication by ξ_k after an FFT along axis k"""
    derivatives = []
    for k, grid in enumerate(f.grids):
        shape = [1] * f.ndim
        shape[k] = grid.n
        xi = np.fft.fftfreq(grid.n, d=grid.dx).reshape(shape)
        derivatives.append(np.fft.ifft(np.fft.fft(f.values, axis=k) * xi, axis=k))
    return derivatives


def _separable_moments(f: SeparableSignal) -> Tuple[np.ndarray, np.ndarray]:
    """Means and covariance of z = (x, ξ) under W f, read off f without building the 2n-dim W"""
    n, grids = f.ndim, f.grids
    mesh = f.mesh
    x = [mesh[..., k] for k in range(n)]
    density = np.abs(f.values) ** 2
    conj = np.conj(f.values)
    d = _spectral_derivatives(f)

    def mean_of(values: np.ndarray) -> float:
        return integrate(values, grids).real

    means = np.array([mean_of(x[j] * density) for j in range(n)] +
                     [mean_of(d[j] * conj) for j in range(n)])
    second = np.zeros((2 * n, 2 * n))
    for j in range(n):
        for k in range(n):
            second[j, k] = mean_of(x[j] * x[k] * density)
            second[n + j, n + k] = mean_of(d[j] * np.conj(d[k]))
            second[j, n + k] = second[n + k, j] = mean_of(x[j] * d[k] * conj)
    sigma = second - np.outer(means, means)
    return means, 0.5 * (sigma + sigma.T)


def covariance_sigma(f: Signal, normalize_signal: bool = False, center: bool = True,
                     normalization_tol: float = 1e-6, centering_tol: float = 1e-6) -> np.ndarray:
    """Σ = ∫ z zᵀ W f(z) dz for a unit-norm signal with zero means

    One-dimensional signals go through the sampled Wigner distribution. For a
    SeparableSignal on n axes the 2n×2n matrix, ordered (x_1..x_n, ξ_1..ξ_n),
    comes from x_j and the spectral derivative D_k = (2πi)⁻¹∂_k; centering
    subtracts the means, which is what a Heisenberg–Weyl translation does to Σ.
    """
    nrm = norm2(f)
    if abs(nrm - 1.0) > normalization_tol:
        if not normalize_signal:
            raise NotNormalized(f"‖f‖ = {nrm:.8f}; normalise first or pass normalize_signal=True", norm=nrm)
        f = normalize(f)
    if isinstance(f, SeparableSignal):
        means, sigma = _separable_moments(f)
        if np.max(np.abs(means)) > centering_tol and not center:
            raise MeanNotCentered(f"means {means.tolist()} are not zero", means=means.tolist())
        return sigma
    W = wigner(f)
    means, _ = moment_matrix(W)
    if np.max(np.abs(means)) > centering_tol:
        if not center:
            raise MeanNotCentered(f"means {means.tolist()} are not zero", means=means.tolist())
        logger.debug(f"centering signal by {(-means).tolist()}")
        f = hw_translate(f, -means)
        W = wigner(f)
        means, _ = moment_matrix(W)
        if np.max(np.abs(means)) > centering_tol:
            raise MeanNotCentered(f"means {means.tolist()} remain after centering", means=means.tolist())
    sigma = np.array([[moment(W, 2, 0), moment(W, 1, 1)],
                      [moment(W, 1, 1), moment(W, 0, 2)]])
    return sigma


def _min_eig(upsilon: np.ndarray, omega: np.ndarray) -> float:
    hermitian = upsilon.astype(complex) + 1j / (4.0 * np.pi) * omega
    hermitian = 0.5 * (hermitian + hermitian.conj().T)
    return float(np.min(np.linalg.eigvalsh(hermitian)))


def rs_check(f: Signal, S1: SymplecticMatrix, S2: SymplecticMatrix,
             normalize_signal: bool = False, cross_validate: bool = False,
             normalization_tol: float = 1e-6, centering_tol: float = 1e-6) -> CovarianceReport:
    """Υ + (i/4π)Ω ≥ 0 for Υ = DΣDᵀ, Ω = DJDᵀ; includes the scalar n = 1 form"""
    ndim = len(grids_of(f))
    if S1.n != ndim:
        raise BadParameter(f"the pair acts on n = {S1.n} but the signal has {ndim} axes")
    if cross_validate and ndim != 1:
        raise BadParameter("cross-validation through W_ϑ is one-dimensional")
    coupling = coupling_matrix(S1, S2)
    sigma = covariance_sigma(f, normalize_signal, True, normalization_tol, centering_tol)
    d = coupling.d
    upsilon = d @ sigma @ d.T
    upsilon = 0.5 * (upsilon + upsilon.T)
    omega = coupling.target_form
    gap = None
    if ndim == 1:
        b1, b2 = block_split(S1), block_split(S2)
        det_term = float(b2.A[0, 0] * b1.B[0, 0] - b1.A[0, 0] * b2.B[0, 0])
        gap = float(upsilon[0, 0] * upsilon[1, 1] - upsilon[0, 1] ** 2 - det_term ** 2 / (16.0 * np.pi ** 2))

    theta_upsilon = None
    if cross_validate:
        g = normalize(f) if normalize_signal else f
        _, theta_upsilon = moment_matrix(wtheta(g, S1, S2))
    return CovarianceReport(sigma=sigma, upsilon=upsilon, omega=omega,
                            min_eig=_min_eig(upsilon, omega.omega), scalar_gap=gap,
                            theta_upsilon=theta_upsilon)


def rs_invariance_probe(report: CovarianceReport, P: np.ndarray, tol: float = PSD_TOL) -> bool:
    """Whether PΥPᵀ + (i/4π)Ω keeps the semidefiniteness verdict of the report"""
    p = np.asarray(P, dtype=float)
    if not in_sp_theta(p, report.omega):
        raise NotInSpTheta("P does not preserve the form Ω")
    moved = p @ report.upsilon @ p.T
    moved_min = _min_eig(moved, report.omega.omega)
    before = report.is_psd(tol)
    after = moved_min >= -tol * (1.0 + float(np.max(np.abs(moved))))
    return before == after


def saturating_gaussian(S1: SymplecticMatrix, S2: SymplecticMatrix) -> GaussianSpec:
    """Critical Gaussian of the pair: α = π/|a1b2 − a2b1|, phase (a2d1 − b2c1)/(a1b2 − a2b1)"""
    if S1.n != 1 or S2.n != 1:
        raise BadParameter("saturating_gaussian is one-dimensional")
    m1, m2 = S1.entries, S2.entries
    a1, b1, c1, d1 = m1[0, 0], m1[0, 1], m1[1, 0], m1[1, 1]
    a2, b2, d2 = m2[0, 0], m2[0, 1], m2[1, 1]
    det = a1 * b2 - a2 * b1
    if abs(det) < 1e-12:
        raise DegeneratePair("a1·b2 − a2·b1 vanishes")
    return GaussianSpec(alpha=np.pi / abs(det), phase=(a2 * d1 - b2 * c1) / det).normalized()


def saturating_signal(S1: SymplecticMatrix, S2: SymplecticMatrix, grid: Grid,
                      oversample: int = 2) -> SampledSignal:
    """The critical Gaussian placed in the S1 domain and pulled back by L_{S1⁻¹}"""
    g = saturating_gaussian(S1, S2).on_grid(grid)
    if _is_identity(S1):
        return g
    back = inverse(S1)
    if not back.is_free:
        raise BadParameter("S1 must be the identity or free")
    return lct_fast(g, back, oversample=oversample)


# --- Hardy ---

def hardy_classify_params(alpha: float, beta: float, S: Union[SymplecticMatrix, FreeSymplectic],
                          rel_tol: float = 1e-6) -> HardyClassification:
    """Compare αβ with π²/b²"""
    if alpha <= 0 or beta <= 0:
        raise BadParameter("decay rates must be positive")
    F = as_free(S)
    if F.n != 1:
        raise BadParameter("hardy_classify_params is one-dimensional; use hardy_nd_eigs")
    b = float(F.blocks.B[0, 0])
    threshold = np.pi ** 2 / b ** 2
    ratio = alpha * beta / threshold
    if abs(ratio - 1.0) <= rel_tol:
        kind = HardyKind.CRITICAL
    elif ratio > 1.0:
        kind = HardyKind.SUPERCRITICAL
    else:
        kind = HardyKind.SUBCRITICAL
    gaussian = None
    if kind is HardyKind.CRITICAL:
        gaussian = GaussianSpec(alpha=alpha, phase=float(F.b_inv_a[0, 0]))
    return HardyClassification(kind, float(alpha), float(beta), float(threshold), critical_gaussian=gaussian)


def fit_decay(x: np.ndarray, values: np.ndarray, floor: float = NOISE_FLOOR,
              r2_min: float = 0.99) -> Tuple[float, float]:
    """α and R² of a quadratic fit of log|f| in the [0.2, 0.8] band of its dynamic range"""
    mag = np.abs(values)
    peak = mag.max() if mag.size else 0.0
    if peak == 0.0:
        raise InsufficientDecay("zero signal has no decay rate")
    above = mag > floor * peak
    if np.count_nonzero(above) < MIN_ABOVE_FLOOR:
        raise InsufficientDecay(f"only {np.count_nonzero(above)} samples above the noise floor")
    logs = np.full(mag.shape, -np.inf)
    logs[above] = np.log(mag[above])
    depth = np.log(peak) - logs
    dynamic = -np.log(floor)
    band = above & (depth >= FIT_BAND[0] * dynamic) & (depth <= FIT_BAND[1] * dynamic)
    if np.count_nonzero(band) < MIN_BAND_SAMPLES:
        raise InsufficientDecay(f"only {np.count_nonzero(band)} samples in the fit band")
    coeffs = np.polyfit(x[band], logs[band], 2)
    fitted = np.polyval(coeffs, x[band])
    ss_res = float(np.sum((logs[band] - fitted) ** 2))
    ss_tot = float(np.sum((logs[band] - logs[band].mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 0.0
    alpha = -float(coeffs[0])
    if r2 < r2_min or alpha <= 0:
        raise InsufficientDecay(f"envelope is not Gaussian (R² = {r2:.4f}, α = {alpha:.4g})",
                                r_squared=r2)
    return alpha, r2


def _signal_decay(g: SampledSignal, floor: float, r2_min: float) -> Tuple[float, float]:
    return fit_decay(g.x, g.values, floor, r2_min)


def hardy_fit(f: SampledSignal, S: SymplecticMatrix, S1: Optional[SymplecticMatrix] = None,
              rel_tol: float = 1e-2, r2_min: float = 0.99, floor: float = NOISE_FLOOR,
              oversample: int = 2) -> HardyClassification:
    """Fit the Gaussian decay of f (or L_{S1}f) and of L_S f, then classify

    With S1 given the pair (S1, S) is classified through S·S1⁻¹.
    """
    first = _transformed(f, S1, oversample)
    alpha, r2a = _signal_decay(first, floor, r2_min)
    beta, r2b = _signal_decay(lct_fast(f, S, oversample=oversample), floor, r2_min)
    reference = S if _is_identity(S1) else compose(S, inverse(S1))
    result = hardy_classify_params(alpha, beta, reference, rel_tol)
    logger.debug(f"hardy fit α={alpha:.6g} β={beta:.6g} threshold={result.threshold:.6g} → {result.kind.value}")
    return attrs.evolve(result, r_squared=(r2a, r2b))


def _check_spd(m: np.ndarray, name: str) -> np.ndarray:
    arr = np.atleast_2d(np.asarray(m, dtype=float))
    if arr.shape[0] != arr.shape[1] or np.max(np.abs(arr - arr.T)) > 1e-10 * max(1.0, np.max(np.abs(arr))):
        raise NotSPD(f"{name} must be symmetric")
    if np.min(np.linalg.eigvalsh(arr)) <= 0:
        raise NotSPD(f"{name} must be positive-definite")
    return arr


def _sqrtm_spd(m: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(m)
    return (v * np.sqrt(w)) @ v.T


def hardy_nd_eigs(M: np.ndarray, N: np.ndarray, S: Union[SymplecticMatrix, FreeSymplectic],
                  rel_tol: float = 1e-6) -> HardyClassification:
    """Eigenvalues of MBᵀNB via the symmetric similarity M^{1/2}BᵀNBM^{1/2}"""
    m = _check_spd(M, "M")
    nm = _check_spd(N, "N")
    F = as_free(S)
    if m.shape != (F.n, F.n) or nm.shape != (F.n, F.n):
        raise BadParameter(f"M and N must be {F.n}×{F.n}")
    b = F.blocks.B
    root = _sqrtm_spd(m)
    sym = root @ b.T @ nm @ b @ root
    eigs = np.sort(np.linalg.eigvalsh(0.5 * (sym + sym.T)))
    direct = np.sort(np.linalg.eigvals(m @ b.T @ nm @ b).real)
    pi2 = np.pi ** 2
    if np.any(eigs > pi2 * (1.0 + rel_tol)):
        kind = HardyKind.SUPERCRITICAL
    elif np.all(np.abs(eigs - pi2) <= rel_tol * pi2):
        kind = HardyKind.CRITICAL
    else:
        kind = HardyKind.SUBCRITICAL
    gaussian = GaussianSpec(alpha=m, phase=F.b_inv_a) if kind is HardyKind.CRITICAL else None
    return HardyClassification(kind, m, nm, eigs, direct_eigenvalues=direct, critical_gaussian=gaussian)


def hardy_nd_pair(M: np.ndarray, N: np.ndarray, S1: SymplecticMatrix, S2: SymplecticMatrix,
                  rel_tol: float = 1e-6) -> HardyClassification:
    return hardy_nd_eigs(M, N, compose(S2, inverse(S1)), rel_tol)


def balancing_transform(M: np.ndarray, N: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """L with LᵀML = L⁻¹NL⁻ᵀ = Λ = diag(√λ), λ the eigenvalues of MN"""
    m = _check_spd(M, "M")
    nm = _check_spd(N, "N")
    r = scipy.linalg.cholesky(m, lower=False)
    lam, u = np.linalg.eigh(r @ nm @ r.T)
    L = scipy.linalg.solve_triangular(r, u, lower=False) * lam ** 0.25
    return L, np.diag(np.sqrt(lam))


def _axis_profile(values: np.ndarray, axis: int) -> np.ndarray:
    """1D cut along axis through the peak"""
    peak = np.unravel_index(np.argmax(np.abs(values)), values.shape)
    index = list(peak)
    index[axis] = slice(None)
    return values[tuple(index)]


def hardy_fit_nd(f: SeparableSignal, S: SymplecticMatrix, rel_tol: float = 1e-2,
                 r2_min: float = 0.99, floor: float = NOISE_FLOOR,
                 oversample: int = 2) -> HardyClassification:
    """Per-axis decay fits M = diag(α), N = diag(β) classified by hardy_nd_eigs"""
    g = lct(f, S, oversample=oversample)
    alphas, betas = [], []
    for k in range(f.ndim):
        alphas.append(fit_decay(f.grids[k].points, _axis_profile(np.asarray(f.values), k), floor, r2_min)[0])
        betas.append(fit_decay(g.grids[k].points, _axis_profile(np.asarray(g.values), k), floor, r2_min)[0])
    return hardy_nd_eigs(np.diag(alphas), np.diag(betas), S, rel_tol)


# --- Paley–Wiener ---

def _support_radius(f: SampledSignal, tol: float) -> float:
    inside = np.abs(f.values) > tol
    if not np.any(inside):
        return f.dx
    return float(np.max(np.abs(f.x[inside])))


def _midpoints(values: np.ndarray) -> np.ndarray:
    v = np.unique(values)
    return 0.5 * (v[:-1] + v[1:])


def _weighted_growth(f: SampledSignal, F: FreeSymplectic, zz: np.ndarray, R: float,
                     max_workers: int) -> Tuple[np.ndarray, np.ndarray]:
    """|g(z)| and |g(z)| e^{2π(d/b)ξη − 2πR|η/b|}"""
    b = float(F.blocks.B[0, 0])
    dbi = float(F.db_inv[0, 0])
    g = np.abs(lct_direct(f, F, zz, max_workers=max_workers))
    growth = np.exp(2.0 * np.pi * dbi * zz.real * zz.imag - 2.0 * np.pi * R * np.abs(zz.imag / b))
    return g, g * growth


def _ray_rate(f: SampledSignal, F: FreeSymplectic, axis: np.ndarray, max_workers: int) -> Optional[float]:
    """Largest slope of log(|g(iη)|·|η/b|) against |η/b| over the two half-rays η > 0 and η < 0"""
    b = abs(float(F.blocks.B[0, 0]))
    slopes = []
    for sign in (1.0, -1.0):
        at_ray = np.abs(lct_direct(f, F, 1j * sign * b * axis, max_workers=max_workers))
        if np.all(np.isfinite(at_ray)) and np.all(at_ray > 0):
            slope, _ = np.polyfit(axis, np.log(at_ray * axis), 1)
            slopes.append(float(slope))
    return max(slopes) if slopes else None


def paley_wiener_verify(f: SampledSignal, S: SymplecticMatrix, radius: Optional[float] = None,
                        xi_samples: Sequence[float] = (-2.0, -1.0, 0.0, 1.0, 2.0),
                        eta_samples: Sequence[float] = (-2.0, -1.0, 0.0, 1.0, 2.0),
                        orders: Sequence[int] = (1, 2, 4), rate_axis: Sequence[float] = (4.0, 6.0, 8.0),
                        support_tol: float = 1e-12, rate_tol: float = 0.05, bound_tol: float = 0.5,
                        max_workers: int = 1) -> PaleyWienerReport:
    """Growth of the entire extension g(z) = L_S f(ξ + iη) of a compactly supported f

    C_N = max |g(z)|(1 + |z|)^N e^{2π(d/b)ξη − 2πR|η/b|} over the sample grid. The
    bound for order N holds when the same weighted quantity at the η midpoints
    of the grid stays within (1 + bound_tol)·C_N. The exponential type is fitted
    on the ray ξ = 0 at |η/b| ∈ rate_axis and must match 2πR within rate_tol.
    """
    F = as_free(S)
    if F.n != 1:
        raise BadParameter("paley_wiener_verify is one-dimensional")
    R = _support_radius(f, support_tol) if radius is None else float(radius)
    if R <= 0:
        raise BadParameter("support radius must be positive")
    outside = np.abs(f.x) > R * (1.0 + 1e-12)
    if np.any(np.abs(f.values[outside]) > support_tol):
        raise SupportViolation(f"signal is non-zero outside [−{R:g}, {R:g}]")

    xi = np.unique(np.asarray(xi_samples, dtype=float))
    eta = np.asarray(eta_samples, dtype=float)
    held_eta = _midpoints(eta)
    if held_eta.size == 0:
        raise BadParameter("the η samples need at least two distinct values")
    axis = np.asarray(rate_axis, dtype=float)
    if axis.size < 2 or np.unique(axis).size < 2 or np.any(axis <= 0):
        raise BadParameter("rate_axis needs two or more distinct positive values")
    # keep e^{2πR|η/b|} inside double range
    axis = axis * min(1.0, 600.0 / (2.0 * np.pi * R * float(np.max(axis))))

    zz = (xi[:, None] + 1j * eta[None, :]).reshape(-1)
    held = (xi[:, None] + 1j * held_eta[None, :]).reshape(-1)
    g, weighted = _weighted_growth(f, F, zz, R, max_workers)
    _, held_weighted = _weighted_growth(f, F, held, R, max_workers)

    constants, refined, satisfied = {}, {}, {}
    for N in orders:
        N = int(N)
        constants[N] = float(np.max(weighted * (1.0 + np.abs(zz)) ** N))
        refined[N] = float(np.max(held_weighted * (1.0 + np.abs(held)) ** N))
        satisfied[N] = bool(np.isfinite(constants[N]) and np.isfinite(refined[N])
                            and refined[N] <= constants[N] * (1.0 + bound_tol))
    l1 = float(np.sum(np.abs(f.values)) * f.dx)
    zero_bound = abs(lct_prefactor(F)) * l1
    peak = max(float(np.max(weighted)), float(np.max(held_weighted)))
    zero_ok = bool(peak <= zero_bound * (1.0 + 1e-9) + 1e-300)

    expected = 2.0 * np.pi * R
    rate = _ray_rate(f, F, axis, max_workers)
    rate_ok = rate is not None and abs(rate - expected) <= rate_tol * expected
    logger.debug(f"paley-wiener R={R:g} rate={rate} expected={expected:g} C_N={constants} held-out={refined}")
    samples = [(complex(z), float(v)) for z, v in zip(zz, g)]
    return PaleyWienerReport(support_radius=R, sample_points=samples, fitted_eta_rate=rate,
                             expected_rate=float(expected), bound_constants=constants,
                             refined_constants=refined, bound_satisfied=satisfied,
                             zero_order_bound=float(zero_bound), zero_order_ok=zero_ok, rate_ok=bool(rate_ok))
