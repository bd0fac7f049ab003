#!/usr/bin/env python3
"""
Test Uncertainty Principles
===========================

Heisenberg, Robertson–Schrödinger, Hardy and Paley–Wiener checks on
Gaussians, Hermite functions and the unit rectangle.
"""

import sys

import numpy as np
import pytest
from numpy.testing import assert_allclose

from lct_engine import (GaussianSpec, Grid, SeparableSignal, hw_translate,
                        make_signal, normalize)
from lct_errors import (AliasRisk, BadParameter, DegeneratePair, HeavyTails,
                        InsufficientDecay, MeanNotCentered, NotFree,
                        NotInSpTheta, NotNormalized, NotSPD, SupportViolation)
from symplectic_core import (coupling_matrix, fresnel_matrix, frft_matrix,
                             heisenberg_bound_matrix, identity,
                             random_free_symplectic, shear_matrix, standard_J)
from uncertainty import (CovarianceReport, HardyKind, balancing_transform,
                         covariance_sigma, fit_decay, hardy_classify_params,
                         hardy_fit, hardy_fit_nd, hardy_nd_eigs, hardy_nd_pair,
                         heisenberg_check, heisenberg_nd, paley_wiener_verify,
                         rs_check, rs_invariance_probe, saturating_gaussian,
                         saturating_signal, spread)

GRID = Grid.symmetric(8.0, 1024)
UNIT_GAUSSIAN = GaussianSpec(alpha=np.pi, amplitude=2.0 ** 0.25)


@pytest.fixture(scope="module")
def gaussian():
    return UNIT_GAUSSIAN.on_grid(GRID)


def random_spd(rng, n):
    x = rng.normal(size=(n, n))
    return x @ x.T + n * np.eye(n)


# --- Heisenberg ---

def test_spread_of_unit_gaussian(gaussian):
    report = spread(gaussian)
    assert_allclose(report.mean, [0.0], atol=1e-12)
    assert report.spread == pytest.approx(1.0 / (4.0 * np.pi), rel=1e-8)
    assert report.norm_sq == pytest.approx(1.0, rel=1e-10)
    fourier = spread(gaussian, standard_J())
    assert fourier.spread == pytest.approx(1.0 / (4.0 * np.pi), rel=1e-6)
    with pytest.raises(NotFree):
        spread(gaussian, shear_matrix(1.0))


def test_heisenberg_saturated_by_unit_gaussian(gaussian):
    print("🧪 Testing Heisenberg...")
    report = heisenberg_check(gaussian, identity(), standard_J())
    assert report.rhs == pytest.approx(1.0 / (16.0 * np.pi ** 2), rel=1e-8)
    assert abs(report.ratio) <= 1e-3
    off_center = heisenberg_check(gaussian, identity(), standard_J(), a=[0.5], b=[0.0])
    assert off_center.lhs > report.lhs


def test_stern_constant():
    """S1 = I, S2 with b = 2: rhs = b²/16π² and the pair's Gaussian saturates it"""
    S1, S2 = identity(), fresnel_matrix(2.0)
    f = saturating_signal(S1, S2, GRID)
    report = heisenberg_check(f, S1, S2)
    assert report.rhs == pytest.approx(4.0 / (16.0 * np.pi ** 2), rel=1e-3)
    assert report.diagnostics["bound_entry"] == pytest.approx(2.0)
    assert -1e-9 <= report.ratio <= 1e-3


def random_pairs(rng, count, min_det=0.3):
    """Random free pairs whose coupling matrix D is comfortably invertible"""
    pairs = []
    while len(pairs) < count:
        S1, S2 = random_free_symplectic(rng, 1), random_free_symplectic(rng, 1)
        # the bound entry a1b2 − b1a2 is det D
        if abs(heisenberg_bound_matrix(S1, S2)[0, 0]) >= min_det:
            pairs.append((S1, S2))
    return pairs


def heisenberg_within_reach(f, S1, S2):
    """heisenberg_check with the output oversampling raised on demand, None when the window cannot hold the pair"""
    oversample = 2
    for _ in range(3):
        try:
            return heisenberg_check(f, S1, S2, oversample=oversample)
        except AliasRisk as e:
            if e.side != "output":
                return None
            oversample = max(e.required_factor, oversample + 1)
        except HeavyTails:
            return None
    return None


def test_heisenberg_holds_on_random_pairs():
    rng = np.random.default_rng(42)
    grid = Grid.symmetric(8.0, 2048)
    f = make_signal("hermite", grid, order=1)
    checked = 0
    for S1, S2 in random_pairs(rng, 8):
        report = heisenberg_within_reach(f, S1, S2)
        if report is None:
            continue
        checked += 1
        assert report.slack >= -1e-9 * report.rhs
    assert checked >= 4


def test_heisenberg_on_seeded_corpus():
    """100 band-limited random signals against 10 random pairs"""
    rng = np.random.default_rng(2024)
    grid = Grid.symmetric(8.0, 2048)
    pairs = random_pairs(rng, 10)
    checked = 0
    for seed in range(100):
        f = make_signal("randbl", grid, seed=seed)
        for S1, S2 in pairs:
            report = heisenberg_within_reach(f, S1, S2)
            if report is None:
                continue
            checked += 1
            assert report.slack >= -1e-9 * report.rhs, f"seed {seed}"
    assert checked >= 250


def test_heavy_tails_are_rejected():
    rect = make_signal("rect", GRID, radius=1.0)
    with pytest.raises(HeavyTails):
        heisenberg_check(rect, identity(), standard_J())


def test_heisenberg_nd():
    grid = Grid.symmetric(6.0, 128)
    g = UNIT_GAUSSIAN.on_grid(grid)
    f = SeparableSignal.from_product(g, g)
    report = heisenberg_nd(f, identity(2), standard_J(2))
    assert report.lhs == pytest.approx(2.0 / (4.0 * np.pi), rel=1e-6)
    assert report.rhs == pytest.approx(2.0 / (4.0 * np.pi), rel=1e-10)
    assert report.diagnostics["trace_lhs"] == pytest.approx(report.diagnostics["trace_rhs"], rel=1e-6)


# --- Robertson–Schrödinger ---

def test_covariance_of_unit_gaussian(gaussian):
    print("🧪 Testing covariance matrices...")
    assert_allclose(covariance_sigma(gaussian), np.eye(2) / (4.0 * np.pi), atol=1e-8)
    unnormalized = GaussianSpec(alpha=np.pi).on_grid(GRID)
    with pytest.raises(NotNormalized):
        covariance_sigma(unnormalized)
    assert_allclose(covariance_sigma(unnormalized, normalize_signal=True), np.eye(2) / (4.0 * np.pi), atol=1e-8)


def test_covariance_centering():
    moved = GaussianSpec(alpha=np.pi, amplitude=2.0 ** 0.25, center=0.5).on_grid(GRID)
    with pytest.raises(MeanNotCentered):
        covariance_sigma(moved, center=False)
    assert_allclose(covariance_sigma(moved), np.eye(2) / (4.0 * np.pi), atol=1e-8)


def test_covariance_of_separable_gaussian():
    grid = Grid.symmetric(6.0, 256)
    g = UNIT_GAUSSIAN.on_grid(grid)
    sigma = covariance_sigma(SeparableSignal.from_product(g, g))
    assert sigma.shape == (4, 4)
    assert_allclose(sigma, np.eye(4) / (4.0 * np.pi), atol=1e-8)


def test_covariance_of_separable_product_has_factor_blocks():
    """Σ of f1 ⊗ f2, ordered (x1, x2, ξ1, ξ2), holds each factor's Σ and no cross terms"""
    grid = Grid.symmetric(6.0, 256)
    hermite = make_signal("hermite", grid, order=1)
    chirped = GaussianSpec(alpha=np.pi, amplitude=2.0 ** 0.25, phase=0.5).on_grid(grid)
    sigma = covariance_sigma(SeparableSignal.from_product(hermite, chirped))
    for axis, factor in enumerate((hermite, chirped)):
        block = sigma[np.ix_([axis, 2 + axis], [axis, 2 + axis])]
        assert_allclose(block, covariance_sigma(factor), atol=1e-6)
    assert_allclose(sigma[np.ix_([0, 2], [1, 3])], np.zeros((2, 2)), atol=1e-8)
    assert abs(sigma[1, 3]) > 1e-3


def test_covariance_of_separable_signal_centering():
    grid = Grid.symmetric(6.0, 256)
    moved = GaussianSpec(alpha=np.pi, amplitude=2.0 ** 0.25, center=0.75).on_grid(grid)
    f = SeparableSignal.from_product(moved, UNIT_GAUSSIAN.on_grid(grid))
    assert_allclose(covariance_sigma(f), np.eye(4) / (4.0 * np.pi), atol=1e-8)
    with pytest.raises(MeanNotCentered):
        covariance_sigma(f, center=False)
    with pytest.raises(NotNormalized):
        covariance_sigma(f.with_values(2.0 * f.values))


def test_rs_on_separable_signal():
    grid = Grid.symmetric(6.0, 256)
    g = UNIT_GAUSSIAN.on_grid(grid)
    f = SeparableSignal.from_product(g, g)
    report = rs_check(f, identity(2), standard_J(2))
    assert report.sigma.shape == (4, 4)
    assert report.scalar_gap is None
    assert report.is_psd()
    assert abs(report.min_eig) <= 1e-6
    with pytest.raises(BadParameter):
        rs_check(f, identity(), standard_J())
    with pytest.raises(BadParameter):
        rs_check(f, identity(2), standard_J(2), cross_validate=True)


def test_rs_saturated_by_gaussian(gaussian):
    report = rs_check(gaussian, identity(), standard_J())
    assert abs(report.min_eig) <= 1e-6 * np.max(np.abs(report.upsilon))
    assert report.scalar_gap == pytest.approx(0.0, abs=1e-8)
    assert report.is_psd()


def test_rs_on_nonstandard_pair():
    S1, S2 = identity(), fresnel_matrix(2.0)
    f = saturating_signal(S1, S2, GRID)
    report = rs_check(f, S1, S2, cross_validate=True)
    assert report.is_psd()
    assert abs(report.min_eig) <= 1e-6 * np.max(np.abs(report.upsilon))
    assert_allclose(report.omega.omega, 2.0 * standard_J().entries)
    assert_allclose(report.theta_upsilon, report.upsilon, atol=1e-4)


def test_rs_strict_for_hermite():
    f = make_signal("hermite", GRID, order=1)
    report = rs_check(f, identity(), standard_J())
    # Σ = 3/4π·I for the first Hermite function
    assert_allclose(report.sigma, 3.0 * np.eye(2) / (4.0 * np.pi), atol=1e-8)
    assert report.min_eig > 0.1 / (4.0 * np.pi)
    assert report.scalar_gap > 0


def test_rs_gap_dominates_heisenberg_slack():
    """Δ1²Δ2² − rhs = gap + Υ12², so the Heisenberg slack never falls below the RS gap"""
    rng = np.random.default_rng(31)
    pairs = random_pairs(rng, 3)
    checked = 0
    for seed in range(8):
        f = normalize(make_signal("randbl", GRID, seed=seed))
        for S1, S2 in pairs:
            rs = rs_check(f, S1, S2)
            assert rs.scalar_gap >= -1e-8
            heisenberg = heisenberg_within_reach(f, S1, S2)
            if heisenberg is None:
                continue
            checked += 1
            assert heisenberg.slack >= rs.scalar_gap - 1e-5 * heisenberg.lhs
    assert checked >= 6


def test_rs_invariance_probe(gaussian):
    S1, S2 = identity(), fresnel_matrix(2.0)
    report = rs_check(gaussian, S1, S2)
    c = coupling_matrix(S1, S2)
    P = c.d @ frft_matrix(0.4).entries @ c.inverse
    assert rs_invariance_probe(report, P)
    with pytest.raises(NotInSpTheta):
        rs_invariance_probe(report, np.diag([2.0, 1.0]))


def test_covariance_report_symmetry():
    with pytest.raises(BadParameter):
        CovarianceReport(sigma=np.array([[1.0, 2.0], [0.0, 1.0]]), upsilon=np.eye(2),
                         omega=coupling_matrix(identity(), standard_J()).target_form, min_eig=0.0)


def test_saturating_gaussian():
    spec = saturating_gaussian(identity(), fresnel_matrix(2.0))
    assert spec.alpha[0, 0] == pytest.approx(np.pi / 2.0)
    assert spec.phase[0, 0] == pytest.approx(0.5)
    with pytest.raises(DegeneratePair):
        saturating_gaussian(identity(), identity())


# --- Hardy ---

def test_hardy_params_classification():
    print("🧪 Testing Hardy classification...")
    J = standard_J()
    critical = hardy_classify_params(np.pi, np.pi, J)
    assert critical.kind is HardyKind.CRITICAL
    assert critical.threshold == pytest.approx(np.pi ** 2)
    assert critical.critical_gaussian is not None
    assert hardy_classify_params(2.0 * np.pi, np.pi, J).kind is HardyKind.SUPERCRITICAL
    assert hardy_classify_params(np.pi / 2.0, np.pi, J).kind is HardyKind.SUBCRITICAL
    # b = 2 lowers the threshold to π²/4
    assert hardy_classify_params(np.pi / 2.0, np.pi / 2.0, fresnel_matrix(2.0)).kind is HardyKind.CRITICAL
    with pytest.raises(BadParameter):
        hardy_classify_params(0.0, 1.0, J)
    with pytest.raises(NotFree):
        hardy_classify_params(1.0, 1.0, identity())


@pytest.mark.parametrize("alpha", [np.pi / 4.0, np.pi, 4.0 * np.pi])
def test_hardy_fit_recovers_gaussian_rates(alpha):
    f = GaussianSpec(alpha=alpha).on_grid(GRID)
    result = hardy_fit(f, standard_J())
    assert result.alpha == pytest.approx(alpha, rel=1e-2)
    assert result.beta == pytest.approx(np.pi ** 2 / alpha, rel=1e-2)
    assert result.kind is HardyKind.CRITICAL
    assert min(result.r_squared) >= 0.99


def test_hardy_fit_chirp_matters():
    """Without the matching chirp the Fresnel image decays slower than critical"""
    plain = hardy_fit(GaussianSpec(alpha=np.pi).on_grid(GRID), fresnel_matrix(1.0))
    assert plain.kind is HardyKind.SUBCRITICAL
    assert plain.beta == pytest.approx(np.pi / 2.0, rel=1e-2)
    chirped = hardy_fit(GaussianSpec(alpha=np.pi, phase=1.0).on_grid(GRID), fresnel_matrix(1.0))
    assert chirped.kind is HardyKind.CRITICAL


def test_hardy_fit_with_pair(gaussian):
    result = hardy_fit(gaussian, frft_matrix(5 * np.pi / 6), S1=frft_matrix(np.pi / 3))
    assert result.kind is HardyKind.CRITICAL
    assert result.threshold == pytest.approx(np.pi ** 2, rel=1e-9)


@pytest.mark.parametrize("alpha,S", [(np.pi, standard_J()), (np.pi, fresnel_matrix(1.0)),
                                     (4.0 * np.pi, frft_matrix(np.pi / 3))])
def test_hardy_classification_ignores_translation_and_phase(alpha, S):
    f = GaussianSpec(alpha=alpha).on_grid(GRID)
    base = hardy_fit(f, S)
    for moved in (hw_translate(f, (0.5, 0.75)), f.with_values(np.exp(0.7j) * f.values)):
        result = hardy_fit(moved, S)
        assert result.kind is base.kind
        assert result.alpha == pytest.approx(base.alpha, rel=1e-3)
        assert result.beta == pytest.approx(base.beta, rel=1e-3)


def test_fit_decay_rejects_non_gaussian():
    x = GRID.points
    with pytest.raises(InsufficientDecay):
        fit_decay(x, 1.0 / (1.0 + x ** 2))
    with pytest.raises(InsufficientDecay):
        fit_decay(x, np.zeros_like(x))
    with pytest.raises(InsufficientDecay):
        hardy_fit(make_signal("rect", GRID, radius=1.0), standard_J())


def test_hardy_nd_eigs_match_direct_solve():
    rng = np.random.default_rng(9)
    for n in (2, 3, 4):
        for _ in range(5):
            M, N = random_spd(rng, n), random_spd(rng, n)
            S = random_free_symplectic(rng, n)
            result = hardy_nd_eigs(M, N, S)
            assert_allclose(result.threshold, result.direct_eigenvalues,
                            rtol=1e-8, atol=1e-8 * np.max(np.abs(result.threshold)))


def test_hardy_nd_classification():
    J2 = standard_J(2)
    assert hardy_nd_eigs(np.pi * np.eye(2), np.pi * np.eye(2), J2).kind is HardyKind.CRITICAL
    assert hardy_nd_eigs(2.0 * np.pi * np.eye(2), np.pi * np.eye(2), J2).kind is HardyKind.SUPERCRITICAL
    assert hardy_nd_eigs(np.eye(2), np.eye(2), J2).kind is HardyKind.SUBCRITICAL
    pair = hardy_nd_pair(np.pi * np.eye(2), np.pi * np.eye(2), identity(2), J2)
    assert pair.kind is HardyKind.CRITICAL
    with pytest.raises(NotSPD):
        hardy_nd_eigs(np.array([[1.0, 0.0], [0.0, -1.0]]), np.eye(2), J2)
    with pytest.raises(NotSPD):
        hardy_nd_eigs(np.array([[1.0, 0.5], [0.0, 1.0]]), np.eye(2), J2)


def test_balancing_transform():
    rng = np.random.default_rng(17)
    for n in (1, 2, 3, 4):
        M, N = random_spd(rng, n), random_spd(rng, n)
        L, lam = balancing_transform(M, N)
        L_inv = np.linalg.inv(L)
        assert_allclose(L.T @ M @ L, lam, atol=1e-8 * np.max(lam))
        assert_allclose(L_inv @ N @ L_inv.T, lam, atol=1e-8 * np.max(lam))
        assert_allclose(np.sort(np.diag(lam) ** 2), np.sort(np.linalg.eigvals(M @ N).real), rtol=1e-8)


def test_hardy_fit_nd():
    grid = Grid.symmetric(6.0, 128)
    f = SeparableSignal.from_product(GaussianSpec(alpha=np.pi).on_grid(grid),
                                     GaussianSpec(alpha=2.0 * np.pi).on_grid(grid))
    result = hardy_fit_nd(f, standard_J(2))
    assert result.kind is HardyKind.CRITICAL
    assert_allclose(result.threshold, [np.pi ** 2, np.pi ** 2], rtol=1e-2)


# --- Paley–Wiener ---

def test_paley_wiener_rectangle_rate():
    print("🧪 Testing Paley–Wiener growth...")
    rect = make_signal("rect", GRID, radius=1.0)
    report = paley_wiener_verify(rect, standard_J(), orders=(1, 2))
    assert report.support_radius == pytest.approx(1.0, abs=GRID.dx)
    assert report.expected_rate == pytest.approx(2.0 * np.pi, abs=2.0 * np.pi * GRID.dx)
    assert report.fitted_eta_rate == pytest.approx(2.0 * np.pi, rel=0.05)
    assert report.rate_ok and report.zero_order_ok
    assert all(report.bound_satisfied.values())
    for N in (1, 2):
        assert report.refined_constants[N] <= 1.5 * report.bound_constants[N]
    assert len(report.sample_points) == 25


@pytest.mark.parametrize("S", [standard_J(), fresnel_matrix(2.0), frft_matrix(np.pi / 3),
                               frft_matrix(5 * np.pi / 6)])
def test_paley_wiener_on_verification_matrices(S):
    rect = make_signal("rect", GRID, radius=1.0)
    report = paley_wiener_verify(rect, S, max_workers=2)
    assert report.zero_order_ok and report.rate_ok
    assert report.bound_satisfied == {1: True, 2: True, 4: True}


def test_paley_wiener_rate_is_two_sided():
    """A radius three times the true support is still a valid bound but the wrong exponential type"""
    rect = make_signal("rect", GRID, radius=1.0)
    report = paley_wiener_verify(rect, standard_J(), radius=3.0)
    assert report.expected_rate == pytest.approx(6.0 * np.pi)
    assert report.fitted_eta_rate == pytest.approx(2.0 * np.pi, rel=0.05)
    assert not report.rate_ok
    assert report.zero_order_ok
    assert all(report.bound_satisfied.values())


def test_paley_wiener_bound_checked_between_samples():
    """Without η = 0 the grid misses the peak |g(0)| = ‖f‖₁ and C_1 undershoots"""
    rect = make_signal("rect", GRID, radius=1.0)
    report = paley_wiener_verify(rect, standard_J(), eta_samples=(-2.0, -1.0, 1.0, 2.0), orders=(1, 2))
    assert report.bound_satisfied == {1: False, 2: False}
    assert report.refined_constants[1] == pytest.approx(2.0, rel=1e-2)
    assert report.rate_ok


def test_paley_wiener_support_checks(gaussian):
    with pytest.raises(SupportViolation):
        paley_wiener_verify(gaussian, standard_J(), radius=1.0)
    rect = make_signal("rect", GRID, radius=1.0)
    with pytest.raises(NotFree):
        paley_wiener_verify(rect, identity())
    with pytest.raises(BadParameter):
        paley_wiener_verify(rect, standard_J(), eta_samples=(1.0, 1.0))
    with pytest.raises(BadParameter):
        paley_wiener_verify(rect, standard_J(), rate_axis=(4.0,))


def main():
    """Run all tests"""
    print("🚀 Uncertainty Principles Test Suite")
    print("=" * 50)
    return pytest.main([__file__, "-v"])


if __name__ == "__main__":
    sys.exit(main())
