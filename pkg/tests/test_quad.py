import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from heunbc import bhe, cpoly, quad, spectra, weight
from heunbc.errors import (ConfigurationError, DegenerateIntegralError, DegenerateWeightError,
                           IntegrabilityError, PreconditionError)
from heunbc.quad import ContourRule
from heunbc.spectra import EigenPair, SpectrumProblem


# ---------------------------------------------------------------- rules

def test_rule_validation():
    with pytest.raises(PreconditionError):
        ContourRule.circle(1.0, 100)
    with pytest.raises(PreconditionError):
        ContourRule.circle(1.0, 8)
    assert ContourRule.segment(0j, 64).doubled().N == 128


def test_contour_integral_examples():
    c = ContourRule.circle(1.0, 64)
    assert abs(quad.contour_integral(lambda z: 1 / z, c) - 2j * np.pi) < 1e-13
    assert abs(quad.contour_integral(lambda z: z, c)) < 1e-13
    assert abs(quad.contour_integral(np.exp, ContourRule.segment(0j, 64))) < 1e-12


@given(st.integers(-6, 6), st.floats(0.5, 3))
def test_contour_integral_monomials(k, r):
    val = quad.contour_integral(lambda z: z ** k, ContourRule.circle(r, 64))
    expect = 2j * np.pi if k == -1 else 0
    assert abs(val - expect) < 1e-12 * max(1.0, r ** (k + 1))


def test_certified_integral():
    c = quad.certified_integral(lambda z: np.exp(np.exp(z)), ContourRule.segment(0j, 64))
    assert c.ok and abs(c.value - 2j * np.pi) < 1e-12


# ---------------------------------------------------------------- circle

def residue_gram(n, alpha, beta, kmax=80):
    """2 pi i * [z^{-1}] Y_m Y_v rho, from the Laurent coefficients directly."""
    sols = bhe.hautot(n, alpha, beta)
    a = weight.weight_coeffs(n, alpha, beta, kmax).coeffs
    G = np.zeros((len(sols), len(sols)), dtype=complex)
    for i, si in enumerate(sols):
        for j, sj in enumerate(sols):
            c = (si.reversed * sj.reversed).to_numpy()
            G[i, j] = 2j * np.pi * sum(c[d] * a[d + 1] for d in range(len(c)))
    return G


def test_circle_n0_is_1x1():
    r = quad.circle_orthogonality(0, 0.5, 0.7)
    assert r.size == 1 and r.normalized_offdiag == 0


@pytest.mark.parametrize("n,beta", [(1, 0.0), (2, 0.7), (3, 0.7), (4, 0.0)])
def test_circle_matches_residue_oracle(n, beta):
    r = quad.circle_orthogonality(n, 0.5, beta)
    G = residue_gram(n, 0.5, beta)
    assert np.max(np.abs(r.gram - G)) < 1e-11 * np.max(r.scale)
    assert r.normalized_offdiag < 1e-8


def test_circle_degenerate_weight():
    with pytest.raises(DegenerateWeightError):
        quad.circle_orthogonality(1, 0.0, 0.0)


def test_circle_radius_independence_and_symmetry():
    r1 = quad.circle_orthogonality(3, 0.5, 0.7, ContourRule.circle(1.0))
    r2 = quad.circle_orthogonality(3, 0.5, 0.7, ContourRule.circle(2.0))
    assert np.max(np.abs(r1.gram - r2.gram)) < 1e-10 * np.max(r1.scale)
    assert r1.symmetry < 1e-12
    assert r1.certificate < quad.CERT_RTOL


def test_circle_parity_zero_diagonal_flagged():
    r = quad.circle_orthogonality(2, 0.5, 0.0)
    assert r.flags["degenerate_diagonals"]
    assert r.normalized_offdiag < 1e-8


# ---------------------------------------------------------------- half-line

def test_halfline_gaussian_oracle():
    r = quad.halfline_orthogonality(1, 0.0, 0.0)
    sp = math.sqrt(math.pi)
    # delta sorted ascending: u = 1 - sqrt2 t first
    assert abs(r.gram[0, 0] - (sp - math.sqrt(2))) < 1e-10
    assert abs(r.gram[1, 1] - (sp + math.sqrt(2))) < 1e-10
    assert abs(r.gram[0, 1]) < 1e-10


def test_halfline_m0_positive():
    r = quad.halfline_orthogonality(0, 0.5, 0.3)
    assert r.size == 1 and r.gram[0, 0] > 0


def test_halfline_rejects_nonintegrable():
    with pytest.raises(IntegrabilityError):
        quad.halfline_orthogonality(1, -1.0, 0.0)


# ---------------------------------------------------------------- segments

def test_single_n0():
    prob = SpectrumProblem.from_sigma(0, -1.0, -0.5)
    r = quad.single_orthogonality(prob)
    assert r.size == 1 and r.diag_ratio > 1e-6


@pytest.mark.parametrize("sigma", [-1.5, -2.0])
def test_single_n2(sigma):
    prob = SpectrumProblem.from_sigma(2, -1.0, sigma)
    r = quad.single_orthogonality(prob, ContourRule.segment(0j, 512))
    assert r.normalized_offdiag < 1e-8
    assert r.diag_ratio > 1e-6
    assert r.certificate < quad.CERT_RTOL


def test_single_nonnegative_sigma_vanishes_identically():
    # the integrand is entire in e^z, so every entry vanishes, diagonals included
    prob = SpectrumProblem.from_sigma(2, -1.0, 0.5)
    r = quad.single_orthogonality(prob)
    assert np.max(np.abs(r.gram)) < 1e-12 * np.max(r.scale)


def test_single_requires_periodicity():
    with pytest.raises(PreconditionError):
        quad.single_orthogonality(SpectrumProblem.from_sigma(1, -1.0, 0.3))


def test_shifted_resolved_offdiag_and_certificate():
    prob = SpectrumProblem.from_sigma(2, -1.0, -1.5)
    ok = quad.shifted_orthogonality(prob, ContourRule.segment(math.pi, 2048))
    assert ok.normalized_offdiag < 1e-8 and ok.certificate < quad.CERT_RTOL
    # at N = 512 the dominant Fourier mode aliases identically at N and 2N;
    # the three-level certificate must reject it
    bad = quad.shifted_orthogonality(prob, ContourRule.segment(math.pi, 512))
    assert bad.normalized_offdiag > 1e-2
    assert bad.certificate > quad.CERT_RTOL


# ---------------------------------------------------------------- double

def test_double_shared_parameters_required():
    a = SpectrumProblem.from_sigma(1, -1.0, 1.5)
    b = SpectrumProblem.from_sigma(2, -0.5, 0.5)
    with pytest.raises(ConfigurationError):
        quad.double_orthogonality(a, b, 32)


def test_double_12():
    a = SpectrumProblem.from_sigma(1, -1.0, 1.5)
    b = SpectrumProblem.from_sigma(2, -1.0, 0.5)
    r = quad.double_orthogonality(a, b, 128)
    assert r.T.shape == (2, 3) and r.max_offdiag < 1e-7


def test_double_00_diagonal_nonzero():
    p = SpectrumProblem.from_sigma(0, -1.0, -0.5)
    r = quad.double_orthogonality(p, p, 64)
    assert r.diag_ratio > 1e-6


def test_double_22_offdiagonal():
    p = SpectrumProblem.from_sigma(2, -1.0, 0.5)
    r = quad.double_orthogonality(p, p, 128)
    assert r.max_offdiag < 1e-7


# ---------------------------------------------------------------- Fredholm

@given(st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False),
       st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False))
def test_kernel_symmetric_periodic(z, s):
    a, c = -0.5, 0.7 - 0.2j
    k = quad.fredholm_kernel(z, s, a, c)
    assert abs(k - quad.fredholm_kernel(s, z, a, c)) <= 1e-12 * abs(k)
    assert abs(k - quad.fredholm_kernel(z + 2 * np.pi, s, a, c)) <= 1e-11 * abs(k)


def _fredholm_setup(K1_shift=0.0):
    (cfg,) = quad.fredholm_configurations(0, -0.5)
    pr = cfg.problem
    co = pr.coeffs(cfg.K1)
    sol = spectra.bh_solution(EigenPair(0, 0, cfg.K1, pr), co)
    co2 = pr.coeffs(cfg.K1 + K1_shift)
    return sol, co, co2


def test_fredholm_valid_configuration():
    sol, co, _ = _fredholm_setup()
    ker = quad.kernel_for(co)
    r16 = quad.fredholm_lambda(sol, co, ker, M=16, N=512)
    r32 = quad.fredholm_lambda(sol, co, ker, M=32, N=512)
    assert r16.variation < 1e-7
    assert abs(r16.lam - r32.lam) < 1e-10 * abs(r16.lam)
    assert r16.certificate < quad.CERT_RTOL


def test_fredholm_wrong_k1_negative_control():
    sol, _, wrong = _fredholm_setup(0.5)
    r = quad.fredholm_lambda(sol, wrong, quad.kernel_for(wrong), strict=False)
    assert r.variation > 1e-2


def test_fredholm_strict_preconditions():
    sol, co, _ = _fredholm_setup()
    with pytest.raises(PreconditionError):
        quad.fredholm_lambda(sol, co, quad.KernelParams(0.3, -co.K1))


def test_fredholm_degenerate_integral_reported():
    cfgs = quad.fredholm_configurations(2, -0.5)
    cfg = cfgs[0]
    pr = cfg.problem
    co = pr.coeffs(cfg.K1)
    sol = spectra.bh_solution(EigenPair(2, 0, cfg.K1, pr), co)
    with pytest.raises(DegenerateIntegralError):
        quad.fredholm_lambda(sol, co, quad.kernel_for(co, -0.5))


def test_kernel_pde_residual():
    _, co, _ = _fredholm_setup()
    ker = quad.kernel_for(co)
    z = np.linspace(0, 6, 7)
    s = np.linspace(0.3, 5, 7)
    assert np.max(quad.kernel_pde_residual(co, ker, z, s)) < 1e-9


def test_concomitant():
    sol, co, _ = _fredholm_setup()
    assert quad.concomitant_check(sol, co, quad.kernel_for(co)) < 1e-9


def test_concomitant_negative_control():
    prob = SpectrumProblem.from_sigma(0, -1.0, 0.3)
    pair = spectra.k1_spectrum(prob)[0]
    co = prob.coeffs(pair.K1)
    sol = spectra.bh_solution(pair, co)
    assert quad.concomitant_check(sol, co, quad.kernel_for(co), strict=False) > 1e-2


def test_branch_scan_prefers_minus_half():
    sol, co, _ = _fredholm_setup()
    scan = quad.kernel_branch_scan(sol, co)
    assert scan[-0.5] < 1e-7
    assert all(v > 1e-2 for a, v in scan.items() if a != -0.5)
