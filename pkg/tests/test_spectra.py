import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.optimize import linear_sum_assignment

from heunbc import bhe, cpoly, spectra
from heunbc.errors import PreconditionError
from heunbc.spectra import EigenPair, SpectrumProblem


def test_check_termination_examples():
    assert spectra.check_termination(0, 4, -1, "minus") == 0
    assert spectra.check_termination(0, 3, -0.25, "plus") == 1
    assert spectra.check_termination(0, 2.5, -1, "plus") is None
    assert spectra.check_termination(0, 2.5, -1, "minus") is None


def test_problem_validates_condition():
    with pytest.raises(PreconditionError):
        SpectrumProblem(n=1, K3=0, K2=5, K0=-0.25, sigma=-0.5)
    with pytest.raises(PreconditionError):
        SpectrumProblem.from_sign(0, 2.5, -1, "plus")


def test_det_poly_n0():
    prob = SpectrumProblem.from_sigma(0, 0.8, 0.3)
    D = spectra.det_poly(prob)
    assert D.allclose(cpoly.CPoly([-0.8 * 1.6 / 2, -1]))
    (pair,) = spectra.k1_spectrum(prob)
    assert abs(pair.K1 + 0.8 * 1.6 / 2) < 1e-14


def test_det_poly_n1_double_root():
    # K3 = 0, K2 = 3, K0 = -1/4 with the plus branch: sigma = -1/2, D_2 = K1^2
    prob = SpectrumProblem.from_sign(0.0, 3.0, -0.25, "plus")
    assert prob.n == 1 and prob.sigma == -0.5
    assert spectra.det_poly(prob).allclose(cpoly.CPoly([0, 0, 1]))
    pairs = spectra.k1_spectrum(prob)
    assert [p.multiplicity for p in pairs] == [2, 2]
    assert max(abs(p.K1) for p in pairs) < 1e-7


@given(st.integers(0, 8), st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False),
       st.floats(0.0, 2.0), st.floats(-0.5, 0.5))
def test_det_roots_match_hautot(n, K3, sr, si):
    sigma = complex(sr, si)
    prob = SpectrumProblem.from_sigma(n, K3, sigma)
    k1 = np.array([p.K1 for p in spectra.k1_spectrum(prob, check=False)])
    ref = np.array([-h.delta_eig / 2 for h in bhe.hautot(n, 2 * sigma, -K3)])
    cost = np.abs(k1[:, None] - ref[None, :])
    r, c = linear_sum_assignment(cost)
    assert cost[r, c].max() < 1e-8 * (1 + np.abs(ref).max())
    assert len(k1) == n + 1


def test_three_real_roots_under_hypotheses():
    prob = SpectrumProblem.from_sigma(2, -8.0, -0.3)
    assert prob.reality_hypotheses
    pairs = spectra.k1_spectrum(prob)
    v = np.array([p.K1 for p in pairs])
    assert len(v) == 3 and np.all(np.abs(v.imag) < 1e-9) and spectra.min_gap(pairs) > 1e-8


def test_cli_example_spectrum():
    prob = SpectrumProblem.from_sign(-1.0, 4.75, -0.25, "plus")
    v = np.array([p.K1 for p in spectra.k1_spectrum(prob)])
    assert prob.n == 2 and np.all(np.abs(v.imag) < 1e-12)


def _sol(n=2, K3=-1.0, sigma=0.5, nu=0):
    prob = SpectrumProblem.from_sigma(n, K3, sigma)
    return prob, spectra.solutions(prob, check=False)[nu]


def test_bh_n0_closed_form():
    prob, sol = _sol(0, 0.6, 0.35)
    z = 0.3 + 0.7j
    w = np.exp(z)
    assert abs(sol(z) - np.exp(0.3 * w - 0.5 * w * w + 0.35 * z)) < 1e-14 * abs(sol(z))


def test_bh_two_representations_agree():
    prob, sol = _sol(3, -0.7, 0.5, 1)
    z = np.random.default_rng(1).normal(size=10) * 0.6 + 1j * np.random.default_rng(2).normal(size=10)
    a, b = sol(z), sol.value_reversed_form(z)
    assert np.max(np.abs(a - b) / np.abs(a)) < 1e-12


def test_bh_derivative_finite_difference():
    prob, sol = _sol(2, -1.0, 0.5, 2)
    z, h = 0.2 + 0.4j, 1e-5
    f, f1, f2 = sol.derivs(z)
    assert abs((sol(z + h) - sol(z - h)) / (2 * h) - f1) / abs(f1) < 1e-8
    assert abs((sol(z + h) - 2 * f + sol(z - h)) / h ** 2 - f2) / abs(f2) < 1e-5


def test_pbhe_residual_examples():
    prob, sol = _sol(0, 0.6, 0.35)
    co = prob.coeffs(sol.pair.K1)
    z = 0.3 + 0.7j
    assert abs(spectra.pbhe_residual(co, sol, z)) / abs(sol(z)) < 1e-10
    wrong = prob.coeffs(sol.pair.K1 + 0.5)
    assert abs(spectra.pbhe_residual(wrong, sol, z, relative=True)) > 1e-2


def test_pbhe_residual_periodic_when_2sigma_integer():
    prob, sol = _sol(2, -1.0, 0.5, 0)
    co = prob.coeffs(sol.pair.K1)
    z = 0.1 - 0.3j
    r0 = spectra.pbhe_residual(co, sol, z, relative=True)
    r1 = spectra.pbhe_residual(co, sol, z + 2j * np.pi, relative=True)
    assert abs(r0) < 1e-12 and abs(r1) < 1e-12
    assert abs(sol(z + 2j * np.pi) + sol(z)) < 1e-12 * abs(sol(z))  # sigma = 1/2: factor -1


@given(st.integers(0, 6), st.floats(-3, 3), st.floats(-1.5, 2))
def test_pbhe_residual_property(n, K3, sigma):
    if abs(2 * sigma + 1 - round(2 * sigma + 1)) < 1e-6 and 2 * sigma + 1 <= 0:
        return
    prob = SpectrumProblem.from_sigma(n, K3, sigma)
    z = np.array([0.1 + 0.2j, -0.8 + 2.5j, 0.3 - 1.0j])
    for sol in spectra.solutions(prob, check=False):
        co = prob.coeffs(sol.pair.K1)
        assert np.max(np.abs(spectra.pbhe_residual(co, sol, z, relative=True))) < 1e-9


def test_eigenpair_fields():
    prob = SpectrumProblem.from_sigma(1, -1.0, 0.5)
    pairs = spectra.k1_spectrum(prob)
    assert [p.nu for p in pairs] == [0, 1]
    assert all(isinstance(p, EigenPair) and p.n == 1 for p in pairs)
