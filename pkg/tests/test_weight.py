import math

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from heunbc import weight
from heunbc.errors import DegenerateWeightError, InsufficientTruncationError, PreconditionError

UNIT = np.exp(2j * np.pi * np.arange(64) / 64)


def _coeffs_or_skip(n, alpha, beta, kmax):
    try:
        return weight.weight_coeffs(n, alpha, beta, kmax)
    except DegenerateWeightError:
        assume(False)


@given(st.integers(0, 5), st.floats(0.05, 3))
def test_beta0_low_coefficients(n, alpha):
    w = _coeffs_or_skip(n, alpha, 0.0, 12)
    assert w.coeffs[0] == -n - alpha / 2
    assert w.coeffs[1] == 0
    assert abs(w.coeffs[2] + 1) < 1e-14
    assert np.all(w.coeffs[1::2] == 0)


def test_one_step_recursion():
    w = weight.weight_coeffs(0, 1.0, 1.0, 1)
    assert w.coeffs[1] == pytest.approx(-0.25)


@given(st.integers(0, 4), st.floats(0.05, 1.9), st.floats(-2, 2))
def test_recursion_residual(n, alpha, beta):
    a = _coeffs_or_skip(n, alpha, beta, 60).coeffs
    k = np.arange(2, 61)
    res = (2 - k + 2 * n + alpha) * a[2:] - beta * a[1:-1] - 2 * a[:-2]
    assert np.max(np.abs(res)) < 1e-13 * max(1.0, np.max(np.abs(a)))


def test_degenerate_divisor():
    # n = 0, alpha = 1: divisor 2 - k + 1 vanishes at k = 3
    with pytest.raises(DegenerateWeightError) as ei:
        weight.weight_coeffs(0, 1.0, 0.5, 10)
    assert ei.value.k == 3


def test_closed_form_low_terms():
    n, alpha = 1, 0.4
    w = weight.weight_closed_form(n, alpha, 4)
    assert w.coeffs[0] == pytest.approx(-n - alpha / 2)
    assert w.coeffs[2] == pytest.approx(-1)


@pytest.mark.parametrize("n", range(5))
@pytest.mark.parametrize("alpha", [0.1, 0.7, 1.3])
def test_closed_form_matches_recursion(n, alpha):
    a = weight.weight_coeffs(n, alpha, 0.0, 40).coeffs
    b = weight.weight_closed_form(n, alpha, 40).coeffs
    assert np.max(np.abs(a - b)) < 1e-12


def test_eval_constant_series():
    w = weight.weight_coeffs(2, 0.5, 0.3, 0)
    assert weight.weight_eval(w, 1.7 + 0.3j, tol=None) == w.coeffs[0]


def test_eval_self_convergence():
    ref = weight.weight_eval(weight.weight_coeffs(1, 0.0 + 1e-9, 0.0, 200), 1.0, tol=None)
    got = weight.weight_eval(weight.weight_coeffs(1, 0.0 + 1e-9, 0.0, 60), 1.0)
    assert abs(got - ref) < 1e-12


def test_eval_smooth_on_circle():
    w = weight.weight_coeffs(2, 0.5, 0.7, 80)
    z = np.exp(2j * np.pi * np.arange(256) / 256)
    v = weight.weight_eval(w, z)
    assert np.all(np.isfinite(v))
    k = np.arange(81)
    dmax = np.max(np.abs((-k * w.coeffs)[None, :] * z[:, None] ** (-k - 1.0)).sum(axis=1))
    assert np.max(np.abs(np.diff(v))) <= dmax * 2 * np.pi / 256


def test_eval_guards():
    w = weight.weight_coeffs(1, 0.5, 0.0, 10)
    with pytest.raises(InsufficientTruncationError):
        weight.weight_eval(w, 1.0)
    with pytest.raises(PreconditionError):
        weight.weight_eval(w, 0.1, tol=None)


def test_self_adjoint_residual_converged():
    w = weight.weight_coeffs(2, 0.3, 0.0, 80)
    assert np.max(np.abs(weight.self_adjoint_residual(w, UNIT))) < 1e-10


def test_self_adjoint_truncation_floor():
    w = weight.weight_coeffs(2, 0.3, 0.0, 0)
    assert np.max(np.abs(weight.self_adjoint_residual(w, UNIT))) > 0.1


def test_self_adjoint_linear_in_perturbation():
    w = weight.weight_coeffs(1, 0.3, 0.0, 80)
    z = np.exp(0.4j)
    out = []
    for eps in (1e-4, 2e-4):
        c = w.coeffs.copy()
        c[5] += eps
        out.append(abs(weight.self_adjoint_residual(weight.WeightSeries(1, 0.3, 0.0, c, 80, 0.0), z)))
    assert out[1] / out[0] == pytest.approx(2.0, rel=1e-6)


def test_growth_profile_log_space_matches_direct():
    n, alpha, beta = 1, 0.4, 1.0
    a = weight.weight_coeffs(n, alpha, beta, 50).coeffs
    prof = weight.growth_profile(n, alpha, beta, 50)
    k = np.arange(1, 51)
    direct = (np.abs(a[1:]) * np.array([math.sqrt(math.factorial(int(j))) for j in k])) ** (1 / k)
    assert np.allclose(prof[1:], direct, rtol=1e-12)


def test_diagnostic_example():
    d = weight.convergence_diagnostic(0, 0.25, 1.0, 200)
    assert abs(d / math.sqrt(2) - 1) < 0.05


def test_diagnostic_beta0_even_terms():
    d = weight.convergence_diagnostic(0, 0.25, 0.0, 200)
    assert abs(d / math.sqrt(2) - 1) < 0.05


def test_diagnostic_approaches_sqrt2_slowly():
    # finite-k bias decays like log(k)/k; larger k is strictly closer
    d200 = weight.convergence_diagnostic(2, 0.7, 1.0, 200)
    d2000 = weight.convergence_diagnostic(2, 0.7, 1.0, 2000)
    assert abs(d2000 - math.sqrt(2)) < abs(d200 - math.sqrt(2))
    assert abs(d2000 / math.sqrt(2) - 1) < 0.05


def test_diagnostic_requires_kmax():
    with pytest.raises(PreconditionError):
        weight.convergence_diagnostic(0, 0.5, 1.0, 100)


def test_tail_bound_decreases_with_radius():
    w = weight.weight_coeffs(1, 0.5, 0.5, 60)
    assert w.tail_at(2.0) < w.tail_at(1.0)
