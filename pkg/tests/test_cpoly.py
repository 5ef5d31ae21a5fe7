import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from heunbc import cpoly, qes
from heunbc.cpoly import CPoly, QSqrt2, SQRT2_EXACT
from heunbc.errors import InvalidReversalError, UndefinedRootsError, ZeroDivisorError

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)
cplx = st.builds(complex, finite, finite)
fracs = st.fractions(min_value=-20, max_value=20, max_denominator=50)


def test_eval_constant_and_square():
    assert cpoly.eval(CPoly([1]), 3 + 4j) == 1
    assert cpoly.eval(CPoly([0, 0, 1]), 2 + 0j) == 4


def test_eval_constant_broadcasts_over_arrays():
    z = np.linspace(0, 1, 5)
    assert cpoly.eval(CPoly([2.5]), z).shape == (5,)


def test_eval_bender_dunne_quadratic_root():
    # c = 0, J = 3, s = 1/4: P_2 = E^2 - 16
    P2 = qes.bender_dunne_polys(0.25, 3, 0.0, 2)[2]
    assert abs(cpoly.eval(P2, 4.0)) < 1e-13


@given(st.lists(cplx, min_size=1, max_size=8), cplx)
def test_eval_matches_numpy(cs, z):
    ref = np.polyval(np.array(cs[::-1]), z)
    got = cpoly.eval(CPoly(cs), z)
    assert abs(got - ref) <= 1e-10 * (1 + sum(abs(c) * abs(z) ** k for k, c in enumerate(cs)))


def test_trimming_canonical():
    p = CPoly([1.0, 2.0, 0.0, 1e-20])
    assert p.degree == 1
    assert CPoly([Fraction(1), Fraction(0)]).degree == 0
    assert CPoly([]).is_zero()


def test_reverse_examples():
    assert cpoly.reverse(CPoly([1]), 0) == CPoly([1])
    p = CPoly([1, math.sqrt(2)])
    q = cpoly.reverse(p, 1)
    for x in (0.3, -1.7, 2 + 1j):
        assert abs(cpoly.eval(q, x) - x * cpoly.eval(p, 1 / x)) < 1e-14
    with pytest.raises(InvalidReversalError):
        cpoly.reverse(CPoly([1, 2, 3]), 1)


@given(st.lists(cplx, min_size=1, max_size=7).filter(lambda c: abs(c[0]) > 1e-3 and abs(c[-1]) > 1e-3))
def test_reverse_involution(cs):
    p = CPoly(cs)
    assert cpoly.reverse(cpoly.reverse(p, p.degree), p.degree).allclose(p)


def test_roots_simple():
    r = cpoly.sort_roots(cpoly.roots(CPoly([-4, 0, 1])))
    assert np.allclose(r, [-2, 2], atol=1e-14)
    r = cpoly.sort_roots(cpoly.roots(CPoly([1, 0, 1])))
    assert np.allclose(r, [-1j, 1j], atol=1e-14)
    with pytest.raises(UndefinedRootsError):
        cpoly.roots(CPoly([0]))


@given(st.lists(st.builds(complex, st.floats(-3, 3), st.floats(-3, 3)), min_size=1, max_size=8))
def test_roots_recover_separated_roots(rts):
    rts = np.array(rts)
    d = np.abs(rts[:, None] - rts[None, :]) + np.eye(len(rts)) * 10
    if d.min() < 0.2:
        return
    got = cpoly.roots(CPoly.from_roots(rts))
    cost = np.abs(got[:, None] - rts[None, :])
    assert np.all(cost.min(axis=1) < 1e-10)


def test_roots_within_cauchy_bound():
    p = CPoly([3, -2, 0.5, 1, 7])
    assert np.all(np.abs(cpoly.roots(p)) <= cpoly.cauchy_bound(p) + 1e-12)


def test_roots_deterministic():
    p = CPoly([1, 2, 3, 4, 5, 6])
    assert np.array_equal(cpoly.roots(p), cpoly.roots(p))


def test_divide_self_and_zero():
    q = CPoly([1, 2, 3])
    quo, rem = cpoly.divide_exact(q, q)
    assert quo.allclose(CPoly([1])) and rem.is_zero()
    with pytest.raises(ZeroDivisorError):
        cpoly.divide_exact(q, CPoly([0]))


def test_divide_p4_by_p3_at_c0():
    P = qes.bender_dunne_polys(0.5, 3, 0.0, 4)
    quo, rem = cpoly.divide_exact(P[4], P[3])
    assert quo.allclose(CPoly([0, 1]))
    assert max(abs(x) for x in rem.coeffs) < 1e-12 * P[4].scale()


@given(st.lists(cplx, min_size=1, max_size=7), st.lists(cplx, min_size=1, max_size=4))
def test_divide_reconstructs(pc, qc):
    p, q = CPoly(pc), CPoly(qc)
    if q.is_zero() or abs(q.lead) < 0.1:
        return
    quo, rem = cpoly.divide_exact(p, q)
    back = q * quo + rem
    assert cpoly.max_coeff_error(back, p) <= 1e-12 * max(1.0, p.scale()) * max(1.0, (p.scale() / abs(q.lead)) ** 2)


@given(st.lists(fracs, min_size=1, max_size=5), st.lists(fracs, min_size=1, max_size=4))
def test_exact_division_is_exact(ac, bc):
    a, b = CPoly(ac), CPoly(bc)
    if b.is_zero() or a.is_zero():
        return
    quo, rem = cpoly.divide_exact(a * b, b)
    assert quo == a and rem.is_zero()


@given(fracs, fracs, fracs, fracs)
def test_qsqrt2_field_ops(a, b, c, d):
    x, y = QSqrt2(a, b), QSqrt2(c, d)
    fx, fy = float(x), float(y)
    assert math.isclose(float(x * y), fx * fy, rel_tol=1e-12, abs_tol=1e-12)
    assert math.isclose(float(x + y), fx + fy, rel_tol=1e-12, abs_tol=1e-12)
    if y != 0:
        assert (x / y) * y == x


def test_sqrt2_squares_to_two():
    assert SQRT2_EXACT * SQRT2_EXACT == QSqrt2(2)


def test_cluster_multiplicities():
    assert cpoly.cluster_multiplicities([1.0, 1.0 + 1e-9, 3.0]) == [2, 2, 1]
