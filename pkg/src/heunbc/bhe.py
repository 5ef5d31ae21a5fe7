"""Biconfluent Heun equation: parameters, series recursion, Hautot polynomials.

The equation is

    z u'' + (1 + alpha - beta z - 2 z^2) u' + ((gamma - alpha - 2) z - theta) u = 0,
    theta = (delta + beta (1 + alpha)) / 2.

The series u = sum_k A_k z^k / ((1+alpha)_k k!) terminates at degree m exactly
when gamma = alpha + 2(m+1) and A_{m+1}(delta) = 0.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from . import cpoly
from .cpoly import CPoly
from .errors import (DegenerateParameterError, NonNormalizedError,
                     PreconditionError, SingularPointError)


@dataclass(frozen=True)
class BheParams:
    alpha: complex
    beta: complex
    gamma: complex
    delta: complex

    @property
    def theta(self) -> complex:
        return 0.5 * (self.delta + self.beta * (1 + self.alpha))


@dataclass(frozen=True)
class PbheCoeffs:
    """Coefficients of f'' + (K4 e^{4z} + ... + K0) f = 0 and the branch sigma."""

    K0: complex
    K1: complex
    K2: complex
    K3: complex
    K4: complex
    sigma: complex

    def __post_init__(self):
        if abs(self.sigma ** 2 + self.K0) > 1e-14 * max(1.0, abs(self.K0)):
            raise PreconditionError("sigma**2 + K0 must vanish")

    @classmethod
    def normalized(cls, K3, K2, K1, K0, sigma) -> "PbheCoeffs":
        return cls(K0=K0, K1=K1, K2=K2, K3=K3, K4=-1.0, sigma=sigma)

    def potential(self, w):
        """K4 w^4 + K3 w^3 + K2 w^2 + K1 w + K0."""
        return (((self.K4 * w + self.K3) * w + self.K2) * w + self.K1) * w + self.K0


@dataclass(frozen=True)
class HautotSolution:
    m: int
    nu: int
    delta_eig: complex
    poly: CPoly
    reversed: CPoly
    params: BheParams
    multiplicity: int = 1


def _check_pochhammer(alpha, kmax: int) -> None:
    # (1+alpha)_k != 0 for k <= kmax  <=>  1+alpha not in {0, -1, ..., -(kmax-1)}
    a1 = complex(1 + alpha)
    if abs(a1.imag) > 0:
        return
    r = round(a1.real)
    if abs(a1.real - r) < 1e-12 and -(kmax - 1) <= r <= 0:
        raise DegenerateParameterError(f"Pochhammer (1+alpha)_k vanishes (1+alpha={a1.real:g})")


def pochhammer(a, k: int) -> complex:
    out = 1.0 + 0j
    for j in range(k):
        out *= a + j
    return out


def series_coeffs(params: BheParams, kmax: int) -> np.ndarray:
    """A_0..A_kmax of the three-term recursion."""
    _check_pochhammer(params.alpha, kmax + 1)
    return _recursion(params, kmax)


def _recursion(params: BheParams, kmax: int) -> np.ndarray:
    al, be, ga = params.alpha, params.beta, params.gamma
    th = params.theta
    A = np.zeros(kmax + 1, dtype=complex)
    A[0] = 1.0
    if kmax >= 1:
        A[1] = th
    for k in range(kmax - 1):
        A[k + 2] = ((k + 1) * be + th) * A[k + 1] - (k + 1) * (k + 1 + al) * (ga - al - 2 - 2 * k) * A[k]
    return A


def a_polys(m: int, alpha, beta) -> list[CPoly]:
    """A_0..A_{m+1} as polynomials in t = delta/2, with gamma = alpha + 2(m+1).

    In t the polynomials are monic, so coefficient trimming never removes a
    genuine leading term (in delta the leading coefficient is 2^{-k}).
    """
    gamma = alpha + 2 * (m + 1)
    theta = CPoly([0.5 * beta * (1 + alpha), 1.0])
    A = [CPoly([1.0]), theta]
    for k in range(m):
        nxt = (theta + (k + 1) * beta) * A[k + 1] - A[k] * ((k + 1) * (k + 1 + alpha) * (gamma - alpha - 2 - 2 * k))
        A.append(nxt)
    return A[: m + 2]


def solution_at(m: int, params: BheParams, nu: int = 0, multiplicity: int = 1) -> HautotSolution:
    """Terminating solution for given params (gamma and delta already set)."""
    _check_pochhammer(params.alpha, m)
    A = _recursion(params, m + 1)
    al = params.alpha
    cs = [A[k] / (pochhammer(1 + al, k) * _fact(k)) for k in range(m + 1)]
    poly = CPoly(cs)
    return HautotSolution(m=m, nu=nu, delta_eig=params.delta, poly=poly,
                          reversed=cpoly.reverse(poly, m), params=params,
                          multiplicity=multiplicity)


def _fact(k: int) -> float:
    out = 1.0
    for j in range(2, k + 1):
        out *= j
    return out


def hautot(m: int, alpha, beta) -> list[HautotSolution]:
    """All degree-m terminating solutions, indexed by sorted delta roots."""
    if m < 0:
        raise PreconditionError("degree m must be >= 0")
    # only (1+alpha)_k for k <= m enters the polynomial
    _check_pochhammer(alpha, m)
    Am1 = a_polys(m, alpha, beta)[m + 1]
    deltas = cpoly.sort_roots(2 * cpoly.roots(Am1))
    mult = cpoly.cluster_multiplicities(deltas)
    gamma = alpha + 2 * (m + 1)
    return [solution_at(m, BheParams(alpha, beta, gamma, complex(d)), nu, mu)
            for nu, (d, mu) in enumerate(zip(deltas, mult))]


def pbhe_from_bhe(params: BheParams) -> PbheCoeffs:
    b = params.beta
    return PbheCoeffs(K0=-params.alpha ** 2 / 4, K1=-params.delta / 2,
                      K2=params.gamma - b * b / 4, K3=-b, K4=-1.0,
                      sigma=params.alpha / 2)


def bhe_from_pbhe(coeffs: PbheCoeffs) -> BheParams:
    if abs(coeffs.K4 + 1) > 1e-14:
        raise NonNormalizedError("K4 must equal -1")
    b = -coeffs.K3
    return BheParams(alpha=2 * coeffs.sigma, beta=b, gamma=coeffs.K2 + b * b / 4,
                     delta=-2 * coeffs.K1)


def _rel(terms, relative: bool):
    res = sum(terms)
    if not relative:
        return res
    s = sum(np.abs(t) for t in terms)
    return np.where(s > 0, res / np.where(s > 0, s, 1.0), res)[()]


def bhe_residual(params: BheParams, sol: HautotSolution, z, relative: bool = False):
    """z u'' + (1+a-bz-2z^2) u' + ((g-a-2) z - theta) u with u = sol.poly."""
    u, du, d2u = cpoly.eval_derivs(sol.poly, z)
    al, be, ga = params.alpha, params.beta, params.gamma
    # expanded so that the scale is not lost to cancellation inside gamma - alpha - 2
    terms = [z * d2u, (1 + al) * du, -be * z * du, -2 * z * z * du,
             ga * z * u, -(al + 2) * z * u, -params.theta * u]
    return _rel(terms, relative)


def reversed_residual(sol: HautotSolution, z, relative: bool = False):
    """x^3 Y'' + [(1-2n-a)x^2 + bx + 2] Y' + [(a+n) n x - bn - theta] Y."""
    if np.any(np.asarray(z) == 0):
        raise SingularPointError("reversed equation is singular at 0")
    Y, dY, d2Y = cpoly.eval_derivs(sol.reversed, z)
    n = sol.m
    p = sol.params
    al, be = p.alpha, p.beta
    terms = [z ** 3 * d2Y, (1 - 2 * n - al) * z * z * dY, (be * z + 2) * dY,
             (al + n) * n * z * Y, -(be * n + p.theta) * Y]
    return _rel(terms, relative)


def bessel_psi(sol: HautotSolution) -> Callable:
    """Psi(x) = x^{a/2} exp(-bx/2 - x^2/2) psi(x) with value, d1, d2."""
    al, be = sol.params.alpha, sol.params.beta

    def Psi(x):
        x = np.asarray(x, dtype=complex)
        if np.any(x == 0):
            raise SingularPointError("Psi is assembled for x != 0")
        u, du, d2u = cpoly.eval_derivs(sol.poly, x)
        lx = np.log(x)
        E = np.exp(0.5 * al * lx - 0.5 * be * x - 0.5 * x * x)
        h = 0.5 * al / x - 0.5 * be - x
        dh = -0.5 * al / (x * x) - 1.0
        v = u * E
        d1 = (du + h * u) * E
        d2 = (d2u + 2 * h * du + (dh + h * h) * u) * E
        return v, d1, d2

    return Psi


def gen_bessel_residual(coeffs: PbheCoeffs, Psi: Callable, x, relative: bool = False):
    """x^2 Psi'' + x Psi' + (K4 x^4 + ... + K0) Psi."""
    if np.any(np.asarray(x) == 0):
        raise SingularPointError("generalized Bessel equation is singular at 0")
    v, d1, d2 = Psi(x)
    terms = [x * x * d2, x * d1, coeffs.potential(x) * v]
    return _rel(terms, relative)


def with_delta(params: BheParams, delta) -> BheParams:
    return replace(params, delta=delta)


def principal_sqrt(x) -> complex:
    return cmath.sqrt(complex(x))
