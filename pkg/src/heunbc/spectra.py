"""Eigenvalue spectra of the periodic equation f'' + (-e^{4z} + K3 e^{3z} + K2 e^{2z} + K1 e^z + K0) f = 0.

Branch convention: ``sign`` is the sign in the termination condition

    K3^2/4 + K2 (+/-) 2 sqrt(-K0) = 2(n+1),

so sigma = -sqrt(-K0) for ``plus`` and +sqrt(-K0) for ``minus``; the
condition then reads K3^2/4 + K2 - 2 sigma = 2(n+1) and sigma = alpha/2.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from . import bhe, cpoly
from .bhe import BheParams, HautotSolution, PbheCoeffs
from .cpoly import CPoly
from .errors import InvariantViolation, PreconditionError


class Sign(str, Enum):
    PLUS = "plus"
    MINUS = "minus"


def sigma_from_sign(K0, sign) -> complex:
    r = cmath.sqrt(-complex(K0))
    return -r if Sign(sign) is Sign.PLUS else r


def _condition_value(K3, K2, sigma) -> complex:
    return K3 * K3 / 4 + K2 - 2 * sigma


def check_termination(K3, K2, K0, sign, tol: float = 1e-9) -> Optional[int]:
    """n with K3^2/4 + K2 +/- 2 sqrt(-K0) == 2(n+1), else None."""
    x = _condition_value(K3, K2, sigma_from_sign(K0, sign)) / 2 - 1
    n = round(x.real)
    if abs(x - n) < tol and n >= 0:
        return int(n)
    return None


@dataclass(frozen=True)
class SpectrumProblem:
    n: int
    K3: complex
    K2: complex
    K0: complex
    sigma: complex
    sign: Optional[str] = None

    def __post_init__(self):
        if self.n < 0:
            raise PreconditionError("n must be >= 0")
        lhs = _condition_value(self.K3, self.K2, self.sigma)
        scale = 1 + abs(self.K3) ** 2 / 4 + abs(self.K2) + 2 * abs(self.sigma)
        if abs(lhs - 2 * (self.n + 1)) > 1e-12 * scale:
            raise PreconditionError(f"termination condition fails: {lhs} != {2 * (self.n + 1)}")
        if abs(self.sigma ** 2 + self.K0) > 1e-12 * max(1.0, abs(self.K0)):
            raise PreconditionError("sigma**2 + K0 must vanish")

    @classmethod
    def from_sign(cls, K3, K2, K0, sign) -> "SpectrumProblem":
        n = check_termination(K3, K2, K0, sign)
        if n is None:
            raise PreconditionError("parameters do not satisfy the termination condition")
        sigma = sigma_from_sign(K0, sign)
        # snap K2 onto the exact condition
        K2 = 2 * (n + 1) + 2 * sigma - K3 * K3 / 4
        return cls(n=n, K3=K3, K2=K2, K0=K0, sigma=sigma, sign=Sign(sign).value)

    @classmethod
    def from_sigma(cls, n: int, K3, sigma) -> "SpectrumProblem":
        K2 = 2 * (n + 1) + 2 * sigma - K3 * K3 / 4
        return cls(n=n, K3=K3, K2=K2, K0=-sigma * sigma, sigma=sigma)

    @property
    def k2(self) -> complex:
        return self.K2 + self.K3 * self.K3 / 4 - 2 - 2 * self.sigma

    @property
    def k1_poly(self) -> CPoly:
        """k1 = -K1 - K3(1+2 sigma)/2 as a polynomial in K1."""
        return CPoly([-self.K3 * (1 + 2 * self.sigma) / 2, -1.0])

    def coeffs(self, K1) -> PbheCoeffs:
        return PbheCoeffs.normalized(self.K3, self.K2, K1, self.K0, self.sigma)

    @property
    def reality_hypotheses(self) -> bool:
        """K3, K2, K0 < 0 real and 1 +/- 2 sqrt(-K0) > 0."""
        vals = [complex(self.K3), complex(self.K2), complex(self.K0)]
        if any(abs(v.imag) > 0 or v.real >= 0 for v in vals):
            return False
        r = np.sqrt(-vals[2].real)
        return 1 - 2 * r > 0

    @property
    def periodic(self) -> bool:
        """2 sigma is an integer, so solutions are 2 pi i periodic."""
        t = 2 * complex(self.sigma)
        return abs(t.imag) < 1e-12 and abs(t.real - round(t.real)) < 1e-12


@dataclass(frozen=True)
class EigenPair:
    n: int
    nu: int
    K1: complex
    problem: SpectrumProblem
    lam: Optional[complex] = None
    multiplicity: int = 1


def det_poly(problem: SpectrumProblem) -> CPoly:
    """D_{n+1}(K1) by the tridiagonal three-term recursion."""
    K3, s, k2 = problem.K3, problem.sigma, problem.k2
    k1 = problem.k1_poly
    D = [CPoly([1.0]), k1]
    for j in range(2, problem.n + 2):
        D.append((k1 - (j - 1) * K3) * D[j - 1] - D[j - 2] * ((j - 1) * (j - 1 + 2 * s) * (k2 - 2 * (j - 2))))
    return D[problem.n + 1]


def k1_spectrum(problem: SpectrumProblem, check: bool = True) -> list[EigenPair]:
    """Roots of D_{n+1}; under the reality hypotheses asserts real distinct roots."""
    rs = cpoly.sort_roots(cpoly.roots(det_poly(problem)))
    mult = cpoly.cluster_multiplicities(rs)
    if check and problem.reality_hypotheses:
        if np.any(np.abs(rs.imag) >= 1e-9):
            raise InvariantViolation(f"non-real spectrum under reality hypotheses: {rs}")
        if len(rs) > 1 and np.min(np.diff(np.sort(rs.real))) <= 1e-8:
            raise InvariantViolation("repeated eigenvalue under reality hypotheses")
    return [EigenPair(problem.n, nu, complex(r), problem, multiplicity=mu)
            for nu, (r, mu) in enumerate(zip(rs, mult))]


def min_gap(pairs: list[EigenPair]) -> float:
    if len(pairs) < 2:
        return np.inf
    v = np.array([p.K1 for p in pairs])
    d = np.abs(v[:, None] - v[None, :])
    np.fill_diagonal(d, np.inf)
    return float(d.min())


@dataclass(frozen=True)
class BhSolution:
    """BH(z) = P(e^z) exp[(K3/2) e^z - e^{2z}/2 + sigma z] = Y(e^{-z}) exp[... + (n+sigma) z]."""

    pair: EigenPair
    hautot: HautotSolution
    K3: complex
    sigma: complex
    n: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "n", self.pair.n)

    @property
    def exponent_params(self) -> tuple:
        """(coefficient of e^z, coefficient of e^{2z}, coefficient of z) in the Y form."""
        return (self.K3 / 2, -0.5, self.n + self.sigma)

    def exponent(self, z):
        w = np.exp(z)
        return (0.5 * self.K3 - 0.5 * w) * w + self.sigma * z

    def log_parts(self, z):
        """(P(e^z), g(z)) with BH = P * exp(g)."""
        return cpoly.eval(self.hautot.poly, np.exp(z)), self.exponent(z)

    def __call__(self, z):
        p, g = self.log_parts(np.asarray(z, dtype=complex))
        return (p * np.exp(g))[()]

    def value_reversed_form(self, z):
        z = np.asarray(z, dtype=complex)
        w = np.exp(z)
        Y = cpoly.eval(self.hautot.reversed, 1 / w)
        return (Y * np.exp((0.5 * self.K3 - 0.5 * w) * w + (self.n + self.sigma) * z))[()]

    def derivs(self, z):
        """(f, f', f'') in closed form."""
        z = np.asarray(z, dtype=complex)
        w = np.exp(z)
        P, dP, d2P = cpoly.eval_derivs(self.hautot.poly, w)
        g1 = 0.5 * self.K3 * w - w * w + self.sigma
        g2 = 0.5 * self.K3 * w - 2 * w * w
        E = np.exp(self.exponent(z))
        f = P * E
        f1 = (w * dP + P * g1) * E
        f2 = (w * dP + w * w * d2P + 2 * w * dP * g1 + P * g2 + P * g1 * g1) * E
        return f[()], f1[()], f2[()]


def bh_solution(pair: EigenPair, coeffs: PbheCoeffs) -> BhSolution:
    if abs(coeffs.K4 + 1) > 1e-14:
        raise PreconditionError("coefficients must be normalized (K4 = -1)")
    params = bhe.bhe_from_pbhe(coeffs)
    h = bhe.solution_at(pair.n, params, nu=pair.nu, multiplicity=pair.multiplicity)
    return BhSolution(pair=pair, hautot=h, K3=coeffs.K3, sigma=coeffs.sigma)


def solutions(problem: SpectrumProblem, check: bool = True) -> list[BhSolution]:
    return [bh_solution(p, problem.coeffs(p.K1)) for p in k1_spectrum(problem, check)]


def pbhe_residual(coeffs: PbheCoeffs, sol: BhSolution, z, relative: bool = False):
    """f'' + (K4 e^{4z} + ... + K0) f."""
    f, _, f2 = sol.derivs(z)
    q = coeffs.potential(np.exp(np.asarray(z, dtype=complex))) * f
    res = f2 + q
    if not relative:
        return res
    s = np.abs(f2) + np.abs(q)
    return np.where(s > 0, res / np.where(s > 0, s, 1.0), res)[()]
