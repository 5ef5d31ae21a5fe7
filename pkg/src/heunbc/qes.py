"""Quasi-exact solvability: Turbiner / Bender-Dunne layer.

Identification with the BHE:

    alpha = 2s - 1,  beta = sqrt(2) c / 2,  gamma = 2J + 2s - 1,
    delta = -sqrt(2) E / 2 - c^2 / 4,

so gamma - alpha - 2 = 2(J - 1) and the series terminates at degree J - 1.
Under this map A_k = (-sqrt(2)/4)^k P_k^c(E), where

    P_k = [E - (2c(k-1) + 2cs - c^2/(2 sqrt 2))] P_{k-1}
          - 16 (k-1)(k-2+2s)(J+1-k) P_{k-2},
    P_0 = 1,  P_1 = E - 2cs + sqrt(2) c^2 / 4.

The factor (k-1) (not k+1) is what the general recursion specializes to.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import numpy as np
from scipy.special import rgamma

from . import bhe, cpoly, spectra
from .bhe import BheParams, PbheCoeffs
from .cpoly import SQRT2_EXACT, CPoly, QSqrt2
from .errors import NonTerminatingError, PreconditionError

SQRT2 = math.sqrt(2.0)
Scalar = Union[int, float, Fraction, complex]


@dataclass(frozen=True)
class TurbinerParams:
    s: float
    J: int
    c: float
    E: complex = 0.0

    def __post_init__(self):
        if not float(self.s) > 0:
            raise PreconditionError("s must be positive")
        if int(self.J) != self.J or self.J < 0:
            raise PreconditionError("J must be a nonnegative integer")


def bhe_from_turbiner(p: TurbinerParams) -> BheParams:
    s, c = float(p.s), float(p.c)
    return BheParams(alpha=2 * s - 1, beta=SQRT2 * c / 2, gamma=2 * p.J + 2 * s - 1,
                     delta=-SQRT2 * p.E / 2 - c * c / 4)


def energy_from_delta(delta, c) -> complex:
    return -SQRT2 * (delta + c * c / 4)


def periodic_turbiner_coeffs(p: TurbinerParams) -> PbheCoeffs:
    """Periodic-form coefficients obtained by composing the two parameter maps.

    K3 = -sqrt(2) c / 2, K2 = 2J + 2s - 1 - c^2/8, K1 = sqrt(2) E / 4 + c^2/8,
    K0 = -(2s-1)^2 / 4, sigma = (2s-1)/2.
    """
    return bhe.pbhe_from_bhe(bhe_from_turbiner(p))


def _exact_inputs(s, c):
    return Fraction(s), Fraction(c)


def bender_dunne_polys(s, J: int, c, kmax: int, exact: bool = False) -> list[CPoly]:
    """P_0^c .. P_kmax^c as polynomials in E.

    With ``exact=True`` s and c must be rationals (ints, Fractions or decimal
    strings) and coefficients live in Q(sqrt 2).
    """
    if kmax < 1:
        raise PreconditionError("kmax must be >= 1")
    if exact:
        s, c = _exact_inputs(s, c)
        r2 = SQRT2_EXACT
        shift0 = c * c / (2 * r2)
        one = QSqrt2(1)
    else:
        s, c = float(s), float(c)
        shift0 = c * c / (2 * SQRT2)
        one = 1.0
    E = CPoly([0 * one, one])
    P = [CPoly([one]), E - (2 * c * s - shift0) * one]
    for k in range(2, kmax + 1):
        lin = E - (2 * c * (k - 1) + 2 * c * s - shift0) * one
        P.append(lin * P[k - 1] - P[k - 2] * (16 * (k - 1) * (k - 2 + 2 * s) * (J + 1 - k) * one))
    return P[: kmax + 1]


def bender_dunne_values(s, J: int, c, E, kmax: int) -> np.ndarray:
    """P_0^c(E) .. P_kmax^c(E) by running the recursion on values.

    Avoids the cancellation of Horner evaluation on the expanded coefficients,
    which grow like 16^k k!.
    """
    s, c = float(s), float(c)
    E = np.asarray(E, dtype=complex)
    shift0 = c * c / (2 * SQRT2)
    out = [np.ones_like(E), E - (2 * c * s - shift0)]
    for k in range(2, kmax + 1):
        lin = E - (2 * c * (k - 1) + 2 * c * s - shift0)
        out.append(lin * out[k - 1] - 16 * (k - 1) * (k - 2 + 2 * s) * (J + 1 - k) * out[k - 2])
    return np.array(out[: kmax + 1])


def factorization_check(s, J: int, c, nmax: int, exact: bool = False) -> list[tuple]:
    """Divide P_{J+n} by P_J for n = 1..nmax; returns (Q_n, remainder_norm)."""
    if J < 1:
        raise PreconditionError("J must be >= 1")
    P = bender_dunne_polys(s, J, c, J + nmax, exact=exact)
    out = []
    for n in range(1, nmax + 1):
        q, r = cpoly.divide_exact(P[J + n], P[J])
        if exact:
            norm = 0.0 if r.is_zero() else max(abs(x) for x in r.coeffs)
        else:
            norm = max(abs(x) for x in r.coeffs) / P[J + n].scale()
        out.append((q, norm))
    return out


@dataclass(frozen=True)
class QesSpectrum:
    energies: np.ndarray        # from the tridiagonal determinant
    via_delta: np.ndarray       # from A_J(delta) roots
    via_polynomial: np.ndarray  # roots of P_J^c(E)
    max_deviation: float


def _match_dev(a, b) -> float:
    if len(a) != len(b):
        return math.inf
    if len(a) == 0:
        return 0.0
    return float(np.max(np.abs(np.sort_complex(a) - np.sort_complex(b))))


def qes_spectrum_report(s, J: int, c) -> QesSpectrum:
    """Energies with termination at degree J-1, by three independent routes."""
    s, c = float(s), float(c)
    if J < 1:
        empty = np.array([], dtype=complex)
        return QesSpectrum(empty, empty, empty, 0.0)
    coeffs = periodic_turbiner_coeffs(TurbinerParams(s, J, c))
    prob = spectra.SpectrumProblem.from_sigma(J - 1, coeffs.K3, coeffs.sigma)
    K1 = np.array([p.K1 for p in spectra.k1_spectrum(prob, check=False)])
    e_det = cpoly.sort_roots(2 * SQRT2 * (K1 - c * c / 8))
    deltas = np.array([h.delta_eig for h in bhe.hautot(J - 1, 2 * s - 1, SQRT2 * c / 2)])
    e_delta = cpoly.sort_roots(energy_from_delta(deltas, c))
    PJ = bender_dunne_polys(s, J, c, J)[J]
    e_poly = cpoly.sort_roots(cpoly.roots(PJ))
    dev = max(_match_dev(e_det, e_delta), _match_dev(e_det, e_poly))
    return QesSpectrum(e_det, e_delta, e_poly, dev)


def qes_spectrum(s, J: int, c) -> np.ndarray:
    """Real energies (J of them) for s > 0."""
    rep = qes_spectrum_report(s, J, c)
    if rep.max_deviation > 1e-9 * (1 + np.max(np.abs(rep.energies), initial=0.0)):
        raise PreconditionError(f"spectrum routes disagree by {rep.max_deviation:.2e}")
    return np.sort(rep.energies.real)


def condition_ii(s, J: int, c) -> dict:
    """Termination condition evaluated two ways.

    ``consistent``: K3^2/4 + K2 - 2 sigma - 2J for the composed coefficients
    (zero by construction). ``displayed_plus`` / ``displayed_minus``: the
    printed variant 4c^2 + 2(2s+2J+1) +/- (2s-1) - 4(J+1).
    """
    co = periodic_turbiner_coeffs(TurbinerParams(s, J, c))
    cons = co.K3 ** 2 / 4 + co.K2 - 2 * co.sigma - 2 * J
    base = 4 * c * c + 2 * (2 * s + 2 * J + 1) - 4 * (J + 1)
    return {"consistent": complex(cons), "displayed_plus": base + (2 * s - 1),
            "displayed_minus": base - (2 * s - 1)}


def _series_coeffs(p: TurbinerParams) -> list:
    """b_k = (-1/4)^k P_k(E) / (k! Gamma(k + 2s)), k < J."""
    P = bender_dunne_polys(p.s, p.J, p.c, max(p.J, 1))
    s = float(p.s)
    return [(-0.25) ** k * cpoly.eval(P[k], p.E) * rgamma(k + 2 * s) / math.factorial(k)
            for k in range(p.J)]


def check_spectrum_member(p: TurbinerParams, rtol: float = 1e-8) -> None:
    P = bender_dunne_polys(p.s, p.J, p.c, max(p.J, 1))
    PJ = P[p.J] if p.J >= 1 else None
    if PJ is None:
        raise NonTerminatingError("J = 0 has no terminating solution")
    val = abs(cpoly.eval(PJ, p.E))
    scale = float(np.sum(np.abs(PJ.to_numpy()) * np.abs(p.E) ** np.arange(PJ.degree + 1)))
    if val > rtol * scale:
        raise NonTerminatingError(f"E={p.E} is not a root of P_J (|P_J(E)|/scale={val / scale:.2e})")


def wavefunction_derivs(p: TurbinerParams, x, check: bool = True):
    """psi = exp(-x^4/4 - c x^2/4) x^{2s-1/2} sum_{k<J} b_k x^{2k}, with psi', psi''."""
    if check:
        check_spectrum_member(p)
    x = np.asarray(x, dtype=complex)
    if np.any(x == 0):
        raise PreconditionError("wavefunction is assembled for x != 0")
    b = _series_coeffs(p)
    T = np.zeros_like(x)
    dT = np.zeros_like(x)
    d2T = np.zeros_like(x)
    for k, bk in enumerate(b):
        T += bk * x ** (2 * k)
        if k >= 1:
            dT += 2 * k * bk * x ** (2 * k - 1)
            d2T += 2 * k * (2 * k - 1) * bk * x ** (2 * k - 2)
    nu = 2 * float(p.s) - 0.5
    c = float(p.c)
    xn = np.exp(nu * np.log(x))
    phi = T * xn
    dphi = (dT + nu * T / x) * xn
    d2phi = (d2T + 2 * nu * dT / x + nu * (nu - 1) * T / (x * x)) * xn
    h1 = -x ** 3 - c * x / 2
    h2 = -3 * x * x - c / 2
    eh = np.exp(-x ** 4 / 4 - c * x * x / 4)
    psi = phi * eh
    d1 = (dphi + h1 * phi) * eh
    d2 = (d2phi + 2 * h1 * dphi + (h2 + h1 * h1) * phi) * eh
    return psi[()], d1[()], d2[()]


def wavefunction(p: TurbinerParams, x, check: bool = True):
    return wavefunction_derivs(p, x, check)[0]


def potential(p: TurbinerParams, x):
    """V(x) = (4s-1)(4s-3)/(4x^2) - (4s + 4J - 2 - c^2/4) x^2 + c x^4 + x^6."""
    s, c, J = float(p.s), float(p.c), p.J
    return (4 * s - 1) * (4 * s - 3) / (4 * x * x) - (4 * s + 4 * J - 2 - c * c / 4) * x ** 2 + c * x ** 4 + x ** 6


def schrodinger_energy(p: TurbinerParams) -> complex:
    """Eigenvalue of -d^2/dx^2 + V for spectral parameter E: E + sqrt(2) c^2 / 4."""
    return p.E + SQRT2 * float(p.c) ** 2 / 4


def wavefunction_residual(p: TurbinerParams, x, check: bool = True, relative: bool = True):
    """-psi'' + V psi - (E + sqrt(2) c^2/4) psi."""
    x = np.asarray(x, dtype=complex)
    psi, _, d2 = wavefunction_derivs(p, x, check)
    t1, t2, t3 = -d2, potential(p, x) * psi, -schrodinger_energy(p) * psi
    res = t1 + t2 + t3
    if not relative:
        return res
    return (res / (np.abs(t1) + np.abs(t2) + np.abs(t3)))[()]
