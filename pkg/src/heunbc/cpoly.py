"""Dense univariate polynomials with complex or exact coefficients.

Coefficients are stored in ascending degree. Two coefficient modes exist:

* float mode: everything is ``complex`` (double precision);
* exact mode: every coefficient is an ``int``, ``Fraction`` or ``QSqrt2``.

Exact mode is used to check factorization identities without rounding.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Number
from typing import Iterable, Sequence

import numpy as np

from .errors import (ConvergenceError, InvalidReversalError, PreconditionError,
                     UndefinedRootsError, ZeroDivisorError)

TRIM_RTOL = 1e-13


@dataclass(frozen=True)
class QSqrt2:
    """Exact element a + b*sqrt(2) of the field Q(sqrt 2)."""

    a: Fraction = Fraction(0)
    b: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))

    @staticmethod
    def lift(x):
        if isinstance(x, QSqrt2):
            return x
        if isinstance(x, (int, Fraction)):
            return QSqrt2(Fraction(x), Fraction(0))
        return NotImplemented

    def __add__(self, other):
        o = QSqrt2.lift(other)
        if o is NotImplemented:
            return complex(self) + other
        return QSqrt2(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return QSqrt2(-self.a, -self.b)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = QSqrt2.lift(other)
        if o is NotImplemented:
            return complex(self) * other
        return QSqrt2(self.a * o.a + 2 * self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def inverse(self):
        n = self.a * self.a - 2 * self.b * self.b
        if n == 0:
            raise ZeroDivisorError("division by zero in Q(sqrt 2)")
        return QSqrt2(self.a / n, -self.b / n)

    def __truediv__(self, other):
        o = QSqrt2.lift(other)
        if o is NotImplemented:
            return complex(self) / other
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = QSqrt2.lift(other)
        if o is NotImplemented:
            return other / complex(self)
        return o * self.inverse()

    def __pow__(self, k: int):
        out = QSqrt2(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        o = QSqrt2.lift(other)
        if o is NotImplemented:
            return complex(self) == other
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        return hash((self.a, self.b))

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(2.0)

    def __complex__(self):
        return complex(float(self))

    def __abs__(self):
        return abs(float(self))

    def __repr__(self):
        return f"QSqrt2({self.a}, {self.b})"


SQRT2_EXACT = QSqrt2(0, 1)
_EXACT_TYPES = (int, Fraction, QSqrt2)


def _is_exact(x) -> bool:
    return isinstance(x, _EXACT_TYPES) and not isinstance(x, bool)


def _trim(coeffs: list, exact: bool) -> list:
    if exact:
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs.pop()
        return coeffs
    mags = [abs(c) for c in coeffs]
    cmax = max(mags) if mags else 0.0
    thr = TRIM_RTOL * cmax
    while len(coeffs) > 1 and (abs(coeffs[-1]) < thr or coeffs[-1] == 0):
        coeffs.pop()
    return coeffs


@dataclass(frozen=True)
class CPoly:
    """Polynomial sum_k coeffs[k] * x**k, canonically trimmed."""

    coeffs: tuple

    def __init__(self, coeffs: Iterable):
        cs = list(coeffs)
        if not cs:
            cs = [0]
        exact = all(_is_exact(c) for c in cs)
        if not exact:
            cs = [complex(c) for c in cs]
        object.__setattr__(self, "coeffs", tuple(_trim(cs, exact)))

    # basic properties
    @property
    def exact(self) -> bool:
        return all(_is_exact(c) for c in self.coeffs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return len(self.coeffs) == 1 and self.coeffs[0] == 0

    @property
    def lead(self):
        return self.coeffs[-1]

    def scale(self) -> float:
        return max(abs(c) for c in self.coeffs)

    def to_numpy(self) -> np.ndarray:
        return np.array([complex(c) for c in self.coeffs], dtype=complex)

    def to_float(self) -> "CPoly":
        return CPoly([complex(c) for c in self.coeffs])

    @classmethod
    def constant(cls, c) -> "CPoly":
        return cls([c])

    @classmethod
    def x(cls) -> "CPoly":
        return cls([0, 1])

    @classmethod
    def from_roots(cls, roots: Sequence[complex], lead=1.0) -> "CPoly":
        p = cls([lead])
        for r in roots:
            p = p * cls([-r, 1])
        return p

    # arithmetic
    def __add__(self, other):
        if not isinstance(other, CPoly):
            other = CPoly([other])
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        out = [(a[k] if k < len(a) else 0) + (b[k] if k < len(b) else 0) for k in range(n)]
        return CPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return CPoly([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other if isinstance(other, CPoly) else -other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, CPoly):
            a, b = self.coeffs, other.coeffs
            out = [0] * (len(a) + len(b) - 1)
            for i, ai in enumerate(a):
                if ai == 0:
                    continue
                for j, bj in enumerate(b):
                    out[i + j] = out[i + j] + ai * bj
            return CPoly(out)
        if isinstance(other, Number) or _is_exact(other):
            return CPoly([c * other for c in self.coeffs])
        return NotImplemented

    __rmul__ = __mul__

    def __call__(self, z):
        return eval(self, z)

    def derivative(self) -> "CPoly":
        if self.degree == 0:
            return CPoly([self.coeffs[0] * 0])
        return CPoly([k * self.coeffs[k] for k in range(1, len(self.coeffs))])

    def __eq__(self, other):
        if not isinstance(other, CPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def allclose(self, other: "CPoly", rtol: float = 1e-12) -> bool:
        a, b = self.to_numpy(), other.to_numpy()
        n = max(len(a), len(b))
        a = np.pad(a, (0, n - len(a)))
        b = np.pad(b, (0, n - len(b)))
        s = max(np.max(np.abs(a)), np.max(np.abs(b)), 1e-300)
        return bool(np.max(np.abs(a - b)) <= rtol * s)


def eval(p: CPoly, z):
    """Horner evaluation; ``z`` may be a scalar or a numpy array."""
    cs = p.coeffs
    if p.exact and not _is_exact(z):
        cs = [complex(c) for c in cs]
    acc = np.full(z.shape, cs[-1], dtype=complex) if isinstance(z, np.ndarray) else cs[-1]
    for c in reversed(cs[:-1]):
        acc = acc * z + c
    return acc


def eval_derivs(p: CPoly, z):
    """Return (p(z), p'(z), p''(z)) using exact polynomial derivatives."""
    d1 = p.derivative()
    d2 = d1.derivative()
    return eval(p, z), eval(d1, z), eval(d2, z)


def reverse(p: CPoly, n: int) -> CPoly:
    """q(x) = x**n * p(1/x)."""
    if n < p.degree:
        raise InvalidReversalError(f"reversal order {n} below degree {p.degree}")
    cs = list(p.coeffs) + [p.coeffs[0] * 0] * (n - p.degree)
    return CPoly(cs[::-1])


def cauchy_bound(p: CPoly) -> float:
    cs = p.to_numpy()
    return 1.0 + float(np.max(np.abs(cs[:-1] / cs[-1]))) if len(cs) > 1 else 1.0


def roots(p: CPoly, tol: float = 1e-14, maxiter: int = 500) -> np.ndarray:
    """All roots by simultaneous Aberth-Ehrlich iteration (no deflation).

    Start points lie on the Cauchy-bound circle with fixed phases, so the
    result is deterministic. Convergence: every correction below
    ``tol * (1 + |r|)``, or every residual at rounding level.
    """
    if p.is_zero():
        raise UndefinedRootsError("roots of the zero polynomial are undefined")
    if p.degree < 1:
        raise PreconditionError("roots require degree >= 1")
    c = p.to_numpy()
    a = c / c[-1]
    d = p.degree
    if d == 1:
        return np.array([-a[0]])
    da = a[1:] * np.arange(1, d + 1)
    absa = np.abs(a)
    R = cauchy_bound(p)
    z = R * np.exp(1j * (2 * np.pi * np.arange(d) / d + 0.4))
    eps = np.finfo(float).eps
    best, best_err = z.copy(), np.inf
    for _ in range(maxiter):
        pv = np.polyval(a[::-1], z)
        dv = np.polyval(da[::-1], z)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = pv / dv
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, 1.0)
            inv = 1.0 / diff
            np.fill_diagonal(inv, 0.0)
            ssum = inv.sum(axis=1)
            w = ratio / (1.0 - ratio * ssum)
        bad = ~np.isfinite(w)
        if bad.any():
            w[bad] = 1e-8 * (1 + np.abs(z[bad]))
        z = z - w
        corr = np.max(np.abs(w) / (1 + np.abs(z)))
        if corr < best_err:
            best, best_err = z.copy(), corr
        if corr < tol:
            return z
        resid = np.abs(np.polyval(a[::-1], z))
        bound = 4 * d * eps * np.polyval(absa[::-1], np.abs(z))
        if np.all(resid <= bound):
            return z
    raise ConvergenceError(f"Aberth iteration did not converge in {maxiter} steps", best=best)


def sort_roots(rs) -> np.ndarray:
    """Lexicographic (real, imag) order; real parts equal to 1e-10 relative count as ties."""
    rs = np.asarray(rs, dtype=complex)
    if rs.size == 0:
        return rs
    scale = max(1.0, float(np.max(np.abs(rs))))
    key = np.round(rs.real / scale, 10)
    idx = np.lexsort((rs.imag, key))
    return rs[idx]


def divide_exact(p: CPoly, q: CPoly):
    """Long division: p = q*quot + rem with deg(rem) < deg(q)."""
    if q.is_zero():
        raise ZeroDivisorError("division by the zero polynomial")
    num = list(p.coeffs)
    dq = q.degree
    lead = q.lead
    if p.degree < dq:
        return CPoly([num[0] * 0]), p
    quot = [0] * (p.degree - dq + 1)
    for k in range(p.degree - dq, -1, -1):
        top = num[k + dq]
        t = _exact_div(top, lead) if _is_exact(top) and _is_exact(lead) else top / lead
        quot[k] = t
        for j in range(dq + 1):
            num[k + j] = num[k + j] - t * q.coeffs[j]
        num[k + dq] = num[k + dq] * 0
    rem = num[:dq] if dq > 0 else [num[0] * 0]
    return CPoly(quot), CPoly(rem)


def _exact_div(a, b):
    if isinstance(a, QSqrt2) or isinstance(b, QSqrt2):
        return QSqrt2.lift(a) / b
    return Fraction(a) / Fraction(b)


def max_coeff_error(p: CPoly, q: CPoly) -> float:
    a, b = p.to_numpy(), q.to_numpy()
    n = max(len(a), len(b))
    return float(np.max(np.abs(np.pad(a, (0, n - len(a))) - np.pad(b, (0, n - len(b))))))


def cluster_multiplicities(rs, rtol: float = 1e-6) -> list[int]:
    """Multiplicity of each root: how many roots lie within rtol*(1+|r|)."""
    rs = np.asarray(rs, dtype=complex)
    return [int(np.sum(np.abs(rs - r) <= rtol * (1 + abs(r)))) for r in rs]


def csqrt(x) -> complex:
    return cmath.sqrt(complex(x))
