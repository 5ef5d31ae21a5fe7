"""Complex orthogonality weight rho_n(z) = sum_k a_k z^{-k} for the reversed polynomials.

Recursion (a_0 = -n - alpha/2):

    (1 + 2n + alpha) a_1 = beta a_0
    (2 - k + 2n + alpha) a_k = beta a_{k-1} + 2 a_{k-2},   k >= 2.

|a_k| sqrt(k!) grows like sqrt(2)^k, so the series converges for z != 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gamma as Gamma
from scipy.special import gammaln, rgamma

from .errors import (DegenerateWeightError, DiagnosticUndefinedError,
                     InsufficientTruncationError, PreconditionError)

TAIL_EPS = 0.5  # epsilon in the (sqrt 2 + eps)^k / sqrt(k!) bound
TAIL_TERMS = 400


@dataclass(frozen=True)
class WeightSeries:
    n: int
    alpha: complex
    beta: complex
    coeffs: np.ndarray
    kmax: int
    tail_estimate: float

    def tail_at(self, radius: float) -> float:
        return _tail_bound(self.coeffs, radius)


def _divisor(n, alpha, k):
    return 2 - k + 2 * n + alpha


def _check_divisors(n, alpha, kmax):
    for k in range(1, kmax + 1):
        if abs(_divisor(n, alpha, k)) < 1e-12:
            raise DegenerateWeightError(f"weight recursion divisor vanishes at k={k}", k=k)


def _tail_bound(a: np.ndarray, radius: float) -> float:
    """C * sum_{k>kmax} (sqrt2+eps)^k r^{-k} / sqrt(k!), C fitted on stored terms."""
    q = math.sqrt(2) + TAIL_EPS
    ks = np.arange(len(a))
    with np.errstate(divide="ignore"):
        logs = np.log(np.abs(a)) + 0.5 * gammaln(ks + 1) - ks * math.log(q)
    logC = np.max(logs[np.isfinite(logs)]) if np.any(np.isfinite(logs)) else -np.inf
    if not np.isfinite(logC):
        return 0.0
    kt = np.arange(len(a), len(a) + TAIL_TERMS)
    lt = logC + kt * (math.log(q) - math.log(radius)) - 0.5 * gammaln(kt + 1)
    return float(np.sum(np.exp(lt)))


def _recur(n, alpha, beta, kmax) -> np.ndarray:
    a = np.zeros(kmax + 1, dtype=complex)
    a[0] = -n - alpha / 2
    if kmax >= 1:
        a[1] = beta * a[0] / _divisor(n, alpha, 1)
    for k in range(2, kmax + 1):
        a[k] = (beta * a[k - 1] + 2 * a[k - 2]) / _divisor(n, alpha, k)
    return a


def weight_coeffs(n: int, alpha, beta, kmax: int) -> WeightSeries:
    """Coefficients a_0..a_kmax from the recursion (ground truth)."""
    if kmax < 0:
        raise PreconditionError("kmax must be >= 0")
    _check_divisors(n, alpha, kmax)
    a = _recur(n, alpha, beta, kmax)
    return WeightSeries(n, alpha, beta, a, kmax, _tail_bound(a, 1.0))


def weight_closed_form(n: int, alpha, kmax: int) -> WeightSeries:
    """beta = 0: a_{2k} = (-1)^k Gamma(1-n-alpha/2) / Gamma(k-n-alpha/2), odd terms zero."""
    x = n + alpha / 2
    for k in range(0, kmax // 2 + 1):
        v = complex(k - x)
        if abs(v.imag) < 1e-14 and v.real <= 0 and abs(v.real - round(v.real)) < 1e-12:
            raise DegenerateWeightError(f"Gamma pole at k={2 * k}", k=2 * k)
    v = complex(1 - x)
    if abs(v.imag) < 1e-14 and v.real <= 0 and abs(v.real - round(v.real)) < 1e-12:
        raise DegenerateWeightError("Gamma pole in the normalization Gamma(1-n-alpha/2)")
    a = np.zeros(kmax + 1, dtype=complex)
    g0 = Gamma(complex(1 - x))
    for k in range(0, kmax // 2 + 1):
        a[2 * k] = (-1) ** k * g0 * rgamma(complex(k - x))
    return WeightSeries(n, alpha, 0.0, a, kmax, _tail_bound(a, 1.0))


def weight_eval(w: WeightSeries, z, tol: float | None = 1e-12):
    """Truncated Laurent sum; raises if the tail bound at |z| exceeds ``tol``."""
    z = np.asarray(z, dtype=complex)
    rmin = float(np.min(np.abs(z))) if z.size else 1.0
    if rmin < 0.5:
        raise PreconditionError("weight evaluation requires |z| >= 0.5")
    if tol is not None:
        tail = _tail_bound(w.coeffs, rmin)
        if tail >= tol:
            raise InsufficientTruncationError(f"tail bound {tail:.3e} at |z|={rmin:g} exceeds {tol:g}")
    t = 1 / z
    acc = np.zeros_like(z) + w.coeffs[-1]
    for c in w.coeffs[-2::-1]:
        acc = acc * t + c
    return acc[()]


def self_adjoint_residual(w: WeightSeries, z):
    """(z^3 rho)' - [(1-2n-alpha) z^2 + beta z + 2] rho - (2+2n+alpha)(-n-alpha/2) z^2."""
    z = np.asarray(z, dtype=complex)
    if np.min(np.abs(z)) < 0.5:
        raise PreconditionError("residual requires |z| >= 0.5")
    n, al, be = w.n, w.alpha, w.beta
    ks = np.arange(w.kmax + 1)
    zk = z[..., None] ** (-ks.astype(float))
    rho = (zk * w.coeffs).sum(-1)
    d_z3rho = ((3 - ks) * w.coeffs * zk).sum(-1) * z * z
    res = d_z3rho - ((1 - 2 * n - al) * z * z + be * z + 2) * rho - (2 + 2 * n + al) * (-n - al / 2) * z * z
    return res[()]


def growth_profile(n: int, alpha, beta, kmax: int) -> np.ndarray:
    """(|a_k| sqrt(k!))^{1/k} for k = 0..kmax (entry 0 is nan), computed in log space.

    Runs the recursion on b_k = a_k sqrt(k!) with periodic rescaling, so
    neither overflow nor underflow occurs for large kmax.
    """
    _check_divisors(n, alpha, kmax)
    logs = np.full(kmax + 1, -np.inf)
    b_prev2 = complex(-n - alpha / 2)  # b_0
    shift = 0.0
    logs[0] = math.log(abs(b_prev2)) if b_prev2 != 0 else -np.inf
    if kmax >= 1:
        b_prev = beta * b_prev2 / _divisor(n, alpha, 1)
        logs[1] = math.log(abs(b_prev)) if b_prev != 0 else -np.inf
    for k in range(2, kmax + 1):
        b = (beta * math.sqrt(k) * b_prev + 2 * math.sqrt(k * (k - 1)) * b_prev2) / _divisor(n, alpha, k)
        logs[k] = (math.log(abs(b)) if b != 0 else -np.inf) + shift
        b_prev2, b_prev = b_prev, b
        m = max(abs(b_prev), abs(b_prev2))
        if m > 1e100 or (0 < m < 1e-100):
            b_prev2 /= m
            b_prev /= m
            shift += math.log(m)
    ks = np.arange(kmax + 1, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.exp(logs / ks)
    out[0] = np.nan
    return out


def convergence_diagnostic(n: int, alpha, beta, kmax: int = 200) -> float:
    """Empirical (|a_k| sqrt(k!))^{1/k} near k = kmax; tends to sqrt(2).

    Uses the larger of the two most recent nonzero terms (a limsup estimate),
    so an accidental near-cancellation at k = kmax does not bias the value.
    For beta = 0 only even k carry nonzero coefficients.
    """
    if kmax < 200:
        raise PreconditionError("convergence diagnostic needs kmax >= 200")
    prof = growth_profile(n, alpha, beta, kmax)
    step = 2 if beta == 0 else 1
    last = kmax if (kmax % step == 0) else kmax - 1
    vals = prof[[last - step, last]]
    if not np.any(vals > 0):
        raise DiagnosticUndefinedError("weight series terminates: diagnostic undefined")
    return float(np.max(vals))
