"""Quadrature-backed verification of orthogonality and Fredholm identities.

Closed contours and periodic segments use the uniform trapezoid rule; every
reported integral carries a self-convergence certificate
``max(|I_2N - I_N|, |I_4N - I_2N|) / scale`` where ``scale`` is the integral of
|integrand|. The second difference catches integrands whose dominant Fourier
mode aliases identically at N and 2N.
The half-line integrals use adaptive Gauss-Kronrod (QUADPACK via scipy).
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import integrate, optimize

from . import bhe, cpoly, spectra, weight
from .bhe import PbheCoeffs
from .cpoly import CPoly
from .errors import (ConfigurationError, ConstraintViolation,
                     DegenerateIntegralError, EvaluationError,
                     InsufficientTruncationError, IntegrabilityError,
                     PreconditionError)
from .spectra import BhSolution, SpectrumProblem

CERT_RTOL = 1e-11


def _certificate(levels, S) -> float:
    """max over consecutive refinements of |I_2N - I_N| / S, entrywise."""
    S = np.asarray(S, dtype=float)
    out = 0.0
    for a, b in zip(levels, levels[1:]):
        with np.errstate(divide="ignore", invalid="ignore"):
            d = np.where(S > 0, np.abs(np.asarray(b) - np.asarray(a)) / np.where(S > 0, S, 1.0), 0.0)
        out = max(out, float(np.max(d)) if d.size else 0.0)
    return out


# ---------------------------------------------------------------- rules

@dataclass(frozen=True)
class ContourRule:
    """Uniform trapezoid rule on a circle or a vertical segment of length 2 pi."""

    kind: str = "circle"
    N: int = 512
    radius: float = 1.0
    base: complex = 0j

    def __post_init__(self):
        if self.kind not in ("circle", "segment"):
            raise PreconditionError(f"unknown contour kind {self.kind!r}")
        if self.N < 16 or self.N & (self.N - 1):
            raise PreconditionError("N must be a power of two >= 16")
        if self.kind == "circle" and not self.radius > 0:
            raise PreconditionError("radius must be positive")

    @classmethod
    def circle(cls, radius: float = 1.0, N: int = 512) -> "ContourRule":
        return cls("circle", N, radius=radius)

    @classmethod
    def segment(cls, base: complex = 0j, N: int = 512) -> "ContourRule":
        return cls("segment", N, base=complex(base))

    def nodes(self):
        """(z_j, dz_j) with z_j at parameter 2 pi j / N."""
        t = 2 * np.pi * np.arange(self.N) / self.N
        h = 2 * np.pi / self.N
        if self.kind == "circle":
            z = self.radius * np.exp(1j * t)
            return z, 1j * z * h
        z = self.base + 1j * t
        return z, np.full(self.N, 1j * h)

    def doubled(self) -> "ContourRule":
        return replace(self, N=2 * self.N)

    def describe(self) -> dict:
        d = {"kind": self.kind, "N": self.N}
        if self.kind == "circle":
            d["radius"] = self.radius
        else:
            d["base"] = self.base
        return d


def contour_integral(f: Callable, rule: ContourRule) -> complex:
    z, dz = rule.nodes()
    v = np.asarray(f(z), dtype=complex)
    bad = np.flatnonzero(~np.isfinite(v))
    if bad.size:
        raise EvaluationError(f"non-finite integrand at node {bad[0]}", index=int(bad[0]))
    return complex(np.sum(v * dz))


@dataclass(frozen=True)
class Certified:
    value: complex
    value_2n: complex
    scale: float
    certificate: float  # max(|I_2N - I_N|, |I_4N - I_2N|) / scale
    N: int

    @property
    def ok(self) -> bool:
        return self.certificate < CERT_RTOL


def certified_integral(f: Callable, rule: ContourRule) -> Certified:
    i1 = contour_integral(f, rule)
    r2 = rule.doubled()
    z, dz = r2.nodes()
    v = np.asarray(f(z), dtype=complex)
    i2 = complex(np.sum(v * dz))
    i4 = contour_integral(f, r2.doubled())
    scale = float(np.sum(np.abs(v * dz)))
    return Certified(i1, i2, scale, _certificate([i1, i2, i4], scale), rule.N)


# ---------------------------------------------------------------- reports

@dataclass(frozen=True)
class OrthReport:
    """Gram matrix with normalizations.

    ``gram`` entries are in units of exp(log_scale). ``scale[m, v]`` is the
    discrete integral of |integrand| in the same units.
    """

    gram: np.ndarray
    scale: np.ndarray
    normalized_offdiag: float   # max |G_mv| / sqrt(|G_mm| |G_vv|), see make_report
    scaled_offdiag: float       # max |G_mv| / sqrt(S_mm S_vv)
    diag_ratio: float           # min |G_vv| / S_vv
    diag_nonzero: bool
    symmetry: float
    certificate: float
    rule: Optional[ContourRule]
    log_scale: float = 0.0
    skipped: tuple = ()
    flags: dict = field(default_factory=dict)

    @property
    def size(self) -> int:
        return self.gram.shape[0]


def _offdiag_pairs(k: int, skipped: Sequence) -> list:
    sk = {tuple(sorted(p)) for p in skipped}
    return [(i, j) for i in range(k) for j in range(k) if i != j and (min(i, j), max(i, j)) not in sk]


def make_report(G, S, refined, rule, log_scale=0.0, skipped=(), flags=None,
                cert: Optional[float] = None) -> OrthReport:
    """``refined`` holds the Gram matrices at 2N and 4N (used for the certificate)."""
    G = np.asarray(G, dtype=complex)
    S = np.asarray(S, dtype=float)
    k = G.shape[0]
    d = np.abs(np.diag(G))
    sd = np.diag(S)
    pairs = _offdiag_pairs(k, skipped)
    # a diagonal that vanishes (e.g. by parity) falls back to its absolute scale
    degenerate = [i for i in range(k) if not d[i] > 1e-6 * sd[i]]
    dn = np.where(d > 1e-6 * sd, d, sd)
    norm_off, sc_off = 0.0, 0.0
    for i, j in pairs:
        den = math.sqrt(dn[i] * dn[j])
        norm_off = max(norm_off, abs(G[i, j]) / den if den > 0 else math.inf)
        den2 = math.sqrt(sd[i] * sd[j])
        sc_off = max(sc_off, abs(G[i, j]) / den2 if den2 > 0 else 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.where(sd > 0, d / np.where(sd > 0, sd, 1.0), 0.0)
    diag_ratio = float(np.min(ratios)) if k else 0.0
    smax = float(np.max(S)) if S.size else 1.0
    sym = float(np.max(np.abs(G - G.T)) / smax) if smax > 0 else 0.0
    if cert is None:
        cert = _certificate([G, *refined], S)
    flags = dict(flags or {})
    flags["degenerate_diagonals"] = degenerate
    return OrthReport(G, S, norm_off, sc_off, diag_ratio, diag_ratio > 1e-6, sym, cert,
                      rule, log_scale, tuple(skipped), flags)


def _gram(V, wts):
    """G = sum_j V_m(j) V_v(j) wts_j and S = sum_j |V_m V_v wts|."""
    G = (V * wts) @ V.T
    A = np.abs(V)
    S = (A * np.abs(wts)) @ A.T
    return G, S


def _repeated_pairs(mults_and_values) -> list:
    """Index pairs belonging to the same repeated-root cluster."""
    out = []
    vals = [v for v, _ in mults_and_values]
    for i, (vi, mi) in enumerate(mults_and_values):
        if mi < 2:
            continue
        for j in range(i + 1, len(vals)):
            if abs(vals[j] - vi) <= 1e-6 * (1 + abs(vi)):
                out.append((i, j))
    return out


# ---------------------------------------------------------------- circle

def circle_orthogonality(n: int, alpha, beta, rule: Optional[ContourRule] = None,
                         kmax: int = 80) -> OrthReport:
    """G_mv = contour integral of Y_m Y_v rho_n over a circle."""
    rule = rule or ContourRule.circle()
    if rule.kind != "circle":
        raise PreconditionError("circle orthogonality needs a circle rule")
    sols = bhe.hautot(n, alpha, beta)
    w = weight.weight_coeffs(n, alpha, beta, kmax)
    tail = w.tail_at(rule.radius)
    if tail >= 1e-12:
        raise InsufficientTruncationError(f"weight tail {tail:.2e} on radius {rule.radius}")

    def build(r):
        z, dz = r.nodes()
        V = np.array([cpoly.eval(s.reversed, z) for s in sols])
        rho = weight.weight_eval(w, z, tol=None)
        return _gram(V, rho * dz)

    G, S = build(rule)
    G2, _ = build(rule.doubled())
    G4, _ = build(rule.doubled().doubled())
    skipped = _repeated_pairs([(s.delta_eig, s.multiplicity) for s in sols])
    return make_report(G, S, (G2, G4), rule, skipped=skipped,
                       flags={"weight_tail": tail, "kmax": kmax})


# ---------------------------------------------------------------- half-line

def _cutoff(alpha: float, beta: float, floor: float = 1e-18) -> float:
    """Smallest t beyond the weight's peak with t^a exp(-bt-t^2) < floor."""
    lf = math.log(floor)
    g = lambda t: alpha * math.log(t) - beta * t - t * t - lf
    tp = max((-beta + math.sqrt(beta * beta + 8 * max(alpha, 0.0))) / 4, 1e-3)
    hi = max(2 * tp, 1.0)
    while g(hi) > 0:
        hi *= 2
    if g(tp) <= 0:
        return tp
    return optimize.brentq(g, tp, hi, xtol=1e-12)


def halfline_orthogonality(m: int, alpha: float, beta: float, epsrel: float = 1e-13) -> OrthReport:
    """G_mv = int_0^T t^a exp(-bt-t^2) P_m P_v dt, T where the weight drops below 1e-18."""
    if np.iscomplexobj(alpha) or np.iscomplexobj(beta):
        raise PreconditionError("half-line orthogonality needs real alpha, beta")
    alpha, beta = float(alpha), float(beta)
    if alpha <= -1:
        raise IntegrabilityError("t^alpha is not integrable at 0 for alpha <= -1")
    sols = bhe.hautot(m, alpha, beta)
    polys = [np.real(s.poly.to_numpy())[::-1] for s in sols]
    T = _cutoff(alpha, beta)
    wfun = lambda t: t ** alpha * math.exp(-beta * t - t * t)
    k = len(sols)
    G = np.zeros((k, k))
    S = np.zeros((k, k))
    err = np.zeros((k, k))
    for i in range(k):
        for j in range(i, k):
            f = lambda t, i=i, j=j: wfun(t) * np.polyval(polys[i], t) * np.polyval(polys[j], t)
            with warnings.catch_warnings():
                # roundoff warnings are expected near epsrel; the error estimate is reported
                warnings.simplefilter("ignore", integrate.IntegrationWarning)
                v, e = integrate.quad(f, 0.0, T, epsabs=0.0, epsrel=epsrel, limit=400)
                a, _ = integrate.quad(lambda t: abs(f(t)), 0.0, T, epsabs=0.0, epsrel=1e-10, limit=400)
            G[i, j] = G[j, i] = v
            S[i, j] = S[j, i] = a
            err[i, j] = err[j, i] = e / a if a > 0 else 0.0
    skipped = _repeated_pairs([(s.delta_eig, s.multiplicity) for s in sols])
    return make_report(G, S, None, None, skipped=skipped, cert=float(err.max()),
                       flags={"cutoff": T, "quadrature": "adaptive Gauss-Kronrod"})


# ---------------------------------------------------------------- periodic segments

def _family_arrays(sols: Sequence[BhSolution], z):
    P = np.array([cpoly.eval(s.hautot.poly, np.exp(z)) for s in sols])
    g = sols[0].exponent(z)
    return P, g


def _check_periodic(problem: SpectrumProblem):
    if not problem.periodic:
        raise PreconditionError("segment orthogonality needs 2*sigma integer (2 pi i periodicity)")


def segment_orthogonality(problem: SpectrumProblem, rule: ContourRule,
                          strict: bool = False) -> OrthReport:
    """G_mv = int BH_m BH_v e^z dz along a vertical segment of length 2 pi."""
    if rule.kind != "segment":
        raise PreconditionError("segment orthogonality needs a segment rule")
    _check_periodic(problem)
    hyp = problem.reality_hypotheses
    if strict and not hyp:
        raise PreconditionError("K3, K2, K0 < 0 and 1 +/- 2 sqrt(-K0) > 0 required")
    sols = spectra.solutions(problem, check=False)
    r2 = rule.doubled()
    z2, _ = r2.nodes()
    _, g2 = _family_arrays(sols, z2)
    L = float(np.max(np.real(2 * g2 + z2)))  # common exponent for N and 2N

    def build(r):
        z, dz = r.nodes()
        P, g = _family_arrays(sols, z)
        return _gram(P, np.exp(2 * g + z - L) * dz)

    G, S = build(rule)
    G2, _ = build(r2)
    G4, _ = build(r2.doubled())
    skipped = _repeated_pairs([(s.pair.K1, s.pair.multiplicity) for s in sols])
    return make_report(G, S, (G2, G4), rule, log_scale=L, skipped=skipped,
                       flags={"hypotheses_hold": hyp, "sigma": problem.sigma, "n": problem.n})


def single_orthogonality(problem: SpectrumProblem, rule: Optional[ContourRule] = None,
                         strict: bool = False) -> OrthReport:
    return segment_orthogonality(problem, rule or ContourRule.segment(0j), strict)


def shifted_orthogonality(problem: SpectrumProblem, rule: Optional[ContourRule] = None,
                          strict: bool = False) -> OrthReport:
    rule = rule or ContourRule.segment(math.pi)
    return segment_orthogonality(problem, rule, strict)


@dataclass(frozen=True)
class DoubleReport:
    """T[m, v] for pairs (n, m) x (m', v); entries in units of exp(log_scale)."""

    T: np.ndarray
    scale: np.ndarray
    normalized: np.ndarray
    max_offdiag: float
    diag_ratio: Optional[float]
    certificate: float
    N: int
    log_scale: float
    n: int
    m: int


def double_orthogonality(prob_n: SpectrumProblem, prob_m: SpectrumProblem, N: int = 128) -> DoubleReport:
    """Tensor trapezoid over [0, 2 pi i] x [pi, pi + 2 pi i] of
    BH_{n,mu}(z) BH_{n,mu}(s) BH_{m,nu}(z) BH_{m,nu}(s) (e^z - e^s)."""
    tol = 1e-12 * (1 + abs(prob_n.K3) ** 2 + abs(prob_n.K2))
    if abs(prob_n.K3 - prob_m.K3) > tol or abs(prob_n.K2 - prob_m.K2) > tol:
        raise ConfigurationError("both problems must share K3 and K2")
    _check_periodic(prob_n)
    _check_periodic(prob_m)
    sa = spectra.solutions(prob_n, check=False)
    sb = spectra.solutions(prob_m, check=False)
    same = prob_n == prob_m
    rz, rs = ContourRule.segment(0j, N), ContourRule.segment(math.pi, N)
    z2, _ = rz.doubled().nodes()
    s2, _ = rs.doubled().nodes()

    def expo(z):
        return sa[0].exponent(z) + sb[0].exponent(z)

    Lz = float(np.max(np.real(expo(z2))))
    Ls = float(np.max(np.real(expo(s2))))

    def build(NN):
        z, dz = ContourRule.segment(0j, NN).nodes()
        s, ds = ContourRule.segment(math.pi, NN).nodes()
        Pa_z, Pb_z = _family_arrays(sa, z)[0], _family_arrays(sb, z)[0]
        Pa_s, Pb_s = _family_arrays(sa, s)[0], _family_arrays(sb, s)[0]
        hz = Pa_z[:, None, :] * Pb_z[None, :, :] * np.exp(expo(z) - Lz) * dz
        hs = Pa_s[:, None, :] * Pb_s[None, :, :] * np.exp(expo(s) - Ls) * ds
        E = np.exp(z)[:, None] - np.exp(s)[None, :]
        T = np.einsum("abj,abl,jl->ab", hz, hs, E)
        S = np.einsum("abj,abl,jl->ab", np.abs(hz), np.abs(hs), np.abs(E))
        return T, S

    T, S = build(N)
    T2, _ = build(2 * N)
    T4, _ = build(4 * N)
    cert = _certificate([T, T2, T4], S)
    with np.errstate(divide="ignore", invalid="ignore"):
        norm = np.where(S > 0, np.abs(T) / np.where(S > 0, S, 1.0), 0.0)
    mask = np.ones_like(norm, dtype=bool)
    if same:
        np.fill_diagonal(mask, False)
    max_off = float(np.max(norm[mask])) if mask.any() else 0.0
    diag = float(np.min(np.diag(norm))) if same else None
    return DoubleReport(T, S, norm, max_off, diag, cert, N, Lz + Ls, prob_n.n, prob_m.n)


# ---------------------------------------------------------------- Fredholm

@dataclass(frozen=True)
class KernelParams:
    """K(z, s) = exp[a (e^{2iz} + e^{2is}) + c (e^{iz} + e^{is})]."""

    a: complex
    c: complex


def kernel_for(coeffs: PbheCoeffs, a: complex = -0.5) -> KernelParams:
    """Kernel matched to the rotated equation: c = -K1."""
    return KernelParams(a=a, c=-coeffs.K1)


def kernel_constraints(coeffs: PbheCoeffs, kernel: KernelParams) -> dict:
    """Coefficient residuals making L_z K - L_s K vanish identically.

    The rotated equation has coefficients Kt_j = -K_j.
    """
    a, c = kernel.a, kernel.c
    return {
        "4a^2-Kt4": 4 * a * a + coeffs.K4,
        "4ac-Kt3": 4 * a * c + coeffs.K3,
        "4a+c^2-Kt2": 4 * a + c * c + coeffs.K2,
        "c-Kt1": c + coeffs.K1,
    }


def _phi(x, a, c):
    e = np.exp(1j * np.asarray(x, dtype=complex))
    return a * e * e + c * e


def fredholm_kernel(z, s, a, c, strict: bool = True):
    if strict and abs(4 * a * a - 1) > 1e-14:
        raise ConstraintViolation("kernel requires 4 a^2 = 1")
    return np.exp(_phi(z, a, c) + _phi(s, a, c))[()]


def _kernel_op(coeffs: PbheCoeffs, kernel: KernelParams, x):
    """(L_x K) / K with L = d^2/dx^2 - (K4 e^{4ix} + ... + K0)."""
    e = np.exp(1j * np.asarray(x, dtype=complex))
    a, c = kernel.a, kernel.c
    d1 = 2j * a * e * e + 1j * c * e
    d2 = -4 * a * e * e - c * e
    return d2 + d1 * d1 - coeffs.potential(e)


def kernel_pde_residual(coeffs: PbheCoeffs, kernel: KernelParams, z, s):
    """|L_z K - L_s K| / |K|."""
    return np.abs(_kernel_op(coeffs, kernel, z) - _kernel_op(coeffs, kernel, s))[()]


def rotated(sol: BhSolution) -> Callable:
    """x -> (f(ix), i f'(ix), -f''(ix))."""

    def ft(x):
        f, f1, f2 = sol.derivs(1j * np.asarray(x, dtype=complex))
        return f, 1j * f1, -f2

    return ft


@dataclass(frozen=True)
class FredholmResult:
    lam: complex
    variation: float
    lambdas: np.ndarray
    samples: np.ndarray
    certificate: float
    N: int
    M: int


def _check_fredholm(sol: BhSolution, coeffs: PbheCoeffs, kernel: KernelParams):
    n, s = sol.n, coeffs.sigma
    if abs((n + s + 1) ** 2 - 1) > 1e-12:
        raise PreconditionError("Fredholm identity requires (n + sigma + 1)^2 = 1")
    if abs(4 * kernel.a * kernel.a - 1) > 1e-14:
        raise ConstraintViolation("kernel requires 4 a^2 = 1")
    if abs(coeffs.K3 - 4 * kernel.a * coeffs.K1) > 1e-12 * (1 + abs(coeffs.K3)):
        raise PreconditionError("Fredholm identity requires K3 = 4 a K1")


def _samples(ft, M: int) -> np.ndarray:
    z = 2 * np.pi * np.arange(M) / M
    v = np.abs(ft(z)[0])
    low = v < 1e-8 * v.max()
    z[low] += np.pi / M  # move off near-zeros of f~
    return z


def fredholm_integrals(sol: BhSolution, kernel: KernelParams, z, N: int):
    ft = rotated(sol)
    s = 2 * np.pi * np.arange(N) / N
    fs = ft(s)[0]
    K = np.exp(_phi(z, kernel.a, kernel.c)[:, None] + _phi(s, kernel.a, kernel.c)[None, :])
    h = 2 * np.pi / N
    I = (K * fs).sum(axis=1) * h
    S = (np.abs(K) * np.abs(fs)).sum(axis=1) * h
    return I, S


def fredholm_lambda(sol: BhSolution, coeffs: PbheCoeffs, kernel: KernelParams,
                    M: int = 16, N: int = 512, strict: bool = True) -> FredholmResult:
    """lambda_j = f~(z_j) / int_0^{2pi} K(z_j, s) f~(s) ds and its spread."""
    if strict:
        _check_fredholm(sol, coeffs, kernel)
    ContourRule.segment(0j, N)  # validates N
    ft = rotated(sol)
    z = _samples(ft, M)
    I, S = fredholm_integrals(sol, kernel, z, N)
    I2, _ = fredholm_integrals(sol, kernel, z, 2 * N)
    I4, _ = fredholm_integrals(sol, kernel, z, 4 * N)
    ratio = float(np.max(np.abs(I)) / np.max(S)) if np.max(S) > 0 else 0.0
    if ratio < 1e-10:
        raise DegenerateIntegralError(f"Fredholm integral vanishes (|I|/scale = {ratio:.2e})", ratio=ratio)
    lams = ft(z)[0] / I
    lam = complex(np.mean(lams))
    var = float(np.max(np.abs(lams - lam)) / abs(lam))
    cert = _certificate([I, I2, I4], S)
    return FredholmResult(lam, var, lams, z, cert, N, M)


def concomitant_check(sol: BhSolution, coeffs: PbheCoeffs, kernel: KernelParams,
                      x_grid=None, strict: bool = True) -> float:
    """max_x |C(x, 2 pi) - C(x, 0)| with C = K f~' - (dK/ds) f~, relative to the term sizes."""
    if strict:
        _check_fredholm(sol, coeffs, kernel)
    x = np.asarray(x_grid if x_grid is not None else 2 * np.pi * np.arange(16) / 16, dtype=complex)
    ft = rotated(sol)
    out, mags = [], []
    for sv in (0.0, 2 * np.pi):
        f, f1, _ = ft(np.array([sv]))
        e = np.exp(1j * sv)
        K = np.exp(_phi(x, kernel.a, kernel.c) + _phi(sv, kernel.a, kernel.c))
        dK = (2j * kernel.a * e * e + 1j * kernel.c * e) * K
        out.append(K * f1[0] - dK * f[0])
        mags.append(np.abs(K * f1[0]) + np.abs(dK * f[0]))
    C0, C1 = out
    # normalize by the size of the two terms: C itself may vanish identically
    den = float(np.max(np.maximum(mags[0], mags[1])))
    return float(np.max(np.abs(C1 - C0)) / den) if den > 0 else 0.0


def kernel_branch_scan(sol: BhSolution, coeffs: PbheCoeffs,
                       candidates=(-0.5, 0.5, 0.5j, -0.5j), M: int = 16, N: int = 512) -> dict:
    """Fredholm variation for each candidate kernel coefficient a (c = -K1)."""
    out = {}
    for a in candidates:
        try:
            r = fredholm_lambda(sol, coeffs, kernel_for(coeffs, a), M, N, strict=False)
            out[complex(a)] = r.variation
        except DegenerateIntegralError as e:
            out[complex(a)] = f"degenerate ({e.ratio:.1e})"
    return out


@dataclass(frozen=True)
class FredholmConfig:
    n: int
    a: float
    sigma: float
    problem: Optional[SpectrumProblem]
    K1: Optional[complex]
    note: str = ""


def fredholm_configurations(n: int, a: float, free_K3: complex = -1.0) -> list[FredholmConfig]:
    """Spectrum points compatible with the kernel constraints.

    The constraints force K3 = 4 a K1, K2 = -4a - K1^2 and sigma = -n - 1 - 2a,
    so the determinant becomes a polynomial in K1 alone.
    """
    sigma = -n - 1 - 2 * a
    k2 = 2 * n
    k1 = CPoly([0, -(1 + 2 * a * (1 + 2 * sigma))])
    K3p = CPoly([0, 4 * a])
    D = [CPoly([1.0]), k1]
    for j in range(2, n + 2):
        D.append((k1 - K3p * (j - 1)) * D[j - 1] - D[j - 2] * ((j - 1) * (j - 1 + 2 * sigma) * (k2 - 2 * (j - 2))))
    Dn = D[n + 1]
    if Dn.is_zero():
        K1s = [free_K3 / (4 * a)]
        note = "determinant vanishes identically; K3 is free"
    elif Dn.degree == 0:
        return [FredholmConfig(n, a, sigma, None, None, "no spectrum point: determinant is a nonzero constant")]
    else:
        K1s = list(cpoly.sort_roots(cpoly.roots(Dn)))
        note = ""
    out = []
    for K1 in K1s:
        K3 = 4 * a * K1
        prob = SpectrumProblem.from_sigma(n, K3, sigma)
        out.append(FredholmConfig(n, a, sigma, prob, complex(K1), note))
    return out
