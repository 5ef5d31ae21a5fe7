"""Acceptance checks with pinned tolerances.

Each ``cNN`` function returns a :class:`CriterionResult`. ``quick=True``
shrinks parameter grids (never quadrature sizes or truncation orders), so a
quick run exercises the same numerics on fewer cases.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.special import gamma as Gamma

from . import bhe, cpoly, qes, quad, spectra, weight
from .cpoly import CPoly
from .errors import DegenerateIntegralError, HeunError
from .spectra import EigenPair, SpectrumProblem

SQRT2 = math.sqrt(2.0)
SEED = 20240517

TOL = {
    1: 1e-9,    # spectrum oracle deviation
    2: 1e-8,    # min gap (imaginary parts must be < 1e-9)
    3: 1e-9,    # relative ODE residual
    4: 1e-8,    # circle off-diagonal; radius independence 1e-10
    5: 1e-8,    # half-line off-diagonal; Gaussian oracle 1e-10
    6: 0.05,    # relative distance to sqrt 2; self-adjoint residual 1e-10
    7: 1e-8,    # segment off-diagonal; diagonals > 1e-6 scale
    8: 1e-7,    # double off-diagonal
    9: 1e-7,    # lambda variation; perturbed > 1e-2; PDE / concomitant 1e-9
    10: 1e-11,  # displayed table, relative
    11: 1e-11,  # cross-map, relative; composition 1e-12
    12: 1e-11,  # N -> 2N certificate, relative to scale
}


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    metrics: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)
    certificates: list = field(default_factory=list)  # (label, value)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        keys = ", ".join(f"{k}={_fmt(v)}" for k, v in self.metrics.items())
        return f"[{status}] criterion {self.number:2d} {self.title}: {keys}"


def _fmt(v):
    if isinstance(v, float):
        return f"{v:.3e}"
    return str(v)


def _rng():
    return np.random.default_rng(SEED)


# ---------------------------------------------------------------- 1

def c01(quick: bool = False) -> CriterionResult:
    rng = _rng()
    nsets = 6 if quick else 20
    worst = 0.0
    for i in range(nsets):
        n = i % 9
        K3 = complex(rng.normal(), rng.normal())
        sigma = complex(rng.uniform(0, 2), rng.normal() * 0.5)
        prob = SpectrumProblem.from_sigma(n, K3, sigma)
        k1 = np.array([p.K1 for p in spectra.k1_spectrum(prob, check=False)])
        ref = np.array([-h.delta_eig / 2 for h in bhe.hautot(n, 2 * sigma, -K3)])
        cost = np.abs(k1[:, None] - ref[None, :])
        r, c = linear_sum_assignment(cost)
        worst = max(worst, float(cost[r, c].max() / (1 + np.abs(ref).max())))
    return CriterionResult(1, "spectrum oracle equivalence", worst < TOL[1],
                           {"sets": nsets, "max_rel_deviation": worst})


# ---------------------------------------------------------------- 2

def c02(quick: bool = False) -> CriterionResult:
    K3s = (-8.0, -10.0) if quick else (-8.0, -9.0, -10.0)
    rs = (0.1, 0.4) if quick else (0.1, 0.25, 0.4)
    ns = range(0, 7, 3) if quick else range(7)
    min_gap, max_imag, cases = math.inf, 0.0, 0
    ok = True
    for K3 in K3s:
        for r in rs:
            for sign in ("plus", "minus"):
                for n in ns:
                    sigma = spectra.sigma_from_sign(-r * r, sign)
                    prob = SpectrumProblem.from_sigma(n, K3, sigma.real)
                    assert prob.reality_hypotheses
                    try:
                        pairs = spectra.k1_spectrum(prob, check=True)
                    except HeunError:
                        ok = False
                        continue
                    v = np.array([p.K1 for p in pairs])
                    max_imag = max(max_imag, float(np.abs(v.imag).max()))
                    min_gap = min(min_gap, spectra.min_gap(pairs))
                    cases += 1
    ok = ok and max_imag < 1e-9 and min_gap > TOL[2]
    return CriterionResult(2, "real distinct spectra", ok,
                           {"cases": cases, "min_gap": min_gap, "max_imag": max_imag})


# ---------------------------------------------------------------- 3

RESIDUAL_SETS = ((-1.0, 0.3), (0.7, 1.0), (complex(-0.5, 0.4), complex(0.6, -0.2)), (-2.0, -0.25))


def c03(quick: bool = False) -> CriterionResult:
    rng = _rng()
    zs = rng.uniform(-2, 2, 20) + 1j * rng.uniform(-2, 2, 20)
    xs = rng.uniform(0.2, 2.5, 20) + 1j * rng.uniform(-0.3, 0.3, 20)
    ws = rng.uniform(-1.5, 0.4, 20) + 1j * rng.uniform(-3, 3, 20)
    worst = dict(bhe=0.0, reversed=0.0, bessel=0.0, pbhe=0.0)
    count = 0
    nmax = 3 if quick else 6
    for K3, sigma in RESIDUAL_SETS:
        for n in range(nmax + 1):
            prob = SpectrumProblem.from_sigma(n, K3, sigma)
            for sol in spectra.solutions(prob, check=False):
                co = prob.coeffs(sol.pair.K1)
                h = sol.hautot
                worst["bhe"] = max(worst["bhe"], np.abs(bhe.bhe_residual(h.params, h, zs, True)).max())
                worst["reversed"] = max(worst["reversed"], np.abs(bhe.reversed_residual(h, zs, True)).max())
                g = bhe.gen_bessel_residual(co, bhe.bessel_psi(h), xs, True)
                worst["bessel"] = max(worst["bessel"], np.abs(g).max())
                worst["pbhe"] = max(worst["pbhe"], np.abs(spectra.pbhe_residual(co, sol, ws, True)).max())
                count += 1
    worst = {k: float(v) for k, v in worst.items()}
    return CriterionResult(3, "ODE residuals", max(worst.values()) < TOL[3],
                           {"solutions": count, **{f"max_{k}": v for k, v in worst.items()}})


# ---------------------------------------------------------------- 4

def c04(quick: bool = False) -> CriterionResult:
    alpha = 0.5
    off, dev = 0.0, 0.0
    certs = []
    degenerate = 0
    for beta in (0.0, 0.7):
        for n in range(3 if quick else 6):
            r1 = quad.circle_orthogonality(n, alpha, beta, quad.ContourRule.circle(1.0))
            r2 = quad.circle_orthogonality(n, alpha, beta, quad.ContourRule.circle(2.0))
            off = max(off, r1.normalized_offdiag, r2.normalized_offdiag)
            # the Gram matrix may vanish identically (n = 0, beta = 0): use the absolute scale
            dev = max(dev, float(np.max(np.abs(r1.gram - r2.gram)) / np.max(r1.scale)))
            degenerate += len(r1.flags["degenerate_diagonals"])
            certs += [(f"circle n={n} beta={beta} r=1", r1.certificate),
                      (f"circle n={n} beta={beta} r=2", r2.certificate)]
    ok = off < TOL[4] and dev < 1e-10
    res = CriterionResult(4, "circle orthogonality", ok,
                          {"max_offdiag": off, "radius_deviation": dev, "parity_zero_diagonals": degenerate},
                          certificates=certs)
    return res


# ---------------------------------------------------------------- 5

def gaussian_gram(polys: list[CPoly], alpha: float) -> np.ndarray:
    """int_0^inf t^alpha e^{-t^2} p q dt via moments Gamma((k+alpha+1)/2)/2 (beta = 0)."""
    k = len(polys)
    G = np.zeros((k, k), dtype=complex)
    for i in range(k):
        for j in range(k):
            pq = (polys[i] * polys[j]).to_numpy()
            mom = np.array([Gamma((d + alpha + 1) / 2) / 2 for d in range(len(pq))])
            G[i, j] = np.sum(pq * mom)
    return G


def c05(quick: bool = False) -> CriterionResult:
    off = 0.0
    certs = []
    for alpha in (0.0, 1.0):
        for beta in (0.0, 1.0):
            for m in range(3 if quick else 6):
                r = quad.halfline_orthogonality(m, alpha, beta)
                off = max(off, r.normalized_offdiag)
                certs.append((f"half-line m={m} alpha={alpha} beta={beta}", r.certificate))
    sols = bhe.hautot(1, 0.0, 0.0)
    G = quad.halfline_orthogonality(1, 0.0, 0.0).gram
    oracle = gaussian_gram([s.poly for s in sols], 0.0)
    oerr = float(np.max(np.abs(G - oracle)) / np.max(np.abs(oracle)))
    return CriterionResult(5, "half-line orthogonality", off < TOL[5] and oerr < 1e-10,
                           {"max_offdiag": off, "gaussian_oracle_error": oerr}, certificates=certs)


# ---------------------------------------------------------------- 6

def c06(quick: bool = False) -> CriterionResult:
    worst, where = 0.0, None
    skipped = []
    for n in range(2 if quick else 4):
        for alpha in (0.1, 0.7):
            for beta in (0.0, 1.0, 2.0):
                try:
                    d = weight.convergence_diagnostic(n, alpha, beta, 200)
                except HeunError as e:
                    skipped.append((n, alpha, beta, type(e).__name__))
                    continue
                rel = abs(d / SQRT2 - 1)
                if rel > worst:
                    worst, where = rel, (n, alpha, beta)
    sa = 0.0
    z = np.exp(2j * np.pi * np.arange(64) / 64)
    for n in range(4):
        for alpha in (0.1, 0.7):
            w = weight.weight_coeffs(n, alpha, 0.0, 80)
            sa = max(sa, float(np.abs(weight.self_adjoint_residual(w, z)).max()))
    ok = worst < TOL[6] and sa < 1e-10
    res = CriterionResult(6, "weight convergence", ok,
                          {"max_rel_distance_to_sqrt2": worst, "worst_case": where,
                           "self_adjoint_residual": sa})
    if skipped:
        res.notes.append(f"degenerate grid points skipped: {skipped}")
    return res


# ---------------------------------------------------------------- 7

def segment_configs(quick: bool = False) -> list[SpectrumProblem]:
    """2 sigma integer with sigma <= -(n+1)/2, so the diagonal integrals are nonzero."""
    out = []
    for n in range(3 if quick else 5):
        for sigma in (-(n + 1) / 2, -(n + 2) / 2):
            for K3 in (-1.0, 0.7):
                out.append(SpectrumProblem.from_sigma(n, K3, sigma))
    return out


def c07(quick: bool = False, N: int = 512) -> CriterionResult:
    metrics = {}
    certs = []
    ok = True
    for label, fn in (("single", quad.single_orthogonality), ("shifted", quad.shifted_orthogonality)):
        off, diag = 0.0, math.inf
        for prob in segment_configs(quick):
            rule = quad.ContourRule.segment(0j if label == "single" else math.pi, N)
            r = fn(prob, rule)
            off = max(off, r.normalized_offdiag)
            diag = min(diag, r.diag_ratio)
            certs.append((f"{label} n={prob.n} sigma={prob.sigma} K3={prob.K3}", r.certificate))
        metrics[f"{label}_max_offdiag"] = off
        metrics[f"{label}_min_diag_ratio"] = diag
        ok = ok and off < TOL[7] and diag > 1e-6
    return CriterionResult(7, "single and shifted orthogonality", ok, metrics, certificates=certs)


# ---------------------------------------------------------------- 8

DOUBLE_CASES = (((1, 1.5), (2, 0.5)), ((2, 1.5), (3, 0.5)), ((3, 0.5), (3, 0.5)))


def c08(quick: bool = False, N: int = 128) -> CriterionResult:
    worst = 0.0
    certs = []
    for (n, sn), (m, sm) in DOUBLE_CASES[: 2 if quick else 3]:
        a = SpectrumProblem.from_sigma(n, -1.0, sn)
        b = SpectrumProblem.from_sigma(m, -1.0, sm)
        r = quad.double_orthogonality(a, b, N)
        worst = max(worst, r.max_offdiag)
        certs.append((f"double ({n},{m})", r.certificate))
    return CriterionResult(8, "double orthogonality", worst < TOL[8],
                           {"max_offdiag": worst}, certificates=certs)


# ---------------------------------------------------------------- 9

def c09(quick: bool = False) -> CriterionResult:
    evaluated, undefined = [], []
    var, pert, pde, conc = 0.0, math.inf, 0.0, 0.0
    certs = []
    zg = np.linspace(0.0, 6.0, 7)
    sg = np.linspace(0.3, 5.0, 7)
    for n in range(3):
        for a in (-0.5, 0.5):
            for cfg in quad.fredholm_configurations(n, a):
                tag = f"n={n} a={a} sigma={cfg.sigma}"
                if cfg.problem is None:
                    undefined.append(f"{tag}: {cfg.note}")
                    continue
                pr = cfg.problem
                co = pr.coeffs(cfg.K1)
                sol = spectra.bh_solution(EigenPair(n, 0, cfg.K1, pr), co)
                ker = quad.kernel_for(co, a)
                try:
                    r = quad.fredholm_lambda(sol, co, ker)
                except DegenerateIntegralError as e:
                    undefined.append(f"{tag}: integral vanishes identically (|I|/scale={e.ratio:.1e})")
                    continue
                cp = pr.coeffs(cfg.K1 + 1e-2)
                rp = quad.fredholm_lambda(sol, cp, quad.kernel_for(cp, a), strict=False)
                var = max(var, r.variation)
                pert = min(pert, rp.variation)
                pde = max(pde, float(np.max(quad.kernel_pde_residual(co, ker, zg, sg))))
                conc = max(conc, quad.concomitant_check(sol, co, ker))
                certs.append((f"fredholm {tag}", r.certificate))
                evaluated.append(tag)
    ok = bool(evaluated) and var < TOL[9] and pert > 1e-2 and pde < 1e-9 and conc < 1e-9
    res = CriterionResult(9, "Fredholm eigen-relation", ok,
                          {"evaluated": len(evaluated), "undefined": len(undefined),
                           "max_variation": var, "min_perturbed_variation": pert,
                           "pde_residual": pde, "concomitant": conc}, certificates=certs)
    res.notes += undefined
    return res


# ---------------------------------------------------------------- 10

def reference_table(E, s, c) -> list:
    """Closed-form P_0..P_5 at J = 3 (independent transcription)."""
    r = SQRT2
    P0 = 1.0
    P1 = E - 2 * c * s + r / 4 * c ** 2
    P2 = (E ** 2 + (r / 2 * c ** 2 - 2 * c - 4 * c * s) * E + 4 * c ** 2 * s ** 2
          + (-r * c ** 3 + 4 * c ** 2 - 64) * s + c ** 4 / 8 - r / 2 * c ** 3)
    P3 = (E ** 3 + (3 * r / 4 * c ** 2 - 6 * c - 6 * c * s) * E ** 2
          + (8 * c ** 2 + 3 / 8 * c ** 4 - 128 * s - 3 * r * c ** 3 * s - 32 + 24 * c ** 2 * s
             + 12 * c ** 2 * s ** 2 - 3 * r * c ** 3) * E
          - 8 * c ** 3 * s ** 3 + (256 * c - 24 * c ** 3 + 3 * r * c ** 4) * s ** 2
          + (320 * c - 32 * r * c ** 2 - 16 * c ** 3 + 6 * r * c ** 4 - 3 / 4 * c ** 5) * s
          - 8 * r * c ** 2 + 2 * r * c ** 4 - 3 / 4 * c ** 5 + r / 32 * c ** 6)
    Q1 = E - 6 * c - 2 * c * s + r / 4 * c ** 2
    Q2 = (E ** 2 + (-4 * c * s + r / 2 * c ** 2 - 14 * c) * E + 4 * c ** 2 * s ** 2
          + (28 * c ** 2 + 128 - r * c ** 3) * s + c ** 4 / 8 - 7 * r / 2 * c ** 3 + 48 * c ** 2 + 192)
    return [P0, P1, P2, P3, Q1 * P3, Q2 * P3]


def _terms_scale(E, s, c, k):
    # crude size of the largest monomial, guards against cancellation at a root
    return (1 + abs(E) + abs(c) * (1 + abs(s)) + abs(c) ** 2 + 8 * math.sqrt(1 + abs(s))) ** k


def c10(quick: bool = False) -> CriterionResult:
    rng = _rng()
    table_err = 0.0
    for _ in range(5):
        E, s, c = rng.uniform(-5, 5), rng.uniform(0.1, 2), rng.uniform(-2, 2)
        P = qes.bender_dunne_polys(s, 3, c, 5)
        ref = reference_table(E, s, c)
        for k in range(6):
            v = cpoly.eval(P[k], E)
            table_err = max(table_err, abs(v - ref[k]) / max(abs(ref[k]), _terms_scale(E, s, c, k) * 1e-6))
    fact_ok = True
    cases = 0
    for J in range(1, 5):
        for c in (0, 1, 2):
            for s in (Fraction(1, 2), Fraction(3, 4)):
                for q, norm in qes.factorization_check(s, J, c, 2 if quick else 4, exact=True):
                    fact_ok = fact_ok and norm == 0
                    cases += 1
    parity_ok = True
    for s in (Fraction(1, 2), Fraction(5, 3)):
        for J in (2, 3, 5):
            for k, p in enumerate(qes.bender_dunne_polys(s, J, 0, 8, exact=True)):
                for j, a in enumerate(p.coeffs):
                    if (k - j) % 2 and a != 0:
                        parity_ok = False
    ok = table_err < TOL[10] and fact_ok and parity_ok
    return CriterionResult(10, "Bender-Dunne reproduction", ok,
                           {"table_rel_error": table_err, "factorizations_exact": f"{fact_ok} ({cases})",
                            "parity_exact": parity_ok})


# ---------------------------------------------------------------- 11

def c11(quick: bool = False) -> CriterionResult:
    rng = _rng()
    worst, comp = 0.0, 0.0
    for _ in range(3 if quick else 8):
        s, J, c = rng.uniform(0.2, 2), int(rng.integers(1, 6)), rng.uniform(-2, 2)
        E = complex(rng.uniform(-10, 10), rng.uniform(-1, 1))
        p = qes.TurbinerParams(s, J, c, E)
        bp = qes.bhe_from_turbiner(p)
        A = bhe._recursion(bp, 12)
        P = qes.bender_dunne_values(s, J, c, E, 12)
        for k in range(13):
            ref = (-SQRT2 / 4) ** k * P[k]
            den = max(abs(A[k]), abs(ref))
            if den > 0:
                worst = max(worst, abs(A[k] - ref) / den)
        back = bhe.bhe_from_pbhe(qes.periodic_turbiner_coeffs(p))
        for f in ("alpha", "beta", "gamma", "delta"):
            a, b = getattr(back, f), getattr(bp, f)
            comp = max(comp, abs(a - b) / max(1.0, abs(b)))
    return CriterionResult(11, "cross-map consistency", worst < TOL[11] and comp < 1e-12,
                           {"max_rel_substitution_error": worst, "composition_error": comp})


# ---------------------------------------------------------------- 12

def c12(quick: bool = False, prior: Optional[dict] = None) -> CriterionResult:
    prior = prior or {}
    certs = []
    for k, fn in ((4, c04), (7, c07), (8, c08), (9, c09)):
        r = prior.get(k) or fn(quick)
        certs += r.certificates
    worst = max(certs, key=lambda t: t[1])
    failing = [lab for lab, v in certs if not v < TOL[12]]
    res = CriterionResult(12, "quadrature certificates", not failing,
                          {"integrals": len(certs), "failing": len(failing), "worst": float(worst[1])})
    if failing:
        res.notes.append(f"worst: {worst[0]}")
    return res


CRITERIA: dict[int, Callable[..., CriterionResult]] = {
    1: c01, 2: c02, 3: c03, 4: c04, 5: c05, 6: c06,
    7: c07, 8: c08, 9: c09, 10: c10, 11: c11,
}


def run_all(quick: bool = False) -> list[CriterionResult]:
    out = {k: fn(quick) for k, fn in CRITERIA.items()}
    out[12] = c12(quick, out)
    return [out[k] for k in sorted(out)]
