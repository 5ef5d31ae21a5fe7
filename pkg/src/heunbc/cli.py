"""Command-line front end: ``heunbc <command> [flags]``.

Every command emits a report (JSON by default, or a flat CSV projection of its
tables). Exit codes: 0 ok, 1 internal error, 2 usage or precondition error,
3 verification failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional

import numpy as np

from . import acceptance, bhe, cpoly, qes, quad, spectra, weight
from .cpoly import CPoly, QSqrt2
from .errors import (DegenerateIntegralError, HeunError, PreconditionError,
                     VerificationError)
from .spectra import EigenPair, SpectrumProblem

SCHEMA = "heunbc-report/1"
COMMANDS = ("hautot", "spectrum", "weight", "circle-orth", "halfline-orth", "single-orth",
            "double-orth", "fredholm", "bender-dunne", "turbiner", "verify-all")
RESIDUAL_TOL = 1e-9


@dataclass(frozen=True)
class RunConfig:
    command: str
    parameters: dict = field(default_factory=dict)
    output_format: str = "json"
    quadrature_n: int = 512
    precision_mode: str = "float"
    output_path: Optional[str] = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise PreconditionError(f"unknown command {self.command!r}")
        n = self.quadrature_n
        if n < 16 or n & (n - 1):
            raise PreconditionError("quadrature_n must be a power of two >= 16")
        if self.output_format not in ("json", "csv"):
            raise PreconditionError("output_format must be json or csv")
        if self.precision_mode not in ("float", "rational-where-possible"):
            raise PreconditionError("precision_mode must be float or rational-where-possible")


# ---------------------------------------------------------------- serialization

def jsonable(x: Any):
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return jsonable(x.tolist())
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, QSqrt2):
        return {"rational": str(x.a), "sqrt2": str(x.b)}
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else str(x)
    if isinstance(x, (complex, np.complexfloating)):
        return {"re": jsonable(x.real), "im": jsonable(x.imag)}
    if x is None or isinstance(x, str):
        return x
    return str(x)


def _flat_cell(v) -> list:
    if isinstance(v, dict) and set(v) == {"re", "im"}:
        return [v["re"], v["im"]]
    if isinstance(v, dict) and set(v) == {"rational", "sqrt2"}:
        return [v["rational"], v["sqrt2"]]
    if isinstance(v, (dict, list)):
        return [json.dumps(v, separators=(",", ":"))]
    return [v]


def _flat_header(name, sample) -> list:
    if isinstance(sample, dict) and set(sample) == {"re", "im"}:
        return [f"{name}_re", f"{name}_im"]
    if isinstance(sample, dict) and set(sample) == {"rational", "sqrt2"}:
        return [f"{name}_rational", f"{name}_sqrt2"]
    return [name]


def to_csv(report: dict) -> str:
    """Flat projection: one block per table, headed by '# table: <name>'."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for name, tab in report["tables"].items():
        w.writerow([f"# table: {name}", f"certificate={tab['certificate']}"])
        rows = tab["rows"]
        if not rows:
            w.writerow(tab["columns"])
            continue
        header = []
        for col, v in zip(tab["columns"], rows[0]):
            header += _flat_header(col, v)
        w.writerow(header)
        for r in rows:
            w.writerow([c for v in r for c in _flat_cell(v)])
    return buf.getvalue()


def table(columns, rows, certificate, note: str = "") -> dict:
    out = {"columns": list(columns), "rows": [list(r) for r in rows], "certificate": certificate}
    if note:
        out["note"] = note
    return out


def check(value, tol, kind: str = "max") -> dict:
    ok = value < tol if kind == "max" else value > tol
    return {"value": value, "tolerance": tol, "kind": kind, "passed": bool(ok)}


# ---------------------------------------------------------------- parameters

def parse_number(text: str):
    """int, float or complex ('1+2j'); complex with zero imaginary part collapses to float."""
    t = text.strip().replace(" ", "")
    try:
        return int(t)
    except ValueError:
        pass
    try:
        return float(t)
    except ValueError:
        pass
    try:
        z = complex(t.replace("i", "j"))
    except ValueError as e:
        raise PreconditionError(f"not a number: {text!r}") from e
    return z.real if z.imag == 0 else z


def _rational(x):
    if isinstance(x, complex):
        raise PreconditionError("rational mode needs real parameters")
    return Fraction(str(x)) if isinstance(x, float) else Fraction(x)


def _need(p: dict, *names):
    missing = [n for n in names if p.get(n) is None]
    if missing:
        raise PreconditionError(f"missing parameters: {', '.join(missing)}")
    return [p[n] for n in names]


# ---------------------------------------------------------------- commands

def cmd_hautot(cfg: RunConfig) -> dict:
    m, alpha, beta = _need(cfg.parameters, "m", "alpha", "beta")
    sols = bhe.hautot(int(m), alpha, beta)
    z = np.exp(1j * np.linspace(0.1, 6.0, 20)) * np.linspace(0.3, 2.0, 20)
    rows, worst = [], 0.0
    for s in sols:
        r = float(np.max(np.abs(bhe.bhe_residual(s.params, s, z, relative=True))))
        rr = float(np.max(np.abs(bhe.reversed_residual(s, z, relative=True))))
        worst = max(worst, r, rr)
        rows.append([s.nu, s.delta_eig, s.multiplicity, list(s.poly.to_numpy()), r, rr])
    return {
        "tables": {"solutions": table(["nu", "delta", "multiplicity", "coefficients",
                                       "bhe_residual", "reversed_residual"], rows, worst,
                                      "certificate: max relative ODE residual at 20 points")},
        "checks": {"ode_residual": check(worst, RESIDUAL_TOL)},
    }


def _problem(p: dict) -> SpectrumProblem:
    if p.get("sigma") is not None:
        n, K3, sigma = _need(p, "n", "k3", "sigma")
        return SpectrumProblem.from_sigma(int(n), K3, sigma)
    K3, K2, K0, sign = _need(p, "k3", "k2", "k0", "sign")
    prob = SpectrumProblem.from_sign(K3, K2, K0, sign)
    if p.get("n") is not None and int(p["n"]) != prob.n:
        raise PreconditionError(f"--n {p['n']} does not match the termination condition (n = {prob.n})")
    return prob


def _det_certificate(D: CPoly, K1s) -> float:
    c = D.to_numpy()
    worst = 0.0
    for x in K1s:
        pw = np.abs(x) ** np.arange(len(c))
        num, den = abs(cpoly.eval(D, x)), float(np.sum(np.abs(c) * pw))
        worst = max(worst, num / den if den > 0 else num)
    return worst


def cmd_spectrum(cfg: RunConfig) -> dict:
    prob = _problem(cfg.parameters)
    pairs = spectra.k1_spectrum(prob, check=True)
    D = spectra.det_poly(prob)
    K1s = [p.K1 for p in pairs]
    cert = _det_certificate(D, K1s)
    out = {
        "problem": {"n": prob.n, "K3": prob.K3, "K2": prob.K2, "K0": prob.K0, "sigma": prob.sigma,
                    "reality_hypotheses": prob.reality_hypotheses},
        "tables": {
            "k1_spectrum": table(["nu", "K1", "multiplicity"],
                                 [[p.nu, p.K1, p.multiplicity] for p in pairs], cert,
                                 "certificate: max |D(K1)| / sum |d_j K1^j|"),
            "det_poly": table(["power", "coefficient"], list(enumerate(D.to_numpy())), 0.0),
        },
        "checks": {"determinant_residual": check(cert, 1e-10)},
    }
    if prob.reality_hypotheses:
        out["checks"]["real_distinct"] = check(spectra.min_gap(pairs), 1e-8, "min")
    return out


def cmd_weight(cfg: RunConfig) -> dict:
    n, alpha, beta = _need(cfg.parameters, "n", "alpha", "beta")
    kmax = int(cfg.parameters.get("kmax") or 80)
    w = weight.weight_coeffs(int(n), alpha, beta, kmax)
    z = np.exp(2j * np.pi * np.arange(64) / 64)
    res = float(np.max(np.abs(weight.self_adjoint_residual(w, z))))
    out = {
        "tables": {"coefficients": table(["k", "a_k"], list(enumerate(w.coeffs)), w.tail_estimate,
                                         "certificate: tail bound on |z| = 1")},
        "checks": {"self_adjoint_residual": check(res, 1e-10)},
    }
    if beta == 0 and cfg.precision_mode == "float":
        try:
            cf = weight.weight_closed_form(int(n), alpha, kmax)
            out["checks"]["closed_form"] = check(float(np.max(np.abs(cf.coeffs - w.coeffs))), 1e-10)
        except PreconditionError as e:
            out["notes"] = [f"closed form unavailable: {e}"]
    if kmax >= 200:
        d = weight.convergence_diagnostic(int(n), alpha, beta, kmax)
        out["diagnostic"] = {"value": d, "sqrt2": math.sqrt(2), "relative_distance": abs(d / math.sqrt(2) - 1)}
    return out


def _orth_payload(rep: quad.OrthReport, tol: float, name: str) -> dict:
    rows = [[i, j, rep.gram[i, j], rep.scale[i, j]] for i in range(rep.size) for j in range(rep.size)]
    out = {
        "log_scale": rep.log_scale,
        "flags": rep.flags,
        "tables": {name: table(["i", "j", "G", "scale"], rows, rep.certificate,
                               "certificate: max(|G_2N - G_N|, |G_4N - G_2N|) / scale")},
        "checks": {"offdiag": check(rep.normalized_offdiag, tol),
                   "certificate": check(rep.certificate, quad.CERT_RTOL)},
        "summary": {"normalized_offdiag": rep.normalized_offdiag, "diag_ratio": rep.diag_ratio,
                    "symmetry": rep.symmetry},
    }
    if rep.rule is not None:
        out["rule"] = rep.rule.describe()
    return out


def cmd_circle(cfg: RunConfig) -> dict:
    n, alpha, beta = _need(cfg.parameters, "n", "alpha", "beta")
    radius = float(cfg.parameters.get("radius") or 1.0)
    rep = quad.circle_orthogonality(int(n), alpha, beta, quad.ContourRule.circle(radius, cfg.quadrature_n))
    return _orth_payload(rep, 1e-8, "gram")


def cmd_halfline(cfg: RunConfig) -> dict:
    m, alpha, beta = _need(cfg.parameters, "m", "alpha", "beta")
    rep = quad.halfline_orthogonality(int(m), alpha, beta)
    out = _orth_payload(rep, 1e-8, "gram")
    out["tables"]["gram"]["note"] = "certificate: QUADPACK error estimate / scale"
    return out


def cmd_single(cfg: RunConfig) -> dict:
    prob = _problem(cfg.parameters)
    base = math.pi if cfg.parameters.get("shifted") else 0.0
    rule = quad.ContourRule.segment(base, cfg.quadrature_n)
    rep = quad.segment_orthogonality(prob, rule)
    out = _orth_payload(rep, 1e-8, "gram")
    out["checks"]["diagonal_nonzero"] = check(rep.diag_ratio, 1e-6, "min")
    return out


def cmd_double(cfg: RunConfig) -> dict:
    p = cfg.parameters
    n, sn, m, sm, K3 = _need(p, "n", "sigma_n", "m", "sigma_m", "k3")
    a = SpectrumProblem.from_sigma(int(n), K3, sn)
    b = SpectrumProblem.from_sigma(int(m), K3, sm)
    N = int(p.get("axis_n") or cfg.quadrature_n)
    rep = quad.double_orthogonality(a, b, N)
    rows = [[i, j, rep.T[i, j], rep.scale[i, j]] for i in range(rep.T.shape[0]) for j in range(rep.T.shape[1])]
    return {
        "log_scale": rep.log_scale,
        "tables": {"T": table(["mu", "nu", "T", "scale"], rows, rep.certificate,
                              "certificate: three-level self-convergence per axis")},
        "checks": {"offdiag": check(rep.max_offdiag, 1e-7),
                   "certificate": check(rep.certificate, quad.CERT_RTOL)},
    }


def cmd_fredholm(cfg: RunConfig) -> dict:
    p = cfg.parameters
    n, = _need(p, "n")
    a = float(p.get("a") if p.get("a") is not None else -0.5)
    K3 = p.get("k3") if p.get("k3") is not None else -1.0
    rows, notes, checks = [], [], {}
    worst_cert = 0.0
    for cfgf in quad.fredholm_configurations(int(n), a, free_K3=K3):
        if cfgf.problem is None:
            notes.append(cfgf.note)
            continue
        pr = cfgf.problem
        co = pr.coeffs(cfgf.K1)
        sol = spectra.bh_solution(EigenPair(pr.n, 0, cfgf.K1, pr), co)
        ker = quad.kernel_for(co, a)
        try:
            r = quad.fredholm_lambda(sol, co, ker, N=cfg.quadrature_n)
        except DegenerateIntegralError as e:
            notes.append(f"K1={cfgf.K1}: kernel integral vanishes identically (|I|/scale={e.ratio:.1e})")
            continue
        conc = quad.concomitant_check(sol, co, ker)
        worst_cert = max(worst_cert, r.certificate)
        rows.append([cfgf.K1, pr.K3, pr.sigma, r.lam, r.variation, conc])
        checks[f"variation[{len(rows) - 1}]"] = check(r.variation, 1e-7)
        checks[f"concomitant[{len(rows) - 1}]"] = check(conc, 1e-9)
    out = {"tables": {"lambda": table(["K1", "K3", "sigma", "lambda", "variation", "concomitant"],
                                      rows, worst_cert)},
           "checks": checks}
    if notes:
        out["notes"] = notes
    return out


def _poly_rows(P: list, exact: bool):
    return [[k, j, c] for k, p in enumerate(P) for j, c in enumerate(p.coeffs)]


def cmd_bender_dunne(cfg: RunConfig) -> dict:
    s, J, c = _need(cfg.parameters, "s", "J", "c")
    J = int(J)
    kmax = int(cfg.parameters.get("kmax") or J + 2)
    exact = cfg.precision_mode == "rational-where-possible"
    if exact:
        s, c = _rational(s), _rational(c)
    P = qes.bender_dunne_polys(s, J, c, kmax, exact=exact)
    out = {"exact": exact,
           "tables": {"P": table(["k", "power", "coefficient"], _poly_rows(P, exact), 0.0,
                                 "generated by exact recursion" if exact else "float recursion")},
           "checks": {}}
    if J >= 1 and kmax > J:
        fac = qes.factorization_check(s, J, c, kmax - J, exact=exact)
        rows = [[n + 1, j, q] for n, (Q, _) in enumerate(fac) for j, q in enumerate(Q.coeffs)]
        worst = max(float(norm) for _, norm in fac)
        out["tables"]["Q"] = table(["n", "power", "coefficient"], rows, worst,
                                   "certificate: remainder norm of P_{J+n} / P_J")
        out["checks"]["factorization"] = check(worst, 1e-10)
    return out


def cmd_turbiner(cfg: RunConfig) -> dict:
    s, J, c = _need(cfg.parameters, "s", "J", "c")
    s, J, c = float(s), int(J), float(c)
    rep = qes.qes_spectrum_report(s, J, c)
    tol = 1e-9 * (1 + float(np.max(np.abs(rep.energies), initial=0.0)))
    x = np.linspace(0.3, 2.5, 12)
    rows, worst = [], 0.0
    for e_det, e_d, e_p in zip(rep.energies, rep.via_delta, rep.via_polynomial):
        r = float(np.max(np.abs(qes.wavefunction_residual(qes.TurbinerParams(s, J, c, e_det), x))))
        worst = max(worst, r)
        rows.append([e_det, e_d, e_p, r])
    co = qes.periodic_turbiner_coeffs(qes.TurbinerParams(s, J, c))
    return {
        "tables": {"spectrum": table(["E_determinant", "E_delta", "E_polynomial", "wavefunction_residual"],
                                     rows, rep.max_deviation, "certificate: max deviation between routes")},
        "periodic_coefficients": {"K4": co.K4, "K3": co.K3, "K2": co.K2, "K1_at_E0": co.K1,
                                  "K0": co.K0, "sigma": co.sigma},
        "condition_ii": qes.condition_ii(s, J, c),
        "checks": {"route_agreement": check(rep.max_deviation, tol),
                   "wavefunction_residual": check(worst, RESIDUAL_TOL)},
    }


def cmd_verify_all(cfg: RunConfig) -> dict:
    quick = bool(cfg.parameters.get("quick"))
    results = acceptance.run_all(quick)
    rows = [[r.number, r.title, r.passed, r.metrics, r.notes] for r in results]
    return {"quick": quick,
            "tables": {"criteria": table(["number", "title", "passed", "metrics", "notes"], rows,
                                         next((r.metrics.get("worst") for r in results if r.number == 12), None))},
            "checks": {f"criterion_{r.number}": {"passed": r.passed} for r in results}}


HANDLERS = {
    "hautot": cmd_hautot, "spectrum": cmd_spectrum, "weight": cmd_weight,
    "circle-orth": cmd_circle, "halfline-orth": cmd_halfline, "single-orth": cmd_single,
    "double-orth": cmd_double, "fredholm": cmd_fredholm, "bender-dunne": cmd_bender_dunne,
    "turbiner": cmd_turbiner, "verify-all": cmd_verify_all,
}


def build_report(cfg: RunConfig) -> tuple[int, dict]:
    body = HANDLERS[cfg.command](cfg)
    failed = sorted(k for k, v in body.get("checks", {}).items() if not v["passed"])
    report = {"schema": SCHEMA, "command": cfg.command,
              "inputs": {**cfg.parameters, "quadrature_n": cfg.quadrature_n,
                         "precision_mode": cfg.precision_mode},
              "status": "verification-failed" if failed else "ok",
              "failed_checks": failed, **body}
    return (3 if failed else 0), report


def run(cfg: RunConfig) -> tuple[int, str]:
    """Execute a command; returns (exit status, rendered artifact or error message)."""
    try:
        code, report = build_report(cfg)
    except VerificationError as e:
        return 3, f"verification failed: {e}"
    except PreconditionError as e:
        return 2, f"precondition error: {e}"
    except HeunError as e:
        return 1, f"internal error: {type(e).__name__}: {e}"
    rep = jsonable(report)
    text = to_csv(rep) if cfg.output_format == "csv" else json.dumps(rep, indent=2) + "\n"
    return code, text


# ---------------------------------------------------------------- argparse

def _num(text):
    try:
        return parse_number(text)
    except PreconditionError as e:
        raise argparse.ArgumentTypeError(str(e)) from e


SPECS = {
    "hautot": [("m", int), ("alpha", _num), ("beta", _num)],
    "spectrum": [("n", int), ("k3", _num), ("k2", _num), ("k0", _num), ("sigma", _num), ("sign", str)],
    "weight": [("n", int), ("alpha", _num), ("beta", _num), ("kmax", int)],
    "circle-orth": [("n", int), ("alpha", _num), ("beta", _num), ("radius", float)],
    "halfline-orth": [("m", int), ("alpha", float), ("beta", float)],
    "single-orth": [("n", int), ("k3", _num), ("k2", _num), ("k0", _num), ("sigma", _num), ("sign", str)],
    "double-orth": [("n", int), ("sigma-n", _num), ("m", int), ("sigma-m", _num), ("k3", _num), ("axis-n", int)],
    "fredholm": [("n", int), ("a", float), ("k3", _num)],
    "bender-dunne": [("s", str), ("J", int), ("c", str), ("kmax", int)],
    "turbiner": [("s", float), ("J", int), ("c", float)],
    "verify-all": [],
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(2)


def make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="output_format", choices=("json", "csv"), default="json")
    common.add_argument("--out", dest="output_path")
    common.add_argument("--quadrature-n", type=int, default=512)
    common.add_argument("--precision-mode", choices=("float", "rational-where-possible"), default="float")
    ap = _Parser(prog="heunbc", description="Biconfluent Heun spectra and orthogonality verifiers.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, spec in SPECS.items():
        sp = sub.add_parser(name, parents=[common])
        for flag, typ in spec:
            sp.add_argument(f"--{flag}", type=typ)
        if name == "single-orth":
            sp.add_argument("--shifted", action="store_true", help="integrate over [pi, pi + 2 pi i]")
        if name == "verify-all":
            sp.add_argument("--quick", action="store_true")
    return ap


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    skip = {"command", "output_format", "output_path", "quadrature_n", "precision_mode"}
    params = {k: v for k, v in vars(ns).items() if k not in skip}
    if ns.command == "bender-dunne":
        for k in ("s", "c"):
            if params.get(k) is not None:
                params[k] = parse_number(params[k]) if ns.precision_mode == "float" else Fraction(params[k])
    return RunConfig(ns.command, params, ns.output_format, ns.quadrature_n, ns.precision_mode, ns.output_path)


def main(argv=None) -> int:
    ns = make_parser().parse_args(argv)
    try:
        cfg = config_from_args(ns)
    except (PreconditionError, ValueError, ZeroDivisionError) as e:
        sys.stderr.write(f"heunbc: error: {e}\n")
        return 2
    try:
        code, text = run(cfg)
    except Exception as e:  # noqa: BLE001 - anything unexpected is an internal error
        sys.stderr.write(f"heunbc: internal error: {type(e).__name__}: {e}\n")
        return 1
    if code in (1, 2) or (code == 3 and not text.lstrip().startswith(("{", "#"))):
        sys.stderr.write(f"heunbc: {text}\n")
        return code
    if cfg.output_path:
        with open(cfg.output_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
