"""Shifted-segment Gram matrix versus node count.

The periodic integrand on the shifted segment (base pi) has dominant Fourier
content near 2 e^{2pi} ~ 1070, so N=512 and N=1024 alias to the same wrong
value and only N >= 2048 resolves it.
Usage: python3 scripts/segment_aliasing.py [--n 2] [--sigma -1.5] [--k3 -1]
"""
import argparse
import math

from heunbc import quad
from heunbc.spectra import SpectrumProblem


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=2)
    ap.add_argument("--sigma", type=float, default=-1.5)
    ap.add_argument("--k3", type=float, default=-1.0)
    args = ap.parse_args()
    prob = SpectrumProblem.from_sigma(args.n, args.k3, args.sigma)
    print("N      single_offdiag  shifted_offdiag  shifted_diag_ratio  shifted_certificate")
    for N in (128, 256, 512, 1024, 2048, 4096):
        s = quad.single_orthogonality(prob, quad.ContourRule.segment(0j, N))
        t = quad.shifted_orthogonality(prob, quad.ContourRule.segment(math.pi, N))
        print(f"{N:<6} {s.normalized_offdiag:14.3e}  {t.normalized_offdiag:15.3e}  "
              f"{t.diag_ratio:18.3e}  {t.certificate:19.3e}")


if __name__ == "__main__":
    main()
