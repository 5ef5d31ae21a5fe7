"""Which kernel coefficient a makes lambda(z) constant.

Scans a in {-1/2, 1/2, i/2, -i/2} on the n=0, sigma=0 configuration and
prints the relative variation of lambda over the sample points.
"""
from heunbc import quad, spectra
from heunbc.spectra import EigenPair


def main():
    for cfg in quad.fredholm_configurations(0, -0.5):
        if cfg.problem is None:
            print(f"sigma={cfg.sigma}: {cfg.note}")
            continue
        co = cfg.problem.coeffs(cfg.K1)
        sol = spectra.bh_solution(EigenPair(0, 0, cfg.K1, cfg.problem), co)
        print(f"sigma={cfg.sigma} K1={cfg.K1}")
        for a, v in quad.kernel_branch_scan(sol, co).items():
            print(f"  a={a}: " + (v if isinstance(v, str) else f"variation={v:.3e}"))


if __name__ == "__main__":
    main()
