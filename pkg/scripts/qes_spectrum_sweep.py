"""QES energies over a grid of (s, J, c), with the agreement of three routes
(tridiagonal determinant, Hautot delta roots, roots of P_J) and the worst
relative Schrodinger residual of the assembled wavefunctions.
"""
import numpy as np

from heunbc import qes
from heunbc.qes import TurbinerParams


def main():
    x = np.linspace(0.3, 2.5, 23)
    print("s     J  c     max_route_dev  max_residual  energies")
    for s in (0.5, 0.75, 1.25):
        for J in (1, 2, 3, 4):
            for c in (0.0, 0.8, -1.5):
                rep = qes.qes_spectrum_report(s, J, c)
                res = max(float(np.max(np.abs(qes.wavefunction_residual(TurbinerParams(s, J, c, E), x))))
                          for E in rep.energies)
                es = " ".join(f"{e.real:.4f}" for e in rep.energies)
                print(f"{s:<5} {J}  {c:<5} {rep.max_deviation:13.2e}  {res:12.2e}  {es}")


if __name__ == "__main__":
    main()
