"""Distance of the weight growth diagnostic from sqrt(2) as the truncation k grows.

Shows why the 5% bound fails at k=200 but holds by k=2000.
Usage: python3 scripts/weight_convergence.py [--kmax 200 500 1000 2000]
"""
import argparse
import math

from heunbc import weight
from heunbc.errors import HeunError


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--kmax", type=int, nargs="+", default=[200, 500, 1000, 2000])
    args = ap.parse_args()
    print("n  alpha beta " + " ".join(f"k={k:>6}" for k in args.kmax))
    for n in range(4):
        for alpha in (0.1, 0.7):
            for beta in (0.0, 1.0, 2.0):
                row = []
                for k in args.kmax:
                    try:
                        d = weight.convergence_diagnostic(n, alpha, beta, k)
                        row.append(f"{abs(d / math.sqrt(2) - 1):8.4f}")
                    except HeunError as e:
                        row.append(f"{type(e).__name__[:8]:>8}")
                print(f"{n}  {alpha:5} {beta:4} " + " ".join(row))


if __name__ == "__main__":
    main()
