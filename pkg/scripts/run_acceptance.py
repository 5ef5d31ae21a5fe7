"""Print one pass/fail line per acceptance criterion.

Usage: python3 scripts/run_acceptance.py [--quick]
"""
import argparse

from heunbc import acceptance


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--quick", action="store_true")
    args = ap.parse_args()
    results = acceptance.run_all(args.quick)
    for r in results:
        print(r.line())
    print(f"{sum(r.passed for r in results)}/{len(results)} criteria pass")


if __name__ == "__main__":
    main()
