"""Relative WKB error against the finite-difference spectrum, for both Maslov indices.

Prints a CSV table (potential, n, E_exact, err_quarter, err_half, predicted_half)
covering the linear and logarithmic wells. The predicted column is the error a
hard-wall 1/4 rule implies for the 1/2 rule in the linear well.
"""

import argparse
import csv
import sys

from quadwkb import Linear, Logarithmic, PhysicalParams, WkbProblem
from quadwkb.oracle import OracleConfig, exact_spectrum
from quadwkb.wkb import solve_level


def curves(levels: int):
    params = PhysicalParams()
    for name, pot, factor in (("linear", Linear(1.0), 2.0), ("log", Logarithmic(1.0, 1.0), 4.0)):
        base = WkbProblem(params, pot)
        exact = exact_spectrum(base, OracleConfig(levels=levels, r_max_factor=factor)).eigenvalues
        for n, e in enumerate(exact, 1):
            quarter = solve_level(base.with_(maslov=0.25), n).energy
            half = solve_level(base, n).energy
            predicted = abs(((n - 0.5) / (n - 0.25)) ** (2 / 3) - 1) if name == "linear" else None
            yield name, n, e, abs(quarter - e) / abs(e), abs(half - e) / abs(e), predicted


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--levels", type=int, default=12)
    args = ap.parse_args()
    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["potential", "n", "E_exact", "err_quarter", "err_half", "predicted_half"])
    for name, n, e, eq, eh, pred in curves(args.levels):
        out.writerow([name, n, f"{e:.11e}", f"{eq:.4e}", f"{eh:.4e}", "" if pred is None else f"{pred:.4e}"])


if __name__ == "__main__":
    main()
