"""Compare both logarithmic closed forms against the numerically quantized levels.

The numeric column solves the phase condition directly, so whichever closed form
agrees with it to quadrature precision is self-consistent.
"""

import argparse
import math

from quadwkb import Logarithmic, PhysicalParams, WkbProblem
from quadwkb.closed_form import ClosedFormVariant, log_energy
from quadwkb.wkb import solve_level


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--E0", type=float, default=1.0)
    ap.add_argument("--r0", type=float, default=1.0)
    ap.add_argument("--Q", type=float, default=1.0)
    ap.add_argument("--levels", type=int, default=8)
    args = ap.parse_args()

    q_e0 = args.Q * args.E0
    params = PhysicalParams()
    problem = WkbProblem(params, Logarithmic(q_e0, args.r0))
    print(f"{'n':>3} {'numeric':>16} {'rederived':>16} {'published':>16} {'num-red':>10} {'num-pub':>12}")
    for n in range(1, args.levels + 1):
        e = solve_level(problem, n).energy
        red = log_energy(n, params, q_e0, args.r0, ClosedFormVariant.REDERIVED_LOG)
        pub = log_energy(n, params, q_e0, args.r0, ClosedFormVariant.PUBLISHED_LOG)
        print(f"{n:3d} {e:16.12f} {red:16.12f} {pub:16.12f} {e - red:10.1e} {e - pub:12.9f}")
    print(f"(Q E0 / 2) ln 2 = {0.5 * q_e0 * math.log(2.0):.12f}")


if __name__ == "__main__":
    main()
