"""Operator-route truncation error versus Fock dimension.

For each (alpha, r) the closed-form moments are compared with those of the
truncated representation at several N.  The error is dominated by the
probability the exact state D(alpha) S(z) e_0 carries above level N.
"""

import argparse

import numpy as np

from tdse import simulate
from tdse.fock_rep import SqueezeParams
from tdse.generators import WeylCoefficients
from tdse.observables import expectation_xp, fock_cross_check, fock_state, uncertainties
from tdse.system_model import SystemClass, ToSystem


def sampled_weyl(count):
    w = simulate(SystemClass.TO, ToSystem.from_strings("0.5", "1"), (0.0, 2 * np.pi, 401)).weyl
    i = np.linspace(0, w.grid.size - 1, count).astype(int)
    return WeylCoefficients(w.class_tag, w.grid[i], w.G_P[i], w.G_X[i], w.G_I[i],
                            w.F_P[i], w.F_X[i])


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dims", type=int, nargs="+", default=[30, 40, 50, 60, 80])
    ap.add_argument("--samples", type=int, default=20)
    args = ap.parse_args()

    w = sampled_weyl(args.samples)
    cases = [(a, r) for a in (0.5 + 0.2j, 1.0) for r in (0.0, 0.5, 0.75)]
    print("alpha        r     tail>40    " + "  ".join(f"N={n:<7d}" for n in args.dims))
    for a, r in cases:
        sq = SqueezeParams(r, 0.3)
        ref = (*expectation_xp(w, a), *uncertainties(w, sq)[:2])
        tail = np.sum(np.abs(fock_state(a, sq, 200)[40:]) ** 2)
        errs = []
        for n in args.dims:
            got = fock_cross_check(w, a, sq, N=n)
            errs.append(max(np.max(np.abs(u - v)) for u, v in zip(got, ref)))
        print(f"{a!s:12} {r:<5} {tail:9.2e}  " + "  ".join(f"{e:9.2e}" for e in errs))


if __name__ == "__main__":
    main()
