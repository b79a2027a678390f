"""Sweep gauge functions and report the invariants each run must keep.

For every class and gauge: the pairing residual, the imaginary part of
F_P/F_X, the minimum uncertainty product of a squeezed state, and the
classical-motion residual with its convergence ratio.  TM/TQ coefficient
functions consistent with the chosen oscillator are built for the sweep.
"""

import argparse

import numpy as np

from tdse import simulate
from tdse.classical_check import ClassicalSystem, verify_classical_motion
from tdse.fock_rep import SqueezeParams
from tdse.observables import StateSpec
from tdse.system_model import GaugeFunctions, SystemClass, ToSystem

GAUGES = [
    ("0", "0", "0", "0"),
    ("t", "1", "0", "0"),
    ("t", "1", "1", "0.1"),
    ("0.5*ln(1+t)", "0.5/(1+t)", "1", "0.1"),
    ("0.2*sin(t)", "0.2*cos(t)", "0.5", "0.05"),
]


def classical(cls, nu, nud, mu, kappa, g2, g1):
    """Coefficients of the same motion in the TM/TQ pictures (constant g2, g1)."""
    if cls is SystemClass.TO:
        return ClassicalSystem.to(g2, g1)
    f = f"exp(-2*({nu}))"
    if cls is SystemClass.TM:
        return ClassicalSystem.tm(nu, f"{f}*{g2}", f"{f}*{g1}")
    h2 = f"exp(-4*({nu}))*{g2}"
    h1 = f"exp(-3*({nu}))*({g1}-2*({mu})*{g2})"
    return ClassicalSystem.tq(k=f"-4*({kappa})*({nud}) + 8*({kappa})^2*{h2}",
                              h=f"8*({kappa})*{h2} - 2*({nud})", g=f"4*({kappa})*{h1}",
                              h2=h2, h1=h1)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--g2", default="0.5")
    ap.add_argument("--g1", default="1")
    ap.add_argument("--t-end", type=float, default=2.0)
    args = ap.parse_args()

    state = StateSpec(phase_point=(0.7, -0.4), squeeze=SqueezeParams(0.6, 0.4))
    n = int(round(args.t_end / 5e-4)) + 1
    print(f"{'class':5} {'nu':14} {'mu':4} {'kappa':6} {'pairing':>9} {'Re F':>9} "
          f"{'min prod':>9} {'residual':>9} {'ratio':>6}")
    for cls in SystemClass:
        for nu, nud, mu, kappa in GAUGES:
            g = GaugeFunctions.from_strings(nu, mu, kappa)
            run = simulate(cls, ToSystem.from_strings(args.g2, args.g1), (0.0, args.t_end, n),
                           states=[state], gauge=g)
            w = run.weyl
            pairing = np.max(np.abs(w.pairing() + 1j))
            re_f = max(np.max(np.abs(w.F_P.real)), np.max(np.abs(w.F_X.real)))
            rep = verify_classical_motion(run.trajectory,
                                          classical(cls, nu, nud, mu, kappa, args.g2, args.g1))
            ratio = rep.max_residual_coarse / rep.max_residual
            print(f"{cls.value:5} {nu:14} {mu:4} {kappa:6} {pairing:9.1e} {re_f:9.1e} "
                  f"{run.trajectory.product.min():9.6f} {rep.max_residual_coarse:9.1e} "
                  f"{ratio:6.3f}")


if __name__ == "__main__":
    main()
