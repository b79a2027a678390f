"""Generator coefficient functions for the three system classes.

The Heisenberg-Weyl lowering operator of every class has the generic form
``J_- = i{G_P P - G_X X + G_I I}``; this module evaluates ``G_P, G_X, G_I``
and the derived ``F_P, F_X`` per time sample, plus the coefficient rows of
the three su(1,1) generators.
"""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass

import numpy as np

from .aux_solver import AuxSolution
from .coeff_expr import CoeffExpr, as_expr
from .errors import ConsistencyWarning
from .system_model import GaugeFunctions, SystemClass, TimeMap, TqSystem

SU11_TERMS = ("T", "P2", "D", "P", "X2", "X", "I")
F0_MISMATCH_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class WeylCoefficients:
    class_tag: SystemClass
    grid: np.ndarray
    G_P: np.ndarray
    G_X: np.ndarray
    G_I: np.ndarray
    F_P: np.ndarray
    F_X: np.ndarray

    def pairing(self) -> np.ndarray:
        """G_P conj(G_X) - conj(G_P) G_X, which should equal -i."""
        return self.G_P * np.conj(self.G_X) - np.conj(self.G_P) * self.G_X

    def at(self, index: int) -> "WeylCoefficients":
        s = slice(index, index + 1)
        return WeylCoefficients(self.class_tag, self.grid[s], self.G_P[s], self.G_X[s],
                                self.G_I[s], self.F_P[s], self.F_X[s])


@dataclass(frozen=True, eq=False)
class PhiFunctions:
    grid: np.ndarray
    phi: np.ndarray  # shape (3, n)
    phi_dot: np.ndarray
    phi_ddot: np.ndarray


@dataclass(frozen=True, eq=False)
class EDFunctions:
    grid: np.ndarray
    E: np.ndarray  # shape (3, n)
    E_dot: np.ndarray
    D: np.ndarray


@dataclass(frozen=True, eq=False)
class Su11Coefficients:
    """Per-sample coefficients of the su(1,1) generators.

    ``rows[term]`` has shape ``(3, n)`` for j = 1, 2, 3 (lowering, raising,
    diagonal).  Every generator is written ``-{-C_T T + C_P2 P^2 + C_D D +
    C_P P + C_X2 X^2 + C_X X + C_I I}``; for TO the T column multiplies T'.
    """

    class_tag: SystemClass
    grid: np.ndarray
    rows: dict

    def __getitem__(self, term):
        return self.rows[term]


def phi_functions(sol: AuxSolution, g2: CoeffExpr | None = None) -> PhiFunctions:
    g2 = as_expr(g2) if g2 is not None else sol.g2
    xi, xd = sol.xi, sol.xi_dot
    xb, xdb = np.conj(xi), np.conj(xd)
    k = g2(sol.grid_tprime)
    phi = np.array([xi**2, xb**2, 2 * xi * xb])
    phi_dot = np.array([2 * xi * xd, 2 * xb * xdb, 2 * (xd * xb + xi * xdb)])
    phi_ddot = np.array([
        2 * xd**2 - 4 * k * xi**2,
        2 * xdb**2 - 4 * k * xb**2,
        4 * xd * xdb - 8 * k * xi * xb,
    ])
    # phi_3 and its derivatives are real; drop rounding residue
    phi[2], phi_dot[2], phi_ddot[2] = phi[2].real, phi_dot[2].real, phi_ddot[2].real
    return PhiFunctions(sol.grid_tprime, phi, phi_dot, phi_ddot)


def ed_functions(sol: AuxSolution) -> EDFunctions:
    xi, xd = sol.xi, sol.xi_dot
    xb, xdb = np.conj(xi), np.conj(xd)
    C = sol.C
    Cb = np.conj(C)
    g1 = sol.g1(sol.grid_tprime) if sol.g1 is not None else np.zeros(xi.size)
    C_dot = g1 * xi
    Cb_dot = np.conj(C_dot)
    E = np.array([-xi * C, -xb * Cb, -xi * Cb - xb * C])
    E_dot = np.array([
        -(xd * C + xi * C_dot),
        -(xdb * Cb + xb * Cb_dot),
        -(xd * Cb + xi * Cb_dot + xdb * C + xb * C_dot),
    ])
    D = np.array([-0.5 * C**2, -0.5 * Cb**2, -C * Cb])
    return EDFunctions(sol.grid_tprime, E, E_dot, D)


def _check_hat_grid(grid_tprime, tmap: TimeMap):
    if grid_tprime.shape != tmap.grid_tprime.shape or not np.allclose(
        grid_tprime, tmap.grid_tprime, rtol=0, atol=1e-13
    ):
        raise ValueError("solution must be sampled on the time map's t' grid "
                         "(use AuxSolution.resample)")


def weyl_coefficients(class_tag, sol: AuxSolution, gauge: GaugeFunctions | None = None,
                      tmap: TimeMap | None = None) -> WeylCoefficients:
    """G_P, G_X, G_I and F_P, F_X for one class.

    For TM and TQ the auxiliary solution is composed with t'(t): ``sol``
    is resampled onto ``tmap.grid_tprime`` if needed and the result is
    indexed by ``tmap.grid_t``.
    """
    cls = SystemClass(class_tag)
    if cls is SystemClass.TO:
        grid = sol.grid_tprime
        G_P, G_X, G_I = sol.xi, sol.xi_dot, sol.C
    else:
        if tmap is None:
            raise ValueError(f"{cls.value} coefficients need a time map")
        gauge = gauge or GaugeFunctions.identity()
        s = sol.resample(tmap.grid_tprime)
        grid = tmap.grid_t
        if cls is SystemClass.TM:
            G_P, G_X, G_I = s.xi, s.xi_dot, s.C
        else:
            e_nu = np.exp(gauge.nu(grid))
            kappa = gauge.kappa(grid)
            mu = gauge.mu(grid)
            G_P = s.xi * e_nu + 2 * s.xi_dot * kappa / e_nu
            G_X = s.xi_dot / e_nu
            G_I = s.C + mu * s.xi_dot
    F_P = G_P * np.conj(G_I) - np.conj(G_P) * G_I
    F_X = G_X * np.conj(G_I) - np.conj(G_X) * G_I
    return WeylCoefficients(cls, np.asarray(grid), G_P, G_X, G_I, F_P, F_X)


def f_closed_forms(class_tag, sol: AuxSolution, gauge: GaugeFunctions, tmap: TimeMap):
    """F_P, F_X written out in terms of xi, xi_dot and C, per class.

    Used to cross-check the definition.  The TQ F_X form here carries
    exp(+nu), which the definition does not reproduce (it gives exp(-nu)).
    """
    cls = SystemClass(class_tag)
    s = sol if cls is SystemClass.TO else sol.resample(tmap.grid_tprime)
    xi, xd, C = s.xi, s.xi_dot, s.C
    fp = xi * np.conj(C) - np.conj(xi) * C
    fx = xd * np.conj(C) - np.conj(xd) * C
    if cls is not SystemClass.TQ:
        return fp, fx
    t = tmap.grid_t
    e_nu = np.exp(gauge.nu(t))
    kappa, mu = gauge.kappa(t), gauge.mu(t)
    return fp * e_nu - 1j * mu * e_nu + 2 * fx * kappa / e_nu, fx * e_nu


def su11_coefficients(class_tag, phis: PhiFunctions, eds: EDFunctions,
                      gauge: GaugeFunctions | None = None, tmap: TimeMap | None = None,
                      tq: TqSystem | None = None, g0: CoeffExpr | None = None,
                      f0: CoeffExpr | None = None) -> Su11Coefficients:
    """Coefficient rows of M_-, M_+, M (j = 1, 2, 3) for one class.

    ``g0`` (a function of t') enters the I coefficient of TO and TM.  For TM,
    ``g0 o t'`` should equal ``exp(2 nu) f0``; when both are given the f0 form
    is used and a :class:`ConsistencyWarning` flags a mismatch.  For TQ the
    user-supplied ``tq`` system is required.
    """
    cls = SystemClass(class_tag)
    phi, phid, phidd = phis.phi, phis.phi_dot, phis.phi_ddot
    E, Ed, D = eds.E, eds.E_dot, eds.D
    n = phi.shape[1]
    zero = np.zeros((3, n), dtype=complex)

    if cls is SystemClass.TO:
        g0v = as_expr(g0 or "0")(phis.grid)
        rows = {"T": phi, "P2": zero, "D": 0.5 * phid, "P": E, "X2": -0.25 * phidd,
                "X": -Ed, "I": D + g0v * phi}
        return Su11Coefficients(cls, phis.grid, _complex_rows(rows))

    if tmap is None:
        raise ValueError(f"{cls.value} coefficients need a time map")
    _check_hat_grid(phis.grid, tmap)
    _check_hat_grid(eds.grid, tmap)
    gauge = gauge or GaugeFunctions.identity()
    t = tmap.grid_t
    nu = gauge.nu(t)
    e2 = np.exp(2 * nu)

    if cls is SystemClass.TM:
        g0_hat = _tm_g0_hat(g0, f0, tmap, nu)
        rows = {"T": phi * e2, "P2": zero, "D": 0.5 * phid, "P": E, "X2": -0.25 * phidd,
                "X": -Ed, "I": D + g0_hat * phi}
        return Su11Coefficients(cls, t, _complex_rows(rows))

    if tq is None:
        raise ValueError("TQ coefficients need the TQ system functions")
    e1 = np.exp(nu)
    kap, mu = gauge.kappa(t), gauge.mu(t)
    k, h, g = tq.k(t), tq.h(t), tq.g(t)
    h0, h1, h2 = tq.h0(t), tq.h1(t), tq.h2(t)
    rows = {
        "T": phi * e2,
        "P2": phi * (0.5 * k - 4 * h2 * kap**2) * e2 - phid * kap - phidd * kap**2 / e2,
        "D": phi * (-0.5 * h + 4 * h2 * kap) * e2 + 0.5 * phid + phidd * kap / e2,
        "P": (phi * (-0.5 * g + 2 * h1 * kap) * e2 + E * e1 - 0.5 * phid * mu * e1
              - phidd * kap * mu / e1 + 2 * Ed * kap / e1),
        "X2": -0.25 * phidd / e2,
        "X": -Ed / e1 + 0.5 * phidd * mu / e1,
        "I": (D - 0.25 * phidd * mu**2 + Ed * mu
              + phi * (h0 + h1 * mu * e1 + h2 * mu**2 * e2) * e2),
    }
    return Su11Coefficients(cls, t, _complex_rows(rows))


def _complex_rows(rows):
    return {k: np.asarray(rows[k], dtype=complex) for k in SU11_TERMS}


def _tm_g0_hat(g0, f0, tmap: TimeMap, nu):
    from_g0 = as_expr(g0)(tmap.grid_tprime) if g0 is not None else None
    if f0 is None:
        return from_g0 if from_g0 is not None else np.zeros(tmap.grid_t.size)
    from_f0 = np.exp(2 * nu) * as_expr(f0)(tmap.grid_t)
    if from_g0 is not None:
        gap = np.max(np.abs(from_f0 - from_g0))
        if gap > F0_MISMATCH_TOL:
            warnings.warn(f"exp(2 nu) f0 and g0 o t' differ by {gap:.3g}",
                          ConsistencyWarning, stacklevel=3)
    return from_f0


def write_weyl_csv(w: WeylCoefficients, path) -> None:
    """One row per sample; complex columns split into _re/_im pairs."""
    names = ("G_P", "G_X", "G_I", "F_P", "F_X")
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(["t"] + [f"{n}_{part}" for n in names for part in ("re", "im")])
        for i in range(w.grid.size):
            row = [format(float(w.grid[i]), ".17g")]
            for n in names:
                z = complex(getattr(w, n)[i])
                row += [format(z.real, ".17g"), format(z.imag, ".17g")]
            out.writerow(row)


def write_su11_csv(s: Su11Coefficients, path) -> None:
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh, lineterminator="\n")
        header = ["t"]
        for j in (1, 2, 3):
            for term in SU11_TERMS:
                header += [f"C{j}_{term}_re", f"C{j}_{term}_im"]
        out.writerow(header)
        for i in range(s.grid.size):
            row = [format(float(s.grid[i]), ".17g")]
            for j in range(3):
                for term in SU11_TERMS:
                    z = complex(s.rows[term][j, i])
                    row += [format(z.real, ".17g"), format(z.imag, ".17g")]
            out.writerow(row)
