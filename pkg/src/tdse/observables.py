"""Coherent- and squeezed-state observables.

Two deliberately separate routes produce the same numbers:

* the closed form, written directly in terms of the Weyl coefficients
  (``expectation_xp`` / ``uncertainties``), and
* the operator route (``fock_cross_check``), which builds X(t) and P(t) as
  truncated matrices and takes expectation values in D(alpha) S(z) e_0.

They share nothing except the :class:`WeylCoefficients` table.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field

import numpy as np

from . import fock_rep
from .errors import ImaginaryResidue
from .fock_rep import SqueezeParams
from .generators import PhiFunctions, WeylCoefficients
from .system_model import GaugeFunctions, SystemClass, TimeMap

IMAG_TOL = 1e-8
CSV_HEADER = ("t", "x_mean", "p_mean", "var_x", "var_p", "product")


@dataclass(frozen=True)
class StateSpec:
    """Either ``alpha`` or an initial phase point ``(x_o, p_o)``."""

    alpha: complex | None = None
    phase_point: tuple[float, float] | None = None
    squeeze: SqueezeParams = field(default_factory=SqueezeParams)

    def __post_init__(self):
        if (self.alpha is None) == (self.phase_point is None):
            raise ValueError("give exactly one of alpha or phase_point")

    def resolve_alpha(self, w: WeylCoefficients, index: int = 0) -> complex:
        if self.alpha is not None:
            return complex(self.alpha)
        return alpha_from_phase_point(w, *self.phase_point, index=index)


@dataclass(frozen=True, eq=False)
class Trajectory:
    grid: np.ndarray
    x_mean: np.ndarray
    p_mean: np.ndarray
    var_x: np.ndarray
    var_p: np.ndarray
    product: np.ndarray
    time_variable: str = "t"

    def rows(self):
        return zip(self.grid, self.x_mean, self.p_mean, self.var_x, self.var_p, self.product)


def _realify(values, what, tol=IMAG_TOL):
    values = np.asarray(values)
    worst = float(np.max(np.abs(values.imag))) if values.size else 0.0
    if worst > tol:
        raise ImaginaryResidue(f"{what} has imaginary part {worst:.3g}")
    return values.real.copy()


def alpha_from_phase_point(w: WeylCoefficients, x_o: float, p_o: float,
                           index: int = 0) -> complex:
    """Displacement parameter reproducing <x> = x_o, <p> = p_o at a sample."""
    gp, gx = w.G_P[index], w.G_X[index]
    fp, fx = w.F_P[index], w.F_X[index]
    return complex(1j * (gp * p_o - gx * x_o) + gp * fx - gx * fp)


def expectation_xp(w: WeylCoefficients, alpha: complex):
    a = complex(alpha)
    x = a * np.conj(w.G_P) + np.conj(a) * w.G_P + 1j * w.F_P
    p = a * np.conj(w.G_X) + np.conj(a) * w.G_X + 1j * w.F_X
    return _realify(x, "<x>"), _realify(p, "<p>")


def uncertainties(w: WeylCoefficients, squeeze: SqueezeParams | None = None):
    """(var_x, var_p, product) for the squeezed state; r = 0 is coherent."""
    sq = squeeze or SqueezeParams()
    ph = np.exp(1j * sq.theta)
    sh, ch = np.sinh(2 * sq.r), np.cosh(2 * sq.r)
    gp, gx = w.G_P, w.G_X
    var_x = 0.5 * (np.conj(gp) ** 2 * ph + gp**2 / ph) * sh + gp * np.conj(gp) * ch
    var_p = 0.5 * (np.conj(gx) ** 2 * ph + gx**2 / ph) * sh + gx * np.conj(gx) * ch
    bracket = ((gp * np.conj(gx) + np.conj(gp) * gx) * ch
               + (gp * gx / ph + np.conj(gp) * np.conj(gx) * ph) * sh)
    bracket = _realify(bracket, "uncertainty-product bracket", 1e-10 * max(1.0, ch))
    product = 0.25 * (1.0 + bracket**2)
    return _realify(var_x, "var_x"), _realify(var_p, "var_p"), product


def coherent_product(w: WeylCoefficients) -> np.ndarray:
    """|G_P|^2 |G_X|^2 written as 1/4 [1 + (G_P conj(G_X) + c.c.)^2]."""
    s = w.G_P * np.conj(w.G_X) + np.conj(w.G_P) * w.G_X
    return 0.25 * (1.0 + _realify(s, "coherent bracket", 1e-10) ** 2)


def class_product(class_tag, phis: PhiFunctions, squeeze: SqueezeParams,
                  xi_dot=None, gauge: GaugeFunctions | None = None,
                  tmap: TimeMap | None = None) -> np.ndarray:
    """Uncertainty product from the per-class closed forms in phi-dot.

    TO and TM share one expression in (hatted) phi-dots; TQ needs the hatted
    xi-dot and the gauge functions as well.
    """
    cls = SystemClass(class_tag)
    ph = np.exp(1j * squeeze.theta)
    sh, ch = np.sinh(2 * squeeze.r), np.cosh(2 * squeeze.r)
    d1, d2, d3 = phis.phi_dot
    if cls is SystemClass.TQ:
        t = tmap.grid_t
        w = gauge.kappa(t) * np.exp(-2 * gauge.nu(t))
        xd = np.asarray(xi_dot)
        d3 = d3 + 8 * xd * np.conj(xd) * w
        d1 = d1 + 4 * xd**2 * w
        d2 = d2 + 4 * np.conj(xd) ** 2 * w
    bracket = d3 * ch + (d1 / ph + d2 * ph) * sh
    bracket = _realify(bracket, "uncertainty-product bracket", 1e-10 * max(1.0, ch))
    return 0.25 * (1.0 + 0.25 * bracket**2)


def sho_product(t, r: float, theta: float, omega: float = 1.0, t_o: float = 0.0):
    """Closed-form squeezed product for a constant-frequency oscillator."""
    arg = 2 * omega * (np.asarray(t, dtype=float) - t_o) - theta
    return 0.25 * (1.0 + np.sinh(2 * r) ** 2 * np.sin(arg) ** 2)


def trajectory(w: WeylCoefficients, state: StateSpec, index: int = 0) -> Trajectory:
    alpha = state.resolve_alpha(w, index)
    x, p = expectation_xp(w, alpha)
    vx, vp, prod = uncertainties(w, state.squeeze)
    var = "t'" if w.class_tag is SystemClass.TO else "t"
    return Trajectory(np.asarray(w.grid, dtype=float), x, p, vx, vp, prod, var)


# ---------------------------------------------------------------------------
# operator route
# ---------------------------------------------------------------------------

def fock_state(alpha: complex, squeeze: SqueezeParams, N: int,
               guard: int | None = None) -> np.ndarray:
    """D(alpha) S(z) e_0 on the first N states, renormalised."""
    D = fock_rep.displacement(alpha, N, guard).matrix
    S = fock_rep.squeeze(squeeze, N, guard).matrix
    psi = D @ S[:, 0]
    return psi / np.linalg.norm(psi)


def _moments(op, psi):
    m = np.vdot(psi, op @ psi)
    m2 = np.vdot(psi, op @ (op @ psi))
    return m, m2 - m**2


def fock_cross_check(w: WeylCoefficients, alpha: complex, squeeze: SqueezeParams | None,
                     N: int = 40, guard: int | None = None):
    """(x_mean, p_mean, var_x, var_p) from truncated X(t), P(t) matrices."""
    sq = squeeze or SqueezeParams()
    lad = fock_rep.build_ladder(N)
    jm, jp, I = lad.J_minus.matrix, lad.J_plus.matrix, lad.identity.matrix
    psi = fock_state(alpha, sq, N, guard)
    out = np.empty((4, w.grid.size))
    for i in range(w.grid.size):
        X = np.conj(w.G_P[i]) * jm + w.G_P[i] * jp + 1j * w.F_P[i] * I
        P = np.conj(w.G_X[i]) * jm + w.G_X[i] * jp + 1j * w.F_X[i] * I
        mx, vx = _moments(X, psi)
        mp, vp = _moments(P, psi)
        vals = np.array([mx, mp, vx, vp])
        out[:, i] = _realify(vals, f"operator moments at sample {i}")
    return out[0], out[1], out[2], out[3]


@dataclass(frozen=True)
class SRReport:
    var_X: float
    var_P: float
    covariance: float
    heisenberg_product: float
    sr_bound: float

    @property
    def holds(self) -> bool:
        return self.heisenberg_product >= self.sr_bound - 1e-10

    @property
    def saturation_defect(self) -> float:
        return self.heisenberg_product - self.sr_bound


def sr_bound_check(alpha: complex, squeeze: SqueezeParams | None = None, N: int = 40,
                   guard: int | None = None) -> SRReport:
    """Schroedinger-Robertson check for the abstract quadratures.

    Uses ``X = (J_- + J_+)/sqrt 2`` and ``P = (J_- - J_+)/(i sqrt 2)``; the
    covariance is the expectation of the anticommutator of the centred
    operators.
    """
    sq = squeeze or SqueezeParams()
    lad = fock_rep.build_ladder(N)
    jm, jp, I = lad.J_minus.matrix, lad.J_plus.matrix, lad.identity.matrix
    Xo = (jm + jp) / np.sqrt(2)
    Po = (jm - jp) / (1j * np.sqrt(2))
    psi = fock_state(alpha, sq, N, guard)
    mx, vx = _moments(Xo, psi)
    mp, vp = _moments(Po, psi)
    dX, dP = Xo - mx * I, Po - mp * I
    cov = np.vdot(psi, (dX @ dP + dP @ dX) @ psi)
    vx, vp, cov = (_realify(np.array([v]), "SR moment")[0] for v in (vx, vp, cov))
    return SRReport(vx, vp, cov, vx * vp, 0.25 + 0.25 * abs(cov) ** 2)


# ---------------------------------------------------------------------------
# export
# ---------------------------------------------------------------------------

def write_trajectory_csv(traj: Trajectory, path) -> None:
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(CSV_HEADER)
        for row in traj.rows():
            out.writerow([format(float(v), ".17g") for v in row])


def trajectory_json(traj: Trajectory, metadata: dict) -> dict:
    return {
        "metadata": metadata,
        "columns": list(CSV_HEADER),
        "time_variable": traj.time_variable,
        "data": [[float(v) for v in row] for row in traj.rows()],
    }


def write_trajectory_json(traj: Trajectory, path, metadata: dict) -> None:
    with open(path, "w") as fh:
        json.dump(trajectory_json(traj, metadata), fh, indent=1)
        fh.write("\n")
