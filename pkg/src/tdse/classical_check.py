"""Residual check of expectation trajectories against Hamilton's equations.

Right-hand sides per class (dots are d/dt' for TO, d/dt otherwise)::

    TO:  x' = p,                       p' = -2 g2 x - g1
    TM:  x' = exp(-2 nu) p,            p' = -2 f2 x - f1
    TQ:  x' = (1 + k) p - h x/2 - g/2, p' = +h p/2 - 2 h2 x - h1

The TM and TQ lines are the partial derivatives of the classical
Hamiltonians.  Note p (not x) in the TM velocity and the + sign of h p/2 in
the TQ momentum.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .coeff_expr import as_expr
from .observables import Trajectory
from .system_model import SystemClass

# below this the residual is rounding noise and has no convergence order
NOISE_FLOOR = 1e-11


@dataclass(frozen=True)
class ClassicalSystem:
    """Coefficient callables of one class; any vectorised callable works."""

    class_tag: SystemClass
    coeffs: dict

    @classmethod
    def to(cls, g2="0.5", g1="0", g0="0"):
        return cls(SystemClass.TO, _wrap(g2=g2, g1=g1, g0=g0))

    @classmethod
    def tm(cls, nu="0", f2="0.5", f1="0", f0="0"):
        return cls(SystemClass.TM, _wrap(nu=nu, f2=f2, f1=f1, f0=f0))

    @classmethod
    def tq(cls, k="0", h="0", g="0", h2="0.5", h1="0", h0="0"):
        return cls(SystemClass.TQ, _wrap(k=k, h=h, g=g, h2=h2, h1=h1, h0=h0))

    def __getattr__(self, name):
        try:
            return self.coeffs[name]
        except KeyError:
            raise AttributeError(name) from None


def _wrap(**kw):
    return {k: v if callable(v) else as_expr(v) for k, v in kw.items()}


def hamilton_rhs(sys: ClassicalSystem, x, p, t):
    c = sys.coeffs
    if sys.class_tag is SystemClass.TO:
        return p, -2 * c["g2"](t) * x - c["g1"](t)
    if sys.class_tag is SystemClass.TM:
        return np.exp(-2 * c["nu"](t)) * p, -2 * c["f2"](t) * x - c["f1"](t)
    h = c["h"](t)
    dx = (1 + c["k"](t)) * p - 0.5 * h * x - 0.5 * c["g"](t)
    dp = 0.5 * h * p - 2 * c["h2"](t) * x - c["h1"](t)
    return dx, dp


def _max_residual(traj: Trajectory, sys, stride: int):
    t = traj.grid[::stride]
    x = traj.x_mean[::stride]
    p = traj.p_mean[::stride]
    dt = t[2:] - t[:-2]
    dx = (x[2:] - x[:-2]) / dt
    dp = (p[2:] - p[:-2]) / dt
    fx, fp = hamilton_rhs(sys, x[1:-1], p[1:-1], t[1:-1])
    return float(max(np.max(np.abs(dx - fx)), np.max(np.abs(dp - fp))))


@dataclass(frozen=True)
class ResidualReport:
    class_tag: str
    delta: float
    max_residual: float
    max_residual_coarse: float
    order: float | None
    fitted_constant: float

    def as_dict(self, **labels) -> dict:
        return {"class": self.class_tag, **labels, "delta": self.delta,
                "max_residual": self.max_residual,
                "max_residual_2delta": self.max_residual_coarse,
                "convergence_order": self.order,
                "convergence_ratio": (None if self.order is None else 2.0 ** self.order),
                "fitted_C": self.fitted_constant}


def verify_classical_motion(traj: Trajectory, sys: ClassicalSystem) -> ResidualReport:
    """Central-difference residuals at spacing Delta and 2 Delta.

    The trajectory must sit on a uniform grid.  The order is
    ``log2(res(2 Delta) / res(Delta))``; it is ``None`` when the fine residual
    is already at rounding level (exact linear motion, say).
    """
    grid = np.asarray(traj.grid, dtype=float)
    if grid.size < 5:
        raise ValueError("need at least five samples")
    steps = np.diff(grid)
    delta = float(steps.mean())
    if np.max(np.abs(steps - delta)) > 1e-9 * max(1.0, abs(delta)):
        raise ValueError("trajectory grid is not uniform")
    fine = _max_residual(traj, sys, 1)
    coarse = _max_residual(traj, sys, 2)
    order = None
    if fine > NOISE_FLOOR and coarse > 0:
        order = float(np.log2(coarse / fine))
    return ResidualReport(sys.class_tag.value, delta, fine, coarse, order, fine / delta**2)
