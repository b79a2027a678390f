"""System classes, gauge functions and the t -> t' reparameterisation.

The time-dependent oscillator (TO) lives in time t'.  The time-varying-mass
(TM) and quadratic-Hamiltonian (TQ) classes live in time t, connected by
``dt'/dt = exp(-2 nu(t))`` with ``t'(t_o) = 0``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicHermiteSpline

from .coeff_expr import CoeffExpr, as_expr
from .quadrature import cumulative


class SystemClass(str, enum.Enum):
    TO = "TO"
    TM = "TM"
    TQ = "TQ"


@dataclass(frozen=True)
class ToSystem:
    """Coefficients of X^2, X and I in the TO equation (functions of t')."""

    g2: CoeffExpr
    g1: CoeffExpr
    g0: CoeffExpr

    @classmethod
    def from_strings(cls, g2="0.5", g1="0", g0="0") -> "ToSystem":
        return cls(as_expr(g2), as_expr(g1), as_expr(g0))


@dataclass(frozen=True)
class GaugeFunctions:
    nu: CoeffExpr
    mu: CoeffExpr
    kappa: CoeffExpr

    @classmethod
    def from_strings(cls, nu="0", mu="0", kappa="0") -> "GaugeFunctions":
        return cls(as_expr(nu), as_expr(mu), as_expr(kappa))

    @classmethod
    def identity(cls) -> "GaugeFunctions":
        return cls.from_strings()

    @property
    def is_identity(self) -> bool:
        return all(
            e.is_constant and e(0.0) == 0.0 for e in (self.nu, self.mu, self.kappa)
        )

    def inverse_mass(self, t):
        """f(t) = exp(-2 nu(t))."""
        return np.exp(-2.0 * self.nu(t))


@dataclass(frozen=True)
class TqSystem:
    """User-supplied TQ coefficient functions of t."""

    k: CoeffExpr
    h: CoeffExpr
    g: CoeffExpr
    h0: CoeffExpr
    h1: CoeffExpr
    h2: CoeffExpr

    @classmethod
    def from_strings(cls, k="0", h="0", g="0", h0="0", h1="0", h2="0.5") -> "TqSystem":
        return cls(*(as_expr(s) for s in (k, h, g, h0, h1, h2)))

    def check_kinetic(self, t) -> None:
        if np.any(1.0 + self.k(t) <= 0.0):
            raise ValueError("1 + k(t) must stay positive on the window")


@dataclass(frozen=True, eq=False)
class TimeMap:
    """Samples of t'(t) on a monotone t grid.

    Off-grid values come from a cubic Hermite spline through the samples
    with the exact slopes ``exp(-2 nu)``.
    """

    grid_t: np.ndarray
    grid_tprime: np.ndarray
    t_o: float
    slope: np.ndarray

    def __post_init__(self):
        if self.grid_t.size < 2 or np.any(np.diff(self.grid_tprime) <= 0):
            raise ValueError("time map must be strictly increasing")

    @classmethod
    def identity(cls, grid_t) -> "TimeMap":
        """t' = t on the given grid (TO runs, or the nu = 0 gauge)."""
        grid = np.asarray(grid_t, dtype=float)
        return cls(grid, grid.copy(), float(grid[0]), np.ones_like(grid))

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if np.any(t < self.grid_t[0] - 1e-12) or np.any(t > self.grid_t[-1] + 1e-12):
            raise ValueError("time outside the time-map window")
        spline = CubicHermiteSpline(self.grid_t, self.grid_tprime, self.slope)
        return spline(t)

    @property
    def tprime_end(self) -> float:
        return float(self.grid_tprime[-1])


def build_time_map(nu: CoeffExpr, t_o: float, t_end: float, n_samples: int,
                   tol: float = 1e-12) -> TimeMap:
    if not t_end > t_o:
        raise ValueError("t_end must exceed t_o")
    if n_samples < 2:
        raise ValueError("need at least two samples")
    return time_map_on_grid(nu, np.linspace(t_o, t_end, n_samples), tol)


def time_map_on_grid(nu: CoeffExpr, grid_t, tol: float = 1e-12) -> TimeMap:
    """Like :func:`build_time_map` but on an arbitrary increasing grid."""
    nu = as_expr(nu)
    grid_t = np.asarray(grid_t, dtype=float)
    integrand = lambda s: np.exp(-2.0 * nu(s))
    grid_tprime = cumulative(integrand, grid_t, tol)
    return TimeMap(grid_t, grid_tprime, float(grid_t[0]), integrand(grid_t))


def hat(fn, time_map: TimeMap, domain: tuple[float, float] | None = None) -> np.ndarray:
    """Sample ``fn o t'`` on the t grid of ``time_map``.

    ``fn`` is any vectorised callable of t'.  When ``domain`` is given the
    composed t' values must fall inside it.
    """
    tp = time_map.grid_tprime
    if domain is not None:
        lo, hi = domain
        span = max(1.0, abs(hi - lo))
        if tp[0] < lo - 1e-12 * span or tp[-1] > hi + 1e-12 * span:
            raise ValueError(
                f"t' range [{tp[0]}, {tp[-1]}] outside function domain [{lo}, {hi}]"
            )
    return fn(tp)


def derive_tm_f0(g0: CoeffExpr, time_map: TimeMap, nu: CoeffExpr) -> np.ndarray:
    """f0(t) = exp(-2 nu(t)) g0(t'(t)), sampled on the t grid."""
    return np.exp(-2.0 * nu(time_map.grid_t)) * hat(g0, time_map)
