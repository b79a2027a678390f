"""Complex auxiliary oscillator and the accumulated drive integral.

Solves ``xi'' + 2 g2(t') xi = 0`` for a complex ``xi`` normalised by the
Wronskian ``xi conj(xi') - xi' conj(xi) = -i``.  The conjugate ``conj(xi)``
serves as the second independent solution, which is legitimate because
``g2`` is real.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.integrate import solve_ivp

from .coeff_expr import CoeffExpr, as_expr
from .errors import InvalidInitialData, WronskianDrift
from .quadrature import cumulative

RTOL = 1e-10
ATOL = 1e-12
INITIAL_TOL = 1e-12
DRIFT_TOL = 1e-8
OMEGA_FLOOR = 1e-6


def wronskian_value(xi, xi_dot):
    return xi * np.conj(xi_dot) - xi_dot * np.conj(xi)


def default_initial_data(g2: CoeffExpr, t0: float = 0.0) -> tuple[complex, complex]:
    """Harmonic-oscillator-like data with W = -i exactly.

    ``omega0 = sqrt(max(2 g2(t0), 1e-6))`` guards against a non-positive
    spring constant at the start of the window.
    """
    omega0 = math.sqrt(max(2.0 * float(g2(t0)), OMEGA_FLOOR))
    amp = (2.0 * omega0) ** -0.5
    return complex(amp), 1j * omega0 * amp


@dataclass(frozen=True, eq=False)
class AuxSolution:
    grid_tprime: np.ndarray
    xi: np.ndarray
    xi_dot: np.ndarray
    c_integral: np.ndarray
    c_naught: complex
    g2: CoeffExpr
    g1: CoeffExpr | None = None
    dense: object = None

    @property
    def C(self) -> np.ndarray:
        """The drive function c(t') + C0."""
        return self.c_integral + self.c_naught

    @property
    def xi_ddot(self) -> np.ndarray:
        return -2.0 * self.g2(self.grid_tprime) * self.xi

    @property
    def domain(self) -> tuple[float, float]:
        return float(self.grid_tprime[0]), float(self.grid_tprime[-1])

    def wronskian(self) -> np.ndarray:
        return wronskian_value(self.xi, self.xi_dot)

    def evaluate(self, tp):
        """(xi, xi_dot, C) at arbitrary t' inside the window.

        Uses cubic Hermite interpolation with the stored derivatives
        (xi' for xi, -2 g2 xi for xi', g1 xi for C).
        """
        tp = np.asarray(tp, dtype=float)
        lo, hi = self.domain
        if np.any(tp < lo - 1e-12) or np.any(tp > hi + 1e-12):
            raise ValueError("t' outside the auxiliary solution window")
        grid = self.grid_tprime
        g1 = self.g1(grid) if self.g1 is not None else np.zeros_like(grid)
        xi = _hermite(grid, self.xi, self.xi_dot, tp)
        xi_dot = _hermite(grid, self.xi_dot, self.xi_ddot, tp)
        C = _hermite(grid, self.C, g1 * self.xi, tp)
        return xi, xi_dot, C

    def resample(self, tp) -> "AuxSolution":
        tp = np.asarray(tp, dtype=float)
        if tp.shape == self.grid_tprime.shape and np.array_equal(tp, self.grid_tprime):
            return self
        xi, xi_dot, C = self.evaluate(tp)
        return replace(self, grid_tprime=tp, xi=xi, xi_dot=xi_dot,
                       c_integral=C - self.c_naught)


def _hermite(x, y, dy, xq):
    idx = np.clip(np.searchsorted(x, xq, side="right") - 1, 0, x.size - 2)
    x0, x1 = x[idx], x[idx + 1]
    h = x1 - x0
    s = (xq - x0) / h
    h00 = (1 + 2 * s) * (1 - s) ** 2
    h10 = s * (1 - s) ** 2
    h01 = s**2 * (3 - 2 * s)
    h11 = s**2 * (s - 1)
    return h00 * y[idx] + h10 * h * dy[idx] + h01 * y[idx + 1] + h11 * h * dy[idx + 1]


def integrate_raw(g2: CoeffExpr, grid_tprime, xi0: complex, xidot0: complex,
                  rtol: float = RTOL, atol: float = ATOL):
    """Integrate the auxiliary equation with no normalisation checks.

    Returns ``(xi, xi_dot, ode_solution)`` on ``grid_tprime``.
    """
    g2 = as_expr(g2)
    grid = np.asarray(grid_tprime, dtype=float)

    def rhs(s, y):
        return np.array([y[1], -2.0 * g2(s) * y[0]])

    sol = solve_ivp(rhs, (grid[0], grid[-1]), np.array([xi0, xidot0], dtype=complex),
                    method="DOP853", t_eval=grid, dense_output=True,
                    rtol=rtol, atol=atol)
    if not sol.success:
        raise WronskianDrift(f"integrator failed: {sol.message}")
    return sol.y[0], sol.y[1], sol.sol


def solve_auxiliary(g2, grid_tprime, xi0: complex | None = None,
                    xidot0: complex | None = None, rtol: float = RTOL,
                    atol: float = ATOL, drift_tol: float = DRIFT_TOL) -> AuxSolution:
    """Solve for xi on the given t' samples and monitor the Wronskian.

    ``grid_tprime`` may also be a ``(T0, T1, n_samples)`` tuple for a uniform
    grid.  Missing initial data default to :func:`default_initial_data`.

    Raises
    ------
    InvalidInitialData
        if the initial pair does not satisfy W = -i to 1e-12.
    WronskianDrift
        if |W + i| exceeds ``drift_tol`` at an accepted step or sample.
    """
    g2 = as_expr(g2)
    if isinstance(grid_tprime, tuple):
        grid = np.linspace(*grid_tprime)
    else:
        grid = np.asarray(grid_tprime, dtype=float)
    if xi0 is None or xidot0 is None:
        d_xi, d_xidot = default_initial_data(g2, float(grid[0]))
        xi0 = d_xi if xi0 is None else xi0
        xidot0 = d_xidot if xidot0 is None else xidot0
    w0 = wronskian_value(complex(xi0), complex(xidot0))
    if abs(w0 + 1j) > INITIAL_TOL:
        raise InvalidInitialData(
            f"initial data give Wronskian {w0:.6g}, need -i (|W + i| = {abs(w0 + 1j):.3g})"
        )

    xi, xi_dot, dense = integrate_raw(g2, grid, xi0, xidot0, rtol, atol)

    # accepted steps as well as output samples
    steps = dense(dense.ts)
    for where, w in (("step", wronskian_value(steps[0], steps[1])),
                     ("sample", wronskian_value(xi, xi_dot))):
        drift = np.max(np.abs(w + 1j))
        if drift > drift_tol:
            raise WronskianDrift(f"|W + i| = {drift:.3g} at an accepted {where}")

    n = grid.size
    return AuxSolution(grid, xi, xi_dot, np.zeros(n, dtype=complex), 0j, g2, None, dense)


def integrate_c(g1, sol: AuxSolution, c_naught: complex = 0.0,
                tol: float = 1e-12) -> AuxSolution:
    """Fill c(t') = integral of g1(s) xi(s) from the window start."""
    g1 = as_expr(g1)
    if g1.is_constant and g1(0.0) == 0.0:
        c = np.zeros(sol.grid_tprime.size, dtype=complex)
    elif sol.dense is not None:
        c = cumulative(lambda s: g1(s) * sol.dense(s)[0], sol.grid_tprime, tol)
    else:
        xi_of = lambda s: sol.evaluate(s)[0]
        c = cumulative(lambda s: g1(s) * xi_of(s), sol.grid_tprime, tol)
    return replace(sol, c_integral=c, c_naught=complex(c_naught), g1=g1)


def wronskian(sol: AuxSolution, index: int) -> complex:
    return complex(wronskian_value(sol.xi[index], sol.xi_dot[index]))
