"""End-to-end orchestration: time map, auxiliary solve, coefficients, states."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import aux_solver
from .aux_solver import AuxSolution
from .generators import (EDFunctions, PhiFunctions, Su11Coefficients, WeylCoefficients,
                         ed_functions, phi_functions, su11_coefficients,
                         weyl_coefficients)
from .observables import StateSpec, Trajectory, trajectory
from .system_model import (GaugeFunctions, SystemClass, TimeMap, ToSystem, TqSystem,
                           time_map_on_grid)


@dataclass(frozen=True, eq=False)
class RunResult:
    class_tag: SystemClass
    time_map: TimeMap
    aux: AuxSolution
    weyl: WeylCoefficients
    phis: PhiFunctions
    eds: EDFunctions
    trajectories: tuple

    @property
    def trajectory(self) -> Trajectory:
        return self.trajectories[0]

    def su11(self, gauge=None, tq=None, g0=None, f0=None) -> Su11Coefficients:
        return su11_coefficients(self.class_tag, self.phis, self.eds, gauge,
                                 self.time_map, tq, g0, f0)


def simulate(class_tag, to: ToSystem, grid, states=(), gauge: GaugeFunctions | None = None,
             tq: TqSystem | None = None, xi0=None, xidot0=None, c_naught: complex = 0.0,
             rtol: float = aux_solver.RTOL, atol: float = aux_solver.ATOL) -> RunResult:
    """Run the full chain on a t grid (t' grid for TO).

    ``grid`` is an increasing array or a ``(t_o, t_end, n_samples)`` tuple.
    ``states`` is a sequence of :class:`StateSpec`; phase points refer to the
    first grid sample.
    """
    cls = SystemClass(class_tag)
    gauge = gauge or GaugeFunctions.identity()
    grid = np.linspace(*grid) if isinstance(grid, tuple) else np.asarray(grid, float)
    if cls is SystemClass.TO:
        tmap = TimeMap.identity(grid)
    else:
        tmap = time_map_on_grid(gauge.nu, grid)
    if cls is SystemClass.TQ and tq is not None:
        tq.check_kinetic(grid)

    sol = aux_solver.solve_auxiliary(to.g2, tmap.grid_tprime, xi0, xidot0, rtol, atol)
    sol = aux_solver.integrate_c(to.g1, sol, c_naught)
    w = weyl_coefficients(cls, sol, gauge, tmap)
    phis = phi_functions(sol)
    eds = ed_functions(sol)
    trajs = tuple(trajectory(w, s) for s in states)
    return RunResult(cls, tmap, sol, w, phis, eds, trajs)
