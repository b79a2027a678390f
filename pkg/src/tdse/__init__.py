"""Symmetry-algebra toolkit for quadratic time-dependent Schroedinger equations."""

from .coeff_expr import CoeffExpr, parse
from .fock_rep import SqueezeParams
from .observables import StateSpec
from .pipeline import RunResult, simulate
from .system_model import GaugeFunctions, SystemClass, ToSystem, TqSystem

__all__ = ["CoeffExpr", "GaugeFunctions", "RunResult", "SqueezeParams", "StateSpec",
           "SystemClass", "ToSystem", "TqSystem", "parse", "simulate"]
__version__ = "0.1.0"
