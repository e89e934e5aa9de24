"""Interaction of two spherical shocks in a barotropic fluid.

The state behind both emerging shocks is built on a characteristic
coordinate triangle by a fixed-point iteration, starting from the exact
solution of the jump conditions at the interaction point.
"""

from .ahead import Box, ConstantField, Side, TaylorField
from .chart import CharGrid, Region, build_grid, phi_normalize
from .errors import (BadResolution, ConfigError, InadmissibleError, NoConvergence,
                     ShockInteractError)
from .fluid import Eos, InvState, PrimState
from .interaction import InteractionData, Setup, setup_interaction, solve_point
from .problems import symmetric_fields
from .scheme import IterationConfig, Solution, SolveReport, iterate
from .validate import Problem, run_validation

__version__ = "0.1.0"

__all__ = [
    "BadResolution", "Box", "CharGrid", "ConfigError", "ConstantField", "Eos", "InadmissibleError",
    "InteractionData", "InvState", "IterationConfig", "NoConvergence", "PrimState", "Problem",
    "Region", "Setup", "ShockInteractError", "Side", "Solution", "SolveReport", "TaylorField",
    "build_grid", "iterate", "phi_normalize", "run_validation", "setup_interaction", "solve_point",
    "symmetric_fields",
]
