"""Dark-bright soliton pairs of the 1D defocusing Gross-Pitaevskii system.

Library + CLI computing traveling-wave pairs by constrained energy
minimization (momentum of the dark component, mass of the bright one),
with rearrangement-based symmetrization, Lagrange-multiplier extraction,
and independent ODE residual verification.
"""
from .grid import Grid, SampledField, derivative, integrate, second_derivative
from .state import ConstraintTargets, PairState, Violation, reconstruct_phase, validate
from .functionals import (FunctionalReport, classical_momentum, coercivity_check,
                          energy, energy_gradient, g_weight, mass, momentum, report)
from .rearrange import (SymmetrizationError, check_hardy_littlewood,
                        check_polya_szego, check_two_bump_gap,
                        rearrange_decreasing, symmetrize)
from .scalar import (ScalarSoliton, build_scalar, scalar_energy,
                     scalar_momentum_of_speed, speed_of_momentum)
from .solver import (MinimizeConfig, PhaseEliminationError, SolveResult,
                     check_hypotheses, extract_multipliers, minimize,
                     phase_optimum)
from .tws import ShootBlowUpError, first_integral_residual, ode_residual, shoot
from .surface import SurfaceSample, check_properties, sweep

__version__ = "0.1.0"

__all__ = [
    "Grid", "SampledField", "derivative", "second_derivative", "integrate",
    "PairState", "ConstraintTargets", "Violation", "validate", "reconstruct_phase",
    "FunctionalReport", "g_weight", "momentum", "classical_momentum", "mass",
    "energy", "energy_gradient", "coercivity_check", "report",
    "rearrange_decreasing", "symmetrize", "check_hardy_littlewood",
    "check_polya_szego", "check_two_bump_gap", "SymmetrizationError",
    "ScalarSoliton", "build_scalar", "scalar_energy", "scalar_momentum_of_speed",
    "speed_of_momentum",
    "MinimizeConfig", "SolveResult", "phase_optimum", "minimize",
    "extract_multipliers", "check_hypotheses", "PhaseEliminationError",
    "ode_residual", "first_integral_residual", "shoot", "ShootBlowUpError",
    "SurfaceSample", "sweep", "check_properties",
]
