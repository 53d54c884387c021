"""Continuous-variable teleportation of coherent squeezed states.

Characteristic-function model of the (ideal or lossy) Vaidman-Braunstein-Kimble
protocol with twin-beam and squeezed-Bell-type resources, closed-form and
numerical fidelities, quadrature moments, and the two resource optimizations.
"""

from .errors import (
    ComputeError,
    ConfigError,
    ConvergenceError,
    DomainError,
    PhaseConventionError,
)
from .units import db_to_natural, natural_to_db
from .states import (
    InputState,
    ResourceKind,
    ResourceSpec,
    chi_input,
    chi_resource,
    preset_resource,
)
from .channel import ChannelParams, chi_output, gamma
from .fidelity import (
    DerivedQuantities,
    QuadratureRule,
    derived_quantities,
    fidelity_beta_independent,
    fidelity_closed_form,
    fidelity_numeric,
)
from .moments import (
    MomentDeviations,
    QuadratureMoments,
    deviations,
    input_moments,
    moments_numeric,
    output_moments,
    sigma,
)
from .optimize import (
    OptimizationResult,
    Procedure,
    argmin_sigma_bruteforce,
    delta_opt_fidelity,
    delta_opt_variance,
    delta_subopt,
    optimize_fidelity,
    optimize_variance,
)

__version__ = "0.1.0"

__all__ = [
    "ChannelParams",
    "ComputeError",
    "ConfigError",
    "ConvergenceError",
    "DerivedQuantities",
    "DomainError",
    "InputState",
    "MomentDeviations",
    "OptimizationResult",
    "PhaseConventionError",
    "Procedure",
    "QuadratureMoments",
    "QuadratureRule",
    "ResourceKind",
    "ResourceSpec",
    "argmin_sigma_bruteforce",
    "chi_input",
    "chi_output",
    "chi_resource",
    "db_to_natural",
    "delta_opt_fidelity",
    "delta_opt_variance",
    "delta_subopt",
    "derived_quantities",
    "deviations",
    "fidelity_beta_independent",
    "fidelity_closed_form",
    "fidelity_numeric",
    "gamma",
    "input_moments",
    "moments_numeric",
    "natural_to_db",
    "optimize_fidelity",
    "optimize_variance",
    "output_moments",
    "preset_resource",
    "sigma",
]
