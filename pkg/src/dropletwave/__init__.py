"""Reconstruction of wave-equation sources from single-point droplet traces.

The package covers the full pipeline: ball quadrature and interpolation,
the Newtonian-operator eigensystem on a spherical droplet, convolution-spline
time stepping for the Lippmann-Schwinger forward problem, the droplet-induced
field expansion, Riesz-basis recovery of the incident field, mollified
differentiation, and a config-driven scenario runner.
"""

from .expansion import (
    ExpansionTerm,
    expansion_W_N,
    expansion_term,
    first_arrival_time,
    synthesize_measurement,
)
from .forward import (
    InteriorHistory,
    LseOperator,
    exterior_field,
    scattered_field,
    solve_lse,
)
from .inversion import (
    MeasurementTrace,
    ReconstructedField,
    RieszCoefficients,
    SourceAssembly,
    assemble_source,
    choose_truncation,
    mollification_epsilon,
    mollified_derivative,
    mollified_second_derivative,
    reconstruct_V,
    riesz_coefficients,
)
from .quadrature import (
    BallQuadrature,
    InterpolationStencil,
    QuadratureRule1D,
    ball_quadrature,
    boundary_distance,
    gauss_legendre_rule,
    interpolate_ball,
    interpolation_stencil,
)
from .scenarios import (
    BUILTIN_SCENARIOS,
    ConfigError,
    RunReport,
    add_noise,
    relative_l2_error,
    run_scenario,
    validate_config,
)
from .sources import (
    SeparableSource,
    example_41_source,
    example_42_source,
    incident_field,
    manufactured_bump_source,
)
from .special import bessel_half, bessel_root, spherical_harmonic
from .spectrum import (
    Droplet,
    EigenMode,
    apply_newtonian,
    eigenfunction_value,
    make_mode,
    modes_l0,
    validate_eigensystem,
    validation_lattice,
)
from .splines import SplineBasis, build_spline_basis, history_depth, spline_weights

__version__ = "0.1.0"
