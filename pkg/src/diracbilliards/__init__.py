"""Massless Dirac particle in a 1D box with a moving wall and in a
circular billiard with time-dependent radius: closed-form spectra and
eigenmodes for uniform wall motion, a shooting eigensolver for the radial
problem, and a method-of-lines propagator for arbitrary subluminal wall
laws, with norm/energy diagnostics and a driven-wall experiment runner.
"""

from .boundary import (
    BoundaryLaw,
    BreathingLaw,
    Grid,
    LinearLaw,
    Spinor2,
    StaticLaw,
    TabulatedLaw,
    boundary_position,
    boundary_velocity,
    rescaled_time,
    validate_horizon,
)
from .boxmodes import (
    Mode1D,
    StaticMode,
    eigenmode_1d,
    eigenvalue_1d,
    mode_1d,
    mode_solution_1d,
    quantization_residual_1d,
    static_mode_eval,
    system_residual_1d,
)
from .diskmodes import (
    DiskMode,
    RadialProfile,
    disk_eigenvalue_k0_closed,
    disk_eigenvalues,
    disk_mode,
    frobenius_exponent,
    hypergeometric_condition,
    mode_solution_disk,
    radial_rhs,
    radial_second_component,
    radial_shoot,
)
from .errors import (
    BilliardError,
    BracketError,
    DomainError,
    IncompleteSpectrum,
    InconsistentFormula,
    InvalidLaw,
    NumericalFailure,
    OutOfRange,
    SingularPoint,
    StabilityError,
    SuperluminalWall,
)
from .evolution import (
    Box1D,
    DiskRadial,
    EvolutionConfig,
    FieldState,
    ObservableSeries,
    box_mode_state,
    disk_mode_state,
    energy,
    evolve,
    norm,
    run_fermi,
    run_observables,
    static_box_state,
)
from .kernels import (
    HypParams,
    find_root_bracketed,
    hyp2f1,
    hyp2f1_halfgamma_oracle,
    integrate_adaptive,
)

__version__ = "0.1.0"
