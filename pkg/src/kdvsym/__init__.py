"""Invariant finite-difference schemes and benchmarks for the KdV equation."""

from .diagnostics import (
    ErrorReport,
    convergence_order,
    discrete_momentum,
    galilean_discrepancy,
    linf_error,
    rmse,
)
from .elliptic import complete_k, jacobi_cn, jacobi_sn
from .errors import (
    BlowupError,
    ConfigError,
    DomainError,
    ExtrapolationError,
    KdvError,
    SingularityError,
    SolverError,
    TanglingError,
)
from .harness import (
    CosineProfile,
    ExperimentReport,
    ExperimentSpec,
    load_config,
    preset_names,
    run_experiment,
    run_preset,
    soliton_count,
)
from .mesh import (
    ArcLengthInvariant,
    CurvatureNonInvariant,
    DirichletFromExact,
    MeshLayer,
    Periodic,
    equidistribute,
    lagrangian_advance,
    monitor_values,
)
from .projection import lagrange_interpolate, project_layer
from .schemes import (
    Adaptive,
    DifferenceInvariants,
    EvolutionProjection,
    Fixed,
    Lagrangian,
    SchemeConfig,
    SchemeKind,
    advance,
    compute_invariants,
    solve_banded_cyclic,
    step_explicit_six,
    step_implicit_six,
    step_momentum_conserving,
    step_standard_ftcs,
    step_trapezoidal_ten,
)
from .solutions import (
    AlgebraicSolitonBoosted,
    CnoidalBoosted,
    ComplexRootWave,
    Constant,
    DoubleSoliton,
    GalileanRamp,
    GroupElement,
    KdvSolution,
    Rational,
    SingularSnoidal,
    SingularSoliton,
    SingularTrig,
    SolitonBoosted,
    residual,
    transform,
)

__version__ = "0.1.0"
