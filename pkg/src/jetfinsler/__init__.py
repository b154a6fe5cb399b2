"""Dual-path numerics for the jet-bundle geometry of the rheonomic
Berwald-Moor metric: a generic engine that differentiates its way from the
defining formulas, a closed-form engine for every explicit tensor, and a
scenario-driven cross-validation CLI."""

from ._backend import available_backends, current_backend, use_backend
from .difftools import (
    COORD_NAMES,
    MAX_ORDER,
    JetTable,
    PartialSpec,
    Taylor,
    fd_jet,
    fd_partial,
    jet_eval,
    partial,
)
from .errors import (
    ConfigError,
    DegenerateCubic,
    DegenerateMetric,
    DomainError,
    JetFinslerError,
    NonPositiveMetric,
    OrderTooHigh,
    SingularChange,
    SingularDenominator,
    ZeroEinsteinConstant,
)
from .jetspace import (
    CubicForm,
    DTensorBundle,
    JetPoint,
    SpatialDiffeo,
    TemporalMetric,
    TimeReparam,
    kappa,
    transform_jet,
)
from .metric_engine import (
    CubicContractions,
    contract_cubic,
    finsler_F,
    metric_lower_generic,
    metric_upper_generic,
)
from .connection_engine import (
    CartanConnection,
    CurvatureSet,
    NonlinearConnection,
    PointContext,
    RicciSet,
    TorsionSet,
    adapted_derivative,
    cartan_generic,
    curvatures_generic,
    ricci_generic,
    scalar_curvature_generic,
    torsions_generic,
)
from .berwald_moor import (
    A_COEFFICIENTS,
    bm_C,
    bm_S,
    bm_S_raised,
    bm_cartan,
    bm_curvatures,
    bm_metric,
    bm_ricci,
    bm_scalar_curvature,
    bm_torsions,
    closed_form_bundle,
)
from .field_theory import (
    ConservationReport,
    EinsteinBlocks,
    EMDerivatives,
    EMSet,
    StressEnergyMixed,
    conservation_residuals,
    einstein_blocks,
    em_covariant_derivatives,
    em_two_form,
    stress_energy_contracted,
    stress_energy_mixed,
)

__version__ = "0.1.0"
