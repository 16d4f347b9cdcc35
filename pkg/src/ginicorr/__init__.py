"""ginicorr: symmetric Gini correlation toolkit.

Robust correlation estimation built on spatial ranks: the symmetric Gini
correlation and its affine-invariant version, the elliptic k map linking
it to the linear correlation parameter, influence-function asymptotic
variances for four competing estimators, seeded elliptical samplers, and
a Monte Carlo harness reproducing the published efficiency and RMSE
studies.
"""

__version__ = "0.1.0"

from ._backend import BACKEND_NAME
from .affine import (
    FixedPointConfig,
    FixedPointReport,
    affine_symmetric_gini,
    fit_gini_scatter,
    spd_sqrt,
)
from .asymptotics import (
    AsvEstimate,
    MomentSet,
    are,
    asv_corrected,
    asv_pearson,
    asv_regular_gini,
    asv_symmetric_gini,
    asv_tau_rho,
    influence_kendall,
    influence_pearson,
    influence_rho_g,
    pearson_asv_normal,
    regular_gini_asv_normal,
    tau_rho_asv_normal,
)
from .core import (
    BivariateSample,
    CorrelationValue,
    EllipticalModelSpec,
    EstimateEntry,
    EstimateReport,
    ScatterMatrix2,
    validate_sample,
)
from .elliptic import (
    KGrid,
    complete_elliptic_first,
    complete_elliptic_second,
    default_grid,
    invert_k,
    k_derivative,
    k_of_rho,
)
from .errors import (
    DegenerateColumn,
    DegenerateSample,
    DomainError,
    GinicorrError,
    LengthMismatch,
    NonConvergence,
    NonFiniteValue,
    NotPositiveDefinite,
    TooFewPoints,
)
from .estimators import (
    ExchangeabilityResult,
    GiniComponents,
    corrected_symmetric_gini,
    empirical_spatial_rank,
    exchangeability_test,
    gini_regular,
    kendall_tau,
    pearson,
    rho_from_tau,
    symmetric_gini,
    symmetric_gini_components,
)
from .sampling import RngStream, sample_elliptical
from .simulation import (
    AreRow,
    RmseExperimentConfig,
    RmseResultTable,
    RmseRow,
    are_table,
    k_oracle,
    rmse_experiment,
)

__all__ = [name for name in dir() if not name.startswith("_")]
