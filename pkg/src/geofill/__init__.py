"""geofill: adaptive multiquadric RBF imputation for scattered 2-D data.

Impute missing values at arbitrary locations from known samples.  Each
query is served by its 20 (configurable) nearest neighbours; the kernel's
shape factor adapts to the local point density through a fuzzy membership
and a five-level piecewise-linear schedule.  kNN-mean and adaptive-IDW
estimators are included as baselines, along with a seeded hold-out
benchmark that reports RMSE and wall-clock timings.

Typical use::

    from geofill import Config, SampleSet, build_index, impute_batch

    samples = SampleSet(xs, ys, values)
    index = build_index(samples)
    result = impute_batch(index, samples, queries, Config())
"""

from .baselines import (
    DEFAULT_POWER_LEVELS,
    PowerLevels,
    adaptive_power,
    aidw_batch,
    aidw_estimate,
    knn_batch,
    knn_estimate,
)
from .config import Config
from .dataio import (
    parse_ascii_grid,
    parse_targets,
    parse_xyz,
    write_imputed,
    write_xyz,
    write_xyz_arrays,
)
from .density import (
    DensityStatistic,
    ShapeFactorLevels,
    default_levels,
    density_statistic,
    density_summary,
    expected_density,
    five_level_schedule,
    fuzzy_membership,
    local_density,
    shape_factor,
)
from .errors import (
    CountMismatchError,
    DataError,
    DuplicatePointError,
    EmptyInputError,
    FractionOutOfRangeError,
    GeofillError,
    HeaderMissingFieldError,
    KTooLargeError,
    LengthMismatchError,
    MuOutOfRangeError,
    NonFiniteValueError,
    NonPositiveDensityError,
    NumericalError,
    ParseError,
    SingularSystemError,
    UnknownKindError,
)
from .evaluation import (
    EstimatorResult,
    EvaluationReport,
    HoldoutSplit,
    holdout_split,
    rmse,
    run_benchmark,
    synth_surface,
)
from .kdtree import SpatialIndex, build_index, query_knn
from .model import (
    BoundingBox,
    LocalNeighborhood,
    QueryPoint,
    SamplePoint,
    SampleSet,
    compute_bbox,
    euclidean_distance,
)
from .rbf import (
    DatasetProfile,
    ImputeOutcome,
    RbfCoefficients,
    RbfSystem,
    assemble_system,
    evaluate_interpolant,
    impute_batch,
    impute_point,
    mq_kernel,
    profile_dataset,
    solve_system,
)

__version__ = "0.1.0"

__all__ = [
    "BoundingBox",
    "Config",
    "CountMismatchError",
    "DEFAULT_POWER_LEVELS",
    "DataError",
    "DatasetProfile",
    "DensityStatistic",
    "DuplicatePointError",
    "EmptyInputError",
    "EstimatorResult",
    "EvaluationReport",
    "FractionOutOfRangeError",
    "GeofillError",
    "HeaderMissingFieldError",
    "HoldoutSplit",
    "ImputeOutcome",
    "KTooLargeError",
    "LengthMismatchError",
    "LocalNeighborhood",
    "MuOutOfRangeError",
    "NonFiniteValueError",
    "NonPositiveDensityError",
    "NumericalError",
    "ParseError",
    "PowerLevels",
    "QueryPoint",
    "RbfCoefficients",
    "RbfSystem",
    "SamplePoint",
    "SampleSet",
    "ShapeFactorLevels",
    "SingularSystemError",
    "SpatialIndex",
    "UnknownKindError",
    "adaptive_power",
    "aidw_batch",
    "aidw_estimate",
    "assemble_system",
    "build_index",
    "compute_bbox",
    "default_levels",
    "density_statistic",
    "density_summary",
    "euclidean_distance",
    "evaluate_interpolant",
    "expected_density",
    "five_level_schedule",
    "fuzzy_membership",
    "holdout_split",
    "impute_batch",
    "impute_point",
    "knn_batch",
    "knn_estimate",
    "local_density",
    "mq_kernel",
    "parse_ascii_grid",
    "parse_targets",
    "parse_xyz",
    "profile_dataset",
    "query_knn",
    "rmse",
    "run_benchmark",
    "shape_factor",
    "solve_system",
    "synth_surface",
    "write_imputed",
    "write_xyz",
    "write_xyz_arrays",
]
