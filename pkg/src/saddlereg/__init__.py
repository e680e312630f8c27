"""Gradient descent with local linear regularization for escaping non-strict
saddle points, and analysis tools for the surrounding geometry: critical-point
classification, small-gradient regions, bifurcation continuation, basin
sampling, and regularization-error bounds."""

from .continuation import ContinuationPath, continuation_trace
from .critical import (
    LOCAL_MAX,
    LOCAL_MIN,
    NON_STRICT_OR_DEGENERATE,
    STRATUM_NEGATIVE,
    STRATUM_POSITIVE,
    STRATUM_ZERO,
    STRICT_SADDLE,
    CriticalPointReport,
    classify_eigenvalues,
    classify_point,
    find_critical_points,
    hessian_stratum,
)
from .linalg import (
    EigenDecomposition,
    NumericalError,
    fd_gradient,
    fd_hessian,
    spectral_norm,
    sym_eigen,
    third_directional,
)
from .mlp import (
    Dataset,
    MlpSpec,
    dataset_from_csv,
    dataset_to_csv,
    init_params,
    make_blobs,
    mlp_objective,
    pack_params,
    unpack_params,
)
from .objectives import (
    CorpusEntry,
    Objective,
    corpus,
    corpus_names,
    cubic_cone,
    cubic_valley,
    double_degenerate,
    get_objective,
    make_objective,
    make_regularized,
    monkey_line,
    quadratic_bowl,
)
from .optimizer import (
    MODE_PLAIN,
    MODE_REGULARIZED,
    STATUS_CONVERGED,
    STATUS_DIVERGED,
    STATUS_MAX_ITERS,
    STATUS_NUMERICAL_FAILURE,
    OptimizerConfig,
    RegularizationEvent,
    TrajectoryRecord,
    gd_step,
    reg_step,
    run_plain_gd,
    run_regularized_gd,
)
from .region import (
    ENTER,
    EXIT,
    TANGENT,
    RegionGrid,
    boundary_classify,
    check_assumption_separation,
    check_boundary_assumption,
    halfspace_check,
    theta_region,
)
from .sampling import (
    escape_fraction,
    milnor_sample,
    pl_error_check,
    psi_witness_check,
    run_gd_batch,
    sample_in_box,
    sample_in_region,
    stable_set_fraction,
)

__version__ = "0.1.0"

__all__ = [
    "ContinuationPath",
    "CorpusEntry",
    "CriticalPointReport",
    "Dataset",
    "EigenDecomposition",
    "ENTER",
    "EXIT",
    "LOCAL_MAX",
    "LOCAL_MIN",
    "MODE_PLAIN",
    "MODE_REGULARIZED",
    "MlpSpec",
    "NON_STRICT_OR_DEGENERATE",
    "NumericalError",
    "Objective",
    "OptimizerConfig",
    "RegionGrid",
    "RegularizationEvent",
    "STATUS_CONVERGED",
    "STATUS_DIVERGED",
    "STATUS_MAX_ITERS",
    "STATUS_NUMERICAL_FAILURE",
    "STRATUM_NEGATIVE",
    "STRATUM_POSITIVE",
    "STRATUM_ZERO",
    "STRICT_SADDLE",
    "TANGENT",
    "TrajectoryRecord",
    "boundary_classify",
    "check_assumption_separation",
    "check_boundary_assumption",
    "classify_eigenvalues",
    "classify_point",
    "continuation_trace",
    "corpus",
    "corpus_names",
    "cubic_cone",
    "cubic_valley",
    "dataset_from_csv",
    "dataset_to_csv",
    "double_degenerate",
    "escape_fraction",
    "fd_gradient",
    "fd_hessian",
    "find_critical_points",
    "gd_step",
    "get_objective",
    "halfspace_check",
    "hessian_stratum",
    "init_params",
    "make_blobs",
    "make_objective",
    "make_regularized",
    "milnor_sample",
    "mlp_objective",
    "monkey_line",
    "pack_params",
    "pl_error_check",
    "psi_witness_check",
    "quadratic_bowl",
    "reg_step",
    "run_gd_batch",
    "run_plain_gd",
    "run_regularized_gd",
    "sample_in_box",
    "sample_in_region",
    "spectral_norm",
    "stable_set_fraction",
    "sym_eigen",
    "theta_region",
    "third_directional",
    "unpack_params",
]
