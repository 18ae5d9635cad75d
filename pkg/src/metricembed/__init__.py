"""Distance geometry toolkit: Euclidean embeddability of finite metric
spaces and sampled scanners for embeddability of rescaled limit spaces at
a marked point."""

from .determinants import (
    CMValue,
    PsdReport,
    TauMatrix,
    cm_determinant,
    cm_value,
    psd_check,
    sch_determinant,
    sch_value,
    simplex_volume_sq,
    tau_matrix,
)
from .embeddability import (
    EmbedVerdict,
    MinDimResult,
    Realization,
    Witness,
    blumenthal_basis_search,
    menger_check,
    min_embedding_dimension,
    realize_coordinates,
    schoenberg_check,
)
from .metric import FiniteMetricSpace, load_space, scale_metric, submatrix, validate_metric
from .pretangent import (
    BlumenthalReport,
    HomogeneousFunctional,
    NormalizingSequence,
    PseudometricMatrix,
    QuotientSpace,
    ScanReport,
    StabilityVerdict,
    TransferReport,
    blumenthal_sequence_scan,
    build_probe_battery,
    cm_functional,
    constant_sequence,
    delta_scale,
    epsilon_scale,
    liminf_scan,
    marked_family,
    metric_identification,
    mutual_stability,
    pseudometric_matrix,
    s_functional,
    scale_ladder,
    sch_functional,
    star_transform,
    theta,
    transfer_check,
    ultra_triangle_functional,
)
from .spaces import (
    CurveSpec,
    MarkedSpace,
    as_marked,
    freeze,
    make_euclidean_subset,
    make_snowflake,
    make_ultrametric,
    marked_space_from_config,
    perturbed_euclidean_space,
)

__version__ = "0.1.0"

__all__ = [
    "BlumenthalReport",
    "CMValue",
    "CurveSpec",
    "EmbedVerdict",
    "FiniteMetricSpace",
    "HomogeneousFunctional",
    "MarkedSpace",
    "MinDimResult",
    "NormalizingSequence",
    "PsdReport",
    "PseudometricMatrix",
    "QuotientSpace",
    "Realization",
    "ScanReport",
    "StabilityVerdict",
    "TauMatrix",
    "TransferReport",
    "Witness",
    "as_marked",
    "blumenthal_basis_search",
    "blumenthal_sequence_scan",
    "build_probe_battery",
    "cm_determinant",
    "cm_functional",
    "cm_value",
    "constant_sequence",
    "delta_scale",
    "epsilon_scale",
    "freeze",
    "liminf_scan",
    "load_space",
    "make_euclidean_subset",
    "make_snowflake",
    "make_ultrametric",
    "marked_family",
    "marked_space_from_config",
    "menger_check",
    "metric_identification",
    "min_embedding_dimension",
    "mutual_stability",
    "perturbed_euclidean_space",
    "psd_check",
    "pseudometric_matrix",
    "realize_coordinates",
    "s_functional",
    "scale_ladder",
    "scale_metric",
    "sch_determinant",
    "sch_functional",
    "sch_value",
    "schoenberg_check",
    "simplex_volume_sq",
    "star_transform",
    "submatrix",
    "tau_matrix",
    "theta",
    "transfer_check",
    "ultra_triangle_functional",
    "validate_metric",
]
