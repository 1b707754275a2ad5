"""Shape-based clustering of equal-length time series.

k-Shape and its fuzzy derivatives FCS+ and FCS++, the shape-based distance
they share, external validity indices and rank-based significance tests.
"""

from .clusterers import (
    ClusterConfig,
    ClusterResult,
    ConfigError,
    fcm,
    fcs_plus,
    fcs_plus_plus,
    kshape,
    run,
)
from .partition import fuzzy_memberships, harden, nearest_prototype
from .prototype import mean_prototype, shape_extract
from .sbd import SbdResult, fft_cross_correlate, sbd, sbd_matrix
from .series import Dataset, load_ucr, z_normalize
from .significance import friedman, wilcoxon_signed_rank
from .validity import (
    adjusted_rand,
    contingency,
    evaluate,
    nmi_max,
    pair_counts,
    rand_index,
    variation_of_information,
)

__version__ = "0.1.0"

__all__ = [
    "ClusterConfig",
    "ClusterResult",
    "ConfigError",
    "Dataset",
    "SbdResult",
    "adjusted_rand",
    "contingency",
    "evaluate",
    "fcm",
    "fcs_plus",
    "fcs_plus_plus",
    "fft_cross_correlate",
    "friedman",
    "fuzzy_memberships",
    "harden",
    "kshape",
    "load_ucr",
    "mean_prototype",
    "nearest_prototype",
    "nmi_max",
    "pair_counts",
    "rand_index",
    "run",
    "sbd",
    "sbd_matrix",
    "shape_extract",
    "variation_of_information",
    "wilcoxon_signed_rank",
    "z_normalize",
]
