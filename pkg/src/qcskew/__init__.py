"""qcskew: triangle-skew distortion and metric dilatation toolkit for planar maps.

Measures how a map distorts equilateral triangles (skew of the image vertex
triple), estimates the metric dilatation from circle images, provides the
closed-form conversions between the normalized linear map's stretch parameter,
its skew and its dilatation, verifies chain bounds on equilateral-lattice
tilings with exact arithmetic, and carries the analogous three-dimensional
constructions.
"""

__version__ = "0.1.0"

from .errors import (
    DegenerateTriangleError,
    DomainError,
    GridFormatError,
    MapSpecError,
    NonInjectiveImageError,
    QcskewError,
)
from .geometry import OMEGA, Disk, Triangle2, equilateral_from, geo_lemma_angle, rotate_about, skew
from .linear import K_of_sigma, extremal_directions, linear_skew, mu_from_skew, oracle_max_ratio
from .maps import (
    GridMap,
    PlanarMap,
    eval_map,
    grid_from_map,
    identity_map,
    load_grid_map,
    make_affine,
    make_radial_stretch,
    make_square_map,
    save_grid_map,
)
from .metrics import (
    SamplingPlan,
    dilatation_ratio,
    estimate_H,
    estimate_kf,
    estimate_skew_at,
    estimate_skew_sup,
    image_skew,
)

__all__ = [
    "OMEGA",
    "Disk",
    "Triangle2",
    "skew",
    "equilateral_from",
    "rotate_about",
    "geo_lemma_angle",
    "linear_skew",
    "mu_from_skew",
    "K_of_sigma",
    "extremal_directions",
    "oracle_max_ratio",
    "PlanarMap",
    "GridMap",
    "identity_map",
    "make_affine",
    "make_radial_stretch",
    "make_square_map",
    "load_grid_map",
    "save_grid_map",
    "grid_from_map",
    "eval_map",
    "SamplingPlan",
    "image_skew",
    "estimate_skew_sup",
    "estimate_skew_at",
    "dilatation_ratio",
    "estimate_H",
    "estimate_kf",
    "QcskewError",
    "DegenerateTriangleError",
    "DomainError",
    "NonInjectiveImageError",
    "GridFormatError",
    "MapSpecError",
    "__version__",
]
