"""Fisher-Rao geometry of the beta manifold and canonical moment coordinates.

The parameter quadrant of beta distributions carries the Fisher information
metric.  This package evaluates that metric and its derived objects
(determinant, geodesic equation coefficients, sectional curvature, exponential
and logarithm maps, distances, Frechet means), converts between raw and
canonical moment coordinates of measures on [0, 1], and embeds finite moment
sequences into a product of beta manifolds.
"""

from .canonical import (EPS_BOUNDARY, MAX_MOMENTS, CanonicalSequence,
                        HankelPair, MomentSequence, from_canonical, hankel,
                        jacobian_det_formula, moment_bounds,
                        moments_from_samples, to_canonical)
from .embedding import (MeanLine, moment_centroid, phi_map, project_to_line,
                        rho_distance)
from .errors import (BoundaryEscapeError, ConvergenceError, DomainError,
                     MomentBoundaryError)
from .frechet import ProductPoint, frechet_mean, product_frechet_mean
from .geodesy import (GeodesicPath, TangentVector, clt_limit_distance,
                      distance, exp_map, geodesic_rhs, log_map)
from .metric import (BetaPoint, ChristoffelCoeffs, MetricTensor, christoffel,
                     curvature_limit_k1, curvature_limit_k2, det_metric,
                     det_metric_lower_bound, det_metric_quadrature,
                     metric_tensor, sectional_curvature)
from .special import polygamma

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "BetaPoint", "MetricTensor", "ChristoffelCoeffs",
    "metric_tensor", "det_metric", "det_metric_lower_bound",
    "det_metric_quadrature", "christoffel", "sectional_curvature",
    "curvature_limit_k1", "curvature_limit_k2",
    "TangentVector", "GeodesicPath", "geodesic_rhs", "exp_map", "log_map",
    "distance", "clt_limit_distance",
    "ProductPoint", "frechet_mean", "product_frechet_mean",
    "MomentSequence", "CanonicalSequence", "HankelPair",
    "hankel", "moment_bounds", "to_canonical", "from_canonical",
    "jacobian_det_formula", "moments_from_samples",
    "MAX_MOMENTS", "EPS_BOUNDARY",
    "MeanLine", "project_to_line", "phi_map", "rho_distance",
    "moment_centroid",
    "polygamma",
    "DomainError", "MomentBoundaryError", "ConvergenceError",
    "BoundaryEscapeError",
]
