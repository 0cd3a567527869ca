"""Numerical laboratory for multidimensional quadratic Weyl sums and their maximal functions."""

__version__ = "0.1.0"

from .core import (TorusPoint, TorusShape, WeylParams, vinogradov_count, weyl_1d, weyl_dd,
                   weyl_generic, weyl_grid_x, weyl_rational_line)
from .diophantine import (LargeValueCertificate, Rational, best_approx, certify_large_value,
                          convergents, dist_to_int, genericity_margin)
from .arcs import fresnel_integral, gauss_sum, schmidt_min_sum, vaughan_decompose, weyl_upper_bound_L21
from .sweep import (SupResult, level_set_measure, locally_constant_check, lp_norm_of_maximal,
                    maximal_field, rect_family_count, strichartz_norm, sup_over_t)
from .constructions import (CounterexampleSpec, box_count, completion_sum, counterexample_ratio,
                            gtau_points, major_arc_family, prop41_lower)
from .errors import (CapacityError, CertificationFailure, ClaimViolationError, DomainError,
                     InvalidGridError, UsageError, WeylLabError)
