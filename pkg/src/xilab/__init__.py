"""xilab: Monte Carlo laboratory for generalized non-intersection exponents
of planar random walks.

One walk must avoid the image of another under pointwise multiplication by
a set A; the survival probability decays polynomially and the package
estimates the decay exponent, evaluates every known closed form and bound
for it, and scans sampled walks for the associated exceptional points
(cut points, pivoting points) with dimension estimates.
"""

from .bounds import (CONJECTURE, THEOREM, PIVOT_ANGLE_THRESHOLD, SampledStrip,
                     StripSpec, extremal_distance_bounds, nfold_exact,
                     optimize_gamma, pivot_upper_bound, strip_crossing_lower_bound,
                     strip_family_bound, wedge_exponent, weak_pivot_conjecture)
from .collision import CollisionState, advance_and_check, track_pair
from .engine import (ExperimentConfig, SurvivalCurve, default_horizons, merge,
                     run_experiment, wilson_interval)
from .errors import (EmptyBracketError, FitError, InsufficientDataError,
                     StatisticalAbortError, ValidationError, XilabError)
from .exceptional import (ExceptionalScan, PivotReport, box_dimension,
                          find_exceptional_times, max_pivot_angle, pivot_scan)
from .fitting import (ExponentEstimate, SubadditivityBracket, fit_corrected,
                      fit_exponent, subadditive_bracket, transient_window)
from .lattice import (LatticePath, LatticePoint, HittingRecord, extend,
                      hitting_index, random_walk)
from .multiplier import (MultiplierSet, log_hausdorff_distance, parse_gaussian,
                         parse_set_spec)
from .rng import Stream

__version__ = "0.1.0"

__all__ = [
    "CONJECTURE", "THEOREM", "PIVOT_ANGLE_THRESHOLD",
    "CollisionState", "EmptyBracketError", "ExceptionalScan",
    "ExperimentConfig", "ExponentEstimate", "FitError", "HittingRecord",
    "InsufficientDataError", "LatticePath", "LatticePoint", "MultiplierSet",
    "PivotReport", "SampledStrip", "StatisticalAbortError", "Stream",
    "StripSpec", "SubadditivityBracket", "SurvivalCurve", "ValidationError",
    "XilabError", "advance_and_check", "box_dimension", "default_horizons",
    "extend", "extremal_distance_bounds", "find_exceptional_times",
    "fit_corrected", "fit_exponent", "hitting_index", "log_hausdorff_distance",
    "max_pivot_angle", "merge", "nfold_exact", "optimize_gamma",
    "parse_gaussian", "parse_set_spec", "pivot_scan", "pivot_upper_bound",
    "random_walk", "run_experiment", "strip_crossing_lower_bound",
    "strip_family_bound", "subadditive_bracket", "track_pair",
    "transient_window", "wedge_exponent", "weak_pivot_conjecture",
    "wilson_interval",
]
