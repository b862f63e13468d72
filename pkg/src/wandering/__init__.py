"""Parabolic implosion toolkit: Fatou coordinates, Lavaurs maps and wandering
domains of polynomial skew-products."""
from .errors import NumericalError
from .poly_core import ParabolicMap, Polynomial, critical_points, parse_coeffs
from .fatou_coords import (FatouEvaluator, classify_basin, phi_attracting, psi_inverse,
                           psi_repelling)
from .lavaurs_engine import (LavaursMap, horn_multiplier_residue, horn_residue,
                             lavaurs_apply, lavaurs_convergence_check, lavaurs_fixed_point)
from .approx_fatou import ApproxCoordinate, FiberedMap
from .skew_dynamics import SkewSystem, find_wandering_seed, prop_key_check, wandering_orbit
from .param_search import complex_scan, real_root_search
from .raster import RasterJob, render

__version__ = "0.1.0"

__all__ = [
    "NumericalError",
    "ParabolicMap",
    "Polynomial",
    "critical_points",
    "parse_coeffs",
    "FatouEvaluator",
    "classify_basin",
    "phi_attracting",
    "psi_repelling",
    "psi_inverse",
    "LavaursMap",
    "lavaurs_apply",
    "lavaurs_convergence_check",
    "lavaurs_fixed_point",
    "horn_residue",
    "horn_multiplier_residue",
    "ApproxCoordinate",
    "FiberedMap",
    "SkewSystem",
    "prop_key_check",
    "wandering_orbit",
    "find_wandering_seed",
    "real_root_search",
    "complex_scan",
    "RasterJob",
    "render",
]
