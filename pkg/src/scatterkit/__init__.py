"""Stationary scattering states of solvable 1D potentials and their overlaps.

Units are fixed at hbar = 1 and m = 1 (the radial routines use m = 1/2).
"""

from scatterkit.potentials import Potential, make_potential, evaluate, parse_potential
from scatterkit.states import (
    ScatteringCoefficients,
    coefficients,
    delta_coefficients,
    eval_wavefunction,
    inside_wavenumber,
    sech2_coefficients,
    solve_matching_system,
    square_well_coefficients,
)
from scatterkit.overlap import WindowSpec, overlap_from_boundary, overlap_window, regularized_overlap
from scatterkit.delta import delta_report, delta_term_1d, delta_term_radial, delta_term_square_well
from scatterkit.oracle import cesaro_delta_extract, quad_overlap, radial_ode_solve
from scatterkit.wavepacket import gaussian_profile, norm_at_time, norm_drift_bound

__all__ = [
    "Potential",
    "make_potential",
    "evaluate",
    "parse_potential",
    "ScatteringCoefficients",
    "coefficients",
    "delta_coefficients",
    "eval_wavefunction",
    "inside_wavenumber",
    "sech2_coefficients",
    "solve_matching_system",
    "square_well_coefficients",
    "WindowSpec",
    "overlap_from_boundary",
    "overlap_window",
    "regularized_overlap",
    "delta_report",
    "delta_term_1d",
    "delta_term_radial",
    "delta_term_square_well",
    "cesaro_delta_extract",
    "quad_overlap",
    "radial_ode_solve",
    "gaussian_profile",
    "norm_at_time",
    "norm_drift_bound",
]

__version__ = "0.1.0"
