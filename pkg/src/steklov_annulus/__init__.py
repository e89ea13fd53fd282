"""Steklov eigenvalues with boundary density on flat annuli and the critical catenoid family."""

from .errors import (
    ConvergenceError,
    DefinitenessError,
    DensityPositivityError,
    DomainError,
    InconsistentInputError,
    InfeasibleError,
    NoCriticalClassError,
    RangeError,
    ResolutionError,
)
from .spectrum import (
    Branch,
    BoundaryDensityPair,
    ConformalAnnulus,
    ModeEigenvalue,
    SteklovSpectrum,
    assemble_spectrum,
    eigenfunction_eval,
    sigma_mode,
    sigma_radial,
)
from .family import (
    CriticalClass,
    FreeBoundaryMap,
    MapCoefficients,
    b_of_q,
    boundary_gradient_sq,
    build_map,
    density_distinct_threshold,
    disk_branch_sigma,
    energy,
    map_for_q,
    normalized_sigma1,
    solve_coefficients,
    solve_Tq,
    tilde_T,
    verify_Tq_bounds,
)
from .galerkin import FourierDensity, build_system, convergence_study, dtn_block, solve_generalized
from .audit import audit_free_boundary, conformality_defect, spectral_index
from .explorer import below_T1_report, galerkin_perturbation_probe, scan_q, sigma1_bar

__version__ = "0.1.0"
