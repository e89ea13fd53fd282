"""Numerical certificate that a map is a free boundary harmonic map of spectral index 1.

Checks performed on a (t, theta) grid:

* harmonicity, symbolically (every component is a combination of known
  harmonics) and by an independent 5-point finite-difference probe;
* boundary circles mapped to the unit sphere;
* the normal derivative parallel to the position vector on the boundary;
* the image inside the closed unit ball;
* positive map-induced densities on both circles;
* spectral index and multiplicity of the first eigenvalue;
* the conformality defect, zero only for the minimal catenoid.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, InconsistentInputError
from .family import FreeBoundaryMap, boundary_gradient_sq
from .spectrum import SCHEMA_VERSION, Branch, assemble_spectrum, sigma_mode, sigma_radial

CLOSED_FORM_TOL = 1e-10
FD_TOL = 1e-6
FD_STEP = 1e-4
CROSSING_TOL = 1e-11


@dataclass(frozen=True)
class AuditTolerances:
    harmonicity: float = CLOSED_FORM_TOL
    harmonicity_fd: float = FD_TOL
    boundary_norm: float = CLOSED_FORM_TOL
    parallelism: float = CLOSED_FORM_TOL
    interior_bound: float = 1e-12
    boundary_gradient: float = CLOSED_FORM_TOL


def _grid(fbm: FreeBoundaryMap, grid: tuple[int, int]) -> tuple[np.ndarray, np.ndarray]:
    n_t, n_theta = grid
    if n_t < 8 or n_theta < 8:
        raise DomainError(f"grid must be at least 8x8, got {grid}")
    t = np.linspace(0.0, fbm.T, n_t)
    theta = 2.0 * math.pi * np.arange(n_theta) / n_theta
    return np.meshgrid(t, theta, indexing="ij")


def _fd_laplacian(fbm: FreeBoundaryMap, t: np.ndarray, theta: np.ndarray, h: float) -> np.ndarray:
    f = fbm.evaluate
    return (f(t + h, theta) + f(t - h, theta) + f(t, theta + h) + f(t, theta - h) - 4.0 * f(t, theta)) / h**2


@dataclass(frozen=True)
class SpectralIndex:
    index: int
    multiplicity: int
    sigma1: float
    next_sigma: float

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "multiplicity": self.multiplicity,
            "sigma1": self.sigma1,
            "next_sigma": self.next_sigma,
        }


def spectral_index(fbm: FreeBoundaryMap, scale: float = 1.0) -> SpectralIndex:
    """Position and multiplicity of the map's eigenvalue in the Steklov spectrum.

    The spectrum is assembled at ``(T, scale*rho1, scale*rho2)``; the
    eigenvalue carried by the map scales by ``1/scale`` accordingly.
    """
    if not scale > 0:
        raise DomainError(f"scale must be positive, got {scale!r}")
    rho1, rho2 = scale * fbm.rho1, scale * fbm.rho2
    sigma = fbm.sigma1 / scale
    spec = assemble_spectrum(fbm.T, rho1, rho2, k_max=4)
    radial = sigma_radial(fbm.T, rho1, rho2)
    mode1 = sigma_mode(1, fbm.T, rho1, rho2, Branch.MINUS)
    gap = max(abs(radial - sigma), abs(mode1 - sigma)) / sigma
    if gap > CROSSING_TOL:
        raise InconsistentInputError(f"map eigenvalue is not at the crossing (relative gap {gap:.3g})")

    below = 0
    for value, mult, _ in spec.clusters()[1:]:
        if abs(value - sigma) <= CROSSING_TOL * max(1.0, sigma):
            # the next cluster must exist and lie strictly above
            following = [v for v in spec.sigmas if v > sigma * (1.0 + CROSSING_TOL)]
            if not following:
                spec = assemble_spectrum(fbm.T, rho1, rho2, k_max=below + mult + 1)
                following = [v for v in spec.sigmas if v > sigma * (1.0 + CROSSING_TOL)]
            return SpectralIndex(below + 1, mult, sigma, following[0])
        below += mult
    raise InconsistentInputError("map eigenvalue not found among the lowest eigenvalues")


def conformality_defect(fbm: FreeBoundaryMap, grid: tuple[int, int] = (32, 32)) -> float:
    """``max | |Psi_t|^2 - |Psi_theta|^2 | + |Psi_t . Psi_theta|`` over the grid."""
    t, theta = _grid(fbm, grid)
    dt, dth = fbm.d_dt(t, theta), fbm.d_dtheta(t, theta)
    defect = np.abs(np.sum(dt * dt, -1) - np.sum(dth * dth, -1)) + np.abs(np.sum(dt * dth, -1))
    return float(defect.max())


@dataclass
class AuditReport:
    residuals: dict[str, float]
    tolerances: dict[str, float]
    densities: tuple[float, float]
    spectral_index: SpectralIndex | None
    conformality_defect: float
    nondegenerate: bool
    checks: dict[str, bool] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "passed": self.passed,
            "residuals": self.residuals,
            "tolerances": self.tolerances,
            "densities": {"t0": self.densities[0], "tT": self.densities[1]},
            "densities_positive": [d > 0 for d in self.densities],
            "spectral_index": None if self.spectral_index is None else self.spectral_index.to_dict(),
            "conformality_defect": self.conformality_defect,
            "nondegenerate": self.nondegenerate,
            "checks": self.checks,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def audit_free_boundary(
    fbm: FreeBoundaryMap,
    grid: tuple[int, int] = (32, 32),
    tolerances: AuditTolerances = AuditTolerances(),
) -> AuditReport:
    t, theta = _grid(fbm, grid)
    psi = fbm.evaluate(t, theta)
    dt = fbm.d_dt(t, theta)
    dth = fbm.d_dtheta(t, theta)

    # c1(-1 + k t) is linear; c2 phi(t) cos/sin(theta) is harmonic iff phi'' = phi, whose solution
    # with the same end values is phi(0) sinh(T-t)/sinh T + phi(T) sinh t/sinh T (no cancellation)
    T = fbm.T
    denom = -np.expm1(-2.0 * T)
    w0 = np.exp(-t) * -np.expm1(-2.0 * (T - t)) / denom
    wT = np.exp(t - T) * -np.expm1(-2.0 * t) / denom
    phi_ode = fbm.phi(0.0) * w0 + fbm.phi(T) * wT
    harmonicity = float(np.abs(fbm.c2 * (phi_ode - fbm.phi(t))).max())

    interior = (slice(1, -1), slice(None))
    harmonicity_fd = float(np.abs(_fd_laplacian(fbm, t[interior], theta[interior], FD_STEP)).max())

    norms = np.linalg.norm(psi, axis=-1)
    boundary_norm = float(max(np.abs(norms[0] - 1.0).max(), np.abs(norms[-1] - 1.0).max()))

    def perp(i: int) -> float:
        p, d = psi[i], dt[i]
        radial_part = np.sum(p * d, -1, keepdims=True) * p
        return float(np.linalg.norm(d - radial_part, axis=-1).max())

    parallelism = max(perp(0), perp(-1))
    interior_bound = float(max(norms[interior].max() - 1.0, 0.0))

    # boundary gradient: closed form against the derivative fields, |dPsi|_flat^2 = rho_i^2 |dPsi|_g^2
    grad_sq = np.sum(dt * dt, -1) + np.sum(dth * dth, -1)
    grad_gap = float(max(
        abs(grad_sq[0].max() / fbm.rho1**2 - boundary_gradient_sq(fbm, "t=0")),
        abs(grad_sq[-1].max() / fbm.rho2**2 - boundary_gradient_sq(fbm, "t=T")),
    ))
    nondegenerate = bool(grad_sq.min() > 0)

    densities = fbm.boundary_densities()
    try:
        index = spectral_index(fbm)
    except InconsistentInputError:
        index = None

    tol = tolerances
    residuals = {
        "harmonicity": harmonicity,
        "harmonicity_fd": harmonicity_fd,
        "boundary_norm": boundary_norm,
        "parallelism": parallelism,
        "interior_bound": interior_bound,
        "boundary_gradient": grad_gap,
    }
    tols = {name: getattr(tol, name) for name in residuals}
    checks = {name: bool(residuals[name] <= tols[name]) for name in residuals}
    checks["densities_positive"] = bool(min(densities) > 0)
    checks["nondegenerate"] = nondegenerate
    checks["spectral_index_1"] = index is not None and index.index == 1 and index.multiplicity == 3
    return AuditReport(
        residuals=residuals,
        tolerances=tols,
        densities=densities,
        spectral_index=index,
        conformality_defect=conformality_defect(fbm, grid),
        nondegenerate=nondegenerate,
        checks=checks,
    )
