"""The critical family T_q and its free boundary harmonic maps into the unit 3-ball.

For a density ratio ``q = rho1 / rho2`` there is a unique modulus ``T_q`` at
which the radial eigenvalue and the first-mode minus eigenvalue coincide,
giving a first eigenvalue of multiplicity 3. The three eigenfunctions then
assemble into a map ``(c1 u1, c2 u2, c2 u3)`` of the annulus sending both
boundary circles to the unit sphere: a section of a stretched catenoid.

Conventions used throughout: ``rho2 = 1`` and ``rho1 = q``. All normalized
quantities are invariant under rescaling the densities, so this is no loss
of generality.
"""

from __future__ import annotations

import csv
import functools
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DensityPositivityError,
    DomainError,
    InfeasibleError,
    NoCriticalClassError,
    RangeError,
    ResolutionError,
)
from .numerics import coth, coth_minus_one, hybrid_root
from .spectrum import SCHEMA_VERSION, Branch, sigma_mode, sigma_radial

Q_MIN, Q_MAX = 1e-6, 1e6
T_Q_TOL = 1e-12


def _check_q(q: float) -> None:
    if not (q > 0 and math.isfinite(q)):
        raise DomainError(f"q must be positive and finite, got {q!r}")


def crossing_rhs(T: float, q: float) -> float:
    """Right side of the fixed-point form ``T = B/2 (coth T + sqrt(coth^2 T - 4/B))``, B = (1+q)^2/q."""
    B = (1.0 + q) ** 2 / q
    c = coth(T)
    # coth^2 - 4/B = (coth^2 - 1) + ((1-q)/(1+q))^2, both terms nonnegative
    excess = coth_minus_one(T) * (c + 1.0) + ((1.0 - q) / (1.0 + q)) ** 2
    return 0.5 * B * (c + math.sqrt(excess))


@dataclass(frozen=True)
class CriticalClass:
    q: float
    T_q: float
    residual: float

    @property
    def sigma1(self) -> float:
        """Common value of the radial and first-mode eigenvalues, with rho2 = 1."""
        return (1.0 + self.q) / (self.q * self.T_q)

    def crossing_residual(self) -> float:
        """Relative gap between the two crossing eigenvalues at (T_q, q, 1)."""
        radial = sigma_radial(self.T_q, self.q, 1.0)
        mode1 = sigma_mode(1, self.T_q, self.q, 1.0, Branch.MINUS)
        return abs(radial - mode1) / radial

    def to_dict(self) -> dict:
        return {"q": self.q, "T_q": self.T_q, "sigma1": self.sigma1, "residual": self.residual}


def tq_bracket(q: float) -> tuple[float, float]:
    B = (1.0 + q) ** 2 / q
    return max(0.5 * B, q + 1.0 / q), B


@functools.lru_cache(maxsize=4096)
def solve_Tq(q: float, tol: float = T_Q_TOL) -> CriticalClass:
    """Solve the crossing equation for the critical modulus ``T_q``.

    The root is bracketed by the a-priori bounds
    ``max((1+q)^2/(2q), q + 1/q) < T_q < (1+q)^2/q``, on which
    ``T - crossing_rhs(T)`` is strictly increasing.
    """
    _check_q(q)
    if not tol > 0:
        raise DomainError(f"tol must be positive, got {tol!r}")
    # the equation only depends on the unordered pair {q, 1/q}; solve on q >= 1 for symmetry
    qq = q if q >= 1.0 else 1.0 / q
    lo, hi = tq_bracket(qq)
    res = hybrid_root(lambda T: T - crossing_rhs(T, qq), lo, hi, xtol=0.0, ftol=tol)
    if res.residual > tol:
        raise ArithmeticError(f"T_q residual {res.residual:g} exceeds tol {tol:g} at q={q}")
    return CriticalClass(q=q, T_q=res.root, residual=res.residual)


def T1() -> float:
    """Minimum of ``T_q`` over q, attained at q = 1 (twice the root of t = coth t)."""
    return solve_Tq(1.0).T_q


@dataclass(frozen=True)
class Inequality:
    name: str
    lhs: float
    rhs: float
    margin: float

    @property
    def holds(self) -> bool:
        return self.margin > 0


@dataclass(frozen=True)
class TqBounds:
    q: float
    T_q: float
    checks: tuple[Inequality, ...]

    @property
    def all_hold(self) -> bool:
        return all(c.holds for c in self.checks)


def verify_Tq_bounds(q: float) -> TqBounds:
    """Check the a-priori inequalities on ``T_q``, with margins computed cancellation-free."""
    cc = solve_Tq(q)
    T = cc.T_q
    half_B = (1.0 + q) ** 2 / (2.0 * q)
    c = coth(T)
    checks = (
        Inequality("half_B < half_B*coth(T_q)", half_B, half_B * c, half_B * coth_minus_one(T)),
        Inequality("half_B*coth(T_q) < T_q", half_B * c, T, T - half_B * c),
        Inequality("T_q < (1+q)^2/q", T, 2.0 * half_B, 2.0 * half_B - T),
        Inequality("T_q > q + 1/q", q + 1.0 / q, T, T - (q + 1.0 / q)),
        Inequality(
            "coth(T_q) < 1 + q/(1+q)^2",
            c,
            1.0 + q / (1.0 + q) ** 2,
            q / (1.0 + q) ** 2 - coth_minus_one(T),
        ),
    )
    return TqBounds(q, T, checks)


def _one_minus_k(q: float, T: float) -> float:
    # k = sigma1 * rho1 = (1+q)/T_q
    return (T - (1.0 + q)) / T


def _phi_end(one_minus_k: float, k: float, T: float) -> float:
    # cosh T - k sinh T = ((1-k) e^T + (1+k) e^{-T}) / 2
    return 0.5 * (one_minus_k * math.exp(T) + (1.0 + k) * math.exp(-T))


def b_of_q(q: float) -> float:
    """Profile value ``cosh(T_q) - sigma1 rho1 sinh(T_q)`` at the far circle.

    For q > 1 the direct expression cancels catastrophically as T_q grows
    (T_q approaches 1 + q), so it is evaluated as ``1 / b(1/q)``, which is
    exact because T_q solves ``q T^2/(1+q)^2 - T coth T + 1 = 0``.
    """
    _check_q(q)
    if q > 1.0:
        return 1.0 / b_of_q(1.0 / q)
    T = solve_Tq(q).T_q
    k = (1.0 + q) / T
    return _phi_end(_one_minus_k(q, T), k, T)


def b_of_q_reciprocal(q: float) -> float:
    """Independent evaluation ``1 / (T_q sinh(T_q)/(1+q) - cosh(T_q)/q)``."""
    _check_q(q)
    T = solve_Tq(q).T_q
    # factor out cosh to stay finite for large T_q
    return 1.0 / (math.cosh(T) * (T * math.tanh(T) / (1.0 + q) - 1.0 / q))


@dataclass(frozen=True)
class MapCoefficients:
    c1: float
    c2: float
    k: float

    def to_dict(self) -> dict:
        return {"c1": self.c1, "c2": self.c2, "k": self.k}


def solve_coefficients(q: float) -> MapCoefficients:
    """Coefficients putting both boundary circles on the unit sphere.

    Away from q = 1 they solve ``c1^2 + c2^2 = 1`` and
    ``c1^2 q^2 + c2^2 b(q)^2 = 1``. At q = 1 the two equations coincide; the
    member picked there is the conformal one, ``c2 = k``, which is the
    minimal critical catenoid.
    """
    _check_q(q)
    T = solve_Tq(q).T_q
    k = (1.0 + q) / T
    if q == 1.0:
        return MapCoefficients(c1=math.sqrt((1.0 - k) * (1.0 + k)), c2=k, k=k)
    a2 = q * q
    b2 = b_of_q(q) ** 2
    if not (a2 - 1.0) * (b2 - 1.0) < 0:
        raise InfeasibleError(f"no boundary coefficients at q={q}: a^2={a2}, b^2={b2}")
    c2_sq = (1.0 - a2) / (b2 - a2)
    return MapCoefficients(c1=math.sqrt(1.0 - c2_sq), c2=math.sqrt(c2_sq), k=k)


@dataclass(frozen=True)
class Profile:
    """Radial profile ``phi = cosh t - k sinh t`` with ``phi(0) = 1``, ``k = (1+q)/T_q``.

    Stored as ``scale * ((1-j) e^s + (1+j) e^-s) / 2``. For q <= 1, ``s = t`` and
    ``j = k``. For q > 1, ``1 - k`` is exponentially small and cannot be formed
    accurately, so the profile is read off the reversed annulus instead:
    ``phi_q(t) = b(q) phi_{1/q}(T - t)``, with ``j = (1 + 1/q)/T_q``.
    """

    T: float
    one_minus_j: float
    one_plus_j: float
    scale: float = 1.0
    reversed: bool = False

    @classmethod
    def for_class(cls, q: float, T: float) -> Profile:
        if q > 1.0:
            p = 1.0 / q
            return cls(T, _one_minus_k(p, T), 1.0 + (1.0 + p) / T, b_of_q(q), True)
        return cls(T, _one_minus_k(q, T), 1.0 + (1.0 + q) / T)

    def _s(self, t):
        t = np.asarray(t, dtype=float)
        return self.T - t if self.reversed else t

    def value(self, t):
        s = self._s(t)
        return 0.5 * self.scale * (self.one_minus_j * np.exp(s) + self.one_plus_j * np.exp(-s))

    def derivative(self, t):
        s = self._s(t)
        d = 0.5 * self.scale * (self.one_minus_j * np.exp(s) - self.one_plus_j * np.exp(-s))
        return -d if self.reversed else d

    def gradient_integral(self) -> float:
        """``int_0^T (phi'^2 + phi^2) dt = scale^2 ((1-j)^2 (e^2T - 1) - (1+j)^2 (e^-2T - 1)) / 4``."""
        e_plus = math.expm1(2.0 * self.T)
        e_minus = -math.expm1(-2.0 * self.T)
        return 0.25 * self.scale**2 * (self.one_minus_j**2 * e_plus + self.one_plus_j**2 * e_minus)


@dataclass(frozen=True)
class FreeBoundaryMap:
    """Rotationally symmetric map ``(c1 u1, c2 phi cos, c2 phi sin)`` on [0, T] x S^1.

    ``u1 = -1 + k t`` and ``phi = cosh t - k sinh t``, with ``k = sigma1 rho1``.
    The third component is the sine eigenfunction, so the image is a surface
    of revolution about the first axis.
    """

    T: float
    q: float
    sigma1: float
    coefficients: MapCoefficients
    rho1: float = 1.0
    rho2: float = 1.0
    profile: Profile = field(default=None, repr=False)

    @property
    def c1(self) -> float:
        return self.coefficients.c1

    @property
    def c2(self) -> float:
        return self.coefficients.c2

    @property
    def k(self) -> float:
        return self.coefficients.k

    def phi(self, t):
        return self.profile.value(t)

    def dphi(self, t):
        return self.profile.derivative(t)

    def axial(self, t):
        return self.c1 * (-1.0 + self.k * np.asarray(t, dtype=float))

    def evaluate(self, t, theta) -> np.ndarray:
        """Image points, shape ``broadcast(t, theta).shape + (3,)``."""
        t, theta = np.broadcast_arrays(np.asarray(t, float), np.asarray(theta, float))
        r = self.c2 * self.phi(t)
        return np.stack([self.axial(t), r * np.cos(theta), r * np.sin(theta)], axis=-1)

    def d_dt(self, t, theta) -> np.ndarray:
        t, theta = np.broadcast_arrays(np.asarray(t, float), np.asarray(theta, float))
        dr = self.c2 * self.dphi(t)
        return np.stack([np.full(t.shape, self.c1 * self.k), dr * np.cos(theta), dr * np.sin(theta)], axis=-1)

    def d_dtheta(self, t, theta) -> np.ndarray:
        t, theta = np.broadcast_arrays(np.asarray(t, float), np.asarray(theta, float))
        r = self.c2 * self.phi(t)
        return np.stack([np.zeros(t.shape), -r * np.sin(theta), r * np.cos(theta)], axis=-1)

    def boundary_densities(self) -> tuple[float, float]:
        """Map-induced densities ``sqrt(2) sigma1 / |dPsi|_g`` on the circles t = 0 and t = T."""
        return tuple(
            math.sqrt(2.0) * self.sigma1 / math.sqrt(boundary_gradient_sq(self, which))
            for which in ("t=0", "t=T")
        )

    def energy_closed_form(self) -> float:
        """``2E = int |dPsi|^2 dt dtheta`` from the antiderivatives of cosh 2t and sinh 2t."""
        k = self.k
        profile = self.profile.gradient_integral()
        return 2.0 * math.pi * (self.c1**2 * k * k * self.T + self.c2**2 * profile)

    def to_dict(self) -> dict:
        rho_0, rho_T = self.boundary_densities()
        return {
            "schema_version": SCHEMA_VERSION,
            "T": self.T,
            "q": self.q,
            "sigma1": self.sigma1,
            "c1": self.c1,
            "c2": self.c2,
            "k": self.k,
            "b": b_of_q(self.q),
            "density_t0": rho_0,
            "density_tT": rho_T,
            "energy": self.energy_closed_form(),
            "normalized_sigma1": normalized_sigma1(self.q),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def map_for_q(q: float) -> FreeBoundaryMap:
    """Free boundary map of the critical class with density ratio ``q``."""
    cc = solve_Tq(q)
    coeffs = solve_coefficients(q)
    fbm = FreeBoundaryMap(
        T=cc.T_q,
        q=q,
        sigma1=cc.sigma1,
        coefficients=coeffs,
        rho1=q,
        rho2=1.0,
        profile=Profile.for_class(q, cc.T_q),
    )
    densities = fbm.boundary_densities()
    if not min(densities) > 0:
        raise DensityPositivityError(f"nonpositive boundary density {densities} at q={q}")
    return fbm


def invert_Tq(T: float, branch: str = "upper") -> float:
    """Density ratio q on the requested monotone branch with ``T_q = T``.

    ``upper`` searches q in [1, 1e6], ``lower`` searches q in [1e-6, 1].
    """
    if branch not in ("upper", "lower"):
        raise DomainError(f"branch must be 'upper' or 'lower', got {branch!r}")
    t1 = T1()
    if not T >= t1 - 1e-9:
        raise NoCriticalClassError(
            f"no rotationally symmetric critical class below T1 = {t1:.12g} (got T = {T})"
        )
    if T <= t1:
        return 1.0
    if T > solve_Tq(Q_MAX).T_q:
        raise RangeError(f"T = {T} lies beyond the inversion range q <= {Q_MAX:g}")
    # T_q is increasing in q on [1, Q_MAX]; invert there and mirror for the lower branch
    res = hybrid_root(lambda s: solve_Tq(math.exp(s)).T_q - T, 0.0, math.log(Q_MAX), ftol=1e-13 * T)
    q = math.exp(res.root)
    return q if branch == "upper" else 1.0 / q


def build_map(T: float, branch: str = "upper") -> FreeBoundaryMap:
    """Free boundary map on the annulus of modulus ``T >= T1``.

    Raises :class:`NoCriticalClassError` below ``T1``.
    """
    return map_for_q(invert_Tq(T, branch))


def boundary_gradient_sq(fbm: FreeBoundaryMap, which: str) -> float:
    """``|dPsi|_g^2`` on a boundary circle: ``sigma1^2 + (c2 / rho_i)^2 phi(t_i)^2``."""
    if which in ("t=0", "0"):
        rho, phi = fbm.rho1, float(fbm.phi(0.0))
    elif which in ("t=T", "T"):
        rho, phi = fbm.rho2, float(fbm.phi(fbm.T))
    else:
        raise DomainError(f"which must be 't=0' or 't=T', got {which!r}")
    return fbm.sigma1**2 + (fbm.c2 / rho) ** 2 * phi**2


def density_distinct_threshold() -> float:
    """Modulus ``T_2`` from which on the two boundary densities are known to differ."""
    return solve_Tq(2.0).T_q


def density_equality_locus(q_grid) -> list[tuple[float, float]]:
    """Scan ``q b(q) - 1`` on ``q_grid``; returns ``(q, q b(q) - 1)`` pairs.

    Sign changes locate ratios where both circles carry the same map-induced
    density. No sharpness claim is attached to the scan.
    """
    return [(float(q), float(q) * b_of_q(float(q)) - 1.0) for q in q_grid]


def normalized_sigma1(q: float) -> float:
    """Normalized first eigenvalue ``2 pi (1+q)^2 / (q T_q)`` of the critical class."""
    _check_q(q)
    return 2.0 * math.pi * (1.0 + q) ** 2 / (q * solve_Tq(q).T_q)


def energy(fbm: FreeBoundaryMap, quadrature_points: int = 512) -> float:
    """``2E(Psi) = int |dPsi|^2 dt dtheta`` by Gauss-Legendre quadrature in t.

    The theta integral is exact (factor 2 pi) because ``|dPsi|^2`` does not
    depend on theta.
    """
    if quadrature_points < 16:
        raise ResolutionError(f"need at least 16 quadrature points, got {quadrature_points}")
    x, w = np.polynomial.legendre.leggauss(quadrature_points)
    t = 0.5 * fbm.T * (x + 1.0)
    integrand = (fbm.c1 * fbm.k) ** 2 + fbm.c2**2 * (fbm.dphi(t) ** 2 + fbm.phi(t) ** 2)
    return 2.0 * math.pi * 0.5 * fbm.T * float(np.dot(w, integrand))


def disk_branch_sigma(T: float) -> float:
    """Normalized eigenvalue ``4 pi tanh(T/2)`` of the symmetric map into the unit disk."""
    if not T > 0:
        raise DomainError(f"T must be positive, got {T!r}")
    return 4.0 * math.pi * math.tanh(0.5 * T)


def tilde_T() -> float:
    """Root of ``2 tanh(T/2) = 1``, i.e. ``2 artanh(1/2) = ln 3``."""
    return math.log(3.0)


FAMILY_COLUMNS = ("q", "T_q", "sigma1", "c1", "c2", "b", "normalized_sigma1", "density_ratio")


def family_row(q: float) -> dict:
    fbm = map_for_q(q)
    rho_0, rho_T = fbm.boundary_densities()
    return {
        "q": q,
        "T_q": fbm.T,
        "sigma1": fbm.sigma1,
        "c1": fbm.c1,
        "c2": fbm.c2,
        "b": b_of_q(q),
        "normalized_sigma1": normalized_sigma1(q),
        "density_ratio": rho_0 / rho_T,
    }


def family_csv(q_values) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(FAMILY_COLUMNS)
    for q in q_values:
        row = family_row(float(q))
        w.writerow([repr(float(row[c])) for c in FAMILY_COLUMNS])
    return buf.getvalue()
