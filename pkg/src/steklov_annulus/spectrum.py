"""Closed-form Steklov spectrum of the flat annulus [0, T] x S^1.

The boundary density is constant on each circle: ``rho1`` at t = 0 and
``rho2`` at t = T. Separating variables gives, for every Fourier mode
n >= 1, a 2x2 problem whose two roots are the ``minus`` and ``plus``
branches, each with multiplicity 2 (cos and sin). Mode 0 contributes the
constants (eigenvalue 0) and one radial eigenfunction, linear in t.

Eigenfunctions for n >= 2 are taken as ``cosh(nt) - (sigma rho1 / n) sinh(nt)``
times ``cos(n theta)`` / ``sin(n theta)``. Only n = 1 is written out in the
source derivation, so this extension is an interpretation; it is the unique
choice that satisfies the boundary condition at t = 0.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from enum import Enum

from .errors import DomainError
from .numerics import coth

SCHEMA_VERSION = "1.0"
CLUSTER_RTOL = 1e-12


class Branch(str, Enum):
    RADIAL_ZERO = "radial-zero"
    RADIAL = "radial"
    MINUS = "minus"
    PLUS = "plus"


_BRANCH_ORDER = {Branch.RADIAL_ZERO: 0, Branch.RADIAL: 1, Branch.MINUS: 2, Branch.PLUS: 3}


def _check_positive(**kwargs: float) -> None:
    for name, value in kwargs.items():
        if not (value > 0 and math.isfinite(value)):
            raise DomainError(f"{name} must be positive and finite, got {value!r}")


@dataclass(frozen=True)
class ConformalAnnulus:
    T: float

    def __post_init__(self) -> None:
        _check_positive(T=self.T)


@dataclass(frozen=True)
class BoundaryDensityPair:
    rho1: float
    rho2: float

    def __post_init__(self) -> None:
        _check_positive(rho1=self.rho1, rho2=self.rho2)

    @property
    def q(self) -> float:
        return self.rho1 / self.rho2


@dataclass(frozen=True)
class ModeEigenvalue:
    n: int
    branch: Branch
    sigma: float

    @property
    def multiplicity(self) -> int:
        return 1 if self.n == 0 else 2

    def sort_key(self) -> tuple[int, int]:
        return (self.n, _BRANCH_ORDER[self.branch])

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "branch": self.branch.value,
            "sigma": self.sigma,
            "multiplicity": self.multiplicity,
        }


def sigma_radial(T: float, rho1: float, rho2: float) -> float:
    """Lowest nonzero radial eigenvalue, (1/T)(1/rho1 + 1/rho2)."""
    _check_positive(T=T, rho1=rho1, rho2=rho2)
    return (1.0 / rho1 + 1.0 / rho2) / T


def _discriminant(n: int, T: float, rho1: float, rho2: float) -> float:
    # s^2 coth^2 - 4/(rho1 rho2) rewritten as a sum of two squares
    s = 1.0 / rho1 + 1.0 / rho2
    d = 1.0 / rho1 - 1.0 / rho2
    x = n * T
    csch_sq = 0.0 if x > 354.0 else 1.0 / math.sinh(x) ** 2
    return s * s * csch_sq + d * d


def sigma_mode(n: int, T: float, rho1: float, rho2: float, branch: Branch | str) -> float:
    """Eigenvalue of Fourier mode ``n >= 1`` on the ``minus`` or ``plus`` branch.

    The minus root is evaluated in rationalized form so that it keeps full
    relative accuracy when coth(nT) is close to 1.
    """
    branch = Branch(branch)
    if not isinstance(n, int) or n < 1:
        raise DomainError(f"mode n must be an integer >= 1, got {n!r}")
    _check_positive(T=T, rho1=rho1, rho2=rho2)
    s = 1.0 / rho1 + 1.0 / rho2
    c = coth(n * T)
    root = math.sqrt(_discriminant(n, T, rho1, rho2))
    if branch is Branch.PLUS:
        return 0.5 * n * (s * c + root)
    if branch is Branch.MINUS:
        return (2.0 * n / (rho1 * rho2)) / (s * c + root)
    raise DomainError(f"branch must be minus or plus for n >= 1, got {branch.value}")


def eigenvalue(mode_n: int, branch: Branch | str, T: float, rho1: float, rho2: float) -> float:
    branch = Branch(branch)
    if branch is Branch.RADIAL_ZERO:
        return 0.0
    if branch is Branch.RADIAL:
        return sigma_radial(T, rho1, rho2)
    return sigma_mode(mode_n, T, rho1, rho2, branch)


@dataclass(frozen=True)
class SteklovSpectrum:
    """Ordered spectrum, one entry per eigenvalue counted with multiplicity."""

    entries: tuple[ModeEigenvalue, ...]
    T: float
    rho1: float
    rho2: float
    k_max: int
    n_max: int

    @property
    def sigmas(self) -> list[float]:
        return [e.sigma for e in self.entries]

    def clusters(self, rtol: float = CLUSTER_RTOL) -> list[tuple[float, int, tuple[ModeEigenvalue, ...]]]:
        """Group numerically equal eigenvalues: ``(sigma, multiplicity, members)``.

        ``multiplicity`` counts entries of this (truncated) spectrum, so the
        last cluster may be incomplete.
        """
        out: list[list] = []
        for e in self.entries:
            if out and abs(e.sigma - out[-1][0]) <= rtol * max(1.0, e.sigma):
                out[-1][2].append(e)
            else:
                out.append([e.sigma, 0, [e]])
        return [(c[0], len(c[2]), tuple(c[2])) for c in out]

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "T": self.T,
            "rho1": self.rho1,
            "rho2": self.rho2,
            "k_max": self.k_max,
            "entries": [e.to_dict() for e in self.entries],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "branch", "sigma", "multiplicity"])
        for e in self.entries:
            w.writerow([e.n, e.branch.value, repr(e.sigma), e.multiplicity])
        return buf.getvalue()


def _order(modes: list[ModeEigenvalue]) -> list[ModeEigenvalue]:
    # sort by value, then reorder each numerically-tied cluster by (n, branch)
    modes = sorted(modes, key=lambda m: (m.sigma, m.sort_key()))
    out: list[ModeEigenvalue] = []
    cluster: list[ModeEigenvalue] = []
    for m in modes:
        if cluster and abs(m.sigma - cluster[0].sigma) > CLUSTER_RTOL * max(1.0, m.sigma):
            out.extend(sorted(cluster, key=ModeEigenvalue.sort_key))
            cluster = []
        cluster.append(m)
    out.extend(sorted(cluster, key=ModeEigenvalue.sort_key))
    return out


def assemble_spectrum(T: float, rho1: float, rho2: float, k_max: int) -> SteklovSpectrum:
    """Zero followed by the ``k_max`` smallest positive eigenvalues, with multiplicity.

    Modes are added while the minus branch of the next mode is not above the
    current ``k_max``-th value; since that branch increases with n and the plus
    branch dominates it, nothing omitted lies below the last entry returned.
    """
    if not isinstance(k_max, int) or k_max < 1:
        raise DomainError(f"k_max must be a positive integer, got {k_max!r}")
    _check_positive(T=T, rho1=rho1, rho2=rho2)

    modes = [ModeEigenvalue(0, Branch.RADIAL, sigma_radial(T, rho1, rho2))]
    n = 0
    while True:
        expanded = sorted(m.sigma for m in modes for _ in range(m.multiplicity))
        n += 1
        lowest_next = sigma_mode(n, T, rho1, rho2, Branch.MINUS)
        if len(expanded) >= k_max and lowest_next > expanded[k_max - 1]:
            break
        modes.append(ModeEigenvalue(n, Branch.MINUS, lowest_next))
        modes.append(ModeEigenvalue(n, Branch.PLUS, sigma_mode(n, T, rho1, rho2, Branch.PLUS)))

    positive: list[ModeEigenvalue] = []
    for m in _order(modes):
        positive.extend([m] * m.multiplicity)
    entries = (ModeEigenvalue(0, Branch.RADIAL_ZERO, 0.0), *positive[:k_max])
    return SteklovSpectrum(entries, T, rho1, rho2, k_max, n_max=n - 1)


def _radial_coefficient(mode: ModeEigenvalue, rho1: float) -> float:
    return mode.sigma * rho1 / mode.n


def eigenfunction_eval(
    mode: ModeEigenvalue, T: float, rho1: float, rho2: float, t: float, theta: float
) -> float | tuple[float, float]:
    """Evaluate the eigenfunction(s) of ``mode`` at ``(t, theta)``.

    Returns a float for mode 0 and the (cos, sin) pair ``(u2, u3)`` otherwise.
    """
    if not 0.0 <= t <= T:
        raise DomainError(f"t must lie in [0, {T}], got {t}")
    if mode.branch is Branch.RADIAL_ZERO:
        return 1.0
    if mode.branch is Branch.RADIAL:
        return -1.0 + mode.sigma * rho1 * t
    n = mode.n
    phi = math.cosh(n * t) - _radial_coefficient(mode, rho1) * math.sinh(n * t)
    return phi * math.cos(n * theta), phi * math.sin(n * theta)


def eigenfunction_dt(
    mode: ModeEigenvalue, T: float, rho1: float, rho2: float, t: float, theta: float
) -> float | tuple[float, float]:
    """Analytic t-derivative matching :func:`eigenfunction_eval`."""
    if not 0.0 <= t <= T:
        raise DomainError(f"t must lie in [0, {T}], got {t}")
    if mode.branch is Branch.RADIAL_ZERO:
        return 0.0
    if mode.branch is Branch.RADIAL:
        return mode.sigma * rho1
    n = mode.n
    dphi = n * (math.sinh(n * t) - _radial_coefficient(mode, rho1) * math.cosh(n * t))
    return dphi * math.cos(n * theta), dphi * math.sin(n * theta)
