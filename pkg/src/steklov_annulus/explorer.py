"""Normalized first eigenvalue over the rotationally symmetric densities of a fixed annulus.

Every result here is a statement *within the rotationally symmetric family*
(constant density on each circle) at fixed modulus T; nothing is claimed
about maximality over all conformal metrics.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .family import T1, disk_branch_sigma, tilde_T
from .galerkin import FourierDensity, build_system, solve_generalized
from .numerics import hybrid_root
from .spectrum import SCHEMA_VERSION, Branch, sigma_mode, sigma_radial

SCOPE = "within the rotationally symmetric family"
DEFAULT_Q_GRID = np.logspace(-2.0, 2.0, 400)


def _branches(T: float, q: float, scale: float = 1.0) -> tuple[float, float]:
    rho1, rho2 = scale * q, scale
    return sigma_radial(T, rho1, rho2), sigma_mode(1, T, rho1, rho2, Branch.MINUS)


def sigma1_bar(T: float, q: float, scale: float = 1.0) -> float:
    """``sigma_1 * |rho|_{L^1}`` for densities ``(scale*q, scale)`` on the annulus of modulus T."""
    if not (T > 0 and q > 0 and scale > 0):
        raise DomainError(f"T, q and scale must be positive, got {T}, {q}, {scale}")
    return min(_branches(T, q, scale)) * 2.0 * math.pi * scale * (q + 1.0)


@dataclass(frozen=True)
class QProfile:
    T: float
    q: np.ndarray
    sigma1: np.ndarray
    sigma1_bar: np.ndarray
    branch: tuple[str, ...]
    crossings: tuple[float, ...]
    argmax_q: float
    max_value: float
    maximizers: tuple[float, ...]
    scope: str = SCOPE

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["q", "branch", "sigma1", "sigma1_bar"])
        for q, b, s, sb in zip(self.q, self.branch, self.sigma1, self.sigma1_bar):
            w.writerow([repr(float(q)), b, repr(float(s)), repr(float(sb))])
        return buf.getvalue()

    def summary(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "scope": self.scope,
            "T": self.T,
            "crossings": list(self.crossings),
            "argmax_q": self.argmax_q,
            "max_value": self.max_value,
            "maximizers": list(self.maximizers),
        }


def scan_q(T: float, q_grid=None) -> QProfile:
    """Tabulate ``sigma1_bar(T, q)`` and locate the branch crossings and the maximum.

    The profile is the minimum of two smooth branches, so besides grid points
    the refined crossing points are also maximum candidates.
    """
    q = np.asarray(DEFAULT_Q_GRID if q_grid is None else q_grid, dtype=float)
    if q.ndim != 1 or q.size < 2 or np.any(q <= 0) or np.any(np.diff(q) <= 0):
        raise DomainError("q_grid must be a sorted 1-D array of positive values")
    if not T > 0:
        raise DomainError(f"T must be positive, got {T!r}")

    pairs = [_branches(T, float(x)) for x in q]
    gap = np.array([r - m for r, m in pairs])
    sig = np.array([min(p) for p in pairs])
    bar = sig * 2.0 * math.pi * (q + 1.0)
    branch = tuple("radial" if r <= m else "mode-1" for r, m in pairs)

    def rel_gap(s: float) -> float:
        r, m = _branches(T, math.exp(s))
        return (r - m) / r

    crossings = []
    for i in range(q.size - 1):
        if gap[i] == 0.0:
            crossings.append(float(q[i]))
        elif (gap[i] > 0) != (gap[i + 1] > 0) and gap[i + 1] != 0.0:
            res = hybrid_root(rel_gap, math.log(q[i]), math.log(q[i + 1]), ftol=1e-15)
            crossings.append(math.exp(res.root))
    if gap[-1] == 0.0:
        crossings.append(float(q[-1]))

    candidates = [(float(x), float(v)) for x, v in zip(q, bar)]
    candidates += [(c, sigma1_bar(T, c)) for c in crossings]
    max_value = max(v for _, v in candidates)
    maximizers = sorted({x for x, v in candidates if v >= max_value * (1.0 - 1e-12)})
    best = max(candidates, key=lambda c: (c[1], -c[0]))
    return QProfile(
        T=T,
        q=q,
        sigma1=sig,
        sigma1_bar=bar,
        branch=branch,
        crossings=tuple(crossings),
        argmax_q=best[0],
        max_value=max_value,
        maximizers=tuple(maximizers),
    )


@dataclass(frozen=True)
class BelowT1Report:
    T: float
    T1: float
    tilde_T: float
    crossing_exists: bool
    disk_branch_value: float
    two_pi: float
    verdict: str
    scope: str = SCOPE

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "scope": self.scope,
            "T": self.T,
            "T1": self.T1,
            "tilde_T": self.tilde_T,
            "crossing_exists": self.crossing_exists,
            "disk_branch_value": self.disk_branch_value,
            "two_pi": self.two_pi,
            "verdict": self.verdict,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def below_T1_report(T: float) -> BelowT1Report:
    """Status of the symmetric candidates for a modulus below ``T1``.

    No crossing exists since ``T_q >= T1`` for all q, so the only symmetric
    candidate is the map into the disk, with value ``4 pi tanh(T/2)``. For
    ``T <= ln 3`` that value is at most 2 pi, below the known lower bound on
    the conformal supremum, hence ``not maximal``. Between ln 3 and T1 the
    report is informational only.
    """
    t1 = T1()
    if not 0 < T < t1:
        raise DomainError(f"T must lie in (0, T1 = {t1:.12g}), got {T}")
    profile = scan_q(T)
    t_tilde = tilde_T()
    return BelowT1Report(
        T=T,
        T1=t1,
        tilde_T=t_tilde,
        crossing_exists=bool(profile.crossings),
        disk_branch_value=disk_branch_sigma(T),
        two_pi=2.0 * math.pi,
        verdict="not maximal" if T <= t_tilde else "inconclusive",
    )


def _galerkin_sigma1_bar(T: float, q: float, eps: float, m: int, N: int) -> float:
    rho0 = FourierDensity.cosine(q, eps, m)
    rhoT = FourierDensity.cosine(1.0, eps, m)
    spec = solve_generalized(build_system(rho0, rhoT, T, N), 2)
    return float(spec.eigenvalues[1]) * (rho0.total_mass() + rhoT.total_mass())


def galerkin_perturbation_probe(T: float, q: float, eps: float, m: int = 1, N: int | None = None) -> float:
    """Change of sigma1_bar when both densities are multiplied by ``1 + eps cos(m theta)``.

    Densities are ``(q, 1)`` before perturbation; the L^1 norm is unchanged for m >= 1.
    """
    if abs(eps) > 0.1:
        raise DomainError(f"|eps| must be <= 0.1, got {eps}")
    if not (T > 0 and q > 0) or m < 1:
        raise DomainError(f"need T, q > 0 and m >= 1, got {T}, {q}, {m}")
    N = max(24, 4 * m) if N is None else N
    return _galerkin_sigma1_bar(T, q, eps, m, N) - _galerkin_sigma1_bar(T, q, 0.0, m, N)


def perturbation_parts(T: float, q: float, eps: float, m: int = 1, N: int | None = None) -> tuple[float, float]:
    """Antisymmetric and symmetric parts ``(d(+eps) -+ d(-eps)) / 2`` of the probe."""
    plus = galerkin_perturbation_probe(T, q, eps, m, N)
    minus = galerkin_perturbation_probe(T, q, -eps, m, N)
    return 0.5 * (plus - minus), 0.5 * (plus + minus)
