"""Fourier-Galerkin solver for the annulus Steklov problem with theta-dependent densities.

The trial space is spanned by boundary traces ``1, cos(m theta), sin(m theta)``
(m <= N) on each of the two circles, normalized in L^2(d theta). Harmonic
extension decouples the Fourier modes, so the Dirichlet-to-Neumann stiffness
matrix is block diagonal with closed-form 2x2 blocks; the density only enters
the mass matrix, where it couples modes on the same circle.

Basis ordering (fixed, so that matrices are bit-reproducible)::

    0: const on circle t=0      1: const on circle t=T
    for m = 1..N, offset 2 + 4(m-1):
      +0: cos m on t=0   +1: cos m on t=T   +2: sin m on t=0   +3: sin m on t=T
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import DefinitenessError, DomainError
from .numerics import coth, csch
from .spectrum import SCHEMA_VERSION


@dataclass(frozen=True)
class FourierDensity:
    """``a0 + sum_m a_m cos(m theta) + b_m sin(m theta)`` on one boundary circle."""

    a0: float
    a: tuple[float, ...] = ()
    b: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        if len(self.a) != len(self.b):
            object.__setattr__(self, "b", tuple(self.b) + (0.0,) * (len(self.a) - len(self.b)))
            object.__setattr__(self, "a", tuple(self.a) + (0.0,) * (len(self.b) - len(self.a)))

    @classmethod
    def constant(cls, value: float) -> FourierDensity:
        return cls(float(value))

    @classmethod
    def cosine(cls, mean: float, eps: float, m: int) -> FourierDensity:
        """``mean * (1 + eps cos(m theta))``."""
        a = [0.0] * m
        a[m - 1] = mean * eps
        return cls(float(mean), tuple(a), (0.0,) * m)

    @property
    def M(self) -> int:
        return len(self.a)

    def __call__(self, theta):
        theta = np.asarray(theta, dtype=float)
        out = np.full(theta.shape, self.a0)
        for m, (am, bm) in enumerate(zip(self.a, self.b), start=1):
            out = out + am * np.cos(m * theta) + bm * np.sin(m * theta)
        return out

    def total_mass(self) -> float:
        """``int rho d theta``."""
        return 2.0 * math.pi * self.a0

    def is_positive(self) -> bool:
        n = max(4 * self.M, 1)
        theta = 2.0 * math.pi * np.arange(n) / n
        return bool(np.all(self(theta) > 0))

    def _cos_moment(self, p: int) -> float:
        # int rho cos(p theta) d theta
        p = abs(p)
        if p == 0:
            return 2.0 * math.pi * self.a0
        return math.pi * self.a[p - 1] if p <= self.M else 0.0

    def _sin_moment(self, p: int) -> float:
        # int rho sin(p theta) d theta
        if p == 0 or abs(p) > self.M:
            return 0.0
        # sin is odd in p
        return math.pi * self.b[abs(p) - 1] * (1.0 if p > 0 else -1.0)


def dtn_block(n: int, T: float) -> np.ndarray:
    """Dirichlet-to-Neumann matrix of Fourier mode ``n`` between the circles t=0 and t=T.

    Rows index the boundary values; entries give the outward normal derivative
    of the harmonic extension.
    """
    if not T > 0:
        raise DomainError(f"T must be positive, got {T!r}")
    if n < 0:
        raise DomainError(f"mode must be nonnegative, got {n}")
    if n == 0:
        return np.array([[1.0, -1.0], [-1.0, 1.0]]) / T
    c, s = coth(n * T), csch(n * T)
    return n * np.array([[c, -s], [-s, c]])


def _local_mass(rho: FourierDensity, N: int) -> np.ndarray:
    """Mass matrix on one circle, local order [const, cos1, sin1, cos2, sin2, ...]."""
    size = 2 * N + 1
    # (frequency, kind, normalization): kind 0 = cos, 1 = sin
    basis = [(0, 0, 1.0 / math.sqrt(2.0 * math.pi))]
    for m in range(1, N + 1):
        w = 1.0 / math.sqrt(math.pi)
        basis += [(m, 0, w), (m, 1, w)]
    out = np.zeros((size, size))
    C, S = rho._cos_moment, rho._sin_moment
    for i, (m, ki, wi) in enumerate(basis):
        for j in range(i, size):
            n, kj, wj = basis[j]
            if ki == 0 and kj == 0:
                v = 0.5 * (C(m - n) + C(m + n))
            elif ki == 1 and kj == 1:
                v = 0.5 * (C(m - n) - C(m + n))
            elif ki == 0:  # cos m * sin n
                v = 0.5 * (S(n + m) + S(n - m))
            else:  # sin m * cos n
                v = 0.5 * (S(m + n) + S(m - n))
            out[i, j] = out[j, i] = wi * wj * v
    return out


def _global_index(circle: int, m: int, kind: int) -> int:
    if m == 0:
        return circle
    return 2 + 4 * (m - 1) + 2 * kind + circle


def basis_labels(N: int) -> list[str]:
    labels = ["const@0", "const@T"]
    for m in range(1, N + 1):
        labels += [f"cos{m}@0", f"cos{m}@T", f"sin{m}@0", f"sin{m}@T"]
    return labels


@dataclass(frozen=True)
class GalerkinSystem:
    N: int
    T: float
    D: np.ndarray
    M: np.ndarray
    densities: tuple[FourierDensity, FourierDensity]

    @property
    def size(self) -> int:
        return self.D.shape[0]

    def constant_vector(self) -> np.ndarray:
        """Coefficients of the function equal to 1 on both circles."""
        v = np.zeros(self.size)
        v[0] = v[1] = math.sqrt(2.0 * math.pi)
        return v

    def to_csv(self, which: str = "D") -> str:
        mat = {"D": self.D, "M": self.M}[which]
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["", *basis_labels(self.N)])
        for label, row in zip(basis_labels(self.N), mat):
            w.writerow([label, *(repr(float(x)) for x in row)])
        return buf.getvalue()


def build_system(rho0: FourierDensity, rhoT: FourierDensity, T: float, N: int) -> GalerkinSystem:
    """Assemble stiffness and mass matrices for truncation ``N``."""
    if not T > 0:
        raise DomainError(f"T must be positive, got {T!r}")
    if N < max(rho0.M, rhoT.M, 1):
        raise DomainError(f"truncation N={N} must be >= 1 and >= the density order")
    for name, rho in (("t=0", rho0), ("t=T", rhoT)):
        if not rho.is_positive():
            raise DefinitenessError(f"density on circle {name} is not positive")

    size = 2 * (2 * N + 1)
    D = np.zeros((size, size))
    for m in range(N + 1):
        block = dtn_block(m, T)
        for kind in (0, 1) if m else (0,):
            idx = [_global_index(0, m, kind), _global_index(1, m, kind)]
            D[np.ix_(idx, idx)] = block

    M = np.zeros((size, size))
    local_order = [(0, 0)] + [(m, kind) for m in range(1, N + 1) for kind in (0, 1)]
    for circle, rho in enumerate((rho0, rhoT)):
        idx = [_global_index(circle, m, kind) for m, kind in local_order]
        M[np.ix_(idx, idx)] = _local_mass(rho, N)
    return GalerkinSystem(N=N, T=T, D=D, M=M, densities=(rho0, rhoT))


@dataclass(frozen=True)
class GeneralizedSpectrum:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    N: int
    T: float

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "T": self.T,
            "N": self.N,
            "entries": [{"index": i, "sigma": float(s)} for i, s in enumerate(self.eigenvalues)],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def solve_generalized(system: GalerkinSystem, k: int) -> GeneralizedSpectrum:
    """``k`` smallest eigenpairs of ``D v = sigma M v``, eigenvectors M-orthonormal.

    Reduces to a standard symmetric problem through the Cholesky factor of M.
    """
    if k < 1 or k > system.size:
        raise DomainError(f"k must lie in [1, {system.size}], got {k}")
    try:
        L = scipy.linalg.cholesky(system.M, lower=True)
    except np.linalg.LinAlgError as exc:
        raise DefinitenessError(f"mass matrix is not positive definite: {exc}") from exc
    X = scipy.linalg.solve_triangular(L, system.D, lower=True)
    A = scipy.linalg.solve_triangular(L, X.T, lower=True)
    A = 0.5 * (A + A.T)
    w, V = scipy.linalg.eigh(A, subset_by_index=[0, k - 1])
    vecs = scipy.linalg.solve_triangular(L.T, V, lower=False)
    return GeneralizedSpectrum(eigenvalues=w, eigenvectors=vecs, N=system.N, T=system.T)


@dataclass(frozen=True)
class ConvergenceRow:
    N: int
    sigmas: tuple[float, ...]
    differences: tuple[float, ...] | None


def convergence_study(
    rho0: FourierDensity, rhoT: FourierDensity, T: float, truncations, n_eigs: int = 4
) -> list[ConvergenceRow]:
    """sigma_1..sigma_{n_eigs} per truncation with differences to the previous row."""
    truncations = list(truncations)
    if any(b <= a for a, b in zip(truncations, truncations[1:])):
        raise DomainError("truncations must be strictly increasing")
    rows: list[ConvergenceRow] = []
    prev = None
    for N in truncations:
        spec = solve_generalized(build_system(rho0, rhoT, T, N), n_eigs + 1)
        sig = tuple(float(s) for s in spec.eigenvalues[1:])
        diff = None if prev is None else tuple(a - b for a, b in zip(sig, prev))
        rows.append(ConvergenceRow(N, sig, diff))
        prev = sig
    return rows
