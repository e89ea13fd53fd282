"""Small numerical helpers: overflow-safe hyperbolic functions and a bracketed root finder."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .errors import ConvergenceError, DomainError

_EPS = 2.220446049250313e-16


def coth(x: float) -> float:
    """Hyperbolic cotangent for x > 0; saturates to 1.0 instead of overflowing."""
    return 1.0 / math.tanh(x)


def csch(x: float) -> float:
    """Hyperbolic cosecant for x > 0, written as 2e^{-x} / (1 - e^{-2x})."""
    return 2.0 * math.exp(-x) / -math.expm1(-2.0 * x)


def coth_minus_one(x: float) -> float:
    """coth(x) - 1 without cancellation: 2 / (e^{2x} - 1)."""
    if 2.0 * x > 709.0:
        return 2.0 * math.exp(-2.0 * x)
    return 2.0 / math.expm1(2.0 * x)


@dataclass(frozen=True)
class RootResult:
    root: float
    residual: float
    iterations: int
    converged: bool


def hybrid_root(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    xtol: float = 0.0,
    ftol: float = 0.0,
    maxiter: int = 200,
) -> RootResult:
    """Find a root of ``f`` in ``[lo, hi]`` by bisection accelerated with secant steps.

    The bracket is kept at every step, so convergence is guaranteed for a
    continuous ``f`` with a sign change. Iteration stops once the bracket is
    narrower than ``xtol`` (plus a few ulps) *and* ``|f| <= ftol``, when ``f``
    vanishes exactly, or when the bracket has collapsed to adjacent floats.

    Raises
    ------
    DomainError
        If ``f(lo)`` and ``f(hi)`` do not bracket a root.
    ConvergenceError
        If ``maxiter`` is exhausted first.
    """
    if not lo < hi:
        raise DomainError(f"empty bracket [{lo}, {hi}]")
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return RootResult(lo, 0.0, 0, True)
    if fhi == 0.0:
        return RootResult(hi, 0.0, 0, True)
    if (flo > 0) == (fhi > 0):
        raise DomainError(f"no sign change on [{lo}, {hi}]: f={flo}, {fhi}")

    best, fbest = (lo, flo) if abs(flo) < abs(fhi) else (hi, fhi)
    prev_width = math.inf
    for it in range(1, maxiter + 1):
        width = hi - lo
        # secant (regula falsi) candidate, rejected if it barely shrinks the bracket
        x = hi - fhi * (hi - lo) / (fhi - flo)
        if not (lo < x < hi) or width > 0.5 * prev_width:
            x = lo + 0.5 * width
        prev_width = width
        fx = f(x)
        if abs(fx) < abs(fbest):
            best, fbest = x, fx
        if fx == 0.0:
            return RootResult(x, 0.0, it, True)
        if (fx > 0) == (flo > 0):
            lo, flo = x, fx
        else:
            hi, fhi = x, fx
        # a one-sided secant can stall an endpoint; the bisection fallback above handles it
        tight = hi - lo <= xtol + 4.0 * _EPS * max(abs(lo), abs(hi))
        collapsed = math.nextafter(lo, hi) >= hi
        if (tight and abs(fbest) <= ftol) or collapsed:
            return RootResult(best, abs(fbest), it, abs(fbest) <= ftol)
    raise ConvergenceError(f"root not found after {maxiter} iterations; bracket [{lo}, {hi}]")
