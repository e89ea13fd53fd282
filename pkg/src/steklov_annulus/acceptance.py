"""Acceptance criteria for the library, runnable from the CLI (``verify``) and from pytest.

Each criterion returns a :class:`CriterionResult` made of named sub-checks;
a criterion passes only if every sub-check does. Tolerances are fixed here
and are not meant to be tuned.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import audit, explorer, family, galerkin, spectrum


@dataclass
class CriterionResult:
    id: int
    title: str
    checks: list[tuple[str, bool, str]] = field(default_factory=list)
    seconds: float = 0.0

    def check(self, name: str, ok: bool, detail: str = "") -> None:
        self.checks.append((name, bool(ok), detail))

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(ok for _, ok, _ in self.checks)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        failed = [name for name, ok, _ in self.checks if not ok]
        tail = f" (failed: {', '.join(failed)})" if failed else ""
        return f"[{status}] {self.id:2d}. {self.title}{tail}"


def _bisect(f: Callable[[float], float], lo: float, hi: float, iterations: int = 200) -> float:
    # plain bisection, deliberately independent of the library root finder
    flo = f(lo)
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        fm = f(mid)
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def t_coth_root() -> float:
    """Root of ``t = coth t`` on [1, 2]."""
    return _bisect(lambda t: t - 1.0 / math.tanh(t), 1.0, 2.0)


GRID_50 = np.logspace(-2.0, 2.0, 50)


def criterion_1() -> CriterionResult:
    r = CriterionResult(1, "crossing identity sigma0(T_q) = sigma1-(T_q)")
    for q in (0.25, 0.5, 1.0, 2.0, 4.0, 10.0):
        res = family.solve_Tq(q).crossing_residual()
        r.check(f"q={q}", res <= 1e-11, f"relative residual {res:.2e}")
    return r


def criterion_2() -> CriterionResult:
    r = CriterionResult(2, "T1 = 2 * root(t = coth t) = 2.39936")
    t1 = family.T1()
    oracle = 2.0 * t_coth_root()
    r.check("matches bisection oracle", abs(t1 - oracle) <= 1e-9, f"T1={t1!r} oracle={oracle!r}")
    r.check("value 2.39936 +- 1e-4", abs(t1 - 2.39936) <= 1e-4, f"T1={t1:.8f}")
    return r


def criterion_3() -> CriterionResult:
    r = CriterionResult(3, "T2 = 3.04 +- 0.05")
    t2 = family.density_distinct_threshold()
    r.check("T2", abs(t2 - 3.04) <= 0.05, f"T2={t2:.8f}")
    return r


def criterion_4() -> CriterionResult:
    r = CriterionResult(4, "T~ = ln 3, within 0.01 of 1.10")
    tt = family.tilde_T()
    r.check("equals ln 3", abs(tt - math.log(3.0)) <= 1e-12, f"{tt!r}")
    r.check("solves 2 tanh(T/2) = 1", abs(2.0 * math.tanh(0.5 * tt) - 1.0) <= 1e-12, "")
    r.check("within 0.01 of 1.10", abs(tt - 1.10) < 0.01, f"{tt:.6f}")
    return r


def criterion_5() -> CriterionResult:
    r = CriterionResult(5, "T_q inequalities on 50-point log grid, minimum near q = 1")
    worst = {}
    for q in GRID_50:
        for ineq in family.verify_Tq_bounds(float(q)).checks:
            worst[ineq.name] = min(worst.get(ineq.name, math.inf), ineq.margin)
    for name, margin in worst.items():
        r.check(name, margin > 0, f"min margin {margin:.3e}")
    T = np.array([family.solve_Tq(float(q)).T_q for q in GRID_50])
    dist = np.abs(np.log(GRID_50))
    nearest = dist <= dist.min() * (1.0 + 1e-9)
    r.check(
        "minimum at grid point nearest q=1",
        T[nearest].min() <= T.min() * (1.0 + 1e-14),
        f"argmin q={GRID_50[int(np.argmin(T))]:.6f}, T_min={T.min():.10f}",
    )
    return r


def criterion_6() -> CriterionResult:
    r = CriterionResult(6, "2pi < normalized sigma1 < 2pi + 4pi q/(q^2+1); limit 2pi")
    lo_margin = hi_margin = math.inf
    for q in GRID_50:
        v = family.normalized_sigma1(float(q))
        lo_margin = min(lo_margin, v - 2.0 * math.pi)
        hi_margin = min(hi_margin, 2.0 * math.pi + 4.0 * math.pi * q / (q * q + 1.0) - v)
    r.check("lower bound", lo_margin > 0, f"min margin {lo_margin:.3e}")
    r.check("upper bound", hi_margin > 0, f"min margin {hi_margin:.3e}")
    v100 = family.normalized_sigma1(100.0)
    r.check("q=100 within 0.15 of 2pi", abs(v100 - 2.0 * math.pi) < 0.15, f"{v100:.6f}")
    return r


def criterion_7() -> CriterionResult:
    r = CriterionResult(7, "energy 2E(Psi) = 2pi(1+q)^2/(q T_q)")
    for q in (1.0, 2.0, 5.0):
        fbm = family.map_for_q(q)
        e = family.energy(fbm, 512)
        target = family.normalized_sigma1(q)
        rel = abs(e - target) / target
        r.check(f"q={q}", rel <= 1e-8, f"relative error {rel:.2e}")
    return r


def criterion_8() -> CriterionResult:
    r = CriterionResult(8, "b-function facts and the q = 2 lower bound")
    b1 = family.b_of_q(1.0)
    r.check("b(1) = 1", abs(b1 - 1.0) <= 1e-12, f"{b1!r}")
    grid = np.geomspace(0.01, 1.0, 102)[1:-1]
    b = np.array([family.b_of_q(float(q)) for q in grid])
    r.check("b strictly decreasing on (0.01, 1)", bool(np.all(np.diff(b) < 0)), f"{grid.size} points")
    gap = abs(2.0 * family.b_of_q(2.0) - 1.0)
    r.check("|2 b(2) - 1| > 0.01", gap > 0.01, f"{gap:.6f}")
    bound = (2.0 - 1.0) / (2.0 + 1.0) * math.cosh(2.0 + 0.5)
    r.check("(q-1)/(q+1) cosh(q+1/q) > q at q=2", bound > 2.0, f"{bound:.6f}")
    r.check("bound equals the quoted 3.1 +- 0.05", abs(bound - 3.1) <= 0.05, f"{bound:.6f} vs 3.1")
    return r


def criterion_9() -> CriterionResult:
    r = CriterionResult(9, "free boundary audit of the family")
    closed_form = ("harmonicity", "boundary_norm", "parallelism", "interior_bound")
    for q in (1.0, 2.0, 4.0):
        rep = audit.audit_free_boundary(family.map_for_q(q))
        worst = max(rep.residuals[name] for name in closed_form)
        r.check(f"q={q} residuals <= 1e-10", worst <= 1e-10, f"max {worst:.2e}")
        r.check(
            f"q={q} finite-difference probe",
            rep.residuals["harmonicity_fd"] <= audit.FD_TOL,
            f"{rep.residuals['harmonicity_fd']:.2e}",
        )
        r.check(f"q={q} densities > 0", min(rep.densities) > 0, f"{rep.densities}")
        idx = rep.spectral_index
        r.check(
            f"q={q} index 1 multiplicity 3",
            idx is not None and (idx.index, idx.multiplicity) == (1, 3),
            "" if idx is None else f"({idx.index}, {idx.multiplicity})",
        )
        if q == 1.0:
            r.check("q=1 conformal", rep.conformality_defect <= 1e-10, f"{rep.conformality_defect:.2e}")
        if q == 2.0:
            r.check("q=2 not conformal", rep.conformality_defect > 1e-3, f"{rep.conformality_defect:.4f}")
    return r


def criterion_10() -> CriterionResult:
    r = CriterionResult(10, "Galerkin equivalence, self-convergence and kernel")
    F = galerkin.FourierDensity
    for T, r1, r2 in ((1.0, 1.0, 1.0), (3.04, 2.0, 1.0)):
        k = 12
        gal = galerkin.solve_generalized(galerkin.build_system(F.constant(r1), F.constant(r2), T, 16), k + 1)
        exact = spectrum.assemble_spectrum(T, r1, r2, k).sigmas
        rel = max(abs(g - e) / e for g, e in zip(gal.eigenvalues[1:], exact[1:]))
        r.check(f"constant densities {(T, r1, r2)}", rel <= 1e-10, f"max relative {rel:.2e}")
        r.check(f"kernel {(T, r1, r2)}", abs(gal.eigenvalues[0]) <= 1e-10, f"{gal.eigenvalues[0]:.2e}")
    rho = F.cosine(1.0, 0.1, 1)
    rows = galerkin.convergence_study(rho, F.constant(1.0), 3.0, [16, 32])
    diff = max(abs(d) for d in rows[1].differences)
    r.check("perturbed N=16 vs N=32", diff <= 1e-8, f"max |diff| {diff:.2e}")
    gal = galerkin.solve_generalized(galerkin.build_system(rho, F.constant(1.0), 3.0, 32), 2)
    r.check("perturbed kernel", abs(gal.eigenvalues[0]) <= 1e-10, f"{gal.eigenvalues[0]:.2e}")
    return r


def criterion_11() -> CriterionResult:
    r = CriterionResult(11, "symmetric-family maximum at the crossing; first-order probe")
    T = family.solve_Tq(2.0).T_q
    prof = explorer.scan_q(T)
    grid = prof.q
    for target in (2.0, 0.5):
        i = int(np.searchsorted(grid, target))
        cell = (grid[max(i - 1, 0)], grid[min(i, grid.size - 1)])
        hit = [x for x in prof.maximizers if cell[0] <= x <= cell[1]]
        r.check(f"maximum within one grid cell of q={target}", bool(hit), f"maximizers {prof.maximizers}")
    crossing_value = family.normalized_sigma1(2.0)
    rel = abs(prof.max_value - crossing_value) / crossing_value
    r.check("max value = crossing value", rel <= 1e-6, f"relative {rel:.2e}")
    anti, _ = explorer.perturbation_parts(T, 2.0, 0.05, 1)
    bar = explorer.sigma1_bar(T, 2.0)
    r.check("first-order perturbation <= 1e-6 sigma1_bar", abs(anti) <= 1e-6 * bar, f"{anti:.2e}")
    return r


def criterion_12() -> CriterionResult:
    r = CriterionResult(12, "below T1: T = 1 symmetric value < 2pi, not maximal")
    rep = explorer.below_T1_report(1.0)
    margin = rep.two_pi - rep.disk_branch_value
    r.check("4pi tanh(1/2) < 2pi with margin > 0.4", margin > 0.4, f"margin {margin:.4f}")
    r.check("verdict 'not maximal'", rep.verdict == "not maximal", rep.verdict)
    r.check("no crossing below T1", not rep.crossing_exists, "")
    return r


CRITERIA: dict[int, Callable[[], CriterionResult]] = {
    1: criterion_1,
    2: criterion_2,
    3: criterion_3,
    4: criterion_4,
    5: criterion_5,
    6: criterion_6,
    7: criterion_7,
    8: criterion_8,
    9: criterion_9,
    10: criterion_10,
    11: criterion_11,
    12: criterion_12,
}


def run_criterion(cid: int) -> CriterionResult:
    start = time.perf_counter()
    result = CRITERIA[cid]()
    result.seconds = time.perf_counter() - start
    return result


def run_all() -> list[CriterionResult]:
    return [run_criterion(cid) for cid in CRITERIA]
