import json
import math

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from steklov_annulus.errors import DomainError
from steklov_annulus.spectrum import (
    Branch,
    ModeEigenvalue,
    assemble_spectrum,
    eigenfunction_dt,
    eigenfunction_eval,
    sigma_mode,
    sigma_radial,
)

positive = st.floats(min_value=0.05, max_value=20.0, allow_nan=False)


def bisect(f, lo, hi):
    flo = f(lo)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if (f(mid) > 0) == (flo > 0):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


T_COTH_ROOT = bisect(lambda t: t - 1.0 / math.tanh(t), 1.0, 2.0)


def naive_mode(n, T, r1, r2, sign):
    # textbook quadratic-root formula in 50-digit arithmetic
    with mpmath.workdps(50):
        s = 1 / mpmath.mpf(r1) + 1 / mpmath.mpf(r2)
        c = mpmath.coth(n * mpmath.mpf(T))
        return float(n / mpmath.mpf(2) * (s * c + sign * mpmath.sqrt(s * s * c * c - 4 / (mpmath.mpf(r1) * r2))))


def brute_force(T, r1, r2, n_max=10):
    vals = [(0.0, 0, 0), (sigma_radial(T, r1, r2), 0, 1)]
    for n in range(1, n_max + 1):
        for sign, tag in ((-1, 2), (1, 3)):
            v = naive_mode(n, T, r1, r2, sign)
            vals += [(v, n, tag)] * 2
    return sorted(vals)


def test_sigma_radial_examples():
    assert sigma_radial(1, 1, 1) == 2.0
    for T, rho in [(0.3, 2.0), (5.0, 0.1), (2.0, 7.0)]:
        assert sigma_radial(T, rho, rho) == pytest.approx(2 / (rho * T), rel=1e-15)
    assert sigma_radial(2 * T_COTH_ROOT, 1, 1) == pytest.approx(1 / T_COTH_ROOT, rel=1e-14)
    assert 1 / T_COTH_ROOT == pytest.approx(0.83356, abs=1e-5)


@pytest.mark.parametrize("args", [(0, 1, 1), (1, -1, 1), (1, 1, 0), (float("nan"), 1, 1)])
def test_sigma_radial_domain(args):
    with pytest.raises(DomainError):
        sigma_radial(*args)


@pytest.mark.parametrize("T", [0.1, 0.7, 1.0, 2.399, 5.0, 30.0])
def test_first_mode_equal_densities(T):
    assert sigma_mode(1, T, 1, 1, "minus") == pytest.approx(math.tanh(T / 2), rel=1e-14)
    assert sigma_mode(1, T, 1, 1, "plus") == pytest.approx(1 / math.tanh(T / 2), rel=1e-14)


def test_second_mode_example():
    v = sigma_mode(2, 1.0, 1, 1, Branch.MINUS)
    assert v == pytest.approx(2 * math.tanh(1.0), rel=1e-14)
    assert v == pytest.approx(naive_mode(2, 1.0, 1, 1, -1), rel=1e-12)
    assert v == pytest.approx(1.52319, abs=1e-5)


@pytest.mark.parametrize("bad", [dict(n=0), dict(n=1.0), dict(branch="radial")])
def test_sigma_mode_domain(bad):
    kw = dict(n=1, T=1.0, rho1=1.0, rho2=1.0, branch="minus") | bad
    with pytest.raises(DomainError):
        sigma_mode(**kw)


@pytest.mark.parametrize("n,T,r1,r2", [(5, 10.0, 1.0, 2.0), (40, 3.0, 0.5, 0.5), (3, 50.0, 3.0, 1.0)])
def test_minus_branch_keeps_relative_accuracy(n, T, r1, r2):
    assert sigma_mode(n, T, r1, r2, "minus") == pytest.approx(naive_mode(n, T, r1, r2, -1), rel=1e-14)


@pytest.mark.parametrize(
    "T,r1,r2,k", [(1.0, 1.0, 1.0, 4), (1.0, 1.0, 1.0, 12), (3.04, 2.0, 1.0, 9), (0.3, 0.5, 4.0, 15), (6.0, 1.0, 1.0, 7)]
)
def test_assemble_matches_brute_force(T, r1, r2, k):
    spec = assemble_spectrum(T, r1, r2, k)
    oracle = brute_force(T, r1, r2)
    assert len(spec.entries) == k + 1
    assert spec.entries[0].sigma == 0.0 and spec.entries[0].branch is Branch.RADIAL_ZERO
    for e, (v, _, _) in zip(spec.entries, oracle):
        assert e.sigma == pytest.approx(v, rel=1e-12, abs=1e-15)
    # truncation complete: the next unreported brute-force value is not below the last reported one
    assert oracle[k + 1][0] >= spec.entries[-1].sigma * (1 - 1e-12)


def test_assemble_unit_annulus_ordering():
    # mode-2 minus (2 tanh 1 ~ 1.523) precedes the radial eigenvalue 2
    spec = assemble_spectrum(1.0, 1.0, 1.0, 5)
    assert [(e.n, e.branch.value) for e in spec.entries] == [
        (0, "radial-zero"),
        (1, "minus"),
        (1, "minus"),
        (2, "minus"),
        (2, "minus"),
        (0, "radial"),
    ]
    assert spec.sigmas[1] == pytest.approx(math.tanh(0.5), rel=1e-14)
    assert spec.sigmas[5] == 2.0


def test_multiplicity_three_at_T1():
    T1 = 2 * T_COTH_ROOT
    spec = assemble_spectrum(T1, 1.0, 1.0, 3)
    s = spec.sigmas
    assert s[1] == pytest.approx(s[2], rel=1e-12) and s[2] == pytest.approx(s[3], rel=1e-12)
    clusters = spec.clusters(rtol=1e-12)
    assert clusters[1][1] == 3
    # tie broken by (n, branch): the radial entry is listed first
    assert spec.entries[1].n == 0


def test_eigenfunction_examples():
    T, r1, r2 = 2.5, 3.0, 1.5
    radial = ModeEigenvalue(0, Branch.RADIAL, sigma_radial(T, r1, r2))
    for theta in (0.0, 1.0, 4.0):
        assert eigenfunction_eval(radial, T, r1, r2, 0.0, theta) == -1.0
        assert eigenfunction_eval(radial, T, r1, r2, T, theta) == pytest.approx(r1 / r2, rel=1e-14)
    m1 = ModeEigenvalue(1, Branch.MINUS, sigma_mode(1, T, r1, r2, "minus"))
    assert eigenfunction_eval(m1, T, r1, r2, 0.0, 0.0) == (1.0, 0.0)
    with pytest.raises(DomainError):
        eigenfunction_eval(m1, T, r1, r2, T + 0.1, 0.0)


@pytest.mark.parametrize("T,r1,r2", [(1.0, 1.0, 1.0), (2.0, 3.0, 0.5), (0.5, 0.2, 1.0)])
@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("branch", [Branch.MINUS, Branch.PLUS])
def test_boundary_condition_residual(T, r1, r2, n, branch):
    mode = ModeEigenvalue(n, branch, sigma_mode(n, T, r1, r2, branch))
    for theta in (0.0, 0.3, 2.0):
        u0 = eigenfunction_eval(mode, T, r1, r2, 0.0, theta)
        d0 = eigenfunction_dt(mode, T, r1, r2, 0.0, theta)
        uT = eigenfunction_eval(mode, T, r1, r2, T, theta)
        dT = eigenfunction_dt(mode, T, r1, r2, T, theta)
        for i in range(2):
            assert abs(d0[i] + mode.sigma * r1 * u0[i]) <= 1e-12
            assert abs(dT[i] - mode.sigma * r2 * uT[i]) <= 1e-12


def test_radial_boundary_condition():
    T, r1, r2 = 1.7, 0.4, 2.2
    mode = ModeEigenvalue(0, Branch.RADIAL, sigma_radial(T, r1, r2))
    u0, uT = eigenfunction_eval(mode, T, r1, r2, 0, 0), eigenfunction_eval(mode, T, r1, r2, T, 0)
    d = eigenfunction_dt(mode, T, r1, r2, 0, 0)
    assert abs(d + mode.sigma * r1 * u0) <= 1e-12
    assert abs(d - mode.sigma * r2 * uT) <= 1e-12


@given(T=positive, r1=positive, r2=positive, n=st.integers(1, 30))
def test_product_of_roots(T, r1, r2, n):
    prod = sigma_mode(n, T, r1, r2, "plus") * sigma_mode(n, T, r1, r2, "minus")
    assert prod == pytest.approx(n * n / (r1 * r2), rel=1e-12)


@given(T=positive, r1=positive, r2=positive)
def test_minus_branch_increasing_in_n(T, r1, r2):
    vals = [sigma_mode(n, T, r1, r2, "minus") for n in range(1, 25)]
    assert all(a < b for a, b in zip(vals, vals[1:]))


@given(T=positive, r1=positive, r2=positive, k=st.integers(1, 20))
def test_swap_symmetry(T, r1, r2, k):
    assert assemble_spectrum(T, r1, r2, k).sigmas == assemble_spectrum(T, r2, r1, k).sigmas


@settings(max_examples=50)
@given(T=positive, r1=positive, r2=positive, s=st.floats(0.01, 100.0), k=st.integers(1, 12))
def test_density_scaling(T, r1, r2, s, k):
    base = assemble_spectrum(T, r1, r2, k).sigmas
    scaled = assemble_spectrum(T, s * r1, s * r2, k).sigmas
    for a, b in zip(base[1:], scaled[1:]):
        assert b == pytest.approx(a / s, rel=1e-12)


def test_serialization():
    spec = assemble_spectrum(1.0, 1.0, 1.0, 4)
    d = json.loads(spec.to_json())
    assert set(d) >= {"T", "rho1", "rho2", "entries", "schema_version"}
    first = d["entries"][1]
    assert {k: first[k] for k in ("n", "branch", "multiplicity")} == {"n": 1, "branch": "minus", "multiplicity": 2}
    assert first["sigma"] == pytest.approx(math.tanh(0.5), rel=1e-14)
    lines = spec.to_csv().splitlines()
    assert lines[0] == "n,branch,sigma,multiplicity"
    assert len(lines) == 6
