import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from steklov_annulus import galerkin
from steklov_annulus.errors import DefinitenessError, DomainError
from steklov_annulus.galerkin import FourierDensity as F
from steklov_annulus.spectrum import assemble_spectrum, sigma_mode


def basis_traces(N, n_theta):
    """Rows: basis functions sampled on each circle, shape (size, 2, n_theta)."""
    theta = 2 * math.pi * np.arange(n_theta) / n_theta
    size = 2 * (2 * N + 1)
    out = np.zeros((size, 2, n_theta))
    out[0, 0] = out[1, 1] = 1 / math.sqrt(2 * math.pi)
    for m in range(1, N + 1):
        o = 2 + 4 * (m - 1)
        c, s = np.cos(m * theta) / math.sqrt(math.pi), np.sin(m * theta) / math.sqrt(math.pi)
        out[o, 0], out[o + 1, 1], out[o + 2, 0], out[o + 3, 1] = c, c, s, s
    return theta, out


def mass_by_quadrature(rho0, rhoT, N):
    # trapezoid rule on a uniform grid is exact for these trigonometric polynomials
    n = 8 * (N + max(rho0.M, rhoT.M) + 1)
    theta, B = basis_traces(N, n)
    w = 2 * math.pi / n
    r = np.stack([rho0(theta), rhoT(theta)])
    return w * np.einsum("ict,ct,jct->ij", B, r, B)


def test_dtn_blocks():
    T = 1.3
    b0 = galerkin.dtn_block(0, T)
    assert np.allclose(b0.sum(axis=1), 0.0, atol=1e-15)
    assert b0[0, 0] == pytest.approx(1 / T, rel=1e-15)
    w = np.linalg.eigvalsh(galerkin.dtn_block(1, T))
    assert w == pytest.approx([math.tanh(T / 2), 1 / math.tanh(T / 2)], rel=1e-14)


def test_dtn_block_with_densities_matches_closed_form():
    T, r1, r2 = 0.9, 2.0, 1.0
    Minv = np.diag([1 / math.sqrt(r1), 1 / math.sqrt(r2)])
    for n in (1, 2, 5):
        w = np.linalg.eigvalsh(Minv @ galerkin.dtn_block(n, T) @ Minv)
        assert w[0] == pytest.approx(sigma_mode(n, T, r1, r2, "minus"), rel=1e-13)
        assert w[1] == pytest.approx(sigma_mode(n, T, r1, r2, "plus"), rel=1e-13)


def test_constant_density_mass_is_diagonal():
    sys_ = galerkin.build_system(F.constant(2.0), F.constant(0.5), 1.0, 6)
    M = sys_.M
    assert np.count_nonzero(M - np.diag(np.diag(M))) == 0
    labels = galerkin.basis_labels(6)
    for i, lab in enumerate(labels):
        assert M[i, i] == pytest.approx(2.0 if lab.endswith("@0") else 0.5, rel=1e-15)


def test_cosine_density_coupling():
    eps = 0.2
    M = galerkin.build_system(F.cosine(1.0, eps, 1), F.constant(1.0), 1.0, 4).M
    labels = galerkin.basis_labels(4)
    i, j = labels.index("const@0"), labels.index("cos1@0")
    assert M[i, j] == pytest.approx(eps / math.sqrt(2), rel=1e-14)
    k, l = labels.index("cos1@0"), labels.index("cos2@0")
    assert M[k, l] == pytest.approx(eps / 2, rel=1e-14)


@pytest.mark.parametrize(
    "rho0,rhoT",
    [
        (F.cosine(1.0, 0.3, 1), F.constant(1.0)),
        (F(1.0, (0.1, -0.2, 0.05), (0.2, 0.0, -0.1)), F(2.0, (0.3,), (0.4,))),
    ],
)
def test_mass_matches_quadrature(rho0, rhoT):
    N = 7
    M = galerkin.build_system(rho0, rhoT, 1.0, N).M
    assert np.max(np.abs(M - mass_by_quadrature(rho0, rhoT, N))) <= 1e-13


def test_matrices_exactly_symmetric():
    s = galerkin.build_system(F(1.0, (0.1, 0.2), (0.3, -0.1)), F.cosine(3.0, 0.1, 2), 2.0, 10)
    assert np.array_equal(s.D, s.D.T)
    assert np.array_equal(s.M, s.M.T)


@pytest.mark.parametrize("T,r1,r2", [(1.0, 1.0, 1.0), (3.04, 2.0, 1.0), (0.4, 0.3, 5.0)])
def test_constant_densities_reproduce_closed_form(T, r1, r2):
    k = 14
    gal = galerkin.solve_generalized(galerkin.build_system(F.constant(r1), F.constant(r2), T, 16), k + 1)
    exact = assemble_spectrum(T, r1, r2, k).sigmas
    assert abs(gal.eigenvalues[0]) <= 1e-10
    for g, e in zip(gal.eigenvalues[1:], exact[1:]):
        assert abs(g - e) / e <= 1e-10


def test_zero_amplitude_is_unperturbed():
    a = galerkin.solve_generalized(galerkin.build_system(F.cosine(2.0, 0.0, 1), F.constant(1.0), 3.0, 12), 6)
    b = galerkin.solve_generalized(galerkin.build_system(F.constant(2.0), F.constant(1.0), 3.0, 12), 6)
    assert np.array_equal(a.eigenvalues, b.eigenvalues)


def test_convergence():
    rows = galerkin.convergence_study(F.cosine(1.0, 0.1, 1), F.constant(1.0), 3.0, [8, 16, 32])
    assert rows[0].differences is None
    assert max(abs(d) for d in rows[2].differences) <= 1e-8
    assert max(abs(d) for d in rows[1].differences) >= max(abs(d) for d in rows[2].differences)


def test_nested_truncations_do_not_increase():
    # Rayleigh-Ritz with nested trial spaces: eigenvalues are non-increasing in N
    rho0, rhoT = F(1.0, (0.3, 0.1), (0.0, 0.2)), F.cosine(0.7, 0.4, 3)
    prev = None
    for N in (3, 5, 9, 17):
        sig = galerkin.solve_generalized(galerkin.build_system(rho0, rhoT, 1.5, N), 6).eigenvalues
        if prev is not None:
            assert np.all(sig <= prev + 1e-12)
        prev = sig


def test_kernel_and_orthonormality():
    s = galerkin.build_system(F.cosine(1.0, 0.1, 1), F(2.0, (0.2,), (0.1,)), 2.0, 12)
    spec = galerkin.solve_generalized(s, 8)
    assert abs(spec.eigenvalues[0]) <= 1e-10
    v0 = spec.eigenvectors[:, 0]
    c = s.constant_vector()
    cos = abs(v0 @ s.M @ c) / math.sqrt((v0 @ s.M @ v0) * (c @ s.M @ c))
    assert cos == pytest.approx(1.0, abs=1e-10)
    V = spec.eigenvectors
    assert np.max(np.abs(V.T @ s.M @ V - np.eye(8))) <= 1e-10
    assert np.max(np.abs(s.D @ V - s.M @ V * spec.eigenvalues)) <= 1e-9


@settings(max_examples=20, deadline=None)
@given(st.floats(0.1, 10.0), st.floats(-0.5, 0.5))
def test_density_scaling(s, eps):
    base = galerkin.solve_generalized(galerkin.build_system(F.cosine(1.0, eps, 2), F.constant(1.5), 1.2, 8), 5)
    scaled = galerkin.solve_generalized(
        galerkin.build_system(F.cosine(s, eps, 2), F.constant(1.5 * s), 1.2, 8), 5
    )
    assert scaled.eigenvalues[1:] * s == pytest.approx(base.eigenvalues[1:], rel=1e-10)


def test_definiteness_errors():
    with pytest.raises(DefinitenessError):
        galerkin.build_system(F.cosine(1.0, 1.5, 1), F.constant(1.0), 1.0, 4)
    with pytest.raises(DefinitenessError):
        galerkin.build_system(F.constant(-1.0), F.constant(1.0), 1.0, 4)
    with pytest.raises(DomainError):
        galerkin.build_system(F.cosine(1.0, 0.1, 5), F.constant(1.0), 1.0, 3)
    with pytest.raises(DomainError):
        galerkin.build_system(F.constant(1.0), F.constant(1.0), 0.0, 3)


def test_csv_export():
    s = galerkin.build_system(F.constant(1.0), F.constant(1.0), 1.0, 2)
    lines = s.to_csv("M").splitlines()
    assert lines[0].split(",")[1:] == galerkin.basis_labels(2)
    assert len(lines) == s.size + 1
