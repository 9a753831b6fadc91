import math

import numpy as np
import pytest

from autoforma.automorphy import J_translation, landau_factor
from autoforma.equivariant import AffineTau, SampledTau, compute_B
from autoforma.errors import QuadratureUnconverged
from autoforma.lattice import Lattice
from autoforma.phi import (CharacterTable, chi_hat, chi_hat_residual, chi_tau, phi_affine,
                           phi_numeric, phi_pde_residual, phi_quadrature, phi_rhs,
                           pseudo_char_residual, psi_reduction_residual, reduced_potential)

from conftest import TAUS, random_points

HALF_PI = math.pi / 2


def brute_force_phase(tau, mu, z, n=20000):
    """Midpoint-rule line integral from 0 to z of 2 Re(conj(S) dw), S from difference quotients."""
    h = 1e-6
    t = (np.arange(n) + 0.5) / n
    w = t * z
    fx = (tau(w + h) - tau(w - h)) / (2 * h)
    fy = (tau(w + 1j * h) - tau(w - 1j * h)) / (2 * h)
    tz, tzb = 0.5 * (fx - 1j * fy), 0.5 * (fx + 1j * fy)
    k = np.abs(tz) ** 2 - np.abs(tzb) ** 2
    tw = tau(w)
    s = -1j * mu * ((tw * np.conj(tz) - np.conj(tw) * tzb) - k * w)
    return float(np.sum(2 * np.real(np.conj(s) * z)) / n)


@pytest.mark.parametrize("tau, mu, expected", [
    (AffineTau(1, 0, 0), 1.0, 0),
    (AffineTau(0, 1, 0), 1.0, 0),
    (AffineTau(1, 0, 0.5), 1.0, -0.5j),
])
def test_phi_rhs_examples(tau, mu, expected, rng):
    w = compute_B(tau, 1.0, mu)
    z = random_points(rng, 10, 3)
    assert np.allclose(phi_rhs(tau, w, z), expected, atol=1e-15)
    # the general formula, via the finite-difference adapter, agrees
    assert np.allclose(phi_rhs(SampledTau(tau), w, z), expected, atol=1e-8)


def test_phi_affine_examples():
    tau = AffineTau(1, 0, 0)
    assert np.all(phi_affine(tau, compute_B(tau, 1, 1))(np.array([1 + 1j, -3j])) == 0)
    tau = AffineTau(1, 0, 0.5)
    w = compute_B(tau, 1.0, 1.0)
    assert phi_affine(tau, w)(1j) == pytest.approx(-1.0, abs=1e-15)
    assert brute_force_phase(tau, 1.0, 1j) == pytest.approx(-1.0, abs=1e-8)
    tau = AffineTau(0, 1, 1j)
    w = compute_B(tau, 1.0, 2.0)
    assert tau.kappa == 1j
    assert phi_affine(tau, w)(1.0) == pytest.approx(4.0, abs=1e-15)
    assert brute_force_phase(tau, 2.0, 1.0) == pytest.approx(4.0, abs=1e-8)


def test_phi_normalisation_and_realness():
    for tau in TAUS.values():
        phi = phi_affine(tau, compute_B(tau, 1.0, 1.7))
        assert phi(0.0) == 0.0
        assert np.isrealobj(phi(np.array([1 + 2j, -0.5j])))


@pytest.mark.parametrize("name", list(TAUS))
def test_closed_form_matches_quadrature_and_brute_force(name, rng):
    tau = TAUS[name]
    w = compute_B(tau, 0.9, 1.4)
    phi = phi_affine(tau, w)
    z = random_points(rng, 100, 5)
    quad = np.array([phi_quadrature(tau, w, zz) for zz in z])
    assert np.max(np.abs(quad - phi(z))) <= 1e-10
    for zz in z[:5]:
        assert brute_force_phase(tau, w.mu, zz) == pytest.approx(phi(zz), abs=1e-7)


def test_quadrature_closed_loop_and_path_independence():
    tau = AffineTau(1, 0, 0.5)
    w = compute_B(tau, 1.0, 1.0)
    assert phi_quadrature(tau, w, 0.0, [0, 2 + 1j, -1 + 3j, 0]) == pytest.approx(0, abs=1e-14)
    z = 2 + 1j
    straight = phi_quadrature(tau, w, z)
    bent = phi_quadrature(tau, w, z, [0, 2, z])
    assert abs(straight - bent) <= 1e-10
    wiggly = phi_quadrature(SampledTau(tau), w, z, [0, -1j, 3 - 1j, 3 + 2j, z])
    assert abs(straight - wiggly) <= 1e-8


def test_quadrature_rejects_bad_path():
    tau = AffineTau(1, 0, 0.5)
    with pytest.raises(ValueError):
        phi_quadrature(tau, compute_B(tau, 1, 1), 1.0, [0.5, 1.0])


def test_quadrature_unconverged():
    tau = SampledTau(lambda z: z + 0.3 * np.exp(1j * 25 * z.real), name="wiggle")
    w = compute_B(AffineTau(), 1.0, 1.0)
    with pytest.raises(QuadratureUnconverged):
        phi_quadrature(tau, w, 3 + 2j, tol=1e-14, max_doublings=1)


@pytest.mark.parametrize("name", list(TAUS))
def test_pde_residual(name, rng):
    tau = TAUS[name]
    w = compute_B(tau, 1.1, 0.7)
    z = random_points(rng, 100, 3)
    assert phi_pde_residual(tau, w, phi_affine(tau, w), z) <= 1e-6
    assert phi_pde_residual(tau, w, phi_numeric(tau, w), z[:25]) <= 1e-6


@pytest.mark.parametrize("tau, nu, mu", [
    (AffineTau(1, 0, 0), 1.0, 1.0),
    (AffineTau(1, 0, 0.5), 1.0, 1.0),
    (AffineTau(2, 1, 0), 1.0, 1.0),
    (AffineTau(0, 1, 1j), 0.4, 2.0),
])
def test_psi_reduction(tau, nu, mu, rng):
    w = compute_B(tau, nu, mu)
    phi = phi_affine(tau, w)
    z = random_points(rng, 50, 2)
    assert psi_reduction_residual(tau, w, phi, z) <= 1e-6


def test_psi_vanishes_for_identity_pair(rng):
    tau = AffineTau(1, 0, 0)
    w = compute_B(tau, 1.0, 1.0)
    psi = reduced_potential(tau, w, phi_affine(tau, w))
    assert np.max(np.abs(psi(random_points(rng, 50, 3)))) <= 1e-14


def test_chi_tau_identity_pair_is_trivial(square):
    tau = AffineTau(1, 0, 0)
    w = compute_B(tau, 0.3, 2.2)
    g = square.point(np.arange(-3, 4), np.arange(3, -4, -1))
    assert np.all(chi_tau(tau, w, phi_affine(tau, w), g) == 1)


def test_chi_tau_unimodular(rng):
    for tau in TAUS.values():
        w = compute_B(tau, 0.6, 1.9)
        vals = chi_tau(tau, w, phi_affine(tau, w), random_points(rng, 30, 6))
        assert np.max(np.abs(np.abs(vals) - 1)) <= 1e-13


def test_gauge_conjugation_identity(canonical, rng):
    """exp(i phi(z+g)) J(g, z) exp(-i phi(z)) = chi(g) j^B(g, z)."""
    tau, w, L = canonical
    phi = phi_affine(tau, w)
    z = random_points(rng, 50, 3)
    g = L.point(rng.integers(-3, 4, 50), rng.integers(-3, 4, 50))
    lhs = np.exp(1j * phi(z + g)) * J_translation(tau, w, g, z) * np.exp(-1j * phi(z))
    rhs = chi_tau(tau, w, phi, g) * landau_factor(w.B, g, z)
    assert np.max(np.abs(lhs - rhs)) <= 1e-11
    # for affine maps the induced character is trivial on the lattice
    assert complex(chi_tau(tau, w, phi, 1j)) == pytest.approx(1, abs=1e-15)


def test_doubled_phase_character_breaks_gauge_identity(canonical):
    """exp(2i phi(g) - 2i mu Im<tau(0), rho(g)^-1.0>) is not the multiplier produced by the gauge."""
    tau, w, L = canonical
    phi = phi_affine(tau, w)
    g = 1j
    psi = tau.c * g + tau.d * np.conj(g)
    doubled = np.exp(2j * phi(g) - 2j * w.mu * np.imag(tau(0) * np.conj(-psi)))
    assert doubled == pytest.approx(1j, abs=1e-15)
    z = 0.37 - 0.81j
    actual = np.exp(1j * (phi(z + g) - phi(z))) * J_translation(tau, w, g, z) / landau_factor(w.B, g, z)
    assert abs(actual - doubled) > 1.0


def test_chi_hat_examples(canonical, rng):
    tau, w, L = canonical
    z = random_points(rng, 100, 3)
    tz = AffineTau(1, 0, 0)
    wz = compute_B(tz, HALF_PI, HALF_PI)
    assert chi_hat_residual(tz, wz, phi_affine(tz, wz), 1 + 1j, z) == 0
    phi = phi_affine(tau, w)
    for g in (1, 1j, 1 + 1j):
        assert chi_hat_residual(tau, w, phi, g, z) <= 1e-11
    t2 = AffineTau(2, 1, 0)
    # B = nu + 3 mu; pick nu, mu with B = pi so the square lattice is integral
    w2 = compute_B(t2, math.pi / 4, math.pi / 4)
    assert w2.B == pytest.approx(math.pi)
    for g in (1, 1j, 1 + 1j):
        assert chi_hat_residual(t2, w2, phi_affine(t2, w2), g, z) <= 1e-11


def test_chi_hat_zero_matches_chi_tau(rng):
    tau = AffineTau(0.5 - 1j, 0.25, 1 + 2j)
    w = compute_B(tau, 0.7, 0.9)
    phi = phi_affine(tau, w)
    for g in random_points(rng, 10, 4):
        assert complex(chi_hat(tau, w, phi, g, 0.0)) == pytest.approx(complex(chi_tau(tau, w, phi, g)), abs=1e-12)


def test_pseudo_character_examples(square):
    tau = AffineTau(1, 0, 0)
    w = compute_B(tau, HALF_PI, HALF_PI)
    assert pseudo_char_residual(tau, w, phi_affine(tau, w), square, 5) <= 1e-11
    assert pseudo_char_residual(tau, w, phi_affine(tau, w), square, 0) == 0
    bad = compute_B(tau, 1.0, 1.0)
    assert pseudo_char_residual(tau, bad, phi_affine(tau, bad), square, 2) > 0.1


def test_character_table_extension(canonical):
    tau, w, L = canonical
    phi = phi_affine(tau, w)
    table = CharacterTable.from_phi(tau, w, phi, L)
    m, n = np.meshgrid(np.arange(-4, 5), np.arange(-4, 5))
    g = L.point(m, n).ravel()
    assert np.max(np.abs(table(g) - chi_tau(tau, w, phi, g))) <= 1e-12


def test_character_table_on_skew_lattice():
    L = Lattice(1, 0.5 + 1j)
    tau = AffineTau(2, 1, 0.3 - 0.2j)
    k = math.pi / (compute_B(tau, 1, 1).B * L.cell_area)
    w = compute_B(tau, k, k)
    phi = phi_affine(tau, w)
    table = CharacterTable.from_phi(tau, w, phi, L)
    g = L.point(np.arange(-3, 4), np.arange(2, -5, -1))
    assert np.max(np.abs(table(g) - chi_tau(tau, w, phi, g))) <= 1e-12
    assert pseudo_char_residual(tau, w, phi, L, 3) <= 1e-11
