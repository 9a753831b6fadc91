"""Automorphy factors, the phase cocycle and the projective operators T_g.

Every factor is computed by accumulating its real phase first and taking a
single complex exponential, so ``|value| = 1`` up to one rounding.
"""
from __future__ import annotations

import math

import numpy as np

from .equivariant import Weights, rho_of
from .group import GroupElement, compose, inverse, orbit_origin_inverse

INTEGRALITY_TOL = 1e-9

# For commuting g, h:  T_g T_h = exp(PROJECTIVE_PHASE_SIGN * 2i * phase(g, h)) T_{gh}.
PROJECTIVE_PHASE_SIGN = -1


def _pairing_phase(alpha, z, p):
    """``2 alpha Im(z conj(p))``."""
    return 2.0 * alpha * np.imag(z * np.conj(p))


def j_phase(alpha: float, g: GroupElement, z):
    return _pairing_phase(alpha, z, orbit_origin_inverse(g))


def j_alpha(alpha: float, g: GroupElement, z):
    """``exp(2i alpha Im(z conj(g^{-1}.0)))``."""
    return np.exp(1j * j_phase(alpha, g, z))


def J_phase(tau, w: Weights, g: GroupElement, z):
    r = rho_of(tau, g)
    return j_phase(w.nu, g, z) + _pairing_phase(w.mu, tau(z), r.origin_inverse)


def J_factor(tau, w: Weights, g: GroupElement, z):
    """Mixed factor ``j^nu(g, z) j^mu(rho(g), tau(z))``."""
    return np.exp(1j * J_phase(tau, w, g, z))


def J_translation(tau, w: Weights, gamma, z):
    """Vectorised mixed factor for pure translations; ``gamma`` and ``z`` broadcast."""
    gamma = np.asarray(gamma, dtype=complex)
    if hasattr(tau, "kappa"):
        psi = tau.c * gamma + tau.d * np.conj(gamma)
    else:
        psi = tau(gamma) - tau(0.0)
    phase = _pairing_phase(w.nu, z, -gamma) + _pairing_phase(w.mu, tau(z), -psi)
    return np.exp(1j * phase)


def landau_factor(B: float, gamma, z):
    """``j^B((1, gamma), z)``, vectorised over ``gamma`` and ``z``."""
    return np.exp(1j * _pairing_phase(B, z, -np.asarray(gamma, dtype=complex)))


def phase_factor(tau, w: Weights, g: GroupElement, h: GroupElement) -> float:
    """Real phase of the chain rule: ``Im(nu <g^-1.0, h.0> + mu <rho(g^-1).0, rho(h).0>)``."""
    p = orbit_origin_inverse(g)
    q = h.b
    rp = rho_of(tau, inverse(g)).psi
    rq = rho_of(tau, h).psi
    return float((w.nu * p * q.conjugate() + w.mu * rp * rq.conjugate()).imag)


def integrality_table(tau, w: Weights, L) -> np.ndarray:
    gens = [GroupElement(1.0, om) for om in L.generators]
    return np.array([[phase_factor(tau, w, gi, gj) / math.pi for gj in gens] for gi in gens]) + 0.0


def check_integrality(tau, w: Weights, L, tol: float = INTEGRALITY_TOL):
    """Whether ``phase/pi`` is integral on Lattice x Lattice.

    The phase is Z-bilinear on translations, so the 2x2 generator table
    decides it.  Returns ``(ok, table)``.
    """
    table = integrality_table(tau, w, L)
    ok = bool(np.all(np.abs(table - np.round(table)) <= tol))
    return ok, table


def chain_rule_residual(tau, w: Weights, g: GroupElement, h: GroupElement, z) -> float:
    z = np.asarray(z, dtype=complex)
    lhs = J_factor(tau, w, compose(g, h), z)
    rhs = (np.exp(2j * phase_factor(tau, w, g, h))
           * J_factor(tau, w, g, h.act(z)) * J_factor(tau, w, h, z))
    return float(np.max(np.abs(lhs - rhs), initial=0.0))


def projective_apply(tau, w: Weights, g: GroupElement, f, z):
    """``[T_g f](z) = conj(J(g, z)) f(g.z)``."""
    z = np.asarray(z, dtype=complex)
    return np.conj(J_factor(tau, w, g, z)) * f(g.act(z))


def projective_composition_phase(tau, w: Weights, g: GroupElement, h: GroupElement) -> complex:
    """Unimodular ``c`` with ``T_g T_h = c T_{hg}``.

    ``T_g T_h f`` evaluates ``f`` at ``h.(g.z)``, hence the reversed product;
    by the chain rule ``c = exp(2i phase(h, g))``.
    """
    return complex(np.exp(2j * phase_factor(tau, w, h, g)))

