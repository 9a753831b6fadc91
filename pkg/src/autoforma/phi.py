"""The gauge phase, the lattice character it induces and the checks around it.

The phase is the real function with prescribed Wirtinger derivative
``dphi/dzbar = S(z)`` where

    S(z) = -i mu ((tau conj(dtau/dz) - conj(tau) dtau/dzbar) - K z),
    K    = |dtau/dz|^2 - |dtau/dzbar|^2,

normalised by ``phi(0) = 0``.  For affine ``tau`` the bracket collapses to the
constant ``kappa = conj(c) e - d conj(e)`` and ``phi(z) = -2 mu Im(conj(kappa) z)``.
Otherwise ``phi`` is the line integral of the exact 1-form ``2 Re(conj(S) dz)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._numeric import FD_STEP, gauss_legendre, wirtinger
from .equivariant import AffineTau, Weights, rho_of_translation
from .errors import QuadratureUnconverged

CHARACTER_MATCH_TOL = 1e-12


def phi_rhs(tau, w: Weights, z):
    """``dphi/dzbar`` at ``z``."""
    z = np.asarray(z, dtype=complex)
    if isinstance(tau, AffineTau):
        return np.full(z.shape, -1j * w.mu * tau.kappa)
    t = tau(z)
    tz, tzb = tau.dz(z), tau.dzbar(z)
    k = np.abs(tz) ** 2 - np.abs(tzb) ** 2
    return -1j * w.mu * ((t * np.conj(tz) - np.conj(t) * tzb) - k * z)


def _segment_integral(tau, w, p, q, pieces, order):
    x, wt = gauss_legendre(order)
    edges = p + (q - p) * np.linspace(0.0, 1.0, pieces + 1)
    lo, hi = edges[:-1, None], edges[1:, None]
    half = (hi - lo) / 2
    nodes = lo + half * (x[None, :] + 1)
    vals = 2.0 * np.real(np.conj(phi_rhs(tau, w, nodes)) * half) * wt[None, :]
    return math.fsum(vals.ravel())


def phi_quadrature(tau, w: Weights, z, path=None, *, order: int = 16, max_segment: float = 0.5,
                   tol: float = 1e-12, max_doublings: int = 8) -> float:
    """Line integral of ``2 Re(conj(S(w)) dw)`` from 0 to ``z`` along a polyline.

    Composite Gauss-Legendre with pieces no longer than ``max_segment``; the
    piece count is doubled until two successive sums agree to ``tol``
    (relative, floor 1).
    """
    z = complex(z)
    pts = [0.0j, z] if path is None else [complex(p) for p in path]
    if pts[0] != 0 or abs(pts[-1] - z) > 1e-15 * max(1.0, abs(z)):
        raise ValueError("path must start at 0 and end at z")
    base = [max(1, math.ceil(abs(q - p) / max_segment)) for p, q in zip(pts[:-1], pts[1:])]

    def level(k):
        return math.fsum(_segment_integral(tau, w, p, q, n << k, order)
                         for (p, q), n in zip(zip(pts[:-1], pts[1:]), base))

    prev = level(0)
    for k in range(1, max_doublings + 1):
        cur = level(k)
        if abs(cur - prev) <= tol * max(1.0, abs(cur)):
            return cur
        prev = cur
    raise QuadratureUnconverged(
        f"phase quadrature to z={z} still moving by {abs(cur - prev):.3e} after {max_doublings} doublings"
    )


@dataclass(frozen=True)
class PhiSolution:
    kappa: complex
    mu: float
    closed_form: bool = True
    quadrature_cfg: tuple[int, int] | None = None
    tau: object = field(default=None, repr=False, compare=False)
    weights: Weights | None = field(default=None, repr=False, compare=False)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        if self.closed_form:
            # + 0.0 turns -0.0 into 0.0
            return -2.0 * self.mu * np.imag(np.conj(self.kappa) * z) + 0.0
        per_unit, order = self.quadrature_cfg
        out = np.empty(z.shape)
        for idx, zz in np.ndenumerate(z):
            out[idx] = 0.0 if zz == 0 else phi_quadrature(
                self.tau, self.weights, zz, order=order, max_segment=1.0 / per_unit)
        return out

    @property
    def is_trivial(self) -> bool:
        return self.closed_form and self.kappa == 0


def phi_affine(tau: AffineTau, w: Weights) -> PhiSolution:
    return PhiSolution(kappa=tau.kappa, mu=w.mu, closed_form=True, tau=tau, weights=w)


def phi_numeric(tau, w: Weights, nodes_per_unit: int = 2, order: int = 16) -> PhiSolution:
    """Quadrature-backed phase; ``kappa`` records ``i S(0) / mu`` for reference."""
    k0 = complex(1j * phi_rhs(tau, w, 0.0) / w.mu)
    return PhiSolution(kappa=k0, mu=w.mu, closed_form=False,
                       quadrature_cfg=(nodes_per_unit, order), tau=tau, weights=w)


def solve_phi(tau, w: Weights) -> PhiSolution:
    return phi_affine(tau, w) if isinstance(tau, AffineTau) else phi_numeric(tau, w)


def phi_pde_residual(tau, w: Weights, phi: PhiSolution, samples, h: float = FD_STEP) -> float:
    """Max of ``|dphi/dzbar - S|`` and ``|dphi/dz - conj(S)|`` by central differences."""
    z = np.asarray(samples, dtype=complex)
    dz, dzb = wirtinger(phi, z, h)
    s = phi_rhs(tau, w, z)
    return float(max(np.max(np.abs(dzb - s)), np.max(np.abs(dz - np.conj(s)))))


def reduced_potential(tau, w: Weights, phi: PhiSolution):
    """The auxiliary function ``psi`` with ``phi = i((B-nu)|z|^2 - mu|tau|^2) + 2i mu psi``."""
    def psi(z):
        z = np.asarray(z, dtype=complex)
        return (phi(z) - 1j * ((w.B - w.nu) * np.abs(z) ** 2 - w.mu * np.abs(tau(z)) ** 2)) / (2j * w.mu)
    return psi


def psi_reduction_residual(tau, w: Weights, phi: PhiSolution, samples, h: float = FD_STEP) -> float:
    """Finite-difference residual of the reduced system

        dpsi/dzbar = conj(tau) dtau/dzbar,
        dpsi/dz    = (nu - B)/mu conj(z) + conj(tau) dtau/dz.
    """
    z = np.asarray(samples, dtype=complex)
    psi = reduced_potential(tau, w, phi)
    dz, dzb = wirtinger(psi, z, h)
    tbar = np.conj(tau(z))
    r1 = np.abs(dzb - tbar * tau.dzbar(z))
    r2 = np.abs(dz - ((w.nu - w.B) / w.mu * np.conj(z) + tbar * tau.dz(z)))
    return float(max(np.max(r1, initial=0.0), np.max(r2, initial=0.0)))


def _psi_of(tau, gamma):
    gamma = np.asarray(gamma, dtype=complex)
    if isinstance(tau, AffineTau):
        return tau.c * gamma + tau.d * np.conj(gamma)
    return np.vectorize(lambda g: rho_of_translation(tau, g).psi, otypes=[complex])(gamma)


def chi_tau_phase(tau, w: Weights, phi: PhiSolution, gamma):
    """Real phase of the lattice character: ``phi(gamma) + 2 mu Im<tau(0), rho(gamma)^{-1}.0>``."""
    gamma = np.asarray(gamma, dtype=complex)
    a = -_psi_of(tau, gamma)
    return phi(gamma) + 2.0 * w.mu * np.imag(complex(tau(0.0)) * np.conj(a))


def chi_tau(tau, w: Weights, phi: PhiSolution, gamma):
    """Character ``chi(gamma)`` such that ``e^{i phi} F`` is Landau whenever ``F`` is mixed."""
    return np.exp(1j * chi_tau_phase(tau, w, phi, gamma))


def chi_hat(tau, w: Weights, phi: PhiSolution, gamma, z):
    """``e^{i(phi(z+g) - phi(z))} J((1,g), z) / j^B((1,g), z)`` written out; constant in ``z``."""
    z = np.asarray(z, dtype=complex)
    gamma = complex(gamma)
    a = -complex(_psi_of(tau, gamma))
    phase = (phi(z + gamma) - phi(z)
             + 2.0 * (w.B - w.nu) * np.imag(z * gamma.conjugate())
             + 2.0 * w.mu * np.imag(tau(z) * a.conjugate()))
    return np.exp(1j * phase)


def chi_hat_residual(tau, w: Weights, phi: PhiSolution, gamma, zs) -> float:
    """Spread ``max |chi_hat(z) - chi_hat(0)|`` over ``zs``.

    Raises ``ArithmeticError`` if ``chi_hat(0)`` disagrees with :func:`chi_tau`.
    """
    at0 = complex(chi_hat(tau, w, phi, gamma, 0.0))
    ref = complex(chi_tau(tau, w, phi, gamma))
    if abs(at0 - ref) > CHARACTER_MATCH_TOL:
        raise ArithmeticError(f"chi_hat(0; {gamma}) = {at0} but chi_tau = {ref}")
    vals = chi_hat(tau, w, phi, gamma, zs)
    return float(np.max(np.abs(vals - at0), initial=0.0))


@dataclass(frozen=True)
class CharacterTable:
    """A pseudo-character on a lattice, stored by its generator phases.

    Extended by ``chi(m w1 + n w2) = chi(w1)^m chi(w2)^n exp(2i B m n Im(w1 conj(w2)))``,
    the unique extension obeying the pseudo-character law.
    """

    lattice: object
    theta1: float
    theta2: float
    B: float

    @classmethod
    def from_phi(cls, tau, w: Weights, phi: PhiSolution, lattice) -> CharacterTable:
        t1, t2 = (float(chi_tau_phase(tau, w, phi, om)) for om in lattice.generators)
        return cls(lattice, t1, t2, w.B)

    @classmethod
    def trivial(cls, lattice, B: float) -> CharacterTable:
        return cls(lattice, 0.0, 0.0, B)

    @property
    def values(self) -> tuple[complex, complex]:
        return complex(np.exp(1j * self.theta1)), complex(np.exp(1j * self.theta2))

    def indices(self, gamma):
        s, t = self.lattice.coordinates(gamma)
        return np.rint(s).astype(int), np.rint(t).astype(int)

    def phase(self, gamma):
        m, n = self.indices(gamma)
        w1, w2 = self.lattice.generators
        return m * self.theta1 + n * self.theta2 + 2.0 * self.B * m * n * (w1 * w2.conjugate()).imag

    def __call__(self, gamma):
        return np.exp(1j * self.phase(gamma))


def pseudo_char_residual(tau, w: Weights, phi: PhiSolution, lattice, rng: int = 5) -> float:
    """Max over ``|m|, |n|, |m'|, |n'| <= rng`` of the pseudo-character law defect."""
    k = np.arange(-rng, rng + 1)
    m, n = np.meshgrid(k, k, indexing="ij")
    g = (m * lattice.omega1 + n * lattice.omega2).ravel()
    G, H = np.meshgrid(g, g, indexing="ij")
    cg = chi_tau(tau, w, phi, g)
    lhs = chi_tau(tau, w, phi, G + H)
    rhs = np.exp(2j * w.B * np.imag(G * np.conj(H))) * cg[:, None] * cg[None, :]
    return float(np.max(np.abs(lhs - rhs)))
