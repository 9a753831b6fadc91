"""Equivariant pairs (rho, tau) and the constant weight B.

The first-class maps are affine, ``tau(z) = c z + d conj(z) + e``; these are
exactly the maps compatible with every translation.  Arbitrary smooth maps can
be wrapped in :class:`SampledTau`, whose derivatives are taken by central
differences; they are meant for verification only.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ._numeric import FD_STEP, wirtinger
from .errors import NotEquivariant
from .group import GroupElement, UNIT_TOL


@dataclass(frozen=True)
class AffineTau:
    c: complex = 1.0
    d: complex = 0.0
    e: complex = 0.0

    def __post_init__(self):
        for name in ("c", "d", "e"):
            v = complex(getattr(self, name))
            if not np.isfinite(v):
                raise ValueError(f"coefficient {name} must be finite")
            object.__setattr__(self, name, v)

    def __call__(self, z):
        return self.c * z + self.d * np.conj(z) + self.e

    def dz(self, z=0.0):
        return np.full(np.shape(z), self.c, dtype=complex)

    def dzbar(self, z=0.0):
        return np.full(np.shape(z), self.d, dtype=complex)

    @property
    def kappa(self) -> complex:
        """``conj(c) e - d conj(e)``: the bracket of the phase equation, constant for affine maps."""
        return self.c.conjugate() * self.e - self.d * self.e.conjugate()


class SampledTau:
    """A smooth map given as a callable; Wirtinger derivatives by central differences."""

    def __init__(self, func: Callable, h: float = FD_STEP, name: str = "sampled"):
        self.func = func
        self.h = h
        self.name = name

    def __call__(self, z):
        return self.func(np.asarray(z, dtype=complex))

    def dz(self, z=0.0):
        return wirtinger(self.func, z, self.h)[0]

    def dzbar(self, z=0.0):
        return wirtinger(self.func, z, self.h)[1]

    def __repr__(self):
        return f"SampledTau({self.name})"


@dataclass(frozen=True)
class RhoImage:
    """``rho(g) = (chi, psi)`` as an element of the motion group."""

    chi: complex
    psi: complex

    def as_group(self) -> GroupElement:
        return GroupElement(self.chi, self.psi)

    @property
    def origin_inverse(self) -> complex:
        """``rho(g)^{-1} . 0``."""
        return -self.chi.conjugate() * self.psi


@dataclass(frozen=True)
class Weights:
    nu: float
    mu: float
    B: float

    def __post_init__(self):
        for name in ("nu", "mu"):
            v = float(getattr(self, name))
            if not (np.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be a positive real, got {v!r}")
            object.__setattr__(self, name, v)
        object.__setattr__(self, "B", float(self.B))


def rho_of_translation(tau, t) -> RhoImage:
    t = complex(t)
    if isinstance(tau, AffineTau):
        return RhoImage(1.0 + 0.0j, tau.c * t + tau.d * t.conjugate())
    return RhoImage(1.0 + 0.0j, complex(tau(t) - tau(0.0)))


def rho_of(tau, g: GroupElement) -> RhoImage:
    """The image of ``g`` under the endomorphism induced by ``tau``.

    ``chi = a`` when ``d = 0``, ``conj(a)`` when ``c = 0`` and ``a`` when ``a``
    is real; ``psi = c b + d conj(b) + e (1 - chi)``.
    """
    if g.is_translation:
        return rho_of_translation(tau, g.b)
    if not isinstance(tau, AffineTau):
        raise NotImplementedError("sampled maps only support translations")
    a = g.a
    if tau.d == 0:
        chi = a
    elif tau.c == 0:
        chi = a.conjugate()
    elif abs(a.imag) <= UNIT_TOL:
        chi = complex(np.sign(a.real))
    else:
        raise NotEquivariant(
            f"tau = ({tau.c})z + ({tau.d})conj(z) + {tau.e} admits no rotation character for a = {a}"
        )
    psi = tau.c * g.b + tau.d * g.b.conjugate() + tau.e * (1 - chi)
    return RhoImage(chi, psi)


def check_equivariance(tau, elements, samples) -> float:
    """Max of ``|tau(g.z) - (chi(g) tau(z) + psi(g))|`` over elements and samples."""
    z = np.asarray(samples, dtype=complex)
    worst = 0.0
    for g in elements:
        r = rho_of(tau, g)
        res = np.abs(tau(g.act(z)) - (r.chi * tau(z) + r.psi))
        worst = max(worst, float(np.max(res, initial=0.0)))
    return worst


def compute_B(tau, nu: float, mu: float) -> Weights:
    """``B = nu + mu (|dtau/dz|^2 - |dtau/dzbar|^2)``, exact for affine maps."""
    if isinstance(tau, AffineTau):
        k = abs(tau.c) ** 2 - abs(tau.d) ** 2
    else:
        k = float(np.abs(tau.dz(0.0)) ** 2 - np.abs(tau.dzbar(0.0)) ** 2)
    return Weights(nu, mu, nu + mu * k)


def local_weight(tau, nu: float, mu: float, z, h: float = FD_STEP):
    """Pointwise weight from finite-difference derivatives of ``tau``."""
    fz, fzb = wirtinger(tau, z, h)
    return nu + mu * (np.abs(fz) ** 2 - np.abs(fzb) ** 2)


def weight_certificate(tau, w: Weights, samples, h: float = FD_STEP) -> float:
    """Sampled constancy certificate: ``max |B(z) - B|`` with ``B(z)`` by finite differences."""
    bz = local_weight(tau, w.nu, w.mu, np.asarray(samples, dtype=complex), h)
    return float(np.max(np.abs(bz - w.B), initial=0.0))


def weight_invariance_residual(tau, w: Weights, g: GroupElement, samples, h: float = FD_STEP) -> float:
    z = np.asarray(samples, dtype=complex)
    diff = local_weight(tau, w.nu, w.mu, z, h) - local_weight(tau, w.nu, w.mu, g.act(z), h)
    return float(np.max(np.abs(diff), initial=0.0))
