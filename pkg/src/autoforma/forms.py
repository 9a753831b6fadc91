"""Landau automorphic functions by lattice averaging, and the gauge transform to mixed forms.

A Landau function of weight ``B`` and character ``chi`` satisfies
``F(z + g) = chi(g) j^B((1, g), z) F(z)`` for every lattice vector ``g``.  It is
produced here as the Poincare-type average

    F(z) = sum_g conj(chi(g) j^B((1, g), z)) seed(z + g)

of a Gaussian seed.  Multiplying by ``exp(-i phi)`` turns it into a mixed
form of type ``(nu, mu)``; multiplying a mixed form by ``exp(i phi)`` goes back.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from ._numeric import kahan_sum
from .automorphy import J_translation, check_integrality, landau_factor
from .errors import IntegralityViolated, NonPositiveWeight, NumericallyVanishing, SeriesTruncationError
from .lattice import Lattice, index_array
from .phi import CharacterTable, PhiSolution, solve_phi

VANISHING_TOL = 1e-8
SCAN_GRID = 32
CHUNK = 4096


@dataclass(frozen=True)
class FormEvaluator:
    kind: str
    B: float
    func: Callable = field(repr=False, compare=False)
    character: CharacterTable | None = None
    truncation_radius: float = math.inf
    seed_center: complex = 0.0j
    fallbacks: int = 0

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return self.func(z)

    def metadata(self) -> dict:
        chi = self.character
        return {
            "kind": self.kind,
            "B": self.B,
            "truncation_radius": self.truncation_radius,
            "seed_center": [self.seed_center.real, self.seed_center.imag],
            "seed_fallbacks": self.fallbacks,
            "character_phases": None if chi is None else [chi.theta1, chi.theta2],
        }


def gaussian_seed(B: float, center: complex = 0.0) -> FormEvaluator:
    """``exp(-(B/2) |z - center|^2)``."""
    if not B > 0:
        raise NonPositiveWeight(f"a decaying seed needs B > 0, got {B}")
    center = complex(center)

    def seed(z):
        return np.exp(-0.5 * B * np.abs(z - center) ** 2) + 0j

    return FormEvaluator("seed", B, seed, seed_center=center)


def tail_bound(lattice: Lattice, B: float, radius: float) -> float:
    """Upper bound for ``sum exp(-(B/2)|p|^2)`` over points ``|p| > radius`` of any lattice translate.

    A disk of radius ``r`` holds at most ``pi (r + D)^2 / area`` points, ``D``
    the cell diameter; the tail is bounded shell by shell.
    """
    D, A = lattice.diameter, lattice.cell_area
    total, k = 0.0, 0
    while True:
        r = radius + k
        term = math.pi * (r + 1 + D) ** 2 / A * math.exp(-0.5 * B * r * r)
        total += term
        if term < 1e-300 or term < 1e-18 * total:
            return total
        k += 1


def choose_radius(lattice: Lattice, B: float, tol: float, max_radius: float = 50.0) -> float:
    r = 0.0
    while tail_bound(lattice, B, r) >= tol:
        r += 0.25
        if r > max_radius:
            raise SeriesTruncationError(
                f"tail bound {tol:g} needs a truncation radius above max_radius={max_radius}")
    return r


def _lattice_average(lattice: Lattice, chi: CharacterTable, B: float, center: complex, radius: float):
    """Evaluator summing every term with ``|z + g - center| <= radius``, in enumeration order."""
    reach = radius + 0.5 * (abs(lattice.omega1) + abs(lattice.omega2)) + 1e-9
    offsets, _, _ = index_array(lattice, reach)

    def evaluate(z):
        shape = z.shape
        flat = z.ravel()
        out = np.empty(flat.shape, dtype=complex)
        for lo in range(0, flat.size, CHUNK):
            zc = flat[lo:lo + CHUNK]
            s, t = lattice.coordinates(center - zc)
            base = np.rint(s) * lattice.omega1 + np.rint(t) * lattice.omega2
            g = base[:, None] + offsets[None, :]
            rel = zc[:, None] + g - center
            dist2 = np.abs(rel) ** 2
            # conj(chi(g) j^B(g, z)) as a single phase
            phase = chi.phase(g) + 2.0 * B * np.imag(zc[:, None] * np.conj(-g))
            terms = np.where(dist2 <= radius * radius,
                             np.exp(-0.5 * B * dist2 - 1j * phase), 0.0)
            out[lo:lo + CHUNK] = kahan_sum(terms, axis=1)
        return out.reshape(shape)

    return evaluate


def probe_points(lattice: Lattice, count: int, rng_seed: int = 0, box: float | None = None, span: int = 3):
    """Deterministic probe pairs ``(z, gamma)``.

    ``z`` is uniform in the square ``|Re z|, |Im z| <= box`` (default: twice the
    longest generator) and ``gamma = m w1 + n w2`` with ``|m|, |n| <= span``.
    """
    rng = np.random.default_rng(rng_seed)
    if box is None:
        box = 2.0 * max(abs(lattice.omega1), abs(lattice.omega2))
    z = rng.uniform(-box, box, count) + 1j * rng.uniform(-box, box, count)
    m = rng.integers(-span, span + 1, count)
    n = rng.integers(-span, span + 1, count)
    return z, lattice.point(m, n)


def landau_residual(F, chi, B: float, z, gamma):
    """``|F(z+g) - chi(g) j^B(g, z) F(z)| / max(1, |F(z)|)``."""
    z = np.asarray(z, dtype=complex)
    gamma = np.asarray(gamma, dtype=complex)
    fz = F(z)
    res = np.abs(F(z + gamma) - chi(gamma) * landau_factor(B, gamma, z) * fz) / np.maximum(1.0, np.abs(fz))
    return res if res.ndim else float(res)


def mixed_residual(F, tau, w, z, gamma):
    """``|F(z+g) - J((1,g), z) F(z)| / max(1, |F(z)|)``."""
    z = np.asarray(z, dtype=complex)
    gamma = np.asarray(gamma, dtype=complex)
    fz = F(z)
    res = np.abs(F(z + gamma) - J_translation(tau, w, gamma, z) * fz) / np.maximum(1.0, np.abs(fz))
    return res if res.ndim else float(res)


def nontriviality_scan(F, lattice: Lattice, grid: int = SCAN_GRID) -> float:
    """Max ``|F|`` over a ``grid x grid`` sampling of the fundamental cell."""
    return float(np.max(np.abs(F(lattice.cell_grid(grid)))))


def poincare_landau(seed: FormEvaluator, chi: CharacterTable, lattice: Lattice, tol: float = 1e-10, *,
                    tau=None, weights=None, max_radius: float = 50.0, probes: int = 20,
                    rng_seed: int = 0) -> FormEvaluator:
    """Average ``seed`` over the lattice into a Landau function of weight ``chi.B``.

    The truncation radius is the smallest multiple of 1/4 whose Gaussian tail
    bound is below ``tol``.  If the average is numerically zero on the cell,
    the seed is re-centred at ``w1/3``, ``w2/3`` and ``(w1+w2)/3`` in turn.
    Construction checks ``probes`` random pairs against ``10 * tol``.
    """
    B = chi.B
    if tau is not None and weights is not None:
        ok, table = check_integrality(tau, weights, lattice)
        if not ok:
            raise IntegralityViolated(f"phase/pi on generator pairs is not integral: {table.tolist()}")
    if not B > 0:
        raise NonPositiveWeight(f"lattice averaging needs B > 0, got {B}")
    radius = choose_radius(lattice, B, tol, max_radius)
    w1, w2 = lattice.generators
    shifts = (0.0, w1 / 3, w2 / 3, (w1 + w2) / 3)
    best = 0.0
    for k, shift in enumerate(shifts):
        center = seed.seed_center + shift
        F = FormEvaluator("landau", B, _lattice_average(lattice, chi, B, center, radius), chi,
                          radius, center, k)
        best = nontriviality_scan(F, lattice)
        if best >= VANISHING_TOL:
            break
    else:
        raise NumericallyVanishing(f"max |F| on the cell is {best:.3e} for every seed centre")
    z, g = probe_points(lattice, probes, rng_seed)
    worst = float(np.max(landau_residual(F, chi, B, z, g)))
    if worst > 10 * tol:
        raise SeriesTruncationError(f"construction probe residual {worst:.3e} exceeds {10 * tol:.1e}")
    return F


def apply_gauge(phi: PhiSolution, f, direction: str = "forward") -> FormEvaluator:
    """``exp(+i phi) f`` (forward: mixed to Landau) or ``exp(-i phi) f`` (inverse)."""
    if direction not in ("forward", "inverse"):
        raise ValueError(f"direction must be 'forward' or 'inverse', got {direction!r}")
    sign = 1.0 if direction == "forward" else -1.0

    def gauged(z):
        return np.exp(sign * 1j * phi(z)) * f(z)

    if isinstance(f, FormEvaluator):
        kind = "landau" if direction == "forward" else "mixed"
        return replace(f, kind=kind, func=gauged)
    return FormEvaluator("landau" if sign > 0 else "mixed", math.nan, gauged)


def build_forms(tau, weights, lattice: Lattice, tol: float = 1e-10, *, max_radius: float = 50.0,
                rng_seed: int = 0, phi: PhiSolution | None = None):
    """Phase, character table, a Landau function and its mixed image, for one configuration."""
    phi = solve_phi(tau, weights) if phi is None else phi
    chi = CharacterTable.from_phi(tau, weights, phi, lattice)
    landau = poincare_landau(gaussian_seed(weights.B), chi, lattice, tol, tau=tau, weights=weights,
                             max_radius=max_radius, rng_seed=rng_seed)
    mixed = apply_gauge(phi, landau, "inverse")
    return phi, chi, landau, mixed
