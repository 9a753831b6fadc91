"""Uniform lattices Z*omega1 + Z*omega2 in the plane."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

DEGENERACY_TOL = 1e-12


@dataclass(frozen=True)
class Lattice:
    omega1: complex
    omega2: complex

    def __post_init__(self):
        w1, w2 = complex(self.omega1), complex(self.omega2)
        object.__setattr__(self, "omega1", w1)
        object.__setattr__(self, "omega2", w2)
        if abs((w1.conjugate() * w2).imag) <= DEGENERACY_TOL:
            raise ValueError(f"lattice generators {w1} and {w2} are collinear")

    @property
    def generators(self) -> tuple[complex, complex]:
        return self.omega1, self.omega2

    @property
    def cell_area(self) -> float:
        return cell_area(self)

    @property
    def diameter(self) -> float:
        """Longest diagonal of the fundamental cell."""
        return max(abs(self.omega1 + self.omega2), abs(self.omega1 - self.omega2))

    def _basis(self) -> np.ndarray:
        return np.array([[self.omega1.real, self.omega2.real],
                         [self.omega1.imag, self.omega2.imag]])

    def coordinates(self, z):
        """Real coordinates ``(s, t)`` with ``z = s*omega1 + t*omega2``."""
        z = np.asarray(z, dtype=complex)
        inv = np.linalg.inv(self._basis())
        s = inv[0, 0] * z.real + inv[0, 1] * z.imag
        t = inv[1, 0] * z.real + inv[1, 1] * z.imag
        return s, t

    def point(self, m, n):
        return np.asarray(m) * self.omega1 + np.asarray(n) * self.omega2

    def enumerate_points(self, radius: float, center: complex = 0.0):
        return enumerate_points(self, radius, center)

    def cell_grid(self, nx: int, ny: int | None = None) -> np.ndarray:
        """``s*omega1 + t*omega2`` for ``s, t`` on a regular ``[0, 1)`` grid, shape ``(ny, nx)``."""
        ny = nx if ny is None else ny
        s = np.arange(nx) / nx
        t = np.arange(ny) / ny
        S, T = np.meshgrid(s, t)
        return S * self.omega1 + T * self.omega2


def cell_area(L: Lattice) -> float:
    return abs((L.omega1.conjugate() * L.omega2).imag)


def enumerate_points(L: Lattice, radius: float, center: complex = 0.0):
    """All ``(gamma, m, n)`` with ``|gamma - center| <= radius``, lexicographic in ``(m, n)``.

    Coefficient bounds come from the rows of the inverse basis matrix, so the
    search box is tight for skewed lattices as well.
    """
    if radius < 0:
        raise ValueError("radius must be non-negative")
    center = complex(center)
    inv = np.linalg.inv(L._basis())
    mc, nc = L.coordinates(center)
    dm = radius * math.hypot(*inv[0])
    dn = radius * math.hypot(*inv[1])
    out = []
    for m in range(math.floor(mc - dm), math.ceil(mc + dm) + 1):
        for n in range(math.floor(nc - dn), math.ceil(nc + dn) + 1):
            g = m * L.omega1 + n * L.omega2
            if abs(g - center) <= radius:
                out.append((g, m, n))
    return out


def index_array(L: Lattice, radius: float, center: complex = 0.0):
    """Vectorised ``enumerate_points``: arrays ``(gamma, m, n)`` in the same order."""
    pts = enumerate_points(L, radius, center)
    if not pts:
        return np.zeros(0, complex), np.zeros(0, int), np.zeros(0, int)
    g, m, n = zip(*pts)
    return np.array(g, complex), np.array(m, int), np.array(n, int)
