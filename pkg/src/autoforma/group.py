"""The motion group G = T x| C of the plane and its action z -> a z + b."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

UNIT_TOL = 1e-14


@dataclass(frozen=True)
class GroupElement:
    """An element ``(a, b)`` with ``|a| = 1``, acting by ``z -> a*z + b``."""

    a: complex = 1.0 + 0.0j
    b: complex = 0.0 + 0.0j

    def __post_init__(self):
        a, b = complex(self.a), complex(self.b)
        if not (np.isfinite(a) and np.isfinite(b)):
            raise ValueError(f"non-finite group element ({a}, {b})")
        if abs(abs(a) - 1.0) > UNIT_TOL:
            raise ValueError(f"rotation part must have unit modulus, got |a| = {abs(a)!r}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    def act(self, z):
        return self.a * z + self.b

    __call__ = act

    def inverse(self) -> GroupElement:
        return inverse(self)

    def __mul__(self, other: GroupElement) -> GroupElement:
        return compose(self, other)

    @property
    def is_translation(self) -> bool:
        return self.a == 1.0


IDENTITY = GroupElement(1.0, 0.0)


def translation(t) -> GroupElement:
    return GroupElement(1.0, complex(t))


def rotation(a) -> GroupElement:
    return GroupElement(complex(a), 0.0)


def compose(g: GroupElement, h: GroupElement) -> GroupElement:
    """``g h``, so that ``act(compose(g, h), z) == act(g, act(h, z))``."""
    a = g.a * h.a
    # renormalise so |a| = 1 survives long products
    a = a / abs(a)
    return GroupElement(a, g.a * h.b + g.b)


def inverse(g: GroupElement) -> GroupElement:
    a_bar = g.a.conjugate()
    return GroupElement(a_bar, -a_bar * g.b)


def act(g: GroupElement, z):
    return g.a * z + g.b


def orbit_origin_inverse(g: GroupElement) -> complex:
    """``g^{-1} . 0``, the point that enters every automorphy factor."""
    return -g.a.conjugate() * g.b
