"""Small numerical kernels: compensated sums, Wirtinger differences, Gauss-Legendre."""
from functools import lru_cache

import numpy as np

FD_STEP = 1e-5


def kahan_sum(terms, axis=-1):
    """Compensated sum of ``terms`` along ``axis``, in index order.

    Works for real and complex arrays; the loop runs over ``axis`` and is
    vectorised over every other axis.
    """
    terms = np.moveaxis(np.asarray(terms), axis, 0)
    total = np.zeros(terms.shape[1:], dtype=terms.dtype)
    comp = np.zeros_like(total)
    for t in terms:
        y = t - comp
        s = total + y
        comp = (s - total) - y
        total = s
    return total


def wirtinger(f, z, h=FD_STEP):
    """Central-difference Wirtinger derivatives ``(df/dz, df/dzbar)`` of ``f`` at ``z``."""
    z = np.asarray(z, dtype=complex)
    fx = (f(z + h) - f(z - h)) / (2 * h)
    fy = (f(z + 1j * h) - f(z - 1j * h)) / (2 * h)
    return 0.5 * (fx - 1j * fy), 0.5 * (fx + 1j * fy)


@lru_cache(maxsize=None)
def gauss_legendre(order):
    x, w = np.polynomial.legendre.leggauss(order)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w
