"""Geometry checks written from scratch, independent of the spectral certificates."""

import math

import numpy as np


def regular_polygon_error(z, units=None):
    """Distance of complex points ``z[g]`` from ``c + a * exp(2 pi i u g / r)``.

    Minimized over the center ``c``, the complex scale ``a`` and the unit ``u``
    by least squares.  Returns ``(error, |a|)``.
    """
    z = np.asarray(z, dtype=complex)
    r = z.size
    units = units or [u for u in range(1, r) if math.gcd(u, r) == 1]
    best = (np.inf, 0.0)
    for u in units:
        basis = np.stack([np.ones(r), np.exp(2j * np.pi * u * np.arange(r) / r)], axis=1)
        coef, *_ = np.linalg.lstsq(basis, z, rcond=None)
        err = float(np.max(np.abs(basis @ coef - z)))
        if err < best[0]:
            best = (err, float(abs(coef[1])))
    return best


def side_lengths(z):
    z = np.asarray(z, dtype=complex)
    return np.abs(np.roll(z, -1) - z)
