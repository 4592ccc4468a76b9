"""Pointwise hyperbolic geometry of the unit disk.

All functions are pure and accept Python complex scalars or numpy arrays.
"""

import numpy as np

from .errors import DegenerateSymbol


class DiskPoint(complex):
    """A complex number strictly inside the unit disk."""

    def __new__(cls, value):
        z = complex(value)
        if not (np.isfinite(z.real) and np.isfinite(z.imag)):
            raise ValueError(f"non-finite disk point {value!r}")
        if abs(z) >= 1.0:
            raise ValueError(f"|z| = {abs(z)!r} is not < 1")
        return super().__new__(cls, z.real, z.imag)


def one_minus_abs2(z):
    z = np.asarray(z)
    return 1.0 - (z.real * z.real + z.imag * z.imag)


def sigma(a, z):
    """Disk automorphism exchanging 0 and ``a``: (a - z) / (1 - conj(a) z)."""
    a = complex(a)
    out = (a - np.asarray(z, dtype=np.complex128)) / (1.0 - np.conj(a) * np.asarray(z, dtype=np.complex128))
    return complex(out) if np.ndim(out) == 0 else out


def sigma_dual(a, z):
    """sigma_a and its derivative, -(1 - |a|^2) / (1 - conj(a) z)^2."""
    a = complex(a)
    z = np.asarray(z, dtype=np.complex128)
    den = 1.0 - np.conj(a) * z
    return (a - z) / den, -(1.0 - abs(a) ** 2) / (den * den)


def rho(z, w):
    """Pseudo-hyperbolic distance |z - w| / |1 - conj(w) z|."""
    z = np.asarray(z, dtype=np.complex128)
    w = np.asarray(w, dtype=np.complex128)
    # 1 - conj(w) z written so that swapping z and w is bit-for-bit symmetric
    re = z.real * w.real + z.imag * w.imag
    im = z.real * w.imag - z.imag * w.real
    out = np.abs(z - w) / np.hypot(1.0 - re, im)
    return float(out) if np.ndim(out) == 0 else out


def hyperbolic_derivative_values(z, value, deriv):
    """(1 - |z|^2) phi'(z) / (1 - |phi(z)|^2) from precomputed value/derivative.

    Entries where |phi(z)| >= 1 come back as nan.
    """
    den = one_minus_abs2(value)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = one_minus_abs2(z) * np.asarray(deriv) / den
    return np.where(den > 0.0, out, np.nan)


def hyperbolic_derivative(phi, z):
    """phi^#(z) for a callable ``phi`` returning (value, derivative)."""
    z_arr = np.asarray(z, dtype=np.complex128)
    v, d = phi(z_arr)
    out = hyperbolic_derivative_values(z_arr, v, d)
    bad = np.isnan(out)
    if np.any(bad):
        where = complex(np.ravel(z_arr)[np.argmax(np.ravel(bad))])
        raise DegenerateSymbol(f"|phi(z)| >= 1 at interior point z = {where!r}")
    return complex(out) if np.ndim(out) == 0 else out
