"""Truncated power series with complex float coefficients."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import TruncationWarning
from .symbols import (
    Blaschke,
    Compose,
    Const,
    Identity,
    Mobius,
    PointwisePower,
    Poly,
    Scale,
    Sigma,
    Symbol,
)

COEFF_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class PowerSeries:
    """Coefficients c_0..c_N of sum c_k z^k, known only up to z^N."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=np.complex128).ravel()
        if c.size == 0:
            raise ValueError("a power series needs at least the constant term")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def order(self):
        return self.coeffs.size - 1

    @classmethod
    def constant(cls, c, order):
        out = np.zeros(order + 1, dtype=np.complex128)
        out[0] = c
        return cls(out)

    @classmethod
    def identity(cls, order):
        out = np.zeros(order + 1, dtype=np.complex128)
        if order >= 1:
            out[1] = 1.0
        return cls(out)

    def truncate(self, order):
        if order > self.order:
            raise ValueError(f"cannot extend a series of order {self.order} to {order}")
        return PowerSeries(self.coeffs[: order + 1])

    def __add__(self, other):
        if not isinstance(other, PowerSeries):
            c = self.coeffs.copy()
            c[0] += other
            return PowerSeries(c)
        n = min(self.order, other.order) + 1
        return PowerSeries(self.coeffs[:n] + other.coeffs[:n])

    __radd__ = __add__

    def __neg__(self):
        return PowerSeries(-self.coeffs)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, PowerSeries):
            return cauchy_product(self, other)
        return PowerSeries(self.coeffs * other)

    __rmul__ = __mul__

    def __call__(self, z):
        """Evaluate the truncated polynomial (value, derivative)."""
        z = np.asarray(z, dtype=np.complex128)
        v, d = _kernels.horner_dual(self.coeffs, z.ravel())
        v, d = v.reshape(z.shape), d.reshape(z.shape)
        return (complex(v), complex(d)) if z.ndim == 0 else (v, d)

    def allclose(self, other, tol=COEFF_TOL):
        n = min(self.order, other.order) + 1
        return bool(np.all(np.abs(self.coeffs[:n] - other.coeffs[:n]) <= tol))

    def __repr__(self):
        head = ", ".join(f"{c:.6g}" for c in self.coeffs[:6])
        more = ", ..." if self.order >= 6 else ""
        return f"PowerSeries([{head}{more}], order={self.order})"


def sigma_series(a, order):
    """Taylor coefficients of (a - z)/(1 - conj(a) z): a, then -(1-|a|^2) conj(a)^l."""
    if order < 1:
        raise ValueError("order must be >= 1")
    a = complex(a)
    c = np.empty(order + 1, dtype=np.complex128)
    c[0] = a
    c[1:] = -(1.0 - abs(a) ** 2) * np.conj(a) ** np.arange(order)
    return PowerSeries(c)


def kernel_series(a, order):
    """(1 - |a|^2) / (1 - conj(a) z) = (1 - |a|^2) sum conj(a)^l z^l."""
    a = complex(a)
    return PowerSeries((1.0 - abs(a) ** 2) * np.conj(a) ** np.arange(order + 1))


def cauchy_product(f, g):
    n = min(f.order, g.order) + 1
    return PowerSeries(_kernels.truncated_convolve(f.coeffs, g.coeffs, n))


def l1_norm(f):
    return float(np.sum(np.abs(f.coeffs)))


def series_power(f, n):
    """f**n by repeated squaring of Cauchy products."""
    result = PowerSeries.constant(1.0, f.order)
    base = f
    while n > 0:
        if n & 1:
            result = cauchy_product(result, base)
        n >>= 1
        if n:
            base = cauchy_product(base, base)
    return result


def series_reciprocal(f):
    """1/f for f(0) != 0, by the standard recursive division."""
    c = f.coeffs
    if c[0] == 0:
        raise ZeroDivisionError("series with zero constant term has no reciprocal")
    n = c.size
    out = np.zeros(n, dtype=np.complex128)
    out[0] = 1.0 / c[0]
    for k in range(1, n):
        out[k] = -np.dot(c[1 : k + 1], out[k - 1 :: -1][:k]) / c[0]
    return PowerSeries(out)


def compose_series(outer, inner):
    """outer(inner(z)) by Horner.

    Exact up to z^N when inner(0) = 0 or outer is a polynomial given in full.
    """
    n = inner.order
    top = outer.order if inner.coeffs[0] != 0 else min(outer.order, n)
    result = PowerSeries.constant(outer.coeffs[top], n)
    for k in range(top - 1, -1, -1):
        result = cauchy_product(result, inner) + outer.coeffs[k]
    return result


def _mobius_apply(expr_coeffs, inner):
    """(a w + b)/(c w + d) with w an arbitrary series."""
    a, b, c, d = expr_coeffs
    num = inner * a + b
    den = inner * c + d
    return cauchy_product(num, series_reciprocal(den))


def _expr_series(expr, inner):
    """Series of expr evaluated at the series ``inner`` (structural recursion)."""
    n = inner.order
    if isinstance(expr, Identity):
        return inner
    if isinstance(expr, Const):
        return PowerSeries.constant(expr.c, n)
    if isinstance(expr, Poly):
        return compose_series(PowerSeries(np.asarray(expr.coeffs, dtype=np.complex128)), inner)
    if isinstance(expr, Mobius):
        return _mobius_apply((expr.a, expr.b, expr.c, expr.d), inner)
    if isinstance(expr, Sigma):
        a = complex(expr.a)
        return _mobius_apply((-1.0, a, -a.conjugate(), 1.0), inner)
    if isinstance(expr, Blaschke):
        out = PowerSeries.constant(expr.unimodular, n)
        for a in expr.zeros:
            a = complex(a)
            out = cauchy_product(out, _mobius_apply((1.0, -a, -a.conjugate(), 1.0), inner))
        return out
    if isinstance(expr, Scale):
        return _expr_series(expr.child, inner) * expr.r
    if isinstance(expr, Compose):
        return _expr_series(expr.outer, _expr_series(expr.inner, inner))
    if isinstance(expr, PointwisePower):
        return series_power(_expr_series(expr.child, inner), expr.n)
    raise TypeError(f"no series rule for {expr!r}")


def taylor_of_symbol(sym, order, check=True):
    """First order+1 Taylor coefficients of a compiled symbol at 0.

    Sigma and Mobius nodes expand as geometric series, Compose by
    substitution, powers by repeated Cauchy products.  With ``check`` the
    truncated series is compared with the evaluator on |z| = 1/2 and a
    TruncationWarning is issued when the gap exceeds 2**-order times a
    scale constant.
    """
    if not isinstance(sym, Symbol):
        sym = Symbol(sym)
    s = _expr_series(sym.expr, PowerSeries.identity(order))
    if check:
        z = 0.5 * np.exp(2j * np.pi * np.arange(64) / 64)
        v_eval, _ = sym(z)
        v_ser, _ = s(z)
        scale = 4.0 * max(1.0, l1_norm(s))
        resid = float(np.max(np.abs(v_eval - v_ser)))
        if not resid <= max(2.0**-order, 1e-12) * scale:
            warnings.warn(
                f"order-{order} Taylor series misses the evaluator by {resid:.3g} on |z| = 1/2",
                TruncationWarning,
                stacklevel=2,
            )
    return s


def sigma_l1_limit(a):
    """l1 norm of the full expansion of sigma_a: |a| + (1 - |a|^2) sum |a|^l = 1 + 2|a|."""
    return 1.0 + 2.0 * abs(complex(a))


def geometric_tail(a, order):
    """l1 mass of sigma_series(a) beyond z^order: (1 + |a|) |a|^order."""
    r = abs(complex(a))
    return (1.0 + r) * r**order if r > 0 else 0.0
