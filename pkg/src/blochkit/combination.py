"""Linear combinations sum_i lambda_i C_{phi_i}."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .symbols import Symbol, compile_symbol

LAMBDA_ZERO_TOL = 0.0


@dataclass(frozen=True, eq=False)
class CombinationSpec:
    terms: tuple

    def __post_init__(self):
        terms = tuple((complex(lam), sym) for lam, sym in self.terms)
        if not terms:
            raise ValueError("a combination needs at least one term")
        for i, (lam, sym) in enumerate(terms):
            if abs(lam) <= LAMBDA_ZERO_TOL:
                raise ValueError(f"term {i + 1}: scalars must be nonzero")
            if not isinstance(sym, Symbol):
                raise TypeError(f"term {i + 1}: expected a compiled Symbol, got {type(sym).__name__}")
            if sym.report is None:
                raise ValueError(f"term {i + 1}: symbol {sym.text} has not been validated")
        object.__setattr__(self, "terms", terms)

    @classmethod
    def of(cls, *pairs):
        """``CombinationSpec.of((1, "z"), (-1, sym))``; strings are compiled."""
        return cls(tuple((lam, compile_symbol(s) if isinstance(s, str) else s) for lam, s in pairs))

    @property
    def k(self):
        return len(self.terms)

    @property
    def lambdas(self):
        return np.array([lam for lam, _ in self.terms], dtype=np.complex128)

    @property
    def symbols(self):
        return [sym for _, sym in self.terms]

    def scaled(self, t):
        return CombinationSpec(tuple((t * lam, sym) for lam, sym in self.terms))

    def power(self, n):
        """Evaluatable z -> sum_i lambda_i phi_i(z)**n."""
        return PowerCombination(self, int(n))

    def describe(self):
        return [{"lambda": [lam.real, lam.imag], "symbol": sym.text} for lam, sym in self.terms]


class PowerCombination:
    def __init__(self, spec, n):
        if n < 1:
            raise ValueError("n must be >= 1")
        self.spec = spec
        self.n = n

    def __call__(self, z):
        z = np.asarray(z, dtype=np.complex128)
        if z.ndim == 0:
            v = d = 0j
            for lam, sym in self.spec.terms:
                pv, pd = sym(z)
                qv, qd = _kernels.dual_pow_scalar(complex(pv), complex(pd), self.n)
                v += lam * qv
                d += lam * qd
            return v, d
        v = np.zeros(z.shape, dtype=np.complex128)
        d = np.zeros(z.shape, dtype=np.complex128)
        for lam, sym in self.spec.terms:
            pv, pd = sym(z)
            qv, qd = _kernels.dual_pow(pv, pd, self.n)
            v += lam * qv
            d += lam * qd
        if z.ndim == 0:
            return complex(v), complex(d)
        return v, d
