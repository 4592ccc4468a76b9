"""Analytic self-maps of the disk as small expression trees.

Grammar (whitespace-insensitive)::

    E := z | const(c) | sigma(a) | mobius(a, b, c, d)
       | blaschke([a1, ..., am]; u) | blaschke([a1, ..., am])
       | poly([c0, ..., cm]) | scale(r, E) | compose(E1, E2) | pow(E, n)

Complex literals are ``x``, ``yi``, ``x+yi`` or ``x-yi``.  ``format_symbol``
prints exactly this grammar and ``parse_symbol(format_symbol(e)) == e``.

Evaluation carries a first-order perturbation through every node (forward
mode dual numbers), so a compiled :class:`Symbol` returns value and
derivative together.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Union

import numpy as np
from scipy.optimize import minimize_scalar

from . import _kernels
from .errors import InvalidSelfMap, ParseError

MAX_POWER = 10**6
UNIMODULAR_TOL = 1e-12
VALIDATION_TOL = 1e-9
STRICT_MARGIN = 1e-6


class Dual:
    """Arrays ``val + der * eps`` with eps**2 = 0."""

    __slots__ = ("val", "der")
    __array_ufunc__ = None

    def __init__(self, val, der):
        self.val = val
        self.der = der

    @staticmethod
    def _lift(x):
        return x if isinstance(x, Dual) else Dual(x, 0.0)

    def __add__(self, other):
        o = self._lift(other)
        return Dual(self.val + o.val, self.der + o.der)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        return Dual(self.val - o.val, self.der - o.der)

    def __rsub__(self, other):
        return self._lift(other) - self

    def __neg__(self):
        return Dual(-self.val, -self.der)

    def __mul__(self, other):
        if not isinstance(other, Dual):
            return Dual(self.val * other, self.der * other)
        return Dual(self.val * other.val, self.val * other.der + self.der * other.val)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        q = self.val / o.val
        return Dual(q, (self.der - q * o.der) / o.val)

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def __pow__(self, n):
        v, d = _kernels.dual_pow(self.val, self.der, int(n))
        return Dual(v, d)


# ---------------------------------------------------------------------------
# expression tree


def _check_disk(a, what):
    if not abs(a) < 1.0:
        raise ValueError(f"{what} must lie in the open disk, got {a!r}")


@dataclass(frozen=True)
class Identity:
    def evaluate(self, x):
        return x


@dataclass(frozen=True)
class Const:
    c: complex

    def __post_init__(self):
        if abs(self.c) > 1.0:
            raise ValueError(f"const value {self.c!r} has modulus > 1")

    def evaluate(self, x):
        return Dual(np.full_like(x.val, self.c), np.zeros_like(x.val))


@dataclass(frozen=True)
class Mobius:
    a: complex
    b: complex
    c: complex
    d: complex

    def evaluate(self, x):
        return (self.a * x + self.b) / (self.c * x + self.d)


@dataclass(frozen=True)
class Sigma:
    a: complex

    def __post_init__(self):
        _check_disk(self.a, "sigma centre")

    def evaluate(self, x):
        return (self.a - x) / (1.0 - complex(self.a).conjugate() * x)


@dataclass(frozen=True)
class Blaschke:
    zeros: tuple
    unimodular: complex = 1.0

    def __post_init__(self):
        for a in self.zeros:
            _check_disk(a, "Blaschke zero")
        if abs(abs(self.unimodular) - 1.0) > UNIMODULAR_TOL:
            raise ValueError(f"unimodular factor {self.unimodular!r} is not of modulus 1")

    def evaluate(self, x):
        out = Dual(np.full_like(x.val, self.unimodular), np.zeros_like(x.val))
        for a in self.zeros:
            out = out * ((x - a) / (1.0 - complex(a).conjugate() * x))
        return out


@dataclass(frozen=True)
class Poly:
    coeffs: tuple

    def __post_init__(self):
        if not self.coeffs:
            raise ValueError("poly needs at least one coefficient")

    def evaluate(self, x):
        v, d = _kernels.horner_dual(np.asarray(self.coeffs, dtype=np.complex128), x.val)
        return Dual(v, d * x.der)


@dataclass(frozen=True)
class Scale:
    r: complex
    child: "SymbolExpr"

    def evaluate(self, x):
        return self.child.evaluate(x) * self.r


@dataclass(frozen=True)
class Compose:
    outer: "SymbolExpr"
    inner: "SymbolExpr"

    def evaluate(self, x):
        return self.outer.evaluate(self.inner.evaluate(x))


@dataclass(frozen=True)
class PointwisePower:
    child: "SymbolExpr"
    n: int

    def __post_init__(self):
        if not (1 <= int(self.n) <= MAX_POWER) or int(self.n) != self.n:
            raise ValueError(f"power must be an integer in [1, {MAX_POWER}], got {self.n!r}")

    def evaluate(self, x):
        return self.child.evaluate(x) ** self.n


SymbolExpr = Union[Identity, Const, Mobius, Sigma, Blaschke, Poly, Scale, Compose, PointwisePower]


def declared_sup(expr):
    """A structural upper bound on sup |phi| over the disk, or None."""
    if isinstance(expr, Identity):
        return 1.0
    if isinstance(expr, Const):
        return abs(expr.c)
    if isinstance(expr, (Sigma, Blaschke)):
        return 1.0
    if isinstance(expr, Poly):
        return float(sum(abs(c) for c in expr.coeffs))
    if isinstance(expr, Scale):
        s = declared_sup(expr.child)
        return None if s is None else abs(expr.r) * s
    if isinstance(expr, Compose):
        so, si = declared_sup(expr.outer), declared_sup(expr.inner)
        # the outer bound only holds on the disk
        return so if (so is not None and si is not None and si <= 1.0) else None
    if isinstance(expr, PointwisePower):
        s = declared_sup(expr.child)
        return None if s is None else s**expr.n
    return None


# ---------------------------------------------------------------------------
# printer


def format_complex(c):
    c = complex(c)
    re_, im = c.real + 0.0, c.imag + 0.0

    def num(x):
        s = repr(float(x))
        return s[:-2] if s.endswith(".0") else s

    if im == 0.0:
        return num(re_)
    sign = "-" if im < 0 else "+"
    return f"{num(re_)}{sign}{num(abs(im))}i"


def format_symbol(expr):
    """Canonical text of an expression tree."""
    if isinstance(expr, Identity):
        return "z"
    if isinstance(expr, Const):
        return f"const({format_complex(expr.c)})"
    if isinstance(expr, Sigma):
        return f"sigma({format_complex(expr.a)})"
    if isinstance(expr, Mobius):
        args = ",".join(format_complex(v) for v in (expr.a, expr.b, expr.c, expr.d))
        return f"mobius({args})"
    if isinstance(expr, Blaschke):
        zs = ",".join(format_complex(a) for a in expr.zeros)
        return f"blaschke([{zs}]; {format_complex(expr.unimodular)})"
    if isinstance(expr, Poly):
        return f"poly([{','.join(format_complex(c) for c in expr.coeffs)}])"
    if isinstance(expr, Scale):
        return f"scale({format_complex(expr.r)}, {format_symbol(expr.child)})"
    if isinstance(expr, Compose):
        return f"compose({format_symbol(expr.outer)}, {format_symbol(expr.inner)})"
    if isinstance(expr, PointwisePower):
        return f"pow({format_symbol(expr.child)}, {expr.n})"
    raise TypeError(f"not a symbol expression: {expr!r}")


# ---------------------------------------------------------------------------
# parser

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)(?P<imag>i)?"
    r"|(?P<name>[A-Za-z_]\w*)|(?P<punct>[()\[\],;+\-]))"
)


class _Parser:
    def __init__(self, text):
        self.text = text
        self.toks = []
        pos = 0
        while True:
            while pos < len(text) and text[pos].isspace():
                pos += 1
            if pos >= len(text):
                break
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
            start = m.start(m.lastgroup) if m.lastgroup else pos
            if m.group("num") is not None:
                kind = "imag" if m.group("imag") else "num"
                self.toks.append((kind, m.group("num"), start))
            elif m.group("name") is not None:
                self.toks.append(("name", m.group("name"), start))
            else:
                self.toks.append((m.group("punct"), m.group("punct"), start))
            pos = m.end()
        self.i = 0

    def peek(self, off=0):
        j = self.i + off
        return self.toks[j] if j < len(self.toks) else ("eof", "", len(self.text))

    def take(self, kind=None):
        tok = self.peek()
        if kind is not None and tok[0] != kind:
            found = tok[1] if tok[0] != "eof" else "end of input"
            raise ParseError(f"expected {kind!r}, found {found!r}", tok[2], self.text)
        self.i += 1
        return tok

    # literal := [sign] term [(+|-) imagterm]
    def _term(self):
        """Returns (value, is_imaginary) for a number, ``Ni`` or bare ``i``."""
        kind, val, pos = self.peek()
        if kind == "num":
            self.take()
            return float(val), False
        if kind == "imag":
            self.take()
            return float(val), True
        if kind == "name" and val == "i":
            self.take()
            return 1.0, True
        raise ParseError("expected a number", pos, self.text)

    def literal(self):
        sign = 1.0
        if self.peek()[0] in ("+", "-"):
            sign = -1.0 if self.take()[0] == "-" else 1.0
        x, imag = self._term()
        value = complex(0.0, sign * x) if imag else complex(sign * x, 0.0)
        if not imag and self.peek()[0] in ("+", "-"):
            nxt = self.peek(1)
            if nxt[0] == "imag" or (nxt[0] == "name" and nxt[1] == "i"):
                s = -1.0 if self.take()[0] == "-" else 1.0
                y, _ = self._term()
                value = complex(value.real, s * y)
        return value

    def literal_list(self):
        self.take("[")
        out = []
        if self.peek()[0] != "]":
            out.append(self.literal())
            while self.peek()[0] == ",":
                self.take()
                out.append(self.literal())
        self.take("]")
        return tuple(out)

    def expr(self):
        kind, name, pos = self.take("name")
        if name == "z":
            return Identity()
        self.take("(")
        try:
            node = self._call(name, pos)
        except ValueError as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(str(exc), pos, self.text) from exc
        self.take(")")
        return node

    def _call(self, name, pos):
        if name == "const":
            return Const(self.literal())
        if name == "sigma":
            return Sigma(self.literal())
        if name == "mobius":
            vals = [self.literal()]
            for _ in range(3):
                self.take(",")
                vals.append(self.literal())
            return Mobius(*vals)
        if name == "blaschke":
            zeros = self.literal_list()
            u = 1.0 + 0j
            if self.peek()[0] in (";", ","):
                self.take()
                u = self.literal()
            return Blaschke(zeros, u)
        if name == "poly":
            return Poly(self.literal_list())
        if name == "scale":
            r = self.literal()
            self.take(",")
            return Scale(r, self.expr())
        if name == "compose":
            outer = self.expr()
            self.take(",")
            return Compose(outer, self.expr())
        if name == "pow":
            child = self.expr()
            self.take(",")
            kind, val, npos = self.take("num")
            if not re.fullmatch(r"\d+", val):
                raise ParseError("pow exponent must be a positive integer", npos, self.text)
            return PointwisePower(child, int(val))
        raise ParseError(f"unknown symbol constructor {name!r}", pos, self.text)


def parse_symbol(text):
    p = _Parser(text)
    node = p.expr()
    if p.peek()[0] != "eof":
        raise ParseError(f"trailing input {p.peek()[1]!r}", p.peek()[2], text)
    return node


# ---------------------------------------------------------------------------
# compiled symbols


@dataclass
class ValidationReport:
    accepted: bool
    sup_estimate: float
    witness: complex
    strict: bool
    radii: int
    angles: int
    max_radius: float
    message: str = ""

    def to_dict(self):
        return {
            "accepted": self.accepted,
            "sup_estimate": self.sup_estimate,
            "witness": [self.witness.real, self.witness.imag],
            "strict": self.strict,
            "radii": self.radii,
            "angles": self.angles,
            "max_radius": self.max_radius,
            "message": self.message,
        }


@dataclass(eq=False)
class Symbol:
    """A compiled self-map: ``sym(z) -> (phi(z), phi'(z))``."""

    expr: SymbolExpr
    declared_sup: float | None = None
    report: ValidationReport | None = field(default=None, repr=False)

    def __call__(self, z):
        z = np.asarray(z, dtype=np.complex128)
        out = self.expr.evaluate(Dual(z, np.ones_like(z)))
        v = np.broadcast_to(out.val, z.shape)
        d = np.broadcast_to(out.der, z.shape)
        if z.ndim == 0:
            return complex(v), complex(d)
        return np.array(v), np.array(d)

    def value(self, z):
        return self(z)[0]

    @property
    def text(self):
        return format_symbol(self.expr)

    def __repr__(self):
        return f"Symbol({self.text!r})"


def validation_radii(max_radius=1.0 - 1e-8):
    ks = np.arange(1, 64)
    r = 1.0 - 2.0 ** (-ks.astype(float))
    r = r[r < max_radius]
    return np.concatenate(([0.0], r, [max_radius]))


def validate_self_map(sym, resolution=1024, max_radius=1.0 - 1e-8):
    """Estimate sup |phi| on boundary-clustered circles; raise InvalidSelfMap if > 1 + 1e-9.

    Only circles are sampled: by maximum modulus the supremum sits on the
    outer ones.  The returned report's ``strict`` flag means sup < 1 - 1e-6.
    """
    radii = validation_radii(max_radius)
    theta = 2.0 * np.pi * np.arange(resolution) / resolution
    z = radii[:, None] * np.exp(1j * theta)[None, :]
    with np.errstate(all="ignore"):
        v, _ = sym(z)
    mod = np.abs(v)
    bad = ~np.isfinite(mod)
    if np.any(bad):
        w = complex(z.ravel()[np.argmax(bad.ravel())])
        rep = ValidationReport(False, float("inf"), w, False, radii.size, resolution, max_radius,
                               "non-finite value inside the disk")
        exc = InvalidSelfMap(f"{sym.text}: non-finite value at z = {w!r}", witness=w, value=float("inf"))
        exc.report = rep
        raise exc
    idx = np.unravel_index(np.argmax(mod), mod.shape)
    best, wit = float(mod[idx]), complex(z[idx])

    # polish the angle on the outer circle
    r_out = radii[-1]
    col = int(np.argmax(mod[-1]))
    h = 2.0 * np.pi / resolution

    def neg(t):
        with np.errstate(all="ignore"):
            val = abs(sym(complex(r_out * np.exp(1j * t)))[0])
        return -val if np.isfinite(val) else -np.inf

    res = minimize_scalar(neg, bounds=(theta[col] - h, theta[col] + h), method="bounded",
                          options={"xatol": 1e-12})
    if -res.fun > best:
        best, wit = float(-res.fun), complex(r_out * np.exp(1j * res.x))

    accepted = best <= 1.0 + VALIDATION_TOL
    rep = ValidationReport(accepted, best, wit, best < 1.0 - STRICT_MARGIN, radii.size, resolution,
                           float(r_out), "" if accepted else "sup |phi| exceeds 1")
    if not accepted:
        exc = InvalidSelfMap(f"{sym.text}: |phi| = {best:.12g} > 1 at z = {wit!r}", witness=wit, value=best)
        exc.report = rep
        raise exc
    return rep


def compile_symbol(expr, validate=True, resolution=1024):
    if isinstance(expr, str):
        expr = parse_symbol(expr)
    sym = Symbol(expr, declared_sup(expr))
    if validate:
        sym.report = validate_self_map(sym, resolution)
    return sym


def symbol(text, **kwargs):
    """Parse and compile in one step."""
    return compile_symbol(parse_symbol(text), **kwargs)


def pointwise_power(sym, n):
    """z -> phi(z)**n (not the n-fold iterate)."""
    n = int(n)
    if n < 1:
        raise ValueError("n must be >= 1")
    out = Symbol(PointwisePower(sym.expr, n), None if sym.declared_sup is None else sym.declared_sup**n)
    if sym.report is not None:
        r = sym.report
        sup = r.sup_estimate**n
        out.report = ValidationReport(True, sup, r.witness, sup < 1.0 - STRICT_MARGIN, r.radii, r.angles,
                                      r.max_radius, "derived from base symbol")
    return out
