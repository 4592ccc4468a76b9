"""Test functions built from disk automorphisms, and the coefficient bounds they obey.

For a frame with centre a_j and outside values a_i (i in I minus J):

    f(z) = sigma_{a_j}(z) prod sigma_{a_i}(z)^2 - gamma,   gamma = a_j prod a_i^2
    g(z) = (1 - |a_j|^2) / (1 - conj(a_j) z) prod sigma_{a_i}(z)

Every sigma_a has l1 coefficient mass 1 + 2|a| <= 3 and the kernel factor
has mass 1 + |a| <= 2, which gives the caps 3^(2m+1) and 2 3^m (m = |I minus J|).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .disk import sigma_dual
from .errors import TruncationWarning
from .norms import DEFAULT_GRID, PowerNormSweep, bloch_norm, monomial_bloch_norm_exact
from .series import PowerSeries, cauchy_product, kernel_series, sigma_series

N_TRUNC = 4096
N_HEAD = 4
MAX_TRUNC = 10_000
CAP_SLACK = 1e-9
TAIL_WARN_FRACTION = 0.01


@dataclass(frozen=True)
class TestFunctionFrame:
    """Data fixing one test function: the centre a_j and the values a_i outside the cluster of j.

    ``j`` and ``outside_idx`` are 1-based term numbers, kept for reporting only.
    """

    __test__ = False

    a_j: complex
    outside: tuple = ()
    j: int = 1
    outside_idx: tuple = ()
    base_point: complex | None = None

    def __post_init__(self):
        object.__setattr__(self, "a_j", complex(self.a_j))
        object.__setattr__(self, "outside", tuple(complex(a) for a in self.outside))
        for a in (self.a_j, *self.outside):
            if not abs(a) < 1.0:
                raise ValueError(f"frame value {a} is not in the open unit disk")
        if not self.outside_idx:
            object.__setattr__(self, "outside_idx", tuple(range(2, 2 + len(self.outside))))

    @property
    def m(self):
        return len(self.outside)

    @property
    def gamma(self):
        g = self.a_j
        for a in self.outside:
            g *= a * a
        return g

    def at_modulus(self, r):
        """Same directions, every value moved to modulus r."""
        move = lambda a: r * (a / abs(a) if a != 0 else 1.0)  # noqa: E731
        return TestFunctionFrame(move(self.a_j), tuple(move(a) for a in self.outside), self.j, self.outside_idx)

    def to_dict(self):
        c = lambda z: [z.real, z.imag]  # noqa: E731
        return {
            "j": self.j,
            "a_j": c(self.a_j),
            "outside_idx": list(self.outside_idx),
            "outside": [c(a) for a in self.outside],
            "gamma": c(self.gamma),
            "base_point": None if self.base_point is None else c(complex(self.base_point)),
        }


class TestFunction:
    """Callable z -> (value, derivative) for f (``kind='f'``) or g (``kind='g'``)."""

    __test__ = False

    def __init__(self, frame, kind):
        if kind not in ("f", "g"):
            raise ValueError(f"kind must be 'f' or 'g', got {kind!r}")
        self.frame = frame
        self.kind = kind

    def __call__(self, z):
        z = np.asarray(z, dtype=np.complex128)
        fr = self.frame
        if self.kind == "f":
            v, d = sigma_dual(fr.a_j, z)
            power = 2
        else:
            a = fr.a_j
            den = 1.0 - np.conj(a) * z
            v = (1.0 - abs(a) ** 2) / den
            d = v * np.conj(a) / den
            power = 1
        for a in fr.outside:
            s, ds = sigma_dual(a, z)
            if power == 2:
                s, ds = s * s, 2.0 * s * ds
            v, d = v * s, d * s + v * ds
        if self.kind == "f":
            v = v - fr.gamma
        return v, d


def build_fn(frame):
    return TestFunction(frame, "f")


def build_gn(frame):
    return TestFunction(frame, "g")


def _product(factors):
    out = factors[0]
    for s in factors[1:]:
        out = cauchy_product(out, s)
    return out


def f_series(frame, order=N_TRUNC):
    """Taylor coefficients b_0..b_order of f (b_0 = 0)."""
    factors = [sigma_series(frame.a_j, order)]
    for a in frame.outside:
        s = sigma_series(a, order)
        factors += [s, s]
    return _product(factors) - frame.gamma


def g_series(frame, order=N_TRUNC):
    factors = [kernel_series(frame.a_j, order)] + [sigma_series(a, order) for a in frame.outside]
    return _product(factors)


class Composite:
    """z -> sum lambda_i f(phi_i(z)) with its derivative."""

    def __init__(self, spec, f):
        self.spec = spec
        self.f = f

    def __call__(self, z):
        z = np.asarray(z, dtype=np.complex128)
        v = np.zeros(z.shape, dtype=np.complex128)
        d = np.zeros(z.shape, dtype=np.complex128)
        for lam, sym in self.spec.terms:
            pv, pd = sym(z)
            fv, fd = self.f(np.asarray(pv))
            v = v + lam * fv
            d = d + lam * fd * pd
        return v, d


def apply_combination(spec, f):
    return Composite(spec, f)


def f_cap(m):
    return 3.0 ** (2 * m + 1)


def g_cap(m):
    return 2.0 * 3.0**m


@dataclass
class CoefficientBoundsReport:
    kind: str
    m: int
    order: int
    n_head: int
    head_sum: float
    truncated_sum: float
    tail_bound: float
    cap: float
    holds: bool
    frame: TestFunctionFrame
    flags: list = field(default_factory=list)

    def to_dict(self):
        return {
            "kind": self.kind,
            "m": self.m,
            "order": self.order,
            "n_head": self.n_head,
            "head_sum": self.head_sum,
            "truncated_sum": self.truncated_sum,
            "tail_bound": self.tail_bound,
            "cap": self.cap,
            "holds": self.holds,
            "frame": self.frame.to_dict(),
            "flags": list(self.flags),
        }


def _factor_masses(frame, kind):
    """Full (untruncated) l1 masses of the factors: their product bounds the l1 mass of the function."""
    outer = [1.0 + 2.0 * abs(a) for a in frame.outside]
    if kind == "f":
        return [1.0 + 2.0 * abs(frame.a_j)] + [x for x in outer for _ in range(2)]
    return [1.0 + abs(frame.a_j)] + outer


def tail_mass_bound(frame, kind, order):
    """Upper bound on sum_{l>order} |coefficient l|.

    Replacing each factor by the series of its coefficient moduli gives a
    majorant; its mass beyond z^order is the product of the full factor
    masses minus its own truncated mass.
    """
    factors = [sigma_series(frame.a_j, order) if kind == "f" else kernel_series(frame.a_j, order)]
    for a in frame.outside:
        s = sigma_series(a, order)
        factors += [s, s] if kind == "f" else [s]
    majorant = _product([PowerSeries(np.abs(s.coeffs)) for s in factors])
    return max(0.0, math.prod(_factor_masses(frame, kind)) - float(np.sum(majorant.coeffs.real)))


def coefficient_bounds_check(frame, order=N_TRUNC, n_head=N_HEAD, kind="f"):
    """Head sum sum_{1<=l<=n_head}|b_l|, truncated l1 sum and the cap for f (sum from l=1) or g (from l=0).

    A TruncationWarning is issued when the tail bound exceeds 1% of the cap.
    """
    if order > MAX_TRUNC:
        raise ValueError(f"truncation order must be <= {MAX_TRUNC}")
    if kind == "f":
        s, cap, start = f_series(frame, order), f_cap(frame.m), 1
    elif kind == "g":
        s, cap, start = g_series(frame, order), g_cap(frame.m), 0
    else:
        raise ValueError(f"kind must be 'f' or 'g', got {kind!r}")
    c = np.abs(s.coeffs)
    truncated = float(np.sum(c[start:]))
    head = float(np.sum(c[1 : n_head + 1]))
    tail = tail_mass_bound(frame, kind, order)
    flags = []
    if tail > TAIL_WARN_FRACTION * cap:
        flags.append("truncation")
        warnings.warn(f"l1 tail beyond z^{order} may reach {tail:.3g} (cap {cap:.3g})", TruncationWarning, stacklevel=2)
    holds = truncated <= cap * (1.0 + CAP_SLACK)
    if not holds:
        flags.append("cap-violated")
    return CoefficientBoundsReport(kind, frame.m, order, n_head, head, truncated, tail, cap, holds, frame, flags)


def head_sum(frame, n_head=N_HEAD, kind="f"):
    s = f_series(frame, n_head) if kind == "f" else g_series(frame, n_head)
    return float(np.sum(np.abs(s.coeffs[1 : n_head + 1])))


@dataclass
class HeadDecayReport:
    kind: str
    n_head: int
    moduli: list
    head_sums: list
    monotone: bool
    increases: list  # (m, previous, current) where the sum went up

    def to_dict(self):
        return {"kind": self.kind, "n_head": self.n_head, "moduli": list(self.moduli),
                "head_sums": list(self.head_sums), "monotone": self.monotone,
                "increases": [list(x) for x in self.increases]}


def head_decay_ladder(frame, n_head=N_HEAD, kind="f", levels=20):
    """Head sums with every frame value moved to modulus 1 - 2^-m, m = 1..levels."""
    moduli = [1.0 - 2.0**-m for m in range(1, levels + 1)]
    sums = [head_sum(frame.at_modulus(r), n_head, kind) for r in moduli]
    ups = [(m + 2, sums[m], sums[m + 1]) for m in range(levels - 1) if sums[m + 1] > sums[m]]
    return HeadDecayReport(kind, n_head, moduli, sums, not ups, ups)


def head_tail_bound(head_l1, tail_l1, operator_norm_bound, tail_ratio_sup):
    """head_l1 ||T|| + tail_l1 sup_{i>k} ||T z^i|| / ||z^i||."""
    for name, x in (("head_l1", head_l1), ("tail_l1", tail_l1), ("operator_norm_bound", operator_norm_bound),
                    ("tail_ratio_sup", tail_ratio_sup)):
        if x < 0:
            raise ValueError(f"{name} must be nonnegative")
    return head_l1 * operator_norm_bound + tail_l1 * tail_ratio_sup


def composition_norm_bound(spec):
    """Bound on ||sum lambda_i C_phi_i|| over the Bloch space.

    |f(w)| <= |f(0)| + ||f||_semi (1/2) log((1+|w|)/(1-|w|)) and Schwarz-Pick give
    ||C_phi|| <= 1 + (1/2) log((1+|phi(0)|)/(1-|phi(0)|)).
    """
    total = 0.0
    for lam, sym in spec.terms:
        w = abs(complex(sym(0j)[0]))
        total += abs(lam) * (1.0 + 0.5 * math.log((1.0 + w) / (1.0 - w)))
    return total


@dataclass
class OperatorBoundCheck:
    measured: float
    bound: float
    head_l1: float
    tail_l1: float
    far_l1: float
    operator_norm_bound: float
    tail_ratio_sup: float
    holds: bool

    def to_dict(self):
        return dict(self.__dict__)


def operator_bound_check(spec, frame, k=N_HEAD, m_measured=256, order=N_TRUNC, grid=DEFAULT_GRID, sweep=None):
    """Compare ||T f||_B with the head/tail bound, T = sum lambda_i C_phi_i.

    sup ||T z^i|| / ||z^i|| is measured for k < i <= m_measured; coefficients
    past m_measured (and past the truncation) are charged at the operator bound.
    """
    s = f_series(frame, order)
    c = np.abs(s.coeffs)
    head = float(np.sum(c[1 : k + 1]))
    mid = float(np.sum(c[k + 1 : m_measured + 1]))
    far = float(np.sum(c[m_measured + 1 :]))
    far += tail_mass_bound(frame, "f", order)
    opnorm = composition_norm_bound(spec)
    sweep = sweep or PowerNormSweep(spec, "bloch", grid)
    ratio = max(sweep.estimate(i).value / monomial_bloch_norm_exact(i) for i in range(k + 1, m_measured + 1))
    bound = head_tail_bound(head + far, mid, opnorm, ratio)
    measured = bloch_norm(apply_combination(spec, build_fn(frame)), grid).value
    return OperatorBoundCheck(measured, bound, head, mid, far, opnorm, ratio, measured <= bound * (1.0 + CAP_SLACK))


def frames_from_sample(sample, sets, j, steps=None):
    """Frames at the chosen steps of a sampled path: centre phi_j(z_n), outside values phi_i(z_n), i in I minus I_j."""
    outside = sorted(sets.I - sets.I_j[j])
    idx = range(sample.steps.size) if steps is None else steps
    return [
        TestFunctionFrame(sample.values[j - 1, s], tuple(sample.values[i - 1, s] for i in outside), j, tuple(outside),
                          complex(sample.steps[s]))
        for s in idx
    ]


def random_frame(rng, m, r_max=0.99):
    """Frame with m outside values, moduli uniform on [0, r_max)."""
    pts = r_max * np.sqrt(rng.uniform(0.0, 1.0, m + 1)) * np.exp(2j * np.pi * rng.uniform(0.0, 1.0, m + 1))
    return TestFunctionFrame(pts[0], tuple(pts[1:]))
