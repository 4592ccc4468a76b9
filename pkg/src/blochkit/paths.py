"""Sequences z_n -> zeta in the unit circle along radial, Stolz-angle and horocyclic routes."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

APPROACHES = ("radial", "tangential", "oricyclic")


@dataclass(frozen=True)
class PathConfig:
    """Which boundary paths to sample.

    ``kinds`` pairs an approach with its parameter: the angle (radians,
    measured from the inward radius) for ``tangential`` and the horocycle
    parameter c in (0, sqrt 2) for ``oricyclic``.
    """

    n_points: int = 16
    kinds: tuple = (("radial", 0.0), ("tangential", math.pi / 4), ("tangential", -math.pi / 4), ("oricyclic", 1.0))
    n_steps: int = 64
    d_max: float = 0.1
    d_min: float = 1e-10
    touch_points: bool = True
    max_touch: int = 4
    random_points: int = 0
    seed: int = 0

    def describe(self):
        return {
            "n_points": self.n_points,
            "kinds": [[k, p] for k, p in self.kinds],
            "n_steps": self.n_steps,
            "d_max": self.d_max,
            "d_min": self.d_min,
            "touch_points": self.touch_points,
            "max_touch": self.max_touch,
            "random_points": self.random_points,
            "seed": self.seed,
        }


@dataclass(frozen=True, eq=False)
class BoundaryPath:
    zeta: complex
    approach: str
    param: float
    steps: np.ndarray
    origin: str = "fixed"

    @property
    def label(self):
        ang = math.degrees(math.atan2(self.zeta.imag, self.zeta.real)) % 360.0
        extra = "" if self.approach == "radial" else f"({self.param:.4g})"
        return f"{self.approach}{extra}@{ang:.6f}deg"

    def describe(self):
        return {"zeta": [self.zeta.real, self.zeta.imag], "approach": self.approach, "param": self.param,
                "origin": self.origin, "n_steps": int(self.steps.size), "label": self.label}


def _offset(approach, param, d):
    """Complex u with |1 - u| = 1 - d, so z = zeta (1 - u) has |z| = 1 - d."""
    w = d * (2.0 - d)
    if approach == "radial":
        return d + 0j
    if approach == "tangential":
        c = math.cos(param)
        if c <= 0:
            raise ValueError("tangential angle must lie in (-pi/2, pi/2)")
        disc = c * c - w
        if np.any(disc < 0):
            raise ValueError("path starts outside the approach region; lower d_max")
        s = w / (c + np.sqrt(disc))
        return s * np.exp(1j * param)
    if approach == "oricyclic":
        b = 2.0 - param * param
        if not 0 < param < math.sqrt(2.0):
            raise ValueError("oricyclic parameter must lie in (0, sqrt 2)")
        disc = b * b - 4.0 * w
        if np.any(disc < 0):
            raise ValueError("path starts outside the approach region; lower d_max")
        u = 2.0 * w / (b + np.sqrt(disc))
        return u - 1j * param * np.sqrt(u)
    raise ValueError(f"unknown approach {approach!r}")


def make_path(zeta, approach="radial", param=0.0, n_steps=64, d_max=0.1, d_min=1e-10, origin="fixed"):
    """Points with |z_n| = 1 - d_n, d_n geometric from d_max down to d_min."""
    zeta = complex(zeta)
    zeta = zeta / abs(zeta)
    d = np.geomspace(d_max, d_min, n_steps)
    steps = zeta * (1.0 - _offset(approach, param, d))
    return BoundaryPath(zeta, approach, float(param), steps, origin)


def touch_angles(sym, max_touch=4, r=1.0 - 1e-8, n_angles=4096, near_one=1e-3):
    """Angles where |phi| reaches the circle, for symbols that touch it at isolated points.

    Returns [] when |phi| stays below 1 - near_one, or when it is within 1e-6
    of 1 around the whole circle (inner-like symbols, where every boundary
    point is a contact point and fixed paths suffice).
    """
    theta = 2.0 * np.pi * np.arange(n_angles) / n_angles
    with np.errstate(all="ignore"):
        mod = np.abs(sym(r * np.exp(1j * theta))[0])
    if not np.all(np.isfinite(mod)) or mod.max() < 1.0 - near_one or mod.max() - mod.min() < 1e-6:
        return []
    peaks = np.nonzero((mod >= np.roll(mod, 1)) & (mod > np.roll(mod, -1)) & (mod > 1.0 - near_one))[0]
    peaks = peaks[np.argsort(-mod[peaks])][:max_touch]
    h = 2.0 * np.pi / n_angles
    out = []
    for p in peaks:
        t0 = theta[p]
        res = minimize_scalar(lambda u: -abs(sym(complex(np.exp(1j * (t0 + u)) * (1.0 - 1e-12)))[0]),
                              bounds=(-h, h), method="bounded", options={"xatol": 1e-14})
        out.append(float((t0 + res.x) % (2.0 * np.pi)))
    return out


def boundary_paths(config=PathConfig(), symbols=()):
    """Fixed grid of boundary points (plus seeded random ones and contact points) times approach kinds."""
    zetas = [(np.exp(2j * np.pi * k / config.n_points), "fixed") for k in range(config.n_points)]
    if config.random_points:
        rng = np.random.default_rng(config.seed)
        zetas += [(np.exp(1j * t), "random") for t in rng.uniform(0.0, 2.0 * np.pi, config.random_points)]
    if config.touch_points:
        for sym in symbols:
            for t in touch_angles(sym, config.max_touch):
                zeta = np.exp(1j * t)
                if all(abs(zeta - z) > 1e-9 for z, _ in zetas):
                    zetas.append((zeta, "contact"))
    return [
        make_path(z, kind, p, config.n_steps, config.d_max, config.d_min, origin)
        for z, origin in zetas
        for kind, p in config.kinds
    ]
