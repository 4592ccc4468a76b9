"""Curated and random combinations shared by the unit and acceptance tests."""

import numpy as np

from blochkit import CombinationSpec
from blochkit.symbols import format_complex

CURATED = {
    "z minus its reflection": [(1, "z"), (-1, "scale(-1, z)")],
    "cancelling pair (1+z)/2": [(2.5, "poly([0.5, 0.5])"), (-2.5, "poly([0.5, 0.5])")],
    "cancelling pair blaschke": [(1j, "blaschke([0.5])"), (-1j, "blaschke([0.5])")],
    "6,-1,-2,-3 on z": [(6, "z"), (-1, "z"), (-2, "z"), (-3, "z")],
    "4,-1,-2 on z": [(4, "z"), (-1, "z"), (-2, "z")],
    "3,-i,-2 on z": [(3, "z"), (-1j, "z"), (-2, "z")],
    "3,-i,-2 on rz": [(3, "scale(0.3, z)"), (-1j, "scale(0.5, z)"), (-2, "scale(0.9, z)")],
}

EXPECTED = {
    "z minus its reflection": "NonCompactEvidence",
    "cancelling pair (1+z)/2": "CompactEvidence",
    "cancelling pair blaschke": "CompactEvidence",
    "6,-1,-2,-3 on z": "CompactEvidence",
    "4,-1,-2 on z": "NonCompactEvidence",
    "3,-i,-2 on z": "NonCompactEvidence",
    "3,-i,-2 on rz": "CompactEvidence",
}


def _c(z):
    return format_complex(complex(np.round(z.real, 3), np.round(z.imag, 3)))


def _unit(rng):
    """Unimodular constant at a whole-degree angle, printed at full precision."""
    return np.exp(1j * np.deg2rad(int(rng.integers(360))))


def random_symbol_text(rng):
    kind = rng.integers(3)
    if kind == 0:
        m = int(rng.integers(1, 3))
        zeros = 0.9 * np.sqrt(rng.uniform(size=m)) * np.exp(2j * np.pi * rng.uniform(size=m))
        return f"blaschke([{', '.join(_c(a) for a in zeros)}]; {format_complex(_unit(rng))})"
    if kind == 1:
        r = round(float(rng.uniform(0.2, 0.9)), 3)
        a = 0.8 * np.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
        return f"scale({r}, sigma({_c(a)}))"
    t = round(float(rng.uniform(0.2, 0.8)), 3)
    return f"mobius({t}, {format_complex((1 - t) * _unit(rng))}, 0, 1)"


def random_specs(count=20, seed=2024):
    """Random combinations of k <= 3 Blaschke, scaled-automorphism and boundary-touching affine maps."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        k = int(rng.integers(1, 4))
        lams = np.round(rng.uniform(-2, 2, k) + 1j * rng.uniform(-2, 2, k), 2)
        out.append(CombinationSpec.of(*[(complex(l), random_symbol_text(rng)) for l in lams]))
    return out
