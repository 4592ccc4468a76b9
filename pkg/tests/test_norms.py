import math

import numpy as np
import pytest

from blochkit import CombinationSpec, Grid, bloch_norm, bloch_seminorm, combination_norm, compile_symbol, sup_norm
from blochkit.norms import INTERIOR_RINGS, PowerNormSweep, bloch_objective, monomial_bloch_norm_exact, radius_of, sup_objective, weight_of

SMALL = Grid(24, 256, 40.0)


def poly(coeffs):
    c = np.asarray(coeffs, dtype=complex)
    return lambda z: (np.polynomial.polynomial.polyval(np.asarray(z), c),
                      np.polynomial.polynomial.polyval(np.asarray(z), np.polynomial.polynomial.polyder(c)))


def test_monomial_exact_values():
    assert monomial_bloch_norm_exact(1) == 1.0
    assert monomial_bloch_norm_exact(3) == pytest.approx(0.75, abs=1e-15)
    assert monomial_bloch_norm_exact(10**7) == pytest.approx(2 / math.e, abs=1e-6)
    with pytest.raises(ValueError):
        monomial_bloch_norm_exact(0)


def test_seminorm_examples():
    est = bloch_seminorm(poly([0, 1]))
    assert est.value == pytest.approx(1.0) and est.witness == 0
    assert bloch_seminorm(poly([0.4j])).value == 0
    n = 5
    est = bloch_seminorm(poly([0] * n + [1]))
    assert est.value == pytest.approx(monomial_bloch_norm_exact(n), rel=1e-10)
    assert abs(est.witness) == pytest.approx(math.sqrt((n - 1) / (n + 1)), abs=1e-5)


def test_norm_examples():
    assert bloch_norm(poly([0.3 - 0.4j])).value == pytest.approx(0.5)
    assert bloch_norm(poly([0, 1])).value == pytest.approx(1.0)
    est = bloch_norm(poly([0.5, 0.5]))
    assert est.meta["f0"] == pytest.approx(0.5) and est.value == pytest.approx(1.0)


def test_sup_norm_examples():
    assert sup_norm(poly([0] * 7 + [1])).value == pytest.approx(1.0, abs=1e-9)
    assert sup_norm(compile_symbol("scale(0.6, z)")).value == pytest.approx(0.6, abs=1e-9)
    est = sup_norm(compile_symbol("sigma(0.5)"))
    assert est.value == pytest.approx(1.0, abs=1e-8)
    assert est.monotone


def test_witness_reproduces_value_exactly():
    f = compile_symbol("compose(sigma(0.3+0.2i), scale(0.8, z))")
    est = bloch_seminorm(f, SMALL)
    assert bloch_objective(f, est.witness_t, est.witness_theta) == est.value
    est = sup_norm(f, SMALL)
    assert sup_objective(f, est.witness_t, est.witness_theta) == est.value
    assert abs(radius_of(est.witness_t) * np.exp(1j * est.witness_theta) - est.witness) < 1e-15


def test_grid_helpers():
    g = Grid.parse("10,64")
    assert (g.radial, g.angular) == (10, 64)
    assert Grid.parse("10,64,20").max_exponent == 20
    t = g.exponents()
    assert t[0] == 0 and t.size == 1 + INTERIOR_RINGS + 10 and np.all(np.diff(t) > 0)
    # interior rings are evenly spaced in r up to the first regular ring
    assert np.allclose(np.diff(radius_of(t[: INTERIOR_RINGS + 2])), radius_of(t[INTERIOR_RINGS + 1]) / (INTERIOR_RINGS + 1))
    assert weight_of(np.array([0.0]))[0] == 1.0
    assert g.doubled().angular == 128
    with pytest.raises(ValueError):
        Grid.parse("10")


def test_combination_norm_examples():
    spec = CombinationSpec.of((1, "z"))
    assert combination_norm(spec, 7) == pytest.approx(monomial_bloch_norm_exact(7), rel=1e-6)
    r = 0.7
    spec = CombinationSpec.of((1, f"scale({r}, z)"))
    assert combination_norm(spec, 5, "hinf") == pytest.approx(r**5, rel=1e-8)
    zero = CombinationSpec.of((1.5, "sigma(0.2)"), (-1.5, "sigma(0.2)"))
    assert combination_norm(zero, 3) == 0 and combination_norm(zero, 3, "hinf") == 0
    with pytest.raises(ValueError):
        PowerNormSweep(spec, "l2")


def test_grid_doubling_is_stable():
    spec = CombinationSpec.of((1, "z"))
    base, fine = PowerNormSweep(spec), PowerNormSweep(spec, grid=Grid().doubled())
    for n in (1, 2, 10, 50, 200):
        a, b = base.estimate(n).value, fine.estimate(n).value
        assert abs(a - b) / b < 1e-6, n
