import numpy as np
import pytest

from blochkit import DiskPoint, compile_symbol, hyperbolic_derivative, rho, sigma
from blochkit.disk import one_minus_abs2, sigma_dual
from blochkit.errors import DegenerateSymbol


def test_sigma_examples():
    assert sigma(0, 0.5) == -0.5
    assert sigma(0.3, 0.3) == 0
    assert sigma(0.5, 0.25) == pytest.approx(2 / 7, abs=1e-15)


def test_sigma_accepts_boundary_points():
    assert abs(sigma(0.4 + 0.2j, np.exp(0.7j))) == pytest.approx(1.0, abs=1e-15)


def test_sigma_vectorised_matches_scalar():
    z = np.array([0.1, -0.5j, 0.3 + 0.3j])
    assert np.allclose(sigma(0.2j, z), [sigma(0.2j, w) for w in z], atol=1e-15)


def test_sigma_dual_derivative():
    a, z = 0.3 - 0.4j, 0.2 + 0.1j
    v, d = sigma_dual(a, z)
    h = 1e-6
    fd = (sigma(a, z + h) - sigma(a, z - h)) / (2 * h)
    assert abs(complex(d) - fd) < 1e-8
    assert complex(v) == pytest.approx(sigma(a, z))


def test_rho_examples():
    assert rho(0.3 + 0.1j, 0.3 + 0.1j) == 0
    assert rho(0, 0.6j) == pytest.approx(0.6, abs=1e-15)
    assert rho(0.5, 0.25) == pytest.approx(2 / 7, abs=1e-15)


def test_rho_symmetric_exactly():
    rng = np.random.default_rng(3)
    z = 0.99 * np.sqrt(rng.uniform(size=500)) * np.exp(2j * np.pi * rng.uniform(size=500))
    w = np.roll(z, 1)
    assert np.array_equal(rho(z, w), rho(w, z))
    assert np.all((rho(z, w) >= 0) & (rho(z, w) < 1))


def test_diskpoint_rejects_boundary_and_nan():
    assert DiskPoint(0.5j) == 0.5j
    for bad in (1.0, 1j, 2.0, complex("nan"), complex("inf")):
        with pytest.raises(ValueError):
            DiskPoint(bad)


def test_one_minus_abs2():
    assert one_minus_abs2(0.6 + 0.8j) == pytest.approx(0.0, abs=1e-15)
    assert one_minus_abs2(0.5) == 0.75


def test_hyperbolic_derivative_examples():
    ident = compile_symbol("z")
    for z in (0, 0.5, 0.9 - 0.3j):
        assert hyperbolic_derivative(ident, z) == pytest.approx(1.0)
    half = compile_symbol("scale(0.5, z)")
    assert hyperbolic_derivative(half, 0) == pytest.approx(0.5)
    s = compile_symbol("sigma(0.4-0.2i)")
    for z in (0, 0.3j, -0.7 + 0.1j):
        assert abs(hyperbolic_derivative(s, z)) == pytest.approx(1.0, abs=1e-12)


def test_hyperbolic_derivative_degenerate():
    with pytest.raises(DegenerateSymbol):
        hyperbolic_derivative(compile_symbol("const(1)", validate=False), 0.2)
