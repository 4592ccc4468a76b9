import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from blochkit import CombinationSpec, compile_symbol
from blochkit.disk import hyperbolic_derivative, rho, sigma
from blochkit.series import PowerSeries, cauchy_product, l1_norm, sigma_series
from blochkit.symbols import pointwise_power
from corpus import random_symbol_text

SYMBOLS = ["z", "sigma(0.5)", "sigma(0.7-0.2i)", "poly([0.5, 0.5])", "blaschke([0.5, -0.3i]; 1)",
           "scale(0.8, compose(sigma(0.3i), pow(z, 2)))", "mobius(0.4, 0.6, 0, 1)", "pow(sigma(0.2), 3)"]


def disk(r_max=0.99):
    return st.builds(lambda r, t: r_max * np.sqrt(r) * np.exp(2j * np.pi * t),
                     st.floats(0, 1), st.floats(0, 1))


coeffs = st.lists(st.builds(complex, st.floats(-1, 1), st.floats(-1, 1)), min_size=1, max_size=33)


@given(disk(), disk())
def test_sigma_involution(a, z):
    assert abs(sigma(a, sigma(a, z)) - z) < 1e-12


@given(disk(0.95), disk(), disk())
def test_rho_mobius_invariant(a, z, w):
    assert abs(rho(sigma(a, z), sigma(a, w)) - rho(z, w)) < 1e-12


@given(disk(), disk())
def test_rho_range_and_symmetry(z, w):
    r = rho(z, w)
    assert 0.0 <= r < 1.0 and r == rho(w, z)


@given(st.sampled_from(SYMBOLS), disk(0.999))
def test_schwarz_pick(text, z):
    assert abs(hyperbolic_derivative(compile_symbol(text), z)) <= 1 + 1e-10


@given(st.integers(0, 2**32 - 1))
def test_schwarz_pick_random_symbols(seed):
    rng = np.random.default_rng(seed)
    sym = compile_symbol(random_symbol_text(rng))
    z = 0.999 * np.sqrt(rng.uniform(size=64)) * np.exp(2j * np.pi * rng.uniform(size=64))
    assert np.all(np.abs(hyperbolic_derivative(sym, z)) <= 1 + 1e-10)


@given(st.sampled_from(SYMBOLS), disk(0.9))
def test_derivative_matches_finite_difference(text, z):
    sym = compile_symbol(text)
    h = 1e-5 * (1 - abs(z))
    fd = (sym(z + h)[0] - sym(z - h)[0]) / (2 * h)
    d = sym(z)[1]
    assert abs(fd - d) <= 1e-6 * max(abs(d), 1.0)


@given(st.sampled_from(SYMBOLS), st.integers(1, 40), st.integers(1, 40), disk())
def test_power_multiplicative(text, m, n, z):
    sym = compile_symbol(text)
    whole = pointwise_power(sym, m + n)(z)[0]
    parts = pointwise_power(sym, m)(z)[0] * pointwise_power(sym, n)(z)[0]
    assert abs(whole - parts) <= 1e-12


@given(coeffs, coeffs)
def test_product_l1_submultiplicative(a, b):
    n = len(a) + len(b) - 2
    f = PowerSeries(np.pad(a, (0, n + 1 - len(a))))
    g = PowerSeries(np.pad(b, (0, n + 1 - len(b))))
    assert l1_norm(cauchy_product(f, g)) <= l1_norm(f) * l1_norm(g) * (1 + 1e-12)


@given(coeffs, coeffs, coeffs)
def test_product_commutative_associative(a, b, c):
    f, g, h = (PowerSeries(np.pad(x, (0, 32 - len(x) + 1))) for x in (a, b, c))
    assert np.allclose(cauchy_product(f, g).coeffs, cauchy_product(g, f).coeffs, rtol=0, atol=1e-12)
    left = cauchy_product(cauchy_product(f, g), h).coeffs
    right = cauchy_product(f, cauchy_product(g, h)).coeffs
    assert np.allclose(left, right, rtol=0, atol=1e-12 * max(1.0, np.abs(left).max()))


@given(disk(0.999))
def test_sigma_partial_sums(a):
    c = np.abs(sigma_series(a, 2000).coeffs)
    partial = np.cumsum(c)
    assert np.all(np.diff(partial) >= 0) and partial[-1] <= 1 + 2 * abs(a) + 1e-12


@given(st.sampled_from(SYMBOLS), st.sampled_from(SYMBOLS), st.floats(0.01, 100), disk(0.99))
def test_combination_linear_in_scale(p, q, t, z):
    spec = CombinationSpec.of((1, p), (-0.5j, q))
    a = spec.power(3)(z)
    b = spec.scaled(t).power(3)(z)
    assert abs(b[0] - t * a[0]) <= 1e-12 * t * max(abs(a[0]), 1e-300) + 1e-300
