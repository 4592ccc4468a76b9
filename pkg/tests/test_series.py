import warnings

import numpy as np
import pytest

from blochkit import PowerSeries, cauchy_product, compile_symbol, l1_norm, sigma_series, taylor_of_symbol
from blochkit.errors import TruncationWarning
from blochkit.series import (
    compose_series,
    geometric_tail,
    kernel_series,
    series_power,
    series_reciprocal,
    sigma_l1_limit,
)


def test_sigma_series_examples():
    assert np.allclose(sigma_series(0, 4).coeffs, [0, -1, 0, 0, 0])
    assert np.allclose(sigma_series(0.5, 2).coeffs, [0.5, -0.75, -0.375], atol=1e-16)
    for a in (0.3, -0.2 + 0.7j):
        assert sigma_series(a, 8)(0)[0] == pytest.approx(a)


def test_cauchy_product_examples():
    g = PowerSeries([0.3, -1j, 2.0])
    one = PowerSeries.constant(1.0, 2)
    assert np.allclose(cauchy_product(one, g).coeffs, g.coeffs)
    f = PowerSeries([1, 1, 0])
    assert np.allclose(cauchy_product(f, f).coeffs, [1, 2, 1])


def test_truncation_aligns_to_min_order():
    f = PowerSeries([1, 1, 1, 1])
    g = PowerSeries([1, 1])
    assert (f * g).order == 1
    assert (f + g).order == 1


def test_l1_norm_examples():
    assert l1_norm(PowerSeries([0.0])) == 0
    assert l1_norm(PowerSeries([1, -2, 3j])) == pytest.approx(6)


def test_sigma_series_l1_partial_sums():
    a = 0.9 * np.exp(0.3j)
    c = np.abs(sigma_series(a, 2000).coeffs)
    partial = np.cumsum(c)
    assert np.all(np.diff(partial) >= 0)
    assert partial[-1] <= sigma_l1_limit(a) + 1e-12
    assert sigma_l1_limit(a) - partial[-1] <= geometric_tail(a, 2000) + 1e-12


def test_taylor_of_symbol_examples():
    assert np.allclose(taylor_of_symbol(compile_symbol("z"), 5).coeffs, [0, 1, 0, 0, 0, 0])
    a = 0.4 - 0.3j
    got = taylor_of_symbol(compile_symbol(f"sigma({a.real}{a.imag:+}i)"), 30)
    assert np.allclose(got.coeffs, sigma_series(a, 30).coeffs, atol=1e-15)
    p = taylor_of_symbol(compile_symbol("poly([0.5, 0.5])"), 6)
    assert np.allclose(p.coeffs, [0.5, 0.5, 0, 0, 0, 0, 0])


def test_taylor_of_composite_symbols():
    for text in ("compose(sigma(0.5), scale(0.9, z))", "blaschke([0.5, 0.2i]; -1)", "pow(mobius(1, 1, 0, 2), 3)",
                 "compose(poly([0.5, 0.5]), sigma(0.3))"):
        sym = compile_symbol(text)
        s = taylor_of_symbol(sym, 64)
        z = 0.4 * np.exp(2j * np.pi * np.arange(7) / 7)
        assert np.allclose(s(z)[0], sym(z)[0], atol=1e-12), text


def test_taylor_truncation_warning():
    # self-maps have |c_k| <= 1, so only a map with a pole near |z| = 1/2 trips the check
    with warnings.catch_warnings(record=True) as w:
        warnings.simplefilter("always")
        taylor_of_symbol(compile_symbol("sigma(0.95)"), 8)
    assert not w
    with pytest.warns(TruncationWarning):
        taylor_of_symbol(compile_symbol("mobius(1, 0, -1.92, 1)", validate=False), 8)


def test_power_reciprocal_compose():
    f = PowerSeries([1, 1, 0, 0, 0])
    assert np.allclose(series_power(f, 3).coeffs, [1, 3, 3, 1, 0])
    r = series_reciprocal(PowerSeries([1, -0.5, 0, 0, 0]))
    assert np.allclose(r.coeffs, 0.5 ** np.arange(5))
    with pytest.raises(ZeroDivisionError):
        series_reciprocal(PowerSeries([0, 1]))
    inner = PowerSeries([0, 0.5, 0, 0])
    assert np.allclose(compose_series(PowerSeries([1, 1, 1, 1]), inner).coeffs, [1, 0.5, 0.25, 0.125])


def test_kernel_series_mass():
    a = 0.6 + 0.2j
    k = kernel_series(a, 4000)
    assert l1_norm(k) == pytest.approx(1 + abs(a), rel=1e-9)


def test_series_is_read_only():
    s = PowerSeries([1, 2])
    with pytest.raises(ValueError):
        s.coeffs[0] = 5
