import numpy as np
import pytest

from blochkit import ParseError, compile_symbol, format_symbol, parse_symbol, pointwise_power, symbol
from blochkit.errors import InvalidSelfMap
from blochkit.symbols import (
    Blaschke,
    Compose,
    Const,
    Identity,
    Mobius,
    PointwisePower,
    Poly,
    Scale,
    Sigma,
    declared_sup,
    validate_self_map,
)


def test_parse_examples():
    assert parse_symbol("z") == Identity()
    assert parse_symbol("sigma(0.5)") == Sigma(0.5)
    assert parse_symbol("compose(poly([0.5,0.5]), z)") == Compose(Poly((0.5, 0.5)), Identity())


@pytest.mark.parametrize("text", [
    "z", "const(0.5i)", "sigma(0.3-0.4i)", "mobius(1, 1, 0, 2)", "blaschke([0.5, -0.2i])",
    "blaschke([0.1+0.1i]; -1)", "poly([0, 0.5, 0.25i])", "scale(0.5, sigma(0.2))",
    "compose(sigma(0.5), scale(0.9, z))", "pow(poly([0.5, 0.5]), 3)", "scale(-1, z)",
])
def test_format_round_trip(text):
    expr = parse_symbol(text)
    assert parse_symbol(format_symbol(expr)) == expr


def test_complex_literals():
    assert parse_symbol("const(i)") == Const(1j)
    assert parse_symbol("const(-0.5i)") == Const(-0.5j)
    assert parse_symbol("const(0.3+0.4i)") == Const(0.3 + 0.4j)
    assert parse_symbol("const(1e-1)") == Const(0.1)


@pytest.mark.parametrize("text,pos", [("sigma(0.3", 9), ("foo(1)", 0), ("scale(0.5 z)", 10), ("z z", 2)])
def test_parse_errors_carry_position(text, pos):
    with pytest.raises(ParseError) as e:
        parse_symbol(text)
    assert e.value.pos == pos


def test_constructor_errors_become_parse_errors():
    for bad in ("sigma(1.5)", "const(2)", "blaschke([0.5]; 0.9)", "pow(z, 0)"):
        with pytest.raises(ParseError):
            parse_symbol(bad)


def test_evaluate_examples():
    ident = compile_symbol("z")
    assert ident(0.3) == (0.3, 1.0)
    s = compile_symbol("sigma(0.3)")
    assert s(0.3)[0] == 0
    p = compile_symbol("poly([0.5, 0.5])")
    eps = 1e-3
    v, d = p(1 - eps)
    assert v == pytest.approx(1 - eps / 2, abs=1e-15) and d == 0.5


def test_power_examples():
    cube = pointwise_power(compile_symbol("z"), 3)
    v, d = cube(0.5 + 0.5j)
    assert v == pytest.approx((0.5 + 0.5j) ** 3) and d == pytest.approx(3 * (0.5 + 0.5j) ** 2)
    rz = pointwise_power(compile_symbol("scale(0.7, z)"), 4)
    assert rz(0.9)[0] == pytest.approx(0.7**4 * 0.9**4)
    sq = pointwise_power(compile_symbol("sigma(0.5)"), 2)
    v, d = sq(0)
    assert v == pytest.approx(0.25) and d == pytest.approx(-0.75)


def test_mobius_and_blaschke_values():
    m = compile_symbol("mobius(1, 1, 0, 2)")
    assert m(0.2)[0] == pytest.approx(0.6)
    b = compile_symbol("blaschke([0.5, 0.2i]; -1)")
    z = 0.3 - 0.1j
    want = -((z - 0.5) / (1 - 0.5 * z)) * ((z - 0.2j) / (1 + 0.2j * z))
    assert b(z)[0] == pytest.approx(want)
    assert abs(b(np.exp(0.4j))[0]) == pytest.approx(1.0, abs=1e-14)


def test_array_evaluation_shape():
    s = compile_symbol("compose(sigma(0.5), scale(0.9, z))")
    z = np.linspace(-0.5, 0.5, 12).reshape(3, 4) * (1 + 1j)
    v, d = s(z)
    assert v.shape == d.shape == (3, 4)
    assert v[1, 2] == pytest.approx(s(complex(z[1, 2]))[0])


def test_validation_examples():
    half = symbol("scale(0.5, z)")
    assert half.report.accepted and half.report.strict
    assert half.report.sup_estimate == pytest.approx(0.5, abs=1e-8)
    lens = symbol("poly([0.5, 0.5])")
    assert lens.report.accepted and not lens.report.strict
    with pytest.raises(InvalidSelfMap) as e:
        symbol("poly([0, 2])")
    assert e.value.report.sup_estimate == pytest.approx(2.0, abs=1e-6)
    assert abs(e.value.witness) < 1


def test_validation_rejects_pole_inside_disk():
    with pytest.raises(InvalidSelfMap):
        symbol("mobius(1, 0, 2, -1)")  # pole at z = 1/2


def test_declared_sup():
    assert declared_sup(parse_symbol("scale(0.5, sigma(0.3))")) == pytest.approx(0.5)
    assert declared_sup(parse_symbol("pow(scale(0.5, z), 3)")) == pytest.approx(0.125)


def test_power_bounds():
    with pytest.raises(ValueError):
        PointwisePower(Identity(), 10**6 + 1)
    with pytest.raises(ValueError):
        pointwise_power(compile_symbol("z"), 0)


def test_validate_self_map_returns_report():
    rep = validate_self_map(compile_symbol("sigma(0.2)", validate=False), resolution=256)
    assert rep.accepted and rep.sup_estimate == pytest.approx(1.0, abs=1e-7)
    assert rep.to_dict()["angles"] == 256


def test_unimodular_check():
    with pytest.raises(ValueError):
        Blaschke((0.5,), 1.1)
    assert Scale(0.5, Identity()) == parse_symbol("scale(0.5, z)")
    assert Mobius(1, 0, 0, 1) == parse_symbol("mobius(1, 0, 0, 1)")
