from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from quadmordell.quadring import (
    Base,
    ModelKind,
    QuadElem,
    QuadParams,
    UnsupportedOrder,
    cube,
    from_model_basis,
    is_integral,
    parse,
    render,
    ring_of_integers_model,
    to_model_basis,
    units,
)

small = st.integers(-30, 30)


@st.composite
def triples(draw):
    params = QuadParams(draw(st.integers(-5, 5)), draw(st.integers(-10, 10)))
    return [QuadElem(params, draw(small), draw(small)) for _ in range(3)]


def test_mul_examples():
    R = QuadParams(0, -5)
    assert R.elem(1, 1) * R.elem(1, -1) == R.elem(6, 0)
    assert R.one * R.elem(4, -7) == R.elem(4, -7)
    S = QuadParams(1, -1)
    assert S.alpha * S.alpha == S.elem(-1, 1)


def test_conj_norm_trace_examples():
    R, S = QuadParams(0, -5), QuadParams(1, 3)
    assert R.elem(2, 3).conj() == R.elem(2, -3)
    assert S.alpha.conj() == S.elem(1, -1)
    assert S.elem(5, 0).conj() == S.elem(5, 0)
    assert R.elem(1, 1).norm() == 6 and R.zero.norm() == 0
    assert QuadParams(0, -2).elem(1, 1).norm() == 3
    assert R.elem(7, 4).trace() == 14 and S.alpha.trace() == 1


def test_cube_examples():
    assert cube(QuadParams(0, -2).elem(1, 1)) == QuadParams(0, -2).elem(-5, 1)
    assert cube(QuadParams(0, -13).elem(2, 1)) == QuadParams(0, -13).elem(-70, -1)
    assert cube(QuadParams(0, -7).one) == QuadParams(0, -7).one


@given(triples())
def test_ring_axioms(t):
    x, y, z = t
    assert (x * y) * z == x * (y * z)
    assert x * y == y * x
    assert x * (y + z) == x * y + x * z
    assert x + (-x) == x.params.zero
    assert x - y == x + (-y)


@given(triples())
def test_norm_trace_homomorphisms(t):
    x, y, _ = t
    assert (x * y).norm() == x.norm() * y.norm()
    assert (x + y).trace() == x.trace() + y.trace()
    assert x * x.conj() == x.params.elem(x.norm(), 0)
    assert x.conj().conj() == x


@given(triples())
def test_cube_matches_repeated_product(t):
    x = t[0]
    assert cube(x) == x * x * x == x**3


def test_mismatched_params_rejected():
    with pytest.raises(ValueError):
        QuadParams(0, -5).one + QuadParams(0, -6).one


def test_inverse_over_QQ():
    R = QuadParams(0, -5, Base.QQ)
    x = R.elem(1, 1)
    assert x * x.inverse() == R.one
    assert x / x == R.one
    with pytest.raises(ZeroDivisionError):
        R.zero.inverse()


def test_is_integral_examples():
    half = Fraction(1, 2)
    m3, m5 = ring_of_integers_model(-3), ring_of_integers_model(-5)
    Q3, Q5 = QuadParams(0, -3, Base.QQ), QuadParams(0, -5, Base.QQ)
    assert m3.kind is ModelKind.HALF and m5.kind is ModelKind.SQRT
    assert is_integral(Q3.elem(half, half), m3)
    assert not is_integral(Q5.elem(half, half), m5)
    assert is_integral(Q5.elem(3, -4), m5)


@given(st.sampled_from([-1, -2, -5, -6, -10, -13, 2, 3]), st.fractions(max_denominator=4), st.fractions(max_denominator=4))
def test_is_integral_sqrt_model(d, p, q):
    x = QuadParams(0, d, Base.QQ).elem(p, q)
    assert is_integral(x, ring_of_integers_model(d)) == (p.denominator == 1 and q.denominator == 1)


@given(st.sampled_from([-3, -7, -11, -15, 5, 13]), st.integers(-50, 50), st.integers(-50, 50), st.integers(-50, 50))
def test_is_integral_half_model(d, k, p, q):
    model = ring_of_integers_model(d)
    half = Fraction(1, 2)
    x = QuadParams(0, d, Base.QQ).elem(half * k + p, half * k + q)
    assert is_integral(x, model)
    y = to_model_basis(x, model)
    assert y.b1.denominator == 1 and y.b2.denominator == 1
    assert from_model_basis(y, model) == x


@pytest.mark.parametrize("d, count", [(-1, 4), (-2, 2), (-5, 2), (-6, 2), (-13, 2)])
def test_units(d, count):
    us = units(d)
    assert len(us) == count
    assert {u.params.one for u in us} <= set(us)
    for u in us:
        assert u.norm() == 1
        assert any(cube(v) == u for v in us)


def test_units_real_unsupported():
    with pytest.raises(UnsupportedOrder):
        units(2)


@given(st.sampled_from([-1, -5, -13]), small, small)
def test_render_parse_round_trip(d, p, q):
    x = QuadParams(0, d).elem(p, q)
    assert parse(render(x), x.params) == x


def test_render_forms():
    assert render(QuadParams(0, -5).elem(1, -3)) == "1 - 3*sqrt(-5)"
    assert render(QuadParams(1, -1).elem(2, 1)) == "2 + 1*w"
    assert parse("sqrt(-5)", QuadParams(0, -5)) == QuadParams(0, -5).alpha
