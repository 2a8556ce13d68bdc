import pytest
from hypothesis import given, strategies as st

from quadmordell.quadring import Base, QuadParams
from quadmordell.timestable import (
    Add,
    BasisElem,
    Const,
    ExprSyntaxError,
    Mul,
    Neg,
    Pow,
    ScalarMul,
    TableError,
    TimesTable,
    Var,
    evaluate,
    normalize,
    parse_equation,
    parse_expr,
    prove_eq,
    quad_value,
    substitute,
    table_for_quad,
    table_trivial,
    variables,
)

x, y, z, m, d = Var("x"), Var("y"), Var("z"), Var("m"), Var("d")
params_st = st.builds(QuadParams, st.integers(-4, 4), st.integers(-9, 9))

# Z[t]/(t^3 - 2) on the basis 1, t, t^2
CUBIC = (
    ((1, 0, 0), (0, 1, 0), (0, 0, 1)),
    ((0, 1, 0), (0, 0, 1), (2, 0, 0)),
    ((0, 0, 1), (2, 0, 0), (0, 2, 0)),
)

leaves = st.one_of(
    st.sampled_from([x, y, z]),
    st.integers(-5, 5).map(Const),
    st.sampled_from([BasisElem(0), BasisElem(1)]),
)


def _extend(children):
    return st.one_of(
        st.builds(Add, children, children),
        st.builds(Mul, children, children),
        st.builds(Neg, children),
        st.builds(ScalarMul, st.integers(-3, 3), children),
        st.builds(Pow, children, st.integers(0, 3)),
    )


exprs = st.recursive(leaves, _extend, max_leaves=10)
coords = st.tuples(st.integers(-6, 6), st.integers(-6, 6))


def _depth(e):
    kids = [getattr(e, k) for k in ("left", "right", "arg") if hasattr(e, k)]
    return 1 + max(map(_depth, kids), default=0)


def test_table_for_quad_shape():
    t = table_for_quad(QuadParams(0, -5))
    assert t.dim == 2 and t.table[1][1] == (-5, 0) and t.one == (1, 0)


def test_cubic_table_is_valid():
    t = TimesTable(3, CUBIC)
    assert t.mul_vec((0, 1, 0), (0, 0, 1)) == (2, 0, 0)


def test_corrupted_table_fails_associativity():
    bad = [list(map(list, r)) for r in CUBIC]
    bad[1][1] = [0, 0, 2]
    with pytest.raises(TableError, match="associative"):
        TimesTable(3, bad)


def test_table_rejects_asymmetry_and_shape():
    with pytest.raises(TableError, match="symmetric"):
        TimesTable(2, (((1, 0), (0, 1)), ((0, 2), (1, 0))))
    with pytest.raises(TableError, match="dim"):
        TimesTable(2, (((1, 0),),))


@given(exprs.filter(lambda e: _depth(e) <= 6), params_st, coords, coords, coords)
def test_normal_form_agrees_with_direct_evaluation(e, params, cx, cy, cz):
    table = table_for_quad(params)
    env = {"x": params.elem(*cx), "y": params.elem(*cy), "z": params.elem(*cz)}
    nf = normalize(e, table)
    assert nf.evaluate(env) == evaluate(e, env, table)


@given(exprs.filter(lambda e: _depth(e) <= 6), params_st)
def test_normalize_idempotent_through_reification(e, params):
    table = table_for_quad(params)
    nf = normalize(e, table)
    assert normalize(nf.to_expr(), table) == nf


@given(params_st)
def test_comm_ring_axioms(params):
    t = table_for_quad(params)
    zero, one = Const(0), Const(1)
    assert prove_eq((x + y) + z, x + (y + z), t)
    assert prove_eq(x + y, y + x, t)
    assert prove_eq(x + zero, x, t)
    assert prove_eq(x + (-x), zero, t)
    assert prove_eq((x * y) * z, x * (y * z), t)
    assert prove_eq(x * y, y * x, t)
    assert prove_eq(x * one, x, t)
    assert prove_eq(x * (y + z), x * y + x * z, t)


def test_difference_of_cubes_over_quad_tables():
    lhs, rhs = parse_equation("(x - y)*(x^2 + x*y + y^2) = x^3 - y^3")
    for a, b in [(0, -1), (0, -2), (0, -5), (0, -13), (1, -1), (1, 3)]:
        assert prove_eq(lhs, rhs, table_for_quad(QuadParams(a, b)))


@pytest.mark.parametrize("s", [1, -1])
def test_mordell_converse_identity(s):
    lhs, rhs = parse_equation("(m * (d * 3 + m^2))^2 = (m^2 - d)^3 + d")
    sub = {"d": Const(s) - 3 * m**2}
    assert prove_eq(substitute(lhs, sub), substitute(rhs, sub), table_trivial())
    assert not prove_eq(lhs, rhs, table_trivial())


def test_false_identity_rejected():
    assert not prove_eq((x + y) ** 2, x**2 + y**2, table_for_quad(QuadParams(0, -5)))


def test_sqrt_squares_to_d():
    p = QuadParams(0, -7)
    nf = normalize(BasisElem(1) * BasisElem(1), table_for_quad(p))
    assert quad_value(nf.evaluate({}), p) == p.elem(-7, 0)
    assert str(normalize(parse_expr("x*sqrt"), table_for_quad(p))) == "[-7*x1, x0]"


def test_normal_form_string():
    t = table_for_quad(QuadParams(0, -7))
    assert str(normalize(x * y, t)).startswith("[x0*y0 - 7*x1*y1")


def test_rational_base():
    t = table_for_quad(QuadParams(0, -5, Base.QQ))
    assert prove_eq(ScalarMul(2, x) * y, x * y + y * x, t)


def test_parse_errors_carry_position():
    with pytest.raises(ExprSyntaxError) as err:
        parse_expr("x + * y")
    assert err.value.pos == 4
    with pytest.raises(ExprSyntaxError):
        parse_expr("(x + y")
    with pytest.raises(ValueError):
        Pow(x, -1)


def test_parse_shapes():
    assert parse_expr("x**2") == parse_expr("x^2")
    assert variables(parse_expr("a*b + sqrt - 3")) == {"a", "b"}
