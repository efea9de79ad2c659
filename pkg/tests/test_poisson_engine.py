import random

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from fourvertex import poisson_engine as pe
from fourvertex.errors import DepthExceeded, ParseError, UnresolvedBracket
from fourvertex.operator_core import Scalar

from poisson_oracle import bracket, expr_to_sympy, poly_to_sympy, random_omega

ATOMS = [pe.Atom("x", (k,)) for k in range(1, 5)]
seeds = st.integers(0, 10**6)


def rand_poly_expr(rng, max_terms=3):
    return pe.random_expr(rng, ATOMS, depth=0, max_terms=max_terms)


# parsing ----------------------------------------------------------------------------


def test_parse_atoms_and_tags():
    a = pe.parse_atom("I[1,2](u)")
    assert (a.name, a.index, a.tag) == ("I", (1, 2), "u")
    assert pe.parse_atom("I[1,2](u')") == pe.Atom("I", (1, 2), "v")
    assert str(pe.parse_atom("x")) == "x"


def test_parse_structure():
    e = pe.parse_expr("{x + 2*y, -z*w}")
    assert isinstance(e, pe.Bracket)
    assert pe.bracket_depth(pe.parse_expr("{x, {y, z}}")) == 2
    assert pe.bracket_depth(pe.parse_expr("x*y")) == 0
    with pytest.raises(ParseError):
        pe.parse_expr("{x, y")
    with pytest.raises(ParseError):
        pe.parse_expr("x $ y")
    with pytest.raises(ParseError):
        pe.parse_expr("")


def test_product_canonical_order():
    assert pe.parse_expr("y*x") == pe.parse_expr("x*y")


# expansion ------------------------------------------------------------------------------


def test_leibniz_example():
    nf = pe.expand("{x, y*z}")
    assert nf.count == 2
    assert [str(el) for _, el in nf.terms] == ["{x, y}", "{x, z}"]
    assert [str(c) for c, _ in nf.terms] == ["z", "y"]


def test_antisymmetry_and_self_bracket():
    assert pe.expand("{x, x}").poly.is_zero()
    assert pe.expand("{y, x}").poly == -pe.expand("{x, y}").poly


def test_depth_cap():
    deep = "{x,{x,{x,{x,{x,{x,{x,y}}}}}}}"
    with pytest.raises(DepthExceeded):
        pe.expand(deep)
    assert pe.expand(deep, depth_cap=7).poly.is_zero() is False


@given(seeds)
def test_strategies_agree(seed):
    rng = random.Random(seed)
    e = pe.random_expr(rng, ATOMS, depth=3)
    assert pe.expand(e, "left") == pe.expand(e, "right")


@given(seeds)
def test_bilinearity(seed):
    rng = random.Random(seed)
    p, q, r = (rand_poly_expr(rng) for _ in range(3))
    c = Scalar(rng.randint(-3, 3))
    lhs = pe.expand(pe.Bracket(pe.Sum((p, pe.ScalarMul(c, r))), q)).poly
    rhs = pe.expand(pe.Bracket(p, q)).poly + pe.expand(pe.Bracket(r, q)).poly * c
    assert lhs == rhs


@given(seeds)
def test_antisymmetry(seed):
    rng = random.Random(seed)
    p, q = rand_poly_expr(rng), rand_poly_expr(rng)
    assert pe.expand(pe.Bracket(p, q)).poly == -pe.expand(pe.Bracket(q, p)).poly


@given(seeds)
def test_leibniz(seed):
    rng = random.Random(seed)
    p, q, r = (rand_poly_expr(rng) for _ in range(3))
    lhs = pe.expand(pe.Bracket(pe.Product((p, r)), q)).poly
    rhs = pe.to_poly(p) * pe.expand(pe.Bracket(r, q)).poly + pe.to_poly(r) * pe.expand(pe.Bracket(p, q)).poly
    assert lhs == rhs


@given(seeds)
def test_matches_derivative_oracle(seed):
    rng = random.Random(seed)
    omega, table = random_omega(rng, ATOMS)
    e = pe.random_expr(rng, ATOMS, depth=2)
    got = poly_to_sympy(pe.substitute(pe.expand(e), table, strict=True))
    ref = sympy.expand(expr_to_sympy(e, omega, ATOMS))
    assert sympy.expand(got - ref) == 0


@given(st.integers(1, 6), st.integers(1, 6))
def test_count_elementary(m, n):
    assert pe.count_elementary(m, n) == m * n


def test_display_counts():
    nine = "{I[1,1](u)+I[1,2](u)+I[1,3](u), I[1,1](v)+I[1,2](v)+I[1,3](v)}"
    assert pe.expand(nine).count == 9
    sixteen = "{" + "+".join(f"I[2,{j}](u)" for j in range(1, 5)) + ", " + "+".join(
        f"I[2,{j}](v)" for j in range(1, 5)) + "}"
    assert pe.expand(sixteen).count == 16


# tables and substitution -----------------------------------------------------------------


def test_substitution_example():
    table = pe.ElemBracketTable.from_text("x y 1", default="zero")
    assert pe.substitute(pe.expand("{x, y*z}"), table, {"z": 3}) == pe.Poly.const(3)


def test_symbolic_default_and_strict():
    table = pe.ElemBracketTable.from_text("x y 1")
    nf = pe.expand("{x, y*z}")
    out = pe.substitute(nf, table, {"z": 3})
    assert str(out) == "3 + y*{x, z}"
    with pytest.raises(UnresolvedBracket):
        pe.substitute(nf, table, {"z": 3}, strict=True)


def test_table_antisymmetric_closure():
    table = pe.ElemBracketTable.from_text("y x 2/3")
    assert pe.substitute(pe.expand("{x, y}"), table) == pe.Poly.const(Scalar.parse("-2/3"))


def test_table_rational_function_of_spectral_values():
    table = pe.load_table("diagonal")
    nf = pe.expand("{I[1,1](u), I[1,1](u')}")
    assert pe.substitute(nf, table, {"u": 3, "v": 1}) == pe.Poly.const(Scalar.parse("1/2"))
    with pytest.raises(UnresolvedBracket):
        pe.substitute(nf, table, {}, strict=True)
    hit = table.lookup(pe.parse_atom("I[1,1](u)"), pe.parse_atom("I[1,1](v)"))
    assert hit[1].approximate


def test_table_parse_errors():
    with pytest.raises(ParseError) as exc:
        pe.ElemBracketTable.from_text("x y 1\nx\n")
    assert exc.value.line == 2
    with pytest.raises(ValueError):
        pe.ElemBracketTable().set(pe.Atom("x"), pe.Atom("x"), "1")


def test_nested_bracket_substitution_innermost_first():
    table = pe.ElemBracketTable.from_text("x y 2\ny z 3\nx z 5")
    # {x, {y, z}} = {x, 3} = 0 for a constant table
    assert pe.substitute(pe.expand("{x, {y, z}}"), table, strict=True).is_zero()
    # {x, y*{y, z}} = 3 {x, y}
    assert pe.substitute(pe.expand("{x, y*{y, z}}"), table, strict=True) == pe.Poly.const(6)


def test_polynomial_table_values():
    table = pe.ElemBracketTable.from_text("x y z")
    assert not table.is_constant()
    out = pe.substitute(pe.expand("{x, y}"), table, {"z": 4})
    assert out == pe.Poly.const(4)


# Jacobi -------------------------------------------------------------------------------------


@given(seeds)
def test_jacobi_constant_tables(seed):
    rng = random.Random(seed)
    table = pe.random_constant_table(rng, ATOMS)
    f, g, h = (pe.random_expr(rng, ATOMS, depth=2) for _ in range(3))
    assert pe.jacobi_residual(f, g, h, table).is_zero()


def test_jacobi_assert_mode_rejects_polynomial_tables():
    table = pe.ElemBracketTable.from_text("x y z")
    with pytest.raises(ValueError):
        pe.jacobi_residual("x", "y", "z", table)
    res = pe.jacobi_residual("x", "y", "z", pe.ElemBracketTable.from_text("x y z\ny z 1\nx z 1"),
                             assert_constant=False)
    assert isinstance(res, pe.Poly)


# structure report -----------------------------------------------------------------------------


def test_structure_counts():
    rows = pe.structure_check("4v")
    assert len(rows) == 16
    assert [r["count"] for r in rows if r["group"] == 1] == [9, 12, 12, 15]
    assert all(r["count"] == r["expected"] for r in rows)
    diag = {(r["group"], r["entry"]): r["table_resolved"] for r in rows}
    assert diag[(1, 1)] == 3 and diag[(4, 4)] == 5 and diag[(1, 2)] == 0


def test_structure_xxx_flags_completion():
    rows = pe.structure_check("xxx")
    assert {r["group"] for r in rows if r["completed"]} == {3}
