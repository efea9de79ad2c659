"""Independent Poisson-bracket evaluation with sympy derivatives.

{P, Q} = sum over atom pairs of dP/dx dQ/dy {x, y}, with {x, y} taken from a
constant antisymmetric table.
"""

import random
from fractions import Fraction

import sympy

from fourvertex import poisson_engine as pe


def sym(g):
    return sympy.Symbol(str(g))


def scalar_to_sympy(c):
    return sympy.Rational(c.re.numerator, c.re.denominator) + sympy.I * sympy.Rational(
        c.im.numerator, c.im.denominator
    )


def poly_to_sympy(p: pe.Poly):
    out = sympy.Integer(0)
    for mono, c in p.terms.items():
        term = scalar_to_sympy(c)
        for g, k in mono:
            term *= sym(g) ** k
        out += term
    return sympy.expand(out)


def expr_to_sympy(e, omega, atoms):
    if isinstance(e, pe.Atom):
        return sym(e)
    if isinstance(e, pe.Const):
        return scalar_to_sympy(e.value)
    if isinstance(e, pe.Sum):
        return sum((expr_to_sympy(x, omega, atoms) for x in e.items), sympy.Integer(0))
    if isinstance(e, pe.Product):
        out = sympy.Integer(1)
        for x in e.items:
            out *= expr_to_sympy(x, omega, atoms)
        return out
    if isinstance(e, pe.ScalarMul):
        return scalar_to_sympy(e.scalar) * expr_to_sympy(e.expr, omega, atoms)
    if isinstance(e, pe.Bracket):
        return bracket(expr_to_sympy(e.left, omega, atoms), expr_to_sympy(e.right, omega, atoms), omega, atoms)
    raise TypeError(e)


def bracket(P, Q, omega, atoms):
    gens = [sym(x) for x in atoms]
    Pp, Qp = sympy.Poly(P, *gens), sympy.Poly(Q, *gens)
    out = sympy.Poly(0, *gens)
    for x in atoms:
        dP = Pp.diff(sym(x))
        if dP.is_zero:
            continue
        for y in atoms:
            w = omega.get((x, y), 0)
            if w:
                out += dP * Qp.diff(sym(y)) * w
    return out.as_expr()


def random_omega(rng: random.Random, atoms):
    """Constant table as a dict (both orders) plus the matching engine table."""
    omega = {}
    table = pe.ElemBracketTable()
    for i, x in enumerate(atoms):
        for y in atoms[i + 1:]:
            w = Fraction(rng.randint(-5, 5), rng.randint(1, 3))
            omega[(x, y)] = sympy.Rational(w.numerator, w.denominator)
            omega[(y, x)] = -omega[(x, y)]
            table.set(x, y, str(w))
    return omega, table
