"""Free Poisson-algebra expressions and their expansion into elementary brackets.

Expressions are polynomials in named generators (atoms such as ``I[1,2](u)``)
with nested brackets.  Expansion applies bilinearity, antisymmetry and the
Leibniz rule until every bracket has generator arguments; the result is a
polynomial in atoms and canonical elementary brackets.  Substitution then
replaces elementary brackets by values from a table.

The coefficient algebra is commutative.
"""

from __future__ import annotations

import ast
import functools
import itertools
import operator
import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Mapping

from .errors import DepthExceeded, ParseError, UnresolvedBracket
from .operator_core import ONE, ZERO, Scalar, format_scalar

DEFAULT_DEPTH_CAP = 6
TAG_ALIASES = {"u'": "v", "u′": "v"}


# ---------------------------------------------------------------------------
# generators


class _Gen:
    """Shared behaviour: equality, hashing and ordering through a cached key."""

    __slots__ = ("_key", "_hash")

    def sort_key(self):
        return self._key

    def __eq__(self, other):
        return isinstance(other, _Gen) and self._key == other._key

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return self._key < other._key

    def __setattr__(self, name, value):
        raise AttributeError("generators are immutable")

    def __repr__(self):
        return f"{type(self).__name__}({self})"


class Atom(_Gen):
    """Named generator with optional integer indices and spectral tag."""

    __slots__ = ("name", "index", "tag")

    def __init__(self, name: str, index: tuple = (), tag: str | None = None):
        index = tuple(index)
        for k, v in (("name", name), ("index", index), ("tag", tag),
                     ("_key", (0, name, index, tag or ""))):
            object.__setattr__(self, k, v)
        object.__setattr__(self, "_hash", hash(self._key))

    depth = 0

    def __str__(self):
        s = self.name
        if self.index:
            s += "[" + ",".join(str(i) for i in self.index) + "]"
        if self.tag:
            s += f"({self.tag})"
        return s


class Elem(_Gen):
    """Elementary bracket {left, right} with left < right in canonical order."""

    __slots__ = ("left", "right", "depth")

    def __init__(self, left, right):
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)
        object.__setattr__(self, "depth", 1 + max(left.depth, right.depth))
        object.__setattr__(self, "_key", (1, left._key, right._key))
        object.__setattr__(self, "_hash", hash(self._key))

    def __str__(self):
        return "{" + str(self.left) + ", " + str(self.right) + "}"


def elementary(x, y):
    """Canonical (sign, Elem) for {x, y}; sign 0 when x == y."""
    if x == y:
        return 0, None
    if y.sort_key() < x.sort_key():
        return -1, Elem(y, x)
    return 1, Elem(x, y)


# ---------------------------------------------------------------------------
# commutative polynomials over generators


UNIT_MONO = frozenset()


def mono_of(g, k: int = 1) -> frozenset:
    return frozenset(((g, k),))


def _mono_mul(a: frozenset, b: frozenset) -> frozenset:
    if not a:
        return b
    if not b:
        return a
    if len(b) == 1:
        ((g, k),) = b
        for h, j in a:
            if h is g or h == g:
                return (a - {(h, j)}) | {(h, j + k)}
        return a | b
    acc = dict(a)
    for g, k in b:
        acc[g] = acc.get(g, 0) + k
    return frozenset(acc.items())


def sorted_factors(mono: frozenset) -> list:
    """Factors of a monomial in canonical generator order."""
    return sorted(mono, key=lambda gk: gk[0]._key)


class Poly:
    """Polynomial with Scalar coefficients over Atom/Elem generators.

    Monomials are frozensets of ``(generator, power)`` pairs; canonical
    generator order is applied only when printing.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        for mono, c in (terms or {}).items():
            c = Scalar.of(c)
            if not c.is_zero():
                self.terms[mono] = c

    @classmethod
    def const(cls, c) -> "Poly":
        return cls({UNIT_MONO: c})

    @classmethod
    def gen(cls, g) -> "Poly":
        return cls({mono_of(g): ONE})

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not m for m in self.terms)

    def constant_value(self) -> Scalar:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self.terms.get(UNIT_MONO, ZERO)

    def generators(self) -> set:
        return {g for m in self.terms for g, _ in m}

    def __add__(self, other):
        other = _as_poly(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out[m] + c if m in out else c
            if s.is_zero():
                out.pop(m, None)
            else:
                out[m] = s
        p = Poly()
        p.terms = out
        return p

    __radd__ = __add__

    def accumulate(self, other: "Poly", scale=None) -> None:
        """In-place ``self += scale * other``."""
        out = self.terms
        for m, c in other.terms.items():
            if scale is not None:
                c = c * scale
            s = out[m] + c if m in out else c
            if s.is_zero():
                out.pop(m, None)
            else:
                out[m] = s

    def __neg__(self):
        p = Poly()
        p.terms = {m: -c for m, c in self.terms.items()}
        return p

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __mul__(self, other):
        other = _as_poly(other)
        out = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                m = _mono_mul(ma, mb)
                c = ca * cb
                out[m] = out[m] + c if m in out else c
        return Poly(out)

    __rmul__ = __mul__

    def times_mono(self, mono: frozenset) -> "Poly":
        """Multiply by a monomial with coefficient 1."""
        if not mono:
            return self
        p = Poly()
        p.terms = {_mono_mul(m, mono): c for m, c in self.terms.items()}
        return p

    def __eq__(self, other):
        try:
            other = _as_poly(other)
        except TypeError:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def derivative(self, g) -> "Poly":
        out = {}
        for m, c in self.terms.items():
            d = dict(m)
            k = d.get(g, 0)
            if not k:
                continue
            if k == 1:
                del d[g]
            else:
                d[g] = k - 1
            key = frozenset(d.items())
            out[key] = out[key] + c * k if key in out else c * k
        return Poly(out)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda mc: tuple((g._key, k) for g, k in sorted_factors(mc[0])))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            factors = [str(g) if k == 1 else f"{g}^{k}" for g, k in sorted_factors(m)]
            if not factors:
                parts.append(format_scalar(c))
            elif c == 1:
                parts.append("*".join(factors))
            elif c == -1:
                parts.append("-" + "*".join(factors))
            else:
                cs = format_scalar(c)
                if c.re != 0 and c.im != 0:
                    cs = f"({cs})"
                parts.append(cs + "*" + "*".join(factors))
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"Poly({self})"


def _as_poly(x) -> Poly:
    if isinstance(x, Poly):
        return x
    if isinstance(x, _Gen):
        return Poly.gen(x)
    return Poly.const(Scalar.of(x))


# ---------------------------------------------------------------------------
# expression trees


@dataclass(frozen=True)
class Const:
    value: Scalar

    def __str__(self):
        return format_scalar(self.value)


@dataclass(frozen=True)
class Sum:
    items: tuple

    def __str__(self):
        return "(" + " + ".join(str(x) for x in self.items) + ")"


@dataclass(frozen=True)
class Product:
    items: tuple

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(sorted(self.items, key=str)))

    def __str__(self):
        return "*".join(str(x) for x in self.items)


@dataclass(frozen=True)
class Bracket:
    left: object
    right: object

    def __str__(self):
        return "{" + str(self.left) + ", " + str(self.right) + "}"


@dataclass(frozen=True)
class ScalarMul:
    scalar: Scalar
    expr: object

    def __str__(self):
        return f"{format_scalar(self.scalar)}*{self.expr}"


def bracket_depth(e) -> int:
    """Maximum nesting depth of Bracket nodes."""
    if isinstance(e, Bracket):
        return 1 + max(bracket_depth(e.left), bracket_depth(e.right))
    if isinstance(e, (Sum, Product)):
        return max((bracket_depth(x) for x in e.items), default=0)
    if isinstance(e, ScalarMul):
        return bracket_depth(e.expr)
    return 0


def has_bracket(e) -> bool:
    return bracket_depth(e) > 0


# ---------------------------------------------------------------------------
# parser

_PTOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d+)?(?:/\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_]*'?)"
    r"|(?P<op>[-+*{},()\[\]]))"
)


def _ptokenize(text: str):
    toks = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _PTOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r} at column {pos + 1}")
        pos = m.end()
        for kind in ("num", "name", "op"):
            if m.group(kind) is not None:
                toks.append((kind, m.group(kind)))
                break
    return toks


class _ExprParser:
    def __init__(self, text):
        self.text = text
        self.toks = _ptokenize(text)
        self.i = 0

    def peek(self, k=0):
        j = self.i + k
        return self.toks[j] if j < len(self.toks) else (None, None)

    def take(self, value=None):
        tok = self.peek()
        if value is not None and tok[1] != value:
            raise ParseError(f"expected {value!r}, found {tok[1]!r} in {self.text!r}")
        self.i += 1
        return tok

    def parse(self):
        if not self.toks:
            raise ParseError("empty expression")
        e = self.expr()
        if self.i != len(self.toks):
            raise ParseError(f"trailing input {self.peek()[1]!r} in {self.text!r}")
        return e

    def expr(self):
        items = [self.term()]
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            t = self.term()
            items.append(t if op == "+" else ScalarMul(Scalar(-1), t))
        return items[0] if len(items) == 1 else Sum(tuple(items))

    def term(self):
        items = [self.unary()]
        while self.peek()[1] == "*":
            self.take()
            items.append(self.unary())
        if len(items) == 1:
            return items[0]
        scal = ONE
        rest = []
        for x in items:
            if isinstance(x, Const):
                scal = scal * x.value
            else:
                rest.append(x)
        if not rest:
            return Const(scal)
        body = rest[0] if len(rest) == 1 else Product(tuple(rest))
        return body if scal == 1 else ScalarMul(scal, body)

    def unary(self):
        if self.peek()[1] == "-":
            self.take()
            return ScalarMul(Scalar(-1), self.unary())
        if self.peek()[1] == "+":
            self.take()
            return self.unary()
        return self.primary()

    def primary(self):
        kind, val = self.peek()
        if kind == "num":
            self.take()
            return Const(Scalar(Fraction(val)))
        if kind == "name":
            return self.atom()
        if val == "{":
            self.take()
            left = self.expr()
            self.take(",")
            right = self.expr()
            self.take("}")
            return Bracket(left, right)
        if val == "(":
            self.take()
            e = self.expr()
            self.take(")")
            return e
        raise ParseError(f"unexpected token {val!r} in {self.text!r}")

    def atom(self):
        _, name = self.take()
        index = ()
        tag = None
        if self.peek()[1] == "[":
            self.take()
            idx = [int(self.take()[1])]
            while self.peek()[1] == ",":
                self.take()
                idx.append(int(self.take()[1]))
            self.take("]")
            index = tuple(idx)
        if self.peek()[1] == "(" and self.peek(1)[0] == "name" and self.peek(2)[1] == ")":
            self.take()
            tag = self.take()[1]
            tag = TAG_ALIASES.get(tag, tag)
            self.take(")")
        return Atom(name, index, tag)


def parse_expr(text: str):
    """Parse ``{I[1,1](u) + I[1,2](u), 2*x*y}`` style text into a PExpr."""
    return _ExprParser(text).parse()


def parse_atom(text: str) -> Atom:
    e = parse_expr(text)
    if not isinstance(e, Atom):
        raise ParseError(f"{text!r} is not a single atom")
    return e


# ---------------------------------------------------------------------------
# expansion by rewriting


def _split_first(mono: frozenset):
    """mono = g * rest with g the first generator factor in canonical order."""
    g, k = min(mono, key=lambda gk: gk[0]._key)
    rest = mono - {(g, k)}
    if k > 1:
        rest = rest | {(g, k - 1)}
    return g, rest


@functools.lru_cache(maxsize=65536)
def _bracket_mono(m: frozenset, n: frozenset, strategy: str) -> Poly:
    """{m, n} for monomials (coefficient 1) by Leibniz, antisymmetry and bilinearity."""
    if not m or not n:
        return Poly()
    m_single = len(m) == 1 and next(iter(m))[1] == 1
    n_single = len(n) == 1 and next(iter(n))[1] == 1
    if m_single and n_single:
        sign, el = elementary(next(iter(m))[0], next(iter(n))[0])
        return Poly() if sign == 0 else Poly({mono_of(el): sign})
    split_left = (strategy == "left" and not m_single) or (strategy == "right" and n_single)
    if split_left:
        g, rest = _split_first(m)
        # {g * rest, n} = {g, n} rest + g {rest, n}
        return _bracket_mono(mono_of(g), n, strategy).times_mono(rest) + _bracket_mono(rest, n, strategy).times_mono(mono_of(g))
    h, rest = _split_first(n)
    # {m, h * rest} = {m, h} rest + h {m, rest}
    return _bracket_mono(m, mono_of(h), strategy).times_mono(rest) + _bracket_mono(m, rest, strategy).times_mono(mono_of(h))


def bracket_poly(P: Poly, Q: Poly, strategy: str = "left") -> Poly:
    """Bilinear extension of :func:`_bracket_mono`."""
    out = Poly()
    for m, a in P.terms.items():
        for n, b in Q.terms.items():
            t = _bracket_mono(m, n, strategy)
            if not t.is_zero():
                ab = a * b
                out.accumulate(t, None if ab == 1 else ab)
    return out


def to_poly(e, strategy: str = "left") -> Poly:
    if isinstance(e, Atom):
        return Poly.gen(e)
    if isinstance(e, Const):
        return Poly.const(e.value)
    if isinstance(e, Sum):
        out = Poly()
        for x in e.items:
            out.accumulate(to_poly(x, strategy))
        return out
    if isinstance(e, Product):
        out = Poly.const(1)
        for x in e.items:
            out = out * to_poly(x, strategy)
        return out
    if isinstance(e, ScalarMul):
        return to_poly(e.expr, strategy) * e.scalar
    if isinstance(e, Bracket):
        return bracket_poly(to_poly(e.left, strategy), to_poly(e.right, strategy), strategy)
    raise TypeError(f"not a PExpr: {e!r}")


@dataclass(frozen=True)
class NormalBracketForm:
    """Fully expanded form: a polynomial in atoms and elementary brackets.

    ``terms`` lists ``(coefficient polynomial in atoms, Elem)`` for every
    monomial that carries exactly one elementary bracket; any other
    monomials (no bracket, or products of brackets) are kept in ``other``.
    """

    poly: Poly
    terms: tuple
    other: Poly

    @classmethod
    def from_poly(cls, p: Poly) -> "NormalBracketForm":
        groups: dict = {}
        other = {}
        for mono, c in p.terms.items():
            elems = [(g, k) for g, k in mono if isinstance(g, Elem)]
            if len(elems) == 1 and elems[0][1] == 1:
                el = elems[0][0]
                rest = frozenset((g, k) for g, k in mono if not isinstance(g, Elem))
                groups.setdefault(el, {})
                groups[el][rest] = groups[el].get(rest, ZERO) + c
            else:
                other[mono] = c
        terms = tuple(sorted(((Poly(v), el) for el, v in groups.items()), key=lambda t: t[1].sort_key()))
        return cls(p, terms, Poly(other))

    @property
    def count(self) -> int:
        """Number of distinct elementary brackets with nonzero coefficient."""
        return len(self.terms)

    def __eq__(self, other):
        if not isinstance(other, NormalBracketForm):
            return NotImplemented
        return self.poly == other.poly

    def __hash__(self):
        return hash(self.poly)

    def lines(self) -> list:
        out = []
        for coeff, el in self.terms:
            out.append(f"{coeff} * {el}" if coeff != 1 else str(el))
        if not self.other.is_zero():
            out.append(str(self.other))
        return out


def expand(e, strategy: str = "left", depth_cap: int = DEFAULT_DEPTH_CAP) -> NormalBracketForm:
    """Expand every bracket into elementary brackets.

    ``strategy`` picks which argument the Leibniz rule decomposes first
    (``left`` or ``right``); both give the same normal form.
    """
    if isinstance(e, str):
        e = parse_expr(e)
    depth = bracket_depth(e)
    if depth > depth_cap:
        raise DepthExceeded(f"bracket nesting depth {depth} exceeds cap {depth_cap}")
    if strategy not in ("left", "right"):
        raise ValueError("strategy must be 'left' or 'right'")
    return NormalBracketForm.from_poly(to_poly(e, strategy))


def count_elementary(m: int, n: int) -> int:
    """Elementary brackets in {x_1 + ... + x_m, y_1 + ... + y_n} with distinct atoms."""
    if m < 1 or n < 1:
        raise ValueError("sum lengths must be positive")
    left = Sum(tuple(Atom("x", (i,)) for i in range(1, m + 1))) if m > 1 else Atom("x", (1,))
    right = Sum(tuple(Atom("y", (j,)) for j in range(1, n + 1))) if n > 1 else Atom("y", (1,))
    return expand(Bracket(left, right)).count


# ---------------------------------------------------------------------------
# bracket tables and substitution

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.Div: operator.truediv}


def _eval_rational(node, env: Mapping):
    if isinstance(node, ast.Expression):
        return _eval_rational(node.body, env)
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
        return Scalar(Fraction(repr(node.value)) if isinstance(node.value, float) else node.value)
    if isinstance(node, ast.Name):
        if node.id == "i":
            return Scalar(0, 1)
        if node.id not in env:
            raise KeyError(node.id)
        return Scalar.of(env[node.id])
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        return _BINOPS[type(node.op)](_eval_rational(node.left, env), _eval_rational(node.right, env))
    if isinstance(node, ast.BinOp) and isinstance(node.op, ast.Pow):
        base = _eval_rational(node.left, env)
        k = _eval_rational(node.right, env)
        if k.im != 0 or k.re.denominator != 1:
            raise ParseError("exponents must be integers")
        return base ** int(k.re)
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _eval_rational(node.operand, env)
        return -v if isinstance(node.op, ast.USub) else v
    raise ParseError(f"unsupported syntax in rational function: {ast.dump(node)}")


@dataclass(frozen=True)
class TableValue:
    """A table entry: a constant, a rational function of u, v, or a polynomial."""

    text: str
    approximate: bool = False

    def rational_variables(self) -> set | None:
        """Names used if the text is a rational function of spectral scalars, else None."""
        try:
            tree = ast.parse(self.text.replace("^", "**").replace("u'", "v"), mode="eval")
        except SyntaxError:
            return None
        names = {n.id for n in ast.walk(tree) if isinstance(n, ast.Name)} - {"i"}
        if names - {"u", "v"}:
            return None
        return names

    def is_constant(self) -> bool:
        vs = self.rational_variables()
        return vs is not None and not vs

    def value(self, spectral: Mapping) -> Poly:
        """Evaluate under ``spectral`` = {u: .., v: ..}; raises KeyError if unassigned."""
        if self.rational_variables() is not None:
            tree = ast.parse(self.text.replace("^", "**").replace("u'", "v"), mode="eval")
            return Poly.const(_eval_rational(tree, spectral))
        return to_poly(parse_expr(self.text))


@dataclass
class ElemBracketTable:
    """Values of elementary brackets {a, b} with antisymmetric closure.

    ``default`` controls unlisted pairs: ``symbolic`` leaves them
    unevaluated, ``zero`` sets them to 0.
    """

    entries: dict = field(default_factory=dict)
    default: str = "symbolic"

    def set(self, a: Atom, b: Atom, value, approximate: bool = False):
        if a == b:
            raise ValueError("{a, a} is always 0")
        if not isinstance(value, TableValue):
            value = TableValue(str(value), approximate)
        sign, el = elementary(a, b)
        if sign < 0:
            value = TableValue(f"-({value.text})", value.approximate)
        self.entries[(el.left, el.right)] = value

    def lookup(self, a: Atom, b: Atom):
        """(sign, TableValue) or None if unlisted; {a, a} gives (0, None)."""
        sign, el = elementary(a, b)
        if sign == 0:
            return 0, None
        v = self.entries.get((el.left, el.right))
        if v is None:
            return None
        return sign, v

    def is_constant(self) -> bool:
        return all(v.is_constant() for v in self.entries.values())

    @classmethod
    def from_text(cls, text: str, default: str = "symbolic") -> "ElemBracketTable":
        """Lines of ``atom atom value [approximate]``; ``#`` starts a comment."""
        table = cls(default=default)
        for no, line in enumerate(text.splitlines(), 1):
            body = line.split("#", 1)[0].strip()
            if not body:
                continue
            toks = body.split()
            approx = False
            if toks[-1] in ("approximate", "exact"):
                approx = toks.pop() == "approximate"
            if len(toks) < 3:
                raise ParseError("expected 'atom atom value'", no)
            try:
                a, b = parse_atom(toks[0]), parse_atom(toks[1])
            except ParseError as exc:
                raise ParseError(str(exc), no) from None
            table.set(a, b, TableValue("".join(toks[2:]), approx))
        return table


def load_table(path_or_name: str = "diagonal", default: str = "symbolic") -> ElemBracketTable:
    if path_or_name == "diagonal":
        text = resources.files("fourvertex").joinpath("data").joinpath("diagonal_table.txt").read_text()
    else:
        with open(path_or_name, encoding="utf8") as fh:
            text = fh.read()
    return ElemBracketTable.from_text(text, default)


class _Unresolved(Exception):
    pass


def _value_of_gen(g, table: ElemBracketTable, assignment: Mapping, strict: bool, cache: dict) -> Poly:
    if g in cache:
        return cache[g]
    if isinstance(g, Atom):
        key = str(g)
        out = Poly.const(Scalar.of(assignment[key])) if key in assignment else Poly.gen(g)
        cache[g] = out
        return out
    # elementary bracket: resolve arguments first
    if isinstance(g.left, Atom) and isinstance(g.right, Atom):
        hit = table.lookup(g.left, g.right)
        if hit is None:
            if strict:
                raise UnresolvedBracket(str(g))
            if table.default == "zero":
                out = Poly()
            else:
                raise _Unresolved(g)
        else:
            sign, tv = hit
            try:
                out = tv.value(_spectral(assignment)) * sign
            except KeyError as exc:
                if strict:
                    raise UnresolvedBracket(f"{g}: unassigned {exc}") from None
                raise _Unresolved(g) from None
            out = _substitute_poly(out, table, assignment, strict, cache)
        cache[g] = out
        return out
    left = _value_of_gen(g.left, table, assignment, strict, cache)
    right = _value_of_gen(g.right, table, assignment, strict, cache)
    out = induced_bracket(left, right, table, assignment, strict, cache)
    cache[g] = out
    return out


def _spectral(assignment: Mapping) -> dict:
    env = {}
    for k, v in assignment.items():
        k = TAG_ALIASES.get(k, k)
        if k in ("u", "v"):
            env[k] = v
    return env


def induced_bracket(P: Poly, Q: Poly, table, assignment, strict, cache) -> Poly:
    """{P, Q} = sum dP/dx dQ/dy {x, y} with {x, y} from the table."""
    out = Poly()
    for x in P.generators():
        dP = P.derivative(x)
        for y in Q.generators():
            if x == y:
                continue
            dQ = Q.derivative(y)
            if isinstance(x, Atom) and isinstance(y, Atom):
                el_sign, el = elementary(x, y)
                val = _value_of_gen(el, table, assignment, strict, cache) * el_sign
            else:
                raise _Unresolved((x, y))
            out = out + dP * dQ * val
    return out


def _substitute_poly(p: Poly, table, assignment, strict, cache) -> Poly:
    out = Poly()
    for mono, c in p.terms.items():
        term = Poly.const(c)
        for g, k in mono:
            try:
                v = _value_of_gen(g, table, assignment, strict, cache)
            except _Unresolved:
                v = Poly.gen(g)
            for _ in range(k):
                term = term * v
        out = out + term
    return out


def substitute(nf, table: ElemBracketTable, assignment: Mapping | None = None, strict: bool = False) -> Poly:
    """Replace elementary brackets by table values and atoms by assigned values.

    ``assignment`` maps atom strings (e.g. ``"z"``, ``"I[1,1](u)"``) and the
    spectral names ``u``/``v`` to numbers.  Nested brackets are resolved from
    the inside out.  With ``strict`` an unresolvable bracket raises
    :class:`UnresolvedBracket`; otherwise it stays symbolic.
    """
    poly = nf.poly if isinstance(nf, NormalBracketForm) else nf
    return _substitute_poly(poly, table, dict(assignment or {}), strict, {})


def jacobi_residual(f, g, h, table: ElemBracketTable, assignment: Mapping | None = None,
                    assert_constant: bool = True, strategy: str = "left") -> Poly:
    """{f,{g,h}} + {g,{h,f}} + {h,{f,g}} expanded and substituted.

    With a constant table the result is exactly zero.  ``assert_constant``
    rejects non-constant tables; pass False to report the residual anyway.
    """
    if assert_constant and not table.is_constant():
        raise ValueError("Jacobi check in assert mode needs a constant table")
    f, g, h = (parse_expr(x) if isinstance(x, str) else x for x in (f, g, h))
    cyc = Sum((Bracket(f, Bracket(g, h)), Bracket(g, Bracket(h, f)), Bracket(h, Bracket(f, g))))
    return substitute(expand(cyc, strategy), table, assignment, strict=True)


# ---------------------------------------------------------------------------
# random expressions (property batteries)


def random_expr(rng: random.Random, atoms: list, depth: int = 3, max_terms: int = 2, max_size: int = 8):
    """Random PExpr of bracket depth <= ``depth`` over ``atoms``.

    Candidates whose expansion has more than ``max_size`` monomials are
    redrawn, which keeps batteries of nested brackets fast.
    """
    def poly_leaf():
        terms = []
        for _ in range(rng.randint(1, max_terms)):
            k = rng.randint(1, 2)
            fac = tuple(rng.choice(atoms) for _ in range(k))
            t = fac[0] if k == 1 else Product(fac)
            c = rng.randint(-3, 3) or 1
            terms.append(t if c == 1 else ScalarMul(Scalar(c), t))
        return terms[0] if len(terms) == 1 else Sum(tuple(terms))

    def build(d):
        if d == 0 or rng.random() < 0.3:
            return poly_leaf()
        kind = rng.random()
        # one side stays a leaf so sizes grow linearly with depth
        inner = Bracket(build(d - 1), poly_leaf()) if rng.random() < 0.5 else Bracket(poly_leaf(), build(d - 1))
        if kind < 0.6:
            return inner
        if kind < 0.8:
            return Product((rng.choice(atoms), inner))
        return Sum((poly_leaf(), inner))

    while True:
        e = build(depth)
        if len(to_poly(e).terms) <= max_size:
            return e


def random_constant_table(rng: random.Random, atoms: list) -> ElemBracketTable:
    table = ElemBracketTable(default="symbolic")
    for a, b in itertools.combinations(atoms, 2):
        table.set(a, b, TableValue(str(Fraction(rng.randint(-5, 5), rng.randint(1, 4)))))
    return table


# ---------------------------------------------------------------------------
# structure report

DECOMPOSITION = {1: 3, 2: 4, 3: 4, 4: 5}


def generator_sum(i: int, tag: str, name: str = "I"):
    n = DECOMPOSITION[i]
    return Sum(tuple(Atom(name, (i, j), tag) for j in range(1, n + 1)))


def structure_check(model: str = "4v", table: ElemBracketTable | None = None,
                          spectral: Mapping | None = None) -> list:
    """Elementary-bracket bookkeeping for the 4 x 4 grid of brackets {I_i(u), I_j(v)}.

    Each I_i is a sum of 3, 4, 4, 5 generators for i = 1..4.  Every row of
    the report gives the expansion count, the expected product of sum
    lengths, and how many of the elementary brackets the diagonal table
    resolves.  For ``xxx`` the generators are named X and the third group is
    marked as a symmetric completion.
    """
    name = "I" if model == "4v" else "X"
    if table is None and model == "4v":
        table = load_table("diagonal")
    rows = []
    for i in range(1, 5):
        for j in range(1, 5):
            nf = expand(Bracket(generator_sum(i, "u", name), generator_sum(j, "v", name)))
            resolved = 0
            value = None
            if table is not None:
                resolved = sum(1 for _, el in nf.terms if table.lookup(el.left, el.right) is not None)
                if spectral is not None:
                    sub = substitute(nf, table, spectral, strict=False)
                    value = str(sub)
            approx = any(
                (hit := table.lookup(el.left, el.right)) is not None and hit[1].approximate
                for _, el in nf.terms
            ) if table is not None else False
            rows.append(
                {
                    "group": i,
                    "entry": j,
                    "bracket": f"{{{name}{i}(u), {name}{j}(v)}}",
                    "count": nf.count,
                    "expected": DECOMPOSITION[i] * DECOMPOSITION[j],
                    "table_resolved": resolved,
                    "approximate": approx,
                    "completed": model == "xxx" and i == 3,
                    "value": value,
                }
            )
    return rows
