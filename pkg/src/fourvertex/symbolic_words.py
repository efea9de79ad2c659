"""Matrix-unit words with Laurent polynomial coefficients.

A WordSum is a finite sum  sum_w  p_w(u, v) * w  where each word w places
at most one matrix unit E_ij on each site of an N-site chain and p_w is a
Laurent polynomial with exact complex coefficients.  Words multiply site by
site with E_ij E_kl = delta_jk E_il, so every zero is detected exactly.

Text form (one term per line)::

    -u^2 0:E22 1:E22
    1 0:E12 1:E21

The second spectral parameter is written ``v``; ``u'`` is accepted as an
alias on input.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import ParseError, ShapeMismatch
from .operator_core import ONE, ZERO, ChainOperator, LocalOperator, Scalar, format_scalar

VAR_ALIASES = {"u'": "v", "u′": "v"}


def canonical_var(name: str) -> str:
    return VAR_ALIASES.get(name, name)


# ---------------------------------------------------------------------------
# Laurent polynomials


def _mono_mul(a: tuple, b: tuple) -> tuple:
    if not a:
        return b
    if not b:
        return a
    exps = dict(a)
    for name, k in b:
        exps[name] = exps.get(name, 0) + k
    return tuple(sorted((n, k) for n, k in exps.items() if k != 0))


class LaurentCoeff:
    """Laurent polynomial with exact (or float) complex coefficients.

    Monomials are keyed by sorted tuples of ``(variable, exponent)`` with zero
    exponents omitted; the empty tuple is the constant monomial.
    """

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping | Iterable = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict = {}
        for key, c in items:
            exps: dict = {}
            for n, k in key:
                n = canonical_var(n)
                exps[n] = exps.get(n, 0) + int(k)
            key = tuple(sorted((n, k) for n, k in exps.items() if k != 0))
            c = Scalar.of(c)
            acc[key] = acc[key] + c if key in acc else c
        self.terms = {k: c for k, c in acc.items() if not c.is_zero()}
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "LaurentCoeff":
        obj = cls.__new__(cls)
        obj.terms = terms
        obj._hash = None
        return obj

    @classmethod
    def const(cls, c) -> "LaurentCoeff":
        c = Scalar.of(c)
        return cls._raw({} if c.is_zero() else {(): c})

    @classmethod
    def var(cls, name: str, exp: int = 1, coeff=1) -> "LaurentCoeff":
        return cls({((name, exp),): coeff})

    @classmethod
    def coerce(cls, x) -> "LaurentCoeff":
        if isinstance(x, LaurentCoeff):
            return x
        if isinstance(x, str):
            return parse_laurent(x)
        return cls.const(x)

    @property
    def variables(self) -> tuple:
        return tuple(sorted({n for key in self.terms for n, _ in key}))

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(key == () for key in self.terms)

    def constant_value(self) -> Scalar:
        if not self.is_constant():
            raise ValueError("not a constant Laurent polynomial")
        return self.terms.get((), ZERO)

    def degree_range(self, name: str) -> tuple:
        """(min, max) exponent of ``name`` over all monomials."""
        name = canonical_var(name)
        exps = [dict(key).get(name, 0) for key in self.terms]
        if not exps:
            return (0, 0)
        return (min(exps), max(exps))

    def __add__(self, other):
        other = LaurentCoeff.coerce(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            if k in out:
                s = out[k] + c
                if s.is_zero():
                    del out[k]
                else:
                    out[k] = s
            else:
                out[k] = c
        return LaurentCoeff._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentCoeff._raw({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-LaurentCoeff.coerce(other))

    def __rsub__(self, other):
        return LaurentCoeff.coerce(other) - self

    def __mul__(self, other):
        other = LaurentCoeff.coerce(other)
        out: dict = {}
        for ka, ca in self.terms.items():
            for kb, cb in other.terms.items():
                k = _mono_mul(ka, kb)
                c = ca * cb
                if k in out:
                    out[k] = out[k] + c
                else:
                    out[k] = c
        return LaurentCoeff._raw({k: c for k, c in out.items() if not c.is_zero()})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if len(self.terms) != 1:
                raise ValueError("negative power of a non-monomial")
            (key, c), = self.terms.items()
            return LaurentCoeff._raw({tuple((v, k * n) for v, k in key): c ** n})
        out = LaurentCoeff.const(1)
        for _ in range(n):
            out = out * self
        return out

    def evaluate(self, assignment: Mapping) -> Scalar:
        """Substitute Scalars for every variable."""
        env = {canonical_var(k): Scalar.of(v) for k, v in assignment.items()}
        total = ZERO
        for key, c in self.terms.items():
            val = c
            for name, k in key:
                if name not in env:
                    raise KeyError(f"unassigned variable {name!r}")
                x = env[name]
                if k < 0 and x.is_zero():
                    raise ZeroDivisionError(f"zero substituted into negative power of {name}")
                val = val * x ** k
            total = total + val
        return total

    def partial(self, assignment: Mapping) -> "LaurentCoeff":
        """Substitute some variables, keep the rest symbolic."""
        env = {canonical_var(k): Scalar.of(v) for k, v in assignment.items()}
        out = []
        for key, c in self.terms.items():
            rest = []
            for name, k in key:
                if name in env:
                    c = c * env[name] ** k
                else:
                    rest.append((name, k))
            out.append((tuple(rest), c))
        return LaurentCoeff(out)

    def __eq__(self, other):
        if isinstance(other, (int, Scalar)) or not isinstance(other, LaurentCoeff):
            try:
                other = LaurentCoeff.coerce(other)
            except TypeError:
                return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def sorted_items(self):
        return sorted(self.terms.items(), key=lambda kv: kv[0])

    def __str__(self):
        return format_laurent(self)

    def __repr__(self):
        return f"LaurentCoeff({format_laurent(self)})"


def _fmt_coeff(c: Scalar) -> tuple:
    """(sign, body) for a monomial coefficient; body '' means 1."""
    if c.im == 0:
        sign = "-" if c.re < 0 else "+"
        mag = Scalar(abs(c.re))
        return sign, "" if mag == 1 else format_scalar(mag)
    if c.re == 0:
        sign = "-" if c.im < 0 else "+"
        mag = abs(c.im)
        return sign, "i" if mag == 1 else format_scalar(Scalar(0, mag))
    return "+", "(" + format_scalar(c) + ")"


def format_laurent(p: LaurentCoeff) -> str:
    """Canonical text with no whitespace, e.g. ``-u^2+(1+i)*u^-1*v``."""
    if not p.terms:
        return "0"
    parts = []
    for key, c in p.sorted_items():
        sign, body = _fmt_coeff(c)
        factors = [n if k == 1 else f"{n}^{k}" for n, k in key]
        if body:
            factors.insert(0, body)
        mono = "*".join(factors) if factors else "1"
        parts.append((sign, mono))
    text = ""
    for idx, (sign, mono) in enumerate(parts):
        if idx == 0:
            text = ("-" if sign == "-" else "") + mono
        else:
            text += sign + mono
    return text


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d+)?(?:/\d+)?)(?P<imag>i(?![A-Za-z0-9_']))?"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_]*'?|u′)"
    r"|(?P<op>[-+*^()]))"
)


def _tokenize(text: str):
    pos = 0
    toks = []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r} in {text!r}")
        pos = m.end()
        if m.group("num") is not None:
            val = Scalar(0, _num(m.group("num"))) if m.group("imag") else Scalar(_num(m.group("num")))
            toks.append(("val", val))
        elif m.group("name") is not None:
            name = m.group("name")
            if name == "i":
                toks.append(("val", Scalar(0, 1)))
            else:
                toks.append(("name", canonical_var(name)))
        else:
            toks.append(("op", m.group("op")))
    return toks


def _num(s: str):
    from fractions import Fraction

    return Fraction(s)


class _LaurentParser:
    def __init__(self, text):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def parse(self) -> LaurentCoeff:
        if not self.toks:
            raise ParseError("empty coefficient")
        out = self.expr()
        if self.i != len(self.toks):
            raise ParseError(f"trailing input in {self.text!r}")
        return out

    def expr(self):
        kind, val = self.peek()
        sign = 1
        if kind == "op" and val in "+-":
            self.take()
            sign = -1 if val == "-" else 1
        out = self.term() * sign
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                t = self.term()
                out = out + t if val == "+" else out - t
            else:
                return out

    def term(self):
        out = self.factor()
        while True:
            kind, val = self.peek()
            if kind == "op" and val == "*":
                self.take()
                out = out * self.factor()
            elif kind in ("val", "name") or (kind == "op" and val == "("):
                out = out * self.factor()
            else:
                return out

    def factor(self):
        kind, val = self.peek()
        if kind == "op" and val == "-":
            self.take()
            return -self.factor()
        base = self.atom()
        kind, val = self.peek()
        if kind == "op" and val == "^":
            self.take()
            neg = False
            kind, val = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                neg = val == "-"
            kind, val = self.take()
            if kind != "val" or val.im != 0 or val.re.denominator != 1:
                raise ParseError(f"exponent must be an integer in {self.text!r}")
            k = int(val.re)
            base = base ** (-k if neg else k)
        return base

    def atom(self):
        kind, val = self.take()
        if kind == "val":
            return LaurentCoeff.const(val)
        if kind == "name":
            return LaurentCoeff.var(val)
        if kind == "op" and val == "(":
            inner = self.expr()
            kind, val = self.take()
            if kind != "op" or val != ")":
                raise ParseError(f"missing ')' in {self.text!r}")
            return inner
        raise ParseError(f"unexpected token {val!r} in {self.text!r}")


def parse_laurent(text: str) -> LaurentCoeff:
    """Parse a Laurent string such as ``-u^2+u^-1``, ``i*u*i*u`` or ``(1/2+i)*v``."""
    return _LaurentParser(text).parse()


# ---------------------------------------------------------------------------
# words


@dataclass(frozen=True)
class SiteWord:
    """Product of matrix units, at most one per site; absent sites are identity.

    ``letters`` is a sorted tuple of ``(site, (i, j))`` with 1-based unit
    indices.
    """

    chain_len: int
    letters: tuple = ()

    def __post_init__(self):
        sites = [s for s, _ in self.letters]
        if sites != sorted(set(sites)):
            raise ValueError("letters must have distinct ascending sites")
        if sites and not (0 <= sites[0] and sites[-1] < self.chain_len):
            raise ShapeMismatch("letter site outside chain")

    @classmethod
    def from_map(cls, chain_len: int, letters: Mapping) -> "SiteWord":
        return cls(chain_len, tuple(sorted(letters.items())))

    def as_map(self) -> dict:
        return dict(self.letters)

    def sort_key(self):
        return tuple((s, i, j) for s, (i, j) in self.letters)

    def __str__(self):
        return " ".join(f"{s}:E{i}{j}" for s, (i, j) in self.letters) or "I"


def _word_mul(a: tuple, b: tuple):
    """Multiply letter tuples; None if some site product vanishes."""
    if not a:
        return b
    if not b:
        return a
    out = dict(a)
    for s, (k, l) in b:
        if s in out:
            i, j = out[s]
            if j != k:
                return None
            out[s] = (i, l)
        else:
            out[s] = (k, l)
    return tuple(sorted(out.items()))


class WordSum:
    """Canonical sum of SiteWords with Laurent coefficients."""

    __slots__ = ("chain_len", "local_dim", "terms")

    def __init__(self, chain_len: int, terms: Mapping | Iterable = (), local_dim: int = 2):
        self.chain_len = chain_len
        self.local_dim = local_dim
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict = {}
        for word, coeff in items:
            if isinstance(word, SiteWord):
                if word.chain_len != chain_len:
                    raise ShapeMismatch("word chain length differs from WordSum")
                letters = word.letters
            else:
                letters = tuple(sorted(word))
            for s, (i, j) in letters:
                if not (0 <= s < chain_len):
                    raise ShapeMismatch(f"site {s} outside chain of length {chain_len}")
                if not (1 <= i <= local_dim and 1 <= j <= local_dim):
                    raise ValueError(f"unit E{i}{j} out of range")
            coeff = LaurentCoeff.coerce(coeff)
            acc[letters] = acc[letters] + coeff if letters in acc else coeff
        self.terms = {
            SiteWord(chain_len, k): c for k, c in acc.items() if not c.is_zero()
        }

    @classmethod
    def _raw(cls, chain_len, local_dim, terms):
        obj = cls.__new__(cls)
        obj.chain_len = chain_len
        obj.local_dim = local_dim
        obj.terms = terms
        return obj

    @classmethod
    def zero(cls, chain_len: int, local_dim: int = 2) -> "WordSum":
        return cls(chain_len, local_dim=local_dim)

    @classmethod
    def identity(cls, chain_len: int, coeff=1, local_dim: int = 2) -> "WordSum":
        return cls(chain_len, [((), coeff)], local_dim=local_dim)

    @classmethod
    def letter(cls, site: int, unit: tuple, chain_len: int, coeff=1, local_dim: int = 2) -> "WordSum":
        """Single matrix unit ``unit = (i, j)`` on ``site`` with a coefficient."""
        return cls(chain_len, [(((site, tuple(unit)),), coeff)], local_dim=local_dim)

    def _check(self, other):
        if not isinstance(other, WordSum):
            raise TypeError("expected a WordSum")
        if other.chain_len != self.chain_len or other.local_dim != self.local_dim:
            raise ShapeMismatch(f"chain length {self.chain_len} vs {other.chain_len}")

    def __add__(self, other: "WordSum") -> "WordSum":
        self._check(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            if w in out:
                s = out[w] + c
                if s.is_zero():
                    del out[w]
                else:
                    out[w] = s
            else:
                out[w] = c
        return WordSum._raw(self.chain_len, self.local_dim, out)

    def __neg__(self):
        return WordSum._raw(self.chain_len, self.local_dim, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, coeff) -> "WordSum":
        coeff = LaurentCoeff.coerce(coeff)
        out = {}
        for w, c in self.terms.items():
            p = c * coeff
            if not p.is_zero():
                out[w] = p
        return WordSum._raw(self.chain_len, self.local_dim, out)

    def __mul__(self, other):
        if isinstance(other, WordSum):
            return word_multiply(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, WordSum):
            return NotImplemented
        return self.chain_len == other.chain_len and self.terms == other.terms

    def __hash__(self):
        return hash((self.chain_len, frozenset(self.terms.items())))

    def __len__(self):
        return len(self.terms)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: kv[0].sort_key())

    def degree_range(self, name: str = "u") -> tuple:
        lo, hi = None, None
        for c in self.terms.values():
            a, b = c.degree_range(name)
            lo = a if lo is None else min(lo, a)
            hi = b if hi is None else max(hi, b)
        return (lo or 0, hi or 0)

    def to_text(self) -> str:
        return format_wordsum(self)

    def __str__(self):
        return format_wordsum(self)

    def __repr__(self):
        return f"WordSum(N={self.chain_len}, terms={len(self.terms)})"


def word_multiply(a: WordSum, b: WordSum) -> WordSum:
    """Product a*b with per-site matrix-unit multiplication."""
    a._check(b)
    out: dict = {}
    for wa, ca in a.terms.items():
        la = wa.letters
        for wb, cb in b.terms.items():
            letters = _word_mul(la, wb.letters)
            if letters is None:
                continue
            c = ca * cb
            if letters in out:
                out[letters] = out[letters] + c
            else:
                out[letters] = c
    terms = {SiteWord(a.chain_len, k): c for k, c in out.items() if not c.is_zero()}
    return WordSum._raw(a.chain_len, a.local_dim, terms)


def evaluate(x: WordSum, assignment: Mapping) -> ChainOperator:
    """Substitute values for the spectral variables; same term structure."""
    d = x.local_dim
    units = {}
    terms = []
    for w, c in x.sorted_terms():
        factors = []
        for s, ij in w.letters:
            if ij not in units:
                units[ij] = LocalOperator.unit(ij[0], ij[1], d)
            factors.append((s, units[ij]))
        terms.append((c.evaluate(assignment), tuple(factors)))
    return ChainOperator(x.chain_len, d, terms)


def support(x: WordSum) -> frozenset:
    """Set of SiteWords carrying a nonzero coefficient."""
    return frozenset(x.terms)


def all_words(chain_len: int, local_dim: int = 2) -> int:
    """Number of matrix-unit words (identity slots included) on the chain."""
    return (local_dim * local_dim + 1) ** chain_len


# ---------------------------------------------------------------------------
# text format

UNIT_ALIASES = {
    "sp": (2, 1),
    "s+": (2, 1),
    "sm": (1, 2),
    "s-": (1, 2),
}


def _projector_unit(convention: str) -> tuple:
    if convention == "C1":
        return (2, 2)
    if convention == "C2":
        return (1, 1)
    raise ValueError(f"unknown convention {convention!r}")


def format_wordsum(x: WordSum) -> str:
    """One term per line: Laurent coefficient, then ``site:unit`` pairs."""
    lines = []
    for w, c in x.sorted_terms():
        coeff = format_laurent(c)
        lines.append(f"{coeff} {w}" if w.letters else coeff)
    return "\n".join(lines) + ("\n" if lines else "")


_PAIR = re.compile(r"^(\d+):(.+)$")


def _parse_unit_product(text: str, convention: str, line_no: int, local_dim: int = 2):
    """Parse ``E21``, ``sp*sm`` etc.  Returns (i, j) or None if the product vanishes."""
    out = None
    for piece in text.split("*"):
        piece = piece.strip()
        m = re.fullmatch(r"E(\d)(\d)", piece)
        if m:
            unit = (int(m.group(1)), int(m.group(2)))
            if not all(1 <= k <= local_dim for k in unit):
                raise ParseError(f"unit {piece!r} outside local dimension {local_dim}", line_no)
        elif piece in UNIT_ALIASES:
            unit = UNIT_ALIASES[piece]
        elif piece == "e":
            unit = _projector_unit(convention)
        else:
            raise ParseError(f"unknown unit {piece!r}", line_no)
        if out is None:
            out = unit
        elif out is False:
            continue
        elif out[1] == unit[0]:
            out = (out[0], unit[1])
        else:
            out = False
    return None if out is False else out


def parse_term_line(line: str, chain_len: int | None, convention: str = "C1", line_no: int | None = None):
    """Parse one term line into ``(letters_tuple_or_None, LaurentCoeff)``.

    Repeated letters on a site multiply in reading order.  ``None`` letters
    means the term vanished under matrix-unit reduction.
    """
    tokens = line.split()
    coeff_toks = []
    idx = 0
    while idx < len(tokens) and not _PAIR.match(tokens[idx]):
        coeff_toks.append(tokens[idx])
        idx += 1
    coeff_text = "".join(coeff_toks) or "1"
    try:
        coeff = parse_laurent(coeff_text)
    except ParseError as exc:
        raise ParseError(str(exc), line_no) from None
    letters: dict = {}
    dead = False
    for tok in tokens[idx:]:
        m = _PAIR.match(tok)
        if not m:
            raise ParseError(f"expected site:unit, got {tok!r}", line_no)
        site = int(m.group(1))
        if chain_len is not None and site >= chain_len:
            raise ParseError(f"site {site} outside chain of length {chain_len}", line_no)
        unit = _parse_unit_product(m.group(2), convention, line_no)
        if unit is None:
            dead = True
            continue
        if site in letters:
            i, j = letters[site]
            if j != unit[0]:
                dead = True
            else:
                letters[site] = (i, unit[1])
        else:
            letters[site] = unit
    return (None if dead else tuple(sorted(letters.items()))), coeff


def parse_wordsum(text: str, chain_len: int | None = None, convention: str = "C1") -> WordSum:
    """Inverse of :func:`format_wordsum`; blank lines and ``#`` comments ignored."""
    fixture = parse_fixture(text, chain_len=chain_len, convention=convention)
    if len(fixture.sections) > 1:
        raise ParseError("multiple sections; use parse_fixture")
    if not fixture.sections:
        return WordSum.zero(chain_len or fixture.chain_len or 1)
    return next(iter(fixture.sections.values())).wordsum


@dataclass
class FixtureSection:
    name: str
    wordsum: WordSum
    raw_terms: int
    vanished: int


@dataclass
class Fixture:
    chain_len: int
    sections: dict


def parse_fixture(text: str, chain_len: int | None = None, convention: str = "C1") -> Fixture:
    """Parse a transcription file.

    Grammar: optional ``N: <int>`` header, optional ``[name]`` section
    headers, then term lines.  Text without headers forms one section named
    ``main``.
    """
    raw: list = []
    current = None
    for no, line in enumerate(text.splitlines(), 1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        m = re.fullmatch(r"N\s*[:=]\s*(\d+)", body)
        if m:
            chain_len = int(m.group(1))
            continue
        m = re.fullmatch(r"\[([^\]]+)\]", body)
        if m:
            current = (m.group(1).strip(), [])
            raw.append(current)
            continue
        if current is None:
            current = ("main", [])
            raw.append(current)
        current[1].append((no, body))
    parsed = []
    max_site = -1
    for name, lines in raw:
        terms = []
        vanished = 0
        for no, body in lines:
            letters, coeff = parse_term_line(body, chain_len, convention, no)
            if letters is None:
                vanished += 1
                continue
            if letters:
                max_site = max(max_site, letters[-1][0])
            terms.append((letters, coeff))
        parsed.append((name, terms, len(lines), vanished))
    n = chain_len if chain_len is not None else max(max_site + 1, 1)
    sections = {}
    for name, terms, count, vanished in parsed:
        if name in sections:
            raise ParseError(f"duplicate section [{name}]")
        sections[name] = FixtureSection(name, WordSum(n, terms), count, vanished)
    return Fixture(n, sections)
