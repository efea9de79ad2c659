"""Exact and floating-point operators on a chain of d-dimensional sites.

Scalars are Gaussian rationals in exact mode and IEEE doubles in float
mode.  A ChainOperator is a sum of terms, each a coefficient times a
product of single-site factors; sites without a factor carry the
identity.  Dense matrices are only built on request and are bounded by a
row cap.
"""

from __future__ import annotations

import math
import numbers
from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np

from .errors import CapExceeded, ParseError, ShapeMismatch

DEFAULT_DENSE_CAP = 4096


def _real(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        return Fraction(int(x))
    if isinstance(x, numbers.Integral):
        return Fraction(int(x))
    if isinstance(x, numbers.Rational):
        return Fraction(x.numerator, x.denominator)
    if isinstance(x, numbers.Real):
        return float(x)
    raise TypeError(f"not a real number: {x!r}")


def _parse_real(text: str) -> Fraction:
    text = text.strip()
    if text in ("", "+"):
        return Fraction(1)
    if text == "-":
        return Fraction(-1)
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad number {text!r}") from exc


def _fsum(a, b):
    """a + b, skipping gcd work when both are integral Fractions."""
    if type(a) is Fraction and a._denominator == 1 and b._denominator == 1:
        return Fraction(a._numerator + b._numerator)
    return a + b


def _fprod(a, b):
    if type(a) is Fraction and a._denominator == 1 and b._denominator == 1:
        return Fraction(a._numerator * b._numerator)
    return a * b


class Scalar:
    """Complex number with exact (Fraction) or float parts.

    Mixing an exact and a float operand gives a float result.
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        re = _real(re)
        im = _real(im)
        if isinstance(re, float) or isinstance(im, float):
            re, im = float(re), float(im)
        self.re = re
        self.im = im

    @classmethod
    def _raw(cls, re, im) -> "Scalar":
        """Skip coercion; both parts already Fraction, or both float."""
        out = object.__new__(cls)
        out.re = re
        out.im = im
        return out

    # construction -------------------------------------------------------
    @classmethod
    def of(cls, value) -> "Scalar":
        """Coerce int, Fraction, float, complex, str or Scalar."""
        if type(value) is Scalar:
            return value
        if type(value) is int:
            return cls._raw(Fraction(value), Fraction(0))
        if isinstance(value, Scalar):
            return value
        if isinstance(value, str):
            return cls.parse(value)
        if isinstance(value, numbers.Real):
            return cls(value, 0)
        if isinstance(value, numbers.Complex):
            return cls(float(value.real), float(value.imag))
        raise TypeError(f"cannot make a Scalar from {value!r}")

    @classmethod
    def parse(cls, text: str) -> "Scalar":
        """Parse forms like ``3/2``, ``-i``, ``1/2+3/4i``, ``0.5-2i``.

        Decimal literals are read exactly.
        """
        s = text.strip().replace(" ", "")
        while s.startswith("(") and s.endswith(")"):
            s = s[1:-1]
        if not s:
            raise ParseError("empty number")
        if s[-1] in "ij":
            body = s[:-1]
            cut = None
            for k in range(len(body) - 1, 0, -1):
                if body[k] in "+-" and body[k - 1] not in "eE/":
                    cut = k
                    break
            if cut is None:
                return cls(0, _parse_real(body))
            return cls(_parse_real(body[:cut]), _parse_real(body[cut:]))
        return cls(_parse_real(s), 0)

    # properties ---------------------------------------------------------
    @property
    def mode(self) -> str:
        return "float" if isinstance(self.re, float) else "exact"

    @property
    def is_exact(self) -> bool:
        return not isinstance(self.re, float)

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __bool__(self):
        return not self.is_zero()

    # arithmetic ---------------------------------------------------------
    def __add__(self, other):
        o = other if type(other) is Scalar else _coerce(other)
        if o is None:
            return NotImplemented
        if type(self.re) is type(o.re):
            if not self.im and not o.im:
                return Scalar._raw(_fsum(self.re, o.re), self.im)
            return Scalar._raw(self.re + o.re, self.im + o.im)
        return Scalar(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return Scalar(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = other if type(other) is Scalar else _coerce(other)
        if o is None:
            return NotImplemented
        if type(self.re) is type(o.re):
            if not self.im and not o.im:
                return Scalar._raw(_fprod(self.re, o.re), self.im)
            return Scalar._raw(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)
        return Scalar(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __neg__(self):
        return Scalar._raw(-self.re, -self.im)

    def __pos__(self):
        return self

    def conjugate(self) -> "Scalar":
        return Scalar(self.re, -self.im)

    def abs2(self):
        """Squared modulus, exact in exact mode."""
        return self.re * self.re + self.im * self.im

    def __abs__(self):
        return math.sqrt(self.abs2())

    def inverse(self) -> "Scalar":
        n = self.abs2()
        if n == 0:
            raise ZeroDivisionError("inverse of zero Scalar")
        return Scalar(self.re / n, -self.im / n)

    def __truediv__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, numbers.Integral):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        out = Scalar(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # comparison / conversion -------------------------------------------
    def __eq__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def to_complex(self) -> complex:
        return complex(float(self.re), float(self.im))

    __complex__ = to_complex

    def to_float(self) -> "Scalar":
        return Scalar(float(self.re), float(self.im))

    def __repr__(self):
        return f"Scalar({format_scalar(self)})"

    def __str__(self):
        return format_scalar(self)


def _coerce(x):
    if isinstance(x, Scalar):
        return x
    if isinstance(x, (numbers.Number,)):
        return Scalar.of(x)
    return None


ZERO = Scalar(0)
ONE = Scalar(1)
I_UNIT = Scalar(0, 1)


def _fmt_real(x) -> str:
    if isinstance(x, float):
        return repr(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def format_scalar(s: Scalar) -> str:
    """Compact text form; round-trips through :meth:`Scalar.parse`."""
    if s.im == 0:
        return _fmt_real(s.re)
    if s.im == 1:
        im = "i"
    elif s.im == -1:
        im = "-i"
    else:
        im = _fmt_real(s.im) + "i"
    if s.re == 0:
        return im
    sign = "" if im.startswith("-") else "+"
    return f"{_fmt_real(s.re)}{sign}{im}"


# ---------------------------------------------------------------------------
# single-site operators


class LocalOperator:
    """A d x d matrix of Scalars acting on one site."""

    __slots__ = ("dim", "entries", "_nz", "_hash")

    def __init__(self, entries: Iterable[Iterable]):
        rows = tuple(tuple(Scalar.of(x) for x in row) for row in entries)
        d = len(rows)
        if d == 0 or any(len(r) != d for r in rows):
            raise ShapeMismatch("LocalOperator entries must form a square matrix")
        self.dim = d
        self.entries = rows
        self._nz = tuple(
            (i, j, rows[i][j]) for i in range(d) for j in range(d) if not rows[i][j].is_zero()
        )
        self._hash = None

    @classmethod
    def identity(cls, d: int) -> "LocalOperator":
        return cls([[1 if i == j else 0 for j in range(d)] for i in range(d)])

    @classmethod
    def zero(cls, d: int) -> "LocalOperator":
        return cls([[0] * d for _ in range(d)])

    @classmethod
    def unit(cls, i: int, j: int, d: int = 2) -> "LocalOperator":
        """Matrix unit E_ij with 1-based indices."""
        if not (1 <= i <= d and 1 <= j <= d):
            raise ValueError(f"matrix unit E{i}{j} out of range for d={d}")
        return cls([[1 if (r == i - 1 and c == j - 1) else 0 for c in range(d)] for r in range(d)])

    @classmethod
    def diag(cls, values) -> "LocalOperator":
        values = list(values)
        d = len(values)
        return cls([[values[i] if i == j else 0 for j in range(d)] for i in range(d)])

    @classmethod
    def from_array(cls, arr) -> "LocalOperator":
        arr = np.asarray(arr)
        return cls([[Scalar.of(complex(x)) if arr.dtype.kind == "c" else Scalar.of(x) for x in row] for row in arr.tolist()])

    @property
    def nonzeros(self):
        """Tuple of (row, col, value) for nonzero entries, row-major."""
        return self._nz

    @property
    def mode(self) -> str:
        return "float" if any(v.mode == "float" for _, _, v in self._nz) else "exact"

    def is_zero(self) -> bool:
        return not self._nz

    def is_identity(self) -> bool:
        d = self.dim
        return len(self._nz) == d and all(i == j and v == 1 for i, j, v in self._nz)

    def __matmul__(self, other: "LocalOperator") -> "LocalOperator":
        if other.dim != self.dim:
            raise ShapeMismatch("local dimension mismatch")
        d = self.dim
        out = [[ZERO] * d for _ in range(d)]
        by_row = {}
        for k, j, v in other._nz:
            by_row.setdefault(k, []).append((j, v))
        for i, k, a in self._nz:
            for j, b in by_row.get(k, ()):
                out[i][j] = out[i][j] + a * b
        return LocalOperator(out)

    def __add__(self, other: "LocalOperator") -> "LocalOperator":
        if other.dim != self.dim:
            raise ShapeMismatch("local dimension mismatch")
        return LocalOperator(
            [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.entries, other.entries)]
        )

    def __sub__(self, other: "LocalOperator") -> "LocalOperator":
        return self + other.scale(-1)

    def scale(self, c) -> "LocalOperator":
        c = Scalar.of(c)
        return LocalOperator([[c * x for x in row] for row in self.entries])

    def to_numpy(self, exact: bool | None = None) -> np.ndarray:
        """Dense copy: object array of Scalars if exact, else complex128."""
        if exact is None:
            exact = self.mode == "exact"
        if exact:
            arr = np.empty((self.dim, self.dim), dtype=object)
            for i, row in enumerate(self.entries):
                for j, x in enumerate(row):
                    arr[i, j] = x
            return arr
        return np.array([[x.to_complex() for x in row] for row in self.entries], dtype=complex)

    def __eq__(self, other):
        if not isinstance(other, LocalOperator):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.entries)
        return self._hash

    def __repr__(self):
        body = "; ".join(" ".join(format_scalar(x) for x in row) for row in self.entries)
        return f"LocalOperator([{body}])"


def _normalize_factor(op: LocalOperator):
    """Split op = s * op' with the first nonzero entry of op' equal to 1."""
    if not op._nz:
        return ZERO, op
    _, _, lead = op._nz[0]
    if lead == 1:
        return ONE, op
    inv = lead.inverse()
    return lead, op.scale(inv)


# ---------------------------------------------------------------------------
# chain operators


class ChainOperator:
    """Sum of coefficient x (product of single-site factors) on N sites.

    ``terms`` is a tuple of ``(coefficient, factors)`` where ``factors`` is a
    tuple of ``(site, LocalOperator)`` sorted by site.  Missing sites carry
    the identity.  Instances are normalized on construction: each factor is
    scaled so its leading entry is 1, identity factors are dropped, like
    terms are merged and zero terms removed.
    """

    __slots__ = ("chain_len", "local_dim", "terms")

    def __init__(self, chain_len: int, local_dim: int, terms=()):
        if chain_len < 1:
            raise ValueError("chain_len must be >= 1")
        self.chain_len = chain_len
        self.local_dim = local_dim
        self.terms = self._normalize(terms)

    def _normalize(self, terms):
        acc: dict = {}
        for coef, factors in terms:
            c = Scalar.of(coef)
            if c.is_zero():
                continue
            items = factors.items() if isinstance(factors, Mapping) else factors
            clean = {}
            dead = False
            for site, op in items:
                if not (0 <= site < self.chain_len):
                    raise ShapeMismatch(f"site {site} outside chain of length {self.chain_len}")
                if op.dim != self.local_dim:
                    raise ShapeMismatch(f"factor dim {op.dim} != local_dim {self.local_dim}")
                if site in clean:
                    op = clean[site] @ op
                s, op = _normalize_factor(op)
                if s.is_zero():
                    dead = True
                    break
                c = c * s
                clean[site] = op
            if dead:
                continue
            key = tuple(sorted((k, v) for k, v in clean.items() if not v.is_identity()))
            acc[key] = acc[key] + c if key in acc else c
        out = [(c, k) for k, c in acc.items() if not c.is_zero()]
        out.sort(key=_term_sort_key)
        return tuple(out)

    # constructors -------------------------------------------------------
    @classmethod
    def identity(cls, chain_len: int, local_dim: int = 2) -> "ChainOperator":
        return cls(chain_len, local_dim, [(ONE, ())])

    @classmethod
    def zero(cls, chain_len: int, local_dim: int = 2) -> "ChainOperator":
        return cls(chain_len, local_dim, [])

    # algebra ------------------------------------------------------------
    def _check(self, other: "ChainOperator"):
        if not isinstance(other, ChainOperator):
            raise TypeError("expected a ChainOperator")
        if other.chain_len != self.chain_len or other.local_dim != self.local_dim:
            raise ShapeMismatch(
                f"shape ({self.chain_len},{self.local_dim}) vs ({other.chain_len},{other.local_dim})"
            )

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return add(self, scale(other, -1))

    def __neg__(self):
        return scale(self, -1)

    def __mul__(self, other):
        if isinstance(other, ChainOperator):
            return multiply(self, other)
        return scale(self, other)

    def __rmul__(self, other):
        return scale(self, other)

    def __matmul__(self, other):
        return multiply(self, other)

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def mode(self) -> str:
        for c, f in self.terms:
            if c.mode == "float" or any(op.mode == "float" for _, op in f):
                return "float"
        return "exact"

    def normalize(self) -> "ChainOperator":
        return ChainOperator(self.chain_len, self.local_dim, self.terms)

    def __eq__(self, other):
        if not isinstance(other, ChainOperator):
            return NotImplemented
        return (
            self.chain_len == other.chain_len
            and self.local_dim == other.local_dim
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.chain_len, self.local_dim, self.terms))

    def __repr__(self):
        return f"ChainOperator(N={self.chain_len}, d={self.local_dim}, terms={len(self.terms)})"


def _term_sort_key(term):
    _, factors = term
    return tuple((site, tuple((i, j, str(v)) for i, j, v in op.nonzeros)) for site, op in factors)


def embed(op: LocalOperator, site: int, chain_len: int) -> ChainOperator:
    """Place ``op`` on ``site`` of an N-site chain, identity elsewhere."""
    if not (0 <= site < chain_len):
        raise ShapeMismatch(f"site {site} outside chain of length {chain_len}")
    return ChainOperator(chain_len, op.dim, [(ONE, ((site, op),))])


def add(a: ChainOperator, b: ChainOperator) -> ChainOperator:
    a._check(b)
    return ChainOperator(a.chain_len, a.local_dim, a.terms + b.terms)


def scale(a: ChainOperator, c) -> ChainOperator:
    c = Scalar.of(c)
    return ChainOperator(a.chain_len, a.local_dim, [(c * k, f) for k, f in a.terms])


def multiply(a: ChainOperator, b: ChainOperator) -> ChainOperator:
    """Operator product a*b, computed site by site on each pair of terms."""
    a._check(b)
    out = []
    for ca, fa in a.terms:
        for cb, fb in b.terms:
            merged = dict(fa)
            c = ca * cb
            dead = False
            for site, op in fb:
                if site in merged:
                    prod = merged[site] @ op
                    if prod.is_zero():
                        dead = True
                        break
                    merged[site] = prod
                else:
                    merged[site] = op
            if not dead:
                out.append((c, merged))
    return ChainOperator(a.chain_len, a.local_dim, out)


def commutator(a: ChainOperator, b: ChainOperator) -> ChainOperator:
    """ab - ba."""
    return multiply(a, b) - multiply(b, a)


def dense_dim(chain_len: int, local_dim: int) -> int:
    return local_dim ** chain_len


def check_cap(chain_len: int, local_dim: int, cap: int | None = None) -> int:
    """Return d**N or raise CapExceeded."""
    cap = DEFAULT_DENSE_CAP if cap is None else cap
    dim = dense_dim(chain_len, local_dim)
    if dim > cap:
        raise CapExceeded(f"dense dimension {dim} exceeds cap {cap}")
    return dim


def densify(a: ChainOperator, cap: int | None = None, exact: bool | None = None) -> np.ndarray:
    """Dense d**N x d**N matrix; site 0 is the most significant tensor slot.

    Returns an object array of Scalars when every input is exact (or
    ``exact=True``), otherwise a complex128 array.
    """
    dim = check_cap(a.chain_len, a.local_dim, cap)
    if exact is None:
        exact = a.mode == "exact"
    d = a.local_dim
    ident = LocalOperator.identity(d).nonzeros
    if exact:
        out = np.empty((dim, dim), dtype=object)
        out.fill(ZERO)
    else:
        out = np.zeros((dim, dim), dtype=complex)
    for coef, factors in a.terms:
        fmap = dict(factors)
        cells = [(0, 0, coef)]
        for site in range(a.chain_len):
            op = fmap.get(site)
            nz = op.nonzeros if op is not None else ident
            cells = [(r * d + i, c * d + j, v * w) for r, c, v in cells for i, j, w in nz]
        if exact:
            for r, c, v in cells:
                out[r, c] = out[r, c] + v
        else:
            for r, c, v in cells:
                out[r, c] += v.to_complex()
    return out


def to_complex_array(arr: np.ndarray) -> np.ndarray:
    """Convert an object array of Scalars (or any numeric array) to complex128."""
    if arr.dtype == object:
        return np.vectorize(lambda x: Scalar.of(x).to_complex(), otypes=[complex])(arr)
    return np.asarray(arr, dtype=complex)


def dense_equal(x: np.ndarray, y: np.ndarray) -> bool:
    """Exact entrywise equality of two dense matrices of Scalars."""
    if x.shape != y.shape:
        return False
    return all(Scalar.of(p) == Scalar.of(q) for p, q in zip(x.flat, y.flat))


def frobenius_norm(a, cap: int | None = None) -> float:
    """Frobenius norm of a ChainOperator or dense matrix.

    Exact inputs are summed exactly, so a zero operator gives exactly 0.0.
    """
    if isinstance(a, ChainOperator):
        a = densify(a, cap)
    if a.dtype == object:
        total = sum((Scalar.of(x).abs2() for x in a.flat), Fraction(0))
        return math.sqrt(total)
    return float(np.linalg.norm(a))


# convenient single-site constants for d = 2 -------------------------------
def sigma_plus() -> LocalOperator:
    """Raising operator, maps |down> = [1,0]^T to |up> = [0,1]^T (unit E21)."""
    return LocalOperator.unit(2, 1)


def sigma_minus() -> LocalOperator:
    """Lowering operator, unit E12."""
    return LocalOperator.unit(1, 2)


def sigma_z() -> LocalOperator:
    """diag(-1, 1): eigenvalue +1 on |up> = [0,1]^T."""
    return LocalOperator.diag([-1, 1])
