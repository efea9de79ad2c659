"""Model definitions: L-operators, R-matrices, spin representations, weights.

Basis: |up> = [0, 1]^T, |down> = [1, 0]^T.  sigma^+ = E21 maps down to up and
sigma^z = diag(-1, 1).  The projector e of the 4-vertex L-operator is
convention dependent:

* ``C1``: e = (sigma^z + 1)/2 = sigma^+ sigma^- = E22, the projector onto |up>.
* ``C2``: e = (1 - sigma^z)/2 = E11, the projector onto |down>.

Both conventions give a commuting transfer family.  C1 is adopted because it
is the one that agrees with writing e as sigma^+ sigma^-.
"""

from __future__ import annotations

import cmath
import math
import numbers
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Mapping, Sequence

import numpy as np
import yaml

from .auxmatrix import AuxMonodromy
from .errors import ParseError, ShapeMismatch
from .operator_core import (
    ChainOperator,
    LocalOperator,
    Scalar,
    embed,
    sigma_minus,
    sigma_plus,
    sigma_z,
)
from .symbolic_words import LaurentCoeff, WordSum

CONVENTIONS = ("C1", "C2")
ADOPTED_CONVENTION = "C1"
I = Scalar(0, 1)


def projector(convention: str = ADOPTED_CONVENTION) -> LocalOperator:
    """The 4-vertex projector e under the given convention."""
    if convention == "C1":
        return LocalOperator.unit(2, 2)
    if convention == "C2":
        return LocalOperator.unit(1, 1)
    raise ValueError(f"unknown convention {convention!r}")


def projector_unit(convention: str = ADOPTED_CONVENTION) -> tuple:
    return (2, 2) if convention == "C1" else (1, 1)


def _check_site(site: int, N: int):
    if N < 1:
        raise ValueError("chain length must be >= 1")
    if not (0 <= site < N):
        raise ShapeMismatch(f"site {site} outside chain of length {N}")


# ---------------------------------------------------------------------------
# parameter records


@dataclass(frozen=True)
class FourVertexParams:
    u: Any = 1
    a: Any = 1
    c: Any = 1
    convention: str = ADOPTED_CONVENTION

    def __post_init__(self):
        object.__setattr__(self, "u", Scalar.of(self.u))
        if self.u.is_zero():
            raise ValueError("u must be nonzero")
        if self.convention not in CONVENTIONS:
            raise ValueError(f"convention must be one of {CONVENTIONS}")


@dataclass(frozen=True)
class SixVertexParams:
    lambda_alpha: Any = 0.3
    v: Sequence = ()
    eta: Any = 0.4
    H: float = 0.0
    V: float = 0.0
    a: Any = 1
    b: Any = 1
    c: Any = 1

    def lam(self, alpha: int = 0) -> complex:
        if isinstance(self.lambda_alpha, (list, tuple)):
            return complex(self.lambda_alpha[alpha])
        return complex(self.lambda_alpha)

    def inhomogeneity(self, k: int) -> complex:
        if not self.v:
            return 0j
        return complex(self.v[k])


@dataclass(frozen=True)
class XXXParams:
    lam: Any = 0.5
    spin: Any = Fraction(1, 2)
    normalization: str = "hermitian"

    def __post_init__(self):
        object.__setattr__(self, "spin", _half_integer(self.spin))

    @property
    def local_dim(self) -> int:
        return int(2 * self.spin + 1)


def _half_integer(s) -> Fraction:
    if isinstance(s, str):
        s = Fraction(s)
    elif isinstance(s, float):
        s = Fraction(s).limit_denominator(2)
    else:
        s = Fraction(s)
    if s <= 0 or (2 * s).denominator != 1:
        raise ValueError(f"spin must be a positive half-integer, got {s}")
    return s


# ---------------------------------------------------------------------------
# spin matrices


def spin_matrices(s, normalization: str = "hermitian"):
    """(S3, S+, S-) for spin s, basis ordered m = -s, ..., s.

    ``hermitian`` gives the standard matrices; entries sqrt((s-m)(s+m+1)) are
    exact when they are integers and floats otherwise.  ``rational`` gives a
    diagonally similar representation with S+ entries (s-m)(s+m+1) and S-
    entries 1, which is exact for every s and satisfies the same relations.
    """
    s = _half_integer(s)
    d = int(2 * s + 1)
    ms = [-s + k for k in range(d)]
    s3 = LocalOperator.diag(ms)
    sp = [[0] * d for _ in range(d)]
    sm = [[0] * d for _ in range(d)]
    for k in range(d - 1):
        m = ms[k]
        n = (s - m) * (s + m + 1)
        if normalization == "hermitian":
            r = math.isqrt(int(n))
            val = r if r * r == n else math.sqrt(n)
            sp[k + 1][k] = val
            sm[k][k + 1] = val
        elif normalization == "rational":
            sp[k + 1][k] = n
            sm[k][k + 1] = 1
        else:
            raise ValueError(f"unknown normalization {normalization!r}")
    return s3, LocalOperator(sp), LocalOperator(sm)


# ---------------------------------------------------------------------------
# local L-operators (2 x 2 aux matrices of LocalOperators)


def l4v_local(u, convention: str = ADOPTED_CONVENTION):
    u = Scalar.of(u)
    e = projector(convention)
    return ((e.scale(-u), sigma_minus()), (sigma_plus(), e.scale(u.inverse())))


def _sin(z: complex) -> complex:
    return cmath.sin(z)


def l6v_local(x, eta):
    """Entries sin(x + eta sz), sin(2 eta) s-, sin(2 eta) s+, sin(x - eta sz)."""
    x = complex(x)
    eta = complex(eta)
    zs = [-1, 1]
    d1 = LocalOperator.diag([_sin(x + eta * z) for z in zs])
    d2 = LocalOperator.diag([_sin(x - eta * z) for z in zs])
    c = _sin(2 * eta)
    return ((d1, sigma_minus().scale(c)), (sigma_plus().scale(c), d2))


def lxxx_local(lam, spin, normalization: str = "hermitian"):
    lam = Scalar.of(lam)
    s3, sp, sm = spin_matrices(spin, normalization)
    ident = LocalOperator.identity(s3.dim)
    return (
        (ident.scale(lam) + s3.scale(I), sm.scale(I)),
        (sp.scale(I), ident.scale(lam) - s3.scale(I)),
    )


def local_to_numpy(L) -> tuple:
    """Convert a local L (2x2 of LocalOperator) to 2x2 of complex arrays."""
    return tuple(tuple(op.to_numpy(exact=False) for op in row) for row in L)


def local_to_block(L) -> np.ndarray:
    """Dense (2d x 2d) matrix on aux (x) quantum."""
    arr = local_to_numpy(L)
    return np.block([[arr[0][0], arr[0][1]], [arr[1][0], arr[1][1]]])


def _embed_local(L, site: int, N: int) -> AuxMonodromy:
    return AuxMonodromy(N, tuple(tuple(embed(op, site, N) for op in row) for row in L))


# ---------------------------------------------------------------------------
# single-site aux monodromies


def l4v(site: int, params: FourVertexParams | None = None, N: int = 1, mode: str = "symbolic", var: str = "u") -> AuxMonodromy:
    """4-vertex L-operator [[-u e, s-], [s+, u^-1 e]] on ``site``.

    ``symbolic`` keeps u as the Laurent variable ``var``; ``operator`` uses
    the numeric ``params.u``.
    """
    params = params or FourVertexParams()
    _check_site(site, N)
    if mode == "symbolic":
        e = projector_unit(params.convention)
        cells = (
            (WordSum.letter(site, e, N, LaurentCoeff.var(var, 1, -1)), WordSum.letter(site, (1, 2), N)),
            (WordSum.letter(site, (2, 1), N), WordSum.letter(site, e, N, LaurentCoeff.var(var, -1))),
        )
        return AuxMonodromy(N, cells)
    if mode == "operator":
        return _embed_local(l4v_local(params.u, params.convention), site, N)
    raise ValueError(f"unsupported mode {mode!r}")


def l6v(alpha: int, k: int, params: SixVertexParams, N: int) -> AuxMonodromy:
    """6-vertex L-operator at spectral argument lambda_alpha - v_k on site k."""
    _check_site(k, N)
    x = params.lam(alpha) - params.inhomogeneity(k)
    return _embed_local(l6v_local(x, params.eta), k, N)


def lxxx(site: int, params: XXXParams, N: int) -> AuxMonodromy:
    """XXX L-operator [[lam + i S3, i S-], [i S+, lam - i S3]] on ``site``."""
    _check_site(site, N)
    return _embed_local(lxxx_local(params.lam, params.spin, params.normalization), site, N)


# ---------------------------------------------------------------------------
# R-matrices

PERMUTATION = np.array(
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex
)


def r6v(params: SixVertexParams | None = None, *, a=None, b=None, c=None, H=None, V=None) -> np.ndarray:
    """4x4 six-vertex R with fields: corners a e^{+-(H+V)}, centre [[b e^{H-V}, c], [c, b e^{V-H}]]."""
    p = params or SixVertexParams()
    a = complex(p.a if a is None else a)
    b = complex(p.b if b is None else b)
    c = complex(p.c if c is None else c)
    H = float(p.H if H is None else H)
    V = float(p.V if V is None else V)
    return np.array(
        [
            [a * math.exp(H + V), 0, 0, 0],
            [0, b * math.exp(H - V), c, 0],
            [0, c, b * math.exp(-H + V), 0],
            [0, 0, 0, a * math.exp(-(H + V))],
        ],
        dtype=complex,
    )


def r6v_trig(x, eta, crossing: int = 1) -> np.ndarray:
    """Trigonometric point a = sin(x + k eta), b = sin x, c = sin(k eta) at H = V = 0.

    ``crossing = k``.  k = 1 solves the Yang-Baxter equation for every eta;
    k = 2 is the point that intertwines :func:`l6v_local` (whose off-diagonal
    weight is sin 2 eta).
    """
    x = complex(x)
    eta = complex(eta)
    return r6v(a=_sin(x + crossing * eta), b=_sin(x), c=_sin(crossing * eta), H=0.0, V=0.0)


def r_xxx(x) -> np.ndarray:
    """Rational R(x) = x + i P intertwining :func:`lxxx_local`."""
    return complex(x) * np.eye(4) + 1j * PERMUTATION


# ---------------------------------------------------------------------------
# phi map and weights

GENERATORS = ("A4V", "B4V", "C4V", "D4V")


def phi_map(generator: str, params: XXXParams, site: int = 0, N: int = 1) -> ChainOperator:
    """Image of a 4-vertex generator in the XXX chain."""
    _check_site(site, N)
    L = lxxx_local(params.lam, params.spin, params.normalization)
    idx = GENERATORS.index(generator)
    return embed(L[idx // 2][idx % 2], site, N)


def vertex_weight_table(params=None, model: str = "4v") -> dict:
    """Vertex type -> weight; b-types vanish in the 4-vertex model."""
    a = getattr(params, "a", 1) if params is not None else 1
    c = getattr(params, "c", 1) if params is not None else 1
    if model == "4v":
        return {1: a, 2: a, 3: 0, 4: 0, 5: c, 6: c}
    if model == "6v":
        b = getattr(params, "b", 1) if params is not None else 1
        return {1: a, 2: a, 3: b, 4: b, 5: c, 6: c}
    raise ValueError(f"unknown model {model!r}")


# ---------------------------------------------------------------------------
# configuration files

CONFIG_KEYS = (
    "model", "u", "v", "a", "b", "c", "eta", "H", "V", "spin", "N", "convention",
    "lambda", "mu", "seed", "samples", "tol", "rows", "cols", "boundary", "mode",
)


def _config_value(x):
    if isinstance(x, bool) or x is None:
        return x
    if isinstance(x, float):
        return Fraction(repr(x))
    if isinstance(x, (int, str)):
        return x
    if isinstance(x, list) and all(not isinstance(y, (list, dict)) for y in x):
        return [_config_value(y) for y in x]
    raise ParseError(f"configuration values must be flat scalars, got {x!r}")


def load_config(path) -> dict:
    """Read a flat ``key: value`` file.  Unknown keys are rejected."""
    with open(path, encoding="utf8") as fh:
        data = yaml.safe_load(fh) or {}
    if not isinstance(data, Mapping):
        raise ParseError("configuration must be a flat mapping")
    out = {}
    for k, v in data.items():
        k = str(k)
        if k not in CONFIG_KEYS:
            raise ParseError(f"unknown configuration key {k!r}")
        out[k] = _config_value(v)
    return out


def params_from_config(cfg: Mapping):
    """Build the parameter record named by ``cfg['model']``."""
    model = str(cfg.get("model", "4v")).lower()
    if model == "4v":
        return FourVertexParams(
            u=Scalar.of(cfg.get("u", 1)),
            a=cfg.get("a", 1),
            c=cfg.get("c", 1),
            convention=str(cfg.get("convention", ADOPTED_CONVENTION)),
        )
    if model == "6v":
        return SixVertexParams(
            lambda_alpha=complex(Scalar.of(cfg.get("lambda", Fraction(3, 10)))),
            eta=complex(Scalar.of(cfg.get("eta", Fraction(2, 5)))),
            H=float(cfg.get("H", 0)),
            V=float(cfg.get("V", 0)),
            a=cfg.get("a", 1),
            b=cfg.get("b", 1),
            c=cfg.get("c", 1),
        )
    if model == "xxx":
        return XXXParams(lam=Scalar.of(cfg.get("lambda", Fraction(1, 2))), spin=cfg.get("spin", Fraction(1, 2)))
    raise ValueError(f"unknown model {model!r}")


def scalar_from_any(x) -> Scalar:
    if isinstance(x, numbers.Number) or isinstance(x, (str, Scalar)):
        return Scalar.of(x)
    raise TypeError(f"cannot convert {x!r}")
