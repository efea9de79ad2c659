"""Monodromy and transfer matrices, and the integrability checks built on them.

Three construction paths are available:

* ``symbolic``: WordSum cells with Laurent coefficients (4-vertex only);
* ``operator``: ChainOperator cells, exact when the parameters are exact;
* ``dense``: complex128 arrays built by applying each L-operator site-locally.
"""

from __future__ import annotations

import dataclasses
import functools
import random
from dataclasses import dataclass
from importlib import resources
from typing import Sequence

import numpy as np

from .auxmatrix import LABELS, AuxMonodromy
from .errors import ShapeMismatch
from .models import (
    ADOPTED_CONVENTION,
    CONVENTIONS,
    PERMUTATION,
    FourVertexParams,
    SixVertexParams,
    XXXParams,
    l4v,
    l4v_local,
    l6v,
    l6v_local,
    local_to_numpy,
    lxxx,
    lxxx_local,
    projector,
    r6v,
    r6v_trig,
    r_xxx,
)
from .operator_core import (
    ChainOperator,
    Scalar,
    check_cap,
    commutator,
    frobenius_norm,
    sigma_minus,
    sigma_plus,
)
from .symbolic_words import (
    Fixture,
    WordSum,
    evaluate,
    format_laurent,
    parse_fixture,
    support,
    word_multiply,
)

MODELS = ("4v", "6v", "xxx")


# ---------------------------------------------------------------------------
# construction


def with_spectral(model: str, params, value):
    """Copy of ``params`` with the spectral parameter replaced."""
    if model == "4v":
        return dataclasses.replace(params, u=value)
    if model == "6v":
        return dataclasses.replace(params, lambda_alpha=complex(Scalar.of(value)))
    if model == "xxx":
        return dataclasses.replace(params, lam=value)
    raise ValueError(f"unknown model {model!r}")


def local_dim(model: str, params) -> int:
    return params.local_dim if model == "xxx" else 2


def local_l(model: str, params, site: int = 0):
    """Single-site L as a 2x2 of LocalOperators."""
    if model == "4v":
        return l4v_local(params.u, params.convention)
    if model == "6v":
        return l6v_local(params.lam(0) - params.inhomogeneity(site), params.eta)
    if model == "xxx":
        return lxxx_local(params.lam, params.spin, params.normalization)
    raise ValueError(f"unknown model {model!r}")


def _site_order(N: int, reverse: bool):
    return range(N - 1, -1, -1) if reverse else range(N)


def apply_local(M: np.ndarray, op: np.ndarray, site: int, N: int, d: int) -> np.ndarray:
    """Right-multiply a dense D x D matrix by op placed on ``site``."""
    D = M.shape[0]
    left = d ** site
    right = d ** (N - site - 1)
    T = M.reshape(D, left, d, right)
    out = np.einsum("xajb,jk->xakb", T, op, optimize=True)
    return out.reshape(D, D)


def _dense_monodromy(model, params, N, reverse, cap):
    d = local_dim(model, params)
    D = check_cap(N, d, cap)
    cells = [[np.eye(D, dtype=complex), None], [None, np.eye(D, dtype=complex)]]
    for site in _site_order(N, reverse):
        L = local_to_numpy(local_l(model, params, site))
        new = [[None, None], [None, None]]
        for i in range(2):
            for k in range(2):
                acc = None
                for m in range(2):
                    if cells[i][m] is None or not np.any(L[m][k]):
                        continue
                    term = apply_local(cells[i][m], L[m][k], site, N, d)
                    acc = term if acc is None else acc + term
                new[i][k] = acc
        cells = new
    zero = np.zeros((D, D), dtype=complex)
    entries = tuple(tuple(zero if c is None else c for c in row) for row in cells)
    return AuxMonodromy(N, entries)


def monodromy(model: str, params, N: int, mode: str = "operator", reverse: bool = False,
              var: str = "u", cap: int | None = None) -> AuxMonodromy:
    """Ordered product of single-site L-operators over sites 0..N-1.

    Parameters
    ----------
    model : {"4v", "6v", "xxx"}
    params : FourVertexParams, SixVertexParams or XXXParams
    N : int
        Chain length.
    mode : {"symbolic", "operator", "dense"}
        ``symbolic`` is only available for the 4-vertex model.
    reverse : bool
        Multiply in descending site order instead.
    var : str
        Laurent variable name in symbolic mode.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    if model not in MODELS:
        raise ValueError(f"unknown model {model!r}")
    if mode == "dense":
        return _dense_monodromy(model, params, N, reverse, cap)
    if mode == "symbolic":
        if model != "4v":
            raise ValueError(f"symbolic mode is unavailable for the trigonometric/spin model {model!r}")
        factors = [l4v(j, params, N, "symbolic", var) for j in _site_order(N, reverse)]
    elif mode == "operator":
        if model == "4v":
            factors = [l4v(j, params, N, "operator") for j in _site_order(N, reverse)]
        elif model == "6v":
            factors = [l6v(0, j, params, N) for j in _site_order(N, reverse)]
        else:
            factors = [lxxx(j, params, N) for j in _site_order(N, reverse)]
    else:
        raise ValueError(f"unknown mode {mode!r}")
    out = factors[0]
    for f in factors[1:]:
        out = out @ f
    return out


def transfer(T: AuxMonodromy):
    """Auxiliary trace A + D."""
    return T.trace()


def transfer_matrix(model: str, params, N: int, mode: str = "dense", cap: int | None = None):
    return transfer(monodromy(model, params, N, mode=mode, cap=cap))


# ---------------------------------------------------------------------------
# commutation


def commutation_residual(model: str, params, u, u2, N: int, mode: str = "dense",
                         cap: int | None = None, reverse: bool = False) -> float:
    """Frobenius norm of [t(u), t(u2)].

    ``symbolic`` (4-vertex only) forms the commutator as a WordSum in two
    variables; when it cancels identically the result is exactly 0.0.
    """
    check_cap(N, local_dim(model, params), cap)
    if mode == "symbolic":
        if model != "4v":
            raise ValueError("symbolic commutation is only available for the 4-vertex model")
        c = _symbolic_commutator(N, params.convention, reverse)
        if c.is_zero():
            return 0.0
        return frobenius_norm(evaluate(c, {"u": u, "v": u2}), cap)
    p1 = with_spectral(model, params, u)
    p2 = with_spectral(model, params, u2)
    t1 = transfer(monodromy(model, p1, N, mode, reverse, cap=cap))
    t2 = transfer(monodromy(model, p2, N, mode, reverse, cap=cap))
    if mode == "dense":
        return float(np.linalg.norm(t1 @ t2 - t2 @ t1))
    return frobenius_norm(commutator(t1, t2), cap)


@functools.lru_cache(maxsize=32)
def _symbolic_commutator(N: int, convention: str, reverse: bool = False) -> WordSum:
    p = FourVertexParams(convention=convention)
    t1 = transfer(monodromy("4v", p, N, "symbolic", reverse, var="u"))
    t2 = transfer(monodromy("4v", p, N, "symbolic", reverse, var="v"))
    return word_multiply(t1, t2) - word_multiply(t2, t1)


def symbolic_transfer_commutator(N: int, convention: str = ADOPTED_CONVENTION) -> WordSum:
    """[t(u), t(v)] as a WordSum in the two Laurent variables u, v."""
    return _symbolic_commutator(N, convention)


def random_gaussian_rational(rng: random.Random, span: int = 5, den: int = 4) -> Scalar:
    """Nonzero Gaussian rational with small numerators and denominators."""
    from fractions import Fraction

    while True:
        re = Fraction(rng.randint(-span, span), rng.randint(1, den))
        im = Fraction(rng.randint(-span, span), rng.randint(1, den))
        s = Scalar(re, im)
        if not s.is_zero():
            return s


def random_complex(rng: random.Random, scale: float = 1.0) -> complex:
    return complex(rng.uniform(-scale, scale), rng.uniform(-scale, scale))


def select_convention(n_max: int = 6, samples: int = 10, seed: int = 0, tol: float = 1e-10) -> dict:
    """Run the transfer-commutation oracle under C1 and C2 and pick one.

    A convention passes when every residual for N = 1..n_max is within
    ``tol``.  If both pass, the tie is broken in favour of the convention
    whose projector equals sigma^+ sigma^-.
    """
    rng = random.Random(seed)
    pairs = [(random_spectral(rng), random_spectral(rng)) for _ in range(samples)]
    worst = {}
    for conv in CONVENTIONS:
        p = FourVertexParams(convention=conv)
        worst[conv] = max(
            commutation_residual("4v", p, Scalar.of(u), Scalar.of(v), n, "dense")
            for n in range(1, n_max + 1)
            for u, v in pairs
        )
    passing = [c for c in CONVENTIONS if worst[c] <= tol]
    sp_sm = sigma_plus() @ sigma_minus()
    if len(passing) == 1:
        adopted, reason = passing[0], "unique passing convention"
    elif passing:
        matching = [c for c in passing if projector(c) == sp_sm]
        adopted = matching[0] if matching else passing[0]
        reason = "both pass; tie broken by e = sigma+ sigma-"
    else:
        adopted, reason = None, "no convention passes"
    return {"residuals": worst, "passing": passing, "adopted": adopted, "reason": reason}


def random_spectral(rng: random.Random, r_min: float = 0.8, r_max: float = 1.25) -> complex:
    """Complex number with modulus in [r_min, r_max] and uniform phase.

    Keeps u^N and u^-N of comparable size so absolute residuals stay meaningful.
    """
    r = rng.uniform(r_min, r_max)
    phi = rng.uniform(0.0, 2.0 * np.pi)
    return complex(r * np.cos(phi), r * np.sin(phi))


def random_pairs(rng: random.Random, samples: int, exact: bool) -> list:
    """Spectral-parameter pairs: Gaussian rationals when exact, else complex."""
    draw = random_gaussian_rational if exact else (lambda r: Scalar.of(random_spectral(r)))
    return [(draw(rng), draw(rng)) for _ in range(samples)]


def transfer_commutation_battery(model: str, params, n_max: int, samples: int, seed: int,
                                 mode: str = "dense", cap: int | None = None) -> list:
    """Worst ||[t(u), t(u')]|| per chain length N = 1..n_max over seeded pairs."""
    rng = random.Random(seed)
    pairs = random_pairs(rng, samples, exact=(mode != "dense" and model == "4v"))
    rows = []
    for n in range(1, n_max + 1):
        worst = max(commutation_residual(model, params, u, v, n, mode, cap) for u, v in pairs)
        rows.append({"n": n, "samples": samples, "max_residual": worst})
    return rows


def xxx_commutation_battery(spins: Sequence, n_max: int, samples: int, seed: int,
                            cap: int | None = None) -> list:
    """Commutation of the higher-spin XXX transfer matrices for each spin."""
    rows = []
    for s in spins:
        params = XXXParams(spin=s)
        rng = random.Random(seed)
        pairs = random_pairs(rng, samples, exact=False)
        for n in range(1, n_max + 1):
            if params.local_dim ** n > (cap or 4096):
                break
            worst = max(commutation_residual("xxx", params, u, v, n, "dense", cap) for u, v in pairs)
            rows.append({"spin": str(params.spin), "n": n, "samples": samples, "max_residual": worst})
    return rows


# ---------------------------------------------------------------------------
# RLL and YBE


def _as_numpy_l(L):
    if hasattr(L[0][0], "to_numpy"):
        return local_to_numpy(L)
    return tuple(tuple(np.asarray(x, dtype=complex) for x in row) for row in L)


def rll_residual(R, Lu, Lu2) -> float:
    """|| R12 L1(u) L2(u2) - L2(u2) L1(u) R12 || on aux1 (x) aux2 (x) quantum.

    ``Lu`` and ``Lu2`` are 2x2 aux matrices of d x d local operators.
    """
    La = _as_numpy_l(Lu)
    Lb = _as_numpy_l(Lu2)
    R = np.asarray(R, dtype=complex)
    if R.shape != (4, 4):
        raise ShapeMismatch("R must be 4x4")
    d = La[0][0].shape[0]
    if Lb[0][0].shape[0] != d:
        raise ShapeMismatch("L-operators act on different local spaces")
    L1 = np.zeros((4 * d, 4 * d), dtype=complex)
    L2 = np.zeros((4 * d, 4 * d), dtype=complex)
    q = np.arange(d)
    for i in range(2):
        for j in range(2):
            for k in range(2):
                L1[np.ix_((i * 2 + k) * d + q, (j * 2 + k) * d + q)] = La[i][j]
                L2[np.ix_((k * 2 + i) * d + q, (k * 2 + j) * d + q)] = Lb[i][j]
    RR = np.kron(R, np.eye(d))
    return float(np.linalg.norm(RR @ L1 @ L2 - L2 @ L1 @ RR))


def ybe_residual(R_of, lam, mu) -> float:
    """|| R12(l-m) R13(l) R23(m) - R23(m) R13(l) R12(l-m) || for a callable R."""
    I2 = np.eye(2)
    P23 = np.kron(I2, PERMUTATION)
    R12 = np.kron(R_of(lam - mu), I2)
    R23 = np.kron(I2, R_of(mu))
    R13 = P23 @ np.kron(R_of(lam), I2) @ P23
    return float(np.linalg.norm(R12 @ R13 @ R23 - R23 @ R13 @ R12))


def ybe_residual_6v(lam, mu, eta, crossing: int = 1) -> float:
    return ybe_residual(lambda x: r6v_trig(x, eta, crossing), complex(lam), complex(mu))


def rll_residual_6v(lam, mu, eta, crossing: int = 2, v: complex = 0j) -> float:
    """RLL for the 6-vertex L with the trigonometric R at argument lam - mu."""
    R = r6v_trig(complex(lam) - complex(mu), eta, crossing)
    return rll_residual(R, l6v_local(complex(lam) - v, eta), l6v_local(complex(mu) - v, eta))


def rll_residual_xxx(lam, mu, spin) -> float:
    R = r_xxx(complex(lam) - complex(mu))
    return rll_residual(R, lxxx_local(lam, spin), lxxx_local(mu, spin))


def intertwiner_space(Lu, Lu2, rel_tol: float = 1e-9) -> dict:
    """Solve R L1 L2 = L2 L1 R for a 4x4 R by SVD.

    Returns the singular values, the numerical nullspace dimension and the
    residual of the best solution (normalized to unit Frobenius norm).
    """
    cols = []
    for idx in range(16):
        E = np.zeros((4, 4), dtype=complex)
        E.flat[idx] = 1.0
        La, Lb = _as_numpy_l(Lu), _as_numpy_l(Lu2)
        cols.append(_rll_matrix(E, La, Lb).ravel())
    M = np.stack(cols, axis=1)
    _, sv, vh = np.linalg.svd(M)
    null_dim = int(np.sum(sv <= rel_tol * max(sv[0], 1e-300)))
    best = vh[-1].conj().reshape(4, 4)
    return {
        "singular_values": sv.tolist(),
        "null_dim": null_dim,
        "best_R": best,
        "best_residual": rll_residual(best, Lu, Lu2),
    }


def _rll_matrix(R, La, Lb):
    d = La[0][0].shape[0]
    L1 = np.zeros((4 * d, 4 * d), dtype=complex)
    L2 = np.zeros((4 * d, 4 * d), dtype=complex)
    q = np.arange(d)
    for i in range(2):
        for j in range(2):
            for k in range(2):
                L1[np.ix_((i * 2 + k) * d + q, (j * 2 + k) * d + q)] = La[i][j]
                L2[np.ix_((k * 2 + i) * d + q, (k * 2 + j) * d + q)] = Lb[i][j]
    RR = np.kron(R, np.eye(d))
    return RR @ L1 @ L2 - L2 @ L1 @ RR


def rll_candidates_4v(u, u2, convention: str = ADOPTED_CONVENTION) -> list:
    """Exploratory RLL residuals of the 4-vertex L against simple R candidates."""
    Lu = l4v_local(u, convention)
    Lv = l4v_local(u2, convention)
    x = complex(Scalar.of(u)) / complex(Scalar.of(u2))
    cands = [
        ("identity", np.eye(4, dtype=complex)),
        ("permutation", PERMUTATION.copy()),
        ("r6v b=0", r6v(a=1, b=0, c=1)),
        ("r6v a=x b=0 c=1", r6v(a=x, b=0, c=1)),
        ("r6v a=1 b=x-1 c=1", r6v(a=1, b=x - 1, c=1)),
    ]
    return [(name, rll_residual(R, Lu, Lv)) for name, R in cands]


# ---------------------------------------------------------------------------
# Yang-Baxter algebra products

PAIR_ORDER = tuple(x + y for x in LABELS for y in LABELS)


@dataclass(frozen=True)
class ProductRow:
    label: str
    pair: str
    product_norm: float
    commutator_norm: float
    exchange_norm: float


@dataclass(frozen=True)
class ProductReport:
    model: str
    chain_len: int
    u: str
    u2: str
    rows: tuple
    transfer_norm: float


def yb_products(model: str, params, u, u2, N: int, cap: int | None = None) -> ProductReport:
    """All 16 products X(u) Y(u2) with two norms each.

    ``commutator_norm`` is ||X(u)Y(u2) - Y(u2)X(u)|| and ``exchange_norm`` is
    ||X(u)Y(u2) - X(u2)Y(u)||.  ``transfer_norm`` is ||[A+D, A'+D']||.
    """
    T1 = monodromy(model, with_spectral(model, params, u), N, "dense", cap=cap)
    T2 = monodromy(model, with_spectral(model, params, u2), N, "dense", cap=cap)
    rows = []
    for k, pair in enumerate(PAIR_ORDER):
        X1, Y2 = T1.cell(pair[0]), T2.cell(pair[1])
        X2, Y1 = T2.cell(pair[0]), T1.cell(pair[1])
        P = X1 @ Y2
        rows.append(
            ProductRow(
                label=f"C{k + 1}",
                pair=pair,
                product_norm=float(np.linalg.norm(P)),
                commutator_norm=float(np.linalg.norm(P - Y2 @ X1)),
                exchange_norm=float(np.linalg.norm(P - X2 @ Y1)),
            )
        )
    t1, t2 = T1.trace(), T2.trace()
    return ProductReport(
        model=model,
        chain_len=N,
        u=str(Scalar.of(u)),
        u2=str(Scalar.of(u2)),
        rows=tuple(rows),
        transfer_norm=float(np.linalg.norm(t1 @ t2 - t2 @ t1)),
    )


# ---------------------------------------------------------------------------
# transcription fixtures

FIXTURES = {
    "two-site": ("two_site_entries.fix", 2),
    "three-site": ("three_site_first_entry.fix", 3),
}


def load_fixture(name_or_path: str, convention: str = ADOPTED_CONVENTION) -> Fixture:
    """Packaged fixture by name, or a fixture file by path."""
    if name_or_path in FIXTURES:
        fname, _ = FIXTURES[name_or_path]
        text = resources.files("fourvertex").joinpath("data").joinpath(fname).read_text(encoding="utf8")
    else:
        with open(name_or_path, encoding="utf8") as fh:
            text = fh.read()
    return parse_fixture(text, convention=convention)


@dataclass(frozen=True)
class TermDiff:
    word: str
    status: str  # matched | coefficient-mismatch | missing
    side: str  # both | engine-only | fixture-only
    engine: str
    fixture: str


@dataclass(frozen=True)
class DiffReport:
    entry: str
    terms: tuple
    counts: dict
    support_match: bool
    vanished_in_fixture: int = 0

    @property
    def complete(self) -> bool:
        return sum(self.counts.values()) == len(self.terms)


def fixture_diff(engine: WordSum, fixture: WordSum, entry: str = "", vanished: int = 0) -> DiffReport:
    """Classify every word of engine and fixture as matched, mismatched or missing."""
    if engine.chain_len != fixture.chain_len:
        raise ShapeMismatch("engine and fixture chain lengths differ")
    words = sorted(set(engine.terms) | set(fixture.terms), key=lambda w: w.sort_key())
    rows = []
    counts = {"matched": 0, "coefficient-mismatch": 0, "missing": 0}
    for w in words:
        ce = engine.terms.get(w)
        cf = fixture.terms.get(w)
        if ce is not None and cf is not None:
            status = "matched" if ce == cf else "coefficient-mismatch"
            side = "both"
        else:
            status = "missing"
            side = "engine-only" if cf is None else "fixture-only"
        counts[status] += 1
        rows.append(
            TermDiff(
                word=str(w),
                status=status,
                side=side,
                engine=format_laurent(ce) if ce is not None else "",
                fixture=format_laurent(cf) if cf is not None else "",
            )
        )
    return DiffReport(
        entry=entry,
        terms=tuple(rows),
        counts=counts,
        support_match=support(engine) == support(fixture),
        vanished_in_fixture=vanished,
    )


def fixture_report(name_or_path: str = "two-site", convention: str = ADOPTED_CONVENTION) -> list:
    """Diff every section of a fixture against the engine monodromy.

    Section names must be one of A, B, C, D, optionally followed by a
    transcription label, e.g. ``[A I1]``.
    """
    fx = load_fixture(name_or_path, convention)
    T = monodromy("4v", FourVertexParams(convention=convention), fx.chain_len, "symbolic")
    reports = []
    for name, section in fx.sections.items():
        label = name.split()[0]
        if label not in LABELS:
            raise ValueError(f"fixture section {name!r} must start with one of {LABELS}")
        reports.append(
            fixture_diff(T.cell(label), section.wordsum, entry=name, vanished=section.vanished)
        )
    return reports


def strict_support_subset(N: int, convention: str = ADOPTED_CONVENTION) -> dict:
    """Compare the union of A, B, C, D supports against all matrix-unit words."""
    T = monodromy("4v", FourVertexParams(convention=convention), N, "symbolic")
    union = set()
    for label in LABELS:
        union |= support(T.cell(label))
    total = 4 ** N  # one matrix unit on every site
    return {"chain_len": N, "union_size": len(union), "all_words": total, "strict": len(union) < total}
