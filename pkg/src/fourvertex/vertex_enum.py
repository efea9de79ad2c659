"""Ice-rule configurations on rectangular lattices and their partition functions.

Geometry: rows are numbered from the top, columns from the left.  Each
vertex has edges W, E (horizontal, arrows ``>`` or ``<``) and N, S
(vertical, arrows ``^`` or ``v``).  The six vertex types are read from the
packaged arrow table ``data/vertex_types.json``.

Boundaries are a ring of ``in``/``out`` tokens read clockwise: the top side
left to right, the right side top to bottom, the bottom side right to left,
then the left side bottom to top.
"""

from __future__ import annotations

import itertools
import json
import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Iterator, Mapping, Sequence

import numpy as np
import yaml

from .auxmatrix import AuxMonodromy
from .errors import CapExceeded, ParseError
from .models import l4v_local, l6v_local
from .operator_core import Scalar, check_cap
from .symbolic_words import LaurentCoeff, WordSum

MAX_SITES = 16
MAX_ORACLE_EDGES = 12
ALL_TYPES = frozenset(range(1, 7))
FOUR_VERTEX_TYPES = frozenset({1, 2, 5, 6})


class InconsistentBoundary(UserWarning):
    """The boundary has unequal numbers of in and out arrows."""


# ---------------------------------------------------------------------------
# arrow table


@lru_cache(maxsize=None)
def vertex_table() -> dict:
    """Vertex type -> dict with W, E, S, N arrows and class a/b/c."""
    raw = json.loads(resources.files("fourvertex").joinpath("data").joinpath("vertex_types.json").read_text())
    return {int(k): v for k, v in raw["types"].items()}


@lru_cache(maxsize=None)
def _arrow_lookup() -> dict:
    return {(v["W"], v["E"], v["S"], v["N"]): t for t, v in vertex_table().items()}


def vertex_type(W: str, E: str, S: str, N: str):
    """Type number for the four arrows, or None when the ice rule fails."""
    return _arrow_lookup().get((W, E, S, N))


def type_class(t: int) -> str:
    return vertex_table()[t]["class"]


def in_count(W: str, E: str, S: str, N: str) -> int:
    """Number of arrows pointing into the vertex (independent of the table)."""
    return (W == ">") + (E == "<") + (S == "^") + (N == "v")


# ---------------------------------------------------------------------------
# lattices


_IN_ARROW = {"top": "v", "right": "<", "bottom": "^", "left": ">"}
_OUT_ARROW = {"top": "^", "right": ">", "bottom": "v", "left": "<"}


@dataclass(frozen=True)
class Lattice:
    """R x C lattice with a fully specified boundary ring of in/out tokens."""

    rows: int
    cols: int
    boundary: tuple

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ValueError("rows and cols must be positive")
        b = tuple(str(t).lower() for t in self.boundary)
        if len(b) != 2 * (self.rows + self.cols):
            raise ValueError(f"boundary needs {2 * (self.rows + self.cols)} tokens, got {len(b)}")
        if any(t not in ("in", "out") for t in b):
            raise ValueError("boundary tokens must be 'in' or 'out'")
        object.__setattr__(self, "boundary", b)

    def side_tokens(self) -> dict:
        R, C = self.rows, self.cols
        b = self.boundary
        top = b[:C]
        right = b[C:C + R]
        bottom = tuple(reversed(b[C + R:2 * C + R]))
        left = tuple(reversed(b[2 * C + R:]))
        return {"top": top, "right": right, "bottom": bottom, "left": left}

    def arrows(self) -> dict:
        """Boundary arrows: top/bottom indexed by column, left/right by row."""
        out = {}
        for side, toks in self.side_tokens().items():
            out[side] = tuple(_IN_ARROW[side] if t == "in" else _OUT_ARROW[side] for t in toks)
        return out

    def is_consistent(self) -> bool:
        return self.boundary.count("in") == self.boundary.count("out")

    @property
    def internal_edges(self) -> int:
        return self.rows * (self.cols - 1) + (self.rows - 1) * self.cols


def lattice_from_sides(rows: int, cols: int, top, right, bottom, left) -> Lattice:
    """Build a lattice from per-side token lists (top/bottom by column, left/right by row)."""
    ring = list(top) + list(right) + list(reversed(bottom)) + list(reversed(left))
    return Lattice(rows, cols, tuple(ring))


PRESETS = ("dwbc", "dwbc-reversed", "alternating", "ferro", "half-turn", "row-alternating")


def preset(name: str, rows: int, cols: int) -> Lattice:
    """Named boundaries.

    ``dwbc``: horizontal boundary arrows in, vertical out.
    ``dwbc-reversed``: vertical in, horizontal out.
    ``alternating``: tokens alternate in/out around the ring.
    ``ferro``: every boundary arrow points right or up.
    ``half-turn``: left and top in, right and bottom out.
    ``row-alternating``: top in, bottom out, left and right sides alternate
    out/in starting from the top row (consistent for an even number of rows).
    """
    R, C = rows, cols
    if name == "dwbc":
        return lattice_from_sides(R, C, ["out"] * C, ["in"] * R, ["out"] * C, ["in"] * R)
    if name == "dwbc-reversed":
        return lattice_from_sides(R, C, ["in"] * C, ["out"] * R, ["in"] * C, ["out"] * R)
    if name == "alternating":
        n = 2 * (R + C)
        return Lattice(R, C, tuple("in" if k % 2 == 0 else "out" for k in range(n)))
    if name == "ferro":
        return lattice_from_sides(R, C, ["out"] * C, ["out"] * R, ["in"] * C, ["in"] * R)
    if name == "half-turn":
        return lattice_from_sides(R, C, ["in"] * C, ["out"] * R, ["out"] * C, ["in"] * R)
    if name == "row-alternating":
        side = ["out" if r % 2 == 0 else "in" for r in range(R)]
        return lattice_from_sides(R, C, ["in"] * C, side, ["out"] * C, side)
    raise ValueError(f"unknown boundary preset {name!r}; choose from {PRESETS}")


def load_lattice(path) -> Lattice:
    """Read ``rows``, ``cols`` and ``boundary`` (ring of in/out tokens) from a file."""
    with open(path, encoding="utf8") as fh:
        data = yaml.safe_load(fh) or {}
    try:
        rows, cols, ring = int(data["rows"]), int(data["cols"]), data["boundary"]
    except (KeyError, TypeError) as exc:
        raise ParseError(f"lattice file needs rows, cols and boundary: {exc}") from None
    if isinstance(ring, str):
        if ring in PRESETS:
            return preset(ring, rows, cols)
        ring = ring.replace(",", " ").split()
    return Lattice(rows, cols, tuple(ring))


# ---------------------------------------------------------------------------
# configurations


@dataclass(frozen=True)
class LatticeConfig:
    """Arrow assignment on every edge (boundary included) and the vertex types.

    ``h[r][c]`` is the horizontal edge left of column c in row r (c = 0..C);
    ``v[r][c]`` is the vertical edge above row r in column c (r = 0..R).
    """

    rows: int
    cols: int
    h: tuple
    v: tuple
    types: tuple = field(compare=False)

    @property
    def counts(self) -> tuple:
        n = [0] * 6
        for row in self.types:
            for t in row:
                n[t - 1] += 1
        return tuple(n)

    def vertex_arrows(self, r: int, c: int) -> tuple:
        return (self.h[r][c], self.h[r][c + 1], self.v[r + 1][c], self.v[r][c])

    def key(self) -> tuple:
        return (self.h, self.v)


def _config_from_edges(R, C, h, v) -> LatticeConfig | None:
    types = []
    for r in range(R):
        row = []
        for c in range(C):
            t = vertex_type(h[r][c], h[r][c + 1], v[r + 1][c], v[r][c])
            if t is None:
                return None
            row.append(t)
        types.append(tuple(row))
    return LatticeConfig(R, C, tuple(tuple(x) for x in h), tuple(tuple(x) for x in v), tuple(types))


def enumerate_configs(lattice: Lattice, allowed=ALL_TYPES, max_sites: int = MAX_SITES) -> Iterator[LatticeConfig]:
    """Depth-first generation of every ice-rule configuration, each once.

    Vertices are filled row by row from the top-left; at each vertex the
    W and N arrows are already known, so only E and S are chosen and any
    choice giving a disallowed or non-ice vertex is pruned immediately.
    An inconsistent boundary yields nothing and emits an
    :class:`InconsistentBoundary` warning.
    """
    R, C = lattice.rows, lattice.cols
    if R * C > max_sites:
        raise CapExceeded(f"{R}x{C} lattice exceeds the {max_sites}-site enumeration cap")
    if not lattice.is_consistent():
        warnings.warn("boundary has unequal in/out counts; no configurations", InconsistentBoundary)
        return
    allowed = frozenset(allowed)
    arr = lattice.arrows()
    h = [[None] * (C + 1) for _ in range(R)]
    v = [[None] * C for _ in range(R + 1)]
    for r in range(R):
        h[r][0] = arr["left"][r]
        h[r][C] = arr["right"][r]
    for c in range(C):
        v[0][c] = arr["top"][c]
        v[R][c] = arr["bottom"][c]
    types = [[0] * C for _ in range(R)]
    lookup = _arrow_lookup()

    def rec(k):
        if k == R * C:
            yield LatticeConfig(
                R, C, tuple(tuple(x) for x in h), tuple(tuple(x) for x in v), tuple(tuple(x) for x in types)
            )
            return
        r, c = divmod(k, C)
        W, N = h[r][c], v[r][c]
        e_choices = (h[r][c + 1],) if c == C - 1 else (">", "<")
        s_choices = (v[r + 1][c],) if r == R - 1 else ("^", "v")
        for E in e_choices:
            for S in s_choices:
                t = lookup.get((W, E, S, N))
                if t is None or t not in allowed:
                    continue
                if c < C - 1:
                    h[r][c + 1] = E
                if r < R - 1:
                    v[r + 1][c] = S
                types[r][c] = t
                yield from rec(k + 1)
        if c < C - 1:
            h[r][c + 1] = None
        if r < R - 1:
            v[r + 1][c] = None

    yield from rec(0)


def brute_force_configs(lattice: Lattice, allowed=ALL_TYPES, max_edges: int = MAX_ORACLE_EDGES) -> list:
    """Oracle: try all 2**(internal edges) assignments and keep the ice-rule ones.

    The ice rule is checked by counting incoming arrows at each vertex,
    without consulting the vertex table.
    """
    R, C = lattice.rows, lattice.cols
    n_edges = lattice.internal_edges
    if n_edges > max_edges:
        raise CapExceeded(f"{n_edges} internal edges exceed the oracle cap {max_edges}")
    arr = lattice.arrows()
    slots = [("h", r, c) for r in range(R) for c in range(1, C)] + [("v", r, c) for r in range(1, R) for c in range(C)]
    out = []
    for bits in itertools.product((0, 1), repeat=len(slots)):
        h = [[None] * (C + 1) for _ in range(R)]
        v = [[None] * C for _ in range(R + 1)]
        for r in range(R):
            h[r][0] = arr["left"][r]
            h[r][C] = arr["right"][r]
        for c in range(C):
            v[0][c] = arr["top"][c]
            v[R][c] = arr["bottom"][c]
        for (kind, r, c), bit in zip(slots, bits):
            if kind == "h":
                h[r][c] = ">" if bit else "<"
            else:
                v[r][c] = "^" if bit else "v"
        ok = all(
            in_count(h[r][c], h[r][c + 1], v[r + 1][c], v[r][c]) == 2 for r in range(R) for c in range(C)
        )
        if not ok:
            continue
        cfg = _config_from_edges(R, C, h, v)
        if cfg is not None and all(t in allowed for row in cfg.types for t in row):
            out.append(cfg)
    return out


# ---------------------------------------------------------------------------
# weights

ANISOTROPIC_SYMBOLS = {1: "a1", 2: "a2", 3: "b1", 4: "b2", 5: "c1", 6: "c2"}


@dataclass(frozen=True)
class WeightSpec:
    """How vertex types are weighted.

    mode
        ``homogeneous``: symbols a, b, c by vertex class;
        ``anisotropic``: one symbol per type (a1, a2, b1, b2, c1, c2);
        ``inhomogeneous``: per-site numeric triples (w_a, w_b, w_c).
    model
        ``4v`` forces every b-type weight to zero; ``6v`` keeps them.
    site_weights
        rows x cols nested sequence of (w_a, w_b, w_c) for ``inhomogeneous``.
    """

    mode: str = "homogeneous"
    model: str = "4v"
    site_weights: tuple = ()

    def __post_init__(self):
        if self.mode not in ("homogeneous", "anisotropic", "inhomogeneous"):
            raise ValueError(f"unknown weight mode {self.mode!r}")
        if self.model not in ("4v", "6v"):
            raise ValueError(f"unknown model {self.model!r}")

    @property
    def allowed(self) -> frozenset:
        return FOUR_VERTEX_TYPES if self.model == "4v" else ALL_TYPES

    def type_weight(self, t: int, r: int = 0, c: int = 0) -> LaurentCoeff:
        cls = type_class(t)
        if self.model == "4v" and cls == "b":
            return LaurentCoeff.const(0)
        if self.mode == "homogeneous":
            return LaurentCoeff.var(cls)
        if self.mode == "anisotropic":
            return LaurentCoeff.var(ANISOTROPIC_SYMBOLS[t])
        wa, wb, wc = self.site_weights[r][c]
        return LaurentCoeff.const({"a": wa, "b": wb, "c": wc}[cls])


def uniform_weights(rows: int, cols: int, wa=1, wb=1, wc=1, model: str = "4v") -> WeightSpec:
    return WeightSpec("inhomogeneous", model, tuple(tuple((wa, wb, wc) for _ in range(cols)) for _ in range(rows)))


def weight(config: LatticeConfig, spec: WeightSpec) -> LaurentCoeff:
    """Product of vertex weights over all sites."""
    if spec.mode == "inhomogeneous":
        out = LaurentCoeff.const(1)
        for r, row in enumerate(config.types):
            for c, t in enumerate(row):
                out = out * spec.type_weight(t, r, c)
                if out.is_zero():
                    return out
        return out
    n = config.counts
    out = LaurentCoeff.const(1)
    for t, k in enumerate(n, 1):
        if k:
            w = spec.type_weight(t)
            if w.is_zero():
                return w
            out = out * w ** k
    return out


def partition_enum(lattice: Lattice, spec: WeightSpec, allowed=None) -> LaurentCoeff:
    """Sum of weights over enumerated configurations."""
    allowed = spec.allowed if allowed is None else frozenset(allowed)
    total = LaurentCoeff.const(0)
    for cfg in enumerate_configs(lattice, allowed):
        total = total + weight(cfg, spec)
    return total


def z_triples(z: LaurentCoeff, model: str = "4v") -> list:
    """Exponent profiles with counts: (exp_a, exp_c, count) or (exp_a, exp_b, exp_c, count)."""
    names = ("a", "c") if model == "4v" else ("a", "b", "c")
    rows = []
    for key, coeff in z.terms.items():
        exps = dict(key)
        if set(exps) - set(names):
            raise ValueError(f"polynomial has variables outside {names}")
        count = coeff.re if coeff.im == 0 else coeff
        if hasattr(count, "denominator") and count.denominator == 1:
            count = int(count)
        rows.append(tuple(exps.get(n, 0) for n in names) + (count,))
    return sorted(rows)


@dataclass(frozen=True)
class Ratio:
    """Exact ratio of two polynomials (weights over a partition function)."""

    num: LaurentCoeff
    den: LaurentCoeff

    def evaluate(self, assignment: Mapping) -> Scalar:
        return self.num.evaluate(assignment) / self.den.evaluate(assignment)

    def value(self) -> Scalar:
        return self.num.constant_value() / self.den.constant_value()


def probability(config: LatticeConfig, lattice: Lattice, spec: WeightSpec, z: LaurentCoeff | None = None) -> Ratio:
    """weight(config) / Z."""
    z = partition_enum(lattice, spec) if z is None else z
    if z.is_zero():
        raise ZeroDivisionError("empty configuration space (Z = 0)")
    return Ratio(weight(config, spec), z)


# ---------------------------------------------------------------------------
# transfer-matrix route


@dataclass(frozen=True)
class Geometry:
    """How L-operator indices map to lattice arrows.

    ``right_index``: aux index carrying a ``>`` arrow.  ``up_index``: quantum
    basis index carrying a ``^`` arrow.  ``aux_flow``: ``LR`` (aux enters at
    W) or ``RL``.  ``quantum_flow``: ``SN`` (operator maps the S state to the
    N state) or ``NS``.
    """

    right_index: int
    up_index: int
    aux_flow: str
    quantum_flow: str

    def h_arrow(self, idx: int) -> str:
        return ">" if idx == self.right_index else "<"

    def v_arrow(self, idx: int) -> str:
        return "^" if idx == self.up_index else "v"

    def h_index(self, arrow: str) -> int:
        return self.right_index if arrow == ">" else 1 - self.right_index

    def v_index(self, arrow: str) -> int:
        return self.up_index if arrow == "^" else 1 - self.up_index

    def element_arrows(self, alpha, beta, q_in, q_out) -> tuple:
        a_in, a_out = self.h_arrow(alpha), self.h_arrow(beta)
        W, E = (a_in, a_out) if self.aux_flow == "LR" else (a_out, a_in)
        s_in, s_out = self.v_arrow(q_in), self.v_arrow(q_out)
        S, N = (s_in, s_out) if self.quantum_flow == "SN" else (s_out, s_in)
        return (W, E, S, N)


ALL_GEOMETRIES = tuple(
    Geometry(r, u, a, q) for r in (0, 1) for u in (0, 1) for a in ("LR", "RL") for q in ("SN", "NS")
)

_STRUCTURE_POINTS = {
    "6v": lambda: l6v_local(0.37 + 0.11j, 0.23 - 0.07j),
    "4v": lambda: l4v_local(Scalar.parse("3/5+2/7i")),
}


@lru_cache(maxsize=None)
def l_support(structure: str = "6v") -> tuple:
    """Nonzero L elements (alpha, beta, q_in, q_out), read off the model L at a generic point."""
    L = _STRUCTURE_POINTS[structure]()
    out = []
    for alpha in range(2):
        for beta in range(2):
            for q_out, q_in, _ in L[alpha][beta].nonzeros:
                out.append((alpha, beta, q_in, q_out))
    return tuple(sorted(out))


def dictionary_for(geometry: Geometry, structure: str = "6v") -> dict | None:
    """Map each support element to a vertex type; None if any element breaks the ice rule."""
    out = {}
    for el in l_support(structure):
        t = vertex_type(*geometry.element_arrows(*el))
        if t is None:
            return None
        out[el] = t
    return out


def _apply_word_ops(state: dict, op: WordSum) -> dict:
    out: dict = {}
    for word, coeff in op.terms.items():
        letters = word.letters
        for basis, amp in state.items():
            new = list(basis)
            ok = True
            for s, (i, j) in letters:
                if new[s] != j - 1:
                    ok = False
                    break
                new[s] = i - 1
            if not ok:
                continue
            key = tuple(new)
            val = amp * coeff
            out[key] = out[key] + val if key in out else val
    return {k: v for k, v in out.items() if not v.is_zero()}


def row_monodromy(lattice: Lattice, spec: WeightSpec, row: int, geometry: Geometry, dictionary: Mapping) -> AuxMonodromy:
    """Product of weighted L-operators along one row, in aux-flow order."""
    C = lattice.cols
    cols = range(C) if geometry.aux_flow == "LR" else range(C - 1, -1, -1)
    out = None
    for c in cols:
        cells = [[WordSum.zero(C), WordSum.zero(C)], [WordSum.zero(C), WordSum.zero(C)]]
        for (alpha, beta, q_in, q_out), t in dictionary.items():
            w = spec.type_weight(t, row, c)
            if w.is_zero():
                continue
            cells[alpha][beta] = cells[alpha][beta] + WordSum.letter(c, (q_out + 1, q_in + 1), C, w)
        L = AuxMonodromy(C, tuple(tuple(r) for r in cells))
        out = L if out is None else out @ L
    return out


def partition_transfer(lattice: Lattice, spec: WeightSpec, geometry: Geometry | None = None,
                       dictionary: Mapping | None = None, structure: str = "6v",
                       cap: int | None = None) -> LaurentCoeff:
    """Z as a boundary-contracted product of row transfer operators.

    Each row operator is the (in, out) aux entry of the row monodromy built
    from the L-operator support of ``structure``, with every L element
    weighted by the vertex type the frozen dictionary assigns to it.
    """
    check_cap(lattice.cols, 2, cap)
    if geometry is None or dictionary is None:
        frozen = frozen_dictionary(structure)
        geometry = geometry or frozen["geometry"]
        dictionary = dictionary or frozen["dictionary"]
    if not lattice.is_consistent():
        return LaurentCoeff.const(0)
    R, C = lattice.rows, lattice.cols
    arr = lattice.arrows()
    row_ops = []
    for r in range(R):
        T = row_monodromy(lattice, spec, r, geometry, dictionary)
        if geometry.aux_flow == "LR":
            a_in, a_out = geometry.h_index(arr["left"][r]), geometry.h_index(arr["right"][r])
        else:
            a_in, a_out = geometry.h_index(arr["right"][r]), geometry.h_index(arr["left"][r])
        row_ops.append(T.entries[a_in][a_out])
    top = tuple(geometry.v_index(a) for a in arr["top"])
    bottom = tuple(geometry.v_index(a) for a in arr["bottom"])
    if geometry.quantum_flow == "SN":
        start, finish, order = bottom, top, range(R - 1, -1, -1)
    else:
        start, finish, order = top, bottom, range(R)
    state = {start: LaurentCoeff.const(1)}
    for r in order:
        state = _apply_word_ops(state, row_ops[r])
        if not state:
            break
    return state.get(finish, LaurentCoeff.const(0))


def small_lattices() -> list:
    """Every consistent boundary on 1x1, 1x2 and 2x1 lattices."""
    out = []
    for R, C in ((1, 1), (1, 2), (2, 1)):
        n = 2 * (R + C)
        for ring in itertools.product(("in", "out"), repeat=n):
            lat = Lattice(R, C, ring)
            if lat.is_consistent():
                out.append(lat)
    return out


def derive_weight_dictionary(structure: str = "6v") -> dict:
    """Fit the L-element to vertex-type dictionary against enumeration.

    Every geometry in :data:`ALL_GEOMETRIES` whose elements all satisfy the
    ice rule is tried.  A geometry passes when, with independent symbols for
    the six vertex types, the transfer route reproduces enumeration over the
    image types on every consistent boundary of the 1x1, 1x2 and 2x1
    lattices.  The first passing geometry is returned with the full list.
    """
    spec = WeightSpec("anisotropic", "6v")
    lattices = small_lattices()
    passing = []
    for g in ALL_GEOMETRIES:
        d = dictionary_for(g, structure)
        if d is None:
            continue
        image = frozenset(d.values())
        if len(image) != len(d):
            continue
        if all(
            partition_transfer(lat, spec, g, d) == partition_enum(lat, spec, allowed=image) for lat in lattices
        ):
            passing.append((g, d))
    if not passing:
        return {"structure": structure, "geometry": None, "dictionary": None, "passing": []}
    g, d = passing[0]
    return {"structure": structure, "geometry": g, "dictionary": d, "passing": [p[0] for p in passing]}


def dictionary_to_json(result: dict) -> dict:
    g = result["geometry"]
    return {
        "structure": result["structure"],
        "geometry": {
            "right_index": g.right_index,
            "up_index": g.up_index,
            "aux_flow": g.aux_flow,
            "quantum_flow": g.quantum_flow,
        },
        "elements": [
            {"alpha": a, "beta": b, "q_in": qi, "q_out": qo, "type": t}
            for (a, b, qi, qo), t in sorted(result["dictionary"].items())
        ],
    }


@lru_cache(maxsize=None)
def _frozen_raw() -> dict:
    text = resources.files("fourvertex").joinpath("data").joinpath("weight_dictionary.json").read_text()
    return json.loads(text)


def frozen_dictionary(structure: str = "6v") -> dict:
    """The packaged dictionary for ``structure`` (``6v`` or ``4v``)."""
    raw = _frozen_raw()[structure]
    g = Geometry(**raw["geometry"])
    d = {(e["alpha"], e["beta"], e["q_in"], e["q_out"]): e["type"] for e in raw["elements"]}
    return {"structure": structure, "geometry": g, "dictionary": d}


def structure_types(structure: str = "4v") -> frozenset:
    """Vertex types realized by the support of an L-operator under the frozen dictionary."""
    return frozenset(frozen_dictionary(structure)["dictionary"].values())


def z_at(z: LaurentCoeff, **values) -> Scalar:
    return z.evaluate(values)


def count_configs(lattice: Lattice, allowed=ALL_TYPES) -> int:
    return sum(1 for _ in enumerate_configs(lattice, allowed))


def config_matrix(config: LatticeConfig) -> np.ndarray:
    """Vertex types as an integer array (for plotting and reports)."""
    return np.array(config.types, dtype=int)
