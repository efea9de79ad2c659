"""2 x 2 auxiliary-space matrices whose cells are chain operators."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ShapeMismatch
from .operator_core import ChainOperator, multiply
from .symbolic_words import WordSum, word_multiply

LABELS = ("A", "B", "C", "D")
MODES = ("symbolic", "operator", "dense")


def _mode_of(cell) -> str:
    if isinstance(cell, WordSum):
        return "symbolic"
    if isinstance(cell, ChainOperator):
        return "operator"
    if isinstance(cell, np.ndarray):
        return "dense"
    raise TypeError(f"unsupported cell type {type(cell).__name__}")


def cell_mul(x, y):
    if isinstance(x, WordSum):
        return word_multiply(x, y)
    if isinstance(x, ChainOperator):
        return multiply(x, y)
    return x @ y


def cell_add(x, y):
    return x + y


@dataclass(frozen=True)
class AuxMonodromy:
    """Entries ((A, B), (C, D)) of a monodromy or single-site L-operator.

    Cells are all WordSum (``symbolic``), all ChainOperator (``operator``) or
    all dense numpy arrays (``dense``).
    """

    chain_len: int
    entries: tuple

    def __post_init__(self):
        cells = [c for row in self.entries for c in row]
        if len(self.entries) != 2 or any(len(r) != 2 for r in self.entries):
            raise ShapeMismatch("AuxMonodromy needs a 2x2 array of cells")
        modes = {_mode_of(c) for c in cells}
        if len(modes) != 1:
            raise ShapeMismatch(f"mixed cell modes {sorted(modes)}")
        for c in cells:
            if isinstance(c, (WordSum, ChainOperator)) and c.chain_len != self.chain_len:
                raise ShapeMismatch("cell chain length differs from monodromy")

    @property
    def mode(self) -> str:
        return _mode_of(self.entries[0][0])

    @property
    def A(self):
        return self.entries[0][0]

    @property
    def B(self):
        return self.entries[0][1]

    @property
    def C(self):
        return self.entries[1][0]

    @property
    def D(self):
        return self.entries[1][1]

    def cell(self, label: str):
        idx = LABELS.index(label)
        return self.entries[idx // 2][idx % 2]

    def __matmul__(self, other: "AuxMonodromy") -> "AuxMonodromy":
        if other.chain_len != self.chain_len:
            raise ShapeMismatch("chain length mismatch")
        x, y = self.entries, other.entries
        out = tuple(
            tuple(cell_add(cell_mul(x[i][0], y[0][j]), cell_mul(x[i][1], y[1][j])) for j in range(2))
            for i in range(2)
        )
        return AuxMonodromy(self.chain_len, out)

    def trace(self):
        return cell_add(self.A, self.D)
