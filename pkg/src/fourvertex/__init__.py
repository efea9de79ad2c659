"""Transfer matrices, vertex models and Poisson bracket expansion for the 4-vertex model."""

from .operator_core import ChainOperator, LocalOperator, Scalar, densify, embed, frobenius_norm
from .symbolic_words import LaurentCoeff, SiteWord, WordSum, evaluate, support, word_multiply
from .models import ADOPTED_CONVENTION, FourVertexParams, SixVertexParams, XXXParams
from .monodromy import transfer, transfer_matrix

__all__ = [
    "ADOPTED_CONVENTION",
    "ChainOperator",
    "FourVertexParams",
    "LaurentCoeff",
    "LocalOperator",
    "Scalar",
    "SiteWord",
    "SixVertexParams",
    "WordSum",
    "XXXParams",
    "densify",
    "embed",
    "evaluate",
    "frobenius_norm",
    "support",
    "transfer",
    "transfer_matrix",
    "word_multiply",
]

__version__ = "0.1.0"
