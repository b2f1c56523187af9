"""Quadratic APN candidates over GF(2^3m) and the linearized permutations behind them."""

from .field import FieldCtx, FieldError, make_field, rel_norm
from .linearized import HTriple, LinPoly, make_f_mu

__version__ = "0.1.0"

__all__ = ["FieldCtx", "FieldError", "HTriple", "LinPoly", "make_f_mu", "make_field", "rel_norm"]
