"""Resolvable decompositions of the complete symmetric digraph K*_{2m} into
directed m-cycles, for odd 5 <= m <= 49, with an independent verifier."""
from .assembly import construct
from .core import Decomposition, parse, serialize
from .verify import verify_decomposition, verify_witness

__all__ = ["construct", "Decomposition", "parse", "serialize", "verify_decomposition", "verify_witness"]
