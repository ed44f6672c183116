"""Succinct representations of DFAs, acyclic DFAs and NFAs."""

from .automaton import (
    ExplicitDfa,
    ExplicitNfa,
    format_automaton,
    lex_dfs,
    oracle_accept,
    oracle_accept_nfa,
    parse_automaton,
    parse_word,
    relabel,
    validate,
)
from .bits import Bitvector, MonotoneSequence, SparseBitvector
from .bptree import BpTree
from .dyckcodec import DyckBoxedDiagram, compress_failure, decode_dyck, encode_dyck
from .errors import IntegrityError, SuccinctError, ValidationError
from .packedvec import PackedVector
from .product import ProductOp, build_product
from .sadfa import SuccinctAcyclicDfa, build_sadfa
from .sdfa import SuccinctDfa, SuccinctDfaFailure, build_sdfa, build_sdfa_failure
from .snfa import SuccinctNfa, build_snfa

__version__ = "0.1.0"
