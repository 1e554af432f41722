"""Braid-word search for approximating quantum gates."""

from .algebra import braid_error, distance, frobenius_norm, mat_multiply
from .braidword import BraidWord, concat, format_word, free_reduce, mat, parse_word, render_diagram, subbraid
from .gatesets import GateSet, TargetGate, fibonacci_gateset, get_gateset, majorana_gateset, target_gate
from .search_brute import FrontierPoint, count_reduced_words, exhaustive_search
from .search_genetic import FitnessParams, GaConfig, RunRecord, evolve, fitness

__all__ = [
    "BraidWord",
    "FitnessParams",
    "FrontierPoint",
    "GaConfig",
    "GateSet",
    "RunRecord",
    "TargetGate",
    "braid_error",
    "concat",
    "count_reduced_words",
    "distance",
    "evolve",
    "exhaustive_search",
    "fibonacci_gateset",
    "fitness",
    "format_word",
    "free_reduce",
    "frobenius_norm",
    "get_gateset",
    "majorana_gateset",
    "mat",
    "mat_multiply",
    "parse_word",
    "render_diagram",
    "subbraid",
    "target_gate",
]
