"""Local-search satisfiability for quantifier-free integer arithmetic."""

from .formula import EQ, LE, Atom, Clause, Formula, Literal, Polynomial, normalize_atom, normalize_polynomial
from .frontend import ParseError, load_formula, parse_script, read_formula, to_cnf
from .operators import Operation, build_pools, cm_lia, cm_nia
from .oracle import Box, brute_force, eval_ast
from .search import Engine, Result, SearchParams, SoundnessError, solve
from .state import SearchState

__all__ = [
    "EQ", "LE", "Atom", "Clause", "Formula", "Literal", "Polynomial", "normalize_atom",
    "normalize_polynomial", "ParseError", "load_formula", "parse_script", "read_formula", "to_cnf",
    "Operation", "build_pools", "cm_lia", "cm_nia", "Box", "brute_force", "eval_ast", "Engine",
    "Result", "SearchParams", "SoundnessError", "solve", "SearchState",
]
