"""Executable confluence checks for untyped and typed lambda calculi."""

from .generate import CorpusSpec, diff, find_diamond_cex, find_typed_eta_diamond_cex, gen_terms, gen_typed_terms
from .parallel import PAR, complete_dev, par_reducts, par_step_check
from .props import (check_commutation, check_confluence, check_diamond, check_strip,
                    check_strong_commutation, commutative_union_pipeline)
from .reduction import BETA, BETAETA, EMPTY, ETA, Relation, joinable, normalize, reachable, union_rel
from .terms import App, Lam, Var, parse, pretty

__version__ = "0.1.0"

__all__ = [
    "App", "BETA", "BETAETA", "CorpusSpec", "EMPTY", "ETA", "Lam", "PAR", "Relation", "Var",
    "check_commutation", "check_confluence", "check_diamond", "check_strip", "check_strong_commutation",
    "commutative_union_pipeline", "complete_dev", "diff", "find_diamond_cex", "find_typed_eta_diamond_cex",
    "gen_terms", "gen_typed_terms", "joinable", "normalize", "par_reducts", "par_step_check", "parse",
    "pretty", "reachable", "union_rel",
]
