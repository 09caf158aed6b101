"""Exact solvers and gluing-equivalence verification."""
from .equivalence import EquivalenceReport, PartnerFamily, check_gluing_equivalence, iter_partners
from .exact import PROBLEMS, ExactSolution, canonical_problem, is_feasible, solve_exact
from .fixtures import brute_representative_check, generate_k2i_family, k2i

__all__ = [
    "PROBLEMS",
    "EquivalenceReport",
    "ExactSolution",
    "PartnerFamily",
    "brute_representative_check",
    "canonical_problem",
    "check_gluing_equivalence",
    "generate_k2i_family",
    "is_feasible",
    "iter_partners",
    "k2i",
    "solve_exact",
]
