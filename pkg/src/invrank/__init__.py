"""Exact inversion numbers of oriented graphs via search and GF(2) minimum rank."""

from .complementation import (MinRankOutcome, Representation, c2_oracle, c2_via_rank, complement_subgraph,
                              family_from_representation, is_complementing_system, min_rank,
                              representation_from_family, system_from_matrix)
from .errors import (CertificateError, DimensionError, FormatError, InvRankError, LemmaViolation,
                     LimitExceeded, NotSymmetricError)
from .gf2linalg import (CongruenceResult, Gf2Matrix, block_compose, congruence_diagonalize,
                        gram_factorize, is_staircase, rank, rank_bounded, staircase_conclusion)
from .inversion import InvResult, TmrOutcome, check_decycling, inv, inv_bfs, inv_rank, tmr, tmr_exhaustive
from .structures import (Digraph, Graph, apply_family, cycle3, diff_graph, dijoin, enumerate_tournaments,
                         greedy_decycling, invert, is_acyclic, kjoin, sources_sinks, tournament_completion,
                         transitive_tournament, twins)

__all__ = [
    "MinRankOutcome", "Representation", "c2_oracle", "c2_via_rank", "complement_subgraph",
    "family_from_representation", "is_complementing_system", "min_rank", "representation_from_family",
    "system_from_matrix", "CertificateError", "DimensionError", "FormatError", "InvRankError",
    "LemmaViolation", "LimitExceeded", "NotSymmetricError", "CongruenceResult", "Gf2Matrix", "block_compose",
    "congruence_diagonalize", "gram_factorize", "is_staircase", "rank", "rank_bounded",
    "staircase_conclusion", "InvResult", "TmrOutcome", "check_decycling", "inv", "inv_bfs", "inv_rank",
    "tmr", "tmr_exhaustive", "Digraph", "Graph", "apply_family", "cycle3", "diff_graph", "dijoin",
    "enumerate_tournaments", "greedy_decycling", "invert", "is_acyclic", "kjoin", "sources_sinks",
    "tournament_completion", "transitive_tournament", "twins",
]

__version__ = "0.1.0"
