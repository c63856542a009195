"""Query-table complexity of integer languages in LSB-first binary."""

__version__ = "0.1.0"

from .automata import (
    AlternatingAutomaton,
    And,
    Atom,
    Or,
    ResidualReport,
    accepts,
    evaluate,
    reachable_census,
    residual_count,
    tree_dfa,
)
from .crt import CrtWitness, construct_witness, profile_coverage_census, verify_witness
from .numtheory import Kind, SieveWindow, is_prime, is_squarefree, sieve_window, squarefree_residues
from .oracles import PRIMES, SQUAREFREE, LanguageOracle, OracleKind
from .querytable import (
    Profile,
    QueryTableScan,
    RichnessReport,
    dfa_profile_bound_check,
    profile,
    richness_report,
    scan_profiles,
)
from .words import BitWord
