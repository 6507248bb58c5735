"""Deficiency, monomial dependency and equilibria of mass-action reaction networks."""

from .decomp import Decomposition, NotApplicableError, decompose, decomposition_checks, finest_independent_decomposition
from .depone import (
    analyze_class,
    check_decomposable,
    check_deficiency_one,
    check_existence,
    check_mass_action,
    check_one_class,
)
from .equilib import birch_intersect, solve_equilibrium, solve_univariate, UnivariateProfile
from .estimators import EquilibriumSolver, NetworkAnalyzer
from .graph import Digraph, GraphError, graph_stats
from .massaction import MassActionSystem, NetworkError, ReactionNetwork, structural_report
from .netio import ParseError, build_report, emit_report, load_network, parse_network, serialize_network
from .polycore import PolySystem, coefficient_polytope_segment, monomial_structure
from .ratlin import RatMatrix, kernel_basis, positive_kernel_search, rank, rref
from .salt import salt_certificate, salt_certificates

__version__ = "0.1.0"

__all__ = [
    "Decomposition", "NotApplicableError", "decompose", "decomposition_checks", "finest_independent_decomposition",
    "analyze_class", "check_decomposable", "check_deficiency_one", "check_existence", "check_mass_action",
    "check_one_class", "birch_intersect", "solve_equilibrium", "solve_univariate", "UnivariateProfile",
    "EquilibriumSolver", "NetworkAnalyzer", "Digraph", "GraphError", "graph_stats", "MassActionSystem",
    "NetworkError", "ReactionNetwork", "structural_report", "ParseError", "build_report", "emit_report",
    "load_network", "parse_network", "serialize_network", "PolySystem", "coefficient_polytope_segment",
    "monomial_structure", "RatMatrix", "kernel_basis", "positive_kernel_search", "rank", "rref",
    "salt_certificate", "salt_certificates",
]
