"""Two-valued coalitionally strategy-proof social choice functions over
weak orders: manipulation checks, dominance compatibility, committees,
psi-type functions and their recovery from tables."""

from .committees import Committee, ExtendedCommittee, dual, enumerate_committees, in_class
from .decompose import decompose, extract_base_committee, restrict_scf
from .dominance import dominates, is_compatible
from .errors import DomainError, NotCSPError, ParseError, ResourceBoundError, TwoValuedError
from .orders import Cmp, Universe, WeakOrder, enumerate_weak_orders, format_order, parse_order
from .profiles import (
    PartialProfile,
    Profile,
    ProfileDomain,
    equivalence_set,
    get_domain,
    indifference_set,
    supporters,
)
from .psi import INFINITY, PsiSpec, evaluate_psi, find_strict_dictator, index, psi_table, strict_committee_scf
from .scf import (
    ScfTable,
    anti_rule,
    coalition_manipulates,
    example_dia,
    is_csp,
    is_essentially_based_and_monotonic,
    is_individually_sp,
    is_weak_pareto,
)

__all__ = [
    "Cmp",
    "Committee",
    "DomainError",
    "ExtendedCommittee",
    "INFINITY",
    "NotCSPError",
    "ParseError",
    "PartialProfile",
    "Profile",
    "ProfileDomain",
    "PsiSpec",
    "ResourceBoundError",
    "ScfTable",
    "TwoValuedError",
    "Universe",
    "WeakOrder",
    "anti_rule",
    "coalition_manipulates",
    "decompose",
    "dominates",
    "dual",
    "enumerate_committees",
    "enumerate_weak_orders",
    "equivalence_set",
    "evaluate_psi",
    "example_dia",
    "extract_base_committee",
    "find_strict_dictator",
    "format_order",
    "get_domain",
    "in_class",
    "index",
    "indifference_set",
    "is_compatible",
    "is_csp",
    "is_essentially_based_and_monotonic",
    "is_individually_sp",
    "is_weak_pareto",
    "parse_order",
    "psi_table",
    "restrict_scf",
    "strict_committee_scf",
    "supporters",
]
