"""Deciding triviality of polymorphisms of finite predicates."""

from .engine import (
    PolymorphismTuple,
    classify_polymorphism,
    collect_polymorphisms,
    enumerate_polymorphisms,
    find_violation,
    is_polymorphism,
    scan_polymorphisms,
)
from .errors import (
    ArgumentError,
    BudgetExceededError,
    CapabilityError,
    DegenerateInputError,
    PolytrivError,
    PreconditionError,
    SignatureMismatchError,
)
from .functions import FunctionTable
from .impossibility import check_impossibility_unanimity, decide_impossibility
from .phi import PhiFamily, build_phi, phi_identity, phi_negation
from .predicate import Certificate, Predicate, nae_predicate, symmetric_predicate
from .symmetric import classify_symmetric, polymorphism_family
from .triviality import check_trivial_for_n, decide_trivial, reduction_report

__version__ = "0.1.0"

__all__ = [
    "ArgumentError",
    "BudgetExceededError",
    "CapabilityError",
    "Certificate",
    "DegenerateInputError",
    "FunctionTable",
    "PhiFamily",
    "PolymorphismTuple",
    "PolytrivError",
    "Predicate",
    "PreconditionError",
    "SignatureMismatchError",
    "build_phi",
    "check_impossibility_unanimity",
    "check_trivial_for_n",
    "classify_polymorphism",
    "classify_symmetric",
    "collect_polymorphisms",
    "decide_impossibility",
    "decide_trivial",
    "enumerate_polymorphisms",
    "find_violation",
    "is_polymorphism",
    "nae_predicate",
    "phi_identity",
    "phi_negation",
    "polymorphism_family",
    "reduction_report",
    "scan_polymorphisms",
    "symmetric_predicate",
]
