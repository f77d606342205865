"""Tree-shaped natural deduction: a proof-document format, a checking kernel,
Curry-Howard extraction, proof search and rendering."""
from .errors import (
    ArityConflict, CyclicDefinition, DepthOutOfRange, DuplicateName, GpndError, IllTyped,
    InvalidPath, OutOfFragment, ParseError, StepLimitExceeded, UncheckedLemma, WidthExceeded,
)
from .kernel import (
    CheckReport, Context, Diagnostic, Environment, Mode, available_hypotheses, check_document,
    check_node, derive_rule, elaborate_chain,
)
from .proof_format import ProofDocument, ProofNode, parse_document, parse_formula, print_document
from .search import prove

__all__ = [
    "ArityConflict", "CheckReport", "Context", "CyclicDefinition", "DepthOutOfRange", "Diagnostic",
    "DuplicateName", "Environment", "GpndError", "IllTyped", "InvalidPath", "Mode", "OutOfFragment",
    "ParseError", "ProofDocument", "ProofNode", "StepLimitExceeded", "UncheckedLemma", "WidthExceeded",
    "available_hypotheses", "check_document", "check_node", "derive_rule", "elaborate_chain",
    "parse_document", "parse_formula", "print_document", "prove",
]
