"""Randomized slice equivalence testing for context-free grammars.

The heavy lifting lives in the compiled ``_core`` module; this package just
re-exports it.
"""

from ._core import (
    BudgetError,
    Grammar,
    GrammarParseError,
    MonotoneCircuit,
    NormalizeError,
    SliceqError,
    Verdict,
    bounded_equivalence,
    count_derivations,
    cyk_member,
    enumerate_slice,
    evaluate_prefix,
    evaluate_slice,
    evaluate_slice_random,
    exact_slice_equal,
    extract_circuit,
    gf2_slice_empty,
    gf2_slice_nonempty_exact,
    import_circuit,
    normalize_to_cnf,
    parse_grammar,
    parse_membership,
    slice_equivalence,
    slice_unambiguous,
    validate_cnf,
)

__version__ = "0.1.0"

__all__ = [
    "BudgetError",
    "Grammar",
    "GrammarParseError",
    "MonotoneCircuit",
    "NormalizeError",
    "SliceqError",
    "Verdict",
    "bounded_equivalence",
    "count_derivations",
    "cyk_member",
    "enumerate_slice",
    "evaluate_prefix",
    "evaluate_slice",
    "evaluate_slice_random",
    "exact_slice_equal",
    "extract_circuit",
    "gf2_slice_empty",
    "gf2_slice_nonempty_exact",
    "import_circuit",
    "normalize_to_cnf",
    "parse_grammar",
    "parse_membership",
    "slice_equivalence",
    "slice_unambiguous",
    "validate_cnf",
]
