from .printer import to_text
from .semantics import Run, TruthCache, evaluate, expand, temporal_depth
from .syntax import (
    BOTTOM,
    TOP,
    And,
    Atom,
    Believes,
    Bottom,
    BoundedFinally,
    BoundedGlobally,
    Compare,
    Finally,
    Formula,
    Globally,
    Historically,
    Iff,
    Implies,
    Next,
    Not,
    Or,
    Prev,
    Since,
    Top,
    Until,
    atoms,
    conj,
    contains_belief,
    disj,
    is_core,
    is_state_formula,
    shift,
    walk,
)
from .tseitin import Encoder, Encoding, FreeTheory, Theory, encode

__all__ = [
    "BOTTOM",
    "TOP",
    "And",
    "Atom",
    "Believes",
    "Bottom",
    "BoundedFinally",
    "BoundedGlobally",
    "Compare",
    "Encoder",
    "Encoding",
    "Finally",
    "Formula",
    "FreeTheory",
    "Globally",
    "Historically",
    "Iff",
    "Implies",
    "Next",
    "Not",
    "Or",
    "Prev",
    "Run",
    "Since",
    "Theory",
    "TruthCache",
    "Top",
    "Until",
    "atoms",
    "conj",
    "contains_belief",
    "disj",
    "encode",
    "evaluate",
    "expand",
    "is_core",
    "is_state_formula",
    "shift",
    "temporal_depth",
    "to_text",
    "walk",
]
