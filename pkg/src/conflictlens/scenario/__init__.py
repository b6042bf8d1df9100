from .ast import (
    ActionDecl,
    AdoptDecl,
    AssignDecl,
    EvidenceDecl,
    GoalDecl,
    HistoryDecl,
    InitDecl,
    RuleDecl,
    Scenario,
    SourceLocation,
    VarDecl,
    WeightDecl,
)
from .build import BuiltScenario, Lowering, build, state_var
from .fixtures import fixture_text, list_fixtures, load_fixture
from .parser import KEYWORDS, SECTIONS, parse, parse_formula, tokenize
from .printer import to_text
from .validate import ERROR, WARNING, Diagnostic, errors, validate

__all__ = [
    "ERROR",
    "KEYWORDS",
    "SECTIONS",
    "WARNING",
    "ActionDecl",
    "AdoptDecl",
    "AssignDecl",
    "BuiltScenario",
    "Diagnostic",
    "EvidenceDecl",
    "GoalDecl",
    "HistoryDecl",
    "InitDecl",
    "Lowering",
    "RuleDecl",
    "Scenario",
    "SourceLocation",
    "VarDecl",
    "WeightDecl",
    "build",
    "errors",
    "fixture_text",
    "list_fixtures",
    "load_fixture",
    "parse",
    "parse_formula",
    "state_var",
    "to_text",
    "tokenize",
    "validate",
]
