from __future__ import annotations

from hypothesis import given, settings, strategies as st

from conflictlens.errors import ConflictLensError
from conflictlens.scenario import errors, parse, parse_formula, validate

VOCABULARY = [
    "HORIZON", "VARS", "ACTIONS", "TRANS", "INIT", "EVIDENCE", "GOALS_A", "WEIGHTS_A",
    "x", "y", "go", "A", "B", "Env", "1", "2", "0..1", "{", "}", "(", ")", ":", ",", "=",
    "<=", "!", "&", "|", "->", "X", "G<=1", "F<=2", "U", "S", "Y", "@", "$", "on", "do",
    ":=", "+", "*", "\n", "\n  ",
]

FORMULA_WORDS = ["p", "q", "x", "=", "1", "<", "!", "&", "|", "->", "<->", "(", ")", "X", "Y", "U", "S", "G<=1", "F", "@2"]


@settings(max_examples=400, deadline=None)
@given(st.lists(st.sampled_from(VOCABULARY), max_size=40))
def test_parser_never_crashes(words) -> None:
    text = " ".join(words)
    try:
        s = parse(text)
    except ConflictLensError:
        return
    for diag in errors(validate(s)):
        assert diag.is_error


@settings(max_examples=400, deadline=None)
@given(st.lists(st.sampled_from(FORMULA_WORDS), min_size=1, max_size=25))
def test_formula_parser_never_crashes(words) -> None:
    try:
        parse_formula(" ".join(words))
    except ConflictLensError:
        pass
