"""
Scenario DSL parser.

A regex tokenizer feeds a recursive-descent parser. Declarations end at a
newline; newlines inside parentheses or braces are ignored, so long
formulas can be wrapped.

Formula precedence, loosest first:
    <->   ->   |   &   U S   unary (! X P G F H, G<=k F<=k, e: {e,f}:)   primary

Policy:
- parse is total: it returns a Scenario or raises ParseError/DeclarationError
- Every identifier a declaration uses must be declared somewhere in the file
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Dict, List, Optional, Set, Tuple

from ..errors import DeclarationError, ParseError
from ..formula import (
    BOTTOM,
    TOP,
    And,
    Atom,
    Believes,
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
    Until,
    walk,
)
from ..formula.syntax import COMPARISON_OPS
from .ast import (
    AGENT_NAMES,
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

SECTIONS = (
    "HORIZON", "VARS", "OBSERVABLE", "ACTIONS", "TRANS", "INIT", "HISTORY", "EVIDENCE",
    "GOALS_A", "WEIGHTS_A", "GOALS_B", "WEIGHTS_B", "B_KNOWS", "B_COMMITS", "B_ADOPTS",
    "JOINT_WEIGHTS",
)
KEYWORDS = frozenset({"X", "P", "U", "S", "G", "F", "H", "true", "false", "when", "on", "do"})
DEFAULT_EVIDENCE_TAG = "sensor"
KNOWS_TAG = "B"

_TOKEN = re.compile(
    r"""
     (?P<space>[ \t\r]+)
    |(?P<comment>\#[^\n]*)
    |(?P<newline>\n)
    |(?P<int>\d+)
    |(?P<ident>[A-Za-z_][A-Za-z0-9_]*)
    |(?P<op><->|->|:=|\.\.|<=|>=|!=|[<>=&|!(){}\[\],:@*+\-])
    """,
    re.VERBOSE,
)
_OPEN = {"(", "{", "["}
_CLOSE = {")", "}", "]"}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int

    @property
    def loc(self) -> SourceLocation:
        return SourceLocation(self.line, self.column)

    def describe(self) -> str:
        if self.kind == "eof":
            return "end of input"
        if self.kind == "newline":
            return "end of line"
        return repr(self.text)


def tokenize(text: str) -> List[Token]:
    tokens: List[Token] = []
    line, line_start, depth, pos = 1, 0, 0, 0
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        column = pos - line_start + 1
        if match is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, column)
        kind = match.lastgroup
        lexeme = match.group()
        pos = match.end()
        if kind == "newline":
            if depth == 0:
                tokens.append(Token("newline", "\n", line, column))
            line, line_start = line + 1, pos
            continue
        if kind in ("space", "comment"):
            continue
        if lexeme in _OPEN:
            depth += 1
        elif lexeme in _CLOSE:
            depth = max(0, depth - 1)
        tokens.append(Token(kind, lexeme, line, column))
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0

    # =========================================================================
    # Cursor
    # =========================================================================

    def peek(self, offset: int = 0) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def advance(self) -> Token:
        tok = self.peek()
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def at(self, text: str, offset: int = 0) -> bool:
        tok = self.peek(offset)
        return tok.kind in ("op", "ident") and tok.text == text

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.advance()
            return True
        return False

    def expect(self, text: str) -> Token:
        if not self.at(text):
            raise self.error(f"expected {text!r}, found {self.peek().describe()}")
        return self.advance()

    def error(self, message: str, tok: Optional[Token] = None) -> ParseError:
        tok = tok or self.peek()
        return ParseError(message, tok.line, tok.column)

    def name(self, what: str = "identifier") -> Token:
        tok = self.peek()
        if tok.kind != "ident" or tok.text in KEYWORDS:
            raise self.error(f"expected {what}, found {tok.describe()}")
        return self.advance()

    def integer(self) -> int:
        negative = self.accept("-")
        tok = self.peek()
        if tok.kind != "int":
            raise self.error(f"expected an integer, found {tok.describe()}")
        self.advance()
        return -int(tok.text) if negative else int(tok.text)

    def end_of_line(self) -> None:
        tok = self.peek()
        if tok.kind not in ("newline", "eof"):
            raise self.error(f"unexpected {tok.describe()} at end of declaration")
        while self.peek().kind == "newline":
            self.advance()

    # =========================================================================
    # Formulas
    # =========================================================================

    def formula(self) -> Formula:
        left = self._implies()
        while self.accept("<->"):
            left = Iff(left, self._implies())
        return left

    def _implies(self) -> Formula:
        left = self._or()
        if self.accept("->"):
            return Implies(left, self._implies())
        return left

    def _or(self) -> Formula:
        left = self._and()
        while self.accept("|"):
            left = Or(left, self._and())
        return left

    def _and(self) -> Formula:
        left = self._temporal()
        while self.accept("&"):
            left = And(left, self._temporal())
        return left

    def _temporal(self) -> Formula:
        left = self._unary()
        if self.accept("U"):
            return Until(left, self._temporal())
        if self.accept("S"):
            return Since(left, self._temporal())
        return left

    def _unary(self) -> Formula:
        if self.accept("!"):
            return Not(self._unary())
        if self.accept("X"):
            return Next(self._unary())
        if self.accept("P"):
            return Prev(self._unary())
        if self.accept("H"):
            return Historically(self._unary())
        for keyword, bounded, unbounded in (("G", BoundedGlobally, Globally), ("F", BoundedFinally, Finally)):
            if self.accept(keyword):
                if self.accept("<="):
                    tok = self.peek()
                    if tok.kind != "int":
                        raise self.error(f"expected a bound after {keyword}<=, found {tok.describe()}")
                    self.advance()
                    return bounded(int(tok.text), self._unary())
                return unbounded(self._unary())
        if self.at("{"):
            self.advance()
            entities = [self.name("entity").text]
            while self.accept(","):
                entities.append(self.name("entity").text)
            self.expect("}")
            self.expect(":")
            return Believes(frozenset(entities), self._unary())
        tok = self.peek()
        if tok.kind == "ident" and tok.text not in KEYWORDS and self.at(":", 1):
            self.advance()
            self.advance()
            return Believes(frozenset({tok.text}), self._unary())
        return self._primary()

    def _term(self, literal_ok: bool = False) -> str:
        tok = self.peek()
        if tok.kind == "int" or tok.text == "-":
            return str(self.integer())
        if tok.kind == "ident" and (tok.text not in KEYWORDS or (literal_ok and tok.text in ("true", "false"))):
            return self.advance().text
        raise self.error(f"expected a variable or value, found {tok.describe()}")

    def _primary(self) -> Formula:
        if self.accept("("):
            inner = self.formula()
            self.expect(")")
            return inner
        if self.accept("true"):
            return TOP
        if self.accept("false"):
            return BOTTOM
        start = self.peek()
        left = self._term()
        op = self.peek()
        if op.kind == "op" and op.text in COMPARISON_OPS:
            self.advance()
            return Compare(left, op.text, self._term(literal_ok=True))
        if start.kind != "ident":
            raise self.error(f"expected a comparison after {left!r}")
        if self.accept("@"):
            tok = self.peek()
            if tok.kind != "int":
                raise self.error(f"expected a time index, found {tok.describe()}")
            self.advance()
            return Atom(left, int(tok.text))
        return Atom(left)

    # =========================================================================
    # Declarations
    # =========================================================================

    def _name_list(self, what: str) -> List[str]:
        names = [self.name(what).text]
        while self.accept(","):
            names.append(self.name(what).text)
        return names

    def _var(self) -> VarDecl:
        tok = self.name("variable name")
        self.expect(":")
        if self.accept("bool"):
            return VarDecl(tok.text, "bool", ("false", "true"), tok.loc)
        if self.accept("{"):
            values = [self._term()]
            while self.accept(","):
                values.append(self._term())
            self.expect("}")
            if len(set(values)) != len(values):
                raise DeclarationError(f"{tok.text}: a value is listed twice", tok.line, tok.column)
            return VarDecl(tok.text, "enum", tuple(values), tok.loc)
        low = self.integer()
        self.expect("..")
        high = self.integer()
        if high < low:
            raise DeclarationError(f"{tok.text}: empty range {low}..{high}", tok.line, tok.column)
        return VarDecl(tok.text, "range", tuple(str(v) for v in range(low, high + 1)), tok.loc)

    def _actions(self) -> ActionDecl:
        tok = self.peek()
        if tok.kind != "ident" or tok.text not in AGENT_NAMES:
            raise self.error(f"expected one of {', '.join(AGENT_NAMES)}, found {tok.describe()}")
        self.advance()
        self.expect(":")
        return ActionDecl(tok.text, tuple(self._name_list("action name")), tok.loc)

    def _pattern_slot(self) -> Optional[str]:
        if self.accept("*"):
            return None
        return self.name("action or '*'").text

    def _assignment(self) -> AssignDecl:
        tok = self.name("variable name")
        self.expect(":=")
        rhs = self._term(literal_ok=True)
        delta = 0
        if self.at("+") or self.at("-"):
            sign = 1 if self.advance().text == "+" else -1
            number = self.peek()
            if number.kind != "int":
                raise self.error(f"expected an offset, found {number.describe()}")
            self.advance()
            delta = sign * int(number.text)
        return AssignDecl(tok.text, rhs, delta, tok.loc)

    def _rule(self) -> RuleDecl:
        tok = self.name("rule name")
        self.expect(":")
        guard = self.formula() if self.accept("when") else None
        pattern = None
        if self.accept("on"):
            slots = [self._pattern_slot()]
            for _ in range(2):
                self.expect(",")
                slots.append(self._pattern_slot())
            pattern = tuple(slots)
        self.expect("do")
        assignments = [self._assignment()]
        while self.accept(","):
            assignments.append(self._assignment())
        return RuleDecl(tok.text, guard, pattern, tuple(assignments), tok.loc)

    def _history(self) -> HistoryDecl:
        tok = self.peek()
        position = self.integer()
        if position < 0:
            raise self.error("history positions start at 0", tok)
        self.expect(":")
        return HistoryDecl(position, self.formula(), tok.loc)

    def _evidence(self, default_tag: str) -> EvidenceDecl:
        tok = self.name("evidence id")
        tag = default_tag
        if self.accept("["):
            tag = self.name("tag").text
            self.expect("]")
        self.expect(":")
        return EvidenceDecl(tok.text, tag, self.formula(), tok.loc)

    def _goal(self) -> GoalDecl:
        tok = self.name("goal name")
        self.expect(":")
        return GoalDecl(tok.text, self.formula(), tok.loc)

    def _weight(self) -> WeightDecl:
        tok = self.expect("{")
        goals: List[str] = []
        if not self.at("}"):
            goals = self._name_list("goal name")
        self.expect("}")
        self.expect("=")
        weight = self.integer()
        if weight < 0:
            raise self.error("weights are natural numbers", tok)
        return WeightDecl(tuple(goals), weight, tok.loc)

    def _adopt(self) -> AdoptDecl:
        tok = self.name("goal name")
        if self.accept(":"):
            return AdoptDecl(tok.text, self.formula(), tok.loc)
        return AdoptDecl(tok.text, None, tok.loc)

    def _declaration(self, section: str):
        if section == "HORIZON":
            tok = self.peek()
            return tok, self.integer()
        if section == "VARS":
            return self._var()
        if section == "OBSERVABLE":
            return [(t.text, t.loc) for t in self._observable()]
        if section == "ACTIONS":
            return self._actions()
        if section == "TRANS":
            return self._rule()
        if section == "INIT":
            tok = self.peek()
            return InitDecl(self.formula(), tok.loc)
        if section == "HISTORY":
            return self._history()
        if section == "EVIDENCE":
            return self._evidence(DEFAULT_EVIDENCE_TAG)
        if section == "B_KNOWS":
            return self._evidence(KNOWS_TAG)
        if section in ("GOALS_A", "GOALS_B", "B_COMMITS"):
            return self._goal()
        if section == "B_ADOPTS":
            return self._adopt()
        return self._weight()

    def _observable(self) -> List[Token]:
        names = [self.name("variable name")]
        while self.accept(","):
            names.append(self.name("variable name"))
        return names

    def _at_section(self) -> bool:
        tok = self.peek()
        return tok.kind == "ident" and tok.text in SECTIONS

    def scenario(self) -> Scenario:
        sections: Dict[str, list] = {}
        headers: Dict[str, Token] = {}
        while self.peek().kind == "newline":
            self.advance()
        while self.peek().kind != "eof":
            if not self._at_section():
                raise self.error(f"expected a section header, found {self.peek().describe()}")
            header = self.advance()
            if header.text in sections:
                raise DeclarationError(f"section {header.text} appears twice", header.line, header.column)
            headers[header.text] = header
            decls: list = []
            if self.peek().kind not in ("newline", "eof"):
                decls.append(self._declaration(header.text))
            self.end_of_line()
            while self.peek().kind != "eof" and not self._at_section():
                decls.append(self._declaration(header.text))
                self.end_of_line()
            sections[header.text] = decls
        return _assemble(sections, headers)


# =============================================================================
# Assembly and reference checks
# =============================================================================

def _unique(names: List[Tuple[str, SourceLocation]], what: str) -> None:
    seen: Set[str] = set()
    for name, loc in names:
        if name in seen:
            raise DeclarationError(f"duplicate {what} {name!r}", loc.line, loc.column)
        seen.add(name)


class _Scope:
    def __init__(self, variables: Dict[str, VarDecl], actions: Set[str]):
        self.vars = variables
        self.actions = actions

    def undeclared(self, message: str, loc: SourceLocation) -> DeclarationError:
        return DeclarationError(message, loc.line, loc.column)

    def var(self, name: str, loc: SourceLocation, where: str) -> VarDecl:
        found = self.vars.get(name)
        if found is None:
            raise self.undeclared(f"{where}: undeclared variable {name!r}", loc)
        return found

    def check_formula(self, f: Formula, loc: SourceLocation, where: str) -> None:
        for node in walk(f):
            if isinstance(node, Atom):
                decl = self.vars.get(node.name)
                if node.name in self.actions or (decl is not None and decl.kind == "bool"):
                    continue
                raise self.undeclared(f"{where}: undeclared proposition {node.name!r}", loc)
            if isinstance(node, Compare):
                self.check_compare(node, loc, where)

    def check_compare(self, node: Compare, loc: SourceLocation, where: str) -> None:
        left, right = self.vars.get(node.left), self.vars.get(node.right)
        if left is None and right is None:
            raise self.undeclared(f"{where}: {node.left} {node.op} {node.right} compares no variable", loc)
        if left is not None and right is not None:
            return
        var, value = (left, node.right) if left is not None else (right, node.left)
        if value not in var.values:
            raise self.undeclared(f"{where}: {value!r} is not a value of {var.name}", loc)


def _check_references(s: Scenario) -> None:
    scope = _Scope(s.var_index(), set(s.action_names))
    for rule in s.rules:
        where = f"rule {rule.name}"
        if rule.guard is not None:
            scope.check_formula(rule.guard, rule.loc, where)
        for slot in rule.pattern or ():
            if slot is not None and slot not in scope.actions:
                raise scope.undeclared(f"{where}: undeclared action {slot!r}", rule.loc)
        for asg in rule.assignments:
            target = scope.var(asg.var, asg.loc, where)
            if asg.rhs in scope.vars:
                continue
            if asg.delta:
                raise scope.undeclared(f"{where}: undeclared variable {asg.rhs!r}", asg.loc)
            if asg.rhs not in target.values:
                raise scope.undeclared(f"{where}: {asg.rhs!r} is not a value of {target.name}", asg.loc)
    for decl in s.init:
        scope.check_formula(decl.formula, decl.loc, "INIT")
    for decl in s.history:
        scope.check_formula(decl.formula, decl.loc, f"HISTORY {decl.position}")
    for decl in s.evidence + s.knows:
        scope.check_formula(decl.formula, decl.loc, f"evidence {decl.id}")
    for decl in s.goals_a + s.goals_b + s.commits:
        scope.check_formula(decl.formula, decl.loc, f"goal {decl.name}")
    goals_a = {g.name for g in s.goals_a}
    goals_b = {g.name for g in s.goals_b}
    for weights, known, section in (
        (s.weights_a, goals_a, "WEIGHTS_A"),
        (s.weights_b, goals_b, "WEIGHTS_B"),
        (s.joint_weights or (), goals_a | goals_b, "JOINT_WEIGHTS"),
    ):
        seen: Set[frozenset] = set()
        for w in weights:
            for name in w.goals:
                if name not in known:
                    raise scope.undeclared(f"{section}: undeclared goal {name!r}", w.loc)
            key = frozenset(w.goals)
            if key in seen:
                raise scope.undeclared(f"{section}: weight of {{{', '.join(sorted(key))}}} given twice", w.loc)
            seen.add(key)
    for decl in s.adopts:
        if decl.formula is None:
            if decl.name not in goals_a:
                raise scope.undeclared(f"B_ADOPTS: {decl.name!r} is not a goal of A", decl.loc)
        else:
            scope.check_formula(decl.formula, decl.loc, f"goal {decl.name}")


def _assemble(sections: Dict[str, list], headers: Dict[str, Token]) -> Scenario:
    variables: List[VarDecl] = sections.get("VARS", [])
    if not variables:
        header = headers.get("VARS")
        line, column = (header.line, header.column) if header else (1, 1)
        raise DeclarationError("VARS must declare at least one variable", line, column)
    _unique([(v.name, v.loc) for v in variables], "variable")

    horizon: Optional[int] = None
    horizon_loc = SourceLocation()
    entries = sections.get("HORIZON", [])
    if len(entries) > 1:
        tok, _ = entries[1]
        raise DeclarationError("HORIZON takes a single value", tok.line, tok.column)
    if entries:
        tok, horizon = entries[0]
        horizon_loc = tok.loc

    observable = [entry for line in sections.get("OBSERVABLE", []) for entry in line]
    _unique(observable, "observable")
    declared = {v.name for v in variables}
    for name, loc in observable:
        if name not in declared:
            raise DeclarationError(f"OBSERVABLE: undeclared variable {name!r}", loc.line, loc.column)
    actions: List[ActionDecl] = sections.get("ACTIONS", [])
    _unique([(a.agent, a.loc) for a in actions], "action declaration for agent")
    for decl in actions:
        _unique([(n, decl.loc) for n in decl.actions], f"action of {decl.agent}")
    rules: List[RuleDecl] = sections.get("TRANS", [])
    _unique([(r.name, r.loc) for r in rules], "rule")
    evidence: List[EvidenceDecl] = sections.get("EVIDENCE", [])
    knows: List[EvidenceDecl] = sections.get("B_KNOWS", [])
    _unique([(e.id, e.loc) for e in evidence + knows], "evidence id")
    for key, what in (("GOALS_A", "goal of A"), ("GOALS_B", "goal of B"), ("B_COMMITS", "commitment"),
                      ("B_ADOPTS", "adopted goal")):
        _unique([(g.name, g.loc) for g in sections.get(key, [])], what)

    scenario = Scenario(
        vars=tuple(variables),
        actions=tuple(actions),
        horizon=horizon,
        observable=tuple(name for name, _ in observable),
        rules=tuple(rules),
        init=tuple(sections.get("INIT", [])),
        history=tuple(sections.get("HISTORY", [])),
        evidence=tuple(evidence),
        goals_a=tuple(sections.get("GOALS_A", [])),
        weights_a=tuple(sections.get("WEIGHTS_A", [])),
        goals_b=tuple(sections.get("GOALS_B", [])),
        weights_b=tuple(sections.get("WEIGHTS_B", [])),
        knows=tuple(knows),
        commits=tuple(sections.get("B_COMMITS", [])),
        adopts=tuple(sections.get("B_ADOPTS", [])),
        joint_weights=tuple(sections["JOINT_WEIGHTS"]) if "JOINT_WEIGHTS" in sections else None,
        horizon_loc=horizon_loc,
    )
    _check_references(scenario)
    return scenario


def parse(text: str) -> Scenario:
    """Parse scenario text; raises ParseError or DeclarationError with a location."""
    return _Parser(text).scenario()


def parse_formula(text: str) -> Formula:
    """Parse a single surface formula (no declarations are checked)."""
    parser = _Parser(text)
    while parser.peek().kind == "newline":
        parser.advance()
    f = parser.formula()
    parser.end_of_line()
    if parser.peek().kind != "eof":
        raise parser.error(f"unexpected {parser.peek().describe()} after formula")
    return f
