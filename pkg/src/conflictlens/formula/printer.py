"""Surface syntax printer; the scenario parser reads this output back."""

from __future__ import annotations

from .syntax import (
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
)

_BINARY = {Implies: "->", And: "&", Or: "|", Iff: "<->", Until: "U", Since: "S"}
_PREFIX = {Next: "X", Prev: "P", Globally: "G", Finally: "F", Historically: "H"}


def to_text(f: Formula) -> str:
    if isinstance(f, Bottom):
        return "false"
    if isinstance(f, Top):
        return "true"
    if isinstance(f, Atom):
        return f.name if f.time_index is None else f"{f.name}@{f.time_index}"
    if isinstance(f, Compare):
        return f"{f.left} {f.op} {f.right}"
    if isinstance(f, Not):
        return "!" + to_text(f.body)
    if isinstance(f, BoundedGlobally):
        return f"G<={f.bound} {to_text(f.body)}"
    if isinstance(f, BoundedFinally):
        return f"F<={f.bound} {to_text(f.body)}"
    if isinstance(f, Believes):
        entities = sorted(f.entities)
        group = entities[0] if len(entities) == 1 else "{" + ",".join(entities) + "}"
        return f"{group}: {to_text(f.body)}"
    op = _PREFIX.get(type(f))
    if op is not None:
        return f"{op} {to_text(f.body)}"
    op = _BINARY.get(type(f))
    if op is not None:
        return f"({to_text(f.left)} {op} {to_text(f.right)})"
    raise TypeError(f"cannot print {type(f).__name__}")
