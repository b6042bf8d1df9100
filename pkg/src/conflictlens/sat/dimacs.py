"""DIMACS CNF reader/writer."""

from __future__ import annotations

from pathlib import Path
from typing import List, Union

from ..errors import InputError
from .cnf import CnfFormula


def read_dimacs(text: str) -> CnfFormula:
    """Parse ``p cnf <vars> <clauses>`` text; clauses may span lines."""
    num_vars = None
    declared = 0
    clauses: List[List[int]] = []
    current: List[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if num_vars is not None:
                raise InputError(f"line {lineno}: duplicate problem line")
            if len(parts) != 4 or parts[1] != "cnf":
                raise InputError(f"line {lineno}: invalid problem line {line!r}")
            try:
                num_vars, declared = int(parts[2]), int(parts[3])
            except ValueError as e:
                raise InputError(f"line {lineno}: {e}") from e
            continue
        if num_vars is None:
            raise InputError(f"line {lineno}: clause before problem line")
        for token in line.split():
            try:
                lit = int(token)
            except ValueError as e:
                raise InputError(f"line {lineno}: bad literal {token!r}") from e
            if lit == 0:
                clauses.append(current)
                current = []
            else:
                current.append(lit)
    if num_vars is None:
        raise InputError("missing 'p cnf' problem line")
    if current:
        raise InputError("last clause is not terminated by 0")
    if len(clauses) != declared:
        raise InputError(f"header declares {declared} clauses, found {len(clauses)}")
    return CnfFormula(num_vars, tuple(tuple(c) for c in clauses))


def write_dimacs(cnf: CnfFormula) -> str:
    lines = [f"p cnf {cnf.num_vars} {len(cnf.clauses)}"]
    lines.extend(" ".join(str(lit) for lit in clause + (0,)) for clause in cnf.clauses)
    return "\n".join(lines) + "\n"


def load_dimacs(path: Union[str, Path]) -> CnfFormula:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror or e}") from e
    return read_dimacs(text)
