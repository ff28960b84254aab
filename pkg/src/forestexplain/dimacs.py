"""Reading and writing CNF formulas in DIMACS format.

An empty clause is legal on both sides: it serializes as a bare ``0`` line
and parses back to an empty literal list (used to mark formulas that are
unsatisfiable by construction, e.g. when no counterexample class exists).
"""

from __future__ import annotations

from typing import Iterable, Sequence


class DimacsError(ValueError):
    pass


def write_dimacs(nvars: int, clauses: Sequence[Sequence[int]], comments: Iterable[str] = ()) -> str:
    lines = []
    for c in comments:
        for part in str(c).splitlines() or [""]:
            lines.append(f"c {part}".rstrip())
    lines.append(f"p cnf {nvars} {len(clauses)}")
    for clause in clauses:
        lines.append(" ".join(str(l) for l in clause) + (" 0" if clause else "0"))
    return "\n".join(lines) + "\n"


def parse_dimacs(text: str) -> tuple[int, list[list[int]]]:
    nvars = None
    nclauses = None
    clauses: list[list[int]] = []
    current: list[int] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            if nvars is not None:
                raise DimacsError("duplicate problem line")
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimacsError(f"bad problem line: {line!r}")
            try:
                nvars = int(parts[2])
                nclauses = int(parts[3])
            except ValueError:
                raise DimacsError(f"bad problem line: {line!r}") from None
            if nvars < 0 or nclauses < 0:
                raise DimacsError(f"bad problem line: {line!r}")
            continue
        if nvars is None:
            raise DimacsError("clause before problem line")
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise DimacsError(f"bad literal: {tok!r}") from None
            if lit == 0:
                clauses.append(current)
                current = []
            else:
                if abs(lit) > nvars:
                    raise DimacsError(f"literal {lit} exceeds declared variable count {nvars}")
                current.append(lit)
    if current:
        raise DimacsError("unterminated clause at end of file")
    if nvars is None:
        raise DimacsError("missing problem line")
    if nclauses is not None and len(clauses) != nclauses:
        raise DimacsError(f"declared {nclauses} clauses, found {len(clauses)}")
    return nvars, clauses
