"""CNF formulas: DIMACS parsing, desk-scale brute-force solving.

Clauses are tuples of nonzero literals (positive = variable true).  A
clause may not mention a variable twice: duplicate literals are dropped at
parse time and complementary ones are rejected, because the downstream
weight schemes assume one occurrence per variable per clause.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

BRUTE_FORCE_LIMIT = 24


class CnfError(ValueError):
    pass


@dataclass(frozen=True)
class CnfInstance:
    n: int
    clauses: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.n < 1:
            raise CnfError("need at least one variable")
        if not self.clauses:
            raise CnfError("need at least one clause")
        for c in self.clauses:
            if not c:
                raise CnfError("empty clause")
            for lit in c:
                if lit == 0 or abs(lit) > self.n:
                    raise CnfError(f"literal {lit} out of range")
            vs = [abs(l) for l in c]
            if len(set(vs)) != len(vs):
                raise CnfError(f"clause {c} mentions a variable twice")

    @property
    def m(self) -> int:
        return len(self.clauses)

    def positive_occurrences(self, i: int) -> int:
        return sum(1 for c in self.clauses if i in c)

    def negative_occurrences(self, i: int) -> int:
        return sum(1 for c in self.clauses if -i in c)


# Assignment: tuple of n booleans, index i-1 holds variable i.
Assignment = tuple[bool, ...]


def make_clause(lits: tuple[int, ...]) -> tuple[int, ...]:
    seen: dict[int, int] = {}
    for lit in lits:
        v = abs(lit)
        if v in seen and seen[v] != lit:
            raise CnfError(f"clause contains both {v} and -{v}")
        seen[v] = lit
    return tuple(dict.fromkeys(lits))


def parse_dimacs(text: str) -> CnfInstance:
    n = None
    m_declared = None
    clauses: list[tuple[int, ...]] = []
    pending: list[int] = []
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise CnfError(f"line {no}: malformed problem line")
            n, m_declared = int(parts[2]), int(parts[3])
            continue
        if n is None:
            raise CnfError(f"line {no}: clause before problem line")
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                clauses.append(make_clause(tuple(pending)))
                pending = []
            else:
                if abs(lit) > n:
                    raise CnfError(f"line {no}: literal {lit} exceeds {n} variables")
                pending.append(lit)
    if pending:
        raise CnfError("last clause not terminated by 0")
    if n is None:
        raise CnfError("missing problem line")
    if m_declared is not None and m_declared != len(clauses):
        raise CnfError(f"header declares {m_declared} clauses, found {len(clauses)}")
    return CnfInstance(n, tuple(clauses))


def to_dimacs(inst: CnfInstance) -> str:
    lines = [f"p cnf {inst.n} {inst.m}"]
    for c in inst.clauses:
        lines.append(" ".join(str(l) for l in c) + " 0")
    return "\n".join(lines) + "\n"


def evaluate(inst: CnfInstance, a: Assignment) -> bool:
    if len(a) != inst.n:
        raise CnfError("assignment is not total")
    return all(any((lit > 0) == a[abs(lit) - 1] for lit in c) for c in inst.clauses)


def solve_brute_force(inst: CnfInstance) -> Optional[Assignment]:
    """Lexicographically smallest satisfying assignment (False < True),
    or None when unsatisfiable.  Guarded at 24 variables.
    """
    if inst.n > BRUTE_FORCE_LIMIT:
        raise CnfError(
            f"{inst.n} variables exceed the brute-force guard "
            f"({BRUTE_FORCE_LIMIT}); supply an assignment instead"
        )
    for bits in range(1 << inst.n):
        a = tuple(bool((bits >> k) & 1) for k in reversed(range(inst.n)))
        if evaluate(inst, a):
            return a
    return None


def satisfying_variable(inst: CnfInstance, a: Assignment, j: int) -> int:
    """Smallest variable index whose literal in clause j is true under a.

    Clause indices are 1-based, matching the construction's numbering.
    """
    clause = inst.clauses[j - 1]
    best = None
    for lit in clause:
        if (lit > 0) == a[abs(lit) - 1]:
            if best is None or abs(lit) < best:
                best = abs(lit)
    if best is None:
        raise CnfError(f"clause {j} is not satisfied by the assignment")
    return best


def parse_assignment(text: str, n: int) -> Assignment:
    """Assignment from a list of signed literals, e.g. '1 -2 3'."""
    vals: dict[int, bool] = {}
    for tok in text.split():
        lit = int(tok)
        v = abs(lit)
        if lit == 0 or v > n:
            raise CnfError(f"literal {lit} out of range")
        if v in vals and vals[v] != (lit > 0):
            raise CnfError(f"contradictory assignment for variable {v}")
        vals[v] = lit > 0
    missing = [v for v in range(1, n + 1) if v not in vals]
    if missing:
        raise CnfError(f"assignment missing variables {missing}")
    return tuple(vals[v] for v in range(1, n + 1))
