"""Brute-force semantic oracles for small formulas.

Truth tables are packed into Python ints (bit i = assignment i, where bit j
of i gives the value of the j-th variable), so formulas up to ~20 variables
are checked with a handful of bigint operations.  Also provides a
Davis-Putnam based resolution refutation extractor used as the independent
"some resolution proof exists" oracle in tests and the ER pipeline.
"""

from __future__ import annotations

from .core import (Clause, Formula, ResolutionStep, is_tautological, mk_clause,
                   resolve)

MAX_ORACLE_VARS = 20


def _var_order(g: Formula, extra: Clause = ()) -> list[int]:
    vs = g.occurring_vars()
    vs.update(abs(l) for l in extra)
    return sorted(vs)


def _check_size(n: int) -> None:
    if n > MAX_ORACLE_VARS:
        raise ValueError(f"oracle limited to {MAX_ORACLE_VARS} variables, got {n}")


def _truth_mask(clauses, order: list[int]) -> int:
    """Bitmask of assignments satisfying all clauses (1 bit per assignment)."""
    n = len(order)
    _check_size(n)
    pos = {v: i for i, v in enumerate(order)}
    size = 1 << n
    full = (1 << size) - 1
    # var_mask[i]: bit pattern where variable i is true
    var_mask = []
    for i in range(n):
        block = (1 << (1 << i)) - 1
        period = 1 << (i + 1)
        m = 0
        for start in range(1 << i, size, period):
            m |= block << start
        var_mask.append(m)
    acc = full
    for c in clauses:
        cm = 0
        for lit in c:
            vm = var_mask[pos[abs(lit)]]
            cm |= vm if lit > 0 else (full & ~vm)
        acc &= cm
        if not acc:
            return 0
    return acc


def satisfiable(g: Formula) -> bool:
    return _truth_mask(g.live(), _var_order(g)) != 0


def equisatisfiable(g1: Formula, g2: Formula) -> bool:
    return satisfiable(g1) == satisfiable(g2)


def implies(g: Formula, c: Clause) -> bool:
    """Gamma |= C by truth table: every model of Gamma satisfies C."""
    order = _var_order(g, c)
    models = _truth_mask(g.live(), order)
    sat_c = _truth_mask([c], order)
    return models & ~sat_c == 0


def count_models(g: Formula) -> int:
    return _truth_mask(g.live(), _var_order(g)).bit_count()


def resolution_refutation(g: Formula) -> list[ResolutionStep]:
    """A resolution refutation of g by Davis-Putnam variable elimination.

    Returns resolution steps ending in the empty clause; raises ValueError if
    g is satisfiable.  Intended for small formulas only.
    """
    parents: dict[Clause, tuple[Clause, Clause, int] | None] = {}
    for c in g.live():
        parents.setdefault(c, None)
    if () in parents:
        return []
    current = set(parents)
    for v in sorted({abs(l) for c in current for l in c}):
        pos = [c for c in current if v in c]
        neg_ = [c for c in current if -v in c]
        rest = [c for c in current if v not in c and -v not in c]
        new = set(rest)
        for cp in pos:
            for cn in neg_:
                lits = [l for l in cp if l != v] + [l for l in cn if l != -v]
                if is_tautological(lits):
                    continue
                r = mk_clause(lits)
                if r not in parents:
                    parents[r] = (cp, cn, v)
                new.add(r)
        current = new
        if () in current:
            break
    if () not in current:
        raise ValueError("formula is satisfiable; no resolution refutation exists")
    # extract the derivation tree below the empty clause, in dependency order
    steps: list[ResolutionStep] = []
    emitted: set[Clause] = set()

    def emit(c: Clause) -> None:
        if c in emitted or parents.get(c) is None:
            return
        cp, cn, v = parents[c]
        emit(cp)
        emit(cn)
        emitted.add(c)
        steps.append(ResolutionStep(cp, cn, v, resolve(cp, cn, v)))

    import sys
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 100000))
    try:
        emit(())
    finally:
        sys.setrecursionlimit(old)
    return steps
