"""Decision procedures for the five clause-redundancy criteria.

All checks run over the live clauses of the formula and never treat the
candidate clause as part of it; callers add the clause only after a check
succeeds.  check_* functions return a bare bool; the _ex variants also
return a reason code used by the proof verifier for diagnostics.
"""

from __future__ import annotations

from typing import Mapping

from .core import (Clause, Formula, Propagator, SubstValue, clause_vars,
                   compose, is_tautological, negate_clause, restrict_clause,
                   restrict_live, satisfies_clause)

OK = "ok"
REASON_PIVOT_NOT_IN_CLAUSE = "pivot-not-in-clause"
REASON_WITNESS_UNSAT = "witness-does-not-satisfy-clause"
REASON_DOM_MISMATCH = "witness-domain-mismatch"
REASON_ENTAILMENT = "restriction-entailment-failed"
REASON_RESOLVENT = "resolvent-not-derivable"
REASON_MISSING_UNION = "clause-union-missing"


def _up_entails_all(base: list[Clause], targets: list[Clause], num_vars: int) -> tuple[bool, Clause | None]:
    """Does unit propagation derive every target clause from base?

    Membership is checked first (E in base is trivially derivable); only the
    leftovers pay for a propagation query.
    """
    base_set = set(base)
    if () in base_set:
        return True, None
    missing = [e for e in targets if e not in base_set]
    if not missing:
        return True, None
    prop = Propagator(base, num_vars=num_vars)
    for e in missing:
        if not prop.query([-lit for lit in e]):
            return False, e
    return True, None


def check_bc_ex(g: Formula, c: Clause, p: int) -> str:
    """Blocked clause: every resolvent of c on pivot p is tautological."""
    if p not in c:
        return REASON_PIVOT_NOT_IN_CLAUSE
    rest = set(c)
    rest.discard(p)
    for d in g.live():
        if -p not in d:
            continue
        if not any(-l in rest for l in d if l != -p):
            return REASON_RESOLVENT
    return OK


def check_bc(g: Formula, c: Clause, p: int) -> bool:
    return check_bc_ex(g, c, p) == OK


def check_rat_ex(g: Formula, c: Clause, p: int) -> str:
    """Resolution asymmetric tautology: every resolvent on p is tautological
    or derivable from g by unit propagation (the RUP check keeps the full
    clause including p)."""
    if p not in c:
        return REASON_PIVOT_NOT_IN_CLAUSE
    rest = [l for l in c if l != p]
    rest_set = set(rest)
    prop: Propagator | None = None
    neg_c = [-l for l in c]
    for d in g.live():
        if -p not in d:
            continue
        dprime = [l for l in d if l != -p]
        if any(-l in rest_set for l in dprime):
            continue
        if prop is None:
            prop = Propagator(g.live(), num_vars=g.num_vars)
        assumptions = neg_c + [-l for l in dprime if l not in rest_set]
        if not prop.query(assumptions):
            return REASON_RESOLVENT
    return OK


def check_rat(g: Formula, c: Clause, p: int) -> bool:
    return check_rat_ex(g, c, p) == OK


def check_rat_lpr(g: Formula, c: Clause, p: int) -> bool:
    """RAT in its witness form: tau = alpha except flipped at p."""
    if p not in c:
        return False
    alpha = negate_clause(c)
    tau = dict(alpha)
    tau[abs(p)] = p > 0
    ok, _ = _up_entails_all(restrict_live(g, alpha), restrict_live(g, tau), g.num_vars)
    return ok


def check_spr_ex(g: Formula, c: Clause, t: Mapping[int, bool]) -> str:
    """Subset propagation redundancy: dom(tau) = vars(c), tau satisfies c,
    and Gamma|alpha unit-propagates every clause of Gamma|tau."""
    if set(t) != clause_vars(c):
        return REASON_DOM_MISMATCH
    return check_pr_ex(g, c, t)


def check_spr(g: Formula, c: Clause, t: Mapping[int, bool]) -> bool:
    return check_spr_ex(g, c, t) == OK


def check_pr_ex(g: Formula, c: Clause, t: Mapping[int, bool]) -> str:
    if not satisfies_clause(t, c):
        return REASON_WITNESS_UNSAT
    alpha = negate_clause(c)
    ok, _ = _up_entails_all(restrict_live(g, alpha), restrict_live(g, t), g.num_vars)
    return OK if ok else REASON_ENTAILMENT


def check_pr(g: Formula, c: Clause, t: Mapping[int, bool]) -> bool:
    return check_pr_ex(g, c, t) == OK


def check_sr_ex(g: Formula, c: Clause, t: Mapping[int, SubstValue]) -> str:
    """Substitution redundancy; tautological images count as satisfied."""
    if not satisfies_clause(t, c):
        return REASON_WITNESS_UNSAT
    alpha = negate_clause(c)
    ok, _ = _up_entails_all(restrict_live(g, alpha), restrict_live(g, t), g.num_vars)
    return OK if ok else REASON_ENTAILMENT


def check_sr(g: Formula, c: Clause, t: Mapping[int, SubstValue]) -> bool:
    return check_sr_ex(g, c, t) == OK


def check_pr0(g: Formula, c: Clause, t: Mapping[int, bool]) -> bool:
    """PR normal form: tau satisfies c, covers vars(c), and C v Gamma|tau is
    literally contained in Gamma (tautological unions are skipped, since
    C v D is only defined when it is a clause)."""
    if not satisfies_clause(t, c):
        return False
    if not clause_vars(c) <= set(t):
        return False
    cset = set(c)
    for d in g.live():
        r = restrict_clause(d, t)
        if r is None:
            continue
        union = cset.union(r)
        if is_tautological(union):
            continue
        if not g.has_live(tuple(sorted(union, key=abs))):
            return False
    return True


def discrepancy(c: Clause, t: Mapping[int, bool]) -> int:
    """Number of variables assigned by the witness beyond vars(c)."""
    return len(set(t) - clause_vars(c))


def normalize_pr_witness(c: Clause, t: Mapping[int, bool]) -> dict[int, bool]:
    """Extend a PR witness to cover vars(c): returns (not-c) composed with t.

    Keeps PR acceptance (Gamma|alpha |-1 Gamma|alpha.tau holds whenever the
    original witness was accepted) and still satisfies c.
    """
    if not satisfies_clause(t, c):
        raise ValueError("witness does not satisfy the clause")
    return compose(negate_clause(c), t)
