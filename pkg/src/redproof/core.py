"""Clause, assignment and substitution algebra plus unit propagation.

Literals are nonzero signed integers: variable = abs(lit), polarity = sign.
A clause is a canonically sorted tuple of literals with no duplicates and
no complementary pair (tautologies are rejected at construction).  Partial
assignments map variables to bools; substitutions map variables to bools
or to literals.  Restriction of a clause by a substitution drops falsified
literals; a clause whose image contains True or a complementary pair of
literals counts as satisfied and is dropped from formula restrictions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

Clause = tuple[int, ...]
# Substitution values: True/False constants or a literal (int).  Plain
# assignments use the bool-only subset.  bool must be tested before int.
SubstValue = "bool | int"

EMPTY_CLAUSE: Clause = ()


class TautologyError(ValueError):
    """Raised when literals containing a complementary pair are made into a clause."""


def neg(lit: int) -> int:
    return -lit


def var_of(lit: int) -> int:
    return lit if lit > 0 else -lit


def mk_clause(lits: Iterable[int]) -> Clause:
    """Canonicalize literals into a clause tuple (sorted by variable).

    Duplicates collapse; a complementary pair raises TautologyError; literal
    0 is invalid.
    """
    seen = set(lits)
    if 0 in seen:
        raise ValueError("literal 0 is not a valid literal")
    for lit in seen:
        if -lit in seen:
            raise TautologyError(f"tautological literal pair {lit}/{-lit}")
    return tuple(sorted(seen, key=abs))


def is_tautological(lits: Iterable[int]) -> bool:
    seen = set(lits)
    return any(-lit in seen for lit in seen)


def clause_vars(c: Iterable[int]) -> set[int]:
    return {abs(lit) for lit in c}


def negate_clause(c: Clause) -> dict[int, bool]:
    """The assignment falsifying every literal of c (alpha = not-C)."""
    return {abs(lit): lit < 0 for lit in c}


def clause_of_assignment(a: Mapping[int, bool]) -> Clause:
    """The clause asserting that assignment a does not hold (inverse of negate_clause)."""
    return mk_clause(v if not val else -v for v, val in a.items())


def assignment_as_literals(a: Mapping[int, bool]) -> list[int]:
    """The unit-clause view of an assignment, in variable order."""
    return [v if val else -v for v, val in sorted(a.items())]


def subst_lit(s: Mapping[int, SubstValue], lit: int) -> bool | int:
    """Apply a substitution to a literal, yielding a literal or a constant."""
    v = lit if lit > 0 else -lit
    val = s.get(v)
    if val is None:
        return lit
    if isinstance(val, bool):
        return val if lit > 0 else not val
    return val if lit > 0 else -val


def satisfies_clause(s: Mapping[int, SubstValue], c: Clause) -> bool:
    """sigma satisfies C iff True is in sigma(C) or sigma(C) is tautological."""
    return restrict_clause(c, s) is None


def restrict_clause(c: Clause, s: Mapping[int, SubstValue]) -> Clause | None:
    """C restricted by s: None if satisfied, else sigma(C) minus falsified literals."""
    image = []
    for lit in c:
        m = subst_lit(s, lit)
        if m is True:
            return None
        if m is not False:
            image.append(m)
    seen = set(image)
    if len(seen) != len(image):
        image = list(seen)
    for lit in seen:
        if -lit in seen:
            return None
    return tuple(sorted(image, key=abs))


def compose(t: Mapping[int, SubstValue], p: Mapping[int, SubstValue]) -> dict[int, SubstValue]:
    """Composition (t o p)(x) = t(p(x)); identity entries are dropped.

    For partial assignments this means: p's value where p is defined, else t's.
    """
    out: dict[int, SubstValue] = {}
    for v, val in p.items():
        if isinstance(val, bool):
            mapped: bool | int = val
        else:
            mapped = subst_lit(t, val)
        if isinstance(mapped, bool) or mapped != v:
            out[v] = mapped
    for v, val in t.items():
        if v not in p:
            out[v] = val
    return out


class Formula:
    """An ordered multiset of clauses with live/deleted flags.

    Deleted clauses remain in the sequence (needed to audit deletion steps);
    every check runs over the live subset.  The variable universe num_vars is
    the max variable seen and never shrinks.
    """

    __slots__ = ("clauses", "alive", "num_vars", "_index", "_n_live")

    def __init__(self, clauses: Iterable[Iterable[int]] = (), num_vars: int | None = None):
        self.clauses: list[Clause] = []
        self.alive: list[bool] = []
        self._index: dict[Clause, list[int]] = {}
        self._n_live = 0
        self.num_vars = 0
        for c in clauses:
            self.add_clause(c)
        if num_vars is not None:
            self.num_vars = max(self.num_vars, num_vars)

    def add_clause(self, lits: Iterable[int]) -> Clause:
        """Append a live clause.  Non-tuple input is canonicalized; tuples are
        trusted to already be canonical (as produced by mk_clause)."""
        c = lits if isinstance(lits, tuple) else mk_clause(lits)
        idx = len(self.clauses)
        self.clauses.append(c)
        self.alive.append(True)
        self._index.setdefault(c, []).append(idx)
        self._n_live += 1
        if c:
            top = abs(c[-1])
            if top > self.num_vars:
                self.num_vars = top
        return c

    def delete_clause(self, lits: Iterable[int]) -> int | None:
        """Delete the most recently added live clause with this value.

        Returns the internal index, or None if no live instance exists.
        """
        c = lits if isinstance(lits, tuple) else mk_clause(lits)
        stack = self._index.get(c)
        if not stack:
            return None
        while stack:
            idx = stack[-1]
            if self.alive[idx]:
                stack.pop()
                self.alive[idx] = False
                self._n_live -= 1
                return idx
            stack.pop()
        return None

    def has_live(self, c: Clause) -> bool:
        stack = self._index.get(c)
        return bool(stack) and any(self.alive[i] for i in stack)

    def live(self) -> Iterator[Clause]:
        alive = self.alive
        for i, c in enumerate(self.clauses):
            if alive[i]:
                yield c

    def live_list(self) -> list[Clause]:
        return list(self.live())

    def canonical_set(self) -> frozenset[Clause]:
        """Live clauses as a set (deduplicated), for formula comparison."""
        return frozenset(self.live())

    def occurring_vars(self) -> set[int]:
        out: set[int] = set()
        for c in self.live():
            out.update(abs(lit) for lit in c)
        return out

    @property
    def n_live(self) -> int:
        return self._n_live

    def copy(self) -> "Formula":
        g = Formula.__new__(Formula)
        g.clauses = list(self.clauses)
        g.alive = list(self.alive)
        g._index = {c: list(st) for c, st in self._index.items()}
        g._n_live = self._n_live
        g.num_vars = self.num_vars
        return g

    def __repr__(self) -> str:
        return f"Formula({self._n_live} live / {len(self.clauses)} total, num_vars={self.num_vars})"


def restrict_live(g: Formula, s: Mapping[int, SubstValue]) -> list[Clause]:
    """Restrictions of the live clauses of g, in order, duplicates kept."""
    out = []
    for c in g.live():
        r = restrict_clause(c, s)
        if r is not None:
            out.append(r)
    return out


def restrict_formula(g: Formula, s: Mapping[int, SubstValue]) -> Formula:
    """Gamma restricted by s: satisfied clauses dropped, others restricted."""
    out = Formula.__new__(Formula)
    out.clauses = restrict_live(g, s)
    out.alive = [True] * len(out.clauses)
    out._index = {}
    for i, c in enumerate(out.clauses):
        out._index.setdefault(c, []).append(i)
    out._n_live = len(out.clauses)
    out.num_vars = g.num_vars
    return out


def satisfies_formula(s: Mapping[int, SubstValue], g: Formula) -> bool:
    return all(satisfies_clause(s, c) for c in g.live())


# ---------------------------------------------------------------------------
# Unit propagation
# ---------------------------------------------------------------------------

@dataclass
class UpTrace:
    """Derivations made by one unit-propagation run.

    units: (literal, antecedent) pairs in derivation order; the antecedent is
    an index into the clause list the propagator was built from, or None for
    an assumption literal.  conflict is the index of the fully falsified
    clause, or None when propagation reached a fixpoint.
    """

    units: list[tuple[int, int | None]] = field(default_factory=list)
    conflict: int | None = None

    @property
    def status(self) -> str:
        return "fixpoint" if self.conflict is None else "conflict"

    def derived_literals(self) -> list[int]:
        return [lit for lit, reason in self.units if reason is not None]


_TRUE, _FALSE = 1, 2


class Propagator:
    """Two-watched-literal unit propagation over a growable clause list.

    Supports incremental clause addition/deletion and assumption-based
    queries with trail rollback.  The propagation closure of the clause set
    alone (the root level) is kept persistently, so repeated queries only
    pay for their own assumptions.  Clauses must be added or deleted only
    between queries (the trail sits at root level then).
    """

    def __init__(self, clauses: Iterable[Clause] = (), num_vars: int = 0):
        self.clauses: list[Clause] = []
        self.alive: list[bool] = []
        self.wpair: list[list[int]] = []           # the two watched literals per clause
        self.watches: dict[int, list[int]] = {}    # literal -> clause ids watching it
        self.val: list[int] = [0] * (num_vars + 1)
        self.trail: list[int] = []
        self.reasons: list[int | None] = []
        self.root_conflict: int | None = None
        self._dirty = False
        self._root_reason_ids: set[int] = set()
        for c in clauses:
            self.add_clause(c)

    def _ensure_var(self, v: int) -> None:
        if v >= len(self.val):
            self.val.extend([0] * (v + 1 - len(self.val)))

    def _value(self, lit: int) -> int:
        v = self.val[lit if lit > 0 else -lit]
        if v == 0 or lit > 0:
            return v
        return _TRUE if v == _FALSE else _FALSE

    def add_clause(self, c: Clause) -> int:
        idx = len(self.clauses)
        self.clauses.append(c)
        self.alive.append(True)
        self.wpair.append([0, 0])
        if c:
            self._ensure_var(abs(c[-1]))
        if self._dirty or self.root_conflict is not None:
            self._dirty = True
            return idx
        nonfalse = [lit for lit in c if self._value(lit) != _FALSE]
        if not nonfalse:
            self.root_conflict = idx
            return idx
        w1 = nonfalse[0]
        w2 = nonfalse[1] if len(nonfalse) > 1 else next((l for l in c if l != w1), 0)
        self.wpair[idx] = [w1, w2]
        self.watches.setdefault(w1, []).append(idx)
        if w2:
            self.watches.setdefault(w2, []).append(idx)
        if len(nonfalse) == 1 and self._value(w1) == 0:
            self._assign(w1, idx)
            conflict = self._propagate(len(self.trail) - 1)
            if conflict is not None:
                self.root_conflict = conflict
            else:
                self._root_reason_ids = {r for r in self.reasons if r is not None}
        return idx

    def delete_clause(self, idx: int) -> None:
        self.alive[idx] = False
        if idx == self.root_conflict or idx in self._root_reason_ids:
            self._dirty = True

    def _assign(self, lit: int, reason: int | None) -> None:
        self.val[lit if lit > 0 else -lit] = _TRUE if lit > 0 else _FALSE
        self.trail.append(lit)
        self.reasons.append(reason)

    def _rebuild_root(self) -> None:
        self.val = [0] * len(self.val)
        self.trail = []
        self.reasons = []
        self.root_conflict = None
        self._root_reason_ids = set()
        self.watches = {}
        self._dirty = False
        units = []
        for idx, c in enumerate(self.clauses):
            if not self.alive[idx]:
                continue
            if not c:
                self.root_conflict = idx
                return
            w1 = c[0]
            w2 = c[1] if len(c) > 1 else 0
            self.wpair[idx] = [w1, w2]
            self.watches.setdefault(w1, []).append(idx)
            if w2:
                self.watches.setdefault(w2, []).append(idx)
            if len(c) == 1:
                units.append(idx)
        for idx in units:
            if not self.alive[idx]:
                continue
            lit = self.clauses[idx][0]
            v = self._value(lit)
            if v == _FALSE:
                self.root_conflict = idx
                return
            if v == 0:
                self._assign(lit, idx)
                conflict = self._propagate(len(self.trail) - 1)
                if conflict is not None:
                    self.root_conflict = conflict
                    return
        self._root_reason_ids = {r for r in self.reasons if r is not None}

    def _propagate(self, qhead: int) -> int | None:
        """Propagate from trail position qhead; returns the conflict clause id or None."""
        clauses = self.clauses
        alive = self.alive
        watches = self.watches
        wpair = self.wpair
        val = self.val
        trail = self.trail
        reasons = self.reasons
        while qhead < len(trail):
            lit = trail[qhead]
            qhead += 1
            flit = -lit
            watchlist = watches.get(flit)
            if not watchlist:
                continue
            write = 0
            read = 0
            n = len(watchlist)
            conflict = None
            while read < n:
                cid = watchlist[read]
                read += 1
                if not alive[cid]:
                    continue
                pair = wpair[cid]
                other = pair[1] if pair[0] == flit else pair[0]
                if other:
                    ov = val[other if other > 0 else -other]
                    if ov and (ov == _TRUE) == (other > 0):
                        watchlist[write] = cid
                        write += 1
                        continue
                # look for a replacement watch
                moved = False
                for cand in clauses[cid]:
                    if cand == flit or cand == other:
                        continue
                    cv = val[cand if cand > 0 else -cand]
                    if cv == 0 or (cv == _TRUE) == (cand > 0):
                        if pair[0] == flit:
                            pair[0] = cand
                        else:
                            pair[1] = cand
                        watches.setdefault(cand, []).append(cid)
                        moved = True
                        break
                if moved:
                    continue
                watchlist[write] = cid
                write += 1
                if not other:
                    conflict = cid
                    break
                ov = val[other if other > 0 else -other]
                if ov == 0:
                    val[other if other > 0 else -other] = _TRUE if other > 0 else _FALSE
                    trail.append(other)
                    reasons.append(cid)
                else:
                    conflict = cid
                    break
            if conflict is not None:
                while read < n:
                    watchlist[write] = watchlist[read]
                    write += 1
                    read += 1
                del watchlist[write:]
                return conflict
            del watchlist[write:]
        return None

    def query(self, assumptions: Iterable[int], want_trace: bool = False):
        """Propagate under extra assumption literals; roll the trail back after.

        Returns bool (conflict reached?) or, with want_trace, a UpTrace whose
        antecedent indices refer to this propagator's clause list.
        """
        if self._dirty:
            self._rebuild_root()
        if self.root_conflict is not None:
            if want_trace:
                return UpTrace(units=list(zip(self.trail, self.reasons)),
                               conflict=self.root_conflict)
            return True
        mark = len(self.trail)
        conflict_idx: int | None = None
        for lit in assumptions:
            v = lit if lit > 0 else -lit
            self._ensure_var(v)
            cur = self.val[v]
            if cur == 0:
                self._assign(lit, None)
            elif (cur == _TRUE) != (lit > 0):
                pos = self.trail.index(-lit)
                conflict_idx = self.reasons[pos] if self.reasons[pos] is not None else -1
                break
        if conflict_idx is None and len(self.trail) > mark:
            conflict_idx = self._propagate(mark)
        if want_trace:
            # the full trail: root-level derivations first, then this query's
            out: bool | UpTrace = UpTrace(
                units=list(zip(self.trail, self.reasons)),
                conflict=conflict_idx)
        else:
            out = conflict_idx is not None
        val = self.val
        for lit in self.trail[mark:]:
            val[lit if lit > 0 else -lit] = 0
        del self.trail[mark:]
        del self.reasons[mark:]
        return out


def unit_propagate(g: Formula) -> UpTrace:
    """Run unit propagation on g to conflict or fixpoint.

    Antecedent indices refer to positions in the live clause listing of g.
    """
    prop = Propagator(g.live(), num_vars=g.num_vars)
    return prop.query((), want_trace=True)


def derives_1(g: Formula, c: Clause) -> bool:
    """Gamma |-1 C: unit propagation on Gamma plus the negation of C conflicts."""
    prop = Propagator(g.live(), num_vars=g.num_vars)
    return bool(prop.query([-lit for lit in c]))


def derives_1_trace(g: Formula, c: Clause) -> UpTrace:
    prop = Propagator(g.live(), num_vars=g.num_vars)
    return prop.query([-lit for lit in c], want_trace=True)


# ---------------------------------------------------------------------------
# Resolution
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ResolutionStep:
    left: Clause    # contains pivot
    right: Clause   # contains -pivot
    pivot: int
    resolvent: Clause


def resolve(c1: Clause, c2: Clause, pivot: int) -> Clause:
    """Resolvent of c1 (containing pivot) and c2 (containing -pivot)."""
    if pivot not in c1 or -pivot not in c2:
        raise ValueError("pivot literals not present in premises")
    return mk_clause([l for l in c1 if l != pivot] + [l for l in c2 if l != -pivot])


def validate_resolution(g: Formula, steps: list[ResolutionStep], target: Clause | None = None) -> bool:
    """Check a resolution derivation: premises available, resolvents correct."""
    available = set(g.live())
    for st in steps:
        if st.left not in available or st.right not in available:
            return False
        try:
            r = resolve(st.left, st.right, st.pivot)
        except (ValueError, TautologyError):
            return False
        if r != st.resolvent:
            return False
        available.add(st.resolvent)
    if target is not None:
        if steps:
            return set(steps[-1].resolvent) <= set(target)
        return any(set(c) <= set(target) for c in g.live())
    return True


def rup_to_resolution(g: Formula, c: Clause, trace: UpTrace | None = None) -> list[ResolutionStep]:
    """Turn a unit-propagation refutation of Gamma + not-C into a resolution derivation.

    Returns steps deriving some C' subset of C from the live clauses of g (an
    empty list when such a subclause is already present).  Raises ValueError
    when the trace does not end in conflict.
    """
    live = g.live_list()
    if trace is None:
        prop = Propagator(live, num_vars=g.num_vars)
        trace = prop.query([-lit for lit in c], want_trace=True)
    if trace.conflict is None:
        raise ValueError("unit propagation did not reach a conflict")
    if trace.conflict == -1:
        raise ValueError("conflicting assumption literals")
    reason_of: dict[int, int | None] = {}
    order: dict[int, int] = {}
    for pos, (lit, reason) in enumerate(trace.units):
        reason_of[lit] = reason
        order[lit] = pos
    current = live[trace.conflict]
    steps: list[ResolutionStep] = []
    while True:
        candidates = [l for l in current if reason_of.get(-l) is not None]
        if not candidates:
            break
        lit = max(candidates, key=lambda l: order[-l])
        ante = live[reason_of[-lit]]
        resolvent = resolve(ante, current, -lit)
        steps.append(ResolutionStep(ante, current, -lit, resolvent))
        current = resolvent
        if not current:
            break
    if not set(current) <= set(c):
        raise ValueError("reverse resolution did not reach a subclause of c")
    return steps
