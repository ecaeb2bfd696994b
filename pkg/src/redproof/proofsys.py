"""Proof object model and the refutation verifier.

A proof is a sequence of steps over an initial formula: RUP additions,
witnessed additions (pivot literal, partial assignment, or substitution)
and deletions.  The verifier replays steps against the live clause set,
parameterized by rule level, deletion policy and new-variable policy, and
reports per-step diagnostics on failure.  Verification is fail-fast and
streaming: it accepts any iterable of steps and keeps memory proportional
to the live set.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .core import Clause, Formula, Propagator, clause_vars
from . import redundancy
from .redundancy import (OK, REASON_PIVOT_NOT_IN_CLAUSE, check_pr_ex,
                         check_sr_ex)

LEVELS = ("bc", "rat", "spr", "pr", "sr")
_RANK = {name: i for i, name in enumerate(LEVELS)}


# -- steps and witnesses -----------------------------------------------------

@dataclass(frozen=True)
class Pivot:
    lit: int


@dataclass(frozen=True, eq=False)
class Assignment:
    values: dict  # var -> bool

    def __eq__(self, other):
        return isinstance(other, Assignment) and self.values == other.values


@dataclass(frozen=True, eq=False)
class Subst:
    values: dict  # var -> bool | literal

    def __eq__(self, other):
        return isinstance(other, Subst) and self.values == other.values


Witness = "Pivot | Assignment | Subst"


@dataclass(frozen=True)
class AddRup:
    clause: Clause


@dataclass(frozen=True, eq=False)
class AddWitnessed:
    clause: Clause
    witness: object

    def __eq__(self, other):
        return (isinstance(other, AddWitnessed) and self.clause == other.clause
                and self.witness == other.witness)


@dataclass(frozen=True)
class Delete:
    clause: Clause


ProofStep = "AddRup | AddWitnessed | Delete"
Proof = "list[ProofStep]"


@dataclass(frozen=True)
class SystemSpec:
    """Rule level plus deletion / new-variable policy."""

    level: str
    allow_deletion: bool = True
    allow_new_variables: bool = True

    def __post_init__(self):
        if self.level not in LEVELS:
            raise ValueError(f"unknown level {self.level!r}; expected one of {LEVELS}")

    @property
    def rank(self) -> int:
        return _RANK[self.level]

    def __str__(self) -> str:
        tag = "D" if self.allow_deletion else ""
        minus = "" if self.allow_new_variables else "-"
        return f"{tag}{self.level.upper()}{minus}"


@dataclass
class VerifyReport:
    verdict: str                      # accepted | rejected | no-empty-clause
    failed_step: int | None = None
    reason: str | None = None
    steps_checked: int = 0
    rule_counts: dict = field(default_factory=dict)
    max_width: int = 0
    literal_volume: int = 0
    pigeon_profile: dict | None = None

    @property
    def accepted(self) -> bool:
        return self.verdict == "accepted"

    def summary(self) -> str:
        if self.verdict == "rejected":
            head = f"REJECTED at step {self.failed_step}: {self.reason}"
        elif self.verdict == "accepted":
            head = "ACCEPTED"
        else:
            head = "NOT A REFUTATION (no empty clause in final set)"
        rules = " ".join(f"{k}={v}" for k, v in sorted(self.rule_counts.items()))
        return (f"{head}\nsteps={self.steps_checked} {rules}\n"
                f"max_width={self.max_width} literal_volume={self.literal_volume}")


def _witness_vars(w) -> set[int]:
    if isinstance(w, Pivot):
        return {abs(w.lit)}
    out = set(w.values)
    if isinstance(w, Subst):
        for val in w.values.values():
            if not isinstance(val, bool):
                out.add(abs(val))
    return out


class Verifier:
    """Replays a proof over a live clause set with incremental propagation."""

    COMPACT_RATIO = 2
    COMPACT_MIN_DEAD = 4096

    def __init__(self, g0: Formula, spec: SystemSpec, pigeon_map: Mapping[int, int] | None = None):
        self.spec = spec
        self.g = g0.copy()
        self.initial_vars = self.g.occurring_vars()
        self.prop = Propagator(num_vars=self.g.num_vars)
        self.occ: dict[int, list[int]] = {}
        for idx, c in enumerate(self.g.clauses):
            self.prop.add_clause(c)
            if self.g.alive[idx]:
                self._index_occurrences(idx, c)
            else:
                self.prop.delete_clause(idx)
        self.pigeon_map = dict(pigeon_map) if pigeon_map is not None else None
        self.report = VerifyReport(verdict="no-empty-clause",
                                   pigeon_profile={} if pigeon_map is not None else None)
        self._dead = sum(1 for a in self.g.alive if not a)

    # -- bookkeeping ---------------------------------------------------------

    def _index_occurrences(self, idx: int, c: Clause) -> None:
        occ = self.occ
        for lit in c:
            occ.setdefault(lit, []).append(idx)

    def _live_occurrences(self, lit: int) -> list[int]:
        alive = self.g.alive
        ids = self.occ.get(lit)
        if not ids:
            return []
        out = [i for i in ids if alive[i]]
        if len(out) * 2 < len(ids):
            self.occ[lit] = out
        return out

    def _compact(self) -> None:
        live = self.g.live_list()
        g = Formula(num_vars=self.g.num_vars)
        for c in live:
            g.add_clause(c)
        self.g = g
        self.prop = Propagator(live, num_vars=g.num_vars)
        self.occ = {}
        for idx, c in enumerate(g.clauses):
            self._index_occurrences(idx, c)
        self._dead = 0

    def _add(self, c: Clause, rule: str) -> None:
        self.g.add_clause(c)
        idx = self.prop.add_clause(c)
        self._index_occurrences(idx, c)
        rep = self.report
        rep.rule_counts[rule] = rep.rule_counts.get(rule, 0) + 1
        if len(c) > rep.max_width:
            rep.max_width = len(c)
        rep.literal_volume += len(c)
        if self.pigeon_map is not None:
            pw = len({self.pigeon_map[abs(l)] for l in c if abs(l) in self.pigeon_map})
            rep.pigeon_profile[pw] = rep.pigeon_profile.get(pw, 0) + 1

    # -- step checks -----------------------------------------------------------

    def _rup_holds(self, c: Clause) -> bool:
        if self.g.has_live(c):
            return True
        return bool(self.prop.query([-l for l in c]))

    def _check_pivot(self, c: Clause, p: int) -> tuple[str | None, str]:
        """Returns (rule or None, reason).  BC first, then RAT (level
        permitting), then plain RUP as the interop fallback."""
        if p not in c:
            return None, REASON_PIVOT_NOT_IN_CLAUSE
        rest_set = {l for l in c if l != p}
        resolvable = []
        clauses = self.g.clauses
        blocked = True
        for idx in self._live_occurrences(-p):
            d = clauses[idx]
            dprime = [l for l in d if l != -p]
            if any(-l in rest_set for l in dprime):
                continue
            blocked = False
            resolvable.append(dprime)
        if blocked:
            return "bc", OK
        if self.spec.rank >= _RANK["rat"]:
            neg_c = [-l for l in c]
            rat_ok = True
            for dprime in resolvable:
                assumptions = neg_c + [-l for l in dprime if l not in rest_set]
                if not self.prop.query(assumptions):
                    rat_ok = False
                    break
            if rat_ok:
                return "rat", OK
        if self._rup_holds(c):
            return "rup", OK
        if self.spec.rank < _RANK["rat"]:
            return None, "not-blocked-and-not-rup"
        return None, "rat-check-failed"

    def step(self, i: int, st) -> bool:
        """Check one step; on failure fills the report and returns False."""
        rep = self.report
        rep.steps_checked = i + 1
        if isinstance(st, Delete):
            if not self.spec.allow_deletion:
                return self._fail(i, "deletion-not-allowed")
            idx = self.g.delete_clause(st.clause)
            if idx is None:
                return self._fail(i, "delete-of-missing-clause")
            self.prop.delete_clause(idx)
            rep.rule_counts["delete"] = rep.rule_counts.get("delete", 0) + 1
            self._dead += 1
            if (self._dead >= self.COMPACT_MIN_DEAD
                    and self._dead >= self.COMPACT_RATIO * self.g.n_live):
                self._compact()
            return True

        c = st.clause
        if not self.spec.allow_new_variables:
            new = clause_vars(c) - self.initial_vars
            if not new and isinstance(st, AddWitnessed):
                new = _witness_vars(st.witness) - self.initial_vars
            if new:
                return self._fail(i, f"new-variable:{min(new)}")

        if isinstance(st, AddRup):
            if not self._rup_holds(c):
                return self._fail(i, "rup-failed")
            self._add(c, "rup")
            return True

        w = st.witness
        if isinstance(w, Pivot):
            rule, reason = self._check_pivot(c, w.lit)
            if rule is None:
                return self._fail(i, reason)
            self._add(c, rule)
            return True
        if isinstance(w, Assignment):
            kind = "spr" if set(w.values) == clause_vars(c) else "pr"
            if self.spec.rank < _RANK[kind]:
                return self._fail(i, f"level-too-low:{kind}-witness")
            reason = check_pr_ex(self.g, c, w.values)
            if reason != OK:
                return self._fail(i, reason)
            self._add(c, kind)
            return True
        if isinstance(w, Subst):
            if self.spec.rank < _RANK["sr"]:
                return self._fail(i, "level-too-low:sr-witness")
            reason = check_sr_ex(self.g, c, w.values)
            if reason != OK:
                return self._fail(i, reason)
            self._add(c, "sr")
            return True
        return self._fail(i, f"unknown-step-kind:{type(st).__name__}")

    def _fail(self, i: int, reason: str) -> bool:
        self.report.verdict = "rejected"
        self.report.failed_step = i
        self.report.reason = reason
        return False

    def run(self, proof: Iterable) -> VerifyReport:
        for i, st in enumerate(proof):
            if not self.step(i, st):
                return self.report
        if self.g.has_live(()):
            self.report.verdict = "accepted"
        return self.report


def verify(g0: Formula, proof: Iterable, spec: SystemSpec,
           pigeon_map: Mapping[int, int] | None = None) -> VerifyReport:
    """Replay a proof against g0 under the given system spec.

    Accepted means the empty clause is live once every step checked out;
    a clean replay with no empty clause reports verdict "no-empty-clause"
    (useful for derivation prefixes).
    """
    return Verifier(g0, spec, pigeon_map=pigeon_map).run(proof)


def check_no_new_variables(g0: Formula, proof: Iterable) -> bool:
    """True iff every step clause and witness stays inside vars(g0)."""
    allowed = g0.occurring_vars()
    for st in proof:
        if isinstance(st, Delete):
            continue
        if not clause_vars(st.clause) <= allowed:
            return False
        if isinstance(st, AddWitnessed) and not _witness_vars(st.witness) <= allowed:
            return False
    return True


def pigeon_width(c: Clause, ctx: Mapping[int, int]) -> int:
    """Distinct pigeons mentioned by a clause, per a variable -> pigeon map."""
    pigeons = set()
    for lit in c:
        v = abs(lit)
        if v not in ctx:
            raise ValueError(f"variable {v} not covered by the pigeon map")
        pigeons.add(ctx[v])
    return len(pigeons)


def proof_stats(proof: Iterable) -> dict:
    """Step-kind histogram and literal volume of a proof."""
    stats = {"add_rup": 0, "add_pivot": 0, "add_assignment": 0, "add_subst": 0,
             "delete": 0, "steps": 0, "literals": 0}
    for st in proof:
        stats["steps"] += 1
        if isinstance(st, Delete):
            stats["delete"] += 1
            continue
        stats["literals"] += len(st.clause)
        if isinstance(st, AddRup):
            stats["add_rup"] += 1
        elif isinstance(st.witness, Pivot):
            stats["add_pivot"] += 1
        elif isinstance(st.witness, Assignment):
            stats["add_assignment"] += 1
        else:
            stats["add_subst"] += 1
    return stats
