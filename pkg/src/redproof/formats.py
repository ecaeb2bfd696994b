"""Parsers and serializers: DIMACS CNF, DRAT, PR, and the native proof format.

The native format is the source of truth since standard formats cannot carry
substitution witnesses.  One step per line: `a <lits> 0` optionally followed
by a witness block (`p <lit>`, `w <lits> 0`, or `s (<var> <lit|t|f>)* 0`),
and `d <lits> 0` for deletion.  Comment lines start with `c`.  Everything is
ASCII and whitespace-separated; binary DRAT is out of scope.
"""

from __future__ import annotations

import io
from typing import Iterable, Iterator, TextIO

from .core import Clause, Formula, TautologyError, mk_clause
from .proofsys import AddRup, AddWitnessed, Assignment, Delete, Pivot, Subst


class ParseError(ValueError):
    def __init__(self, msg: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {msg}" if line is not None else msg)


def _lines(src: "str | TextIO") -> Iterator[tuple[int, str]]:
    stream = io.StringIO(src) if isinstance(src, str) else src
    for no, raw in enumerate(stream, start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        yield no, line


# ---------------------------------------------------------------------------
# DIMACS CNF
# ---------------------------------------------------------------------------

def parse_dimacs(src: "str | TextIO", drop_tautologies: bool = False) -> Formula:
    """Parse DIMACS CNF.  Tautological clauses are an error unless
    drop_tautologies lints them away."""
    num_vars = None
    clauses: list[Clause] = []
    pending: list[int] = []
    declared = None
    for no, line in _lines(src):
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[0] != "p" or parts[1] != "cnf":
                raise ParseError(f"malformed header {line!r}", no)
            try:
                num_vars, declared = int(parts[2]), int(parts[3])
            except ValueError:
                raise ParseError(f"malformed header {line!r}", no) from None
            continue
        if num_vars is None:
            raise ParseError("clause before 'p cnf' header", no)
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise ParseError(f"bad literal {tok!r}", no) from None
            if lit == 0:
                try:
                    clauses.append(mk_clause(pending))
                except TautologyError:
                    if not drop_tautologies:
                        raise ParseError(f"tautological clause {pending}", no) from None
                pending = []
            else:
                if abs(lit) > num_vars:
                    raise ParseError(f"literal {lit} out of range (header says {num_vars})", no)
                pending.append(lit)
    if pending:
        raise ParseError("unterminated clause at end of input")
    g = Formula(num_vars=num_vars or 0)
    for c in clauses:
        g.add_clause(c)
    if declared is not None and declared != len(clauses) and not drop_tautologies:
        pass  # tolerated: clause-count mismatches are common in the wild
    return g


def write_dimacs(g: Formula) -> str:
    live = g.live_list()
    out = [f"p cnf {g.num_vars} {len(live)}"]
    for c in live:
        out.append(" ".join(map(str, c)) + " 0" if c else "0")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# native proof format
# ---------------------------------------------------------------------------

def _parse_zero_terminated(toks: list[str], pos: int, no: int, what: str) -> tuple[list[int], int]:
    lits = []
    while pos < len(toks):
        try:
            v = int(toks[pos])
        except ValueError:
            raise ParseError(f"bad token {toks[pos]!r} in {what}", no) from None
        pos += 1
        if v == 0:
            return lits, pos
        lits.append(v)
    raise ParseError(f"unterminated {what} block", no)


def _parse_native_line(no: int, line: str):
    toks = line.split()
    tag = toks[0]
    if tag == "d":
        lits, pos = _parse_zero_terminated(toks, 1, no, "delete")
        if pos != len(toks):
            raise ParseError("trailing tokens after delete", no)
        return Delete(mk_clause(lits))
    if tag != "a":
        raise ParseError(f"unknown step tag {tag!r}", no)
    lits, pos = _parse_zero_terminated(toks, 1, no, "clause")
    clause = mk_clause(lits)
    if pos == len(toks):
        return AddRup(clause)
    wtag = toks[pos]
    pos += 1
    if wtag == "p":
        if pos >= len(toks):
            raise ParseError("missing pivot literal", no)
        piv = int(toks[pos])
        if pos + 1 != len(toks):
            raise ParseError("trailing tokens after pivot", no)
        if piv not in clause:
            raise ParseError(f"pivot {piv} not in clause", no)
        return AddWitnessed(clause, Pivot(piv))
    if wtag == "w":
        wlits, pos = _parse_zero_terminated(toks, pos, no, "witness")
        if pos != len(toks):
            raise ParseError("trailing tokens after witness", no)
        values: dict[int, bool] = {}
        for lit in wlits:
            v = abs(lit)
            if v in values and values[v] != (lit > 0):
                raise ParseError(f"contradictory witness literal {lit}", no)
            values[v] = lit > 0
        return AddWitnessed(clause, Assignment(values))
    if wtag == "s":
        values2: dict[int, object] = {}
        while pos < len(toks):
            if toks[pos] == "0":
                pos += 1
                break
            if pos + 1 >= len(toks):
                raise ParseError("dangling substitution pair", no)
            try:
                var = int(toks[pos])
            except ValueError:
                raise ParseError(f"bad substitution variable {toks[pos]!r}", no) from None
            if var <= 0:
                raise ParseError(f"substitution variable must be positive, got {var}", no)
            if var in values2:
                raise ParseError(f"duplicate substitution variable {var}", no)
            val_tok = toks[pos + 1]
            if val_tok == "t":
                values2[var] = True
            elif val_tok == "f":
                values2[var] = False
            else:
                try:
                    values2[var] = int(val_tok)
                except ValueError:
                    raise ParseError(f"bad substitution value {val_tok!r}", no) from None
                if values2[var] == 0:
                    raise ParseError("literal 0 in substitution", no)
            pos += 2
        else:
            raise ParseError("unterminated substitution block", no)
        if pos != len(toks):
            raise ParseError("trailing tokens after substitution", no)
        return AddWitnessed(clause, Subst(values2))
    raise ParseError(f"unknown witness tag {wtag!r}", no)


def parse_native_proof_iter(src: "str | TextIO") -> Iterator:
    for no, line in _lines(src):
        yield _parse_native_line(no, line)


def parse_native_proof(src: "str | TextIO") -> list:
    return list(parse_native_proof_iter(src))


def _native_step_line(st) -> str:
    if isinstance(st, Delete):
        return "d " + " ".join(map(str, st.clause)) + (" 0" if st.clause else "0")
    body = "a " + (" ".join(map(str, st.clause)) + " 0" if st.clause else "0")
    if isinstance(st, AddRup):
        return body
    w = st.witness
    if isinstance(w, Pivot):
        return f"{body} p {w.lit}"
    if isinstance(w, Assignment):
        lits = [v if val else -v for v, val in sorted(w.values.items())]
        return body + " w " + " ".join(map(str, lits)) + " 0"
    parts = []
    for v in sorted(w.values):
        val = w.values[v]
        if val is True:
            parts.append(f"{v} t")
        elif val is False:
            parts.append(f"{v} f")
        else:
            parts.append(f"{v} {val}")
    return body + " s " + " ".join(parts) + " 0"


def write_native_proof(proof: Iterable) -> str:
    return "".join(_native_step_line(st) + "\n" for st in proof)


def write_native_proof_to(proof: Iterable, out: TextIO) -> int:
    """Stream a proof to a file object; returns the step count."""
    n = 0
    for st in proof:
        out.write(_native_step_line(st) + "\n")
        n += 1
    return n


# ---------------------------------------------------------------------------
# DRAT (ASCII)
# ---------------------------------------------------------------------------

def parse_drat_ascii_iter(src: "str | TextIO") -> Iterator:
    """Standard DRAT: add lines become pivot-on-first-literal steps (the
    verifier falls back to plain RUP when the RAT check fails)."""
    for no, line in _lines(src):
        toks = line.split()
        pos = 0
        delete = False
        if toks[0] == "d":
            delete = True
            pos = 1
        lits, pos = _parse_zero_terminated(toks, pos, no, "clause")
        if pos != len(toks):
            raise ParseError("trailing tokens", no)
        clause = mk_clause(lits)
        if delete:
            yield Delete(clause)
        elif lits:
            yield AddWitnessed(clause, Pivot(lits[0]))
        else:
            yield AddRup(clause)


def parse_drat_ascii(src: "str | TextIO") -> list:
    return list(parse_drat_ascii_iter(src))


def write_drat_ascii(proof: Iterable) -> str:
    """Export to standard DRAT.  Assignment/substitution witnesses are not
    expressible and raise ValueError; pivot clauses are written pivot-first."""
    out = []
    for st in proof:
        if isinstance(st, Delete):
            out.append("d " + " ".join(map(str, st.clause)) + (" 0" if st.clause else "0"))
        elif isinstance(st, AddRup):
            out.append(" ".join(map(str, st.clause)) + (" 0" if st.clause else "0"))
        elif isinstance(st.witness, Pivot):
            p = st.witness.lit
            lits = [p] + [l for l in st.clause if l != p]
            out.append(" ".join(map(str, lits)) + " 0")
        else:
            raise ValueError(f"{type(st.witness).__name__} witness has no DRAT encoding")
    return "\n".join(out) + ("\n" if out else "")


# ---------------------------------------------------------------------------
# PR proof format
# ---------------------------------------------------------------------------

def parse_pr_proof_iter(src: "str | TextIO") -> Iterator:
    """Community PR format: on an add line, the witness starts at the second
    occurrence of the clause's first literal."""
    for no, line in _lines(src):
        toks = line.split()
        pos = 0
        delete = False
        if toks[0] == "d":
            delete = True
            pos = 1
        lits, pos = _parse_zero_terminated(toks, pos, no, "clause")
        if pos != len(toks):
            raise ParseError("trailing tokens", no)
        if delete:
            yield Delete(mk_clause(lits))
            continue
        if not lits:
            yield AddRup(())
            continue
        first = lits[0]
        witness_start = None
        for k in range(1, len(lits)):
            if lits[k] == first:
                witness_start = k
                break
        if witness_start is None:
            yield AddRup(mk_clause(lits))
            continue
        clause = mk_clause(lits[:witness_start])
        values: dict[int, bool] = {}
        for lit in lits[witness_start:]:
            v = abs(lit)
            if v in values and values[v] != (lit > 0):
                raise ParseError(f"self-contradictory witness literal {lit}", no)
            values[v] = lit > 0
        yield AddWitnessed(clause, Assignment(values))


def parse_pr_proof(src: "str | TextIO") -> list:
    return list(parse_pr_proof_iter(src))


def _pr_witness_line(clause: Clause, values: dict) -> str:
    sat = [l for l in clause if values.get(abs(l)) == (l > 0)]
    if not sat:
        raise ValueError("witness does not satisfy the clause; no PR encoding")
    first = sat[0]
    head = [first] + [l for l in clause if l != first]
    wlits = [first] + [v if val else -v
                       for v, val in sorted(values.items()) if v != abs(first)]
    return " ".join(map(str, head + wlits)) + " 0"


def write_pr_proof(proof: Iterable) -> str:
    """Export to the PR format.  Pivot witnesses embed as their one-flip
    assignment; substitution witnesses raise ValueError."""
    out = []
    for st in proof:
        if isinstance(st, Delete):
            out.append("d " + " ".join(map(str, st.clause)) + (" 0" if st.clause else "0"))
        elif isinstance(st, AddRup):
            out.append(" ".join(map(str, st.clause)) + (" 0" if st.clause else "0"))
        elif isinstance(st.witness, Pivot):
            p = st.witness.lit
            values = {abs(l): l < 0 for l in st.clause}
            values[abs(p)] = p > 0
            head = [p] + [l for l in st.clause if l != p]
            wlits = [p] + [v if val else -v
                           for v, val in sorted(values.items()) if v != abs(p)]
            out.append(" ".join(map(str, head + wlits)) + " 0")
        elif isinstance(st.witness, Assignment):
            out.append(_pr_witness_line(st.clause, st.witness.values))
        else:
            raise ValueError("substitution witness has no PR encoding")
    return "\n".join(out) + ("\n" if out else "")


FORMAT_PARSERS = {
    "native": parse_native_proof_iter,
    "drat": parse_drat_ascii_iter,
    "pr": parse_pr_proof_iter,
}

FORMAT_WRITERS = {
    "native": write_native_proof,
    "drat": write_drat_ascii,
    "pr": write_pr_proof,
}
