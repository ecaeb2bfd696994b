"""Builders emitting explicit polynomial-size refutations as proof objects.

Each build_* function returns a step list that the verifier accepts under
(SPR, no deletion, no new variables), except build_php_dsr which uses
substitution witnesses and deletion.  The common engine is the symmetry
batch: sequences of assignment pairs (alpha_i, tau_i) with equal restricted
formulas, pairwise contradictory-or-disjoint, introduced up front as SPR
steps; resolution phases afterwards are emitted as RUP additions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .core import (Clause, Formula, clause_of_assignment, mk_clause,
                   restrict_live)
from .redundancy import _up_entails_all
from .gens import (Graph, bit_clause, bphp_var, cc_layout, default_charge,
                   edge_vars, gen_bphp, gen_cc, gen_parity, gen_php,
                   gen_tseitin, parity_clauses, parity_var, php_var,
                   LiftGadget, OrGadget, XorGadget)
from .proofsys import AddRup, AddWitnessed, Assignment, Delete, Pivot, Subst


@dataclass(frozen=True, eq=False)
class SymmetryPair:
    """An assignment and its image under a formula symmetry."""
    alpha: dict
    tau: dict


class BatchConditionError(ValueError):
    def __init__(self, msg: str, i: int, j: int | None = None):
        self.indices = (i, j)
        where = f"pair {i}" if j is None else f"pairs ({j}, {i})"
        super().__init__(f"{msg} at {where}")


def _earlier_pair_compatible(alpha_j: dict, alpha_i: dict, tau_i: dict) -> bool:
    """tau_i must contradict alpha_j (so the earlier clause vanishes), or
    agree with alpha_i on dom(alpha_j) (so the earlier clause restricts the
    same way on both sides).  Domain-disjointness is the trivial case of
    the latter."""
    shared_mismatch = False
    for v, val in alpha_j.items():
        w = tau_i.get(v)
        if w is None:
            continue
        if w != val:
            return True
        if alpha_i[v] != w:
            shared_mismatch = True
    return not shared_mismatch


def spr_symmetry_batch(g: Formula, pairs: Sequence[SymmetryPair],
                       validate: bool = True, condition: str = "equal") -> list:
    """SPR steps adding the clauses not-alpha_i witnessed by tau_i.

    Validates the batch conditions: the restrictions of g under alpha_i and
    tau_i agree, alpha_i and tau_i share a domain and contradict, and each
    tau_i is disjoint from or contradictory with every earlier alpha_j.
    With condition="equal" the first check is restriction-set equality (the
    symmetry case); condition="entail" only requires that g|alpha_i
    unit-propagates every clause of g|tau_i, which is still sufficient for
    the batch to verify step by step.  Violations raise BatchConditionError
    naming the offending pair(s).
    """
    if validate:
        for i, pr in enumerate(pairs):
            if set(pr.alpha) != set(pr.tau):
                raise BatchConditionError("alpha and tau domains differ", i)
            if not any(pr.tau[v] != val for v, val in pr.alpha.items()):
                raise BatchConditionError("alpha and tau do not contradict", i)
            if condition == "equal":
                if frozenset(restrict_live(g, pr.alpha)) != frozenset(restrict_live(g, pr.tau)):
                    raise BatchConditionError("restrictions of the base formula differ", i)
            else:
                ok, _ = _up_entails_all(restrict_live(g, pr.alpha),
                                        restrict_live(g, pr.tau), g.num_vars)
                if not ok:
                    raise BatchConditionError("restriction entailment fails", i)
        for i in range(len(pairs)):
            ai, ti = pairs[i].alpha, pairs[i].tau
            for j in range(i):
                if not _earlier_pair_compatible(pairs[j].alpha, ai, ti):
                    raise BatchConditionError(
                        "tau neither contradicts the earlier alpha nor restricts it alike", i, j)
    return [AddWitnessed(clause_of_assignment(p.alpha), Assignment(dict(p.tau)))
            for p in pairs]


def pattern_tree_steps(pattern_vars: Sequence[int], tail: Iterable[int]) -> list:
    """RUP steps deriving tail from the 2^s clauses (pattern over vars) v tail.

    Emits the binary resolution tree top-down: for every strict prefix w of a
    sign pattern, the clause (var_j != w_j for j <= |w|) v tail.  The final
    step is tail itself.  Leaves (full patterns) must already be derivable.
    """
    tail = list(tail)
    steps = []
    for t in range(len(pattern_vars) - 1, -1, -1):
        for w in range(1 << t):
            lits = [-pattern_vars[j] if (w >> j) & 1 else pattern_vars[j]
                    for j in range(t)]
            steps.append(AddRup(mk_clause(lits + tail)))
    return steps


# ---------------------------------------------------------------------------
# pigeonhole principle
# ---------------------------------------------------------------------------

def php_spr_pairs(n: int) -> list[SymmetryPair]:
    pairs = []
    for i in range(n - 1):
        for j in range(i + 1, n + 1):
            for k in range(i + 1, n):
                alpha = {}
                tau = {}
                for l in range(n + 1):
                    alpha[php_var(l, k, n)] = l == i
                    alpha[php_var(l, i, n)] = l == j
                    tau[php_var(l, k, n)] = l == j
                    tau[php_var(l, i, n)] = l == i
                pairs.append(SymmetryPair(alpha, tau))
    return pairs


def build_php_spr(n: int) -> list:
    """SPR- refutation of PHP(n): hole-swap symmetry batch, then resolution."""
    g = gen_php(n)
    proof = spr_symmetry_batch(g, php_spr_pairs(n))
    # shrink each wide symmetry clause to (not p_{i,k} or not p_{j,i})
    for i in range(n - 1):
        for j in range(i + 1, n + 1):
            for k in range(i + 1, n):
                proof.append(AddRup(mk_clause([-php_var(i, k, n), -php_var(j, i, n)])))
    # peel holes: derive the units (not p_{j,i}) for j > i
    for i in range(n):
        for j in range(i + 1, n + 1):
            proof.append(AddRup((-php_var(j, i, n),)))
    proof.append(AddRup(()))
    return proof


def build_php_dsr(n: int) -> list:
    """DSR- refutation of PHP(n): pigeon-swap substitutions with deletions."""
    if n < 2:
        raise ValueError("need n >= 2")
    proof = []
    pigeons = list(range(n + 1))
    holes = list(range(n))
    pigeon_clause = {i: mk_clause(php_var(i, j, n) for j in holes) for i in pigeons}

    def hole_axiom(i, i2, j):
        return mk_clause([-php_var(i, j, n), -php_var(i2, j, n)])

    while len(holes) > 1:
        h = holes[0]
        p0 = pigeons[0]
        for i in pigeons[1:]:
            c = mk_clause([-php_var(i, h, n), php_var(p0, h, n)])
            tau: dict = {php_var(p0, h, n): True, php_var(i, h, n): False}
            for j in holes[1:]:
                tau[php_var(p0, j, n)] = php_var(i, j, n)
                tau[php_var(i, j, n)] = php_var(p0, j, n)
            proof.append(AddWitnessed(c, Subst(tau)))
            proof.append(AddRup((-php_var(i, h, n),)))
            proof.append(Delete(c))
        new_pigeon_clause = {}
        for i in pigeons[1:]:
            new_pigeon_clause[i] = mk_clause(php_var(i, j, n) for j in holes[1:])
            proof.append(AddRup(new_pigeon_clause[i]))
        # delete everything but the renamed smaller instance
        for i in pigeons:
            proof.append(Delete(pigeon_clause[i]))
        for a in range(len(pigeons)):
            for b in range(a + 1, len(pigeons)):
                proof.append(Delete(hole_axiom(pigeons[a], pigeons[b], h)))
        for j in holes[1:]:
            for i in pigeons[1:]:
                proof.append(Delete(hole_axiom(p0, i, j)))
        for i in pigeons[1:]:
            proof.append(Delete((-php_var(i, h, n),)))
        pigeons = pigeons[1:]
        holes = holes[1:]
        pigeon_clause = new_pigeon_clause
    proof.append(AddRup(()))
    return proof


# ---------------------------------------------------------------------------
# bit pigeonhole principle
# ---------------------------------------------------------------------------

def bphp_spr_pairs(k: int) -> list[SymmetryPair]:
    n = 1 << k
    pairs = []
    for m in range(n - 1):
        for x in range(m + 1, n + 1):
            for y in range(m + 1, n):
                alpha = {}
                tau = {}
                for i in range(1, k + 1):
                    alpha[bphp_var(m, i, k)] = bool((y >> (i - 1)) & 1)
                    alpha[bphp_var(x, i, k)] = bool((m >> (i - 1)) & 1)
                    tau[bphp_var(m, i, k)] = bool((m >> (i - 1)) & 1)
                    tau[bphp_var(x, i, k)] = bool((y >> (i - 1)) & 1)
                pairs.append(SymmetryPair(alpha, tau))
    return pairs


def build_bphp_spr(k: int) -> list:
    """SPR- refutation of BPHP(k): pigeon-swap batch, then for each hole m
    a resolution tree deriving (x -/-> m) for every higher pigeon."""
    g = gen_bphp(k)
    n = 1 << k
    proof = spr_symmetry_batch(g, bphp_spr_pairs(k))
    for m in range(n):
        mvars = [bphp_var(m, i, k) for i in range(1, k + 1)]
        for x in range(m + 1, n + 1):
            proof.extend(pattern_tree_steps(mvars, bit_clause(x, m, k)))
    proof.extend(pattern_tree_steps([bphp_var(n, i, k) for i in range(1, k + 1)], []))
    return proof


# ---------------------------------------------------------------------------
# parity principle
# ---------------------------------------------------------------------------

def _parity_matching_assignment(matches: list[tuple[int, int]], n: int) -> dict:
    touched = sorted({v for pair in matches for v in pair})
    out = {}
    for v in touched:
        for u in range(n):
            if u != v:
                out[parity_var(v, u)] = False
    for a, b in matches:
        out[parity_var(a, b)] = True
    return out


def parity_spr_pairs(n: int) -> list[SymmetryPair]:
    pairs = []
    for i in range(n // 2):
        lo = 2 * i
        for j in range(lo + 2, n):
            for k in range(lo + 2, n):
                if j == k:
                    continue
                alpha = _parity_matching_assignment([(lo, j), (lo + 1, k)], n)
                tau = _parity_matching_assignment([(lo, lo + 1), (j, k)], n)
                pairs.append(SymmetryPair(alpha, tau))
    return pairs


def build_parity_spr(n: int) -> list:
    """SPR- refutation of the parity principle on n (odd) vertices."""
    g = gen_parity(n)
    proof = spr_symmetry_batch(g, parity_spr_pairs(n))
    for i in range(n // 2):
        lo = 2 * i
        for j in range(lo + 2, n):
            for k in range(lo + 2, n):
                if j != k:
                    proof.append(AddRup(mk_clause([-parity_var(lo, j),
                                                   -parity_var(lo + 1, k)])))
    for i in range(n // 2):
        lo = 2 * i
        for r in range(lo):
            proof.append(AddRup((-parity_var(lo, r),)))
            proof.append(AddRup((-parity_var(lo + 1, r),)))
        tail = range(lo + 2, n)
        proof.append(AddRup(mk_clause([parity_var(lo, lo + 1)]
                                      + [parity_var(lo, r) for r in tail])))
        proof.append(AddRup(mk_clause([parity_var(lo, lo + 1)]
                                      + [parity_var(lo + 1, r) for r in tail])))
        for j in tail:
            proof.append(AddRup(mk_clause([parity_var(lo, lo + 1),
                                           -parity_var(lo, j)])))
        proof.append(AddRup((parity_var(lo, lo + 1),)))
    proof.append(AddRup(()))
    return proof


# ---------------------------------------------------------------------------
# clique-coloring
# ---------------------------------------------------------------------------

def cc_slot_functionality_steps(n: int, m: int) -> list:
    """SPR steps pinning each clique slot to at most one vertex.

    The witness keeps the earlier vertex and clears the later one; the
    restricted formula under the witness is contained in the one under the
    negated clause, so each step verifies by containment alone.
    """
    p, _, _ = cc_layout(n, m)
    steps = []
    for a in range(m):
        for u in range(n):
            for v in range(u + 1, n):
                clause = mk_clause([-p(a, u), -p(a, v)])
                steps.append(AddWitnessed(
                    clause, Assignment({p(a, u): True, p(a, v): False})))
    return steps


def cc_spr_pairs(n: int, m: int) -> list[SymmetryPair]:
    """Symmetry pairs excluding, for every r, the pattern 'slot a > r sits on
    an r-colored vertex while slot r sits on a c-colored vertex with c > r'.

    The witness swaps which slot sits where and keeps the colors in place
    (the printed construction swaps the two colors instead, but its
    restriction entailment fails under unit propagation once n > 4).
    """
    p, q, _ = cc_layout(n, m)

    def vertex_assignment(out, a, i, c):
        for a2 in range(m):
            out[p(a2, i)] = a2 == a
        for c2 in range(m - 1):
            out[q(i, c2)] = c2 == c

    pairs = []
    for r in range(m - 2):
        for a in range(r + 1, m):
            for c in range(r + 1, m - 1):
                for i in range(n):
                    for j in range(n):
                        if i == j:
                            continue
                        alpha: dict = {}
                        vertex_assignment(alpha, a, j, r)
                        vertex_assignment(alpha, r, i, c)
                        tau: dict = {}
                        vertex_assignment(tau, r, j, r)
                        vertex_assignment(tau, a, i, c)
                        pairs.append(SymmetryPair(alpha, tau))
    return pairs


def build_cc_spr(n: int, m: int) -> list:
    """SPR- refutation of the clique-coloring principle CC(n, m)."""
    g = gen_cc(n, m)
    p, q, _ = cc_layout(n, m)
    proof = cc_slot_functionality_steps(n, m)
    base = g.copy()
    for st in proof:
        base.add_clause(st.clause)
    proof += spr_symmetry_batch(base, cc_spr_pairs(n, m), condition="entail")
    # narrow each symmetry clause to C^r_{a,i,j,c}
    for r in range(m - 2):
        for a in range(r + 1, m):
            for c in range(r + 1, m - 1):
                for i in range(n):
                    for j in range(n):
                        if i != j:
                            proof.append(AddRup(mk_clause(
                                [-p(a, j), -q(j, r), -p(r, i), -q(i, c)])))
    # inductively push indices and colors 0..r out of the picture
    for r in range(m - 2):
        for a in range(r + 1, m):
            for j in range(n):
                for i in range(n):
                    if i == j:
                        continue
                    proof.append(AddRup(mk_clause(
                        [-p(a, j), -q(j, r), -p(r, i), q(i, r)])))
                    proof.append(AddRup(mk_clause(
                        [-p(a, j), -p(r, i), -q(j, r), -q(i, r)])))
                    proof.append(AddRup(mk_clause(
                        [-p(a, j), -q(j, r), -p(r, i)])))
                proof.append(AddRup(mk_clause([-p(a, j), -q(j, r)])))
                proof.append(AddRup(mk_clause(
                    [-p(a, j)] + [q(j, c) for c in range(r + 1, m - 1)])))
    # endgame: the last two clique indices fight over the last color
    for j in range(n):
        for j2 in range(n):
            if j != j2:
                proof.append(AddRup(mk_clause([-p(m - 2, j), -p(m - 1, j2)])))
    for j in range(n):
        proof.append(AddRup((-p(m - 2, j),)))
    proof.append(AddRup(()))
    return proof


# ---------------------------------------------------------------------------
# Tseitin contradictions
# ---------------------------------------------------------------------------

def find_short_cycle(graph: Graph) -> list[int]:
    """A shortest simple cycle as a vertex list (BFS from every vertex,
    smallest start vertex breaking ties).  With min degree >= 3 the length
    is at most 2*log2(n)."""
    adj: dict[int, list[int]] = {v: [] for v in range(graph.n)}
    for u, v in graph.edges:
        adj[u].append(v)
        adj[v].append(u)
    for v in adj:
        adj[v].sort()
    best: list[int] | None = None
    for root in range(graph.n):
        parent = {root: root}
        dist = {root: 0}
        frontier = [root]
        while frontier:
            nxt = []
            for u in frontier:
                for w in adj[u]:
                    if w not in dist:
                        dist[w] = dist[u] + 1
                        parent[w] = u
                        nxt.append(w)
                    elif parent[u] != w and parent[w] != u:
                        cycle = _join_paths(parent, dist, u, w)
                        if cycle and (best is None or len(cycle) < len(best)):
                            best = cycle
            frontier = nxt
            if best is not None and frontier and 2 * dist[frontier[0]] >= len(best):
                break
    if best is None:
        raise ValueError("graph is acyclic")
    return best


def _join_paths(parent, dist, u, w) -> list[int] | None:
    pu, pw = [u], [w]
    a, b = u, w
    while a != b:
        if dist[a] >= dist[b]:
            a = parent[a]
            pu.append(a)
        else:
            b = parent[b]
            pw.append(b)
    cycle = pu + pw[-2::-1]
    return cycle if len(set(cycle)) == len(cycle) and len(cycle) >= 3 else None


class _TseitinState:
    """Mutable graph/charge state plus the clean tracked clause set."""

    def __init__(self, graph: Graph, charge: Sequence[int]):
        self.evar = edge_vars(graph)
        self.adj: dict[int, set[tuple[int, int]]] = {v: set() for v in range(graph.n)}
        for e in graph.edges:
            self.adj[e[0]].add(e)
            self.adj[e[1]].add(e)
        self.gamma = [c % 2 for c in charge]
        self.clean = gen_tseitin(graph, charge)
        self.proof: list = []

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def incident_vars(self, v: int) -> list[int]:
        return sorted(self.evar[e] for e in self.adj[v])

    def emit(self, clause: Clause, track: bool = True) -> None:
        self.proof.append(AddRup(clause))
        if track:
            self.clean.add_clause(clause)

    def remove_edge(self, e: tuple[int, int]) -> None:
        self.adj[e[0]].discard(e)
        self.adj[e[1]].discard(e)

    def refresh_vertex(self, v: int) -> bool:
        """Emit the vertex's parity clauses for the current graph.
        Returns True when the empty clause was produced."""
        for c in parity_clauses(self.incident_vars(v), self.gamma[v]):
            self.emit(c)
            if not c:
                return True
        return False


def _fold_leaf(st: _TseitinState, v: int) -> bool:
    """Case 1: remove the pendant edge at v.  Returns True when refuted."""
    e = next(iter(st.adj[v]))
    u = e[0] if e[1] == v else e[1]
    st.remove_edge(e)
    st.gamma[u] ^= st.gamma[v]
    st.gamma[v] = 0
    return st.refresh_vertex(u)


def _walk_chain(st: _TseitinState, start: int,
                e0: tuple[int, int]) -> tuple[int, list[tuple[int, int]]]:
    """Follow a chain of degree-2 vertices from start across e0.
    Returns (end vertex, edge path)."""
    path = [e0]
    cur = e0[0] if e0[1] == start else e0[1]
    while len(st.adj[cur]) == 2 and cur != start:
        e = next(x for x in sorted(st.adj[cur]) if x != path[-1])
        path.append(e)
        cur = e[0] if e[1] == cur else e[1]
    return cur, path


def _segments_of_cycle(st: _TseitinState) -> list[tuple[int, list[tuple[int, int]]]]:
    """A short cycle of the current graph as oriented edge-disjoint paths
    whose internal vertices all have degree 2.  Returned as (start vertex,
    edge list) pairs chained around the cycle; a component that is one big
    cycle yields a single closed path."""
    deg3 = sorted(v for v in st.adj if len(st.adj[v]) >= 3)
    if not deg3:
        start = min(v for v in st.adj if st.adj[v])
        e0 = sorted(st.adj[start])[0]
        _, path = _walk_chain(st, start, e0)
        return [(start, path)]
    segments: list[tuple[int, int, list[tuple[int, int]]]] = []
    claimed: set[tuple[int, int]] = set()
    for b in deg3:
        for e0 in sorted(st.adj[b]):
            if e0 in claimed:
                continue
            end, path = _walk_chain(st, b, e0)
            claimed.update(path)
            segments.append((b, end, path))
    # a chain returning to its own branch vertex is already a cycle
    loops = [s for s in segments if s[0] == s[1]]
    if loops:
        best = min(loops, key=lambda s: (len(s[2]), s[0]))
        return [(best[0], best[2])]
    by_pair: dict[tuple[int, int], list] = {}
    for s in segments:
        key = (min(s[0], s[1]), max(s[0], s[1]))
        by_pair.setdefault(key, []).append(s)
    # candidate 1: two parallel chains between the same branch vertices
    parallel = None
    for key in sorted(by_pair):
        group = sorted(by_pair[key], key=lambda s: len(s[2]))
        if len(group) >= 2:
            length = len(group[0][2]) + len(group[1][2])
            if parallel is None or length < parallel[0]:
                parallel = (length, key, group[0], group[1])
    # candidate 2: shortest cycle of the contracted simple graph
    shortest: dict[tuple[int, int], tuple] = {}
    for s in segments:
        key = (min(s[0], s[1]), max(s[0], s[1]))
        if key not in shortest or len(s[2]) < len(shortest[key][2]):
            shortest[key] = s
    bfs_paths = None
    if shortest:
        cg = Graph(max(max(e) for e in shortest) + 1, sorted(shortest))
        try:
            cyc = find_short_cycle(cg)
        except ValueError:
            cyc = None
        if cyc is not None:
            bfs_paths = []
            total = 0
            for t in range(len(cyc)):
                a, b = cyc[t], cyc[(t + 1) % len(cyc)]
                seg = shortest[(min(a, b), max(a, b))]
                path = seg[2] if seg[0] == a else list(reversed(seg[2]))
                bfs_paths.append((a, path))
                total += len(path)
            bfs_total = total
    if bfs_paths is not None and (parallel is None or bfs_total <= parallel[0]):
        return bfs_paths
    if parallel is not None:
        _, key, s1, s2 = parallel
        p1 = s1[2] if s1[0] == key[0] else list(reversed(s1[2]))
        p2 = s2[2] if s2[0] == key[1] else list(reversed(s2[2]))
        return [(key[0], p1), (key[1], p2)]
    raise ValueError("no cycle found in the current graph")


def _path_chain_values(st: _TseitinState, path: list[tuple[int, int]],
                       start: int, first_value: bool) -> dict[int, bool]:
    """The consistent assignment to a degree-2 chain given its first edge."""
    out = {}
    val = first_value
    prev = start
    for t, e in enumerate(path):
        out[st.evar[e]] = val
        nxt = e[0] if e[1] == prev else e[1]
        if t + 1 < len(path):
            val = val ^ bool(st.gamma[nxt])
        prev = nxt
    return out


def _eliminate_cycle_edge(st: _TseitinState) -> None:
    """Cases 2/3: derive the unit clause falsifying the first edge of a
    short cycle, then drop that edge."""
    segments = _segments_of_cycle(st)
    x1 = st.evar[segments[0][1][0]]
    m = len(segments)
    pairs = []
    w_clauses = []
    for bits in range(1 << (m - 1)):
        alpha: dict = {}
        w_lits = []
        for t, (start, path) in enumerate(segments):
            b = True if t == 0 else bool((bits >> (t - 1)) & 1)
            alpha.update(_path_chain_values(st, path, start, b))
            v = st.evar[path[0]]
            w_lits.append(-v if b else v)
        tau = {v: not val for v, val in alpha.items()}
        pairs.append(SymmetryPair(alpha, tau))
        w_clauses.append(mk_clause(w_lits))
    st.proof.extend(spr_symmetry_batch(st.clean, pairs))
    neg_alphas = {clause_of_assignment(p.alpha) for p in pairs}
    for w in w_clauses:
        if w not in neg_alphas:
            st.proof.append(AddRup(w))
    tree_vars = [st.evar[segments[t][1][0]] for t in range(1, m)]
    # pattern bit 1 corresponds to the positive-edge choice, matching w_lits
    st.proof.extend(pattern_tree_steps(tree_vars, [-x1]))
    st.clean.add_clause((-x1,))
    e = segments[0][1][0]
    st.remove_edge(e)
    for v in sorted(set(e)):
        if st.refresh_vertex(v):
            return


def build_tseitin_spr(graph: Graph, charge: Sequence[int] | None = None) -> list:
    """SPR- refutation of a Tseitin contradiction with odd total charge.

    Leaves fold away by unit propagation; short cycles (found after
    contracting degree-2 chains) are killed one edge at a time by
    sign-flip symmetry batches.
    """
    if charge is None:
        charge = default_charge(graph)
    if sum(charge) % 2 == 0:
        raise ValueError("total charge must be odd")
    st = _TseitinState(graph, charge)
    if st.clean.has_live(()):
        return [AddRup(())]
    while any(st.adj[v] for v in st.adj):
        leaf = next((v for v in sorted(st.adj) if len(st.adj[v]) == 1), None)
        if leaf is not None:
            if _fold_leaf(st, leaf):
                return st.proof
            continue
        _eliminate_cycle_edge(st)
        if st.clean.has_live(()):
            return st.proof
    # no edges left but the total charge is odd: some isolated vertex blew up
    raise AssertionError("tseitin builder should have refuted before emptying the graph")


# ---------------------------------------------------------------------------
# gadget undo derivations
# ---------------------------------------------------------------------------

def undo_orify(gprime: Formula, gadget: OrGadget) -> list:
    """Derivation recovering the original clauses, x renamed to x_1,
    from an orified formula."""
    xs = gadget.x_vars
    x1 = xs[0]
    pairs = [SymmetryPair({x1: False, xj: True}, {x1: True, xj: False})
             for xj in xs[1:]]
    proof = spr_symmetry_batch(gprime, pairs)
    xset = set(xs)
    for c in gprime.live():
        if xset <= set(c):
            proof.append(AddRup(mk_clause([l for l in c if l not in xset] + [x1])))
    return proof


def undo_xorify(gprime: Formula, gadget: XorGadget) -> list:
    """Derivation recovering the original clauses from a xorified formula:
    unit clauses kill x_2..x_m, leaving x_1 to play the original x."""
    xs = gadget.x_vars
    x1 = xs[0]
    proof = []
    base = gprime.copy()
    for xj in xs[1:]:
        pairs = [SymmetryPair({x1: False, xj: True}, {x1: True, xj: False}),
                 SymmetryPair({x1: True, xj: True}, {x1: False, xj: False})]
        proof.extend(spr_symmetry_batch(base, pairs))
        proof.append(AddRup((-xj,)))
        base.add_clause((-xj,))
    families = set()
    xset = set(xs)
    for c in gprime.live():
        cx = [l for l in c if abs(l) in xset]
        if not cx:
            continue
        rest = tuple(l for l in c if abs(l) not in xset)
        neg = sum(1 for l in cx if l < 0)
        families.add((rest, neg % 2 == 0))
    for rest, positive in sorted(families):
        proof.append(AddRup(mk_clause(list(rest) + [x1 if positive else -x1])))
    return proof


def undo_lift(gprime: Formula, gadget: LiftGadget) -> list:
    """Derivation recovering the original clauses, x renamed to z_0, from an
    index-lifted formula."""
    ys, zs = gadget.y_vars, gadget.z_vars
    ell = len(ys)
    pairs = []
    for i in range(1, 1 << ell):
        ybits_i = {ys[j]: bool((i >> j) & 1) for j in range(ell)}
        ybits_0 = {ys[j]: False for j in range(ell)}
        for a in (False, True):
            for b in (False, True):
                alpha = dict(ybits_i)
                alpha[zs[0]] = a
                alpha[zs[i]] = b
                tau = dict(ybits_0)
                tau[zs[0]] = b
                tau[zs[i]] = a
                pairs.append(SymmetryPair(alpha, tau))
    proof = spr_symmetry_batch(gprime, pairs)

    def not_to(i):
        return [-ys[j] if (i >> j) & 1 else ys[j] for j in range(ell)]

    for i in range(1, 1 << ell):
        for a in (False, True):
            proof.append(AddRup(mk_clause(not_to(i) + [-zs[0] if a else zs[0]])))
        proof.append(AddRup(mk_clause(not_to(i))))
    # units fixing the index to 0, bit by bit
    for j in range(ell):
        proof.extend(pattern_tree_steps(ys[j + 1:], [-ys[j]]))
    yset = set(ys)
    zset = set(zs)
    families = set()
    for c in gprime.live():
        if not yset <= {abs(l) for l in c}:
            continue
        zlit = [l for l in c if abs(l) in zset]
        if len(zlit) != 1:
            continue
        rest = tuple(l for l in c if abs(l) not in yset and abs(l) not in zset)
        families.add((rest, zlit[0] > 0))
    for rest, positive in sorted(families):
        proof.append(AddRup(mk_clause(list(rest) + [zs[0] if positive else -zs[0]])))
    return proof
