"""Canonical CNF generators: pigeonhole and friends, plus obfuscation gadgets.

Variable layouts are fixed so that external tools, the proof builders and
the tests agree bit-exactly:

  PHP(n):    p(i,j) = i*n + j + 1          pigeons i in [n+1], holes j in [n]
  BPHP(k):   p(x,i) = x*k + i              pigeons x in [n+1], bits i in 1..k
             (bit 1 is the least significant bit of the hole number)
  PAR(n):    x(i,j) = j*(j-1)/2 + i + 1    for i < j  (x(i,j) = x(j,i))
  CC(n,m):   p(a,i) = a*n + i + 1
             q(i,c) = m*n + i*(m-1) + c + 1
             x(i,j) = m*n + n*(m-1) + j*(j-1)/2 + i + 1   for i < j
  Tseitin:   one variable per edge, edges sorted, numbered from 1
  X^m:       x_i = offset + i for i = 1..m, y = offset + m + 1
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence, TextIO

from .core import Clause, Formula, mk_clause


# ---------------------------------------------------------------------------
# variable layouts
# ---------------------------------------------------------------------------

def php_var(i: int, j: int, n: int) -> int:
    return i * n + j + 1


def bphp_var(x: int, i: int, k: int) -> int:
    return x * k + i


def bphp_pigeon_map(k: int) -> dict[int, int]:
    """Variable -> pigeon map for BPHP(k), for pigeon-width accounting."""
    n = 1 << k
    return {bphp_var(x, i, k): x for x in range(n + 1) for i in range(1, k + 1)}


def parity_var(i: int, j: int) -> int:
    if i == j:
        raise ValueError("no self-loop variable")
    if i > j:
        i, j = j, i
    return j * (j - 1) // 2 + i + 1


def cc_layout(n: int, m: int):
    def p(a, i):
        return a * n + i + 1

    def q(i, c):
        return m * n + i * (m - 1) + c + 1

    base = m * n + n * (m - 1)

    def x(i, j):
        if i == j:
            raise ValueError("no self-loop variable")
        if i > j:
            i, j = j, i
        return base + j * (j - 1) // 2 + i + 1

    return p, q, x


# ---------------------------------------------------------------------------
# formula families
# ---------------------------------------------------------------------------

def gen_php(n: int) -> Formula:
    """Pigeonhole principle: n+1 pigeons into n holes."""
    if n < 1:
        raise ValueError("need n >= 1")
    g = Formula(num_vars=(n + 1) * n)
    for i in range(n + 1):
        g.add_clause(mk_clause(php_var(i, j, n) for j in range(n)))
    for j in range(n):
        for i in range(n + 1):
            for i2 in range(i + 1, n + 1):
                g.add_clause(mk_clause([-php_var(i, j, n), -php_var(i2, j, n)]))
    return g


def bit_clause(x: int, y: int, k: int) -> list[int]:
    """Literals of (x -/-> y): pigeon x does not sit in hole y."""
    return [-bphp_var(x, i, k) if (y >> (i - 1)) & 1 else bphp_var(x, i, k)
            for i in range(1, k + 1)]


def gen_bphp(k: int) -> Formula:
    """Bit pigeonhole principle: n+1 pigeons with k-bit hole addresses, n = 2^k."""
    if k < 1:
        raise ValueError("need k >= 1")
    n = 1 << k
    g = Formula(num_vars=k * (n + 1))
    for y in range(n):
        for x in range(n + 1):
            for x2 in range(x + 1, n + 1):
                g.add_clause(mk_clause(bit_clause(x, y, k) + bit_clause(x2, y, k)))
    return g


def gen_parity(n: int) -> Formula:
    """Parity principle: no perfect matching on an odd set of n vertices."""
    if n < 3 or n % 2 == 0:
        raise ValueError("need odd n >= 3")
    g = Formula(num_vars=n * (n - 1) // 2)
    for i in range(n):
        g.add_clause(mk_clause(parity_var(i, j) for j in range(n) if j != i))
    for i in range(n):
        others = [j for j in range(n) if j != i]
        for a in range(len(others)):
            for b in range(a + 1, len(others)):
                g.add_clause(mk_clause([-parity_var(i, others[a]),
                                        -parity_var(i, others[b])]))
    return g


def gen_cc(n: int, m: int) -> Formula:
    """Clique-coloring: an n-vertex graph with an m-clique and an (m-1)-coloring."""
    if not 2 <= m <= n:
        raise ValueError("need 2 <= m <= n")
    p, q, x = cc_layout(n, m)
    g = Formula(num_vars=m * n + n * (m - 1) + n * (n - 1) // 2)
    for a in range(m):                                   # (i)
        g.add_clause(mk_clause(p(a, i) for i in range(n)))
    for i in range(n):                                   # (ii)
        for a in range(m):
            for a2 in range(a + 1, m):
                g.add_clause(mk_clause([-p(a, i), -p(a2, i)]))
    for i in range(n):                                   # (iii)
        g.add_clause(mk_clause(q(i, c) for c in range(m - 1)))
    for i in range(n):                                   # (iv)
        for c in range(m - 1):
            for c2 in range(c + 1, m - 1):
                g.add_clause(mk_clause([-q(i, c), -q(i, c2)]))
    for i in range(n):                                   # (v)
        for j in range(i + 1, n):
            for a in range(m):
                for a2 in range(m):
                    if a != a2:
                        g.add_clause(mk_clause([-p(a, i), -p(a2, j), x(i, j)]))
    for i in range(n):                                   # (vi)
        for j in range(i + 1, n):
            for c in range(m - 1):
                g.add_clause(mk_clause([-q(i, c), -q(j, c), -x(i, j)]))
    return g


# ---------------------------------------------------------------------------
# graphs and Tseitin formulas
# ---------------------------------------------------------------------------

@dataclass
class Graph:
    n: int
    edges: list[tuple[int, int]] = field(default_factory=list)

    def __post_init__(self):
        norm = []
        seen = set()
        for u, v in self.edges:
            if u == v:
                raise ValueError("self-loops not supported")
            e = (u, v) if u < v else (v, u)
            if e in seen:
                raise ValueError(f"duplicate edge {e}")
            if not (0 <= e[0] < self.n and 0 <= e[1] < self.n):
                raise ValueError(f"edge {e} out of range")
            seen.add(e)
            norm.append(e)
        self.edges = sorted(norm)

    def adjacency(self) -> list[list[tuple[int, int]]]:
        adj: list[list[tuple[int, int]]] = [[] for _ in range(self.n)]
        for e in self.edges:
            u, v = e
            adj[u].append(e)
            adj[v].append(e)
        return adj

    def degrees(self) -> list[int]:
        deg = [0] * self.n
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg


def edge_vars(graph: Graph) -> dict[tuple[int, int], int]:
    return {e: i + 1 for i, e in enumerate(graph.edges)}


def default_charge(graph: Graph) -> list[int]:
    """Vertex 0 carries charge 1, all others 0 (odd total)."""
    charge = [0] * graph.n
    if graph.n:
        charge[0] = 1
    return charge


def parity_clauses(lits: Sequence[int], charge: int) -> list[Clause]:
    """CNF of 'the parity of these literals equals charge'.

    Degree d contributes 2^(d-1) clauses; degree 0 with charge 1 is the
    empty clause.
    """
    d = len(lits)
    if d == 0:
        return [()] if charge else []
    out = []
    for bits in range(1 << d):
        if bin(bits).count("1") % 2 == charge:
            continue
        out.append(mk_clause(-lits[t] if (bits >> t) & 1 else lits[t]
                             for t in range(d)))
    return out


def gen_tseitin(graph: Graph, charge: Sequence[int] | None = None) -> Formula:
    """Tseitin contradiction: per-vertex parity constraints, odd total charge."""
    if charge is None:
        charge = default_charge(graph)
    if len(charge) != graph.n:
        raise ValueError("charge vector length mismatch")
    if sum(charge) % 2 == 0:
        raise ValueError("total charge must be odd")
    ev = edge_vars(graph)
    g = Formula(num_vars=len(graph.edges))
    for v in range(graph.n):
        incident = [ev[e] for e in graph.edges if v in e]
        for c in parity_clauses(incident, charge[v] % 2):
            g.add_clause(c)
    return g


def gen_xm(m: int, offset: int = 0) -> Formula:
    """The dormant-variable gadget: clauses {y v x_1 v ... v x_m, y}."""
    if m < 1:
        raise ValueError("need m >= 1")
    y = offset + m + 1
    g = Formula(num_vars=y)
    g.add_clause(mk_clause([y] + [offset + i for i in range(1, m + 1)]))
    g.add_clause((y,))
    return g


# ---------------------------------------------------------------------------
# graph builders
# ---------------------------------------------------------------------------

def grid(a: int, b: int) -> Graph:
    if a < 1 or b < 1:
        raise ValueError("need positive grid dimensions")
    edges = []
    for r in range(a):
        for c in range(b):
            v = r * b + c
            if c + 1 < b:
                edges.append((v, v + 1))
            if r + 1 < a:
                edges.append((v, v + b))
    return Graph(a * b, edges)


def wheel(n: int) -> Graph:
    """Hub vertex 0 joined to an n-cycle on vertices 1..n (hub degree n)."""
    if n < 3:
        raise ValueError("need n >= 3")
    edges = [(0, i) for i in range(1, n + 1)]
    edges += [(i, i % n + 1) for i in range(1, n + 1)]
    return Graph(n + 1, edges)


def random_regular(n: int, d: int, seed: int) -> Graph:
    """A simple d-regular graph on n vertices via the configuration model."""
    if n * d % 2 == 1:
        raise ValueError("n*d must be even")
    if d >= n:
        raise ValueError("need d < n")
    rng = random.Random(seed)
    for _ in range(10000):
        stubs = [v for v in range(n) for _ in range(d)]
        rng.shuffle(stubs)
        edges = set()
        ok = True
        for i in range(0, len(stubs), 2):
            u, v = stubs[i], stubs[i + 1]
            if u == v:
                ok = False
                break
            e = (u, v) if u < v else (v, u)
            if e in edges:
                ok = False
                break
            edges.add(e)
        if ok:
            return Graph(n, sorted(edges))
    raise RuntimeError("failed to sample a simple regular graph")


# ---------------------------------------------------------------------------
# graph file format:  v <count> / e <u> <w> / g <v> <0|1>
# ---------------------------------------------------------------------------

def parse_graph(src: "str | TextIO") -> tuple[Graph, list[int] | None]:
    import io as _io
    stream = _io.StringIO(src) if isinstance(src, str) else src
    n = None
    edges: list[tuple[int, int]] = []
    charges: dict[int, int] = {}
    for no, raw in enumerate(stream, start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "v" and len(parts) == 2:
            n = int(parts[1])
        elif parts[0] == "e" and len(parts) == 3:
            edges.append((int(parts[1]), int(parts[2])))
        elif parts[0] == "g" and len(parts) == 3:
            charges[int(parts[1])] = int(parts[2])
        else:
            raise ValueError(f"graph file line {no}: bad record {line!r}")
    if n is None:
        raise ValueError("graph file missing 'v <count>' record")
    graph = Graph(n, edges)
    charge = None
    if charges:
        charge = [0] * n
        for v, c in charges.items():
            charge[v] = c
    return graph, charge


def write_graph(graph: Graph, charge: Sequence[int] | None = None) -> str:
    out = [f"v {graph.n}"]
    out += [f"e {u} {v}" for u, v in graph.edges]
    if charge is not None:
        out += [f"g {v} {charge[v]}" for v in range(graph.n) if charge[v]]
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# obfuscation gadgets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OrGadget:
    kind: str
    x_vars: tuple[int, ...]     # x_1 .. x_m; x_1 reuses the original variable


@dataclass(frozen=True)
class XorGadget:
    kind: str
    x_vars: tuple[int, ...]


@dataclass(frozen=True)
class LiftGadget:
    kind: str
    y_vars: tuple[int, ...]     # index bits, y_1 = LSB of the index
    z_vars: tuple[int, ...]     # z_0 .. z_{2^l - 1}


def gadget_to_dict(g) -> dict:
    from dataclasses import asdict
    return asdict(g)


def gadget_from_dict(d: dict):
    kind = d["kind"]
    if kind == "orify":
        return OrGadget(kind, tuple(d["x_vars"]))
    if kind == "xorify":
        return XorGadget(kind, tuple(d["x_vars"]))
    if kind == "lift":
        return LiftGadget(kind, tuple(d["y_vars"]), tuple(d["z_vars"]))
    raise ValueError(f"unknown gadget kind {kind!r}")


def _require_var(g: Formula, x: int) -> None:
    if x not in g.occurring_vars():
        raise ValueError(f"variable {x} does not occur in the formula")


def orify(g: Formula, x: int, m: int) -> tuple[Formula, OrGadget]:
    """m-fold orification of x: x-clauses widen to x_1 v ... v x_m, each
    not-x clause splits into m copies."""
    _require_var(g, x)
    if m < 1:
        raise ValueError("need m >= 1")
    xs = (x,) + tuple(g.num_vars + i for i in range(1, m))
    out = Formula(num_vars=max(g.num_vars, xs[-1] if len(xs) > 1 else 0))
    for c in g.live():
        if x in c:
            out.add_clause(mk_clause([l for l in c if l != x] + list(xs)))
        elif -x in c:
            rest = [l for l in c if l != -x]
            for xi in xs:
                out.add_clause(mk_clause(rest + [-xi]))
        else:
            out.add_clause(c)
    return out, OrGadget("orify", xs)


def xorify(g: Formula, x: int, m: int) -> tuple[Formula, XorGadget]:
    """m-fold xorification of x: each polarity expands into the 2^(m-1)
    clauses of the corresponding parity condition."""
    _require_var(g, x)
    if m < 1:
        raise ValueError("need m >= 1")
    xs = (x,) + tuple(g.num_vars + i for i in range(1, m))
    out = Formula(num_vars=max(g.num_vars, xs[-1] if len(xs) > 1 else 0))
    for c in g.live():
        if x in c or -x in c:
            want = 1 if x in c else 0
            rest = [l for l in c if l != x and l != -x]
            for pc in parity_clauses(xs, want):
                out.add_clause(mk_clause(list(pc) + rest))
        else:
            out.add_clause(c)
    return out, XorGadget("xorify", xs)


def lift_index(g: Formula, x: int, ell: int) -> tuple[Formula, LiftGadget]:
    """Index-gadget lifting of x: the index bits y pick which z_i carries x."""
    _require_var(g, x)
    if ell < 1:
        raise ValueError("need ell >= 1")
    ys = tuple(g.num_vars + j for j in range(1, ell + 1))
    zs = tuple(g.num_vars + ell + i + 1 for i in range(1 << ell))
    out = Formula(num_vars=zs[-1])

    def not_to(i: int) -> list[int]:
        return [-ys[j] if (i >> j) & 1 else ys[j] for j in range(ell)]

    for c in g.live():
        if x in c or -x in c:
            z_sign = 1 if x in c else -1
            rest = [l for l in c if l != x and l != -x]
            for i in range(1 << ell):
                out.add_clause(mk_clause(not_to(i) + [z_sign * zs[i]] + rest))
        else:
            out.add_clause(c)
    return out, LiftGadget("lift", ys, zs)
