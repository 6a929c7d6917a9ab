"""Valued graphs and quivers, symmetrizable (Borcherds-)Cartan matrices, block doublings.

Vertex ids are strings; product vertices are canonical pairs serialized as
"a×b", which keeps matrix layouts deterministic.  The compatibility equation
enforced throughout is d_ij * d_i = d_ji * d_j, equivalently
d_i * a_ij = d_j * a_ji for the associated Cartan matrix, so vertex weights
double as both the minimal symmetrizer and the field extension degrees of a
species.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Mapping, Sequence

PAIR_SEP = "×"  # the product-vertex separator "×"


class QuiverStructureError(Exception):
    """Malformed valued graph or quiver data."""


class NotSymmetrizable(Exception):
    """No positive integer symmetrizer exists."""


class ProductNotValued(Exception):
    """Product construction produced invalid valuations (cannot happen for valid inputs)."""


class DivisibilityViolation(Exception):
    """2(i,j)/(i,i) failed to be an integer for a real index."""


class ValuedGraph:
    """Finite valued graph: vertex weights d_i and edge valuations d_ij.

    Invariants: d_ii = 0, d_ij = 0 iff d_ji = 0, d_ij*d_i = d_ji*d_j, and the
    weights have no common divisor.
    """

    def __init__(self, vertices: Sequence[str], d_edge: Mapping[tuple[str, str], int],
                 d_vertex: Mapping[str, int]):
        self.vertices = tuple(str(v) for v in vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise QuiverStructureError("duplicate vertex ids")
        vset = set(self.vertices)
        self.d_vertex = {}
        for v in self.vertices:
            d = int(d_vertex.get(v, 0))
            if d < 1:
                raise QuiverStructureError(f"vertex weight d_{v} must be a positive integer")
            self.d_vertex[v] = d
        self.d_edge = {}
        for (i, j), val in d_edge.items():
            if i not in vset or j not in vset:
                raise QuiverStructureError(f"edge ({i},{j}) uses unknown vertices")
            if i == j and val:
                raise QuiverStructureError(f"nonzero d_{{{i}{i}}} (loops are forbidden)")
            if val < 0:
                raise QuiverStructureError("edge valuations must be nonnegative")
            if val:
                self.d_edge[(i, j)] = int(val)
        for (i, j), val in self.d_edge.items():
            rev = self.d_edge.get((j, i), 0)
            if rev == 0:
                raise QuiverStructureError(f"d_{{{i}{j}}} nonzero but d_{{{j}{i}}} zero")
            if val * self.d_vertex[i] != rev * self.d_vertex[j]:
                raise QuiverStructureError(
                    f"valuation mismatch at ({i},{j}): {val}*{self.d_vertex[i]} != {rev}*{self.d_vertex[j]}")
        g = 0
        for d in self.d_vertex.values():
            g = gcd(g, d)
        if g != 1:
            raise QuiverStructureError("vertex weights must have gcd 1 (minimal symmetrizer)")

    def d(self, i: str, j: str) -> int:
        return self.d_edge.get((i, j), 0)

    def edge_pairs(self) -> list[tuple[str, str]]:
        """Unordered edges, reported once each in vertex order."""
        index = {v: k for k, v in enumerate(self.vertices)}
        return sorted(
            {tuple(sorted((i, j), key=index.__getitem__)) for (i, j) in self.d_edge},
            key=lambda p: (index[p[0]], index[p[1]]))

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        seen = {self.vertices[0]}
        stack = [self.vertices[0]]
        while stack:
            v = stack.pop()
            for (i, j) in self.d_edge:
                if i == v and j not in seen:
                    seen.add(j)
                    stack.append(j)
        return len(seen) == len(self.vertices)

    def __eq__(self, other):
        if not isinstance(other, ValuedGraph):
            return NotImplemented
        return (self.vertices == other.vertices and self.d_edge == other.d_edge
                and self.d_vertex == other.d_vertex)

    def __repr__(self):
        return f"ValuedGraph({list(self.vertices)}, {self.d_edge}, {self.d_vertex})"


class ValuedQuiver:
    """Valued graph plus an orientation: one arrow per underlying edge.

    Connectivity is required; absence of oriented cycles is required unless
    explicitly waived (module enumeration re-asserts it).
    """

    def __init__(self, graph: ValuedGraph, arrows: Sequence[tuple[str, str]],
                 allow_cycles: bool = False):
        self.graph = graph
        self.arrows = tuple((str(s), str(t)) for s, t in arrows)
        pairs = [frozenset(a) for a in self.arrows]
        if len(set(pairs)) != len(pairs):
            raise QuiverStructureError("parallel or opposite duplicate arrows")
        want = {frozenset(p) for p in graph.edge_pairs()}
        if set(pairs) != want:
            raise QuiverStructureError("arrow set does not match the valued edges")
        for s, t in self.arrows:
            if graph.d(s, t) == 0:
                raise QuiverStructureError(f"arrow ({s},{t}) has zero valuation")
        if not graph.is_connected():
            raise QuiverStructureError("quiver must be connected")
        if not allow_cycles and self.has_oriented_cycle():
            raise QuiverStructureError("quiver contains an oriented cycle")

    def has_oriented_cycle(self) -> bool:
        succ: dict[str, list[str]] = {v: [] for v in self.graph.vertices}
        for s, t in self.arrows:
            succ[s].append(t)
        state = {v: 0 for v in self.graph.vertices}  # 0 new, 1 active, 2 done

        def dfs(v: str) -> bool:
            state[v] = 1
            for w in succ[v]:
                if state[w] == 1 or (state[w] == 0 and dfs(w)):
                    return True
            state[v] = 2
            return False

        return any(state[v] == 0 and dfs(v) for v in self.graph.vertices)

    def __eq__(self, other):
        if not isinstance(other, ValuedQuiver):
            return NotImplemented
        return self.graph == other.graph and self.arrows == other.arrows

    def __repr__(self):
        return f"ValuedQuiver({self.graph!r}, arrows={list(self.arrows)})"


@dataclass(frozen=True)
class CartanMatrix:
    """Symmetrizable generalized Cartan matrix with named rows/columns."""

    ids: tuple[str, ...]
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.ids)
        if len(self.entries) != n or any(len(r) != n for r in self.entries):
            raise QuiverStructureError("entries must be square and match ids")
        for i in range(n):
            if self.entries[i][i] != 2:
                raise QuiverStructureError("diagonal entries must equal 2")
            for j in range(n):
                if i != j:
                    if self.entries[i][j] > 0:
                        raise QuiverStructureError("off-diagonal entries must be <= 0")
                    if (self.entries[i][j] == 0) != (self.entries[j][i] == 0):
                        raise QuiverStructureError("zero pattern must be symmetric")
        symmetrize(self.entries)  # raises NotSymmetrizable if none exists

    def __getitem__(self, ij):
        return self.entries[ij[0]][ij[1]]


@dataclass(frozen=True)
class BorcherdsCartanMatrix:
    """Borcherds-Cartan matrix: imaginary indices may have non-positive diagonal."""

    ids: tuple[str, ...]
    entries: tuple[tuple[int, ...], ...]
    real_flags: tuple[bool, ...]

    def __post_init__(self):
        n = len(self.ids)
        if len(self.entries) != n or any(len(r) != n for r in self.entries):
            raise QuiverStructureError("entries must be square and match ids")
        if len(self.real_flags) != n:
            raise QuiverStructureError("real_flags must match ids")
        for i in range(n):
            if self.real_flags[i] and self.entries[i][i] != 2:
                raise QuiverStructureError("real diagonal entries must equal 2")
            if not self.real_flags[i] and self.entries[i][i] > 0:
                raise QuiverStructureError("imaginary diagonal entries must be <= 0")
            for j in range(n):
                if i != j and self.entries[i][j] > 0:
                    raise QuiverStructureError("off-diagonal entries must be <= 0")


def symmetrize(entries: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Minimal positive integer vector d with d_i a_ij = d_j a_ji.

    Spanning-tree propagation on each connected component of the nonzero
    pattern, followed by integer scaling; disconnected input is normalized
    per component.
    """
    n = len(entries)
    for i in range(n):
        for j in range(n):
            if (entries[i][j] == 0) != (entries[j][i] == 0):
                raise NotSymmetrizable("zero pattern is not symmetric")
    vals: list[Fraction | None] = [None] * n
    for root in range(n):
        if vals[root] is not None:
            continue
        comp = [root]
        vals[root] = Fraction(1)
        queue = [root]
        while queue:
            i = queue.pop(0)
            for j in range(n):
                if j == i or entries[i][j] == 0:
                    continue
                forced = vals[i] * Fraction(entries[i][j], entries[j][i])
                if forced <= 0:
                    raise NotSymmetrizable("no positive symmetrizer")
                if vals[j] is None:
                    vals[j] = forced
                    comp.append(j)
                    queue.append(j)
                elif vals[j] != forced:
                    raise NotSymmetrizable("inconsistent ratio constraints")
        lcm_den = 1
        for k in comp:
            lcm_den = lcm_den * vals[k].denominator // gcd(lcm_den, vals[k].denominator)
        ints = [int(vals[k] * lcm_den) for k in comp]
        g = 0
        for x in ints:
            g = gcd(g, x)
        for k, x in zip(comp, ints):
            vals[k] = Fraction(x // g)
    out = tuple(int(v) for v in vals)
    for i in range(n):
        for j in range(n):
            if out[i] * entries[i][j] != out[j] * entries[j][i]:
                raise NotSymmetrizable("propagated weights fail a cross constraint")
    return out


def symmetrizer(c: CartanMatrix) -> tuple[int, ...]:
    """Minimal symmetrizer of a Cartan matrix."""
    return symmetrize(c.entries)


def cartan_from_graph(g: ValuedGraph) -> CartanMatrix:
    """a_ii = 2, a_ij = -d_ij."""
    n = len(g.vertices)
    rows = []
    for i, vi in enumerate(g.vertices):
        rows.append(tuple(2 if i == j else -g.d(vi, vj) for j, vj in enumerate(g.vertices)))
    return CartanMatrix(g.vertices, tuple(rows))


def graph_from_cartan(c: CartanMatrix) -> ValuedGraph:
    """Inverse of cartan_from_graph; vertex weights are the minimal symmetrizer."""
    d = symmetrizer(c)
    edges = {}
    for i, vi in enumerate(c.ids):
        for j, vj in enumerate(c.ids):
            if i != j and c.entries[i][j]:
                edges[(vi, vj)] = -c.entries[i][j]
    return ValuedGraph(c.ids, edges, dict(zip(c.ids, d)))


def c_2n(c: CartanMatrix, n: int) -> CartanMatrix:
    """Block matrix [[C, -2n Id], [-2n Id, C]] on doubled ids +×i, -×i."""
    if n < 1:
        raise ValueError("n must be a positive integer")
    k = len(c.ids)
    ids = tuple(f"+{PAIR_SEP}{v}" for v in c.ids) + tuple(f"-{PAIR_SEP}{v}" for v in c.ids)
    rows = []
    for i in range(2 * k):
        row = []
        for j in range(2 * k):
            bi, ii = divmod(i, k)
            bj, jj = divmod(j, k)
            if bi == bj:
                row.append(c.entries[ii][jj])
            else:
                row.append(-2 * n if ii == jj else 0)
        rows.append(tuple(row))
    return CartanMatrix(ids, tuple(rows))


def c_pm(c: CartanMatrix) -> CartanMatrix:
    """The doubling with -2 Id off-blocks (the n = 1 case of c_2n)."""
    return c_2n(c, 1)


def product_quiver(a: ValuedQuiver, b: ValuedQuiver) -> ValuedQuiver:
    """Product valued quiver on I x I' with arrows Ω x I' followed by I x Ω'."""
    ga, gb = a.graph, b.graph
    vertices = [f"{i}{PAIR_SEP}{j}" for i in ga.vertices for j in gb.vertices]
    d_vertex = {f"{i}{PAIR_SEP}{j}": ga.d_vertex[i] * gb.d_vertex[j]
                for i in ga.vertices for j in gb.vertices}
    d_edge: dict[tuple[str, str], int] = {}
    for (i, j) in ga.d_edge:
        for ip in gb.vertices:
            d_edge[(f"{i}{PAIR_SEP}{ip}", f"{j}{PAIR_SEP}{ip}")] = ga.d(i, j)
    for i in ga.vertices:
        for (ip, jp) in gb.d_edge:
            d_edge[(f"{i}{PAIR_SEP}{ip}", f"{i}{PAIR_SEP}{jp}")] = gb.d(ip, jp)
    arrows = []
    for (s, t) in a.arrows:
        for ip in gb.vertices:
            arrows.append((f"{s}{PAIR_SEP}{ip}", f"{t}{PAIR_SEP}{ip}"))
    for i in ga.vertices:
        for (s, t) in b.arrows:
            arrows.append((f"{i}{PAIR_SEP}{s}", f"{i}{PAIR_SEP}{t}"))
    try:
        return ValuedQuiver(ValuedGraph(vertices, d_edge, d_vertex), arrows)
    except QuiverStructureError as exc:
        raise ProductNotValued(str(exc)) from exc


def pm_base_quiver() -> ValuedQuiver:
    """The one-arrow (2,2)-valued quiver + -> -."""
    g = ValuedGraph(("+", "-"), {("+", "-"): 2, ("-", "+"): 2}, {"+": 1, "-": 1})
    return ValuedQuiver(g, [("+", "-")])


def pm_quiver(q: ValuedQuiver) -> ValuedQuiver:
    """Two copies of q joined by (2,2) bridge arrows from positive to negative."""
    return product_quiver(pm_base_quiver(), q)


def borcherds_from_form(index_data: Sequence[tuple[str, int, bool]],
                        pairings: Sequence[Sequence[int]]) -> BorcherdsCartanMatrix:
    """Borcherds-Cartan matrix from a symmetric pairing.

    Real rows (is_simple, positive self pairing) use 2(i,j)/(i,i); imaginary
    rows use (i,j) itself.
    """
    n = len(index_data)
    if len(pairings) != n or any(len(r) != n for r in pairings):
        raise QuiverStructureError("pairings must be square and match index_data")
    for i in range(n):
        for j in range(n):
            if pairings[i][j] != pairings[j][i]:
                raise QuiverStructureError("pairings must be symmetric")
    ids = tuple(d[0] for d in index_data)
    flags = tuple(bool(d[2]) for d in index_data)
    for (ident, self_pair, simple), prow in zip(index_data, pairings):
        if (self_pair > 0) != simple:
            raise QuiverStructureError(f"self pairing of {ident} inconsistent with simplicity flag")
        if prow[ids.index(ident)] != self_pair:
            raise QuiverStructureError(f"self pairing of {ident} disagrees with the matrix diagonal")
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            if flags[i]:
                num = 2 * pairings[i][j]
                if num % pairings[i][i]:
                    raise DivisibilityViolation(
                        f"2({ids[i]},{ids[j]}) = {num} not divisible by ({ids[i]},{ids[i]}) = {pairings[i][i]}")
                row.append(num // pairings[i][i])
            else:
                row.append(pairings[i][j])
        rows.append(tuple(row))
    return BorcherdsCartanMatrix(ids, tuple(rows), flags)


def standard_quiver(name: str) -> ValuedQuiver:
    """Small fixed corpus: a1, a2, a3, b2, kronecker."""
    name = name.lower()
    if name == "a1":
        return ValuedQuiver(ValuedGraph(("1",), {}, {"1": 1}), [])
    if name == "a2":
        g = ValuedGraph(("1", "2"), {("1", "2"): 1, ("2", "1"): 1}, {"1": 1, "2": 1})
        return ValuedQuiver(g, [("1", "2")])
    if name == "a3":
        g = ValuedGraph(("1", "2", "3"),
                        {("1", "2"): 1, ("2", "1"): 1, ("2", "3"): 1, ("3", "2"): 1},
                        {"1": 1, "2": 1, "3": 1})
        return ValuedQuiver(g, [("1", "2"), ("2", "3")])
    if name == "b2":
        g = ValuedGraph(("1", "2"), {("1", "2"): 1, ("2", "1"): 2}, {"1": 2, "2": 1})
        return ValuedQuiver(g, [("1", "2")])
    if name == "kronecker":
        g = ValuedGraph(("1", "2"), {("1", "2"): 2, ("2", "1"): 2}, {"1": 1, "2": 1})
        return ValuedQuiver(g, [("1", "2")])
    raise ValueError(f"unknown quiver name {name!r}")


def quiver_to_json(q: ValuedQuiver) -> str:
    """Canonical JSON serialization (sorted keys, 2-space indent, trailing newline)."""
    data = {
        "vertices": [{"id": v, "d": q.graph.d_vertex[v]} for v in q.graph.vertices],
        "arrows": [
            {"src": s, "tgt": t, "src_val": q.graph.d(s, t), "dst_val": q.graph.d(t, s)}
            for s, t in q.arrows
        ],
    }
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


def quiver_from_json(text: str, allow_cycles: bool = False) -> ValuedQuiver:
    data = json.loads(text)
    try:
        vertices = [str(v["id"]) for v in data["vertices"]]
        d_vertex = {str(v["id"]): int(v["d"]) for v in data["vertices"]}
        d_edge = {}
        arrows = []
        for a in data["arrows"]:
            s, t = str(a["src"]), str(a["tgt"])
            d_edge[(s, t)] = int(a["src_val"])
            d_edge[(t, s)] = int(a["dst_val"])
            arrows.append((s, t))
    except (KeyError, TypeError) as exc:
        raise QuiverStructureError(f"malformed quiver spec: {exc}") from exc
    return ValuedQuiver(ValuedGraph(vertices, d_edge, d_vertex), arrows, allow_cycles=allow_cycles)
