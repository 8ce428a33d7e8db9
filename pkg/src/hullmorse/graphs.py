"""Finite simple graphs and the combinatorial constructions built on them.

Vertices are integers (labels are preserved by all operations, so induced
subgraphs remember their original names).  Everything here is a pure
function of immutable values.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional, Union

from .errors import InvalidInputError, PreconditionError

Edge = tuple[int, int]


def _edge(u: int, v: int) -> Edge:
    if u == v:
        raise InvalidInputError(f"loop at vertex {u}")
    return (u, v) if u < v else (v, u)


class Graph:
    """A finite simple graph with integer-labeled vertices."""

    __slots__ = ("vertices", "edges", "adj", "_hash")

    def __init__(self, vertices: Iterable[int], edges: Iterable[Iterable[int]] = ()):
        vs = tuple(sorted(set(vertices)))
        es = set()
        for e in edges:
            u, v = e
            es.add(_edge(u, v))
        vset = set(vs)
        for u, v in es:
            if u not in vset or v not in vset:
                raise InvalidInputError(f"edge ({u},{v}) has endpoint outside vertex set")
        self.vertices = vs
        self.edges = tuple(sorted(es))
        adj: dict[int, set[int]] = {v: set() for v in vs}
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        self.adj = {v: frozenset(ns) for v, ns in adj.items()}
        self._hash = hash((self.vertices, self.edges))

    @property
    def n(self) -> int:
        return len(self.vertices)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj.get(u, ())

    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Graph)
            and self.vertices == other.vertices
            and self.edges == other.edges
        )

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Graph(vertices={list(self.vertices)}, edges={list(self.edges)})"


def graph(n: int, edges: Iterable[Iterable[int]] = ()) -> Graph:
    """Graph on vertices 0..n-1."""
    return Graph(range(n), edges)


def cycle(n: int) -> Graph:
    return graph(n, [(i, (i + 1) % n) for i in range(n)])


def path(n: int) -> Graph:
    return graph(n, [(i, i + 1) for i in range(n - 1)])


def complete(n: int) -> Graph:
    return graph(n, itertools.combinations(range(n), 2))


def union(g1: Graph, g2: Graph) -> Graph:
    return Graph(g1.vertices + g2.vertices, g1.edges + g2.edges)


def disjoint_union(g1: Graph, g2: Graph) -> Graph:
    """Relabels g2's vertices above g1's."""
    shift = (max(g1.vertices) + 1 if g1.vertices else 0) - (min(g2.vertices) if g2.vertices else 0)
    return Graph(
        g1.vertices + tuple(v + shift for v in g2.vertices),
        g1.edges + tuple((u + shift, v + shift) for u, v in g2.edges),
    )


def intersection(g1: Graph, g2: Graph) -> Graph:
    vs = set(g1.vertices) & set(g2.vertices)
    es = set(g1.edges) & set(g2.edges)
    return Graph(vs, es)


def complement(g: Graph) -> Graph:
    """Same vertices, edge present iff absent in g."""
    es = [
        (u, v)
        for u, v in itertools.combinations(g.vertices, 2)
        if not g.has_edge(u, v)
    ]
    return Graph(g.vertices, es)


def induced(g: Graph, u: Iterable[int]) -> Graph:
    """Subgraph induced on u; vertex labels preserved.  Empty u is allowed."""
    uset = set(u)
    if not uset <= set(g.vertices):
        raise InvalidInputError(f"vertices {sorted(uset - set(g.vertices))} not in graph")
    es = [(a, b) for a, b in g.edges if a in uset and b in uset]
    return Graph(uset, es)


def remove_vertex(g: Graph, v: int) -> Graph:
    return induced(g, set(g.vertices) - {v})


def components(g: Graph) -> list[frozenset[int]]:
    """Maximal connected vertex sets, sorted by minimum element."""
    seen: set[int] = set()
    comps = []
    for root in g.vertices:
        if root in seen:
            continue
        comp = {root}
        stack = [root]
        while stack:
            x = stack.pop()
            for y in g.adj[x]:
                if y not in comp:
                    comp.add(y)
                    stack.append(y)
        seen |= comp
        comps.append(frozenset(comp))
    return comps


def is_connected(g: Graph) -> bool:
    """Vacuously true for the empty graph."""
    return len(components(g)) <= 1


def is_bipartite(g: Graph) -> bool:
    color: dict[int, int] = {}
    for root in g.vertices:
        if root in color:
            continue
        color[root] = 0
        stack = [root]
        while stack:
            x = stack.pop()
            for y in g.adj[x]:
                if y not in color:
                    color[y] = 1 - color[x]
                    stack.append(y)
                elif color[y] == color[x]:
                    return False
    return True


def is_triangle_free(g: Graph) -> bool:
    for u, v in g.edges:
        if g.adj[u] & g.adj[v]:
            return False
    return True


def is_independent(g: Graph, u: Iterable[int]) -> bool:
    us = sorted(set(u))
    return all(not g.has_edge(a, b) for a, b in itertools.combinations(us, 2))


@dataclass(frozen=True)
class GraphPredicates:
    connected: bool
    bipartite: bool
    triangle_free: bool
    components: tuple[frozenset[int], ...]
    degree_classes: dict[int, frozenset[int]] = field(hash=False)


def predicates(g: Graph) -> GraphPredicates:
    classes: dict[int, set[int]] = {}
    for v in g.vertices:
        classes.setdefault(g.degree(v), set()).add(v)
    return GraphPredicates(
        connected=is_connected(g),
        bipartite=is_bipartite(g),
        triangle_free=is_triangle_free(g),
        components=tuple(components(g)),
        degree_classes={d: frozenset(vs) for d, vs in sorted(classes.items())},
    )


@dataclass(frozen=True)
class SubgraphTriple:
    """Star-neighborhood part, its complement part, and their union."""

    argument: frozenset[int]
    n_part: Graph
    c_part: Graph
    nc: Graph


def nbhd(g: Graph, x: Union[int, Iterable[int]]) -> SubgraphTriple:
    """Neighborhood/complement decomposition for a vertex or independent set.

    A 2-element independent set is the same thing as an edge of the
    complement graph, so that case needs no separate entry point.
    """
    if isinstance(x, int):
        arg = frozenset([x])
    else:
        arg = frozenset(x)
    if not arg:
        raise InvalidInputError("empty argument")
    if not arg <= set(g.vertices):
        raise InvalidInputError("argument not a subset of the vertex set")
    if not is_independent(g, arg):
        raise InvalidInputError(f"{sorted(arg)} is not independent")
    n_vertices: set[int] = set()
    n_edges: list[Edge] = []
    for v in sorted(arg):
        n_vertices.add(v)
        for u in g.adj[v]:
            n_vertices.add(u)
            n_edges.append(_edge(u, v))
    n_part = Graph(n_vertices, n_edges)
    c_part = induced(g, set(g.vertices) - n_vertices)
    nc = union(n_part, c_part)
    return SubgraphTriple(argument=arg, n_part=n_part, c_part=c_part, nc=nc)


@dataclass(frozen=True)
class FundamentalData:
    ordinary_vertices: frozenset[int]
    regular_vertices: frozenset[int]
    fundamental_vertices: frozenset[int]
    fundamental_edges: frozenset[Edge]
    acceptable_sets: tuple[frozenset[int], ...]
    fundamental_sets: tuple[frozenset[int], ...]


def independent_sets(g: Graph) -> list[frozenset[int]]:
    """All nonempty independent sets, by backtracking in vertex order."""
    out: list[frozenset[int]] = []

    def extend(current: list[int], candidates: list[int]) -> None:
        for i, v in enumerate(candidates):
            nxt = current + [v]
            out.append(frozenset(nxt))
            extend(nxt, [u for u in candidates[i + 1 :] if u not in g.adj[v]])

    extend([], list(g.vertices))
    return out


def _no_component_bipartite(c: Graph) -> bool:
    # Vacuously true when c has no vertices.
    return all(not is_bipartite(induced(c, comp)) for comp in components(c))


def classify_sets(g: Graph) -> FundamentalData:
    """Ordinary/regular vertices and acceptable/fundamental independent sets.

    Exponential enumeration over independent sets; fine up to ~12 vertices.
    """
    ordinary = frozenset(v for v in g.vertices if is_connected(remove_vertex(g, v)))
    regular = frozenset(
        v for v in g.vertices if _no_component_bipartite(remove_vertex(g, v))
    )
    acceptable = []
    fundamental = []
    for u in independent_sets(g):
        t = nbhd(g, u)
        if not is_connected(t.n_part):
            continue
        if is_connected(t.c_part) and t.c_part.edges:
            acceptable.append(u)
        if _no_component_bipartite(t.c_part):
            fundamental.append(u)
    key = lambda s: tuple(sorted(s))
    return FundamentalData(
        ordinary_vertices=ordinary,
        regular_vertices=regular,
        fundamental_vertices=frozenset(u for s in fundamental if len(s) == 1 for u in s),
        fundamental_edges=frozenset(tuple(sorted(s)) for s in fundamental if len(s) == 2),
        acceptable_sets=tuple(sorted(acceptable, key=key)),
        fundamental_sets=tuple(sorted(fundamental, key=key)),
    )


def fundamentality_fast(g: Graph) -> tuple[frozenset[int], frozenset[Edge]]:
    """Fundamental vertices and edges when the complement is triangle-free.

    Vertices: complement degree 0 or >= 3 (the complement part is a clique
    of that size, which has a bipartite component only for sizes 1 and 2).
    Edges of the complement: endpoints sharing a neighbor in g.
    """
    gbar = complement(g)
    if not is_triangle_free(gbar):
        raise PreconditionError("complement is not triangle-free")
    fverts = frozenset(v for v in g.vertices if gbar.degree(v) not in (1, 2))
    fedges = frozenset(
        (u, v) for u, v in gbar.edges if g.adj[u] & g.adj[v]
    )
    return fverts, fedges


# ---------------------------------------------------------------------------
# Multigraphs (loops and parallel edges), used for subdivision/contraction.


class Multigraph:
    """Undirected multigraph; a loop contributes 2 to its vertex's degree."""

    __slots__ = ("vertices", "edges")

    def __init__(self, vertices: Iterable, edges: Iterable[tuple]):
        self.vertices = tuple(sorted(set(vertices)))
        vset = set(self.vertices)
        norm = []
        for a, b in edges:
            if a not in vset or b not in vset:
                raise InvalidInputError(f"edge ({a},{b}) outside vertex set")
            norm.append((a, b) if a <= b else (b, a))
        self.edges = tuple(sorted(norm))

    @property
    def n(self) -> int:
        return len(self.vertices)

    def degree(self, v) -> int:
        return sum((a == v) + (b == v) for a, b in self.edges)

    def euler_characteristic(self) -> int:
        return len(self.vertices) - len(self.edges)

    def components(self) -> list[frozenset]:
        adj: dict = {v: set() for v in self.vertices}
        for a, b in self.edges:
            adj[a].add(b)
            adj[b].add(a)
        seen: set = set()
        comps = []
        for root in self.vertices:
            if root in seen:
                continue
            comp = {root}
            stack = [root]
            while stack:
                x = stack.pop()
                for y in adj[x]:
                    if y not in comp:
                        comp.add(y)
                        stack.append(y)
            seen |= comp
            comps.append(frozenset(comp))
        return comps

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Multigraph)
            and self.vertices == other.vertices
            and self.edges == other.edges
        )

    def __hash__(self) -> int:
        return hash((self.vertices, self.edges))

    def __repr__(self) -> str:
        return f"Multigraph(vertices={list(self.vertices)}, edges={list(self.edges)})"


# Node labels in the contracted subdivision: ("v", x) for an original vertex
# that survives, ("e", u, v) for a subdivision node of the edge uv.
FNode = tuple


def contracted_subdivision(
    gbar: Graph,
    s: Iterable[Edge],
    contraction_choice: Optional[dict[int, Edge]] = None,
) -> Multigraph:
    """Subdivide the edges in s, then contract one incident subdivision edge
    for every vertex of degree 1 or 2 in gbar.

    Every degree-1 or degree-2 vertex must lie on an edge of s.  The result
    is homotopy equivalent to gbar.  By default each low-degree vertex
    contracts toward its lexicographically smallest incident s-edge;
    `contraction_choice` overrides that per vertex.
    """
    sset = {_edge(u, v) for u, v in s}
    if not sset <= set(gbar.edges):
        raise InvalidInputError("s is not a subset of the edge set")
    low = sorted(v for v in gbar.vertices if 1 <= gbar.degree(v) <= 2)
    for v in low:
        if not any(v in e for e in sset):
            raise InvalidInputError(f"degree-{gbar.degree(v)} vertex {v} on no edge of s")

    # Subdivided graph: nodes ("v", x) and ("e", u, v); each s-edge becomes
    # two edges through its subdivision node.
    nodes = [("v", x) for x in gbar.vertices] + [("e", u, v) for u, v in sorted(sset)]
    edges = []
    for u, v in gbar.edges:
        if (u, v) in sset:
            edges.append((("v", u), ("e", u, v)))
            edges.append((("v", v), ("e", u, v)))
        else:
            edges.append((("v", u), ("v", v)))

    # One contraction per low-degree vertex, by union-find on nodes.
    parent: dict[FNode, FNode] = {x: x for x in nodes}

    def find(x: FNode) -> FNode:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    contracted = set()
    for v in low:
        if contraction_choice and v in contraction_choice:
            e = _edge(*contraction_choice[v])
            if e not in sset or v not in e:
                raise InvalidInputError(f"bad contraction choice {e} for vertex {v}")
        else:
            e = min(e for e in sset if v in e)
        enode = ("e", *e)
        contracted.add((("v", v), enode))
        # Merge toward the subdivision node so classes keep an "e" label.
        parent[find(("v", v))] = find(enode)

    # Representative label per class: its unique "e" node if any.
    rep: dict[FNode, FNode] = {}
    for x in nodes:
        r = find(x)
        if x[0] == "e" or r not in rep:
            rep[r] = x
    out_edges = []
    for a, b in edges:
        pair = (a, b) if (a, b) in contracted or (b, a) in contracted else None
        if pair is not None:
            continue
        out_edges.append((rep[find(a)], rep[find(b)]))
    return Multigraph(rep.values(), out_edges)


def two_disjoint_induced_cycles(gbar: Graph) -> Optional[frozenset[int]]:
    """A vertex set inducing exactly two disjoint cycles, or None.

    Checked by subset enumeration in increasing size; a qualifying induced
    subgraph is 2-regular with exactly two components.
    """
    vs = gbar.vertices
    for size in range(6, len(vs) + 1):
        for u in itertools.combinations(vs, size):
            h = induced(gbar, u)
            if any(h.degree(v) != 2 for v in u):
                continue
            if len(components(h)) == 2:
                return frozenset(u)
    return None


# ---------------------------------------------------------------------------
# Input formats: edge-list text and graph6.


def parse_edgelist(text: str) -> Graph:
    """First line "n m", then m lines "u v" with 0 <= u < v < n."""
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if not lines:
        raise InvalidInputError("empty edge list")
    try:
        n, m = map(int, lines[0].split())
        edges = [tuple(map(int, ln.split())) for ln in lines[1 : m + 1]]
    except ValueError as exc:
        raise InvalidInputError(f"malformed edge list: {exc}") from None
    if len(edges) != m:
        raise InvalidInputError(f"expected {m} edges, got {len(edges)}")
    for u, v in edges:
        if not (0 <= u < v < n):
            raise InvalidInputError(f"edge ({u},{v}) out of range for n={n}")
    return graph(n, edges)


def format_edgelist(g: Graph) -> str:
    relabel = {v: i for i, v in enumerate(g.vertices)}
    lines = [f"{g.n} {len(g.edges)}"]
    lines += [f"{relabel[u]} {relabel[v]}" for u, v in g.edges]
    return "\n".join(lines)


def parse_graph6(line: str) -> Graph:
    data = [ord(c) - 63 for c in line.strip()]
    if any(b < 0 or b > 63 for b in data):
        raise InvalidInputError(f"invalid graph6 string {line!r}")
    if data[0] == 63:
        n = (data[1] << 12) | (data[2] << 6) | data[3]
        data = data[4:]
    else:
        n = data[0]
        data = data[1:]
    bits = []
    for b in data:
        bits.extend((b >> k) & 1 for k in range(5, -1, -1))
    need = n * (n - 1) // 2
    if len(bits) < need:
        raise InvalidInputError("graph6 string too short")
    edges = []
    i = 0
    for v in range(1, n):
        for u in range(v):
            if bits[i]:
                edges.append((u, v))
            i += 1
    return graph(n, edges)


def format_graph6(g: Graph) -> str:
    relabel = {v: i for i, v in enumerate(g.vertices)}
    n = g.n
    if n > 62:
        raise InvalidInputError("graph6 output supported only up to 62 vertices")
    bits = []
    for v in range(1, n):
        for u in range(v):
            a, b = g.vertices[u], g.vertices[v]
            bits.append(1 if g.has_edge(a, b) else 0)
    while len(bits) % 6:
        bits.append(0)
    chars = [chr(n + 63)]
    for i in range(0, len(bits), 6):
        val = 0
        for bit in bits[i : i + 6]:
            val = (val << 1) | bit
        chars.append(chr(val + 63))
    return "".join(chars)


# ---------------------------------------------------------------------------
# Canonical form (lexicographically minimal adjacency encoding).


def canonical_key(g: Graph) -> tuple[int, tuple[int, ...]]:
    """(n, lex-min column-wise upper-triangle bits over all vertex orders).

    Branch-and-bound: vertices are placed one at a time, keeping only the
    orders whose next block of adjacency bits is minimal.
    """
    vs = list(g.vertices)
    n = len(vs)
    if n <= 1:
        return (n, ())
    m = len(g.edges)
    if m == 0:
        return (n, (0,) * (n * (n - 1) // 2))
    if m == n * (n - 1) // 2:
        return (n, (1,) * m)
    # Orders sharing the minimal bit prefix so far.
    placed_options = [(v,) for v in vs]
    bits_so_far: list[int] = []
    for k in range(1, n):
        scored = []
        for placed in placed_options:
            used = set(placed)
            for v in vs:
                if v in used:
                    continue
                block = tuple(1 if g.has_edge(p, v) else 0 for p in placed)
                scored.append((block, placed + (v,)))
        minblock = min(b for b, _ in scored)
        bits_so_far.extend(minblock)
        placed_options = [p for b, p in scored if b == minblock]
    return (n, tuple(bits_so_far))


def canonical_graph(g: Graph) -> Graph:
    """Representative with vertices 0..n-1 realizing the canonical key."""
    n, bits = canonical_key(g)
    # Bits are column-wise: for each new vertex k, bits against placed 0..k-1.
    edges = []
    i = 0
    for k in range(1, n):
        for p in range(k):
            if bits[i]:
                edges.append((p, k))
            i += 1
    return graph(n, edges)
