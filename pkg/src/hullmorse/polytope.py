"""Edge polytopes: facet rules, face lattices, exact geometry, incidence
signs.

A face is identified with its generator set, the set of graph edges whose
lattice points lie on it.  All geometry is exact integer/rational
arithmetic; the combinatorial facet rules are cross-checked against the
supporting-hyperplane oracle on small graphs by the test suite.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from . import graphs as gr
from .errors import InternalConsistencyError, InvalidInputError, PreconditionError
from .linalg import nullspace, strict_homogeneous_feasible

Edge = gr.Edge
Face = frozenset  # of edges


def polytope_vertices(g: gr.Graph) -> list[tuple[int, ...]]:
    """One 0/1/2-vector per edge: the indicator of the edge's endpoints,
    with coordinates indexed by sorted(V(g))."""
    pos = {v: i for i, v in enumerate(g.vertices)}
    pts = []
    for u, v in g.edges:
        p = [0] * len(g.vertices)
        p[pos[u]] += 1
        p[pos[v]] += 1
        pts.append(tuple(p))
    return pts


def _point(g: gr.Graph, e: Edge, pos: dict[int, int]) -> tuple[int, ...]:
    p = [0] * len(pos)
    p[pos[e[0]]] += 1
    p[pos[e[1]]] += 1
    return tuple(p)


class _Echelon:
    """Incremental integer row echelon for affine rank queries."""

    def __init__(self):
        self.rows: list[tuple[int, ...]] = []

    def _reduce(self, vec):
        vec = list(vec)
        for row in self.rows:
            lead = next(j for j, x in enumerate(row) if x)
            if vec[lead]:
                c, d = vec[lead], row[lead]
                vec = [a * d - b * c for a, b in zip(vec, row)]
        return vec

    def contains(self, vec) -> bool:
        return not any(self._reduce(vec))

    def add(self, vec) -> bool:
        """Insert if independent; returns whether the rank grew."""
        red = self._reduce(vec)
        if any(red):
            self.rows.append(tuple(red))
            return True
        return False


def affine_dim(points) -> int:
    """Dimension of the affine hull; -1 for no points."""
    pts = list(points)
    if not pts:
        return -1
    base = pts[0]
    ech = _Echelon()
    for p in pts[1:]:
        ech.add(tuple(a - b for a, b in zip(p, base)))
    return len(ech.rows)


def _face_dim(g: gr.Graph, gens, pos) -> int:
    return affine_dim([_point(g, e, pos) for e in gens])


def facets_connected(g: gr.Graph) -> list[Face]:
    """Facet generator sets of the edge polytope of a connected graph.

    Bipartite: one facet per ordinary vertex (delete the vertex) and per
    acceptable independent set U (keep the edges of NC(U)).  Non-bipartite:
    the same with regular vertices and fundamental sets.  The two families
    can overlap as edge sets and are deduplicated.
    """
    if not g.edges:
        raise PreconditionError("edgeless graph has an empty polytope")
    if not gr.is_connected(g):
        raise PreconditionError("facet rules require a connected graph")
    data = gr.classify_sets(g)
    if gr.is_bipartite(g):
        del_verts = data.ordinary_vertices
        nc_sets = data.acceptable_sets
    else:
        del_verts = data.regular_vertices
        nc_sets = data.fundamental_sets
    out = set()
    all_edges = frozenset(g.edges)
    for v in del_verts:
        # the empty generator set is a genuine facet when P_G is a point
        gens = frozenset(e for e in g.edges if v not in e)
        if gens != all_edges:
            out.add(gens)
    for u in nc_sets:
        out.add(frozenset(gr.nbhd(g, u).nc.edges))
    return sorted(out, key=sorted)


@dataclass
class FaceLattice:
    """All faces of an edge polytope, graded by dimension.

    faces[0] is the empty face; faces are sorted by (dim, generator set).
    covers list (upper, lower) index pairs with a dimension gap of one;
    signs carry the incidence coefficients once assigned.
    """

    graph: gr.Graph
    faces: tuple[Face, ...]
    dims: tuple[int, ...]
    covers: tuple[tuple[int, int], ...]
    signs: dict[tuple[int, int], int] = field(default_factory=dict)

    def __post_init__(self):
        self.index = {f: i for i, f in enumerate(self.faces)}

    @property
    def top(self) -> int:
        return len(self.faces) - 1

    def facet_indices(self) -> list[int]:
        d = self.dims[self.top]
        return [i for i, dd in enumerate(self.dims) if dd == d - 1]

    def covers_below(self, i: int) -> list[int]:
        return [lo for hi, lo in self.covers if hi == i]

    def to_json(self) -> dict:
        return {
            "faces": [sorted(map(list, f)) for f in self.faces],
            "dims": list(self.dims),
            "covers": [list(c) for c in self.covers],
            "signs": [[hi, lo, s] for (hi, lo), s in sorted(self.signs.items())],
        }

    def to_dot(self) -> str:
        lines = ["digraph lattice {", "  rankdir=BT;"]
        for i, f in enumerate(self.faces):
            lab = ",".join(f"{u}{v}" for u, v in sorted(f)) or "empty"
            lines.append(f'  f{i} [label="{lab} (d{self.dims[i]})"];')
        for hi, lo in self.covers:
            s = self.signs.get((hi, lo))
            attr = f' [label="{s:+d}"]' if s is not None else ""
            lines.append(f"  f{lo} -> f{hi}{attr};")
        lines.append("}")
        return "\n".join(lines)


def _covers_from_grading(faces, dims):
    by_dim: dict[int, list[int]] = {}
    for i, d in enumerate(dims):
        by_dim.setdefault(d, []).append(i)
    covers = []
    for d in sorted(by_dim):
        for hi in by_dim.get(d, []):
            for lo in by_dim.get(d - 1, []):
                if faces[lo] <= faces[hi]:
                    covers.append((hi, lo))
    return tuple(covers)


def face_lattice(g: gr.Graph) -> FaceLattice:
    """Every face of the edge polytope, as an intersection of facets.

    Connected graphs: meet-closure of the rule facets.  Disconnected
    graphs: the polytope is the join of the component polytopes, so faces
    are unions of one face per component and dimensions add with an offset
    of one per factor.
    """
    if not g.edges:
        return FaceLattice(graph=g, faces=(frozenset(),), dims=(-1,), covers=())
    comps = [c for c in gr.components(g) if gr.induced(g, c).edges]
    if len(comps) == 1:
        return _lattice_connected(gr.induced(g, comps[0]), g)
    factor = [face_lattice(gr.induced(g, c)) for c in comps]
    faces = []
    dims = []
    for combo in itertools.product(*(range(len(f.faces)) for f in factor)):
        gens = frozenset().union(*(factor[k].faces[i] for k, i in enumerate(combo)))
        faces.append(gens)
        dims.append(sum(factor[k].dims[i] + 1 for k, i in enumerate(combo)) - 1)
    order = sorted(range(len(faces)), key=lambda i: (dims[i], sorted(faces[i])))
    faces = tuple(faces[i] for i in order)
    dims = tuple(dims[i] for i in order)
    return FaceLattice(graph=g, faces=faces, dims=dims,
                       covers=_covers_from_grading(faces, dims))


def _lattice_connected(g: gr.Graph, ambient: gr.Graph) -> FaceLattice:
    pos = {v: i for i, v in enumerate(g.vertices)}
    facets = facets_connected(g)
    closed = set(facets)
    closed.add(frozenset(g.edges))
    closed.add(frozenset())
    work = list(facets)
    while work:
        f = work.pop()
        for h in list(closed):
            m = f & h
            if m not in closed:
                closed.add(m)
                work.append(m)
    faces = sorted(closed, key=lambda f: (len(f), sorted(f)))
    dims = [_face_dim(g, f, pos) for f in faces]
    order = sorted(range(len(faces)), key=lambda i: (dims[i], sorted(faces[i])))
    faces = tuple(faces[i] for i in order)
    dims = tuple(dims[i] for i in order)
    return FaceLattice(graph=ambient, faces=faces, dims=dims,
                       covers=_covers_from_grading(faces, dims))


# ---------------------------------------------------------------------------
# Exact geometric verification.


def geometric_face_oracle(g: gr.Graph, s) -> bool:
    """Is the edge set s exactly the vertex set of a face of the polytope?

    Two exact checks: no other lattice point may lie in the affine span of
    the s-points, and a supporting functional must exist (constant on the
    span, strictly below on everything else); the latter is a strict
    homogeneous feasibility problem after projecting onto the span's
    orthogonal complement.
    """
    s = frozenset(gr._edge(u, v) for u, v in s)
    if not s:
        raise InvalidInputError("empty edge set")
    if not s <= set(g.edges):
        raise InvalidInputError("edge set not contained in the graph")
    pos = {v: i for i, v in enumerate(g.vertices)}
    spts = [_point(g, e, pos) for e in sorted(s)]
    others = [_point(g, e, pos) for e in g.edges if e not in s]
    base = spts[0]
    diffs = [tuple(a - b for a, b in zip(p, base)) for p in spts[1:]]
    ech = _Echelon()
    for d in diffs:
        ech.add(d)
    rest = []
    for q in others:
        d = tuple(a - b for a, b in zip(q, base))
        if ech.contains(d):
            return False
        rest.append(d)
    if not rest:
        return True
    normals = nullspace(ech.rows, len(pos)) if ech.rows else \
        [tuple(1 if j == k else 0 for j in range(len(pos))) for k in range(len(pos))]
    rows = [tuple(sum(a * b for a, b in zip(n, d)) for n in normals) for d in rest]
    return strict_homogeneous_feasible(rows)


def geometric_facets(g: gr.Graph) -> list[Face]:
    """Facets found purely geometrically, with no use of the facet rules.

    Every facet's hyperplane is spanned by dim(P) affinely independent
    lattice points, so a depth-first search over increasing point indices
    enumerates candidate spans; spans fully inside an already certified
    facet are skipped since they regenerate the same hyperplane.
    """
    if not g.edges:
        return []
    pos = {v: i for i, v in enumerate(g.vertices)}
    pts = [_point(g, e, pos) for e in g.edges]
    m = len(pts)
    dim = affine_dim(pts)
    if dim == 0:
        return [frozenset()]  # a point's only proper face is empty
    found: list[Face] = []
    evaluated: list[int] = []  # point masks of every hyperplane seen so far

    def span_mask(ech: _Echelon, anchor: int) -> tuple[int, bool]:
        base = pts[anchor]
        mask = 0
        strict = []
        for i, p in enumerate(pts):
            d = tuple(a - b for a, b in zip(p, base))
            if ech.contains(d):
                mask |= 1 << i
            else:
                strict.append(d)
        normals = nullspace(ech.rows, len(pos))
        a = None
        for n in normals:
            if any(sum(x * y for x, y in zip(n, d)) for d in strict):
                a = n
                break
        if a is None:
            raise InternalConsistencyError("no functional separates the span")
        vals = [sum(x * y for x, y in zip(a, d)) for d in strict]
        return mask, all(v > 0 for v in vals) or all(v < 0 for v in vals)

    def dfs(start: int, chosen: list[int], ech: _Echelon):
        if len(chosen) == dim:
            cmask = 0
            for i in chosen:
                cmask |= 1 << i
            # any independent subset of a seen hyperplane spans it again
            if any(cmask & em == cmask for em in evaluated):
                return
            fmask, supporting = span_mask(ech, chosen[0])
            evaluated.append(fmask)
            if supporting:
                found.append(
                    frozenset(g.edges[i] for i in range(m) if fmask >> i & 1)
                )
            return
        for i in range(start, m):
            if m - i < dim - len(chosen):
                break
            if chosen:
                d = tuple(a - b for a, b in zip(pts[i], pts[chosen[0]]))
                if ech.contains(d):
                    continue
                ech2 = _Echelon()
                ech2.rows = list(ech.rows)
                ech2.add(d)
            else:
                ech2 = _Echelon()
            dfs(i + 1, chosen + [i], ech2)

    dfs(0, [], _Echelon())
    return sorted(found, key=sorted)


# ---------------------------------------------------------------------------
# Incidence signs.


def incidence_signs(lat: FaceLattice) -> FaceLattice:
    """Assign +-1 to covering pairs so that the induced cellular boundary
    squares to zero.

    Each interval of length two in a polytope face lattice is a diamond
    with exactly two intermediate faces, forcing the product of the four
    signs around it to be -1.  Signs are gauge-fixed bottom-up (first cover
    of each cell set to +1) and propagated; a contradiction or an
    unreachable cover means the lattice is not a polytope lattice.
    """
    below = {i: lat.covers_below(i) for i in range(len(lat.faces))}
    signs: dict[tuple[int, int], int] = {}
    order = sorted(range(len(lat.faces)), key=lambda i: lat.dims[i])
    for s in order:
        kids = below[s]
        if lat.dims[s] < 0:
            continue
        if lat.dims[s] == 0:
            for k in kids:
                signs[(s, k)] = 1  # augmentation to the empty face
            continue
        # adjacency between covers of s through shared codim-2 faces
        shared: dict[int, list[int]] = {}
        for t in kids:
            for r in below[t]:
                shared.setdefault(r, []).append(t)
        assigned = {kids[0]: 1}
        queue = [kids[0]]
        while queue:
            t1 = queue.pop()
            for r, ts in shared.items():
                if t1 not in ts:
                    continue
                if len(ts) != 2:
                    raise InternalConsistencyError(
                        f"interval of length two with {len(ts)} middle faces"
                    )
                t2 = ts[0] if ts[1] == t1 else ts[1]
                forced = -assigned[t1] * signs[(t1, r)] * signs[(t2, r)]
                if t2 in assigned:
                    if assigned[t2] != forced:
                        raise InternalConsistencyError("sign propagation conflict")
                else:
                    assigned[t2] = forced
                    queue.append(t2)
        if set(assigned) != set(kids):
            raise InternalConsistencyError("boundary of a cell is not connected")
        for t, v in assigned.items():
            signs[(s, t)] = v
    lat.signs = signs
    _check_d_squared(lat)
    return lat


def _check_d_squared(lat: FaceLattice) -> None:
    below = {i: lat.covers_below(i) for i in range(len(lat.faces))}
    for s in range(len(lat.faces)):
        if lat.dims[s] < 1:
            continue
        acc: dict[int, int] = {}
        for t in below[s]:
            for r in below[t]:
                acc[r] = acc.get(r, 0) + lat.signs[(s, t)] * lat.signs[(t, r)]
        if any(v != 0 for v in acc.values()):
            raise InternalConsistencyError("incidence signs do not square to zero")
