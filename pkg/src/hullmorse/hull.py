"""The labeled hull complex of an edge ideal and its label classes.

The hull resolution of an edge ideal is supported on the edge polytope
with each face labeled by the union of its generators' endpoints.  Cells
sharing a label form a class; classes factor over the components of the
induced subgraph on the label, and for connected non-bipartite graphs with
triangle-free complement the full-support class is dual to the face poset
of a small (multi)graph built from the complement.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from . import graphs as gr
from . import polytope as pt
from .errors import InternalConsistencyError, InvalidInputError
from .homology import ChainComplex


@dataclass
class LabeledComplex:
    lattice: pt.FaceLattice
    labels: tuple[frozenset[int], ...]  # per face, the lcm support
    generators: tuple[gr.Edge, ...]

    def to_chain_complex(self) -> ChainComplex:
        if not self.lattice.signs and len(self.lattice.faces) > 1:
            raise InvalidInputError("incidence signs missing")
        boundary = {}
        for i in range(len(self.lattice.faces)):
            ents = tuple(
                (lo, self.lattice.signs[(i, lo)])
                for lo in self.lattice.covers_below(i)
            )
            if ents:
                boundary[i] = ents
        return ChainComplex(dims=self.lattice.dims, labels=self.labels,
                            boundary=boundary)

    def to_json(self) -> dict:
        out = self.lattice.to_json()
        out["labels"] = [sorted(l) for l in self.labels]
        return out


def hull_complex(g: gr.Graph) -> LabeledComplex:
    """Face lattice of the edge polytope with lcm labels and signs."""
    lat = pt.incidence_signs(pt.face_lattice(g))
    labels = tuple(
        frozenset(v for e in f for v in e) for f in lat.faces
    )
    return LabeledComplex(lattice=lat, labels=labels, generators=tuple(g.edges))


@dataclass
class LabelClass:
    """All faces of a hull complex carrying one fixed label."""

    complex: LabeledComplex
    support: frozenset[int]
    cells: tuple[int, ...]  # indices into the ambient lattice
    factors: tuple["LabelClass", ...] = ()

    def __len__(self) -> int:
        return len(self.cells)

    def top_cell(self) -> int:
        lat = self.complex.lattice
        return max(self.cells, key=lambda i: lat.dims[i])

    def covers(self) -> list[tuple[int, int]]:
        """Hasse diagram of the class, inherited from the ambient lattice."""
        lat = self.complex.lattice
        inside = set(self.cells)
        return [(hi, lo) for hi, lo in lat.covers if hi in inside and lo in inside]

    def to_json(self) -> dict:
        lat = self.complex.lattice
        return {
            "support": sorted(self.support),
            "cells": [sorted(map(list, lat.faces[i])) for i in self.cells],
            "dims": [lat.dims[i] for i in self.cells],
            "covers": [[self.cells.index(a), self.cells.index(b)]
                       for a, b in self.covers()],
        }

    def to_dot(self) -> str:
        lat = self.complex.lattice
        lines = ["digraph labelclass {", "  rankdir=BT;"]
        for i in self.cells:
            lab = ",".join(f"{u}{v}" for u, v in sorted(lat.faces[i])) or "empty"
            lines.append(f'  c{i} [label="{lab}"];')
        for hi, lo in self.covers():
            lines.append(f"  c{lo} -> c{hi};")
        lines.append("}")
        return "\n".join(lines)


def label_class(g: gr.Graph, u, cx: LabeledComplex | None = None) -> LabelClass:
    """Faces of the hull complex labeled exactly by u.

    Empty when the induced graph has an isolated vertex; otherwise the
    class poset is the product of the full-support classes of the
    components of G[u], and the factor sizes are asserted to multiply up.
    """
    support = frozenset(u)
    if not support:
        raise InvalidInputError("empty support")
    if cx is None:
        cx = hull_complex(g)
    cells = tuple(i for i, lab in enumerate(cx.labels) if lab == support)
    h = gr.induced(g, support)
    isolated = any(h.degree(v) == 0 for v in support)
    if isolated != (not cells):
        raise InternalConsistencyError(
            "class emptiness disagrees with the isolated-vertex criterion"
        )
    comps = [c for c in gr.components(h)]
    factors: tuple[LabelClass, ...] = ()
    if cells and len(comps) > 1:
        factors = tuple(mg(gr.induced(g, c)) for c in comps)
        prod = 1
        for f in factors:
            prod *= len(f)
        if prod != len(cells):
            raise InternalConsistencyError(
                f"class size {len(cells)} is not the product of factors {prod}"
            )
    out = LabelClass(complex=cx, support=support, cells=cells, factors=factors)
    if cells and len(comps) == 1:
        out.factors = (out,)
    return out


def mg(g: gr.Graph, cx: LabeledComplex | None = None) -> LabelClass:
    """The full-support label class of the hull complex."""
    return label_class(g, g.vertices, cx)


# ---------------------------------------------------------------------------
# The eleven pair types.


@dataclass(frozen=True)
class PairType:
    tag: int
    members: tuple[frozenset[int], frozenset[int]]
    in_mg: bool


_IN_MG_TAGS = {2, 6, 7, 11}


def classify_pair(g: gr.Graph, a, b) -> PairType:
    """Combinatorial type of a pair of fundamental sets, and whether the
    intersection of their facets stays in the full-support class.

    Membership is computed twice, from the type table and from the direct
    isolated-vertex test on the intersection of the NC graphs; the two must
    agree.
    """
    gbar = gr.complement(g)
    if not gr.is_triangle_free(gbar):
        raise InvalidInputError("complement must be triangle-free")
    if not gr.is_connected(g) or gr.is_bipartite(g):
        raise InvalidInputError("graph must be connected and not bipartite")
    a, b = frozenset(a), frozenset(b)
    fverts, fedges = gr.fundamentality_fast(g)
    fsets = {frozenset({v}) for v in fverts} | {frozenset(e) for e in fedges}
    for s in (a, b):
        if s not in fsets:
            raise InvalidInputError(f"{sorted(s)} is not a fundamental set")
    if a == b:
        raise InvalidInputError("the two sets must differ")
    tag = _pair_tag(gbar, fverts, fedges, a, b)
    table = tag in _IN_MG_TAGS
    inter = gr.intersection(gr.nbhd(g, a).nc, gr.nbhd(g, b).nc)
    direct = bool(inter.vertices) and all(
        inter.degree(v) > 0 for v in inter.vertices
    )
    if table != direct:
        raise InternalConsistencyError(
            f"type table says {table} but the NC intersection test says {direct}"
        )
    return PairType(tag=tag, members=(a, b), in_mg=table)


def _pair_tag(gbar, fverts, fedges, a, b) -> int:
    if len(a) < len(b):
        a, b = b, a
    if len(a) == 1:  # two singletons
        u, v = min(a), min(b)
        if gbar.has_edge(u, v):
            return 1 if gr._edge(u, v) in fedges else 2
        return 3
    if len(b) == 2:  # two pairs
        if not a & b:
            return 4
        (shared,) = a & b
        return 5 if shared in fverts else 6
    # a pair and a singleton; containment wins over every side condition
    (w,) = b
    if w in a:
        return 7
    adj = [x for x in a if gbar.has_edge(x, w)]
    if not adj:
        return 8
    # triangle-freeness forbids w being adjacent to both members of a
    (u,) = adj
    if gr._edge(u, w) in fedges:
        return 9
    return 10 if u in fverts else 11


# ---------------------------------------------------------------------------
# The full-support class from the complement's contracted subdivision.


def f_graph(g: gr.Graph):
    """The contracted subdivision of the complement along its fundamental
    edges, plus the fundamentality data used to build it."""
    gbar = gr.complement(g)
    if not gr.is_triangle_free(gbar):
        raise InvalidInputError("complement must be triangle-free")
    if not gr.is_connected(g) or gr.is_bipartite(g):
        raise InvalidInputError("graph must be connected and not bipartite")
    fverts, fedges = gr.fundamentality_fast(g)
    f = gr.contracted_subdivision(gbar, fedges)
    return f, fverts, fedges


def m_from_f(g: gr.Graph, cx: LabeledComplex | None = None) -> LabelClass:
    """Full-support class built combinatorially from the F graph, verified
    cell by cell against the polytope lattice.

    The class is the dualized face poset of F with its empty face included:
    the empty face is the top cell, F's vertices are the facets of the
    class, F's edges are the codimension-two cells, and nothing of higher
    codimension occurs.
    """
    f, fverts, fedges = f_graph(g)
    cls = mg(g, cx)
    lat = cls.complex.lattice
    top = cls.top_cell()
    top_dim = lat.dims[top]
    dims = sorted(lat.dims[i] for i in cls.cells)
    if dims and dims[0] < top_dim - 2:
        raise InternalConsistencyError("class has a cell of codimension three")

    def facet_gens(node) -> frozenset:
        u = {node[1]} if node[0] == "v" else {node[1], node[2]}
        return frozenset(gr.nbhd(g, u).nc.edges)

    ident = {node: facet_gens(node) for node in f.vertices}
    class_facets = {lat.faces[i] for i in cls.cells if lat.dims[i] == top_dim - 1}
    if set(ident.values()) != class_facets or len(ident) != len(class_facets):
        raise InternalConsistencyError("F vertices do not match the class facets")
    codim2 = {lat.faces[i] for i in cls.cells if lat.dims[i] == top_dim - 2}
    edge_faces = [ident[x] & ident[y] for x, y in f.edges]
    if len(set(edge_faces)) != len(edge_faces) or set(edge_faces) != codim2:
        raise InternalConsistencyError("F edges do not match the codim-2 cells")
    # covers: each codim-2 cell must sit below exactly its two endpoints
    for (x, y), face in zip(f.edges, edge_faces):
        above = {lat.faces[hi] for hi, lo in lat.covers
                 if lat.faces[lo] == face and hi in set(cls.cells)}
        if above != {ident[x], ident[y]}:
            raise InternalConsistencyError("cover relations disagree with F")
    if len(cls.cells) != 1 + f.n + len(f.edges):
        raise InternalConsistencyError("class size disagrees with F")
    return cls
