"""Simplicial and cellular homology over Q and GF(2), and the two
independent Betti-number oracles for edge ideals.

Homological indexing convention, used everywhere: a cell of dimension d
contributes to homological degree d of the resolution (polytope vertices
are the ideal generators, degree 0).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from . import graphs as gr
from .errors import InvalidInputError
from .linalg import rank_gf2, rank_int

FIELDS = ("q", "f2")


def _check_field(f: str) -> None:
    if f not in FIELDS:
        raise InvalidInputError(f"unknown field {f!r}; use 'q' or 'f2'")


class SimplicialComplex:
    """Abstract simplicial complex given by its faces (downward closed).

    The empty face is a member of every nonvoid complex; a complex may also
    be exactly {empty}, which has reduced homology of rank 1 in degree -1.
    """

    def __init__(self, faces):
        fs = {frozenset(f) for f in faces}
        for f in fs:
            for v in f:
                if f - {v} not in fs:
                    raise InvalidInputError(f"not downward closed at {sorted(f)}")
        if fs and frozenset() not in fs:
            raise InvalidInputError("nonvoid complex must contain the empty face")
        self.by_dim: dict[int, list[frozenset]] = {}
        for f in fs:
            self.by_dim.setdefault(len(f) - 1, []).append(f)
        for d in self.by_dim:
            self.by_dim[d].sort(key=sorted)

    @classmethod
    def from_facets(cls, facets):
        faces = set()
        for f in facets:
            f = frozenset(f)
            for k in range(len(f) + 1):
                faces.update(frozenset(c) for c in itertools.combinations(f, k))
        faces.add(frozenset())
        return cls(faces)

    @property
    def dim(self) -> int:
        return max(self.by_dim, default=-1)

    def boundary_matrix(self, d: int) -> list[list[int]]:
        """Matrix of the boundary map from d-faces to (d-1)-faces."""
        rows = self.by_dim.get(d - 1, [])
        cols = self.by_dim.get(d, [])
        idx = {f: i for i, f in enumerate(rows)}
        mat = [[0] * len(cols) for _ in rows]
        for j, f in enumerate(cols):
            verts = sorted(f)
            for i, v in enumerate(verts):
                mat[idx[f - {v}]][j] = (-1) ** i
        return mat


def independence_complex(g: gr.Graph) -> SimplicialComplex:
    """Faces are the independent sets of g (the clique complex of the
    complement)."""
    return SimplicialComplex([frozenset()] + [set(s) for s in gr.independent_sets(g)])


def reduced_homology_ranks(sc: SimplicialComplex, fld: str) -> dict[int, int]:
    """Ranks of reduced homology by degree, including degree -1.

    The empty face participates: the boundary of every vertex is the empty
    face with coefficient +1 (the augmentation).
    """
    _check_field(fld)
    if not sc.by_dim:
        return {}
    ranks = {}
    bnd_rank = {}
    top = sc.dim
    for d in range(0, top + 2):
        mat = sc.boundary_matrix(d)
        if fld == "q":
            bnd_rank[d] = rank_int(mat)
        else:
            bnd_rank[d] = rank_gf2(_gf2_rows(mat))
    for d in range(-1, top + 1):
        n_d = len(sc.by_dim.get(d, []))
        ranks[d] = n_d - bnd_rank.get(d, 0) - bnd_rank.get(d + 1, 0)
    return ranks


def _gf2_rows(mat: list[list[int]]) -> list[int]:
    out = []
    for row in mat:
        m = 0
        for j, v in enumerate(row):
            if v & 1:
                m |= 1 << j
        out.append(m)
    return out


# ---------------------------------------------------------------------------
# Betti tables.


@dataclass(frozen=True)
class BettiTable:
    field: str
    entries: dict[tuple[int, frozenset[int]], int] = field(hash=False)

    def total(self, i: int) -> int:
        return sum(v for (d, _), v in self.entries.items() if d == i)

    def totals(self) -> tuple[int, ...]:
        if not self.entries:
            return ()
        top = max(d for d, _ in self.entries)
        return tuple(self.total(i) for i in range(top + 1))

    def to_json(self) -> list:
        return [
            {"degree": d, "support": sorted(s), "rank": v}
            for (d, s), v in sorted(
                self.entries.items(), key=lambda kv: (kv[0][0], sorted(kv[0][1]))
            )
        ]


def _supports(g: gr.Graph):
    """Vertex subsets whose induced subgraph has no isolated vertex and at
    least one edge; all other multidegrees have zero Betti numbers (the
    relevant complexes are cones)."""
    vs = g.vertices
    for size in range(2, len(vs) + 1):
        for sigma in itertools.combinations(vs, size):
            h = gr.induced(g, sigma)
            if h.edges and all(h.degree(v) > 0 for v in sigma):
                yield frozenset(sigma), h


_hochster_cache: dict = {}
_koszul_cache: dict = {}


def _canon_ranks(h: gr.Graph, fld: str, cache: dict, builder) -> dict[int, int]:
    key = (gr.canonical_key(h), fld)
    hit = cache.get(key)
    if hit is None:
        hit = reduced_homology_ranks(builder(h), fld)
        cache[key] = hit
    return hit


def hochster_betti(g: gr.Graph, fld: str = "q") -> BettiTable:
    """Betti numbers from reduced homology of induced independence
    complexes: beta_{i,sigma} = rank Htilde_{|sigma|-i-2}(Ind(G[sigma]))."""
    _check_field(fld)
    if not g.edges:
        raise InvalidInputError("edge ideal of an edgeless graph is degenerate")
    entries = {}
    for sigma, h in _supports(g):
        ranks = _canon_ranks(h, fld, _hochster_cache, independence_complex)
        for hdeg, r in ranks.items():
            if r:
                i = len(sigma) - hdeg - 2
                entries[(i, sigma)] = r
    return BettiTable(field=fld, entries=entries)


def _cogenerator_complex(h: gr.Graph) -> SimplicialComplex:
    """Subsets tau of V(h) whose complement within V(h) still contains an
    edge of h; beta_{i,V(h)} = rank Htilde_{i-1} of this complex."""
    vs = set(h.vertices)
    faces = []
    for k in range(len(vs) + 1):
        for tau in itertools.combinations(sorted(vs), k):
            rest = vs - set(tau)
            if any(u in rest and v in rest for u, v in h.edges):
                faces.append(frozenset(tau))
    return SimplicialComplex(faces)


def koszul_betti(g: gr.Graph, fld: str = "q") -> BettiTable:
    """Second, independent Betti oracle: for each support sigma, the complex
    of subsets tau with an ideal generator dividing the monomial of
    sigma minus tau; beta_{i,sigma} = rank Htilde_{i-1}."""
    _check_field(fld)
    if not g.edges:
        raise InvalidInputError("edge ideal of an edgeless graph is degenerate")
    entries = {}
    for sigma, h in _supports(g):
        ranks = _canon_ranks(h, fld, _koszul_cache, _cogenerator_complex)
        for hdeg, r in ranks.items():
            if r:
                entries[(hdeg + 1, sigma)] = r
    return BettiTable(field=fld, entries=entries)


# ---------------------------------------------------------------------------
# Chain complexes of labeled cell complexes, and the resolution criterion.


@dataclass
class ChainComplex:
    """Cells with dimensions, multidegree labels, and an integer
    differential; cell -1-dimensional entries realize the augmentation."""

    dims: tuple[int, ...]
    labels: tuple[frozenset[int], ...]
    boundary: dict[int, tuple[tuple[int, int], ...]]  # cell -> ((cell, coeff), ...)

    def cells_of_dim(self, d: int) -> list[int]:
        return [i for i, dd in enumerate(self.dims) if dd == d]

    def check_boundary_squares_to_zero(self) -> bool:
        acc: dict[tuple[int, int], int] = {}
        for c, ents in self.boundary.items():
            for mid, a in ents:
                for low, b in self.boundary.get(mid, ()):
                    key = (c, low)
                    acc[key] = acc.get(key, 0) + a * b
        return all(v == 0 for v in acc.values())


@dataclass(frozen=True)
class StrandVerdict:
    ok: bool
    failing: dict[str, tuple[frozenset[int], ...]] = field(hash=False)

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "failing": {
                f: [sorted(m) for m in ms] for f, ms in sorted(self.failing.items())
            },
        }


def strand_multidegrees(cc: ChainComplex) -> list[frozenset[int]]:
    """Distinct label closures; the strand of any monomial equals the strand
    of the union of generator labels dividing it."""
    gens = [cc.labels[i] for i in cc.cells_of_dim(0)]
    vs = sorted(set().union(*gens)) if gens else []
    seen = set()
    for k in range(len(vs) + 1):
        for m in itertools.combinations(vs, k):
            ms = set(m)
            closure = frozenset().union(*(g for g in gens if g <= ms)) if gens else frozenset()
            seen.add(frozenset(closure))
    return sorted(seen, key=sorted)


def _strand_ranks(cc: ChainComplex, members: list[int], fld: str) -> dict[int, int]:
    member_set = set(members)
    by_dim: dict[int, list[int]] = {}
    for i in members:
        by_dim.setdefault(cc.dims[i], []).append(i)
    top = max(by_dim, default=-1)
    bnd_rank = {}
    for d in range(0, top + 1):
        cols = by_dim.get(d, [])
        rows = by_dim.get(d - 1, [])
        ridx = {c: i for i, c in enumerate(rows)}
        mat = []
        for c in cols:
            row = [0] * len(rows)
            for b, coeff in cc.boundary.get(c, ()):
                if b not in member_set:
                    raise InvalidInputError(
                        "boundary leaves the strand; labels are not monotone"
                    )
                row[ridx[b]] += coeff
            mat.append(row)
        # mat rows are columns of the boundary map; rank is transposition
        # invariant.
        if fld == "q":
            bnd_rank[d] = rank_int(mat)
        else:
            bnd_rank[d] = rank_gf2(_gf2_rows(mat))
    ranks = {}
    for d in range(0, top + 1):
        ranks[d] = len(by_dim.get(d, [])) - bnd_rank.get(d, 0) - bnd_rank.get(d + 1, 0)
    return ranks


def strand_check(cc: ChainComplex, fields: tuple[str, ...] = FIELDS) -> StrandVerdict:
    """Is every multidegree strand acyclic in degrees >= 0?

    GF(2) is checked first; a GF(2)-acyclic strand is acyclic over the
    rationals as well (universal coefficients), so the exact rational
    elimination only runs on strands that fail over GF(2).
    """
    for f in fields:
        _check_field(f)
    empties = [i for i, d in enumerate(cc.dims) if d == -1]
    if len(empties) != 1:
        raise InvalidInputError("complex must contain exactly one empty cell")
    for c, ents in cc.boundary.items():
        for b, _ in ents:
            if not cc.labels[b] <= cc.labels[c]:
                raise InvalidInputError(
                    "boundary label does not divide the cell label"
                )
    failing: dict[str, list[frozenset[int]]] = {f: [] for f in fields}
    for m in strand_multidegrees(cc):
        members = [i for i, lab in enumerate(cc.labels) if lab <= m]
        f2_ranks = _strand_ranks(cc, members, "f2")
        f2_ok = all(r == 0 for d, r in f2_ranks.items() if d >= 0)
        if "f2" in fields and not f2_ok:
            failing["f2"].append(m)
        if "q" in fields:
            if f2_ok:
                pass  # implied acyclic over Q
            else:
                q_ranks = _strand_ranks(cc, members, "q")
                if any(r != 0 for d, r in q_ranks.items() if d >= 0):
                    failing["q"].append(m)
    failing = {f: tuple(ms) for f, ms in failing.items()}
    ok = all(not ms for ms in failing.values())
    return StrandVerdict(ok=ok, failing=failing)
