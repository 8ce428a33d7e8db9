"""Algebraic discrete Morse theory on labeled hull complexes.

Matchings pair covering cells of equal label; reversing matched edges in
the Hasse diagram must leave it acyclic.  Critical cells survive into the
Morse complex, whose differential sums signed gradient paths.  The
constructive matching follows the structure theory: per label class,
factor over components, contract the F graph along a spanning forest, and
glue the factors by a sequential product sweep.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from . import graphs as gr
from . import hull as hl
from .errors import (
    InternalConsistencyError,
    InvalidInputError,
    PreconditionError,
    ResourceLimitError,
)
from .homology import ChainComplex, hochster_betti, strand_check


@dataclass
class Matching:
    complex: hl.LabeledComplex
    pairs: tuple[tuple[int, int], ...]  # (upper, lower) ambient cell indices

    def matched_cells(self) -> set[int]:
        return {c for p in self.pairs for c in p}

    def up_map(self) -> dict[int, int]:
        return {lo: hi for hi, lo in self.pairs}

    def to_json(self) -> dict:
        return {"pairs": sorted(map(list, self.pairs))}


@dataclass(frozen=True)
class MatchingFlags:
    homogeneous: bool
    acyclic: bool


def validate_matching(cx: hl.LabeledComplex, m: Matching) -> MatchingFlags:
    """Homogeneity by label equality, acyclicity by cycle detection.

    For homogeneous matchings any directed cycle is label-constant (down
    edges weakly decrease labels, matched edges preserve them), so
    acyclicity decomposes over the label classes; the global digraph is
    checked otherwise.
    """
    lat = cx.lattice
    cover_set = set(lat.covers)
    seen: set[int] = set()
    for hi, lo in m.pairs:
        if (hi, lo) not in cover_set:
            raise InvalidInputError(f"({hi},{lo}) is not a covering pair")
        if hi in seen or lo in seen:
            raise InvalidInputError("a cell appears in two pairs")
        seen.update((hi, lo))
    homogeneous = all(cx.labels[hi] == cx.labels[lo] for hi, lo in m.pairs)
    if homogeneous:
        acyclic = True
        for cells in _cells_by_label(cx).values():
            if not _acyclic_on(lat, cells, m.pairs):
                acyclic = False
                break
    else:
        acyclic = _acyclic_on(lat, range(len(lat.faces)), m.pairs)
    return MatchingFlags(homogeneous=homogeneous, acyclic=acyclic)


def _cells_by_label(cx: hl.LabeledComplex) -> dict[frozenset, list[int]]:
    out: dict[frozenset, list[int]] = {}
    for i, lab in enumerate(cx.labels):
        out.setdefault(lab, []).append(i)
    return out


def _acyclic_on(lat, cells, pairs) -> bool:
    inside = set(cells)
    matched = {(hi, lo) for hi, lo in pairs if hi in inside and lo in inside}
    succ: dict[int, list[int]] = {c: [] for c in inside}
    for hi, lo in lat.covers:
        if hi in inside and lo in inside:
            if (hi, lo) in matched:
                succ[lo].append(hi)
            else:
                succ[hi].append(lo)
    state: dict[int, int] = {}  # 1 in progress, 2 done
    for root in inside:
        if state.get(root):
            continue
        stack = [(root, iter(succ[root]))]
        state[root] = 1
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                state[node] = 2
                stack.pop()
            elif state.get(nxt) == 1:
                return False
            elif not state.get(nxt):
                state[nxt] = 1
                stack.append((nxt, iter(succ[nxt])))
    return True


@dataclass
class MorseComplex:
    matching: Matching
    critical: tuple[int, ...]  # ambient cell indices
    differential: dict[tuple[int, int], int]  # integer gradient-path sums

    @property
    def complex(self) -> hl.LabeledComplex:
        return self.matching.complex

    def ranks(self) -> dict[tuple[int, frozenset], int]:
        lat = self.complex.lattice
        out: dict[tuple[int, frozenset], int] = {}
        for c in self.critical:
            d = lat.dims[c]
            if d >= 0:
                key = (d, self.complex.labels[c])
                out[key] = out.get(key, 0) + 1
        return out

    def to_chain_complex(self) -> ChainComplex:
        lat = self.complex.lattice
        idx = {c: i for i, c in enumerate(self.critical)}
        boundary: dict[int, list[tuple[int, int]]] = {}
        for (a, b), v in self.differential.items():
            if v:
                boundary.setdefault(idx[a], []).append((idx[b], v))
        return ChainComplex(
            dims=tuple(lat.dims[c] for c in self.critical),
            labels=tuple(self.complex.labels[c] for c in self.critical),
            boundary={k: tuple(v) for k, v in boundary.items()},
        )

    def to_json(self) -> dict:
        lat = self.complex.lattice
        return {
            "critical": [
                {"cell": sorted(map(list, lat.faces[c])), "dim": lat.dims[c],
                 "label": sorted(self.complex.labels[c])}
                for c in self.critical
            ],
            "differential": [
                [a, b, v] for (a, b), v in sorted(self.differential.items()) if v
            ],
            "pairs": sorted(map(list, self.matching.pairs)),
        }


def critical_and_differential(m: Matching) -> MorseComplex:
    """Critical cells and the signed gradient-path differential.

    The weight of a gradient path is the product of the incidence signs of
    its downward steps times a factor of minus the incidence sign for every
    reversed matched edge.  The result must square to zero.
    """
    cx = m.complex
    flags = validate_matching(cx, m)
    if not (flags.homogeneous and flags.acyclic):
        raise PreconditionError("matching must be homogeneous and acyclic")
    lat = cx.lattice
    up = m.up_map()
    down = {hi for hi, _ in m.pairs}
    below = {i: lat.covers_below(i) for i in range(len(lat.faces))}
    critical = tuple(
        i for i in range(len(lat.faces)) if i not in up and i not in down
    )
    flow_cache: dict[int, dict[int, int]] = {}

    def flow(c: int) -> dict[int, int]:
        """Where mass entering cell c ends up among critical cells."""
        if c in flow_cache:
            return flow_cache[c]
        if c not in up and c not in down:
            out = {c: 1}
        elif c in up:
            mcell = up[c]
            out = {}
            w0 = -lat.signs[(mcell, c)]
            for c2 in below[mcell]:
                if c2 == c:
                    continue
                w = w0 * lat.signs[(mcell, c2)]
                for t, k in flow(c2).items():
                    out[t] = out.get(t, 0) + w * k
            out = {t: k for t, k in out.items() if k}
        else:
            out = {}  # matched downward; no gradient path continues
        flow_cache[c] = out
        return out

    differential: dict[tuple[int, int], int] = {}
    for s in critical:
        if lat.dims[s] < 0:
            continue
        acc: dict[int, int] = {}
        for c in below[s]:
            w = lat.signs[(s, c)]
            for t, k in flow(c).items():
                acc[t] = acc.get(t, 0) + w * k
        for t, k in acc.items():
            if k:
                differential[(s, t)] = k
    mc = MorseComplex(matching=m, critical=critical, differential=differential)
    if not mc.to_chain_complex().check_boundary_squares_to_zero():
        raise InternalConsistencyError("Morse differential does not square to zero")
    return mc


# ---------------------------------------------------------------------------
# The constructive matching.


def _factor_matching(g: gr.Graph, comp: frozenset):
    """Matching data for the full-support class of one component, at the
    level of generator sets: (pairs, critical facet gens or None).

    Returns (pairs, all_cells) where pairs are (upper gens, lower gens) and
    all_cells lists every class cell as a generator set.
    """
    gi = gr.induced(g, comp)
    top = frozenset(gi.edges)
    if gr.is_bipartite(gi):
        # connected bipartite with triangle-free complement: a subgraph of
        # a 4-cycle; only the 3-edge path has a second class cell, the
        # facet of the two disjoint edges, matched with the top cell
        deg2 = [v for v in gi.vertices if gi.degree(v) == 2]
        if len(gi.edges) == 3 and len(deg2) == 2:
            facet = frozenset(e for e in gi.edges
                              if not (e[0] in deg2 and e[1] in deg2))
            return [(top, facet)], [top, facet]
        return [], [top]
    f, fverts, fedges = hl.f_graph(gi)

    def facet_gens(node) -> frozenset:
        u = {node[1]} if node[0] == "v" else {node[1], node[2]}
        return frozenset(gr.nbhd(gi, u).nc.edges)

    cells = [top] + [facet_gens(v) for v in f.vertices]
    adj: dict = {v: [] for v in f.vertices}
    for a, b in f.edges:
        adj[a].append(b)
        adj[b].append(a)
        cells.append(facet_gens(a) & facet_gens(b))
    pairs = []
    component_roots = []
    has_cycle = {}
    for compf in sorted(f.components(), key=min):
        root = min(compf)
        component_roots.append(root)
        parent = {root: None}
        order = [root]
        queue = [root]
        while queue:
            x = queue.pop(0)
            for y in sorted(adj[x]):
                if y not in parent:
                    parent[y] = x
                    order.append(y)
                    queue.append(y)
        # one matched pair per non-root tree vertex: its facet with the
        # codim-2 cell of the edge toward the parent
        for y in order[1:]:
            pairs.append((facet_gens(y), facet_gens(y) & facet_gens(parent[y])))
        n_edges_comp = sum(1 for a, b in f.edges if a in compf)
        has_cycle[root] = n_edges_comp > len(compf) - 1
    # match the top cell with a critical facet, preferring a cyclic component
    cyclic = [r for r in component_roots if has_cycle[r]]
    chosen = cyclic[0] if cyclic else component_roots[0]
    pairs.append((top, facet_gens(chosen)))
    return pairs, cells


def product_matching(factors):
    """Glue per-factor matchings by the sequential sweep.

    `factors` lists (cells, pairs) per factor, cells and pairs given as
    generator sets; the result is the list of matched pairs of unions, whose
    critical cells are exactly the products of per-factor critical cells.
    """
    out = []
    crit_prefix = [frozenset()]  # unions of critical cells of factors < i
    for i, (cells, pairs) in enumerate(factors):
        rest = [c[0] for c in factors[i + 1:]]
        for tail in itertools.product(*rest):
            tail_u = frozenset().union(*tail) if tail else frozenset()
            for pre in crit_prefix:
                for sig, tau in pairs:
                    out.append((pre | sig | tail_u, pre | tau | tail_u))
        matched = {c for p in pairs for c in p}
        crit = [c for c in cells if c not in matched]
        crit_prefix = [pre | c for pre in crit_prefix for c in crit]
    return out


def paper_matching(g: gr.Graph, cx: hl.LabeledComplex | None = None) -> Matching:
    """The constructive homogeneous acyclic matching, assembled per class."""
    gbar = gr.complement(g)
    if not gr.is_triangle_free(gbar):
        raise InvalidInputError("complement must be triangle-free")
    if any(g.degree(v) == 0 for v in g.vertices):
        raise InvalidInputError("graph must have no isolated vertex")
    if cx is None:
        cx = hl.hull_complex(g)
    lat = cx.lattice
    pairs: list[tuple[int, int]] = []
    for label, cells in sorted(_cells_by_label(cx).items(), key=lambda kv: sorted(kv[0])):
        if len(cells) < 2:
            continue
        comps = sorted(gr.components(gr.induced(g, label)), key=min)
        factors = []
        for comp in comps:
            fpairs, fcells = _factor_matching(g, comp)
            factors.append((fcells, fpairs))
        for a, b in product_matching(factors):
            pairs.append((lat.index[a], lat.index[b]))
    m = Matching(complex=cx, pairs=tuple(sorted(pairs)))
    flags = validate_matching(cx, m)
    if not (flags.homogeneous and flags.acyclic):
        raise InternalConsistencyError("constructed matching is not valid")
    return m


# ---------------------------------------------------------------------------
# Minimality.


@dataclass(frozen=True)
class MinimalityReport:
    field: str
    counts_minimal: bool
    unit_minimal: bool
    path_minimal: bool

    def to_json(self) -> dict:
        return {
            "field": self.field,
            "counts_minimal": self.counts_minimal,
            "unit_minimal": self.unit_minimal,
            "path_minimal": self.path_minimal,
        }


def _unit(v: int, fld: str) -> bool:
    return v % 2 != 0 if fld == "f2" else v != 0


def minimality_checks(mc: MorseComplex, betti, fld: str = "q") -> MinimalityReport:
    """Three minimality verdicts, with their logical relations enforced.

    counts_minimal compares critical-cell counts with the Betti table;
    unit_minimal asks for no invertible differential entry between cells of
    equal label; path_minimal is the sufficient condition that no gradient
    path connects same-label critical cells.  On a complex that resolves,
    the first two must agree, and path_minimal implies them.
    """
    if not strand_check(mc.to_chain_complex(), fields=(fld,)).ok:
        raise PreconditionError("Morse complex is not a resolution")
    ranks = mc.ranks()
    counts_minimal = ranks == {k: v for k, v in betti.entries.items() if v}
    cx = mc.complex
    unit_minimal = not any(
        _unit(v, fld) and cx.labels[a] == cx.labels[b]
        for (a, b), v in mc.differential.items()
    )
    path_minimal = _path_minimal(mc)
    if counts_minimal != unit_minimal:
        raise InternalConsistencyError(
            "count and unit minimality disagree on a resolution"
        )
    if path_minimal and not unit_minimal:
        raise InternalConsistencyError(
            "path condition held on a non-minimal resolution"
        )
    return MinimalityReport(field=fld, counts_minimal=counts_minimal,
                            unit_minimal=unit_minimal, path_minimal=path_minimal)


def _path_minimal(mc: MorseComplex) -> bool:
    """No directed path between distinct same-label critical cells in the
    Hasse diagram with matched edges reversed; same-label paths never leave
    the label class, so the check runs class by class."""
    cx = mc.complex
    lat = cx.lattice
    critical = set(mc.critical)
    matched = set(mc.matching.pairs)
    for cells in _cells_by_label(cx).values():
        inside = set(cells)
        succ: dict[int, list[int]] = {c: [] for c in cells}
        for hi, lo in lat.covers:
            if hi in inside and lo in inside:
                if (hi, lo) in matched:
                    succ[lo].append(hi)
                else:
                    succ[hi].append(lo)
        for start in cells:
            if start not in critical:
                continue
            stack = list(succ[start])
            seen = set()
            while stack:
                c = stack.pop()
                if c in seen:
                    continue
                seen.add(c)
                if c in critical:
                    return False
                stack.extend(succ[c])
    return True


# ---------------------------------------------------------------------------
# Exhaustive search per label class.


@dataclass
class SearchResult:
    support: frozenset
    min_critical: int
    min_by_dim: dict[int, int]
    achievable_minimal: bool
    certificate: tuple[tuple[int, int], ...]  # matching attaining the minimum
    minimal_certificate: tuple[tuple[int, int], ...] | None

    def to_json(self) -> dict:
        return {
            "support": sorted(self.support),
            "min_critical": self.min_critical,
            "min_by_dim": {str(k): v for k, v in sorted(self.min_by_dim.items())},
            "achievable_minimal": self.achievable_minimal,
            "certificate": sorted(map(list, self.certificate)),
            "minimal_certificate": (
                sorted(map(list, self.minimal_certificate))
                if self.minimal_certificate is not None else None
            ),
        }


def class_differential(cls: hl.LabelClass, pairs) -> dict[tuple[int, int], int]:
    """Gradient-path differential restricted to one label class.

    Same-label gradient paths never leave the class, so this is the exact
    same-label block of the full Morse differential.
    """
    lat = cls.complex.lattice
    inside = set(cls.cells)
    up = {lo: hi for hi, lo in pairs}
    down = {hi for hi, _ in pairs}
    below = {c: [lo for hi, lo in lat.covers if hi == c and lo in inside]
             for c in cls.cells}
    cache: dict[int, dict[int, int]] = {}

    def flow(c: int) -> dict[int, int]:
        if c in cache:
            return cache[c]
        if c not in up and c not in down:
            out = {c: 1}
        elif c in up:
            mcell = up[c]
            out = {}
            w0 = -lat.signs[(mcell, c)]
            for c2 in below[mcell]:
                if c2 == c:
                    continue
                w = w0 * lat.signs[(mcell, c2)]
                for t, k in flow(c2).items():
                    out[t] = out.get(t, 0) + w * k
        else:
            out = {}
        cache[c] = out
        return out

    diff: dict[tuple[int, int], int] = {}
    for s in cls.cells:
        if s in up or s in down:
            continue
        acc: dict[int, int] = {}
        for c in below[s]:
            w = lat.signs[(s, c)]
            for t, k in flow(c).items():
                acc[t] = acc.get(t, 0) + w * k
        for t, k in acc.items():
            if k:
                diff[(s, t)] = k
    return diff


def optimal_search(cls: hl.LabelClass, betti_slice: dict[int, int],
                   fld: str = "q", max_cells: int = 24) -> SearchResult:
    """Exhaustive search over acyclic matchings of one label class.

    Returns the minimum critical-cell count (with a witness) and whether
    some matching leaves exactly the Betti numbers of the class's
    multidegree, which is equivalent to a minimal same-label block.
    The matching certificate for the minimal case is additionally checked
    to produce no invertible same-label differential entry.
    """
    if len(cls.cells) > max_cells:
        raise ResourceLimitError(
            f"class has {len(cls.cells)} cells, search capped at {max_cells}"
        )
    lat = cls.complex.lattice
    cells = sorted(cls.cells, key=lambda c: (-lat.dims[c], c))
    covers = cls.covers()
    neighbors: dict[int, list[int]] = {c: [] for c in cells}
    for hi, lo in covers:
        neighbors[hi].append(lo)
        neighbors[lo].append(hi)
    order = {c: i for i, c in enumerate(cells)}
    target = {d: betti_slice.get(d, 0) for d in range(max(lat.dims) + 1)}

    best = {"count": None, "pairs": None}
    minimal = {"pairs": None}

    target_total = sum(target.values())

    def finish(pairs):
        n_crit = len(cells) - 2 * len(pairs)
        if best["count"] is None or n_crit < best["count"]:
            best["count"] = n_crit
            best["pairs"] = tuple(sorted(pairs))
        if minimal["pairs"] is None:
            matched = {c for p in pairs for c in p}
            counts: dict[int, int] = {}
            for c in cells:
                if c not in matched:
                    counts[lat.dims[c]] = counts.get(lat.dims[c], 0) + 1
            if counts == {d: v for d, v in target.items() if v}:
                diff = class_differential(cls, pairs)
                if any(_unit(v, fld) for v in diff.values()):
                    raise InternalConsistencyError(
                        "Betti-count matching produced a unit entry"
                    )
                minimal["pairs"] = tuple(sorted(pairs))

    def dfs(i: int, pairs: list, matched: set, crit_now: int):
        if i == len(cells):
            finish(pairs)
            return
        # a cell before position i that is unmatched stays critical, so
        # crit_now bounds the final count from below; prune only branches
        # that can neither beat the best count nor still hit the Betti
        # target exactly
        cannot_improve = best["count"] is not None and crit_now >= best["count"]
        cannot_be_minimal = (
            minimal["pairs"] is not None or crit_now > target_total
        )
        if cannot_improve and cannot_be_minimal:
            return
        c = cells[i]
        if c in matched:
            dfs(i + 1, pairs, matched, crit_now)
            return
        for nb in neighbors[c]:
            if nb in matched or order[nb] <= i:
                continue
            pair = (c, nb) if lat.dims[c] > lat.dims[nb] else (nb, c)
            if _acyclic_on(lat, cells, pairs + [pair]):
                matched.update((c, nb))
                dfs(i + 1, pairs + [pair], matched, crit_now)
                matched.difference_update((c, nb))
        dfs(i + 1, pairs, matched, crit_now + 1)

    dfs(0, [], set(), 0)
    matched = {c for p in best["pairs"] for c in p}
    by_dim: dict[int, int] = {}
    for c in cells:
        if c not in matched:
            by_dim[lat.dims[c]] = by_dim.get(lat.dims[c], 0) + 1
    return SearchResult(
        support=cls.support,
        min_critical=best["count"],
        min_by_dim=by_dim,
        achievable_minimal=minimal["pairs"] is not None,
        certificate=best["pairs"],
        minimal_certificate=minimal["pairs"],
    )
