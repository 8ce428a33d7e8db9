import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hullmorse import graphs as G
from hullmorse import homology as HM
from hullmorse import hull as H
from hullmorse import morse as M
from hullmorse.errors import (
    InvalidInputError,
    PreconditionError,
    ResourceLimitError,
)


def comp_cycle(n):
    return G.complement(G.cycle(n))


def two_squares():
    return G.complement(G.disjoint_union(G.cycle(4), G.cycle(4)))


def cycle_matching_on_f_component(g):
    """Match each facet of one 4-cycle component of F with the codim-2 cell
    one step around the cycle.  Homogeneous by construction, and the
    reversed Hasse edges close up into a directed 8-cycle."""
    f, _, _ = H.f_graph(g)
    cx = H.hull_complex(g)
    lat = cx.lattice

    def facet(node):
        u = {node[1]} if node[0] == "v" else {node[1], node[2]}
        return lat.index[frozenset(G.nbhd(g, u).nc.edges)]

    comp = min(f.components(), key=lambda c: sorted(map(str, c)))
    adj = {v: [] for v in comp}
    for a, b in f.edges:
        if a in comp:
            adj[a].append(b)
            adj[b].append(a)
    order = [min(comp, key=str)]
    order.append(min(adj[order[0]], key=str))
    while len(order) < len(comp):
        (nxt,) = [x for x in adj[order[-1]] if x != order[-2]]
        order.append(nxt)
    pairs = []
    for i, y in enumerate(order):
        x = order[i - 1]
        lo = lat.faces[facet(x)] & lat.faces[facet(y)]
        pairs.append((facet(y), lat.index[lo]))
    return M.Matching(complex=cx, pairs=tuple(pairs))


class TestValidateMatching:
    def test_constructed_matching_validates(self):
        for g in [G.path(4), comp_cycle(5), two_squares()]:
            cx = H.hull_complex(g)
            m = M.paper_matching(g, cx)
            flags = M.validate_matching(cx, m)
            assert flags.homogeneous and flags.acyclic

    def test_non_homogeneous_pair_detected(self):
        cx = H.hull_complex(G.path(4))
        lat = cx.lattice
        hi, lo = next(
            (a, b) for a, b in lat.covers if cx.labels[a] != cx.labels[b]
        )
        flags = M.validate_matching(cx, M.Matching(complex=cx, pairs=((hi, lo),)))
        assert not flags.homogeneous

    def test_round_trip_on_one_cycle_is_not_acyclic(self):
        m = cycle_matching_on_f_component(two_squares())
        flags = M.validate_matching(m.complex, m)
        assert flags.homogeneous and not flags.acyclic

    def test_rejects_non_cover_pair(self):
        cx = H.hull_complex(G.path(4))
        top = cx.lattice.top
        with pytest.raises(InvalidInputError):
            M.validate_matching(cx, M.Matching(complex=cx, pairs=((top, 0),)))

    def test_rejects_reused_cell(self):
        cx = H.hull_complex(G.cycle(5))
        lat = cx.lattice
        below = lat.covers_below(lat.top)
        pairs = ((lat.top, below[0]), (lat.top, below[1]))
        with pytest.raises(InvalidInputError):
            M.validate_matching(cx, M.Matching(complex=cx, pairs=pairs))


class TestCriticalAndDifferential:
    def test_empty_matching_reproduces_boundary(self):
        cx = H.hull_complex(G.cycle(5))
        mc = M.critical_and_differential(M.Matching(complex=cx, pairs=()))
        assert mc.critical == tuple(range(len(cx.lattice.faces)))
        cc = cx.to_chain_complex()
        expect = {
            (a, b): s for a, ents in cc.boundary.items() for b, s in ents
        }
        assert mc.differential == expect

    def test_path_graph_counts(self):
        g = G.path(4)
        m = M.paper_matching(g)
        mc = M.critical_and_differential(m)
        assert len(m.pairs) == 1
        assert len(mc.critical) == 6
        bt = HM.hochster_betti(g, "q")
        assert mc.ranks() == bt.entries

    def test_critical_count_identity(self):
        for g in [comp_cycle(5), comp_cycle(6), two_squares()]:
            cx = H.hull_complex(g)
            m = M.paper_matching(g, cx)
            mc = M.critical_and_differential(m)
            assert len(mc.critical) == len(cx.lattice.faces) - 2 * len(m.pairs)

    def test_complement_of_pentagon_totals(self):
        mc = M.critical_and_differential(M.paper_matching(comp_cycle(5)))
        totals = {}
        for (d, _), v in mc.ranks().items():
            totals[d] = totals.get(d, 0) + v
        assert totals == {0: 5, 1: 5, 2: 1}

    def test_morse_complex_resolves(self):
        for g in [G.path(4), comp_cycle(5), two_squares()]:
            mc = M.critical_and_differential(M.paper_matching(g))
            assert HM.strand_check(mc.to_chain_complex()).ok

    def test_rejects_cyclic_matching(self):
        m = cycle_matching_on_f_component(two_squares())
        with pytest.raises(PreconditionError):
            M.critical_and_differential(m)

    @settings(max_examples=15, deadline=None)
    @given(st.sets(st.integers(min_value=0, max_value=200)))
    def test_submatchings_stay_valid(self, picks):
        # dropping pairs from an acyclic matching reverses fewer edges, so
        # the result stays acyclic and still yields a resolution
        g = comp_cycle(5)
        cx = H.hull_complex(g)
        full = M.paper_matching(g, cx).pairs
        sub = tuple(p for i, p in enumerate(full) if i in picks)
        m = M.Matching(complex=cx, pairs=sub)
        flags = M.validate_matching(cx, m)
        assert flags.homogeneous and flags.acyclic
        mc = M.critical_and_differential(m)
        assert len(mc.critical) == len(cx.lattice.faces) - 2 * len(sub)
        assert HM.strand_check(mc.to_chain_complex(), fields=("f2",)).ok


class TestConstructedMatching:
    @pytest.mark.parametrize("n", [4, 5, 6])
    def test_cycle_proper_classes(self, n):
        # in every nonempty proper-support class the matching leaves one
        # cell less than the induced complement subgraph has components
        gbar = G.cycle(n)
        g = G.complement(gbar)
        cx = H.hull_complex(g)
        mc = M.critical_and_differential(M.paper_matching(g, cx))
        crit = {}
        for c in mc.critical:
            if cx.lattice.dims[c] >= 0:
                crit[cx.labels[c]] = crit.get(cx.labels[c], 0) + 1
        seen = set()
        for lab in cx.labels:
            if not lab or lab == frozenset(range(n)) or lab in seen:
                continue
            seen.add(lab)
            ncomp = len(G.components(G.induced(gbar, lab)))
            assert crit.get(lab, 0) == ncomp - 1
        assert seen

    def test_product_over_components(self):
        # two triangle components leave two critical facets each, and the
        # glued matching leaves exactly their four products critical
        g = G.disjoint_union(G.complete(3), G.complete(3))
        cx = H.hull_complex(g)
        mc = M.critical_and_differential(M.paper_matching(g, cx))
        full = frozenset(range(6))
        crit = [c for c in mc.critical if cx.labels[c] == full]
        assert len(H.mg(g, cx)) == 16
        assert sorted(cx.lattice.dims[c] for c in crit) == [3, 3, 3, 3]
        bt = HM.hochster_betti(g, "q")
        rep = M.minimality_checks(mc, bt, "q")
        assert rep.counts_minimal and rep.path_minimal

    def test_rejects_bad_input(self):
        with pytest.raises(InvalidInputError):
            M.paper_matching(G.cycle(6))  # complement has triangles
        with pytest.raises(InvalidInputError):
            M.paper_matching(G.graph(3, [(0, 1)]))  # isolated vertex


class TestProductMatching:
    def test_single_factor_passthrough(self):
        a, b = frozenset({1}), frozenset({2})
        assert M.product_matching([([a, b], [(a, b)])]) == [(a, b)]

    def test_sweep_covers_everything(self):
        a, b = frozenset({1}), frozenset({2})
        c, d = frozenset({3}), frozenset({4})
        pairs = M.product_matching([([a, b], [(a, b)]), ([c, d], [(c, d)])])
        assert sorted(pairs) == [(a | c, b | c), (a | d, b | d)]

    def test_critical_cells_multiply(self):
        a, b, e = frozenset({1}), frozenset({2}), frozenset({5})
        c, d = frozenset({3}), frozenset({4})
        pairs = M.product_matching([([a, b, e], [(a, b)]), ([c, d], [(c, d)])])
        matched = {x for p in pairs for x in p}
        cells = [x | y for x in (a, b, e) for y in (c, d)]
        assert [x for x in cells if x not in matched] == []


class TestMinimality:
    @pytest.mark.parametrize("fld", ["q", "f2"])
    @pytest.mark.parametrize("gbar", [G.cycle(5), G.cycle(6)],
                             ids=["compC5", "compC6"])
    def test_cycle_complements_minimal(self, gbar, fld):
        g = G.complement(gbar)
        mc = M.critical_and_differential(M.paper_matching(g))
        rep = M.minimality_checks(mc, HM.hochster_betti(g, fld), fld)
        assert rep.counts_minimal and rep.unit_minimal and rep.path_minimal

    def test_empty_matching_is_not_minimal(self):
        cx = H.hull_complex(G.cycle(5))
        mc = M.critical_and_differential(M.Matching(complex=cx, pairs=()))
        rep = M.minimality_checks(mc, HM.hochster_betti(G.cycle(5), "q"), "q")
        assert not rep.counts_minimal
        assert not rep.unit_minimal
        assert not rep.path_minimal

    @pytest.mark.parametrize("fld", ["q", "f2"])
    def test_two_squares_minimal_without_path_condition(self, fld):
        # the two gradient paths between the leftover same-label critical
        # cells cancel, so the resolution is minimal even though the path
        # criterion fails
        g = two_squares()
        mc = M.critical_and_differential(M.paper_matching(g))
        rep = M.minimality_checks(mc, HM.hochster_betti(g, fld), fld)
        assert rep.counts_minimal
        assert rep.unit_minimal
        assert not rep.path_minimal


class TestOptimalSearch:
    def betti_slice(self, g, cls, fld="q"):
        bt = HM.hochster_betti(g, fld)
        return {i: v for (i, s), v in bt.entries.items() if s == cls.support}

    def test_fully_matchable_class(self):
        g = G.path(4)
        cls = H.mg(g)
        res = M.optimal_search(cls, self.betti_slice(g, cls))
        assert res.min_critical == 0
        assert res.achievable_minimal

    def test_pentagon_complement_class(self):
        g = comp_cycle(5)
        cls = H.mg(g)
        res = M.optimal_search(cls, self.betti_slice(g, cls))
        assert res.min_critical == 1
        assert res.min_by_dim == {2: 1}
        assert res.achievable_minimal

    def test_two_squares_class(self):
        g = two_squares()
        cls = H.mg(g)
        res = M.optimal_search(cls, self.betti_slice(g, cls))
        assert res.min_critical == 3
        assert res.min_by_dim == {5: 2, 6: 1}
        assert res.achievable_minimal

    def test_certificates_replay(self):
        g = two_squares()
        cx = H.hull_complex(g)
        cls = H.mg(g, cx)
        res = M.optimal_search(cls, self.betti_slice(g, cls))
        for pairs in (res.certificate, res.minimal_certificate):
            m = M.Matching(complex=cx, pairs=tuple(pairs))
            flags = M.validate_matching(cx, m)
            assert flags.homogeneous and flags.acyclic
        matched = {c for p in res.certificate for c in p}
        assert len(cls) - len(matched) == res.min_critical
        diff = M.class_differential(cls, res.minimal_certificate)
        assert not any(M._unit(v, "q") for v in diff.values())

    def test_class_differential_matches_global_block(self):
        g = comp_cycle(5)
        cx = H.hull_complex(g)
        m = M.paper_matching(g, cx)
        mc = M.critical_and_differential(m)
        cls = H.mg(g, cx)
        inside = set(cls.cells)
        local = M.class_differential(
            cls, [p for p in m.pairs if p[0] in inside]
        )
        full = {
            (a, b): v for (a, b), v in mc.differential.items()
            if a in inside and b in inside
        }
        assert local == full

    def test_size_cap(self):
        g = two_squares()
        cls = H.mg(g)
        with pytest.raises(ResourceLimitError):
            M.optimal_search(cls, {}, max_cells=10)
