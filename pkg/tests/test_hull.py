import itertools

import pytest

from hullmorse import graphs as G
from hullmorse import homology as HM
from hullmorse import hull as H
from hullmorse.errors import InternalConsistencyError, InvalidInputError


def comp_cycle(n):
    return G.complement(G.cycle(n))


class TestHullComplex:
    def test_labels_are_lcms(self):
        cx = H.hull_complex(G.path(4))
        lat = cx.lattice
        f = frozenset({(0, 1), (2, 3)})
        assert cx.labels[lat.index[f]] == frozenset({0, 1, 2, 3})
        f = frozenset({(0, 1), (1, 2)})
        assert cx.labels[lat.index[f]] == frozenset({0, 1, 2})

    def test_empty_face_label_is_one(self):
        for g in [G.path(3), G.cycle(5), G.complete(4)]:
            cx = H.hull_complex(g)
            assert cx.labels[0] == frozenset()
            assert cx.lattice.dims[0] == -1

    def test_isolated_vertex_never_labeled(self):
        g = G.Graph(range(4), [(0, 1), (1, 2)])  # 3 isolated
        cx = H.hull_complex(g)
        assert all(3 not in lab for lab in cx.labels)

    def test_top_label_full_iff_no_isolated_vertex(self):
        cx = H.hull_complex(G.cycle(5))
        assert cx.labels[cx.lattice.top] == frozenset(range(5))

    def test_label_monotone_on_covers(self):
        for g in [G.cycle(5), G.complete(4), comp_cycle(5),
                  G.disjoint_union(G.cycle(4), G.cycle(4))]:
            cx = H.hull_complex(g)
            for hi, lo in cx.lattice.covers:
                assert cx.labels[lo] <= cx.labels[hi]

    def test_chain_complex_squares_to_zero(self):
        for g in [G.cycle(5), comp_cycle(5), G.complete(4)]:
            cc = H.hull_complex(g).to_chain_complex()
            assert cc.check_boundary_squares_to_zero()


class TestLabelClasses:
    def test_bipartite_table(self):
        # connected bipartite graphs with triangle-free complement are the
        # connected subgraphs of a 4-cycle; their full-support classes
        assert len(H.mg(G.path(2))) == 1
        assert len(H.mg(G.path(3))) == 1
        assert len(H.mg(G.path(4))) == 2
        assert len(H.mg(G.cycle(4))) == 1

    def test_known_sizes(self):
        assert len(H.mg(comp_cycle(5))) == 11
        assert len(H.mg(comp_cycle(6))) == 13
        g44 = G.complement(G.disjoint_union(G.cycle(4), G.cycle(4)))
        assert len(H.mg(g44)) == 17

    def test_empty_class_iff_isolated(self):
        g = comp_cycle(5)
        cx = H.hull_complex(g)
        for size in range(1, 6):
            for u in itertools.combinations(range(5), size):
                h = G.induced(g, u)
                cls = H.label_class(g, u, cx)
                isolated = any(h.degree(v) == 0 for v in u)
                assert (len(cls) == 0) == isolated

    def test_single_cell_class(self):
        g = comp_cycle(5)
        cls = H.label_class(g, {0, 2, 4})
        # induced graph is a path with two edges, whose class is a point
        assert len(cls) == 1

    def test_product_factorization(self):
        gbar = G.disjoint_union(G.cycle(4), G.cycle(4))
        cx = H.hull_complex(gbar)
        # the two components are 4-cycles, one cell each
        cls = H.label_class(gbar, range(8), cx)
        assert len(cls.factors) == 2
        assert len(cls) == 1

    def test_factor_sizes_multiply_on_corpus(self):
        g = G.disjoint_union(G.path(4), G.path(4))
        cls = H.mg(g)
        assert [len(f) for f in cls.factors] == [2, 2]
        assert len(cls) == 4

    def test_facets_in_class(self):
        # every NC facet of a fundamental set carries the full label
        g = comp_cycle(5)
        cls = H.mg(g)
        lat = cls.complex.lattice
        gens = {lat.faces[i] for i in cls.cells}
        for e in G.cycle(5).edges:
            assert frozenset(G.nbhd(g, set(e)).nc.edges) in gens

    def test_class_covers_and_top(self):
        cls = H.mg(comp_cycle(5))
        lat = cls.complex.lattice
        assert lat.dims[cls.top_cell()] == 4
        assert len(cls.covers()) == 5 + 10  # facets under top, edges under facets

    def test_serialization(self):
        cls = H.mg(G.path(4))
        js = cls.to_json()
        assert js["support"] == [0, 1, 2, 3]
        assert len(js["cells"]) == 2
        assert "digraph" in cls.to_dot()


class TestPairTypes:
    def test_type1(self):
        g = G.complement(G.graph(7, [(0, 1), (0, 2), (0, 3), (1, 4), (1, 5)]))
        pt = H.classify_pair(g, {0}, {1})
        assert pt.tag == 1 and not pt.in_mg

    def test_type2(self):
        gbar = G.graph(6, [(0, 1), (0, 2), (0, 3), (1, 4), (1, 5),
                           (2, 4), (3, 5)])
        g = G.complement(gbar)
        pt = H.classify_pair(g, {0}, {1})
        assert pt.tag == 2 and pt.in_mg

    def test_type3(self):
        g = G.complement(G.graph(7, [(0, 2), (0, 3), (0, 4), (1, 4), (1, 5), (1, 6)]))
        pt = H.classify_pair(g, {0}, {1})
        assert pt.tag == 3 and not pt.in_mg

    def test_pair_pair_types(self):
        g = comp_cycle(6)
        # C6 complement edges: fundamental pairs are the cycle edges
        pt = H.classify_pair(g, {0, 1}, {3, 4})
        assert pt.tag == 4 and not pt.in_mg
        pt = H.classify_pair(g, {0, 1}, {1, 2})
        assert pt.tag == 6 and pt.in_mg

    def test_type5_shared_fundamental_vertex(self):
        gbar = G.graph(5, [(0, 1), (0, 2), (0, 3)])
        g = G.complement(gbar)
        pt = H.classify_pair(g, {0, 1}, {0, 2})
        assert pt.tag == 5 and not pt.in_mg

    def test_type7_containment_beats_side_conditions(self):
        g = G.graph(5, [(0, 4), (1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)])
        pt = H.classify_pair(g, {0, 1}, {0})
        assert pt.tag == 7 and pt.in_mg

    def test_singleton_pair_types(self):
        gbar = G.graph(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)])
        g = G.complement(gbar)  # C5 complement plus a dominating vertex 5
        pt = H.classify_pair(g, {5}, {0, 1})
        assert pt.tag == 8 and not pt.in_mg

    def test_type11(self):
        g = G.graph(5, [(0, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)])
        pt = H.classify_pair(g, {0}, {1, 2})
        assert pt.tag == 11 and pt.in_mg

    def test_rejects_non_fundamental(self):
        g = comp_cycle(5)
        with pytest.raises(InvalidInputError):
            H.classify_pair(g, {0}, {1})  # singletons not fundamental here
        with pytest.raises(InvalidInputError):
            H.classify_pair(g, {0, 1}, {0, 1})

    def test_rejects_bad_graph(self):
        with pytest.raises(InvalidInputError):
            H.classify_pair(G.cycle(4), {0}, {1})

    def test_table_vs_direct_sweep(self):
        # every fundamental-set pair on small graphs; classify_pair raises
        # internally if the table and the direct test ever part ways
        pairs5 = list(itertools.combinations(range(5), 2))
        count = 0
        for mask in range(2 ** len(pairs5)):
            gbar = G.graph(5, [p for i, p in enumerate(pairs5) if (mask >> i) & 1])
            if not G.is_triangle_free(gbar):
                continue
            g = G.complement(gbar)
            if not G.is_connected(g) or G.is_bipartite(g):
                continue
            fv, fe = G.fundamentality_fast(g)
            fsets = [frozenset({v}) for v in sorted(fv)]
            fsets += [frozenset(e) for e in sorted(fe)]
            for a, b in itertools.combinations(fsets, 2):
                H.classify_pair(g, a, b)
                count += 1
        assert count > 100


class TestMFromF:
    @pytest.mark.parametrize("gbar", [G.cycle(5), G.cycle(6), G.cycle(7),
                                      G.disjoint_union(G.cycle(4), G.cycle(4))],
                             ids=["C5", "C6", "C7", "C4+C4"])
    def test_matches_polytope_class(self, gbar):
        g = G.complement(gbar)
        f, fverts, fedges = H.f_graph(g)
        cls = H.m_from_f(g)
        assert len(cls) == 1 + f.n + len(f.edges)

    def test_known_cell_counts(self):
        assert len(H.m_from_f(comp_cycle(5))) == 11
        assert len(H.m_from_f(comp_cycle(6))) == 13
        g44 = G.complement(G.disjoint_union(G.cycle(4), G.cycle(4)))
        assert len(H.m_from_f(g44)) == 17

    def test_f_graph_shapes(self):
        f, fverts, fedges = H.f_graph(comp_cycle(5))
        assert f.n == 5 and len(f.edges) == 5
        f, _, _ = H.f_graph(G.complement(G.disjoint_union(G.cycle(4), G.cycle(4))))
        assert len(f.components()) == 2

    def test_rejects_bipartite(self):
        with pytest.raises(InvalidInputError):
            H.f_graph(G.cycle(4))


class TestHullResolves:
    @pytest.mark.parametrize("g", [G.path(4), G.cycle(5), comp_cycle(5),
                                   G.complete(4),
                                   G.disjoint_union(G.cycle(4), G.cycle(4))],
                             ids=["P4", "C5", "compC5", "K4", "C4+C4"])
    def test_strands_acyclic(self, g):
        cc = H.hull_complex(g).to_chain_complex()
        assert HM.strand_check(cc).ok

    def test_deleting_a_facet_breaks_a_strand(self):
        cc = H.hull_complex(G.path(4)).to_chain_complex()
        lat = H.hull_complex(G.path(4)).lattice
        drop = lat.facet_indices()[0]
        keep = [i for i in range(len(cc.dims)) if i != drop]
        remap = {old: new for new, old in enumerate(keep)}
        boundary = {}
        for c in keep:
            ents = tuple((remap[b], s) for b, s in cc.boundary.get(c, ())
                         if b in remap)
            if ents:
                boundary[remap[c]] = ents
        broken = HM.ChainComplex(
            dims=tuple(cc.dims[i] for i in keep),
            labels=tuple(cc.labels[i] for i in keep),
            boundary=boundary,
        )
        v = HM.strand_check(broken)
        assert not v.ok

    def test_cell_counts_bound_betti(self):
        # per (degree, label) the hull complex has at least as many cells
        # as the Betti table demands
        for g in [G.cycle(5), comp_cycle(5), G.complete(4)]:
            cc = H.hull_complex(g).to_chain_complex()
            counts = {}
            for d, lab in zip(cc.dims, cc.labels):
                if d >= 0:
                    counts[(d, lab)] = counts.get((d, lab), 0) + 1
            bt = HM.hochster_betti(g, "q")
            for key, val in bt.entries.items():
                assert counts.get(key, 0) >= val
