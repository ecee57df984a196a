import dataclasses

import pytest

from amalgamkit import DomainError
from amalgamkit.bass_serre import laws, transversal
from amalgamkit.bass_serre.domain import (EllipticCertificate, FundamentalDomain, Inconclusive, VertexGroup, compute_fundamental_domain,
                                          find_fixed_vertex)
from amalgamkit.bass_serre.laws import verify_domain_laws
from amalgamkit.bass_serre.transversal import nerve, rho_sigma, transversal_elements
from amalgamkit.bass_serre.tree import D1, D_MINUS, act, fixes, render_vertex, tree_path, vertex_neighbors
from amalgamkit.constants import Budgets, LawStatus, Side, Strategy


class TestTree:
    def test_factor_element_fixes_its_vertex(self, sl2z):
        assert act(sl2z, "s", D1) == D1
        assert fixes(sl2z, "ss", D_MINUS)

    def test_translate_of_opposite_vertex(self, sl2z):
        v = act(sl2z, "s", D_MINUS)
        assert v != D_MINUS
        assert render_vertex(sl2z, v) == "s·A-1"
        assert tree_path(D_MINUS, v) == [D_MINUS, D1, v]

    def test_degrees_follow_transversals(self, sl2z):
        assert len(vertex_neighbors(sl2z, D1, 3).edges) == 2
        assert len(vertex_neighbors(sl2z, D_MINUS, 3).edges) == 3
        assert not vertex_neighbors(sl2z, D1, 3).truncated

    def test_free_factor_neighbours_are_truncated(self, surface):
        around = vertex_neighbors(surface, D1, 1)
        labels = sorted(surface.render_syllable(e.label) for e in around.edges if e.label is not None)
        assert labels == ["a", "a'", "b", "b'"]
        assert len(around.edges) == 5
        assert around.truncated


class TestFundamentalDomain:
    def test_sl2z_single_stable_letter(self, sl2z_domain):
        D = sl2z_domain
        assert D.certified
        assert D.y1 == (D1, D_MINUS)
        assert len(D.pairings) == 1
        assert D.has_trivial_stabilizers
        assert D.is_free_on_stable_letters()

    def test_centralizer_no_stable_letters(self, centralizer_domain):
        D = centralizer_domain
        assert D.certified
        assert D.y1 == (D1, D_MINUS)
        assert D.pairings == ()
        assert not D.groups[D1].is_trivial
        assert not D.groups[D_MINUS].is_trivial

    def test_generators_are_regenerated(self, sl2z_domain, centralizer_domain):
        for D in (sl2z_domain, centralizer_domain):
            for generator, expression in zip(D.generators, D.expressions):
                assert D.evaluate_z(expression) == generator

    def test_factor_subgroup_is_elliptic(self, surface, budgets):
        result = compute_fundamental_domain(surface, ["a", "b"], budgets)
        assert isinstance(result, EllipticCertificate)
        assert result.vertex == D1
        assert result.side is Side.PLUS

    def test_conjugate_of_factor_subgroup_is_elliptic(self, sl2z, budgets):
        result = compute_fundamental_domain(sl2z, ["srs'"], budgets)
        assert isinstance(result, EllipticCertificate)
        assert result.vertex == act(sl2z, "s", D_MINUS)
        assert result.side is Side.MINUS
        assert result.conjugator == sl2z.element("s")
        assert result.generators == (sl2z.factor(Side.MINUS).parse("r"),)

    def test_generators_inside_one_factor_up_to_c(self, centralizer, budgets):
        result = compute_fundamental_domain(centralizer, ["ab", "x"], budgets)
        assert isinstance(result, EllipticCertificate)
        assert result.vertex == D_MINUS
        assert result.conjugator.is_identity

    def test_hyperbolic_generator_is_not_elliptic(self, sl2z):
        assert find_fixed_vertex(sl2z, [sl2z.element("sr")], 4) is None

    def test_zero_budget_is_inconclusive(self, sl2z):
        result = compute_fundamental_domain(sl2z, ["sr"], Budgets(hball=0, depth=4, radius=6, memory=1000))
        assert isinstance(result, Inconclusive)

    def test_unknown_vertex(self, sl2z, sl2z_domain):
        far = act(sl2z, "srsr", D_MINUS)
        with pytest.raises(DomainError):
            sl2z_domain.index(far)


class TestGraphOfGroups:
    def test_sl2z_is_free_of_rank_one(self, sl2z_graph):
        assert len(sl2z_graph.stable_edges) == 1
        assert sl2z_graph.rank == 1
        assert sl2z_graph.is_maximal_subtree()

    def test_centralizer_single_edge(self, centralizer_graph):
        assert centralizer_graph.rank is None
        assert len(centralizer_graph.edges) == 1
        assert centralizer_graph.stable_edges == []
        assert centralizer_graph.edges[0].group

    def test_relators_hold_in_g(self, sl2z_graph, centralizer_graph):
        for B in (sl2z_graph, centralizer_graph):
            assert B.relator_failures() == []
            assert B.generators_in_h()

    def test_describe(self, sl2z_graph):
        lines = sl2z_graph.describe()
        assert sum(line.startswith("vertex:") for line in lines) == 2
        assert sum("; stable ;" in line for line in lines) == 1


class TestTransversals:
    def test_rho_sigma_on_y1(self, sl2z_domain):
        for v in sl2z_domain.y1:
            for j in Side:
                assert rho_sigma(sl2z_domain, v, j).rho == sl2z_domain.s(v)

    def test_rho_sigma_outside_domain(self, sl2z, sl2z_domain):
        with pytest.raises(DomainError):
            rho_sigma(sl2z_domain, act(sl2z, "srsr", D_MINUS), Side.PLUS)

    def test_constants(self, sl2z_domain):
        data = transversal_elements(sl2z_domain)
        assert data.K == 2 * sum(data.lengths.values())
        assert data.representatives
        P = sl2z_domain.presentation
        for s in data.sigma:
            assert (s.side, P.factor(s.side).inverse(s.element)) in data.sigma

    def test_nerve_is_independent_of_reduction(self, sl2z_domain):
        first = nerve(sl2z_domain, "srsr", Strategy.LEFT_TO_RIGHT)
        second = nerve(sl2z_domain, "srsr", Strategy.RIGHT_TO_LEFT)
        assert first == second


class TestDomainLaws:
    @pytest.mark.parametrize("fixture", ["sl2z_domain", "centralizer_domain", "surface_domain"])
    def test_laws_pass(self, fixture, request):
        report = verify_domain_laws(request.getfixturevalue(fixture))
        assert report.passed, [e.law for e in report.failures]

    def test_edge_laws_are_exercised(self, sl2z_domain):
        report = verify_domain_laws(sl2z_domain)
        assert report["edges-inequivalent"].status is LawStatus.PASS
        assert report["label-coset-misses-stabilizer"].instances > 0

    def test_tampered_stabilizer_is_caught(self, sl2z_domain):
        P = sl2z_domain.presentation
        groups = {}
        for v in sl2z_domain.y1:
            group = VertexGroup(P, v, sl2z_domain.index(v))
            group.add(P.factor(v.side).parse("s" if v.side is Side.PLUS else "r"))
            groups[v] = group
        tampered = dataclasses.replace(sl2z_domain, groups=groups)
        assert isinstance(tampered, FundamentalDomain)
        report = verify_domain_laws(tampered)
        assert not report.passed
        assert "label-coset-misses-stabilizer" in [e.law for e in report.failures]

    def test_tampered_coset_representative_is_caught(self, sl2z_domain):
        tampered = dataclasses.replace(sl2z_domain)
        x = sl2z_domain.pairings[0].vertex
        tampered._s[x] = tampered.presentation.identity
        assert verify_domain_laws(sl2z_domain)["left-segment-iff-precedes"].status is LawStatus.PASS
        failing = [e.law for e in verify_domain_laws(tampered).failures]
        assert "left-segment-iff-precedes" in failing

    def test_stable_tail_law_reads_the_transversal_products(self, sl2z_domain, monkeypatch):
        x = sl2z_domain.pairings[0].vertex
        untouched = verify_domain_laws(sl2z_domain)
        assert untouched["stable-tail-then-same"].instances > 0

        def tampered(D, v, j):
            value = transversal.rho_sigma(D, v, j)
            if v == x and j != x.side:
                return value._replace(rho=D.presentation.identity)
            return value

        monkeypatch.setattr(laws, "rho_sigma", tampered)
        report = verify_domain_laws(sl2z_domain)
        failing = [e.law for e in report.failures]
        assert "stable-tail-then-same" in failing
        assert report["pairing-then-opposite"] == untouched["pairing-then-opposite"]
        assert report["pairing-vertex-then-same"] == untouched["pairing-vertex-then-same"]
