import pytest

from amalgamkit import MalformedSequenceError, catalog
from amalgamkit.amalgam import canonical_form
from amalgamkit.bass_serre.graph import induced_graph_of_groups
from amalgamkit.bass_serre.tree import D1, D_MINUS, act
from amalgamkit.constants import Side
from amalgamkit.metrics.distortion import random_words
from amalgamkit.rewriting.proposition_a import proposition_a_transform
from amalgamkit.rewriting.proposition_b import lemma31_form, proposition_b_pipeline
from amalgamkit.rewriting.sequences import EdgeStep, check_reduced_sequence, h_reduced_sequence, normal_form, syllable_lower_bound
from amalgamkit.selftest import stable_words
from amalgamkit.words import EMPTY, Word, parse_word, render_word


def stable_power(D, n: int) -> Word:
    return Word(((D.stable_letters[0], 1),) * n)


class TestReducedSequences:
    def test_square_of_stable_letter(self, sl2z_domain, sl2z_graph):
        sequence = h_reduced_sequence(sl2z_graph, stable_power(sl2z_domain, 2))
        assert sequence.stable_count == 2
        assert all(sequence.is_trivial_term(k) for k in range(len(sequence.elements)))
        terms = normal_form(sl2z_graph, stable_power(sl2z_domain, 2))
        assert len(terms) == 2
        assert all(isinstance(term, EdgeStep) for term in terms)

    def test_stable_letter_and_inverse_cancel(self, sl2z_domain, sl2z_graph):
        name = sl2z_domain.stable_letters[0]
        sequence = h_reduced_sequence(sl2z_graph, Word(((name, 1), (name, -1))))
        assert sequence.stable_count == 0
        assert sequence.evaluate().is_identity

    def test_elliptic_generators_share_one_edge(self, centralizer_domain, centralizer_graph):
        w = centralizer_domain.expressions[0] * centralizer_domain.expressions[1]
        sequence = h_reduced_sequence(centralizer_graph, w)
        assert sequence.stable_count == 0
        assert sequence.evaluate() == canonical_form(centralizer_domain.presentation, "bx")
        assert check_reduced_sequence(sequence) == []

    def test_sequences_evaluate_to_their_words(self, sl2z_domain, sl2z_graph):
        for w in stable_words(sl2z_domain.stable_letters, 3):
            sequence = h_reduced_sequence(sl2z_graph, w)
            assert sequence.evaluate() == sl2z_domain.evaluate_z(w)
            assert check_reduced_sequence(sequence) == []


class TestSyllableBound:
    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_powers_double(self, sl2z_domain, sl2z_graph, n):
        bound = syllable_lower_bound(sl2z_graph, stable_power(sl2z_domain, n))
        assert bound.n_stable == n
        assert bound.m == 2 * n
        assert bound.ok

    def test_trivial_word(self, sl2z_graph):
        bound = syllable_lower_bound(sl2z_graph, EMPTY)
        assert bound == (0, 0)
        assert bound.ok

    def test_surface_subgroup_free_on_two_stable_letters(self, surface_free_domain):
        D = surface_free_domain
        assert len(D.stable_letters) == 2
        assert D.is_free_on_stable_letters()
        B = induced_graph_of_groups(D)
        for w in stable_words(D.stable_letters, 4):
            bound = syllable_lower_bound(B, w)
            assert bound.ok, render_word(w)
            assert bound.n_stable == len(w)


class TestPropositionA:
    def test_transform_reproduces_h(self, sl2z_domain, sl2z_graph):
        P = sl2z_domain.presentation
        for w in stable_words(sl2z_domain.stable_letters, 3):
            sequence = h_reduced_sequence(sl2z_graph, w)
            transformed = proposition_a_transform(sl2z_graph, sequence)
            assert P.canonical_from_syllables(transformed.form.syllables) == sequence.evaluate()
            assert transformed.checks.passed, [e.law for e in transformed.checks.failures]
            assert transformed.nerve <= transformed.length

    def test_powers_of_stable_letter_have_no_cores(self, sl2z_domain, sl2z_graph):
        transformed = proposition_a_transform(sl2z_graph, h_reduced_sequence(sl2z_graph, stable_power(sl2z_domain, 3)))
        assert transformed.length == 6
        assert transformed.cores == {}
        assert len(transformed.lines()) > len(transformed.trace)

    def test_base_case_keeps_the_conjugating_path(self, surface, surface_conjugated_graph):
        D = surface_conjugated_graph.domain
        v = act(surface, "b", D_MINUS)
        assert D.in_y1(v)
        w = Word(((D.group(v).names[0], 1),))
        transformed = proposition_a_transform(surface_conjugated_graph, h_reduced_sequence(surface_conjugated_graph, w))
        assert transformed.branches == ["base"]
        assert [surface.render_syllable(s) for s in transformed.form.syllables] == ["b", "c", "b'"]
        assert transformed.cores == {1: 2}
        assert transformed.nerve == 2
        assert transformed.checks.passed, [e.law for e in transformed.checks.failures]
        assert transformed.checks["non-core-bounded"].instances == 2

    def test_alternating_vertex_terms_are_cores(self, surface_cores_domain, surface_cores_graph):
        D = surface_cores_domain
        a, c = D.group(D1).names[0], D.group(D_MINUS).names[0]
        w = Word(((a, 1), (c, 1), (a, -1)))
        transformed = proposition_a_transform(surface_cores_graph, h_reduced_sequence(surface_cores_graph, w))
        assert transformed.cores == {1: 1, 2: 2, 3: 3}
        assert transformed.checks.passed, [e.law for e in transformed.checks.failures]
        assert transformed.checks["core-shape"].instances == 3
        assert transformed.checks["adjacent-cores"].instances == 2

    def test_every_short_word_has_its_cores(self, surface_cores_domain, surface_cores_graph):
        B = surface_cores_graph
        for w in stable_words(surface_cores_domain.z_names, 4):
            transformed = proposition_a_transform(B, h_reduced_sequence(B, w))
            assert transformed.cores, render_word(w)
            assert transformed.checks.passed, (render_word(w), [e.law for e in transformed.checks.failures])

    def test_elements_of_c_are_rejected(self, centralizer_domain, centralizer_graph):
        x = centralizer_domain.group(D_MINUS).names[0]
        with pytest.raises(MalformedSequenceError):
            proposition_a_transform(centralizer_graph, h_reduced_sequence(centralizer_graph, Word(((x, 1), (x, 1)))))


class TestPropositionB:
    def test_identity(self, sl2z):
        result = proposition_b_pipeline(sl2z, "1")
        assert result.word == EMPTY
        assert result.vertex_segments == []

    def test_c_element_is_absorbed(self, sl2z):
        assert proposition_b_pipeline(sl2z, "srrrs").word == EMPTY

    def test_free_factors(self, surface):
        result = proposition_b_pipeline(surface, "abcd")
        assert [s.side for s in result.vertex_segments] == [Side.PLUS, Side.MINUS]
        assert result.word == parse_word("abcd")

    @pytest.mark.parametrize("name", ["sl2z", "surface", "centralizer"])
    def test_output_represents_the_input(self, name):
        P = catalog.get(name).load()
        for w in random_words(P, 40, 8, seed=13):
            result = proposition_b_pipeline(P, Word(w))
            assert canonical_form(P, result.word) == canonical_form(P, w), result.lines()


class TestLemma31:
    def test_c_element(self, surface):
        form = lemma31_form(surface, "aba'b'")
        assert form.syllables == [(Side.PLUS, parse_word("aba'b'"))]
        assert form.s == 0

    def test_coset_shortest_syllables(self, sl2z):
        form = lemma31_form(sl2z, "sssrrrr")
        assert form.syllables[1] == (Side.MINUS, parse_word("r"))
        assert canonical_form(sl2z, form.word) == canonical_form(sl2z, "sssrrrr")

    @pytest.mark.parametrize("name", ["sl2z", "surface", "centralizer"])
    def test_output_represents_the_input(self, name):
        P = catalog.get(name).load()
        for w in random_words(P, 40, 8, seed=17):
            form = lemma31_form(P, w)
            assert canonical_form(P, form.word) == canonical_form(P, w)
            assert [line.split(":")[0] for line in form.trace][-1] in ("step1", "step5")
