import pytest

from amalgamkit import AlphabetError, MalformedAmalgamError, ValidationError, catalog
from amalgamkit.amalgam import (Syllable, canonical_form, coset_sequence, ends_in, is_proper_right_segment, is_right_segment,
                                reduce_to_syllables, syllable_length, validate_presentation)
from amalgamkit.constants import Side, Strategy
from amalgamkit.metrics.ball import CayleyBall
from amalgamkit.metrics.distortion import random_words
from amalgamkit.words import Word, parse_word


class TestValidation:
    def test_catalog_entries_validate(self):
        for name in ("surface", "sl2z", "centralizer", "cyclic:6,4,2", "surface:3", "centralizer:aab,3"):
            P = catalog.get(name).load()
            assert P.c_names

    def test_images_must_match(self):
        data = catalog.cyclic(4, 6, 2)
        data.images[Side.MINUS] = ["rr"]
        with pytest.raises(MalformedAmalgamError, match="isomorphism"):
            validate_presentation(data)

    def test_shared_generators(self):
        data = catalog.one_relator("ab", "cd")
        data.factors[Side.MINUS].generators = ["a", "d"]
        data.factors[Side.MINUS].order = []
        with pytest.raises(ValidationError, match="shared"):
            validate_presentation(data)

    def test_missing_image(self):
        data = catalog.cyclic(4, 6, 2)
        data.images[Side.PLUS] = []
        with pytest.raises(ValidationError, match="images"):
            validate_presentation(data)

    def test_trivial_c(self):
        P = validate_presentation(catalog.cyclic(2, 3, 1))
        assert P.c_is_finite
        assert syllable_length(P, "srsr") == 4

    def test_foreign_letter(self, sl2z):
        with pytest.raises(AlphabetError):
            sl2z.parse("sq")


class TestReducedForms:
    def test_alternating_syllables(self, sl2z):
        form = reduce_to_syllables(sl2z, "srs")
        assert form.length == 3
        assert [s.side for s in form.syllables] == [Side.PLUS, Side.MINUS, Side.PLUS]

    def test_c_syllable_is_absorbed(self, surface):
        form = reduce_to_syllables(surface, "acdc'd'a")
        assert form.length == 1
        assert form.syllables == (Syllable(Side.PLUS, parse_word("abab'")),)
        assert canonical_form(surface, "acdc'd'a") == canonical_form(surface, "abab'")

    def test_word_in_c(self, surface):
        form = reduce_to_syllables(surface, "aba'b'")
        assert form.in_c
        assert form.length == 0

    @pytest.mark.parametrize("name", ["sl2z", "surface", "centralizer"])
    def test_strategies_agree(self, name):
        P = catalog.get(name).load()
        for w in random_words(P, 60, 10, seed=7):
            first = reduce_to_syllables(P, w, Strategy.LEFT_TO_RIGHT)
            second = reduce_to_syllables(P, w, Strategy.RIGHT_TO_LEFT)
            assert first.length == second.length == syllable_length(P, w)
            assert coset_sequence(P, first) == coset_sequence(P, second)


class TestCanonicalForms:
    def test_relation_gives_identity(self, sl2z):
        assert canonical_form(sl2z, "ssrrr").is_identity
        assert sl2z.render("ssrrr") == "1"

    def test_transversal_and_tail(self, sl2z):
        g = canonical_form(sl2z, "sss")
        A = sl2z.factor(Side.PLUS)
        assert [A.render(s.element) for s in g.syllables] == ["s"]
        assert A.render(g.tail) == "ss"
        assert g.tail_word == parse_word("t")

    def test_powers_of_sr(self, sl2z):
        assert syllable_length(sl2z, "srsrsr") == 6
        assert syllable_length(sl2z, "s") == 1

    def test_commutator_is_c(self, surface):
        g = canonical_form(surface, "aba'b'")
        assert g.in_c and not g.is_identity
        assert g.tail_word == parse_word("t")

    def test_c_element_crosses_sides(self, centralizer):
        g = canonical_form(centralizer, "abx")
        assert g.length == 1
        assert g.syllables[0].side is Side.MINUS

    @pytest.mark.parametrize("name", ["sl2z", "surface", "centralizer"])
    def test_word_problem_is_a_homomorphism(self, name):
        P = catalog.get(name).load()
        words = random_words(P, 120, 10, seed=11)
        for u, v in zip(words[::2], words[1::2]):
            assert canonical_form(P, Word(u + v)) == P.multiply(canonical_form(P, u), canonical_form(P, v))

    def test_inverse(self, surface):
        for w in random_words(surface, 30, 8, seed=3):
            assert surface.multiply(w, surface.inverse(w)).is_identity

    def test_word_of_round_trip(self, centralizer):
        for w in random_words(centralizer, 30, 8, seed=5):
            g = canonical_form(centralizer, w)
            assert canonical_form(centralizer, centralizer.word_of(g)) == g

    def test_local_and_embed(self, sl2z):
        A = sl2z.factor(Side.MINUS)
        r = A.parse("r")
        assert sl2z.local(sl2z.embed(Side.MINUS, r), Side.MINUS) == r
        assert sl2z.local(canonical_form(sl2z, "sr"), Side.MINUS) is None
        assert sl2z.local(canonical_form(sl2z, "ss"), Side.MINUS) == A.parse("rrr")


class TestSegments:
    def test_last_syllable_is_right_segment(self, sl2z):
        assert is_right_segment(sl2z, "srs", "s")
        assert is_right_segment(sl2z, "srs", "rs")
        assert is_proper_right_segment(sl2z, "srs", "rs")
        assert not is_right_segment(sl2z, "srs", "r")

    def test_product_ends_in_last_factor(self, sl2z):
        ball = list(CayleyBall(sl2z, 3))
        for y in ball:
            side = ends_in(sl2z, y)
            if side is None:
                continue
            for x in ball:
                if is_right_segment(sl2z, x, sl2z.inverse(y)):
                    continue
                assert ends_in(sl2z, sl2z.multiply(x, y)) is side
