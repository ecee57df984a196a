import pytest

from amalgamkit import AlphabetError
from amalgamkit.constants import Comparison
from amalgamkit.words import EMPTY, GeneratorOrdering, Word, free_reduce, invert, letter, parse_word, render_word, shortlex_compare


class TestParsing:
    def test_inverse_marks(self):
        assert parse_word("aba'b'") == Word((("a", 1), ("b", 1), ("a", -1), ("b", -1)))

    def test_identity_spellings(self):
        assert parse_word("1") == EMPTY
        assert parse_word("") == EMPTY
        assert render_word(EMPTY) == "1"

    def test_bracketed_names(self):
        w = parse_word("[g1][g2]'")
        assert w == Word((("g1", 1), ("g2", -1)))
        assert render_word(w) == "[g1][g2]'"

    def test_parse_reduces_freely(self):
        assert parse_word("abb'a'c") == letter("c")

    def test_unknown_generator(self):
        with pytest.raises(AlphabetError):
            parse_word("abz", alphabet={"a", "b"})

    def test_dangling_inverse(self):
        with pytest.raises(AlphabetError):
            parse_word("'a")

    def test_unclosed_bracket(self):
        with pytest.raises(AlphabetError):
            parse_word("[g1")


class TestReduction:
    def test_free_reduce_cancels_nested_pairs(self):
        raw = [("a", 1), ("b", 1), ("b", -1), ("a", -1), ("c", 1)]
        assert free_reduce(raw) == letter("c")

    def test_free_reduce_is_idempotent(self):
        w = free_reduce([("a", 1), ("b", -1), ("b", 1), ("c", -1)])
        assert free_reduce(w) == w

    def test_inverse(self):
        w = parse_word("abc'")
        assert invert(w) == parse_word("cb'a'")
        assert w * w.inverse == EMPTY

    def test_power(self):
        assert parse_word("ab") ** 3 == parse_word("ababab")
        assert parse_word("ab") ** -1 == parse_word("b'a'")

    def test_bad_sign(self):
        with pytest.raises(AlphabetError):
            free_reduce([("a", 2)])


class TestOrdering:
    @pytest.fixture
    def ordering(self):
        return GeneratorOrdering(["a", "b"])

    def test_letters_follow_generators(self, ordering):
        assert ordering.letters() == [("a", 1), ("a", -1), ("b", 1), ("b", -1)]
        assert ordering.order_tokens() == ["a", "a'", "b", "b'"]

    def test_shortlex_length_first(self, ordering):
        assert shortlex_compare(parse_word("b"), parse_word("aa"), ordering) is Comparison.LT

    def test_shortlex_generator_before_inverse(self, ordering):
        assert shortlex_compare(parse_word("a"), parse_word("a'"), ordering) is Comparison.LT
        assert shortlex_compare(parse_word("a'b"), parse_word("ab"), ordering) is Comparison.GT
        assert shortlex_compare(parse_word("ab"), parse_word("ab"), ordering) is Comparison.EQ

    def test_from_order(self):
        assert GeneratorOrdering.from_order(["s", "s'", "r", "r'"]).symbols == ("s", "r")

    def test_from_order_rejects_misplaced_inverse(self):
        with pytest.raises(AlphabetError):
            GeneratorOrdering.from_order(["s", "r", "s'", "r'"])

    def test_duplicate_names(self):
        with pytest.raises(AlphabetError):
            GeneratorOrdering(["a", "a"])

    def test_merged(self, ordering):
        assert ordering.merged(GeneratorOrdering(["c"])).symbols == ("a", "b", "c")
