import pytest

from amalgamkit import ValidationError
from amalgamkit.amalgam import FactorData, build_factor
from amalgamkit.catalog import cyclic_factor
from amalgamkit.constants import CosetSide, Side
from amalgamkit.words import EMPTY, parse_word


@pytest.fixture
def z4():
    return build_factor(cyclic_factor("s", 4))


@pytest.fixture
def free_ab():
    return build_factor(FactorData(kind="free", generators=["a", "b"]))


class TestFiniteGroup:
    def test_table_arithmetic(self, z4):
        s = z4.parse("s")
        assert z4.size == 4
        assert z4.power(s, 4) == z4.identity
        assert z4.inverse(s) == z4.parse("sss")
        assert z4.order(s) == 4

    def test_spellings_are_geodesic(self, z4):
        assert z4.render(z4.parse("sss")) == "s'"
        assert z4.length(z4.parse("ss")) == 2

    def test_ball_covers_the_group(self, z4):
        ball = z4.enumerate_ball(3)
        assert ball.complete
        assert ball.sphere_sizes == [1, 2, 1]

    @pytest.mark.parametrize("g", [-1, 4])
    def test_element_ids_out_of_range(self, z4, g):
        with pytest.raises(ValidationError, match="out of table range"):
            z4.multiply(g, z4.identity)
        with pytest.raises(ValidationError, match="out of table range"):
            z4.inverse(g)

    def test_missing_row(self):
        data = cyclic_factor("s", 3)
        data.table.pop(("s", "s"))
        with pytest.raises(ValidationError, match="not total"):
            build_factor(data)

    def test_not_a_group(self):
        table = {("e", "e"): "e", ("e", "g"): "g", ("g", "e"): "g", ("g", "g"): "g"}
        data = FactorData(kind="finite", generators=["g"], elements=["e", "g"], table=table)
        with pytest.raises(ValidationError, match="no inverse"):
            build_factor(data)

    def test_unknown_kind(self):
        with pytest.raises(ValueError, match="Factor kind not found"):
            build_factor(FactorData(kind="hyperbolic", generators=["a"]))


class TestRecognizers:
    def test_commutator_subgroup_of_free_group(self, free_ab):
        commutator = parse_word("aba'b'")
        recognizer = free_ab.build_recognizer([commutator], ["t"])
        assert recognizer.express(commutator * commutator) == parse_word("tt")
        assert recognizer.express(commutator ** -3) == parse_word("t't't'")
        assert not recognizer.is_member(parse_word("ab"))
        assert not recognizer.is_finite

    def test_trivial_subgroup(self, free_ab):
        recognizer = free_ab.build_recognizer([])
        assert recognizer.is_trivial
        assert recognizer.express(EMPTY) == EMPTY
        assert recognizer.express(parse_word("a")) is None

    def test_finite_subgroup(self, z4):
        recognizer = z4.build_recognizer([z4.parse("ss")], ["t"])
        assert recognizer.elements == {z4.identity, z4.parse("ss")}
        assert recognizer.express(z4.parse("ss")) == parse_word("t")

    def test_intersection_of_free_subgroups(self, free_ab):
        first = free_ab.build_recognizer([parse_word("a"), parse_word("b")])
        second = free_ab.build_recognizer([parse_word("aa")])
        assert free_ab.intersect(first, second) == [parse_word("aa")]


class TestCosetRepresentatives:
    def test_finite_left_coset(self, sl2z):
        A = sl2z.factor(Side.PLUS)
        assert A.render(A.coset_representative(sl2z.recognizer(Side.PLUS), A.parse("sss"))) == "s"

    def test_member_maps_to_identity(self, sl2z):
        A = sl2z.factor(Side.PLUS)
        assert A.coset_representative(sl2z.recognizer(Side.PLUS), A.parse("ss")) == A.identity

    def test_free_left_coset(self, surface):
        A = surface.factor(Side.PLUS)
        recognizer = surface.recognizer(Side.PLUS)
        assert A.coset_representative(recognizer, parse_word("a")) == parse_word("a")
        assert A.coset_representative(recognizer, parse_word("aaba'b'")) == parse_word("a")

    def test_free_right_coset(self, surface):
        A = surface.factor(Side.PLUS)
        recognizer = surface.recognizer(Side.PLUS)
        assert A.coset_representative(recognizer, parse_word("aba'b'a"), CosetSide.RIGHT) == parse_word("a")

    def test_representative_is_shortest_in_coset(self, sl2z):
        A = sl2z.factor(Side.MINUS)
        recognizer = sl2z.recognizer(Side.MINUS)
        for g in A.enumerate_ball(3).elements:
            t = A.coset_representative(recognizer, g)
            assert recognizer.is_member(A.multiply(A.inverse(t), g))
            assert A.length(t) <= A.length(g)

    def test_cache_belongs_to_the_factor(self):
        first, second = build_factor(cyclic_factor("s", 4)), build_factor(cyclic_factor("s", 4))
        recognizer = first.build_recognizer([first.parse("ss")])
        assert first.render(first.coset_representative(recognizer, first.parse("sss"))) == "s"
        first.coset_representative(recognizer, first.parse("sss"))
        assert len(first._cosets) == 1
        assert second._cosets == {}
        assert not hasattr(type(first).coset_representative, "cache_info")
