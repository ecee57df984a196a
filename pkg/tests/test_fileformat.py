import pytest

from amalgamkit import ParseError, ValidationError
from amalgamkit.amalgam import canonical_form, validate_presentation
from amalgamkit.constants import DEFAULT_BUDGETS, Side
from amalgamkit.fileformat import dump_domain, dump_presentation, parse_presentation, parse_subgroup

SURFACE = """
# genus two, split along the separating curve
[factor 1]
kind = free
generators = a, b
order = a,a',b,b'

[factor -1]
kind = free
generators = c, d

[amalgam]
c = t
image1 = aba'b'
image-1 = dcd'c'
"""

Z2 = """
[factor 1]
kind = finite
generators = s
elements = 1, s
table
1 * 1 = 1
1 * s = s
s * 1 = s
s * s = 1

[factor -1]
kind = free
generators = r

[amalgam]
"""


def test_parse_free_presentation():
    P = validate_presentation(parse_presentation(SURFACE, "genus2"))
    assert P.name == "genus2"
    assert P.c_names == ("t",)
    assert canonical_form(P, "aba'b'cdc'd'").is_identity


def test_parse_finite_table():
    P = validate_presentation(parse_presentation(Z2))
    assert P.factor(Side.PLUS).size == 2
    assert P.c_names == ()


def test_round_trip_keeps_the_summary(surface, sl2z):
    for P in (surface, sl2z):
        again = validate_presentation(parse_presentation(dump_presentation(P)))
        assert again.summary() == P.summary()
        assert dump_presentation(again) == dump_presentation(P)


def test_malformed_row_names_the_line():
    broken = Z2.replace("s * s = 1", "s * s")
    with pytest.raises(ParseError) as error:
        parse_presentation(broken)
    assert error.value.line == 10
    assert "s * s" in str(error.value)


def test_repeated_row():
    with pytest.raises(ParseError, match="repeats"):
        parse_presentation(Z2.replace("s * 1 = s", "s * s = s"))


def test_missing_factor():
    with pytest.raises(ParseError, match="missing"):
        parse_presentation(SURFACE.split("[factor -1]")[0] + "[amalgam]\n")


def test_image_before_c():
    with pytest.raises(ParseError, match="without a preceding c"):
        parse_presentation(SURFACE.replace("c = t\n", ""))


def test_incomplete_table_fails_validation():
    with pytest.raises(ValidationError, match="not total"):
        validate_presentation(parse_presentation(Z2.replace("s * 1 = s\n", "")))


def test_subgroup_spec():
    spec = parse_subgroup("""
    [subgroup]
    gen = sr
    gen = rs'   # inverse marks are allowed
    budget.hball = 7
    """)
    assert spec.generators == ["sr", "rs'"]
    assert spec.budgets(DEFAULT_BUDGETS).hball == 7
    assert spec.budgets(DEFAULT_BUDGETS).depth == DEFAULT_BUDGETS.depth


def test_subgroup_budget_must_be_integer():
    with pytest.raises(ParseError, match="not an integer"):
        parse_subgroup("[subgroup]\nbudget.depth = deep\n")


def test_dump_domain(sl2z_domain):
    lines = dump_domain(sl2z_domain)
    assert lines[0] == "domain: certified = true"
    assert sum(line.startswith("pairing:") for line in lines) == 1
    assert sum(line.startswith("vertex:") for line in lines) == 2
