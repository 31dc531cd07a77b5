import pytest

from name_matching import NameMatcher, UnknownNameError

SUITES = ["rep-theory", "fm-images", "ext-lemma", "ext-table", "type-c", "surfaces"]


@pytest.fixture
def matcher():
    return NameMatcher("suite", SUITES, aliases={"fixed-loci": "type-c"})


@pytest.mark.parametrize("name, expected", [
    ("rep-theory", "rep-theory"),
    ("Rep Theory", "rep-theory"),
    ("rep_theory", "rep-theory"),
    ("fixed-loci", "type-c"),
    ("Fixed Loci", "type-c"),
])
def test_exact_and_normalized_matches(matcher, name, expected):
    assert matcher.resolve(name) == expected


def test_greek_and_subscripts_are_spelled_out():
    characters = NameMatcher("character", ["chi2chi4", "V_dual", "Phi1"])
    assert characters.resolve("χ₂χ₄") == "chi2chi4"
    assert characters.resolve("V∨") == "V_dual"
    assert characters.resolve("Φ₁") == "Phi1"


def test_unknown_name_carries_a_suggestion(matcher):
    with pytest.raises(UnknownNameError) as info:
        matcher.resolve("ext-tabel")
    assert info.value.suggestion == "ext-table"
    assert info.value.kind == "suite"
    assert "did you mean 'ext-table'" in str(info.value)


def test_nothing_close_enough(matcher):
    with pytest.raises(UnknownNameError) as info:
        matcher.resolve("zzzzzzzz")
    assert info.value.suggestion is None
    assert "did you mean" not in str(info.value)


def test_suggest_does_not_raise(matcher):
    assert matcher.suggest("surface") == "surfaces"
    assert NameMatcher("scenario", []).suggest("anything") is None
