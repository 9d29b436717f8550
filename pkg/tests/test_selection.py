import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from molvoice.errors import (
    EmptySelectionError,
    MissingValuesError,
    SelectionTooDeepError,
    TrailingTokensError,
    UnknownKeywordError,
)
from molvoice.pdbio import load_pdb
from molvoice.selection import (
    All,
    And,
    Backbone,
    Chain,
    Resid,
    Resname,
    eval_selection,
    parse_selection,
    pretty_print,
)

from genutil import oracle_eval, random_selection_text, random_structure


# --- parsing ----------------------------------------------------------------

def test_parse_resname_union():
    assert parse_selection("resname ARG LYS") == Resname(frozenset({"ARG", "LYS"}))


def test_parse_and_term():
    expr = parse_selection("resname ASP GLU and chain C")
    assert expr == And(Resname(frozenset({"ASP", "GLU"})), Chain(frozenset({"C"})))


def test_parse_all():
    assert parse_selection("all") == All()


def test_parse_backbone():
    assert parse_selection("backbone") == Backbone()


def test_keywords_case_insensitive_values_uppercased():
    assert parse_selection("ALL") == All()
    assert parse_selection("Resname arg") == Resname(frozenset({"ARG"}))
    assert parse_selection("CHAIN a b") == Chain(frozenset({"A", "B"}))


def test_left_associative_chain_of_ands():
    expr = parse_selection("all and backbone and chain A")
    assert expr == And(And(All(), Backbone()), Chain(frozenset({"A"})))


def test_unknown_keyword():
    with pytest.raises(UnknownKeywordError):
        parse_selection("frobnicate 3")


def test_empty_selection():
    with pytest.raises(EmptySelectionError):
        parse_selection("")
    with pytest.raises(EmptySelectionError):
        parse_selection("   ")


def test_missing_values():
    with pytest.raises(MissingValuesError):
        parse_selection("resname")
    with pytest.raises(MissingValuesError):
        parse_selection("resid and chain A")


def test_dangling_and():
    with pytest.raises(MissingValuesError):
        parse_selection("resid 1 and")


def test_trailing_tokens():
    with pytest.raises(TrailingTokensError):
        parse_selection("all backbone")


def test_depth_limit():
    ok = " and ".join(["all"] * 32)
    parse_selection(ok)
    too_deep = " and ".join(["all"] * 33)
    with pytest.raises(SelectionTooDeepError):
        parse_selection(too_deep)


# --- evaluation -------------------------------------------------------------

def test_all_matches_every_index(fixture_text):
    structure = load_pdb(fixture_text)
    assert eval_selection(All(), structure) == set(range(20))


def test_backbone_excludes_sidechain_names():
    text = "\n".join(
        f"ATOM  {i + 1:>5d} {name:<4s} ALA A   1       1.000   2.000   3.000"
        for i, name in enumerate([" CA", " CB", " N", " O", " P"])
    )
    structure = load_pdb(text)
    assert eval_selection(Backbone(), structure) == {0, 2, 4}


def test_and_is_intersection(fixture_text):
    structure = load_pdb(fixture_text)
    a = Resname(frozenset({"ASP", "GLU"}))
    b = Chain(frozenset({"C"}))
    assert eval_selection(And(a, b), structure) == (
        eval_selection(a, structure) & eval_selection(b, structure)
    )


def test_eval_is_pure(fixture_text):
    structure = load_pdb(fixture_text)
    before = list(structure.atoms)
    expr = parse_selection("resname ARG LYS and chain C")
    first = eval_selection(expr, structure)
    second = eval_selection(expr, structure)
    assert first == second
    assert structure.atoms == before


def test_oracle_equivalence_200_cases():
    # the full 1,000-case sweep lives in the acceptance suite
    rng = random.Random(915001)
    for _ in range(200):
        structure = random_structure(rng, max_atoms=120)
        expr = parse_selection(random_selection_text(rng))
        assert eval_selection(expr, structure) == oracle_eval(expr, structure)


# --- pretty printing --------------------------------------------------------

def test_pretty_print_canonical():
    expr = parse_selection("Resname lys arg AND chain c")
    assert pretty_print(expr) == "resname ARG LYS and chain C"


@st.composite
def selection_texts(draw):
    rng = random.Random(draw(st.integers(min_value=0, max_value=2**32 - 1)))
    return random_selection_text(rng)


@settings(max_examples=200, deadline=None)
@given(selection_texts())
def test_parse_pretty_roundtrip_is_identity(text):
    expr = parse_selection(text)
    assert parse_selection(pretty_print(expr)) == expr
