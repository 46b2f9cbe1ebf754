import random

import pytest

from uniloc.corpus import random_structure, structures
from uniloc.fileformat import ParseError, dump_map, dump_structure, parse_document, parse_map, quote
from uniloc.frames import FiniteFrame, NotAFrameHom
from uniloc.uniform import AxiomViolation

TWO = """\
frame two   # comment
elem a
elem b

cover U: a, b
"""


def test_parse_cover_file():
    doc = parse_document(TWO)
    assert doc.name == "two" and doc.frame.labels == ("a", "b")
    S = doc.structure()
    assert S.is_admissible()


def test_order_and_joins():
    doc = parse_document("frame c\nelem a\nelem b\nelem c\nle a b\nle b c\ncover U: a ∨ b, c + 0\n")
    F = doc.frame
    assert F.le("a", "c")
    assert doc.covers[0][1] == [F.element("b").mask, F.element("c").mask]


def test_entourage_syntax_variants():
    d1 = parse_document("frame x\nelem a\nelem b\nentourage E: a ⊕ a | b ⊕ b\n")
    d2 = parse_document("frame x\nelem a\nelem b\nentourage E: a (+) a | b (+) b\n")
    assert d1.entourages == d2.entourages


def test_bracketed_names():
    doc = parse_document("frame [my frame]\nelem [[a]]\nelem [x+y]\ncover U: [[a]], [x+y]\n")
    assert doc.name == "my frame" and doc.frame.labels == ("[a]", "x+y")
    assert quote("[a]") == "[[a]]" and quote("0") == "[0]" and quote("a.b'") == "a.b'"


@pytest.mark.parametrize(
    "text,line,col",
    [
        ("", 1, 1),
        ("# only a comment\n", 1, 1),
        ("elem a\n", 1, 1),
        ("frame x\nelem a\nelem a\n", 3, 6),
        ("frame x\nelem a\ncover U: a + q\n", 3, 14),
        ("frame x\nelem a\nle a z\n", 3, 6),
        ("frame x\nelem a\nwhat a\n", 3, 1),
        ("frame x\nelem a\nentourage E: a a\n", 3, 16),
        ("frame x\nelem a\ncover U: [a\n", 3, 10),
        ("frame x\nelem a\nelem b\nle a b\nle b a\n", 4, 1),
    ],
)
def test_parse_errors(text, line, col):
    with pytest.raises(ParseError) as err:
        parse_document(text, source="f")
    assert (err.value.line, err.value.col) == (line, col)


def test_axiom_failure_names_entourage():
    doc = parse_document("frame x\nelem a\nelem b\nentourage Good: a ⊕ a | b ⊕ b\nentourage Bad: a ⊕ a\n")
    with pytest.raises(AxiomViolation) as err:
        doc.structure()
    assert err.value.violation.subject == "entourage Bad"
    assert "b" in err.value.violation.detail


def test_dump_round_trip():
    rng = random.Random(5)
    for S in structures(3) + [random_structure(rng) for _ in range(10)]:
        text = dump_structure(S, "s")
        back = parse_document(text).structure()
        assert back.frame == S.frame
        assert back.covers.filter_equal(S.covers) and back.entourages.filter_equal(S.entourages)
        assert dump_structure(back, "s") == text


def test_map_files():
    X, Y = FiniteFrame("ab"), FiniteFrame("p")
    f = parse_map("map collapse\np : a + b\n", X, Y)
    assert f.images == (X.full,)
    assert parse_map(dump_map(f), X, Y) == f
    with pytest.raises(ParseError):
        parse_map("", X, Y)
    with pytest.raises(ParseError):
        parse_map("q : a\n", X, Y)
    with pytest.raises(NotAFrameHom):
        parse_map("a : p\nb : p\n", Y, X)
