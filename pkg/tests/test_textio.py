"""Text format: canonical rendering, parsing, and located parse errors."""

import pytest

from polyk.complexes import KleisliMorphism, PolytopeFunctor, validate_complex, wedge
from polyk.errors import DuplicateDeclaration, ParseError, UnknownObject, ValidationError
from polyk.generators import (
    add_twists,
    divisor_complex,
    grid_complex,
    interval_complex,
    sphere_complex,
    trivial_complex,
)
from polyk.textio import parse_complex, parse_morphism, render_complex, render_morphism

ALL_BUILTINS = [
    ("trivial", trivial_complex()),
    ("sphere", sphere_complex()),
    ("interval2", interval_complex(2)),
    ("interval4", interval_complex(4)),
    ("grid22", grid_complex(2, 2)),
    ("divisor12", divisor_complex(12)),
    ("divisor360", divisor_complex(360)),
    ("twists", add_twists(interval_complex(2))),
    ("wedge", wedge(sphere_complex(), interval_complex(2))),
]


@pytest.mark.parametrize("name,c", ALL_BUILTINS, ids=[n for n, _ in ALL_BUILTINS])
def test_round_trip(name, c):
    assert parse_complex(render_complex(c)) == c


def test_round_trip_is_stable():
    text = render_complex(grid_complex(2, 2))
    assert render_complex(parse_complex(text)) == text


def test_comments_and_blanks_ignored():
    c = parse_complex(
        """
        # a tiny complex
        objects: 0 a b c
        initial: 0   # the empty region

        vertical: a <= c
        vertical: b <= c
        cover: c <- {a, b}  # decomposition
        """
    )
    assert c.noninitial_objects == ("a", "b", "c")
    assert c.leq("a", "c")
    assert c.covers == (("c", ("a", "b")),)


def test_parsed_horizontal_gets_implicit_initial_slice():
    c = parse_complex(
        """
        objects: 0 a b
        initial: 0
        horizontal swap: a -> b
        slice: a |-> b
        """
    )
    (h,) = c.horizontal_gens
    assert h.apply("0") == "0"
    assert validate_complex(c).ok


def test_declared_pullback_is_cross_checked():
    good = parse_complex(
        """
        objects: 0 a b c
        initial: 0
        vertical: a <= c
        vertical: b <= c
        pullback: (a, b | c) = 0
        """
    )
    assert validate_complex(good).ok
    bad = parse_complex(
        """
        objects: 0 a b c
        initial: 0
        vertical: a <= c
        vertical: b <= c
        pullback: (a, b | c) = a
        """
    )
    assert "pullback-declared" in validate_complex(bad).codes()


def test_empty_cover_parses_but_fails_validation():
    c = parse_complex(
        """
        objects: 0 a
        initial: 0
        cover: a <- {}
        """
    )
    assert c.covers == (("a", ()),)
    assert "cover-empty" in validate_complex(c).codes()


MALFORMED = [
    # (document, expected exception, expected line, expected column)
    ("objcts: a b\ninitial: 0\n", ParseError, 1, 1),
    ("objects: a\n", ParseError, 1, 1),  # no initial anywhere
    ("objects: a\ninitial: 0\ninitial: 0\n", DuplicateDeclaration, 3, 1),
    ("objects: 0 a\ninitial: 0\nvertical: a <= bogus\n", UnknownObject, 3, 16),
    ("objects: 0 a b\ninitial: 0\ncover: b <- a\n", ParseError, 3, 1),
    ("objects: 0 a b\ninitial: 0\nslice: a |-> b\n", ParseError, 3, 1),
    (
        "objects: 0 a b\ninitial: 0\n"
        "horizontal s: a -> b\nslice: a |-> b\n"
        "horizontal s: b -> a\n",
        DuplicateDeclaration,
        5,
        1,
    ),
    (
        "objects: 0 a b\ninitial: 0\n"
        "horizontal s: a -> b\nslice: a |-> b\nslice: a |-> b\n",
        DuplicateDeclaration,
        5,
        8,
    ),
    ("objects: 0 a b\ninitial: 0\nvertical: a\n", ParseError, 3, 1),
    ("objects: 0 a b\ninitial: 0\ncover: b <- {a, ghost}\n", UnknownObject, 3, 17),
    ("objects: 0 a b\ninitial: 0\npullback: (a, b) = 0\n", ParseError, 3, 1),
    ("objects: 0 a b\ninitial: 0\ncover: b <- {a, }\n", ParseError, 3, 15),
]


@pytest.mark.parametrize(
    "doc,exc,line,col", MALFORMED, ids=[f"malformed{i}" for i in range(len(MALFORMED))]
)
def test_malformed_documents_raise_located_errors(doc, exc, line, col):
    with pytest.raises(exc) as info:
        parse_complex(doc)
    assert info.value.line == line
    assert info.value.column == col


def test_morphism_round_trip_functor():
    s = sphere_complex()
    i = interval_complex(2)
    f = PolytopeFunctor(s, i, {"pt": "[0-2]"})
    text = render_morphism(f)
    again = parse_morphism(text, s, i)
    assert isinstance(again, PolytopeFunctor)
    assert again.apply("pt") == "[0-2]"


def test_morphism_round_trip_kleisli():
    s = sphere_complex()
    i = interval_complex(2)
    f = KleisliMorphism(s, i, {"pt": ("[0-1]", "[1-2]")})
    again = parse_morphism(render_morphism(f), s, i)
    assert isinstance(again, KleisliMorphism)
    assert again.apply("pt") == ("[0-1]", "[1-2]")


def test_morphism_collapse_spellings():
    s = sphere_complex()
    i = interval_complex(2)
    f = parse_morphism("functor\nmap: pt |-> 0\n", s, i)
    assert f.apply("pt") == "0"
    g = parse_morphism("kleisli\nmap: pt |-> {}\n", s, i)
    assert g.apply("pt") == ()


def test_morphism_document_errors():
    s = sphere_complex()
    i = interval_complex(2)
    with pytest.raises(ParseError):
        parse_morphism("map: pt |-> 0\n", s, i)  # header missing
    with pytest.raises(ParseError) as info:
        parse_morphism("functor\n", s, i)  # pt never mapped
    assert "pt" in str(info.value)
    with pytest.raises(UnknownObject):
        parse_morphism("functor\nmap: pt |-> nowhere\n", s, i)
    with pytest.raises(UnknownObject):
        parse_morphism("functor\nmap: ghost |-> 0\nmap: pt |-> 0\n", s, i)
    with pytest.raises(DuplicateDeclaration):
        parse_morphism("functor\nmap: pt |-> 0\nmap: pt |-> 0\n", s, i)
    with pytest.raises(ParseError):
        parse_morphism("kleisli\nmap: pt |-> [0-1]\n", s, i)  # braces required
    # Structural validity is still enforced on the parsed morphism.
    with pytest.raises(ValidationError):
        parse_morphism("kleisli\nmap: pt |-> {[0-1], [0-2]}\n", s, i)
