"""Disjoint-family thickening: materialization, monad laws, algebra search."""

import pytest

from polyk.complexes import (
    KleisliMorphism,
    PolytopeComplex,
    PolytopeFunctor,
    Ternary,
    validate_complex,
)
from polyk.errors import BoundExceeded, IncompatibleComposition, ValidationError
from polyk.generators import (
    divisor_complex,
    grid_complex,
    interval_complex,
    sphere_complex,
)
from polyk.thickening import (
    algebra_search,
    check_monad_laws,
    family_label,
    flatten_functor,
    kleisli_functor,
    thicken,
    thicken_functor,
    unit_functor,
)


def test_thicken_interval_objects():
    t = thicken(interval_complex(2), 2)
    assert sorted(t.members) == ["[0-1]", "[0-1]+[1-2]", "[0-2]", "[1-2]"]
    assert t.members["[0-1]+[1-2]"] == ("[0-1]", "[1-2]")
    assert t.family_id(["[1-2]", "[0-1]"]) == "[0-1]+[1-2]"
    assert t.family_id([]) == t.complex.initial


def test_thicken_tower_sizes():
    # Families of disjoint intervals: {a}, {b}, {c}, {a, b} where c = [0-2];
    # one level up the only new disjoint pair is the two singletons, and so
    # on: 4, 5, 6 noninitial objects.
    t1 = thicken(interval_complex(2), 2)
    t2 = thicken(t1.complex, 2)
    t3 = thicken(t2.complex, 2)
    assert len(t1.members) == 4
    assert len(t2.members) == 5
    assert len(t3.members) == 6


def test_thicken_validates():
    t1 = thicken(interval_complex(2), 2)
    assert validate_complex(t1.complex).ok
    t2 = thicken(t1.complex, 2)
    assert validate_complex(t2.complex).ok
    td = thicken(divisor_complex(6), 2)
    assert validate_complex(td.complex).ok


def test_thicken_order_and_meets():
    t = thicken(interval_complex(2), 2)
    cx = t.complex
    assert cx.leq("[0-1]+[1-2]", "[0-2]")
    assert not cx.leq("[0-2]", "[0-1]+[1-2]")
    assert cx.meet("[0-2]", "[0-1]+[1-2]") == "[0-1]+[1-2]"
    assert cx.disjoint("[0-1]", "[1-2]")
    assert not cx.disjoint("[0-1]", "[0-1]+[1-2]")


def test_thicken_cover_semantics():
    t = thicken(interval_complex(2), 2)
    cx = t.complex
    # The two-piece family covers the whole interval as a single object...
    assert cx.is_cover(("[0-1]+[1-2]",), "[0-2]") is Ternary.YES
    # ...but one piece alone does not.
    assert cx.is_cover(("[0-1]",), "[0-2]") is Ternary.NO
    # Singleton decomposition of a family.
    assert cx.is_cover(("[0-1]", "[1-2]"), "[0-1]+[1-2]") is Ternary.YES


def test_thicken_horizontal_lifts():
    t = thicken(interval_complex(2), 2)
    cx = t.complex
    # Singleton lifts of the unit translation, both ways, plus the swap on
    # the two-piece family.
    assert len(cx.horizontal_gens) == 3
    assert cx.closure_isos_between("[0-1]", "[1-2]")
    swaps = [
        h
        for h in cx.closure_isos_between("[0-1]+[1-2]", "[0-1]+[1-2]")
        if not h.is_identity
    ]
    assert len(swaps) == 1
    assert swaps[0].apply("[0-1]") == "[1-2]"


def test_thicken_grid_count():
    # 9 singletons; pairs: 6 cell-cell, 8 cell-domino, 2 domino-domino;
    # triples: 4 all-cell, 4 domino-plus-two-cells; one 4-cell family.
    t = thicken(grid_complex(2, 2), 4)
    assert len(t.members) == 34
    sizes = {}
    for fam in t.members.values():
        sizes[len(fam)] = sizes.get(len(fam), 0) + 1
    assert sizes == {1: 9, 2: 16, 3: 8, 4: 1}


def test_thicken_label_disambiguation():
    # Base object names that already contain the join character must not
    # collide with genuine two-member families.
    c = PolytopeComplex(
        objects=["0", "a", "b", "a+b"],
        initial="0",
        order_pairs=[("a", "a+b"), ("b", "a+b")],
        covers=[("a+b", ("a", "b"))],
    )
    assert validate_complex(c).ok
    t = thicken(c, 2)
    assert sorted(t.members) == ["(a+b)", "a", "a+b", "b"]
    assert t.family_id(["a+b"]) == "(a+b)"
    assert t.family_id(["a", "b"]) == "a+b"
    assert family_label(["a+b"]) == "(a+b)"


def test_thicken_bound_validation():
    with pytest.raises(ValidationError):
        thicken(interval_complex(2), 0)
    t = thicken(interval_complex(3), 1)
    with pytest.raises(BoundExceeded):
        t.family_id(["[0-1]", "[1-2]"])


def test_unit_and_flatten_are_functors():
    t1 = thicken(interval_complex(2), 2)
    t2 = thicken(t1.complex, 2)
    unit = unit_functor(t1)
    assert unit.apply("[0-2]") == "[0-2]"
    assert unit.apply(t1.base.initial) == t1.complex.initial
    mu = flatten_functor(t2, t1)
    # The two-member family of singletons flattens to the two-piece family.
    pair_of_singletons = t2.family_id(["[0-1]", "[1-2]"])
    assert mu.apply(pair_of_singletons) == "[0-1]+[1-2]"
    singleton_of_pair = t2.family_id(["[0-1]+[1-2]"])
    assert mu.apply(singleton_of_pair) == "[0-1]+[1-2]"
    with pytest.raises(IncompatibleComposition):
        flatten_functor(t1, t1)


def test_thicken_functor_collapses():
    c = interval_complex(2)
    t1 = thicken(c, 2)
    zero = PolytopeFunctor(c, c, {x: c.initial for x in c.objects}, name="zero")
    tz = thicken_functor(zero, t1, t1)
    assert all(tz.apply(fid) == t1.complex.initial for fid in t1.members)


@pytest.mark.parametrize(
    "complex_factory,bound",
    [
        (sphere_complex, 2),
        (sphere_complex, 3),
        (lambda: interval_complex(2), 2),
        (lambda: interval_complex(2), 3),
        (lambda: divisor_complex(6), 2),
    ],
)
def test_monad_laws(complex_factory, bound):
    report = check_monad_laws(complex_factory(), bound)
    assert report.ok, report.failures
    assert report.left_unit and report.right_unit and report.associativity


def test_monad_laws_sizes():
    report = check_monad_laws(interval_complex(2), 2)
    assert report.sizes == (4, 5, 6)


def test_monad_laws_bound_too_small():
    # interval(3) holds three pairwise-disjoint pieces, so flattening a
    # family of families at bound 2 needs a three-member family.
    with pytest.raises(BoundExceeded):
        check_monad_laws(interval_complex(3), 2)


def test_kleisli_functor_matches_composition():
    s = sphere_complex()
    i2 = interval_complex(2)
    t1 = thicken(i2, 2)
    t2 = thicken(t1.complex, 2)
    f = KleisliMorphism(s, i2, {"pt": ("[0-1]", "[1-2]")}, name="split point")
    g = KleisliMorphism(
        i2,
        i2,
        {"[0-1]": ("[0-1]",), "[1-2]": ("[1-2]",), "[0-2]": ("[0-1]", "[1-2]")},
        name="split top",
    )
    f_hat = kleisli_functor(f, t1)
    g_hat = kleisli_functor(g, t1)
    composite_hat = kleisli_functor(g.compose(f), t1)
    t_g = thicken_functor(g_hat, t1, t2)
    mu = flatten_functor(t2, t1)
    for x in s.objects:
        assert composite_hat.apply(x) == mu.apply(t_g.apply(f_hat.apply(x)))


def test_algebra_search_grid_contradiction():
    result = algebra_search(grid_complex(2, 2), 4)
    assert result.status == "contradiction"
    assert not result.found
    assert result.structure_map is None
    assert len(result.derivation) >= 3
    assert result.derivation[0].startswith("1.")
    assert "Contradiction" in result.derivation[-1]


def test_algebra_search_divisor_found():
    c = divisor_complex(6)
    result = algebra_search(c, 2)
    assert result.found
    f = result.structure_map
    assert f.apply("2+3") == "6"
    for x in c.objects:
        assert f.apply(thicken(c, 2).family_id([x]) if x != c.initial else f.source.initial) == x


def test_algebra_search_sphere_found():
    result = algebra_search(sphere_complex(), 2)
    assert result.found
    assert result.structure_map.apply("pt") == "pt"
