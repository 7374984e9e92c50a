"""Span category over a base complex: composition, equality, classes,
quotients, pushouts, and the refinement preorder."""

import pytest

from polyk.complexes import HorizontalMorphism
from polyk.errors import (
    IncompatibleComposition,
    NotACofibration,
    UnsupportedPushout,
    ValidationError,
)
from polyk.generators import interval_complex, sphere_complex
from polyk.spans import (
    PolytopeFamily,
    Row,
    SpanMorphism,
    classify,
    common_refinement,
    corestriction,
    count_homs_under,
    enumerate_homs,
    enumerate_weak_equivalences,
    family_coproduct,
    image_family,
    morphism_coproduct,
    pushout,
    quotient_family,
    quotient_map,
    sc_equal,
    sc_isomorphic,
    verify_cofiltered_preorder,
    zero_family,
    zero_morphism,
)

I2 = interval_complex(2)
I3 = interval_complex(3)
S = sphere_complex()


def ident(base, obj):
    return HorizontalMorphism.identity_on(obj, base.down_set(obj))


def shift(base, src, dst):
    (iso,) = base.closure_isos_between(src, dst)
    return iso


def split_morphism():
    """([0-2],) -> ([0-1], [1-2]): the interval split as a span."""
    a = PolytopeFamily(I2, ["[0-2]"])
    b = PolytopeFamily(I2, ["[0-1]", "[1-2]"])
    return SpanMorphism(
        a,
        b,
        [
            Row("[0-1]", 0, 0, ident(I2, "[0-1]")),
            Row("[1-2]", 0, 1, ident(I2, "[1-2]")),
        ],
    )


def test_family_basics():
    fam = PolytopeFamily(I2, ["[0-1]", "[0-1]"])  # repetition allowed
    assert len(fam) == 2
    assert not fam.is_zero
    assert zero_family(I2).is_zero
    with pytest.raises(ValidationError):
        PolytopeFamily(I2, ["0"])  # initial is not a member
    with pytest.raises(ValidationError):
        PolytopeFamily(I2, ["nope"])


def test_row_validation():
    a = PolytopeFamily(I2, ["[0-2]"])
    b = PolytopeFamily(I2, ["[0-1]"])
    # Component must be an iso onto the whole target member.
    with pytest.raises(ValidationError):
        SpanMorphism(a, b, [Row("[0-2]", 0, 0, ident(I2, "[0-2]"))])
    # Fiber members must be disjoint.
    big = PolytopeFamily(I2, ["[0-1]", "[0-2]"])
    with pytest.raises(ValidationError):
        SpanMorphism(
            a,
            big,
            [
                Row("[0-2]", 0, 1, ident(I2, "[0-2]")),
                Row("[0-1]", 0, 0, ident(I2, "[0-1]")),
            ],
        )
    # Sub leg must be an inclusion.
    with pytest.raises(ValidationError):
        SpanMorphism(b, a, [Row("[0-2]", 0, 0, ident(I2, "[0-2]"))])


def test_identity_classification():
    fam = PolytopeFamily(I2, ["[0-1]", "[0-2]"])
    c = classify(SpanMorphism.identity(fam))
    assert c.is_covering and c.is_cofibration and c.is_weak_equivalence
    assert c.is_pure_sub and c.is_pure_shuffle
    assert "acyclic-cofibration" in c.labels


def test_zero_map_to_zero_is_pure_sub():
    # a <- () = (): the left leg includes the empty subfamily, the right
    # leg is an identity, so this is a pure sub-polytope morphism — but it
    # covers nothing, so it is not a cofibration.
    a = PolytopeFamily(I2, ["[0-1]"])
    c = classify(zero_morphism(a, zero_family(I2)))
    assert c.labels == ("pure-sub",)
    assert not c.is_covering
    assert not c.is_cofibration


def test_carve_and_relabel_is_neither():
    # Carving a proper piece AND relabeling it fails every class: not
    # covering, legs both nontrivial.
    a = PolytopeFamily(I2, ["[0-2]"])
    b = PolytopeFamily(I2, ["[1-2]"])
    f = SpanMorphism(a, b, [Row("[0-1]", 0, 0, shift(I2, "[0-1]", "[1-2]"))])
    c = classify(f)
    assert c.labels == ("neither",)
    assert not c.cover_undecided  # the failure is a definite NO


def test_zero_map_from_zero_is_cofibration():
    b = PolytopeFamily(I2, ["[0-1]"])
    c = classify(zero_morphism(zero_family(I2), b))
    assert c.is_cofibration
    assert not c.is_weak_equivalence  # not surjective on indices
    czz = classify(zero_morphism(zero_family(I2), zero_family(I2)))
    assert czz.is_weak_equivalence


def test_split_is_acyclic_cofibration_and_pure_sub():
    c = classify(split_morphism())
    assert c.is_acyclic_cofibration
    assert c.is_pure_sub and not c.is_pure_shuffle


def test_relabeling_is_pure_shuffle():
    a = PolytopeFamily(I2, ["[0-1]", "[1-2]"])
    b = PolytopeFamily(I2, ["[1-2]", "[1-2]"])
    f = SpanMorphism(
        a,
        b,
        [
            Row("[0-1]", 0, 1, shift(I2, "[0-1]", "[1-2]")),
            Row("[1-2]", 1, 0, ident(I2, "[1-2]")),
        ],
    )
    c = classify(f)
    assert c.is_pure_shuffle and not c.is_pure_sub
    assert c.is_weak_equivalence


def test_composition_identity_and_associativity():
    f = split_morphism()
    id_a = SpanMorphism.identity(f.source)
    id_b = SpanMorphism.identity(f.target)
    assert f.compose(id_a) == f
    assert id_b.compose(f) == f
    # g: relabel the two pieces crosswise; h: fold them back down.
    b = f.target
    c = PolytopeFamily(I2, ["[1-2]", "[0-1]"])
    g = SpanMorphism(
        b,
        c,
        [
            Row("[0-1]", 0, 1, ident(I2, "[0-1]")),
            Row("[1-2]", 1, 0, ident(I2, "[1-2]")),
        ],
    )
    d = PolytopeFamily(I2, ["[0-1]", "[0-1]"])
    h = SpanMorphism(
        c,
        d,
        [
            Row("[1-2]", 0, 0, shift(I2, "[1-2]", "[0-1]")),
            Row("[0-1]", 1, 1, ident(I2, "[0-1]")),
        ],
    )
    assert h.compose(g.compose(f)) == h.compose(g).compose(f)


def test_composition_endpoint_mismatch():
    f = split_morphism()
    with pytest.raises(IncompatibleComposition):
        f.compose(f)


def test_sc_equal_positive_and_negative():
    f = split_morphism()
    assert sc_equal(f, f)
    assert sc_equal(f.compose(SpanMorphism.identity(f.source)), f)
    # A zero morphism to the same target is not equal: its overlaps cannot
    # cover f's pieces.
    assert not sc_equal(f, zero_morphism(f.source, f.target))
    assert not sc_equal(zero_morphism(f.source, f.target), f)
    # Same shape, different component: the overlap disagrees.
    a = PolytopeFamily(I2, ["[0-1]"])
    b = PolytopeFamily(I2, ["[1-2]"])
    g1 = SpanMorphism(a, b, [Row("[0-1]", 0, 0, shift(I2, "[0-1]", "[1-2]"))])
    g2 = zero_morphism(a, b)
    assert not sc_equal(g1, g2)
    # Same pieces into different copies of the same member: unequal.
    bb = PolytopeFamily(I2, ["[1-2]", "[1-2]"])
    h1 = SpanMorphism(a, bb, [Row("[0-1]", 0, 0, shift(I2, "[0-1]", "[1-2]"))])
    h2 = SpanMorphism(a, bb, [Row("[0-1]", 0, 1, shift(I2, "[0-1]", "[1-2]"))])
    assert not sc_equal(h1, h2)


def test_cofibrations_closed_under_composition():
    f = split_morphism()  # ([0-2]) -> ([0-1], [1-2])
    b = f.target
    c3 = PolytopeFamily(I2, ["[0-1]", "[1-2]", "[0-2]"])
    g = SpanMorphism(
        b,
        c3,
        [
            Row("[0-1]", 0, 0, ident(I2, "[0-1]")),
            Row("[1-2]", 1, 1, ident(I2, "[1-2]")),
        ],
    )
    assert classify(g).is_cofibration
    comp = g.compose(f)
    assert classify(comp).is_cofibration
    assert not classify(comp).is_weak_equivalence  # [0-2] copy is missed


def test_weak_equivalences_closed_under_composition():
    f = split_morphism()
    b = f.target
    c = PolytopeFamily(I2, ["[1-2]", "[0-1]"])
    g = SpanMorphism(
        b,
        c,
        [
            Row("[0-1]", 0, 1, ident(I2, "[0-1]")),
            Row("[1-2]", 1, 0, ident(I2, "[1-2]")),
        ],
    )
    assert classify(g).is_weak_equivalence
    assert classify(g.compose(f)).is_weak_equivalence


def test_image_quotient_partition_target():
    f = split_morphism()
    b3 = PolytopeFamily(I2, ["[0-1]", "[1-2]", "[0-2]"])
    g = SpanMorphism(
        f.source,
        b3,
        [
            Row("[0-1]", 0, 0, ident(I2, "[0-1]")),
            Row("[1-2]", 0, 1, ident(I2, "[1-2]")),
        ],
    )
    img = image_family(g)
    quot = quotient_family(g)
    assert sorted(img.members + quot.members) == sorted(b3.members)
    assert img.members == ("[0-1]", "[1-2]")
    assert quot.members == ("[0-2]",)
    q = quotient_map(g)
    assert q.source == b3 and q.target == quot
    # Restriction to the untouched subfamily: pure sub, but the hit
    # members have empty fibers, so it covers nothing.
    c = classify(q)
    assert c.is_pure_sub and not c.is_covering


def test_corestriction_of_cofibration_is_acyclic():
    f = split_morphism()
    b3 = PolytopeFamily(I2, ["[0-2]", "[0-1]", "[1-2]"])
    g = SpanMorphism(
        f.source,
        b3,
        [
            Row("[0-1]", 0, 1, ident(I2, "[0-1]")),
            Row("[1-2]", 0, 2, ident(I2, "[1-2]")),
        ],
    )
    assert classify(g).is_cofibration and not classify(g).is_weak_equivalence
    co = corestriction(g)
    assert classify(co).is_acyclic_cofibration
    assert co.target == image_family(g)


def test_coproducts():
    a = PolytopeFamily(I2, ["[0-1]"])
    b = PolytopeFamily(I2, ["[1-2]", "[0-2]"])
    ab = family_coproduct(a, b)
    assert ab.members == ("[0-1]", "[1-2]", "[0-2]")
    f = SpanMorphism.identity(a)
    g = SpanMorphism.identity(b)
    fg = morphism_coproduct(f, g)
    assert fg == SpanMorphism.identity(ab)


def test_sc_isomorphic_finds_relabelings():
    x = PolytopeFamily(I3, ["[0-1]", "[1-3]"])
    y = PolytopeFamily(I3, ["[0-2]", "[2-3]"])
    iso = sc_isomorphic(x, y)
    assert iso is not None
    assert classify(iso).is_weak_equivalence
    assert sc_isomorphic(x, PolytopeFamily(I3, ["[0-1]", "[0-3]"])) is None
    assert sc_isomorphic(zero_family(I3), zero_family(I3)) is not None


def test_pushout_along_identity_recovers_target():
    f = split_morphism()
    g = SpanMorphism.identity(f.source)
    square = pushout(f, g)
    assert sc_equal(
        square.from_attached.compose(f), square.from_other.compose(g)
    )
    assert sc_isomorphic(square.corner, f.target) is not None
    assert classify(square.from_other).is_cofibration


def test_pushout_along_zero_is_quotient():
    b3 = PolytopeFamily(I2, ["[0-1]", "[1-2]", "[0-2]"])
    a = PolytopeFamily(I2, ["[0-1]"])
    f = SpanMorphism(a, b3, [Row("[0-1]", 0, 0, ident(I2, "[0-1]"))])
    g = zero_morphism(a, zero_family(I2))
    square = pushout(f, g)
    assert square.corner == quotient_family(f)
    assert square.from_attached == quotient_map(f)
    assert sc_equal(square.from_attached.compose(f), square.from_other.compose(g))


def test_pushout_fold_refines_by_choice_meets():
    # Two copies of [0-3] each split differently, then folded together:
    # the corner must carry the common refinement {[0-1], [1-2], [2-3]}.
    # Built on a private complex so the cover cache starts cold: the
    # depth-starved attempt must run first, before a deep search caches a
    # definite YES that any later depth would reuse.
    base = interval_complex(3)
    a = PolytopeFamily(base, ["[0-3]", "[0-3]"])
    b = PolytopeFamily(base, ["[0-1]", "[1-3]", "[0-2]", "[2-3]"])
    f = SpanMorphism(
        a,
        b,
        [
            Row("[0-1]", 0, 0, ident(base, "[0-1]")),
            Row("[1-3]", 0, 1, ident(base, "[1-3]")),
            Row("[0-2]", 1, 2, ident(base, "[0-2]")),
            Row("[2-3]", 1, 3, ident(base, "[2-3]")),
        ],
    )
    assert classify(f).is_cofibration
    c = PolytopeFamily(base, ["[0-3]"])
    g = SpanMorphism(
        a,
        c,
        [
            Row("[0-3]", 0, 0, ident(base, "[0-3]")),
            Row("[0-3]", 1, 0, ident(base, "[0-3]")),
        ],
    )
    # One refinement round leaves {[1-3]} or {[0-2]} pending, so the
    # three-piece cover of [0-3] is UNKNOWN at depth 1: refused loudly.
    with pytest.raises(UnsupportedPushout):
        pushout(f, g, depth_bound=1)
    square = pushout(f, g)
    assert square.corner.members == ("[0-1]", "[1-2]", "[2-3]")
    assert sc_equal(square.from_attached.compose(f), square.from_other.compose(g))


def test_pushout_requires_cofibration():
    a = PolytopeFamily(I2, ["[0-1]"])
    b = PolytopeFamily(I2, ["[0-1]", "[0-1]"])
    fold = SpanMorphism(
        b, a, [Row("[0-1]", 0, 0, ident(I2, "[0-1]")), Row("[0-1]", 1, 0, ident(I2, "[0-1]"))]
    )
    with pytest.raises(NotACofibration):
        pushout(fold, SpanMorphism.identity(b))
    with pytest.raises(IncompatibleComposition):
        pushout(split_morphism(), SpanMorphism.identity(a))


def test_pushout_universal_property_by_enumeration():
    f = split_morphism()
    g = SpanMorphism.identity(f.source)
    square = pushout(f, g)
    # Cone: the target of f itself, with the obvious legs.
    q_b = SpanMorphism.identity(f.target)
    q_c = f
    assert sc_equal(q_b.compose(f), q_c.compose(g))
    factorizations = [
        u
        for u in enumerate_homs(square.corner, f.target)
        if sc_equal(u.compose(square.from_attached), q_b)
        and sc_equal(u.compose(square.from_other), q_c)
    ]
    assert len(factorizations) == 1


def test_enumerate_weak_equivalences_unit_interval():
    y = PolytopeFamily(I2, ["[0-2]"])
    wes = enumerate_weak_equivalences(y, piece_bound=2)
    # Identity, plus the split with 2x2 relabelings of the two pieces.
    assert len(wes) == 5
    targets = sorted(tuple(e.target.members) for e in wes)
    assert ("[0-2]",) in targets
    assert targets.count(("[0-1]", "[1-2]")) == 1
    assert targets.count(("[1-2]", "[0-1]")) == 1
    for e in wes:
        assert classify(e).is_weak_equivalence


def test_count_homs_under_is_at_most_one():
    y = PolytopeFamily(I2, ["[0-2]"])
    wes = enumerate_weak_equivalences(y, piece_bound=2)
    identity = next(e for e in wes if e.target.members == ("[0-2]",))
    split = next(e for e in wes if e.target.members == ("[0-1]", "[1-2]"))
    # Coarse -> fine exists and is unique; fine -> coarse does not exist.
    assert count_homs_under(identity, split) == 1
    assert count_homs_under(split, identity) == 0
    assert count_homs_under(identity, identity) == 1
    assert count_homs_under(split, split) == 1


def test_common_refinement_commutes():
    y = PolytopeFamily(I3, ["[0-3]"])
    wes = enumerate_weak_equivalences(y, piece_bound=2)
    split_a = next(e for e in wes if e.target.members == ("[0-1]", "[1-3]"))
    split_b = next(e for e in wes if e.target.members == ("[0-2]", "[2-3]"))
    z, u1, u2 = common_refinement(split_a, split_b)
    assert sorted(z.members) == ["[0-1]", "[1-2]", "[2-3]"]
    assert sc_equal(u1.compose(split_a), u2.compose(split_b))


def test_verify_cofiltered_preorder_small():
    y = PolytopeFamily(I2, ["[0-2]"])
    report = verify_cofiltered_preorder(y, piece_bound=2)
    assert report.ok
    assert report.n_weak_equivalences == 5
    assert report.n_pairs == 25
