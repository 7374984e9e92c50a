"""Thickening a complex into disjoint families.

``thicken`` materializes, up to a size bound, the complex whose objects are
pairwise-disjoint families of noninitial objects of a base complex, ordered
memberwise.  The construction carries a unit (singleton families) and a
flatten (union of a family of families); ``check_monad_laws`` verifies the
unit and associativity laws on the materialized complexes, and
``algebra_search`` looks for a structure map collapsing families back into
the base, reporting either the functor found or a numbered derivation of why
none can exist.
"""

from dataclasses import dataclass
from itertools import combinations, permutations, product

from .complexes import (
    HorizontalMorphism,
    KleisliMorphism,
    PolytopeComplex,
    PolytopeFunctor,
)
from .errors import BoundExceeded, IncompatibleComposition, ValidationError

__all__ = [
    "ThickenedComplex",
    "thicken",
    "unit_functor",
    "flatten_functor",
    "thicken_functor",
    "kleisli_functor",
    "MonadLawsReport",
    "check_monad_laws",
    "AlgebraSearchResult",
    "algebra_search",
]


def _wrap(member_id: str) -> str:
    """Parenthesize ids that could make a joined family label ambiguous."""
    if "+" in member_id or member_id.startswith("("):
        return f"({member_id})"
    return member_id


def family_label(members) -> str:
    return "+".join(_wrap(m) for m in sorted(members))


@dataclass(frozen=True)
class ThickenedComplex:
    """A materialized family complex over ``base``, truncated at ``bound``
    members per family."""

    base: PolytopeComplex
    bound: int
    complex: PolytopeComplex
    members: dict  # family id -> sorted tuple of base object ids
    id_of: dict  # frozenset of base object ids -> family id

    def family_id(self, members) -> str:
        """The id of the family with the given base members.

        Raises BoundExceeded when the family was not materialized, which for
        a valid member list can only mean it is larger than the bound.
        """
        members = tuple(sorted(set(str(m) for m in members)))
        if not members:
            return self.complex.initial
        got = self.id_of.get(frozenset(members))
        if got is None:
            raise BoundExceeded(
                f"family {{{', '.join(members)}}} ({len(members)} members) is not "
                f"materialized; the thickening was built with bound {self.bound}"
            )
        return got

    def __repr__(self):
        return (
            f"ThickenedComplex(bound={self.bound}, "
            f"{len(self.members)} noninitial families)"
        )


def thicken(c: PolytopeComplex, bound: int, with_horizontals: bool = True,
            max_generators: int = 20000) -> ThickenedComplex:
    """Materialize the disjoint-family complex over ``c``.

    Objects: every pairwise-disjoint set of 1..bound noninitial objects of
    ``c``, plus a fresh initial.  Order: memberwise domination (each member
    lands under exactly one member of the larger family).  Covering bases:
    every family splits into its member singletons, and every declared base
    cover lifts to singletons.  Horizontal generators: every bijection
    between equal-sized families whose matched members are related by a
    horizontal closure morphism of the base.
    """
    if bound < 1:
        raise ValidationError("thickening bound must be at least 1")
    nonin = list(c.noninitial_objects)

    families = []

    def extend(prefix, start):
        for i in range(start, len(nonin)):
            x = nonin[i]
            if all(c.disjoint(y, x) for y in prefix):
                fam = prefix + (x,)
                families.append(fam)
                if len(fam) < bound:
                    extend(fam, i + 1)

    extend((), 0)
    families.sort()

    members = {}
    id_of = {}
    for fam in families:
        fid = family_label(fam)
        if fid in members:
            raise ValidationError(
                f"family id collision at {fid!r}; the base object names do not "
                "support unambiguous family labels"
            )
        members[fid] = fam
        id_of[frozenset(fam)] = fid
    initial_id = "0"
    while initial_id in members:
        initial_id += "_"

    items = sorted(members.items())

    def fam_leq(f, g):
        return all(any(c.leq(a, b) for b in g) for a in f)

    order_pairs = [
        (fid, gid)
        for fid, f in items
        for gid, g in items
        if fid != gid and fam_leq(f, g)
    ]

    covers = []
    for fid, fam in items:
        if len(fam) >= 2:
            covers.append((fid, tuple(id_of[frozenset((m,))] for m in fam)))
    for x in nonin:
        for base_family in c.declared_covers_of(x):
            pieces = sorted(set(base_family) - {c.initial})
            if not pieces:
                continue
            covers.append(
                (id_of[frozenset((x,))], tuple(id_of[frozenset((m,))] for m in pieces))
            )

    gens = []
    if with_horizontals:
        buckets = {}
        for h in c.horizontal_closure_morphisms():
            if h.src != h.dst or not h.is_identity:
                buckets.setdefault((h.src, h.dst), []).append(h)
        downs = {
            fid: [gid for gid, g in items if fam_leq(g, f)] for fid, f in items
        }
        by_size = {}
        for fid, fam in items:
            by_size.setdefault(len(fam), []).append((fid, fam))
        counter = 0
        for _size, group in sorted(by_size.items()):
            for fid, fam in group:
                for gid, gam in group:
                    for perm in permutations(gam):
                        iso_lists = []
                        for a, b in zip(fam, perm):
                            isos = list(buckets.get((a, b), ()))
                            if a == b:
                                isos.append(
                                    HorizontalMorphism.identity_on(a, c.down_set(a))
                                )
                            if not isos:
                                iso_lists = None
                                break
                            iso_lists.append(isos)
                        if iso_lists is None:
                            continue
                        for choice in product(*iso_lists):
                            if (
                                fid == gid
                                and perm == fam
                                and all(u.is_identity for u in choice)
                            ):
                                continue  # the identity is not a generator
                            mapping = [(initial_id, initial_id)]
                            for hid in downs[fid]:
                                image = []
                                for h in members[hid]:
                                    i = next(
                                        j for j, a in enumerate(fam) if c.leq(h, a)
                                    )
                                    image.append(choice[i].apply(h))
                                mapping.append((hid, id_of[frozenset(image)]))
                            gens.append(
                                HorizontalMorphism(
                                    f"th{counter}", fid, gid, mapping
                                )
                            )
                            counter += 1
                            if counter > max_generators:
                                raise BoundExceeded(
                                    "thickening would declare more than "
                                    f"{max_generators} horizontal generators"
                                )

    cx = PolytopeComplex(
        objects=[initial_id] + [fid for fid, _ in items],
        initial=initial_id,
        order_pairs=order_pairs,
        covers=covers,
        horizontal_gens=gens,
    )
    return ThickenedComplex(base=c, bound=bound, complex=cx, members=members,
                            id_of=id_of)


def unit_functor(t: ThickenedComplex) -> PolytopeFunctor:
    """base -> thickening: each object becomes its singleton family."""
    omap = {t.base.initial: t.complex.initial}
    for x in t.base.noninitial_objects:
        omap[x] = t.family_id([x])
    return PolytopeFunctor(t.base, t.complex, omap, name="unit")


def flatten_functor(outer: ThickenedComplex, inner: ThickenedComplex) -> PolytopeFunctor:
    """thicken(thicken(c)) -> thicken(c): union of a family of families.

    ``outer`` must be a thickening of ``inner.complex``.  Raises
    BoundExceeded when some union has more members than ``inner`` holds.
    """
    if outer.base is not inner.complex and outer.base != inner.complex:
        raise IncompatibleComposition(
            "flatten needs the outer thickening to be built over the inner complex"
        )
    omap = {outer.complex.initial: inner.complex.initial}
    for fid, fam in sorted(outer.members.items()):
        union = set()
        for tid in fam:
            union.update(inner.members[tid])
        omap[fid] = inner.family_id(union)
    return PolytopeFunctor(outer.complex, inner.complex, omap, name="flatten")


def thicken_functor(f: PolytopeFunctor, source_thickening: ThickenedComplex,
                    target_thickening: ThickenedComplex) -> PolytopeFunctor:
    """Apply a functor memberwise to families: thicken(f).

    Members collapsed by ``f`` drop out of the image family.
    """
    if (
        source_thickening.base is not f.source
        and source_thickening.base != f.source
    ):
        raise IncompatibleComposition(
            "source thickening is not built over the functor's source"
        )
    if (
        target_thickening.base is not f.target
        and target_thickening.base != f.target
    ):
        raise IncompatibleComposition(
            "target thickening is not built over the functor's target"
        )
    omap = {source_thickening.complex.initial: target_thickening.complex.initial}
    for fid, fam in sorted(source_thickening.members.items()):
        images = {f.apply(a) for a in fam} - {f.target.initial}
        omap[fid] = target_thickening.family_id(images)
    return PolytopeFunctor(
        source_thickening.complex,
        target_thickening.complex,
        omap,
        name=f"thickened {f.name}" if f.name else "thickened functor",
    )


def kleisli_functor(k: KleisliMorphism, t: ThickenedComplex) -> PolytopeFunctor:
    """Present a family-valued morphism as a functor into the thickening."""
    if t.base is not k.target and t.base != k.target:
        raise IncompatibleComposition(
            "the thickening is not built over the morphism's target"
        )
    omap = {k.source.initial: t.complex.initial}
    for x in k.source.noninitial_objects:
        omap[x] = t.family_id(k.apply(x))
    return PolytopeFunctor(k.source, t.complex, omap,
                           name=f"family functor of {k.name}" if k.name else "family functor")


@dataclass(frozen=True)
class MonadLawsReport:
    bound: int
    left_unit: bool
    right_unit: bool
    associativity: bool
    sizes: tuple  # noninitial object counts of the three thickening levels
    failures: tuple

    @property
    def ok(self) -> bool:
        return self.left_unit and self.right_unit and self.associativity


def check_monad_laws(c: PolytopeComplex, bound: int) -> MonadLawsReport:
    """Verify the unit and associativity laws on materialized thickenings.

    Builds T, T2 = thicken(T), T3 = thicken(T2) at the given bound and
    compares the three composite functors objectwise.  Raises BoundExceeded
    when a law's composite needs a family larger than the bound.
    """
    t1 = thicken(c, bound)
    t2 = thicken(t1.complex, bound)
    t3 = thicken(t2.complex, bound)
    unit1 = unit_functor(t1)
    unit_t = unit_functor(t2)
    mu1 = flatten_functor(t2, t1)
    mu2 = flatten_functor(t3, t2)
    t_unit = thicken_functor(unit1, t1, t2)
    t_mu = thicken_functor(mu1, t3, t2)

    failures = []

    def agree(pairs, label):
        bad = [(x, got, want) for x, got, want in pairs if got != want]
        for x, got, want in bad[:5]:
            failures.append(f"{label} disagrees at {x}: {got} != {want}")
        return not bad

    left_unit = agree(
        [(a, mu1.apply(t_unit.apply(a)), a) for a in t1.complex.objects],
        "flatten after thickened unit",
    )
    right_unit = agree(
        [(a, mu1.apply(unit_t.apply(a)), a) for a in t1.complex.objects],
        "flatten after unit of the thickening",
    )
    associativity = agree(
        [
            (a, mu1.apply(t_mu.apply(a)), mu1.apply(mu2.apply(a)))
            for a in t3.complex.objects
        ],
        "flatten after thickened flatten vs flatten after flatten",
    )
    return MonadLawsReport(
        bound=bound,
        left_unit=left_unit,
        right_unit=right_unit,
        associativity=associativity,
        sizes=(
            len(t1.members),
            len(t2.members),
            len(t3.members),
        ),
        failures=tuple(failures),
    )


@dataclass(frozen=True)
class AlgebraSearchResult:
    status: str  # "found" or "contradiction"
    structure_map: object  # PolytopeFunctor when found, else None
    derivation: tuple  # numbered human-readable steps

    @property
    def found(self) -> bool:
        return self.status == "found"


def _numbered(lines) -> tuple:
    return tuple(f"{i}. {line}" for i, line in enumerate(lines, start=1))


def algebra_search(c: PolytopeComplex, bound: int,
                   max_assignments: int = 200000) -> AlgebraSearchResult:
    """Search for a functor collapsing the thickening back onto the base.

    The structure map must send every singleton family to its member, so the
    search propagates that constraint, filters candidates for larger
    families through monotonicity (the value must dominate every member),
    checks meet compatibility among forced values, and brute-forces whatever
    remains.  A contradiction returns the numbered chain of forcings that
    produced it.
    """
    t = thicken(c, bound)
    cx = t.complex
    unit_step = (
        "The structure map composed with the unit must be the identity, "
        "pinning every singleton: F((x)) = x."
    )

    candidates = {}
    reasons = {}  # family id -> reason line (omitted for singletons)
    for fid, fam in sorted(t.members.items()):
        if len(fam) == 1:
            candidates[fid] = [fam[0]]
            continue
        ups = [
            u
            for u in c.noninitial_objects
            if all(c.leq(m, u) for m in fam)
        ]
        candidates[fid] = ups
        if len(ups) == 1:
            reasons[fid] = (
                f"Monotonicity forces F({fid}) = {ups[0]}: the value must "
                f"dominate {', '.join(fam)}, and {ups[0]} is the only object "
                "above all of them."
            )
        elif not ups:
            return AlgebraSearchResult(
                "contradiction",
                None,
                _numbered(
                    [
                        unit_step,
                        f"F({fid}) must dominate every one of {', '.join(fam)}, "
                        "but no object lies above all of them.",
                    ]
                ),
            )

    def forced_items():
        return {fid: cands[0] for fid, cands in candidates.items() if len(cands) == 1}

    # Meet compatibility among forced values: where two families meet
    # trivially, their values must too.  (Nontrivial meets are reverified by
    # the final functor construction.)
    forced = forced_items()
    for fid, gid in combinations(sorted(forced), 2):
        if not cx.has_common_bound(fid, gid):
            continue
        if cx.meet(fid, gid) != cx.initial:
            continue
        u, v = forced[fid], forced[gid]
        base_meet = c.meet(u, v) if c.has_common_bound(u, v) else None
        if base_meet != c.initial:
            steps = [unit_step]
            for side in (fid, gid):
                if side in reasons:
                    steps.append(reasons[side])
            shown = base_meet if base_meet is not None else "no unique object"
            steps.append(
                f"The families {fid} and {gid} meet in the initial object, so "
                f"their values must too; but F({fid}) = {u} and F({gid}) = {v} "
                f"meet in {shown}, which is not the initial object. Contradiction."
            )
            return AlgebraSearchResult("contradiction", None, _numbered(steps))

    free = sorted(fid for fid, cands in candidates.items() if len(cands) != 1)
    total = 1
    for fid in free:
        total *= len(candidates[fid])
        if total > max_assignments:
            raise BoundExceeded(
                f"algebra search space exceeds {max_assignments} assignments"
            )

    base_map = {cx.initial: c.initial}
    base_map.update(forced_items())
    attempts = product(*(candidates[fid] for fid in free)) if free else [()]
    last_problems = None
    for values in attempts:
        omap = dict(base_map)
        omap.update(zip(free, values))
        try:
            functor = PolytopeFunctor(cx, c, omap, name="structure map")
        except ValidationError as err:
            last_problems = err.problems
            continue
        steps = [unit_step]
        steps.extend(reasons[fid] for fid in sorted(reasons))
        steps.append("All compatibility checks pass; the structure map is a functor.")
        return AlgebraSearchResult("found", functor, _numbered(steps))

    steps = [unit_step]
    steps.extend(reasons[fid] for fid in sorted(reasons))
    tail = (
        "Every assignment of the remaining values fails the functor checks"
        if free
        else "The forced assignment fails the functor checks"
    )
    if last_problems:
        tail += f" (last failure: {last_problems[0]})"
    steps.append(tail + ".")
    return AlgebraSearchResult("contradiction", None, _numbered(steps))
