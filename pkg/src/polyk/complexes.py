"""Finite presentations of polytope complexes and structure-preserving maps.

A complex is presented by
  * a finite poset of objects with a designated initial (empty) object that
    sits below everything — the vertical structure; greatest lower bounds
    play the role of pullbacks,
  * a basis of covering families ("this object decomposes into these parts"),
    generating a Grothendieck-style topology via refinement and pullback,
  * a groupoid of horizontal identifications ("these two objects are
    congruent"), given by generators carrying an explicit bijection of
    down-sets (the slice map).

`validate_complex` audits a presentation and returns a report of violations
with witnesses rather than raising, so malformed inputs can be inspected.
`PolytopeFunctor` and `KleisliMorphism` are the two kinds of maps between
complexes; both check structure preservation at construction.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass

from .errors import ClosureBoundExceeded, ValidationError


class Ternary(enum.Enum):
    """Outcome of a bounded search: definite yes/no, or undecided."""

    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"

    def __bool__(self):
        raise TypeError("Ternary is not a boolean; compare with Ternary.YES etc.")


class HorizontalMorphism:
    """A horizontal identification src -> dst with its slice map.

    ``mapping`` assigns to every u <= src an object mapping(u) <= dst; for a
    well-formed generator it is a bijection of down-sets fixing the initial
    object and sending src to dst.  Identity on name: two generators with the
    same endpoints and slice map are the same morphism.
    """

    __slots__ = ("name", "src", "dst", "mapping", "_dict")

    def __init__(self, name, src, dst, mapping):
        self.name = str(name)
        self.src = str(src)
        self.dst = str(dst)
        if isinstance(mapping, dict):
            pairs = mapping.items()
        else:
            pairs = mapping
        self.mapping = tuple(sorted((str(u), str(v)) for u, v in pairs))
        self._dict = dict(self.mapping)
        if len(self._dict) != len(self.mapping):
            raise ValidationError(f"horizontal {name}: duplicate slice source")

    def apply(self, u: str) -> str:
        return self._dict[u]

    def key(self):
        return (self.src, self.dst, self.mapping)

    def __eq__(self, other):
        if not isinstance(other, HorizontalMorphism):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"HorizontalMorphism({self.name}: {self.src} -> {self.dst})"

    @property
    def is_identity(self) -> bool:
        return self.src == self.dst and all(u == v for u, v in self.mapping)

    def inverse(self, name=None) -> "HorizontalMorphism":
        return HorizontalMorphism(
            name if name is not None else f"{self.name}~",
            self.dst,
            self.src,
            [(v, u) for u, v in self.mapping],
        )

    def then(self, other: "HorizontalMorphism") -> "HorizontalMorphism":
        """Composite: first self, then other (requires self.dst == other.src)."""
        if self.dst != other.src:
            raise ValidationError(
                f"cannot compose {self.name} ({self.dst}) with {other.name} ({other.src})"
            )
        return HorizontalMorphism(
            f"{other.name}*{self.name}",
            self.src,
            other.dst,
            [(u, other.apply(v)) for u, v in self.mapping],
        )

    def restrict(self, u: str, down_set) -> "HorizontalMorphism":
        """The slice map cut down to the down-set of u <= src."""
        in_slice = set(down_set)
        return HorizontalMorphism(
            f"{self.name}|{u}",
            u,
            self.apply(u),
            [(a, b) for a, b in self.mapping if a in in_slice],
        )

    @classmethod
    def identity_on(cls, obj: str, down_set) -> "HorizontalMorphism":
        return cls(f"id_{obj}", obj, obj, [(u, u) for u in down_set])


@dataclass(frozen=True)
class Violation:
    code: str
    message: str
    witness: tuple = ()


@dataclass
class ValidationReport:
    violations: list

    @property
    def ok(self) -> bool:
        return not self.violations

    def codes(self):
        return sorted({v.code for v in self.violations})

    def __repr__(self):
        if self.ok:
            return "ValidationReport(ok)"
        return f"ValidationReport({len(self.violations)} violations: {self.codes()})"


class PolytopeComplex:
    """An immutable presented polytope complex.

    ``order_pairs`` are generating x <= y statements; the stored relation is
    their reflexive-transitive closure plus initial <= everything.  Covers
    are (target, members) basis families; horizontal generators carry slice
    maps.  Construction only checks referential well-formedness — semantic
    invariants are audited by `validate_complex`.
    """

    def __init__(
        self,
        objects,
        initial,
        order_pairs=(),
        covers=(),
        horizontal_gens=(),
        explicit_pullbacks=(),
    ):
        self.objects = tuple(sorted(dict.fromkeys(str(x) for x in objects)))
        self.initial = str(initial)
        obj_set = set(self.objects)
        if self.initial not in obj_set:
            raise ValidationError(f"initial object {self.initial!r} not among objects")
        for x, y in order_pairs:
            if str(x) not in obj_set or str(y) not in obj_set:
                raise ValidationError(f"order pair ({x}, {y}) references unknown object")
        self.covers = tuple(
            sorted(
                dict.fromkeys(
                    (str(t), tuple(sorted(dict.fromkeys(str(m) for m in members))))
                    for t, members in covers
                )
            )
        )
        for t, members in self.covers:
            if t not in obj_set:
                raise ValidationError(f"cover target {t!r} unknown")
            for m in members:
                if m not in obj_set:
                    raise ValidationError(f"cover member {m!r} unknown")
        gens = []
        for h in horizontal_gens:
            if not isinstance(h, HorizontalMorphism):
                name, src, dst, mapping = h
                h = HorizontalMorphism(name, src, dst, mapping)
            if h.src not in obj_set or h.dst not in obj_set:
                raise ValidationError(f"horizontal {h.name}: unknown endpoint")
            gens.append(h)
        self.horizontal_gens = tuple(sorted(gens, key=lambda h: (h.name,) + h.key()))
        self.explicit_pullbacks = tuple(
            sorted(
                ((str(x), str(y), str(c)), str(z))
                for (x, y, c), z in explicit_pullbacks
            )
        )
        for (x, y, c), z in self.explicit_pullbacks:
            for o in (x, y, c, z):
                if o not in obj_set:
                    raise ValidationError(f"pullback declaration references unknown {o!r}")

        # Reflexive-transitive closure of the order, with initial below all.
        succ = {x: {x} for x in self.objects}
        for x in self.objects:
            succ[self.initial].add(x)
        for x, y in order_pairs:
            succ[str(x)].add(str(y))
        changed = True
        while changed:
            changed = False
            for x in self.objects:
                new = set()
                for y in succ[x]:
                    new |= succ[y]
                if not new <= succ[x]:
                    succ[x] |= new
                    changed = True
        self._up = {x: frozenset(ys) for x, ys in succ.items()}
        down = {x: set() for x in self.objects}
        for x, ys in self._up.items():
            for y in ys:
                down[y].add(x)
        self._down = {x: tuple(sorted(s)) for x, s in down.items()}

        self._covers_by_target = {}
        for t, members in self.covers:
            self._covers_by_target.setdefault(t, []).append(members)

        self._meet_cache = {}
        self._closure_cache = {}
        self._cover_query_cache = {}
        self._cover_family_cache = {}

    # ---------------------------------------------------------------- order

    @property
    def noninitial_objects(self):
        return tuple(x for x in self.objects if x != self.initial)

    def leq(self, x: str, y: str) -> bool:
        return y in self._up[x]

    def down_set(self, x: str):
        """All objects <= x (including x and the initial object), sorted."""
        return self._down[x]

    def up_set(self, x: str):
        return tuple(sorted(self._up[x]))

    def has_common_bound(self, x: str, y: str) -> bool:
        return bool(self._up[x] & self._up[y])

    def meet(self, x: str, y: str):
        """Greatest common lower bound, or None if no unique one exists.

        In a valid complex the meet exists for every pair with a common upper
        bound and is independent of the slice, so it serves as pullback(x, y, c)
        for every common bound c.
        """
        key = (x, y) if x <= y else (y, x)
        if key in self._meet_cache:
            return self._meet_cache[key]
        commons = set(self._down[x]) & set(self._down[y])
        maximal = [
            z for z in commons if not any(w != z and self.leq(z, w) for w in commons)
        ]
        result = maximal[0] if len(maximal) == 1 else None
        self._meet_cache[key] = result
        return result

    def pullback(self, x: str, y: str, c: str) -> str:
        """The pullback of x, y <= c: their greatest lower bound."""
        if not (self.leq(x, c) and self.leq(y, c)):
            raise ValidationError(f"pullback({x}, {y} | {c}): not a cospan")
        m = self.meet(x, y)
        if m is None:
            raise ValidationError(
                f"pullback({x}, {y} | {c}): no greatest lower bound exists"
            )
        return m

    def disjoint(self, x: str, y: str) -> bool:
        """Do x and y sit in a common object while overlapping only trivially?"""
        if x == self.initial or y == self.initial:
            raise ValidationError("disjointness is asked of noninitial objects")
        return self.has_common_bound(x, y) and self.meet(x, y) == self.initial

    # --------------------------------------------------------------- covers

    def declared_covers_of(self, target: str):
        return tuple(self._covers_by_target.get(target, ()))

    def is_cover(self, family, target: str, depth_bound: int = 8) -> Ternary:
        """Does ``family`` cover ``target`` in the generated topology?

        Search: a pending object is discharged if it lies under a family
        member; otherwise it is refined by a declared basis family or by the
        pullback of a basis family living on any object above it.  YES when
        some refinement empties the pending set, NO when the whole search
        space is exhausted, UNKNOWN when the depth bound cuts the search off.
        """
        family = tuple(sorted(set(str(f) for f in family)))
        for f in family:
            if not self.leq(f, target):
                raise ValidationError(f"cover member {f} not below target {target}")
        if target == self.initial:
            return Ternary.YES

        cache_key = (family, target)
        cached = self._cover_query_cache.get(cache_key)
        if cached is not None:
            result, bound_used = cached
            if result in (Ternary.YES, Ternary.NO) or depth_bound <= bound_used:
                return result

        def covered(u):
            return any(self.leq(u, f) for f in family)

        start = frozenset(u for u in (target,) if not covered(u))
        if not start:
            self._cover_query_cache[cache_key] = (Ternary.YES, depth_bound)
            return Ternary.YES

        frontier = {start}
        seen = {start}
        result = None
        for _round in range(depth_bound):
            next_frontier = set()
            for state in sorted(frontier, key=sorted):
                u = min(state)
                rest = state - {u}
                for fam in self._one_step_covers(u):
                    new = rest | frozenset(
                        v for v in fam if v != self.initial and not covered(v)
                    )
                    if not new:
                        result = Ternary.YES
                        break
                    if new not in seen:
                        seen.add(new)
                        next_frontier.add(new)
                if result is not None:
                    break
            if result is not None:
                break
            if not next_frontier:
                result = Ternary.NO
                break
            frontier = next_frontier
        else:
            result = Ternary.UNKNOWN

        self._cover_query_cache[cache_key] = (result, depth_bound)
        return result

    def _one_step_covers(self, u: str):
        """Basis families on u, plus pullbacks to u of basis families above it."""
        out = []
        for fam in self.declared_covers_of(u):
            out.append(fam)
        for c in self.up_set(u):
            if c == u:
                continue
            for fam in self.declared_covers_of(c):
                pulled = tuple(
                    sorted(
                        {
                            m
                            for m in (self.meet(w, u) for w in fam)
                            if m is not None and m != self.initial
                        }
                    )
                )
                # An empty pullback family would wrongly discharge u; in a
                # valid complex a covered region meets every cover.
                if pulled:
                    out.append(pulled)
        return out

    def disjoint_covering_families(self, target: str, allowed=None, depth_bound: int = 8):
        """All pairwise-disjoint families of noninitial pieces covering target.

        ``allowed`` restricts the candidate pieces (default: the whole strict
        down-set).  The identity family (target,) is included when allowed.
        Families whose cover status is UNKNOWN at the bound are skipped.
        """
        pieces = [
            z
            for z in self.down_set(target)
            if z != self.initial and (allowed is None or z in allowed)
        ]
        key = (target, tuple(pieces), depth_bound)
        cached = self._cover_family_cache.get(key)
        if cached is not None:
            return cached
        results = []
        for size in range(1, len(pieces) + 1):
            for combo in itertools.combinations(pieces, size):
                if any(
                    not self.disjoint(a, b) for a, b in itertools.combinations(combo, 2)
                ):
                    continue
                if self.is_cover(combo, target, depth_bound) is Ternary.YES:
                    results.append(combo)
        results = tuple(results)
        self._cover_family_cache[key] = results
        return results

    # ---------------------------------------------------------- horizontals

    def horizontal_closure_morphisms(self, bound: int = 10000):
        """The groupoid generated by the declared horizontals: identities,
        inverses, and composites, as a sorted tuple.  Raises
        ClosureBoundExceeded past ``bound`` distinct morphisms."""
        if bound in self._closure_cache:
            return self._closure_cache[bound]
        for cached_bound, morphisms in self._closure_cache.items():
            if cached_bound >= bound and len(morphisms) <= bound:
                self._closure_cache[bound] = morphisms
                return morphisms
        by_key = {}

        def add(h):
            if h.key() not in by_key:
                if len(by_key) >= bound:
                    raise ClosureBoundExceeded(
                        f"horizontal closure exceeds {bound} morphisms"
                    )
                by_key[h.key()] = h
                return True
            return False

        for x in self.objects:
            add(HorizontalMorphism.identity_on(x, self.down_set(x)))
        pending = []
        for g in self.horizontal_gens:
            if add(g):
                pending.append(g)
            inv = g.inverse()
            if add(inv):
                pending.append(inv)
        while pending:
            h = pending.pop()
            for other in list(by_key.values()):
                if h.dst == other.src:
                    comp = h.then(other)
                    if add(comp):
                        pending.append(comp)
                if other.dst == h.src:
                    comp = other.then(h)
                    if add(comp):
                        pending.append(comp)
        morphisms = tuple(sorted(by_key.values(), key=lambda m: m.key()))
        self._closure_cache[bound] = morphisms
        return morphisms

    def horizontal_closure(self, bound: int = 10000) -> "PolytopeComplex":
        """The same complex with its horizontal generators saturated."""
        morphisms = self.horizontal_closure_morphisms(bound)
        return PolytopeComplex(
            self.objects,
            self.initial,
            order_pairs=[
                (x, y) for x in self.objects for y in self._up[x] if x != y
            ],
            covers=self.covers,
            horizontal_gens=morphisms,
            explicit_pullbacks=self.explicit_pullbacks,
        )

    def closure_isos_between(self, x: str, y: str, bound: int = 10000):
        return tuple(
            h for h in self.horizontal_closure_morphisms(bound) if h.src == x and h.dst == y
        )

    # ------------------------------------------------------------------ misc

    def __eq__(self, other):
        if not isinstance(other, PolytopeComplex):
            return NotImplemented
        return (
            self.objects == other.objects
            and self.initial == other.initial
            and self._up == other._up
            and self.covers == other.covers
            and tuple(h.key() for h in self.horizontal_gens)
            == tuple(h.key() for h in other.horizontal_gens)
            and self.explicit_pullbacks == other.explicit_pullbacks
        )

    __hash__ = None

    def __repr__(self):
        return (
            f"PolytopeComplex({len(self.objects)} objects, "
            f"{len(self.covers)} covers, {len(self.horizontal_gens)} horizontals)"
        )

    def order_pairs(self):
        """The full <= relation as sorted pairs (x, y), x != y."""
        return tuple(
            sorted((x, y) for x in self.objects for y in self._up[x] if x != y)
        )

    def hasse_pairs(self):
        """Transitive reduction of the order on noninitial objects."""
        pairs = []
        for x in self.noninitial_objects:
            for y in self._up[x]:
                if y == x:
                    continue
                if any(
                    z != x and z != y and self.leq(x, z) and self.leq(z, y)
                    for z in self.objects
                    if z != self.initial
                ):
                    continue
                pairs.append((x, y))
        return tuple(sorted(pairs))


def validate_complex(c: PolytopeComplex, depth_bound: int = 8) -> ValidationReport:
    """Audit a presentation; returns a report of violations with witnesses."""
    v = []

    for x in c.objects:
        if not c.leq(c.initial, x):
            v.append(
                Violation("initial-below", f"initial not below {x}", (c.initial, x))
            )

    for x in c.objects:
        for y in c._up[x]:
            if x != y and c.leq(y, x):
                v.append(
                    Violation("antisymmetry", f"{x} <= {y} <= {x} with {x} != {y}", (x, y))
                )

    for x, y in itertools.combinations(c.objects, 2):
        if c.has_common_bound(x, y) and c.meet(x, y) is None:
            commons = set(c.down_set(x)) & set(c.down_set(y))
            maximal = tuple(
                sorted(
                    z
                    for z in commons
                    if not any(w != z and c.leq(z, w) for w in commons)
                )
            )
            v.append(
                Violation(
                    "meet-exists",
                    f"{x} and {y} share a bound but have no greatest lower bound",
                    (x, y, maximal),
                )
            )

    for (x, y, cc), z in c.explicit_pullbacks:
        if not (c.leq(x, cc) and c.leq(y, cc)):
            v.append(
                Violation(
                    "pullback-declared",
                    f"pullback ({x}, {y} | {cc}) declared on a non-cospan",
                    (x, y, cc, z),
                )
            )
            continue
        if not (c.leq(z, x) and c.leq(z, y)):
            v.append(
                Violation(
                    "pullback-declared",
                    f"declared pullback {z} is not a lower bound of {x} and {y}",
                    (x, y, cc, z),
                )
            )
            continue
        m = c.meet(x, y)
        if m is not None and m != z:
            v.append(
                Violation(
                    "pullback-declared",
                    f"declared pullback ({x}, {y} | {cc}) = {z} "
                    f"but the greatest lower bound is {m}",
                    (x, y, cc, z, m),
                )
            )

    for target, members in c.covers:
        if not members:
            v.append(
                Violation("cover-empty", f"empty covering family on {target}", (target,))
            )
            continue
        for m in members:
            if m == c.initial:
                v.append(
                    Violation(
                        "cover-member",
                        f"covering family on {target} lists the initial object",
                        (target, m),
                    )
                )
            elif not c.leq(m, target):
                v.append(
                    Violation(
                        "cover-member",
                        f"cover member {m} is not below its target {target}",
                        (target, m),
                    )
                )

    try:
        closure = c.horizontal_closure_morphisms()
        closure_keys = {h.key() for h in closure}
    except ClosureBoundExceeded as exc:
        closure = None
        closure_keys = None
        v.append(Violation("closure-bound", str(exc)))

    for h in c.horizontal_gens:
        down_src = c.down_set(h.src)
        down_dst = c.down_set(h.dst)
        domain = tuple(u for u, _ in h.mapping)
        if domain != tuple(down_src):
            v.append(
                Violation(
                    "slice-domain",
                    f"horizontal {h.name}: slice domain is not the down-set of {h.src}",
                    (h.name, domain, tuple(down_src)),
                )
            )
            continue
        values = [val for _, val in h.mapping]
        if sorted(values) != list(down_dst) or len(set(values)) != len(values):
            v.append(
                Violation(
                    "slice-bijection",
                    f"horizontal {h.name}: slice map is not a bijection onto "
                    f"the down-set of {h.dst}",
                    (h.name,),
                )
            )
            continue
        if h.apply(c.initial) != c.initial:
            v.append(
                Violation(
                    "slice-initial",
                    f"horizontal {h.name}: does not fix the initial object",
                    (h.name,),
                )
            )
        if h.apply(h.src) != h.dst:
            v.append(
                Violation(
                    "slice-top",
                    f"horizontal {h.name}: does not send {h.src} to {h.dst}",
                    (h.name,),
                )
            )
        for a, b in itertools.combinations(down_src, 2):
            if c.leq(a, b) and not c.leq(h.apply(a), h.apply(b)):
                v.append(
                    Violation(
                        "slice-monotone",
                        f"horizontal {h.name}: {a} <= {b} but images are not ordered",
                        (h.name, a, b),
                    )
                )
            if c.leq(b, a) and not c.leq(h.apply(b), h.apply(a)):
                v.append(
                    Violation(
                        "slice-monotone",
                        f"horizontal {h.name}: {b} <= {a} but images are not ordered",
                        (h.name, b, a),
                    )
                )
        for a, b in itertools.combinations(down_src, 2):
            ma = c.meet(a, b)
            mb = c.meet(h.apply(a), h.apply(b))
            if ma is not None and mb != h.apply(ma):
                v.append(
                    Violation(
                        "slice-meets",
                        f"horizontal {h.name}: image of meet({a}, {b}) differs "
                        "from meet of images",
                        (h.name, a, b, ma, mb),
                    )
                )
        for target, members in c.covers:
            if not c.leq(target, h.src) or not members:
                continue
            image_family = tuple(sorted({h.apply(m) for m in members}))
            image_target = h.apply(target)
            if not all(c.leq(m, image_target) for m in image_family):
                v.append(
                    Violation(
                        "slice-covers",
                        f"horizontal {h.name}: image of the family on {target} "
                        f"is not even a family on {image_target}",
                        (h.name, target, image_family),
                    )
                )
                continue
            status = c.is_cover(image_family, image_target, depth_bound)
            if status is Ternary.NO:
                v.append(
                    Violation(
                        "slice-covers",
                        f"horizontal {h.name}: image of the family on {target} "
                        f"does not cover {h.apply(target)}",
                        (h.name, target, image_family),
                    )
                )
            elif status is Ternary.UNKNOWN:
                v.append(
                    Violation(
                        "slice-covers-unknown",
                        f"horizontal {h.name}: cover preservation on {target} "
                        f"undecided at depth {depth_bound}",
                        (h.name, target, image_family),
                    )
                )
        if closure_keys is not None:
            for u in down_src:
                restricted = h.restrict(u, c.down_set(u))
                if restricted.key() not in closure_keys:
                    v.append(
                        Violation(
                            "slice-restriction",
                            f"horizontal {h.name}: restriction to {u} is not "
                            "in the generated groupoid",
                            (h.name, u),
                        )
                    )

    return ValidationReport(v)


# --------------------------------------------------------------------- maps


class PolytopeFunctor:
    """An object map preserving order, initiality, pullbacks, covers, and
    horizontal generators.  Construction raises ValidationError listing every
    violation; noninitial objects may be collapsed to the target's initial.
    """

    def __init__(self, source, target, object_map, name="", check=True, depth_bound=8):
        self.source = source
        self.target = target
        self.name = name
        omap = {str(k): str(v) for k, v in dict(object_map).items()}
        omap[source.initial] = target.initial
        self.object_map = omap
        if check:
            problems = self._check(depth_bound)
            if problems:
                raise ValidationError(problems)

    def apply(self, x: str) -> str:
        return self.object_map[x]

    def _check(self, depth_bound):
        src, tgt = self.source, self.target
        problems = []
        missing = [x for x in src.objects if x not in self.object_map]
        if missing:
            return [f"functor {self.name}: no image for objects {missing}"]
        bad_targets = [
            x for x, y in self.object_map.items() if y not in set(tgt.objects)
        ]
        if bad_targets:
            return [f"functor {self.name}: images of {bad_targets} are not objects"]

        for x in src.objects:
            for y in src.up_set(x):
                if not tgt.leq(self.apply(x), self.apply(y)):
                    problems.append(
                        f"functor {self.name}: {x} <= {y} not preserved "
                        f"({self.apply(x)} vs {self.apply(y)})"
                    )

        for x, y in itertools.combinations(src.objects, 2):
            if not src.has_common_bound(x, y):
                continue
            m = src.meet(x, y)
            fx, fy = self.apply(x), self.apply(y)
            if m is None:
                continue  # source invalid; validate_complex reports it
            if not tgt.has_common_bound(fx, fy):
                problems.append(
                    f"functor {self.name}: images of bounded pair ({x}, {y}) unbounded"
                )
                continue
            fm = tgt.meet(fx, fy)
            if fm != self.apply(m):
                problems.append(
                    f"functor {self.name}: pullback of ({x}, {y}) not preserved "
                    f"({self.apply(m)} vs {fm})"
                )

        for target_obj, members in src.covers:
            if not members:
                continue
            image_target = self.apply(target_obj)
            image_family = tuple(
                sorted(
                    {
                        self.apply(m)
                        for m in members
                        if self.apply(m) != tgt.initial
                    }
                )
            )
            if image_target == tgt.initial:
                continue
            if not all(tgt.leq(m, image_target) for m in image_family):
                continue  # monotonicity violation, reported above
            status = tgt.is_cover(image_family, image_target, depth_bound)
            if status is not Ternary.YES:
                problems.append(
                    f"functor {self.name}: image of family on {target_obj} does not "
                    f"demonstrably cover {image_target} ({status.value})"
                )

        closure = tgt.horizontal_closure_morphisms()
        by_endpoints = {}
        for h in closure:
            by_endpoints.setdefault((h.src, h.dst), []).append(h)
        for g in src.horizontal_gens:
            fs, fd = self.apply(g.src), self.apply(g.dst)
            wanted = [(self.apply(u), self.apply(gu)) for u, gu in g.mapping]
            ok_candidate = False
            for h in by_endpoints.get((fs, fd), ()):
                if all(h.apply(a) == b for a, b in wanted):
                    ok_candidate = True
                    break
            if not ok_candidate:
                problems.append(
                    f"functor {self.name}: no horizontal {fs} -> {fd} in the target "
                    f"groupoid matches generator {g.name}"
                )
        return problems

    @classmethod
    def identity(cls, complex_):
        return cls(
            complex_,
            complex_,
            {x: x for x in complex_.objects},
            name="id",
            check=False,
        )

    def compose(self, inner: "PolytopeFunctor") -> "PolytopeFunctor":
        """self after inner."""
        if inner.target is not self.source:
            raise ValidationError("functor composition endpoint mismatch")
        return PolytopeFunctor(
            inner.source,
            self.target,
            {x: self.apply(inner.apply(x)) for x in inner.source.objects},
            name=f"{self.name}*{inner.name}",
            check=False,
        )

    def __repr__(self):
        return f"PolytopeFunctor({self.name or 'unnamed'})"


def _family_sorted(members):
    return tuple(sorted(members))


class KleisliMorphism:
    """A map sending each noninitial source object to a pairwise-disjoint
    (possibly empty) family of noninitial target objects, preserving the
    vertical, pullback, covering, and horizontal structure pointwise.

    This is exactly a structure-preserving map into the thickening of the
    target, validated without materializing that thickening.
    """

    def __init__(self, source, target, family_map, name="", check=True, depth_bound=8):
        self.source = source
        self.target = target
        self.name = name
        fmap = {}
        for k, vs in dict(family_map).items():
            fmap[str(k)] = _family_sorted(str(v) for v in vs)
        self.family_map = fmap
        if check:
            problems = self._check(depth_bound)
            if problems:
                raise ValidationError(problems)

    def apply(self, x: str):
        if x == self.source.initial:
            return ()
        return self.family_map[x]

    @classmethod
    def from_functor(cls, functor: PolytopeFunctor, name=None) -> "KleisliMorphism":
        fmap = {}
        for x in functor.source.noninitial_objects:
            y = functor.apply(x)
            fmap[x] = () if y == functor.target.initial else (y,)
        return cls(
            functor.source,
            functor.target,
            fmap,
            name=name if name is not None else functor.name,
            check=False,
        )

    @classmethod
    def identity(cls, complex_) -> "KleisliMorphism":
        return cls(
            complex_,
            complex_,
            {x: (x,) for x in complex_.noninitial_objects},
            name="id",
            check=False,
        )

    def compose(self, inner: "KleisliMorphism") -> "KleisliMorphism":
        """self after inner: flatten memberwise images."""
        if inner.target is not self.source:
            raise ValidationError("kleisli composition endpoint mismatch")
        fmap = {}
        for x in inner.source.noninitial_objects:
            members = []
            for y in inner.apply(x):
                members.extend(self.apply(y))
            fmap[x] = _family_sorted(members)
        return KleisliMorphism(
            inner.source,
            self.target,
            fmap,
            name=f"{self.name}*{inner.name}",
            check=False,
        )

    def _check(self, depth_bound):
        src, tgt = self.source, self.target
        problems = []
        missing = [x for x in src.noninitial_objects if x not in self.family_map]
        if missing:
            return [f"kleisli {self.name}: no family for objects {missing}"]
        tgt_objects = set(tgt.noninitial_objects)
        for x, fam in self.family_map.items():
            bad = [m for m in fam if m not in tgt_objects]
            if bad:
                problems.append(
                    f"kleisli {self.name}: family of {x} has non-objects {bad}"
                )
                continue
            if len(set(fam)) != len(fam):
                problems.append(
                    f"kleisli {self.name}: family of {x} repeats a member"
                )
                continue
            for a, b in itertools.combinations(fam, 2):
                if not tgt.disjoint(a, b):
                    problems.append(
                        f"kleisli {self.name}: family of {x} is not pairwise "
                        f"disjoint ({a} meets {b})"
                    )
        if problems:
            return problems

        def parent_in(member, family):
            parents = [v for v in family if tgt.leq(member, v)]
            return parents[0] if len(parents) == 1 else None

        for x in src.noninitial_objects:
            for y in src.up_set(x):
                if y == x or y == src.initial:
                    continue
                fy = self.apply(y)
                for u in self.apply(x):
                    if parent_in(u, fy) is None:
                        problems.append(
                            f"kleisli {self.name}: {x} <= {y} but member {u} has "
                            f"no unique parent in the image of {y}"
                        )

        for x, y in itertools.combinations(src.noninitial_objects, 2):
            if not src.has_common_bound(x, y):
                continue
            m = src.meet(x, y)
            if m is None:
                continue
            bounds = [c for c in src.up_set(x) if src.leq(y, c)]
            c = bounds[0]
            fc = self.apply(c)
            expected = self.apply(m) if m != src.initial else ()
            meets = []
            for u in self.apply(x):
                pu = parent_in(u, fc)
                if pu is None:
                    continue  # monotonicity violation, reported above
                for w in self.apply(y):
                    if parent_in(w, fc) != pu:
                        continue
                    mm = tgt.meet(u, w)
                    if mm is not None and mm != tgt.initial:
                        meets.append(mm)
            if _family_sorted(meets) != expected:
                problems.append(
                    f"kleisli {self.name}: pullback of ({x}, {y}) not preserved "
                    f"({_family_sorted(meets)} vs {expected})"
                )

        for target_obj, members in src.covers:
            if not members or target_obj == src.initial:
                continue
            ft = self.apply(target_obj)
            pieces = []
            for m in members:
                pieces.extend(self.apply(m))
            for v_member in ft:
                under = tuple(sorted({p for p in pieces if tgt.leq(p, v_member)}))
                status = tgt.is_cover(under, v_member, depth_bound)
                if status is not Ternary.YES:
                    problems.append(
                        f"kleisli {self.name}: images of the family on {target_obj} "
                        f"do not demonstrably cover member {v_member} ({status.value})"
                    )

        closure = tgt.horizontal_closure_morphisms()
        by_src = {}
        for h in closure:
            by_src.setdefault(h.src, []).append(h)
        for g in src.horizontal_gens:
            fs = self.apply(g.src)
            fd = self.apply(g.dst)
            if len(fs) != len(fd):
                problems.append(
                    f"kleisli {self.name}: generator {g.name} relates families "
                    f"of different sizes"
                )
                continue
            down_src = [u for u in src.down_set(g.src) if u != src.initial]

            def compatible(u_member, h):
                """Does closure morphism h: u_member -> v respect every slice?"""
                v_member = h.dst
                for w in down_src:
                    mapped = sorted(
                        h.apply(t) for t in self.apply(w) if tgt.leq(t, u_member)
                    )
                    expected = sorted(
                        s for s in self.apply(g.apply(w)) if tgt.leq(s, v_member)
                    )
                    if mapped != expected:
                        return False
                return True

            candidates = {
                u: [
                    h
                    for h in by_src.get(u, ())
                    if h.dst in fd and compatible(u, h)
                ]
                for u in fs
            }

            def match(remaining_src, used_dst):
                if not remaining_src:
                    return True
                u = remaining_src[0]
                for h in candidates[u]:
                    if h.dst in used_dst:
                        continue
                    if match(remaining_src[1:], used_dst | {h.dst}):
                        return True
                return False

            if not match(list(fs), set()):
                problems.append(
                    f"kleisli {self.name}: generator {g.name} has no compatible "
                    f"family of horizontal morphisms between the image families"
                )
        return problems

    def __repr__(self):
        return f"KleisliMorphism({self.name or 'unnamed'})"


# ------------------------------------------------------------------- wedges


def rename_objects(c: PolytopeComplex, mapping) -> PolytopeComplex:
    """Relabel objects along a bijection given as a dict (total on objects)."""
    mapping = {str(k): str(v) for k, v in dict(mapping).items()}
    if sorted(mapping) != list(c.objects) or len(set(mapping.values())) != len(mapping):
        raise ValidationError("rename mapping is not a bijection on the objects")

    def m(x):
        return mapping[x]

    return PolytopeComplex(
        [m(x) for x in c.objects],
        m(c.initial),
        order_pairs=[(m(x), m(y)) for x, y in c.order_pairs()],
        covers=[(m(t), tuple(m(x) for x in members)) for t, members in c.covers],
        horizontal_gens=[
            HorizontalMorphism(h.name, m(h.src), m(h.dst), [(m(u), m(v)) for u, v in h.mapping])
            for h in c.horizontal_gens
        ],
        explicit_pullbacks=[
            ((m(x), m(y), m(cc)), m(z)) for (x, y, cc), z in c.explicit_pullbacks
        ],
    )


def wedge_many(complexes, prefix_format="c{i}.", initial_id="0") -> PolytopeComplex:
    """One-point union: each summand's noninitial objects tagged by copy
    index, initial objects merged into a single new initial."""
    objects = [initial_id]
    order_pairs = []
    covers = []
    gens = []
    pullbacks = []
    for i, c in enumerate(complexes):
        prefix = prefix_format.format(i=i)

        def m(x, c=c, prefix=prefix):
            return initial_id if x == c.initial else prefix + x

        objects.extend(m(x) for x in c.noninitial_objects)
        order_pairs.extend(
            (m(x), m(y)) for x, y in c.order_pairs() if x != c.initial
        )
        covers.extend(
            (m(t), tuple(m(x) for x in members)) for t, members in c.covers
        )
        gens.extend(
            HorizontalMorphism(
                f"{prefix}{h.name}",
                m(h.src),
                m(h.dst),
                [(m(u), m(v)) for u, v in h.mapping],
            )
            for h in c.horizontal_gens
        )
        pullbacks.extend(
            ((m(x), m(y), m(cc)), m(z)) for (x, y, cc), z in c.explicit_pullbacks
        )
    return PolytopeComplex(
        objects, initial_id, order_pairs, covers, gens, pullbacks
    )


def wedge(c: PolytopeComplex, d: PolytopeComplex, prefixes=("l.", "r."), initial_id="0"):
    """Two-summand one-point union with custom copy prefixes."""
    left, right = prefixes
    out = wedge_many([c, d], initial_id=initial_id)
    mapping = {initial_id: initial_id}
    for x in c.noninitial_objects:
        mapping["c0." + x] = left + x
    for x in d.noninitial_objects:
        mapping["c1." + x] = right + x
    return rename_objects(out, mapping)


def wedge_power(c: PolytopeComplex, n: int, initial_id="0") -> PolytopeComplex:
    if n < 0:
        raise ValidationError("wedge power wants n >= 0")
    if n == 0:
        return PolytopeComplex([initial_id], initial_id)
    return wedge_many([c] * n, initial_id=initial_id)
