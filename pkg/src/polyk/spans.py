"""Indexed families over a complex and spans between them.

Objects are finite indexed families of noninitial objects of one base
complex (repetition allowed, the empty family is the zero object).  A
morphism A -> B is a finite set of rows; each row carries

  * ``member`` — a noninitial piece of the base,
  * ``sub`` — the index of the A-member the piece sits inside,
  * ``shuffle`` — the index of the B-member it is identified with,
  * ``component`` — a horizontal iso (member -> B[shuffle]) from the base's
    generated groupoid, *onto the whole target member*.

Rows over the same A-index must have pairwise disjoint members.  Rows are
kept in canonical order, so syntactic equality (``==``) compares canonical
representatives; ``sc_equal`` decides equality of the represented maps by a
single round of mutual refinement.

Classification: a morphism is *covering* when every source fiber covers its
member, a *cofibration* when additionally no two rows share a target index,
a *weak equivalence* when the shuffle leg is a bijection on indices.  A
representative with fewer rows than the canonical one cannot exist: a merged
row would need a member strictly containing another while carrying an iso
onto the same target member, and isos of down-sets preserve cardinality.

``pushout`` glues along a cofibration; it is total on valid input because
target members are refined by choice-function meets of the transported
covers.  ``verify_cofiltered_preorder`` checks, for one family, that the
bounded poset of refining weak equivalences out of it has at most one arrow
between any two vertices and a common refinement for every pair.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .complexes import HorizontalMorphism, PolytopeComplex, Ternary
from .errors import (
    IncompatibleComposition,
    NotACofibration,
    UnsupportedPushout,
    ValidationError,
)


def _closure_keys(base: PolytopeComplex):
    keys = getattr(base, "_span_closure_keys", None)
    if keys is None:
        keys = {h.key(): h for h in base.horizontal_closure_morphisms()}
        base._span_closure_keys = keys
    return keys


class PolytopeFamily:
    """A finite indexed family of noninitial objects of ``base``."""

    __slots__ = ("base", "members")

    def __init__(self, base: PolytopeComplex, members=()):
        self.base = base
        self.members = tuple(str(m) for m in members)
        bad = [m for m in self.members if m not in set(base.objects) or m == base.initial]
        if bad:
            raise ValidationError(f"family members must be noninitial objects: {bad}")

    def __len__(self):
        return len(self.members)

    def __getitem__(self, i):
        return self.members[i]

    def __iter__(self):
        return iter(self.members)

    @property
    def is_zero(self):
        return not self.members

    def same_base(self, other) -> bool:
        return self.base is other.base or self.base == other.base

    def __eq__(self, other):
        if not isinstance(other, PolytopeFamily):
            return NotImplemented
        return self.same_base(other) and self.members == other.members

    __hash__ = None

    def __repr__(self):
        return f"PolytopeFamily({list(self.members)})"


def zero_family(base: PolytopeComplex) -> PolytopeFamily:
    return PolytopeFamily(base, ())


@dataclass(frozen=True)
class Row:
    member: str
    sub: int
    shuffle: int
    component: HorizontalMorphism

    def sort_key(self):
        return (self.sub, self.shuffle, self.member, self.component.mapping)


class SpanMorphism:
    """A span A <- pieces -> B in canonical form; see the module docstring."""

    __slots__ = ("source", "target", "rows")

    def __init__(self, source: PolytopeFamily, target: PolytopeFamily, rows, check=True):
        if not source.same_base(target):
            raise IncompatibleComposition("source and target live over different bases")
        self.source = source
        self.target = target
        normalized = []
        for r in rows:
            if not isinstance(r, Row):
                r = Row(*r)
            normalized.append(r)
        self.rows = tuple(sorted(normalized, key=Row.sort_key))
        if check:
            self._validate()

    def _validate(self):
        base = self.source.base
        closure = _closure_keys(base)
        problems = []
        for r in self.rows:
            if not (0 <= r.sub < len(self.source)):
                problems.append(f"row sub index {r.sub} out of range")
                continue
            if not (0 <= r.shuffle < len(self.target)):
                problems.append(f"row shuffle index {r.shuffle} out of range")
                continue
            if r.member == base.initial:
                problems.append("row member is the initial object")
                continue
            if not base.leq(r.member, self.source[r.sub]):
                problems.append(
                    f"row member {r.member} not below source member "
                    f"{self.source[r.sub]}"
                )
            if r.component.src != r.member or r.component.dst != self.target[r.shuffle]:
                problems.append(
                    f"component endpoints ({r.component.src} -> {r.component.dst}) "
                    f"do not match row ({r.member} -> {self.target[r.shuffle]})"
                )
            elif r.component.key() not in closure:
                problems.append(
                    f"component {r.member} -> {self.target[r.shuffle]} is not in "
                    "the base groupoid"
                )
        by_sub = {}
        for r in self.rows:
            by_sub.setdefault(r.sub, []).append(r)
        for i, fiber in by_sub.items():
            for a, b in itertools.combinations(fiber, 2):
                if a.member == b.member or not self.source.base.disjoint(a.member, b.member):
                    problems.append(
                        f"fiber over source index {i} has overlapping members "
                        f"{a.member} and {b.member}"
                    )
        if problems:
            raise ValidationError(problems)

    # ------------------------------------------------------------- structure

    def fiber(self, i: int):
        return tuple(r for r in self.rows if r.sub == i)

    def shuffle_indices(self):
        return tuple(r.shuffle for r in self.rows)

    @classmethod
    def identity(cls, family: PolytopeFamily) -> "SpanMorphism":
        base = family.base
        rows = [
            Row(m, i, i, HorizontalMorphism.identity_on(m, base.down_set(m)))
            for i, m in enumerate(family.members)
        ]
        return cls(family, family, rows, check=False)

    def compose(self, inner: "SpanMorphism") -> "SpanMorphism":
        """self after inner (inner: A -> B, self: B -> C)."""
        if not (inner.target == self.source):
            raise IncompatibleComposition(
                "composition endpoint mismatch between spans"
            )
        base = inner.source.base
        rows = []
        by_sub = {}
        for r in self.rows:
            by_sub.setdefault(r.sub, []).append(r)
        for f_row in inner.rows:
            phi_inv = f_row.component.inverse()
            for g_row in by_sub.get(f_row.shuffle, ()):
                piece = phi_inv.apply(g_row.member)
                restricted = phi_inv.restrict(g_row.member, base.down_set(g_row.member))
                # restricted: g_row.member -> piece; flip to piece -> g_row.member
                lift = restricted.inverse()
                comp = lift.then(g_row.component)
                rows.append(Row(piece, f_row.sub, g_row.shuffle, comp))
        return SpanMorphism(inner.source, self.target, rows, check=False)

    def __eq__(self, other):
        if not isinstance(other, SpanMorphism):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and tuple((r.member, r.sub, r.shuffle, r.component.key()) for r in self.rows)
            == tuple((r.member, r.sub, r.shuffle, r.component.key()) for r in other.rows)
        )

    __hash__ = None

    def __repr__(self):
        return (
            f"SpanMorphism({list(self.source.members)} -> "
            f"{list(self.target.members)}, {len(self.rows)} rows)"
        )


def zero_morphism(source: PolytopeFamily, target: PolytopeFamily) -> SpanMorphism:
    return SpanMorphism(source, target, (), check=False)


# ---------------------------------------------------------------- equality


def sc_equal(f: SpanMorphism, g: SpanMorphism, depth_bound: int = 8) -> bool:
    """Do two spans represent the same morphism?

    Canonical representatives are compared directly; otherwise each is
    refined over the other by meets of members in matching source fibers.
    The spans are equal iff every overlap agrees (same shuffle index, same
    restricted component) and the overlaps cover the members on both sides.
    An undecided cover search counts as not equal.
    """
    if not (f.source == g.source and f.target == g.target):
        return False
    if f == g:
        return True
    base = f.source.base
    g_by_sub = {}
    for l in g.rows:
        g_by_sub.setdefault(l.sub, []).append(l)
    f_cover_pieces = {k: [] for k in range(len(f.rows))}
    g_cover_pieces = {id(l): [] for l in g.rows}
    for k_idx, k in enumerate(f.rows):
        for l in g_by_sub.get(k.sub, ()):
            w = base.meet(k.member, l.member)
            if w is None or w == base.initial:
                continue
            if k.shuffle != l.shuffle:
                return False
            down_w = base.down_set(w)
            if k.component.restrict(w, down_w).mapping != l.component.restrict(
                w, down_w
            ).mapping:
                return False
            f_cover_pieces[k_idx].append(w)
            g_cover_pieces[id(l)].append(w)
    for k_idx, k in enumerate(f.rows):
        if base.is_cover(f_cover_pieces[k_idx], k.member, depth_bound) is not Ternary.YES:
            return False
    for l in g.rows:
        if base.is_cover(g_cover_pieces[id(l)], l.member, depth_bound) is not Ternary.YES:
            return False
    return True


# ------------------------------------------------------------ classification


@dataclass(frozen=True)
class SpanClassification:
    is_covering: bool
    is_cofibration: bool
    is_weak_equivalence: bool
    is_pure_sub: bool
    is_pure_shuffle: bool
    cover_undecided: bool = False

    @property
    def is_acyclic_cofibration(self) -> bool:
        return self.is_cofibration and self.is_weak_equivalence

    @property
    def labels(self):
        out = []
        if self.is_covering:
            out.append("covering")
        if self.is_cofibration:
            out.append("cofibration")
        if self.is_weak_equivalence:
            out.append("weak-equivalence")
        if self.is_acyclic_cofibration:
            out.append("acyclic-cofibration")
        if self.is_pure_sub:
            out.append("pure-sub")
        if self.is_pure_shuffle:
            out.append("pure-shuffle")
        return tuple(out) if out else ("neither",)


def _merge_would_shrink(f: SpanMorphism, a: Row, b: Row) -> bool:
    """Could rows a and b (same sub and shuffle) merge in an equivalent
    representative?  Never: the merged member would strictly contain both
    while carrying an iso onto the same target member, and every groupoid
    iso preserves down-set cardinality."""
    base = f.source.base
    target_size = len(base.down_set(f.target[a.shuffle]))
    return (
        len(base.down_set(a.member)) < target_size
        or len(base.down_set(b.member)) < target_size
    )


def classify(f: SpanMorphism, depth_bound: int = 8) -> SpanClassification:
    base = f.source.base
    undecided = False
    covering = True
    for i, member in enumerate(f.source.members):
        pieces = [r.member for r in f.fiber(i)]
        status = base.is_cover(pieces, member, depth_bound)
        if status is Ternary.UNKNOWN:
            undecided = True
            covering = False
            break
        if status is Ternary.NO:
            covering = False
            break
    shuffles = f.shuffle_indices()
    injective = len(set(shuffles)) == len(shuffles)
    if not injective:
        # No equivalent representative can be leaner (see _merge_would_shrink),
        # so non-injectivity of the canonical representative is final.
        by_pair = {}
        for r in f.rows:
            by_pair.setdefault((r.sub, r.shuffle), []).append(r)
        for pair_rows in by_pair.values():
            for a, b in itertools.combinations(pair_rows, 2):
                assert not _merge_would_shrink(f, a, b)
    bijective = injective and set(shuffles) == set(range(len(f.target)))
    pure_sub = (
        bijective
        and all(r.component.is_identity for r in f.rows)
        and all(r.member == f.target[r.shuffle] for r in f.rows)
    )
    subs = tuple(r.sub for r in f.rows)
    pure_shuffle = (
        len(set(subs)) == len(subs)
        and set(subs) == set(range(len(f.source)))
        and all(r.member == f.source[r.sub] for r in f.rows)
    )
    return SpanClassification(
        is_covering=covering,
        is_cofibration=covering and injective,
        is_weak_equivalence=covering and bijective,
        is_pure_sub=pure_sub,
        is_pure_shuffle=pure_shuffle,
        cover_undecided=undecided,
    )


# --------------------------------------------------- image, quotient, sums


def image_family(f: SpanMorphism) -> PolytopeFamily:
    hit = sorted(set(f.shuffle_indices()))
    return PolytopeFamily(f.target.base, [f.target[j] for j in hit])


def corestriction(f: SpanMorphism) -> SpanMorphism:
    """The same rows, with the target cut down to the hit members."""
    hit = sorted(set(f.shuffle_indices()))
    reindex = {j: a for a, j in enumerate(hit)}
    rows = [Row(r.member, r.sub, reindex[r.shuffle], r.component) for r in f.rows]
    return SpanMorphism(f.source, image_family(f), rows, check=False)


def quotient_family(f: SpanMorphism) -> PolytopeFamily:
    hit = set(f.shuffle_indices())
    return PolytopeFamily(
        f.target.base, [m for j, m in enumerate(f.target.members) if j not in hit]
    )


def quotient_map(f: SpanMorphism) -> SpanMorphism:
    """B -> B/A: untouched members pass through, hit members die."""
    base = f.target.base
    hit = set(f.shuffle_indices())
    rows = []
    new_index = 0
    for j, m in enumerate(f.target.members):
        if j in hit:
            continue
        rows.append(
            Row(m, j, new_index, HorizontalMorphism.identity_on(m, base.down_set(m)))
        )
        new_index += 1
    return SpanMorphism(f.target, quotient_family(f), rows, check=False)


def family_coproduct(*families: PolytopeFamily) -> PolytopeFamily:
    base = families[0].base
    members = []
    for fam in families:
        if not fam.same_base(families[0]):
            raise IncompatibleComposition("coproduct of families over different bases")
        members.extend(fam.members)
    return PolytopeFamily(base, members)


def coproduct_inclusions(*families: PolytopeFamily):
    total = family_coproduct(*families)
    base = total.base
    out = []
    offset = 0
    for fam in families:
        rows = [
            Row(
                m,
                i,
                offset + i,
                HorizontalMorphism.identity_on(m, base.down_set(m)),
            )
            for i, m in enumerate(fam.members)
        ]
        out.append(SpanMorphism(fam, total, rows, check=False))
        offset += len(fam)
    return total, out


def morphism_coproduct(*morphisms: SpanMorphism) -> SpanMorphism:
    source = family_coproduct(*[f.source for f in morphisms])
    target = family_coproduct(*[f.target for f in morphisms])
    rows = []
    src_off = 0
    tgt_off = 0
    for f in morphisms:
        for r in f.rows:
            rows.append(Row(r.member, r.sub + src_off, r.shuffle + tgt_off, r.component))
        src_off += len(f.source)
        tgt_off += len(f.target)
    return SpanMorphism(source, target, rows, check=False)


def sc_isomorphic(x: PolytopeFamily, y: PolytopeFamily):
    """A relabeling iso x -> y (bijection of indices with groupoid isos on
    members), or None."""
    if len(x) != len(y):
        return None
    base = x.base
    candidates = {
        i: [
            (j, iso)
            for j in range(len(y))
            for iso in base.closure_isos_between(x[i], y[j])
        ]
        for i in range(len(x))
    }

    def search(i, used, acc):
        if i == len(x):
            return list(acc)
        for j, iso in candidates[i]:
            if j in used:
                continue
            result = search(i + 1, used | {j}, acc + [(i, j, iso)])
            if result is not None:
                return result
        return None

    assignment = search(0, frozenset(), [])
    if assignment is None:
        return None
    rows = [Row(x[i], i, j, iso) for i, j, iso in assignment]
    return SpanMorphism(x, y, rows, check=False)


# ------------------------------------------------------------------ pushout


@dataclass(frozen=True)
class PushoutSquare:
    corner: PolytopeFamily
    from_attached: SpanMorphism  # B -> corner
    from_other: SpanMorphism  # C -> corner


def pushout(f: SpanMorphism, g: SpanMorphism, depth_bound: int = 8) -> PushoutSquare:
    """Glue ``f.target`` and ``g.target`` along the common source.

    ``f`` must be a cofibration.  Every target member of ``g`` that is hit
    gets refined by choice-function meets of the transported source covers;
    untouched members of either side pass through whole.
    """
    if not (f.source == g.source):
        raise IncompatibleComposition("pushout legs must share their source family")
    cls = classify(f, depth_bound)
    if not cls.is_cofibration:
        raise NotACofibration(
            "pushout along a non-cofibration: "
            + ("cover search was inconclusive" if cls.cover_undecided else "see classify")
        )
    base = f.source.base
    B, C = f.target, g.target

    f_rows_by_sub = {}
    for r in f.rows:
        f_rows_by_sub.setdefault(r.sub, []).append(r)
    g_rows_by_shuffle = {}
    for r in g.rows:
        g_rows_by_shuffle.setdefault(r.shuffle, []).append(r)

    hit_b = set(f.shuffle_indices())
    untouched_b = [j for j in range(len(B)) if j not in hit_b]

    # Refine each hit C-member by the transported covers of all rows into it.
    final_pieces = {}  # C index -> list of pieces
    for t in range(len(C)):
        g_rows = g_rows_by_shuffle.get(t, [])
        if not g_rows:
            final_pieces[t] = [C[t]]
            continue
        per_row_pieces = []
        for l in g_rows:
            pieces = []
            for k in f_rows_by_sub.get(l.sub, ()):
                x = base.meet(k.member, l.member)
                if x is not None and x != base.initial:
                    pieces.append(l.component.apply(x))
            per_row_pieces.append(pieces)
        finals = []
        for choice in itertools.product(*per_row_pieces):
            w = choice[0]
            for y in choice[1:]:
                w = base.meet(w, y)
                if w is None or w == base.initial:
                    w = None
                    break
            if w is not None:
                finals.append(w)
        finals = sorted(set(finals))
        status = base.is_cover(finals, C[t], depth_bound)
        if status is not Ternary.YES:
            raise UnsupportedPushout(
                f"refined pieces of {C[t]} lack a cover certificate "
                f"({status.value})"
            )
        final_pieces[t] = finals

    corner_members = [B[j] for j in untouched_b]
    corner_index_b = {j: a for a, j in enumerate(untouched_b)}
    corner_index_c = {}
    for t in range(len(C)):
        corner_index_c[t] = {}
        for w in final_pieces[t]:
            corner_index_c[t][w] = len(corner_members)
            corner_members.append(w)
    corner = PolytopeFamily(base, corner_members)

    # C -> corner: each member splits into its final pieces.
    c_rows = [
        Row(w, t, corner_index_c[t][w], HorizontalMorphism.identity_on(w, base.down_set(w)))
        for t in range(len(C))
        for w in final_pieces[t]
    ]
    from_other = SpanMorphism(C, corner, c_rows, check=False)

    # B -> corner: untouched members pass through; each hit member is cut
    # along the attachment and lands in the refined pieces.
    b_rows = [
        Row(
            B[j],
            j,
            corner_index_b[j],
            HorizontalMorphism.identity_on(B[j], base.down_set(B[j])),
        )
        for j in untouched_b
    ]
    for k in f.rows:  # unique row per hit B-index (shuffle leg injective)
        j = k.shuffle
        i = k.sub
        phi_inv = k.component.inverse()
        for l in g.rows:
            if l.sub != i:
                continue
            t = l.shuffle
            psi_inv = l.component.inverse()
            for w in final_pieces[t]:
                w_in_a = psi_inv.apply(w)  # part of the source member
                x = base.meet(w_in_a, k.member)
                if x != w_in_a:
                    continue  # this piece came from a different f-row
                b_piece = k.component.apply(w_in_a)
                to_a = phi_inv.restrict(b_piece, base.down_set(b_piece))
                to_w = l.component.restrict(w_in_a, base.down_set(w_in_a))
                b_rows.append(Row(b_piece, j, corner_index_c[t][w], to_a.then(to_w)))
    from_attached = SpanMorphism(B, corner, b_rows)
    return PushoutSquare(corner, from_attached, from_other)


# ------------------------------------------- hom enumeration and preorder


def _candidate_rows(base, member, source_index, target: PolytopeFamily):
    """All legal rows out of one source member into any target member."""
    out = []
    for u in base.down_set(member):
        if u == base.initial:
            continue
        for j in range(len(target)):
            for iso in base.closure_isos_between(u, target[j]):
                out.append(Row(u, source_index, j, iso))
    return out


def _disjoint_subsets(base, rows):
    """All subsets of candidate rows with pairwise disjoint members."""
    results = [[]]
    for idx, row in enumerate(rows):
        extended = []
        for subset in results:
            if all(
                r.member != row.member and base.disjoint(r.member, row.member)
                for r in subset
            ):
                extended.append(subset + [row])
        results.extend(extended)
    return results


def enumerate_homs(x: PolytopeFamily, y: PolytopeFamily):
    """Every span morphism x -> y.  Exponential; for small families only."""
    base = x.base
    per_member = []
    for i in range(len(x)):
        candidates = _candidate_rows(base, x[i], i, y)
        per_member.append(_disjoint_subsets(base, candidates))
    out = []
    for combo in itertools.product(*per_member) if per_member else [()]:
        rows = [r for subset in combo for r in subset]
        out.append(SpanMorphism(x, y, rows, check=False))
    return out


def enumerate_weak_equivalences(y: PolytopeFamily, piece_bound: int, depth_bound: int = 8):
    """Bounded refining weak equivalences out of ``y``: per member, a
    disjoint covering family with a groupoid relabeling of each piece; the
    middle family's total size is capped by ``piece_bound``."""
    base = y.base
    per_member_options = []
    for m in y.members:
        options = []
        for family in base.disjoint_covering_families(m, depth_bound=depth_bound):
            iso_choices = []
            for piece in family:
                isos = [
                    h
                    for h in base.horizontal_closure_morphisms()
                    if h.src == piece
                ]
                iso_choices.append(isos)
            for assignment in itertools.product(*iso_choices):
                options.append(tuple(zip(family, assignment)))
        per_member_options.append(options)
    out = []
    for combo in itertools.product(*per_member_options) if per_member_options else [()]:
        total = sum(len(option) for option in combo)
        if total > piece_bound:
            continue
        rows = []
        middle = []
        for i, option in enumerate(combo):
            for piece, iso in option:
                rows.append(Row(piece, i, len(middle), iso))
                middle.append(iso.dst)
        target = PolytopeFamily(base, middle)
        out.append(SpanMorphism(y, target, rows, check=False))
    return out


def _restrict_to_source_index(f: SpanMorphism, i: int) -> SpanMorphism:
    sub_family = PolytopeFamily(f.source.base, (f.source[i],))
    rows = [Row(r.member, 0, r.shuffle, r.component) for r in f.rows if r.sub == i]
    return SpanMorphism(sub_family, f.target, rows, check=False)


def count_homs_under(e1: SpanMorphism, e2: SpanMorphism, depth_bound: int = 8) -> int:
    """Count morphisms h with h . e1 = e2, for weak equivalences e1, e2 out
    of the same family.

    Because e1's shuffle leg is bijective, candidate rows of h group by the
    source fiber of the unique e1-row under each middle member, and the
    matching condition factors through those fibers; the count is the
    product of per-fiber match counts.
    """
    if not (e1.source == e2.source):
        raise IncompatibleComposition("both maps must share their source family")
    y = e1.source
    base = y.base
    y1, y2 = e1.target, e2.target
    rows_by_shuffle = {}
    for r in e1.rows:
        if r.shuffle in rows_by_shuffle:
            raise ValidationError("e1 is not a weak equivalence: shuffle leg repeats")
        rows_by_shuffle[r.shuffle] = r
    if set(rows_by_shuffle) != set(range(len(y1))):
        raise ValidationError("e1 is not a weak equivalence: shuffle leg not onto")

    fibers = {}  # source index -> list of middle indices
    for j, r in rows_by_shuffle.items():
        fibers.setdefault(r.sub, []).append(j)

    total = 1
    for i in range(len(y)):
        middle_js = fibers.get(i, [])
        per_j_subsets = []
        for j in middle_js:
            candidates = _candidate_rows(base, y1[j], j, y2)
            per_j_subsets.append(_disjoint_subsets(base, candidates))
        e1_i = _restrict_to_source_index(e1, i)
        e2_i = _restrict_to_source_index(e2, i)
        matches = 0
        for combo in itertools.product(*per_j_subsets) if per_j_subsets else [()]:
            rows = [r for subset in combo for r in subset]
            h_part = SpanMorphism(y1, y2, rows, check=False)
            if sc_equal(h_part.compose(e1_i), e2_i, depth_bound):
                matches += 1
        total *= matches
        if total > 1:
            return total  # already more than one: no need to finish
    return total


@dataclass
class CofilteredReport:
    family: tuple
    n_weak_equivalences: int
    n_pairs: int
    unique_arrow_failures: list = field(default_factory=list)
    refinement_failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.unique_arrow_failures and not self.refinement_failures


def common_refinement(e1: SpanMorphism, e2: SpanMorphism):
    """The mutual refinement of two weak equivalences out of one family:
    overlap pieces, with the two transport maps u1: Y1 -> Z, u2: Y2 -> Z
    satisfying u1 . e1 = u2 . e2."""
    if not (e1.source == e2.source):
        raise IncompatibleComposition("both maps must share their source family")
    base = e1.source.base
    middle = []
    u1_rows = []
    u2_rows = []
    for k_idx, k in enumerate(e1.rows):
        for l in e2.rows:
            if l.sub != k.sub:
                continue
            w = base.meet(k.member, l.member)
            if w is None or w == base.initial:
                continue
            z_index = len(middle)
            # Middle member: the image of the overlap inside Y1, so the
            # Y1-side transport is an identity row.
            w_in_y1 = k.component.apply(w)
            middle.append(w_in_y1)
            u1_rows.append(
                Row(
                    w_in_y1,
                    k.shuffle,
                    z_index,
                    HorizontalMorphism.identity_on(w_in_y1, base.down_set(w_in_y1)),
                )
            )
            # Y2-side: the image of w inside Y2[l.shuffle], carried to the
            # same middle member through e1's component.
            w_in_y2 = l.component.apply(w)
            back_2 = l.component.inverse().restrict(w_in_y2, base.down_set(w_in_y2))
            fwd_2 = k.component.restrict(w, base.down_set(w))
            u2_rows.append(Row(w_in_y2, l.shuffle, z_index, back_2.then(fwd_2)))
    z = PolytopeFamily(base, middle)
    u1 = SpanMorphism(e1.target, z, u1_rows)
    u2 = SpanMorphism(e2.target, z, u2_rows)
    return z, u1, u2


def verify_cofiltered_preorder(
    y: PolytopeFamily, piece_bound: int, depth_bound: int = 8
) -> CofilteredReport:
    """Check the refinement structure out of one family: between any two
    bounded weak equivalences there is at most one arrow, and every pair
    has a common refinement making the triangle commute."""
    wes = enumerate_weak_equivalences(y, piece_bound, depth_bound)
    report = CofilteredReport(tuple(y.members), len(wes), 0)
    for e1, e2 in itertools.product(wes, repeat=2):
        report.n_pairs += 1
        count = count_homs_under(e1, e2, depth_bound)
        if count > 1:
            report.unique_arrow_failures.append(
                (tuple(e1.target.members), tuple(e2.target.members), count)
            )
    for a in range(len(wes)):
        for b in range(a, len(wes)):
            e1, e2 = wes[a], wes[b]
            z, u1, u2 = common_refinement(e1, e2)
            if not sc_equal(u1.compose(e1), u2.compose(e2), depth_bound):
                report.refinement_failures.append(
                    (tuple(e1.target.members), tuple(e2.target.members))
                )
    return report
