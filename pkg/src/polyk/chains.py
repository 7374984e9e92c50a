"""Chains of cofibrations over a span category.

A chain is a tower X_1 >-> X_2 >-> ... >-> X_n of cofibrations between
families over one base complex.  Every index of every level has a birth
level (the first level where it is not hit by the chain map), and the chain
decomposes into strands: the descendants of each birth generation form an
acyclic chain.  ``comb`` extracts the tuple of strands, ``cp`` recombines a
tuple into a single chain by coproducts of front-padded strands;
``comb(cp(t)) == t`` exactly, and ``cp(comb(c))`` is isomorphic to ``c``
through levelwise pure shuffles.

The module also holds refinement towers (disjoint families refining a
singleton head by covers) and the correspondence between tuples of towers
and acyclic chains of pure covering sub-maps (``h_flatten`` / ``g_split``).
"""

from dataclasses import dataclass

from .complexes import HorizontalMorphism, Ternary
from .errors import (
    IncompatibleComposition,
    IndexOutOfRange,
    NotACofibration,
    NotLayered,
    NotPure,
    ValidationError,
)
from .spans import (
    PolytopeFamily,
    Row,
    SpanMorphism,
    classify,
    family_coproduct,
    morphism_coproduct,
    sc_equal,
    zero_family,
    zero_morphism,
)

__all__ = [
    "CofChain",
    "AcycChain",
    "generations",
    "strand",
    "pad",
    "comb",
    "cp",
    "recombination_isos",
    "ChainMorphism",
    "is_layered",
    "chain_is_cofibration",
    "strand_morphism",
    "comb_morphism",
    "RefinementTower",
    "h_flatten",
    "g_split",
]


class CofChain:
    """A tower of cofibrations; ``families[j]`` are levels, ``maps[j]`` the
    step ``families[j] -> families[j+1]``."""

    __slots__ = ("families", "maps")

    _step_requirement = "a cofibration"

    def __init__(self, families, maps=(), check=True):
        self.families = tuple(families)
        self.maps = tuple(maps)
        if not self.families:
            raise ValidationError("a chain needs at least one level")
        if len(self.maps) != len(self.families) - 1:
            raise ValidationError(
                f"{len(self.families)} levels need {len(self.families) - 1} maps, "
                f"got {len(self.maps)}"
            )
        base = self.families[0].base
        for fam in self.families[1:]:
            if not fam.same_base(self.families[0]):
                raise IncompatibleComposition("chain levels live over different bases")
        for j, f in enumerate(self.maps):
            if f.source != self.families[j] or f.target != self.families[j + 1]:
                raise IncompatibleComposition(
                    f"step {j + 1} does not connect level {j + 1} to level {j + 2}"
                )
        if check:
            for j, f in enumerate(self.maps):
                c = classify(f)
                if not self._step_ok(c):
                    detail = "/".join(c.labels)
                    if c.cover_undecided:
                        detail += "; covering search undecided"
                    raise NotACofibration(
                        f"step {j + 1} of the chain is not {self._step_requirement} "
                        f"({detail})"
                    )

    @staticmethod
    def _step_ok(c):
        return c.is_cofibration

    @property
    def base(self):
        return self.families[0].base

    @property
    def length(self):
        return len(self.families)

    @property
    def is_zero(self):
        return all(fam.is_zero for fam in self.families)

    def __eq__(self, other):
        if not isinstance(other, CofChain):
            return NotImplemented
        return self.families == other.families and self.maps == other.maps

    __hash__ = None

    def describe(self) -> str:
        parts = [f"({len(self.families[0])})"]
        for j, f in enumerate(self.maps):
            labels = "/".join(classify(f).labels)
            parts.append(f">-> ({len(self.families[j + 1])}) [{labels}]")
        return " ".join(parts)

    def __repr__(self):
        return f"{type(self).__name__}({self.describe()})"


class AcycChain(CofChain):
    """A chain whose every step is an acyclic cofibration."""

    _step_requirement = "an acyclic cofibration"

    @staticmethod
    def _step_ok(c):
        return c.is_acyclic_cofibration


def generations(chain: CofChain):
    """Birth level (1-based) of every index of every level.

    An index is born at the first level where the incoming step does not hit
    it; a hit index inherits the birth level of the row's source index.
    """
    gens = [tuple(1 for _ in chain.families[0].members)]
    for j, f in enumerate(chain.maps):
        prev = gens[j]
        parent = {row.shuffle: row.sub for row in f.rows}
        gens.append(
            tuple(
                prev[parent[v]] if v in parent else j + 2
                for v in range(len(chain.families[j + 1]))
            )
        )
    return tuple(gens)


def strand(chain: CofChain, i: int) -> AcycChain:
    """The acyclic chain of all level content born at level ``i`` (1-based)."""
    n = chain.length
    if not 1 <= i <= n:
        raise IndexOutOfRange(f"strand index {i} outside 1..{n}")
    gens = generations(chain)
    kept = [
        [v for v in range(len(chain.families[j])) if gens[j][v] == i]
        for j in range(i - 1, n)
    ]
    families = [
        PolytopeFamily(
            chain.base, [chain.families[i - 1 + k].members[v] for v in idx]
        )
        for k, idx in enumerate(kept)
    ]
    maps = []
    for k in range(len(kept) - 1):
        j = i - 1 + k  # source level, 0-based
        src_pos = {v: p for p, v in enumerate(kept[k])}
        dst_pos = {v: p for p, v in enumerate(kept[k + 1])}
        rows = [
            Row(row.member, src_pos[row.sub], dst_pos[row.shuffle], row.component)
            for row in chain.maps[j].rows
            if row.sub in src_pos
        ]
        maps.append(SpanMorphism(families[k], families[k + 1], rows))
    return AcycChain(families, maps)


def pad(chain: CofChain, n: int, i=None) -> CofChain:
    """Front-pad a chain to length ``n`` with zero levels.

    When ``i`` is given it must equal the chain's current length (the
    embedding of length-i chains into length-n ones).
    """
    if i is None:
        i = chain.length
    if i != chain.length:
        raise IndexOutOfRange(
            f"pad expected a chain of length {i}, got {chain.length}"
        )
    if not 1 <= i <= n:
        raise IndexOutOfRange(f"cannot pad a length-{i} chain to length {n}")
    z = zero_family(chain.base)
    zeros = n - i
    families = (z,) * zeros + chain.families
    maps = []
    for k in range(zeros):
        nxt = families[k + 1]
        maps.append(zero_morphism(z, nxt))
    maps.extend(chain.maps)
    return CofChain(families, maps)


def comb(chain: CofChain):
    """Decompose a chain into its tuple of strands."""
    return tuple(strand(chain, i) for i in range(1, chain.length + 1))


def cp(strands) -> CofChain:
    """Recombine a tuple shaped like ``comb`` output: the coproduct of the
    front-padded strands."""
    strands = tuple(strands)
    n = len(strands)
    if n == 0:
        raise ValidationError("recombination needs at least one strand")
    for i, s in enumerate(strands, start=1):
        if s.length != n - i + 1:
            raise ValidationError(
                f"strand {i} has length {s.length}, expected {n - i + 1}"
            )
        if not isinstance(s, AcycChain):
            # revalidate: every strand must be an acyclic chain
            AcycChain(s.families, s.maps)
    padded = [pad(s, n) for s in strands]
    families = [
        family_coproduct(*(p.families[j] for p in padded)) for j in range(n)
    ]
    maps = [
        morphism_coproduct(*(p.maps[j] for p in padded)) for j in range(n - 1)
    ]
    return CofChain(families, maps)


def recombination_isos(chain: CofChain):
    """Levelwise pure shuffles from ``cp(comb(chain))`` onto ``chain``.

    Level j of the recombined chain lists the original members grouped by
    birth level; the iso sends each back to its original index.
    """
    gens = generations(chain)
    isos = []
    recombined = cp(comb(chain))
    for j in range(chain.length):
        order = [
            v
            for i in range(1, chain.length + 1)
            for v in range(len(chain.families[j]))
            if gens[j][v] == i
        ]
        rows = [
            Row(
                chain.families[j].members[v],
                p,
                v,
                HorizontalMorphism.identity_on(
                    chain.families[j].members[v],
                    chain.base.down_set(chain.families[j].members[v]),
                ),
            )
            for p, v in enumerate(order)
        ]
        isos.append(SpanMorphism(recombined.families[j], chain.families[j], rows))
    return tuple(isos)


class ChainMorphism:
    """Levelwise span morphisms commuting with two chains' steps."""

    __slots__ = ("source", "target", "levels")

    def __init__(self, source: CofChain, target: CofChain, levels, check=True):
        self.source = source
        self.target = target
        self.levels = tuple(levels)
        if source.length != target.length:
            raise IncompatibleComposition("chain lengths differ")
        if len(self.levels) != source.length:
            raise ValidationError(
                f"{source.length} levels need {source.length} morphisms, "
                f"got {len(self.levels)}"
            )
        problems = []
        for j, f in enumerate(self.levels):
            if f.source != source.families[j]:
                problems.append(f"level {j + 1} morphism has the wrong source")
            if f.target != target.families[j]:
                problems.append(f"level {j + 1} morphism has the wrong target")
        if problems:
            raise ValidationError(problems)
        if check:
            for j in range(source.length - 1):
                left = self.levels[j + 1].compose(source.maps[j])
                right = target.maps[j].compose(self.levels[j])
                if not sc_equal(left, right):
                    problems.append(f"square {j + 1} -> {j + 2} does not commute")
            if problems:
                raise ValidationError(problems)

    @classmethod
    def identity(cls, chain: CofChain) -> "ChainMorphism":
        return cls(
            chain, chain, [SpanMorphism.identity(fam) for fam in chain.families]
        )

    def compose(self, inner: "ChainMorphism") -> "ChainMorphism":
        if inner.target is not self.source and inner.target != self.source:
            raise IncompatibleComposition("chain morphisms do not compose")
        return ChainMorphism(
            inner.source,
            self.target,
            [f.compose(g) for f, g in zip(self.levels, inner.levels)],
            check=False,
        )

    def __eq__(self, other):
        if not isinstance(other, ChainMorphism):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and self.levels == other.levels
        )

    __hash__ = None


def is_layered(phi: ChainMorphism) -> bool:
    """Does the morphism keep fresh content away from descended content?

    For every adjacent square, the target indices receiving the fresh part
    of the source level must be disjoint from the target indices descended
    from the previous target level.
    """
    src, tgt = phi.source, phi.target
    for j in range(src.length - 1):
        hit_src = {row.shuffle for row in src.maps[j].rows}
        fresh = set(range(len(src.families[j + 1]))) - hit_src
        hit_by_fresh = {
            row.shuffle for row in phi.levels[j + 1].rows if row.sub in fresh
        }
        descended = {row.shuffle for row in tgt.maps[j].rows}
        if hit_by_fresh & descended:
            return False
    return True


def chain_is_cofibration(phi: ChainMorphism) -> bool:
    """Levelwise cofibration and layered."""
    return is_layered(phi) and all(
        classify(f).is_cofibration for f in phi.levels
    )


def strand_morphism(phi: ChainMorphism, i: int) -> ChainMorphism:
    """Restrict a layered morphism to the content born at level ``i``.

    In a layered morphism with commuting squares, rows out of generation-i
    source indices land in generation-i target indices, so the restriction
    is a well-defined morphism of the two strands.
    """
    if not is_layered(phi):
        raise NotLayered("only layered morphisms restrict to strands")
    n = phi.source.length
    if not 1 <= i <= n:
        raise IndexOutOfRange(f"strand index {i} outside 1..{n}")
    src_strand = strand(phi.source, i)
    tgt_strand = strand(phi.target, i)
    src_gens = generations(phi.source)
    tgt_gens = generations(phi.target)
    levels = []
    for k in range(src_strand.length):
        j = i - 1 + k
        src_pos = {
            v: p
            for p, v in enumerate(
                v for v in range(len(phi.source.families[j])) if src_gens[j][v] == i
            )
        }
        tgt_pos = {
            v: p
            for p, v in enumerate(
                v for v in range(len(phi.target.families[j])) if tgt_gens[j][v] == i
            )
        }
        rows = []
        for row in phi.levels[j].rows:
            if row.sub not in src_pos:
                continue
            if row.shuffle not in tgt_pos:
                raise NotLayered(
                    f"level {j + 1}: a row born at level {src_gens[j][row.sub]} "
                    f"lands on content born at level {tgt_gens[j][row.shuffle]}"
                )
            rows.append(
                Row(row.member, src_pos[row.sub], tgt_pos[row.shuffle], row.component)
            )
        levels.append(
            SpanMorphism(src_strand.families[k], tgt_strand.families[k], rows)
        )
    return ChainMorphism(src_strand, tgt_strand, levels)


def comb_morphism(phi: ChainMorphism):
    """The tuple of strand restrictions of a layered morphism."""
    return tuple(strand_morphism(phi, i) for i in range(1, phi.source.length + 1))


@dataclass(frozen=True)
class RefinementTower:
    """Disjoint families over a base, each covering the one before, starting
    from a single object."""

    base: object
    levels: tuple  # tuple of tuples of base object ids

    def __init__(self, base, levels, depth_bound: int = 8):
        object.__setattr__(self, "base", base)
        object.__setattr__(
            self, "levels", tuple(tuple(str(m) for m in lvl) for lvl in levels)
        )
        problems = []
        if not self.levels:
            problems.append("a tower needs at least one level")
        elif len(self.levels[0]) != 1:
            problems.append(
                f"the head must be a single object, got {len(self.levels[0])}"
            )
        objs = set(base.objects)
        for j, lvl in enumerate(self.levels):
            for m in lvl:
                if m not in objs:
                    problems.append(f"level {j + 1}: unknown object {m}")
                elif m == base.initial:
                    problems.append(f"level {j + 1}: the initial object is not a member")
            for a_i in range(len(lvl)):
                for b_i in range(a_i + 1, len(lvl)):
                    a, b = lvl[a_i], lvl[b_i]
                    if a in objs and b in objs and a != base.initial and b != base.initial:
                        if not base.disjoint(a, b):
                            problems.append(
                                f"level {j + 1}: members {a} and {b} overlap"
                            )
        if problems:
            raise ValidationError(problems)
        for j in range(len(self.levels) - 1):
            upper, lower = self.levels[j], self.levels[j + 1]
            for m in lower:
                parents = [u for u in upper if base.leq(m, u)]
                if not parents:
                    problems.append(
                        f"level {j + 2}: member {m} refines nothing at level {j + 1}"
                    )
            for u in upper:
                pieces = [m for m in lower if base.leq(m, u)]
                verdict = base.is_cover(pieces, u, depth_bound)
                if verdict is not Ternary.YES:
                    word = "undecided" if verdict is Ternary.UNKNOWN else "fails"
                    problems.append(
                        f"level {j + 2}: covering of {u} by its pieces {word}"
                    )
        if problems:
            raise ValidationError(problems)

    @property
    def head(self) -> str:
        return self.levels[0][0]

    @property
    def length(self) -> int:
        return len(self.levels)


def h_flatten(towers, base=None, length=None) -> AcycChain:
    """Concatenate towers levelwise into an acyclic chain of pure covering
    sub-maps.  An empty collection needs an explicit base and length."""
    towers = tuple(towers)
    if not towers:
        if base is None or length is None:
            raise ValidationError(
                "flattening no towers needs an explicit base and length"
            )
        z = zero_family(base)
        return AcycChain(
            (z,) * length, [zero_morphism(z, z) for _ in range(length - 1)]
        )
    base = towers[0].base
    length = towers[0].length
    for t in towers[1:]:
        if t.base is not base and t.base != base:
            raise IncompatibleComposition("towers live over different bases")
        if t.length != length:
            raise ValidationError("towers have different lengths")
    families = [
        PolytopeFamily(base, [m for t in towers for m in t.levels[j]])
        for j in range(length)
    ]
    maps = []
    for j in range(length - 1):
        rows = []
        src_off = 0
        dst_off = 0
        for t in towers:
            upper, lower = t.levels[j], t.levels[j + 1]
            for q, m in enumerate(lower):
                p = next(
                    k for k, u in enumerate(upper) if base.leq(m, u)
                )
                rows.append(
                    Row(
                        m,
                        src_off + p,
                        dst_off + q,
                        HorizontalMorphism.identity_on(m, base.down_set(m)),
                    )
                )
            src_off += len(upper)
            dst_off += len(lower)
        maps.append(SpanMorphism(families[j], families[j + 1], rows))
    return AcycChain(families, maps)


def g_split(chain: AcycChain):
    """Split an acyclic chain of pure covering sub-maps into the towers over
    each head index.  Raises NotPure when a step's representative is not a
    pure sub-map."""
    for j, f in enumerate(chain.maps):
        c = classify(f)
        if not c.is_pure_sub:
            raise NotPure(
                f"step {j + 1} is not a pure covering sub-map ({'/'.join(c.labels)})"
            )
    ancestors = [list(range(len(chain.families[0])))]
    for f in chain.maps:
        parent = {row.shuffle: row.sub for row in f.rows}
        ancestors.append(
            [ancestors[-1][parent[v]] for v in range(len(f.target))]
        )
    towers = []
    for head in range(len(chain.families[0])):
        levels = [
            tuple(
                chain.families[j].members[v]
                for v in range(len(chain.families[j]))
                if ancestors[j][v] == head
            )
            for j in range(chain.length)
        ]
        towers.append(RefinementTower(chain.base, levels))
    return tuple(towers)
