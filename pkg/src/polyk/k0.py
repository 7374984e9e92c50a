"""The class group of a presented complex and the maps it induces.

Generators: the noninitial objects, sorted.  Relations: each declared
horizontal identification equates its endpoints; each declared covering
family whose members are pairwise disjoint equates the target with the sum
of its members.  Families with overlapping members carry no decomposition
relation and are skipped with a diagnostic record.

``k0_hom`` turns a structure-preserving map (plain or family-valued) into
the induced homomorphism: an object goes to its image class, a collapsed
object to zero, a family to the sum of its members.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .abelian import FpAbelianGroup, GroupHom
from .complexes import KleisliMorphism, PolytopeComplex, PolytopeFunctor
from .linalg import IntMatrix


@dataclass(frozen=True)
class NonDisjointCoverSkipped:
    """Record of a covering family that yields no class-group relation
    because its members overlap."""

    target: str
    members: tuple
    overlap: tuple  # a witness pair of members with noninitial meet


@dataclass(frozen=True)
class K0Presentation:
    group: FpAbelianGroup
    generators: tuple
    skipped_covers: tuple

    def index_of(self, obj: str) -> int:
        return self.generators.index(obj)


def k0_presentation(c: PolytopeComplex) -> K0Presentation:
    gens = c.noninitial_objects
    index = {x: i for i, x in enumerate(gens)}
    relations = []
    for h in c.horizontal_gens:
        if h.src == h.dst:
            continue
        row = [0] * len(gens)
        row[index[h.src]] += 1
        row[index[h.dst]] -= 1
        relations.append(row)
    skipped = []
    for target, members in c.covers:
        if not members or target == c.initial:
            continue
        overlap = None
        for a, b in itertools.combinations(members, 2):
            if not c.disjoint(a, b):
                overlap = (a, b)
                break
        if overlap is not None:
            skipped.append(NonDisjointCoverSkipped(target, members, overlap))
            continue
        row = [0] * len(gens)
        row[index[target]] += 1
        for m in members:
            row[index[m]] -= 1
        relations.append(row)
    group = FpAbelianGroup(len(gens), relations, generator_names=gens)
    return K0Presentation(group, gens, tuple(skipped))


def k0(c: PolytopeComplex) -> FpAbelianGroup:
    """The class group itself; see k0_presentation for diagnostics."""
    return k0_presentation(c).group


def k0_hom(f, source_pres: K0Presentation = None, target_pres: K0Presentation = None) -> GroupHom:
    """The homomorphism induced on class groups by a functor or a
    family-valued morphism.  Presentations may be passed in to share work."""
    if source_pres is None:
        source_pres = k0_presentation(f.source)
    if target_pres is None:
        target_pres = k0_presentation(f.target)
    tgt_index = {x: i for i, x in enumerate(target_pres.generators)}
    columns = []
    for x in source_pres.generators:
        col = [0] * len(target_pres.generators)
        if isinstance(f, PolytopeFunctor):
            y = f.apply(x)
            if y != f.target.initial:
                col[tgt_index[y]] += 1
        elif isinstance(f, KleisliMorphism):
            for y in f.apply(x):
                col[tgt_index[y]] += 1
        else:
            raise TypeError(f"k0_hom wants a functor or family morphism, got {type(f)}")
        columns.append(col)
    matrix = IntMatrix.from_columns(columns, len(target_pres.generators))
    return GroupHom(source_pres.group, target_pres.group, matrix)
