"""Finitely presented abelian groups, homomorphisms between them, and
homology of chain complexes whose terms are presented (not necessarily free).

A group is stored as Z^n modulo the row lattice of a relation matrix.  All
structural questions (invariant factors, triviality, isomorphism) reduce to
the Smith normal form of that matrix; all elementwise questions (is this
vector zero in the quotient, is this homomorphism well defined) reduce to
integer lattice membership.
"""

from __future__ import annotations

from functools import cached_property

from .errors import IndexOutOfRange, ValidationError
from .linalg import IntMatrix, kernel_basis, row_lattice_contains, smith_normal_form, solve


class FpAbelianGroup:
    """Z^n_generators modulo the subgroup spanned by ``relations`` rows.

    >>> FpAbelianGroup(2, [(2, 0)]).describe()
    'Z + Z/2'
    >>> FpAbelianGroup(1, [(6,), (4,)]).describe()
    'Z/2'
    """

    def __init__(self, n_generators, relations=(), generator_names=None):
        self.n_generators = int(n_generators)
        self.relations = tuple(tuple(int(x) for x in r) for r in relations)
        for r in self.relations:
            if len(r) != self.n_generators:
                raise ValidationError(
                    f"relation length {len(r)} != generator count {self.n_generators}"
                )
        if generator_names is not None:
            generator_names = tuple(generator_names)
            if len(generator_names) != self.n_generators:
                raise ValidationError("generator_names length mismatch")
        self.generator_names = generator_names

    @cached_property
    def _snf(self):
        return smith_normal_form(self.relation_matrix())

    def relation_matrix(self) -> IntMatrix:
        return IntMatrix([list(r) for r in self.relations], self.n_generators)

    @cached_property
    def free_rank(self) -> int:
        return self.n_generators - self._snf.rank

    @cached_property
    def invariant_factors(self) -> tuple[int, ...]:
        """Torsion invariant factors d_1 | d_2 | ..., each > 1."""
        return tuple(d for d in self._snf.diagonal if d > 1)

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.invariant_factors

    def isomorphic(self, other: "FpAbelianGroup") -> bool:
        return (
            self.free_rank == other.free_rank
            and self.invariant_factors == other.invariant_factors
        )

    def __eq__(self, other):
        """Equality is isomorphism: same free rank and invariant factors."""
        if not isinstance(other, FpAbelianGroup):
            return NotImplemented
        return self.isomorphic(other)

    def __hash__(self):
        return hash((self.free_rank, self.invariant_factors))

    def element_is_zero(self, vector) -> bool:
        """Does ``vector`` (coordinates in the generators) die in the quotient?"""
        vector = list(vector)
        if len(vector) != self.n_generators:
            raise ValidationError("element length mismatch")
        return row_lattice_contains(
            [list(r) for r in self.relations], self.n_generators, vector
        )

    def elements_equal(self, v, w) -> bool:
        return self.element_is_zero([a - b for a, b in zip(v, w, strict=True)])

    def describe(self) -> str:
        """Human-readable isomorphism type, e.g. 'Z^2 + Z/2 + Z/6' or '0'."""
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.invariant_factors)
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return (
            f"FpAbelianGroup({self.n_generators} generators, "
            f"{len(self.relations)} relations; {self.describe()})"
        )


class GroupHom:
    """A homomorphism between presented groups, given on generators.

    ``matrix`` has shape (target generators) x (source generators): column j
    is the image of source generator j.  Construction checks well-definedness:
    every source relation must map into the target's relation lattice.
    """

    def __init__(self, source: FpAbelianGroup, target: FpAbelianGroup, matrix):
        if not isinstance(matrix, IntMatrix):
            matrix = IntMatrix(matrix, source.n_generators)
        if matrix.shape != (target.n_generators, source.n_generators):
            raise ValidationError(
                f"matrix shape {matrix.shape} != "
                f"({target.n_generators}, {source.n_generators})"
            )
        self.source = source
        self.target = target
        self.matrix = matrix
        for r in source.relations:
            if not target.element_is_zero(matrix.apply(list(r))):
                raise ValidationError(
                    f"not well defined: source relation {r} does not map to zero"
                )

    @classmethod
    def identity(cls, group: FpAbelianGroup) -> "GroupHom":
        return cls(group, group, IntMatrix.identity(group.n_generators))

    @classmethod
    def zero(cls, source: FpAbelianGroup, target: FpAbelianGroup) -> "GroupHom":
        return cls(source, target, IntMatrix.zeros(target.n_generators, source.n_generators))

    def __call__(self, vector):
        return self.matrix.apply(list(vector))

    def compose(self, inner: "GroupHom") -> "GroupHom":
        """self after inner."""
        if inner.target is not self.source and not (
            inner.target.n_generators == self.source.n_generators
            and inner.target.relations == self.source.relations
        ):
            raise ValidationError("composition mismatch: inner.target != self.source")
        return GroupHom(inner.source, self.target, self.matrix @ inner.matrix)

    def cokernel(self) -> FpAbelianGroup:
        extra = [self.matrix.column(j) for j in range(self.matrix.ncols)]
        return FpAbelianGroup(
            self.target.n_generators,
            list(self.target.relations) + extra,
            generator_names=self.target.generator_names,
        )

    @property
    def is_surjective(self) -> bool:
        return self.cokernel().is_trivial

    @property
    def is_injective(self) -> bool:
        """Is the kernel of the induced map on quotients trivial?

        A kernel element is a vector v with Mv in the target's relation
        lattice; v represents zero exactly when it lies in the source's
        relation lattice, so injectivity means every stacked-kernel generator
        does.
        """
        stacked = self.matrix.hstack(self.target.relation_matrix().transpose())
        n = self.source.n_generators
        return all(
            self.source.element_is_zero(vec[:n]) for vec in kernel_basis(stacked)
        )

    @property
    def is_isomorphism(self) -> bool:
        return self.is_injective and self.is_surjective

    @property
    def is_zero(self) -> bool:
        return all(
            self.target.element_is_zero(self.matrix.column(j))
            for j in range(self.matrix.ncols)
        )

    def equal_to(self, other: "GroupHom") -> bool:
        """Equality as maps of quotients (matrices may differ by relations)."""
        if self.matrix.shape != other.matrix.shape:
            return False
        for j in range(self.matrix.ncols):
            diff = [
                a - b
                for a, b in zip(self.matrix.column(j), other.matrix.column(j))
            ]
            if not self.target.element_is_zero(diff):
                return False
        return True

    def __repr__(self):
        return f"GroupHom({self.source.describe()} -> {self.target.describe()})"


def direct_sum(*groups: FpAbelianGroup) -> FpAbelianGroup:
    n = sum(g.n_generators for g in groups)
    relations = []
    offset = 0
    names = []
    named = all(g.generator_names is not None for g in groups) and groups
    for g in groups:
        for r in g.relations:
            row = [0] * n
            row[offset : offset + g.n_generators] = list(r)
            relations.append(row)
        if named:
            names.extend(g.generator_names)
        offset += g.n_generators
    return FpAbelianGroup(n, relations, generator_names=tuple(names) if named else None)


class ChainComplex:
    """A nonnegatively graded chain complex of presented abelian groups.

    ``groups[i]`` is the degree-i term; ``differentials[i]`` maps degree i to
    degree i-1 (for 1 <= i <= top degree).  Degrees above the top are treated
    as zero, so homology at the top has no incoming boundaries.
    """

    def __init__(self, groups, differentials):
        self.groups = list(groups)
        self.differentials = {int(k): v for k, v in dict(differentials).items()}
        problems = []
        for i, d in sorted(self.differentials.items()):
            if not (1 <= i < len(self.groups) + 1):
                problems.append(f"differential index {i} out of range")
                continue
            if d.source is not self.groups[i] and d.source.relations != self.groups[i].relations:
                problems.append(f"d_{i} source mismatch")
            if (
                d.target is not self.groups[i - 1]
                and d.target.relations != self.groups[i - 1].relations
            ):
                problems.append(f"d_{i} target mismatch")
        for i in range(1, len(self.groups)):
            if i not in self.differentials:
                problems.append(f"missing differential d_{i}")
        if not problems:
            problems.extend(self.check_boundary_squares_to_zero())
        if problems:
            raise ValidationError(problems)

    def top_degree(self) -> int:
        return len(self.groups) - 1

    def check_boundary_squares_to_zero(self) -> list[str]:
        """Return a list of degrees i (as strings) where d_i . d_{i+1} != 0."""
        failures = []
        for i in range(1, self.top_degree()):
            composite = self.differentials[i].compose(self.differentials[i + 1])
            if not composite.is_zero:
                failures.append(f"d_{i} . d_{i + 1} is nonzero")
        return failures

    def homology(self, m: int) -> FpAbelianGroup:
        """H_m = (cycles in degree m) / (boundaries + relations).

        The degree-m term is a quotient Z^n / L(R_m), so a cycle is a vector
        v with d_m(v) in the relation lattice of degree m-1; the cycle
        subgroup is computed by stacking the relation matrix next to the
        differential and projecting its kernel.

        At the top degree there is no incoming differential; it is treated
        as zero, which is only meaningful if the complex genuinely stops
        there (truncations of longer complexes should not trust it).
        """
        if not (0 <= m <= self.top_degree()):
            raise IndexOutOfRange(
                f"homology degree {m} outside 0..{self.top_degree()}"
            )
        x = self.groups[m]
        n = x.n_generators

        if m == 0:
            cycle_gens = [
                [1 if i == j else 0 for i in range(n)] for j in range(n)
            ]
        else:
            d = self.differentials[m]
            prev = self.groups[m - 1]
            stacked = d.matrix.hstack(prev.relation_matrix().transpose())
            cycle_gens = [vec[:n] for vec in kernel_basis(stacked)]

        gen_matrix = IntMatrix.from_columns(cycle_gens, n)

        boundary_vectors = []
        if m + 1 <= self.top_degree():
            nxt = self.differentials[m + 1]
            boundary_vectors.extend(
                nxt.matrix.column(j) for j in range(nxt.matrix.ncols)
            )
        boundary_vectors.extend(list(r) for r in x.relations)

        relation_rows = []
        for b in boundary_vectors:
            coords = solve(gen_matrix, b)
            if coords is None:
                raise ValidationError(
                    f"degree-{m} boundary vector is not a cycle; "
                    "the complex does not square to zero"
                )
            relation_rows.append(coords)
        relation_rows.extend(kernel_basis(gen_matrix))
        return FpAbelianGroup(len(cycle_gens), relation_rows)

    def homology_all(self) -> list[FpAbelianGroup]:
        return [self.homology(m) for m in range(self.top_degree() + 1)]
