"""Exact integer linear algebra.

All entries are Python ints, so nothing here can overflow.  The workhorse is
``smith_normal_form``, which diagonalizes an integer matrix by unimodular row
and column operations while tracking the transforms; integer kernels, linear
solving over Z, and lattice membership all reduce to it.

>>> a = IntMatrix([[2, 4], [6, 8]])
>>> smith_normal_form(a).diagonal
(2, 4)
"""

from __future__ import annotations

from dataclasses import dataclass


class IntMatrix:
    """A dense integer matrix that knows its shape even when degenerate.

    A matrix with zero rows still has a well-defined number of columns, which
    matters constantly when relation matrices are empty; pass ``ncols``
    explicitly in that case.
    """

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows, ncols=None):
        rows = [list(map(int, r)) for r in rows]
        if ncols is None:
            if not rows:
                raise ValueError("ncols is required for a matrix with no rows")
            ncols = len(rows[0])
        for r in rows:
            if len(r) != ncols:
                raise ValueError(f"ragged matrix: expected {ncols} columns, got {len(r)}")
        self.rows = rows
        self.nrows = len(rows)
        self.ncols = ncols

    @classmethod
    def identity(cls, n):
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], n)

    @classmethod
    def zeros(cls, m, n):
        return cls([[0] * n for _ in range(m)], n)

    @classmethod
    def from_columns(cls, columns, nrows):
        """Build the matrix whose j-th column is ``columns[j]``."""
        for c in columns:
            if len(c) != nrows:
                raise ValueError("column length mismatch")
        return cls([[c[i] for c in columns] for i in range(nrows)], len(columns))

    def copy(self):
        return IntMatrix([r[:] for r in self.rows], self.ncols)

    def transpose(self):
        return IntMatrix(
            [[self.rows[i][j] for i in range(self.nrows)] for j in range(self.ncols)],
            self.nrows,
        )

    def column(self, j):
        return [self.rows[i][j] for i in range(self.nrows)]

    def columns(self):
        return [self.column(j) for j in range(self.ncols)]

    def hstack(self, other):
        """Columns of ``self`` followed by columns of ``other``."""
        if self.nrows != other.nrows:
            raise ValueError("hstack needs equal row counts")
        return IntMatrix(
            [self.rows[i] + other.rows[i] for i in range(self.nrows)],
            self.ncols + other.ncols,
        )

    def __matmul__(self, other):
        if isinstance(other, IntMatrix):
            if self.ncols != other.nrows:
                raise ValueError(f"shape mismatch: {self.shape} @ {other.shape}")
            out = []
            for i in range(self.nrows):
                row = self.rows[i]
                out.append(
                    [
                        sum(row[k] * other.rows[k][j] for k in range(self.ncols))
                        for j in range(other.ncols)
                    ]
                )
            return IntMatrix(out, other.ncols)
        return NotImplemented

    def apply(self, vector):
        """Matrix-vector product over Z."""
        if len(vector) != self.ncols:
            raise ValueError(f"vector length {len(vector)} != ncols {self.ncols}")
        return [sum(r[k] * vector[k] for k in range(self.ncols)) for r in self.rows]

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __eq__(self, other):
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.ncols == other.ncols and self.rows == other.rows

    def __repr__(self):
        return f"IntMatrix({self.rows!r}, ncols={self.ncols})"


@dataclass(frozen=True)
class SmithDecomposition:
    """``left @ a @ right == form`` with ``left``/``right`` unimodular.

    ``form`` is diagonal with nonnegative entries and each diagonal entry
    divides the next; ``rank`` counts the nonzero ones.
    """

    form: IntMatrix
    left: IntMatrix
    right: IntMatrix
    rank: int

    @property
    def diagonal(self):
        d = self.form
        return tuple(d.rows[i][i] for i in range(min(d.nrows, d.ncols)))


def _swap_rows(m, i, j):
    m.rows[i], m.rows[j] = m.rows[j], m.rows[i]


def _swap_cols(m, i, j):
    for row in m.rows:
        row[i], row[j] = row[j], row[i]


def _add_row(m, dst, src, c):
    """row[dst] += c * row[src]"""
    rd, rs = m.rows[dst], m.rows[src]
    for k in range(m.ncols):
        rd[k] += c * rs[k]


def _add_col(m, dst, src, c):
    """col[dst] += c * col[src]"""
    for row in m.rows:
        row[dst] += c * row[src]


def _negate_row(m, i):
    m.rows[i] = [-x for x in m.rows[i]]


def _find_pivot(d, t):
    """Deterministic pivot choice: smallest (|value|, row, col) among nonzeros."""
    best = None
    for i in range(t, d.nrows):
        row = d.rows[i]
        for j in range(t, d.ncols):
            v = row[j]
            if v != 0:
                key = (abs(v), i, j)
                if best is None or key < best:
                    best = key
    if best is None:
        return None
    return best[1], best[2]


def smith_normal_form(a: IntMatrix) -> SmithDecomposition:
    """Diagonalize ``a`` over Z, tracking unimodular transforms.

    Uses remainder-swap elimination: the pivot absolute value strictly
    decreases whenever a division leaves a remainder or a non-divisible
    entry survives in the trailing block, so the loop terminates.
    """
    m, n = a.nrows, a.ncols
    d = a.copy()
    left = IntMatrix.identity(m)
    right = IntMatrix.identity(n)

    t = 0
    while t < min(m, n):
        pos = _find_pivot(d, t)
        if pos is None:
            break
        i, j = pos
        if i != t:
            _swap_rows(d, t, i)
            _swap_rows(left, t, i)
        if j != t:
            _swap_cols(d, t, j)
            _swap_cols(right, t, j)

        while True:
            if d.rows[t][t] < 0:
                _negate_row(d, t)
                _negate_row(left, t)
            pivot = d.rows[t][t]

            k = next((i2 for i2 in range(t + 1, m) if d.rows[i2][t] != 0), None)
            if k is not None:
                q = d.rows[k][t] // pivot
                _add_row(d, k, t, -q)
                _add_row(left, k, t, -q)
                if d.rows[k][t] != 0:
                    # remainder is strictly smaller than the pivot: promote it
                    _swap_rows(d, t, k)
                    _swap_rows(left, t, k)
                continue

            k = next((j2 for j2 in range(t + 1, n) if d.rows[t][j2] != 0), None)
            if k is not None:
                q = d.rows[t][k] // pivot
                _add_col(d, k, t, -q)
                _add_col(right, k, t, -q)
                if d.rows[t][k] != 0:
                    _swap_cols(d, t, k)
                    _swap_cols(right, t, k)
                continue

            bad = None
            for i2 in range(t + 1, m):
                row = d.rows[i2]
                if any(row[j2] % pivot for j2 in range(t + 1, n)):
                    bad = i2
                    break
            if bad is None:
                break
            # fold a non-divisible row into the pivot row and re-clear;
            # the next pivot will be a proper divisor of the current one
            _add_row(d, t, bad, 1)
            _add_row(left, t, bad, 1)

        t += 1

    rank = t
    return SmithDecomposition(form=d, left=left, right=right, rank=rank)


def determinant(a: IntMatrix) -> int:
    """Fraction-free (Bareiss) determinant of a square integer matrix."""
    if a.nrows != a.ncols:
        raise ValueError("determinant of a non-square matrix")
    n = a.nrows
    if n == 0:
        return 1
    m = [row[:] for row in a.rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def kernel_basis(a: IntMatrix) -> list[list[int]]:
    """A basis of the integer kernel lattice {v : a @ v == 0}.

    The trailing columns of the right transform form a basis (not merely a
    spanning set) because they extend to a basis of Z^ncols.
    """
    snf = smith_normal_form(a)
    return [snf.right.column(j) for j in range(snf.rank, a.ncols)]


def solve(a: IntMatrix, b: list[int]):
    """One integer solution x of ``a @ x == b``, or None if there is none."""
    if len(b) != a.nrows:
        raise ValueError(f"rhs length {len(b)} != nrows {a.nrows}")
    snf = smith_normal_form(a)
    c = snf.left.apply(b)
    y = [0] * a.ncols
    for i in range(a.nrows):
        di = snf.form.rows[i][i] if i < min(a.nrows, a.ncols) else 0
        if di == 0:
            if c[i] != 0:
                return None
        else:
            if c[i] % di != 0:
                return None
            y[i] = c[i] // di
    return snf.right.apply(y)


def column_lattice_contains(a: IntMatrix, b: list[int]) -> bool:
    """Is ``b`` an integer combination of the columns of ``a``?"""
    return solve(a, b) is not None


def row_lattice_contains(rows: list[list[int]], ncols: int, v: list[int]) -> bool:
    """Is ``v`` an integer combination of the given length-``ncols`` rows?"""
    return column_lattice_contains(IntMatrix(rows, ncols).transpose(), list(v))
