"""Builtin complexes: points, intervals, grids, divisor lattices, twists.

Object ids are stable and human-readable; tests and the CLI rely on them:
  * intervals: ``[i-j]`` for the subinterval from i to j, initial ``0``,
  * grids: ``[x1-x2]x[y1-y2]``, initial ``0``,
  * divisor lattices: the divisor written in decimal, initial ``1``,
  * spheres: a single point ``pt`` over initial ``0``.

Two intervals (or rectangles) meeting only along a face count as disjoint:
the order tracks regions with interior, so overlaps of lower dimension
collapse to the initial object.
"""

from __future__ import annotations

import itertools
import math

from .complexes import HorizontalMorphism, PolytopeComplex
from .complexes import wedge  # re-exported for convenience  # noqa: F401
from .errors import ValidationError


def trivial_complex(initial_id: str = "0") -> PolytopeComplex:
    """Just the initial object: the zero complex."""
    return PolytopeComplex([initial_id], initial_id)


def sphere_complex(point_id: str = "pt", initial_id: str = "0") -> PolytopeComplex:
    """One noninitial point, no covers, no identifications."""
    return PolytopeComplex([initial_id, point_id], initial_id)


def _interval_id(i: int, j: int) -> str:
    return f"[{i}-{j}]"


def interval_complex(n: int, initial_id: str = "0") -> PolytopeComplex:
    """Subintervals of [0, n] with integer endpoints.

    ``[i-j] <= [k-l]`` iff the first is contained in the second; the covering
    basis splits each interval at each interior integer point; translations
    identify intervals of equal length.
    """
    if n < 1:
        raise ValidationError("interval_complex wants n >= 1")
    objects = [initial_id]
    order_pairs = []
    covers = []
    gens = []
    intervals = [(i, j) for i in range(n) for j in range(i + 1, n + 1)]
    for i, j in intervals:
        objects.append(_interval_id(i, j))
    for i, j in intervals:
        for k, l in intervals:
            if k <= i and j <= l and (i, j) != (k, l):
                order_pairs.append((_interval_id(i, j), _interval_id(k, l)))
        for m in range(i + 1, j):
            covers.append(
                (_interval_id(i, j), (_interval_id(i, m), _interval_id(m, j)))
            )
    for i, j in intervals:
        if j + 1 <= n:
            mapping = [(initial_id, initial_id)]
            for a, b in intervals:
                if i <= a and b <= j:
                    mapping.append((_interval_id(a, b), _interval_id(a + 1, b + 1)))
            gens.append(
                HorizontalMorphism(
                    f"shift_{_interval_id(i, j)}",
                    _interval_id(i, j),
                    _interval_id(i + 1, j + 1),
                    mapping,
                )
            )
    return PolytopeComplex(objects, initial_id, order_pairs, covers, gens)


def _rect_id(x1: int, x2: int, y1: int, y2: int) -> str:
    return f"[{x1}-{x2}]x[{y1}-{y2}]"


def grid_complex(w: int, h: int, initial_id: str = "0") -> PolytopeComplex:
    """Axis-aligned subrectangles of a w-by-h board with integer corners.

    Containment order, covering basis of all axis splits, and unit
    translations in both directions as identifications.
    """
    if w < 1 or h < 1:
        raise ValidationError("grid_complex wants w >= 1 and h >= 1")
    rects = [
        (x1, x2, y1, y2)
        for x1 in range(w)
        for x2 in range(x1 + 1, w + 1)
        for y1 in range(h)
        for y2 in range(y1 + 1, h + 1)
    ]
    objects = [initial_id] + [_rect_id(*r) for r in rects]
    order_pairs = []
    covers = []
    gens = []

    def contains(outer, inner):
        X1, X2, Y1, Y2 = outer
        x1, x2, y1, y2 = inner
        return X1 <= x1 and x2 <= X2 and Y1 <= y1 and y2 <= Y2

    for r in rects:
        for s in rects:
            if r != s and contains(s, r):
                order_pairs.append((_rect_id(*r), _rect_id(*s)))
        x1, x2, y1, y2 = r
        for m in range(x1 + 1, x2):
            covers.append(
                (
                    _rect_id(*r),
                    (_rect_id(x1, m, y1, y2), _rect_id(m, x2, y1, y2)),
                )
            )
        for m in range(y1 + 1, y2):
            covers.append(
                (
                    _rect_id(*r),
                    (_rect_id(x1, x2, y1, m), _rect_id(x1, x2, m, y2)),
                )
            )

    def translation(r, dx, dy, tag):
        x1, x2, y1, y2 = r
        if x2 + dx > w or y2 + dy > h:
            return None
        mapping = [(initial_id, initial_id)]
        for s in rects:
            if contains(r, s):
                a1, a2, b1, b2 = s
                mapping.append(
                    (_rect_id(*s), _rect_id(a1 + dx, a2 + dx, b1 + dy, b2 + dy))
                )
        return HorizontalMorphism(
            f"{tag}_{_rect_id(*r)}",
            _rect_id(*r),
            _rect_id(x1 + dx, x2 + dx, y1 + dy, y2 + dy),
            mapping,
        )

    for r in rects:
        for dx, dy, tag in ((1, 0, "shiftx"), (0, 1, "shifty")):
            g = translation(r, dx, dy, tag)
            if g is not None:
                gens.append(g)
    return PolytopeComplex(objects, initial_id, order_pairs, covers, gens)


def divisor_complex(n: int) -> PolytopeComplex:
    """Divisors of n greater than 1, ordered by divisibility, initial ``1``.

    Meets are gcds; the covering basis decomposes a divisor into each pair of
    coprime factors > 1.  No identifications: distinct primes stay distinct.
    """
    if n < 2:
        raise ValidationError("divisor_complex wants n >= 2")
    divisors = [d for d in range(2, n + 1) if n % d == 0]
    objects = ["1"] + [str(d) for d in divisors]
    order_pairs = []
    covers = []
    for d in divisors:
        for e in divisors:
            if d != e and e % d == 0:
                order_pairs.append((str(d), str(e)))
        for a in divisors:
            if d % a == 0:
                b = d // a
                if b > a and b in divisors and math.gcd(a, b) == 1:
                    covers.append((str(d), (str(a), str(b))))
    return PolytopeComplex(objects, "1", order_pairs, covers)


def add_twists(c: PolytopeComplex, prefixes=("l.", "r."), initial_id="0") -> PolytopeComplex:
    """Two copies of ``c`` glued at the initial object, with every left
    object identified with its right twin by an explicit twist."""
    out = wedge(c, c, prefixes=prefixes, initial_id=initial_id)
    left, right = prefixes

    def lm(x):
        return initial_id if x == c.initial else left + x

    def rm(x):
        return initial_id if x == c.initial else right + x

    twists = [
        HorizontalMorphism(
            f"twist_{x}",
            lm(x),
            rm(x),
            [(lm(u), rm(u)) for u in c.down_set(x)],
        )
        for x in c.noninitial_objects
    ]
    return PolytopeComplex(
        out.objects,
        out.initial,
        order_pairs=out.order_pairs(),
        covers=out.covers,
        horizontal_gens=list(out.horizontal_gens) + twists,
        explicit_pullbacks=out.explicit_pullbacks,
    )
