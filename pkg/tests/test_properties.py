"""Property tests for the core layer against independent oracles.

Interval complexes have a geometric oracle (a family covers a segment iff
its union contains the segment); divisor complexes have an arithmetic one
(meets are gcds, disjointness is coprimality).
"""

import math

from hypothesis import given, settings
from hypothesis import strategies as st

from polyk.complexes import Ternary
from polyk.generators import divisor_complex, interval_complex

N = 4
INTERVAL = interval_complex(N)
SEGMENTS = [(i, j) for i in range(N) for j in range(i + 1, N + 1)]


def seg_id(seg):
    return f"[{seg[0]}-{seg[1]}]"


segments = st.sampled_from(SEGMENTS)
families = st.lists(segments, max_size=5)


def union_contains(family, target):
    """Geometric cover oracle: do the pieces jointly contain the segment?"""
    lo, hi = target
    point = lo
    while point < hi:
        extensions = [b for a, b in family if a <= point < b]
        if not extensions:
            return False
        point = max(extensions)
    return True


@settings(max_examples=200, deadline=None)
@given(segments, families)
def test_interval_cover_matches_geometry(target, family):
    family = [seg for seg in family if seg[0] >= target[0] and seg[1] <= target[1]]
    expected = Ternary.YES if union_contains(family, target) else Ternary.NO
    assert INTERVAL.is_cover([seg_id(s) for s in family], seg_id(target), 16) is expected


@settings(max_examples=200, deadline=None)
@given(segments, segments)
def test_interval_meet_is_intersection(a, b):
    lo, hi = max(a[0], b[0]), min(a[1], b[1])
    expected = seg_id((lo, hi)) if lo < hi else INTERVAL.initial
    assert INTERVAL.meet(seg_id(a), seg_id(b)) == expected


@settings(max_examples=100, deadline=None)
@given(segments, segments)
def test_interval_disjoint_is_interior_disjoint(a, b):
    if a == b:
        return
    expected = max(a[0], b[0]) >= min(a[1], b[1])
    assert INTERVAL.disjoint(seg_id(a), seg_id(b)) == expected


DIVISOR_N = 360
DIVISOR = divisor_complex(DIVISOR_N)
DIVISORS = [d for d in range(2, DIVISOR_N + 1) if DIVISOR_N % d == 0]
divisors = st.sampled_from(DIVISORS)


@settings(max_examples=200, deadline=None)
@given(divisors, divisors)
def test_divisor_meet_is_gcd(a, b):
    g = math.gcd(a, b)
    expected = str(g) if g > 1 else "1"
    assert DIVISOR.meet(str(a), str(b)) == expected


@settings(max_examples=200, deadline=None)
@given(divisors, divisors)
def test_divisor_disjoint_is_coprime(a, b):
    if a == b:
        return
    # Every pair of divisors is bounded by their lcm, which divides 360,
    # so disjointness reduces to coprimality.
    assert DIVISOR.disjoint(str(a), str(b)) == (math.gcd(a, b) == 1)


@settings(max_examples=50, deadline=None)
@given(segments, families, st.integers(min_value=1, max_value=4))
def test_cover_search_monotone_in_depth(target, family, shallow_depth):
    family = [seg for seg in family if seg[0] >= target[0] and seg[1] <= target[1]]
    fam_ids = [seg_id(s) for s in family]
    # Fresh complex per example: the shared cache would mask depth effects.
    c = interval_complex(N)
    shallow = c.is_cover(fam_ids, seg_id(target), shallow_depth)
    deep = c.is_cover(fam_ids, seg_id(target), 16)
    if shallow is Ternary.YES:
        assert deep is Ternary.YES
    if shallow is Ternary.NO:
        assert deep is Ternary.NO
