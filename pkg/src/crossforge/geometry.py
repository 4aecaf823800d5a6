"""Exact rational plane geometry: predicates and segment intersection.

Everything is computed over ``fractions.Fraction`` (or plain ints); there is
no floating point anywhere on a decision path.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence, Union

Scalar = Union[int, Fraction]
Point = tuple[Scalar, Scalar]


def cross(o: Point, a: Point, b: Point) -> Scalar:
    """Signed area of the parallelogram (a-o) x (b-o); >0 means left turn."""
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def on_segment(p: Point, a: Point, b: Point) -> bool:
    """True iff p lies on the closed segment ab (collinearity included)."""
    if cross(a, b, p) != 0:
        return False
    return min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= p[1] <= max(
        a[1], b[1]
    )


def segments_overlap(a: Point, b: Point, c: Point, d: Point) -> bool:
    """True iff segments ab and cd share a positive-length interval."""
    if cross(a, b, c) != 0 or cross(a, b, d) != 0:
        return False
    # Collinear: compare 1-d projections on the dominant axis.
    axis = 0 if a[0] != b[0] else 1
    lo1, hi1 = sorted((a[axis], b[axis]))
    lo2, hi2 = sorted((c[axis], d[axis]))
    return max(lo1, lo2) < min(hi1, hi2)


def segment_intersection(a: Point, b: Point, c: Point, d: Point) -> Optional[Point]:
    """Intersection point of segments ab, cd if they cross transversally
    in exactly one point (endpoints included); None otherwise.

    Collinear overlaps return None — callers reject them via
    segments_overlap before asking.
    """
    d1 = cross(c, d, a)
    d2 = cross(c, d, b)
    d3 = cross(a, b, c)
    d4 = cross(a, b, d)
    if ((d1 > 0 and d2 < 0) or (d1 < 0 and d2 > 0)) and (
        (d3 > 0 and d4 < 0) or (d3 < 0 and d4 > 0)
    ):
        t = Fraction(d1, d1 - d2)
        x = a[0] + t * (b[0] - a[0])
        y = a[1] + t * (b[1] - a[1])
        return (x, y)
    # Touching cases (an endpoint on the other segment).
    for p, (s, t_) in ((a, (c, d)), (b, (c, d)), (c, (a, b)), (d, (a, b))):
        if on_segment(p, s, t_):
            return p
    return None


def proper_crossing(a: Point, b: Point, c: Point, d: Point) -> Optional[Point]:
    """Transversal interior-interior crossing point, or None."""
    d1 = cross(c, d, a)
    d2 = cross(c, d, b)
    d3 = cross(a, b, c)
    d4 = cross(a, b, d)
    if ((d1 > 0 and d2 < 0) or (d1 < 0 and d2 > 0)) and (
        (d3 > 0 and d4 < 0) or (d3 < 0 and d4 > 0)
    ):
        t = Fraction(d1, d1 - d2)
        return (a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]))
    return None


def point_in_convex(p: Point, poly: Sequence[Point]) -> int:
    """Locate p against a convex polygon (counterclockwise vertex order).

    Returns +1 strictly inside, 0 on the boundary, -1 outside.
    """
    on_edge = False
    n = len(poly)
    for i in range(n):
        a, b = poly[i], poly[(i + 1) % n]
        c = cross(a, b, p)
        if c < 0:
            return -1
        if c == 0 and on_segment(p, a, b):
            on_edge = True
    return 0 if on_edge else 1


def polygon_is_ccw(poly: Sequence[Point]) -> bool:
    n = len(poly)
    area2: Scalar = 0
    for i in range(n):
        a, b = poly[i], poly[(i + 1) % n]
        area2 += a[0] * b[1] - b[0] * a[1]
    return area2 > 0


def direction_angle_key(d: Point):
    """Sort key ordering direction vectors counterclockwise from +x.

    Exact: quadrant index first, then slope comparison via cross products.
    Two parallel directions compare equal (callers treat that as degenerate).
    """
    x, y = d
    if x == 0 and y == 0:
        raise ValueError("zero direction")
    if y > 0 or (y == 0 and x > 0):
        half = 0
    else:
        half = 1

    class _K:
        __slots__ = ("h", "x", "y")

        def __init__(self, h, x, y):
            self.h, self.x, self.y = h, x, y

        def _cmp(self, other) -> int:
            if self.h != other.h:
                return -1 if self.h < other.h else 1
            c = self.x * other.y - self.y * other.x
            if c > 0:
                return -1
            if c < 0:
                return 1
            return 0

        def __lt__(self, other):
            return self._cmp(other) < 0

        def __eq__(self, other):
            return self._cmp(other) == 0

    return _K(half, x, y)


def sort_clockwise(dirs: list[tuple[object, Point]]) -> list[object]:
    """Order (tag, direction) pairs clockwise; raises on parallel ties."""
    keyed = sorted(dirs, key=lambda td: direction_angle_key(td[1]))
    for (t1, d1), (t2, d2) in zip(keyed, keyed[1:]):
        if direction_angle_key(d1) == direction_angle_key(d2):
            raise ValueError(f"parallel directions at a vertex: {t1} / {t2}")
    keyed.reverse()
    return [t for t, _ in keyed]
