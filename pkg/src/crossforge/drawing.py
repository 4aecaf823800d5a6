"""Exact-rational drawings: crossing detection, validation, formats.

A drawing assigns a point to every vertex and a polyline to every edge.
Coordinates are rationals of unbounded size; the verifier rejects rather
than repairs degeneracies (overlapping segments, triple points, segments
through vertices), so reported crossing counts are unambiguous.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .geometry import Point, cross, on_segment, point_in_convex, polygon_is_ccw, segments_overlap
from .graph import WeightedAnchoredGraph, edge_key, format_rational


class DrawingError(ValueError):
    pass


@dataclass
class Drawing:
    positions: dict[int, Point] = field(default_factory=dict)
    routes: dict[tuple[int, int], tuple[Point, ...]] = field(default_factory=dict)
    boundary: Optional[tuple[Point, ...]] = None

    def route(self, u: int, v: int) -> tuple[Point, ...]:
        k = edge_key(u, v)
        pts = self.routes[k]
        return pts if k == (u, v) else tuple(reversed(pts))

    def set_route(self, u: int, v: int, pts: Sequence[Point]) -> None:
        k = edge_key(u, v)
        self.routes[k] = tuple(pts) if k == (u, v) else tuple(reversed(pts))

    def bounds(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        xs: list = []
        ys: list = []
        for p in self.positions.values():
            xs.append(p[0])
            ys.append(p[1])
        for pts in self.routes.values():
            for p in pts:
                xs.append(p[0])
                ys.append(p[1])
        if self.boundary:
            for p in self.boundary:
                xs.append(p[0])
                ys.append(p[1])
        return (min(xs), min(ys), max(xs), max(ys))


@dataclass
class Crossing:
    edges: tuple[tuple[int, int], tuple[int, int]]  # sorted pair of edge keys
    point: Point


@dataclass
class CrossingReport:
    crossings: list[Crossing]
    weighted_total: int
    unweighted_total: int
    participation: dict[tuple[int, int], int]
    color_totals: dict[tuple[str, str], int] = field(default_factory=dict)
    color_counts: dict[tuple[str, str], int] = field(default_factory=dict)

    def participation_of(self, u: int, v: int) -> int:
        return self.participation.get(edge_key(u, v), 0)


def verify_one_planar(report: CrossingReport) -> bool:
    """True iff every edge participates in at most one crossing."""
    return all(c <= 1 for c in report.participation.values())


def doubly_crossed_edges(report: CrossingReport) -> list[tuple[int, int]]:
    return sorted(k for k, c in report.participation.items() if c > 1)


# ----------------------------------------------------------------------
# Crossing detection
# ----------------------------------------------------------------------


def _scaled_segments(d: Drawing):
    """All route segments with coordinates scaled to a common integer grid."""
    denoms = set()
    for pts in d.routes.values():
        for p in pts:
            denoms.add(Fraction(p[0]).denominator)
            denoms.add(Fraction(p[1]).denominator)
    for p in d.positions.values():
        denoms.add(Fraction(p[0]).denominator)
        denoms.add(Fraction(p[1]).denominator)
    scale = 1
    for q in denoms:
        scale = scale * q // math.gcd(scale, q)

    def sp(p: Point) -> tuple[int, int]:
        fx, fy = Fraction(p[0]), Fraction(p[1])
        return (int(fx * scale), int(fy * scale))

    segs = []  # (edge_key, seg_index, a, b)
    for k in sorted(d.routes):
        pts = d.routes[k]
        for i in range(len(pts) - 1):
            a, b = sp(pts[i]), sp(pts[i + 1])
            if a == b:
                raise DrawingError(f"zero-length segment on edge {k}")
            segs.append((k, i, a, b))
    vpts = {v: sp(p) for v, p in d.positions.items()}
    return segs, vpts, scale


def _cell_size(segs) -> float:
    xs = [c for (_, _, a, b) in segs for c in (a[0], b[0])]
    ys = [c for (_, _, a, b) in segs for c in (a[1], b[1])]
    span = max(max(xs) - min(xs), max(ys) - min(ys), 1)
    return max(span / max(8, int(math.sqrt(len(segs)))), 1e-9)


def _bucket_pairs(segs):
    """Candidate segment pairs via a uniform grid on float bounding boxes."""
    if len(segs) < 2:
        return
    cell = _cell_size(segs)
    grid: dict[tuple[int, int], list[int]] = {}
    for idx, (_, _, a, b) in enumerate(segs):
        x0, x1 = sorted((a[0], b[0]))
        y0, y1 = sorted((a[1], b[1]))
        for cx in range(int(x0 / cell) - 1, int(x1 / cell) + 2):
            for cy in range(int(y0 / cell) - 1, int(y1 / cell) + 2):
                grid.setdefault((cx, cy), []).append(idx)
    seen = set()
    for members in grid.values():
        for i in range(len(members)):
            for j in range(i + 1, len(members)):
                p = (members[i], members[j]) if members[i] < members[j] else (members[j], members[i])
                if p not in seen:
                    seen.add(p)
                    yield p


def validate_drawing(d: Drawing, g: WeightedAnchoredGraph) -> None:
    """Structural checks shared by every verifier entry point."""
    want = set(g.weights)
    got = set(d.routes)
    if want != got:
        missing = sorted(want - got)
        extra = sorted(got - want)
        raise DrawingError(f"route set mismatch: missing {missing[:4]}, extra {extra[:4]}")
    for v in g.labels_by_id:
        if v not in d.positions:
            raise DrawingError(f"no position for vertex {v}")
    for (u, v), pts in d.routes.items():
        if len(pts) < 2:
            raise DrawingError(f"edge ({u},{v}) has a degenerate route")
        if pts[0] != tuple(d.positions[u]) or pts[-1] != tuple(d.positions[v]):
            raise DrawingError(f"edge ({u},{v}) route does not join its endpoints")


def find_crossings(
    d: Drawing,
    g: WeightedAnchoredGraph,
    colors: Optional[dict[tuple[int, int], str]] = None,
) -> CrossingReport:
    """All transverse interior crossings, exactly.

    Raises DrawingError on any degeneracy: overlapping segments, a segment
    through a vertex point, self-intersecting edges, non-transversal
    touchings, or three edge interiors through one point.
    """
    validate_drawing(d, g)
    segs, vpts, scale = _scaled_segments(d)
    vert_at: dict[tuple[int, int], int] = {}
    for v, p in sorted(vpts.items()):
        if p in vert_at:
            raise DrawingError(f"vertices {vert_at[p]} and {v} share a point")
        vert_at[p] = v

    # Edge interiors avoid vertex points (grid-filtered: only vertices in a
    # segment's bounding box can lie on it).
    vgrid: dict[tuple[int, int], list[tuple[tuple[int, int], int]]] = {}
    cell = _cell_size(segs)
    for p, v in vert_at.items():
        vgrid.setdefault((int(p[0] / cell), int(p[1] / cell)), []).append((p, v))
    for (k, i, a, b) in segs:
        x0, x1 = sorted((a[0], b[0]))
        y0, y1 = sorted((a[1], b[1]))
        for cx in range(int(x0 / cell) - 1, int(x1 / cell) + 2):
            for cy in range(int(y0 / cell) - 1, int(y1 / cell) + 2):
                for p, v in vgrid.get((cx, cy), ()):
                    if v in k:
                        continue
                    if on_segment(p, a, b):
                        raise DrawingError(f"edge {k} passes through vertex {v}")

    crossings: list[Crossing] = []
    point_edges: dict[tuple, set] = {}
    for (i, j) in _bucket_pairs(segs):
        k1, i1, a, b = segs[i]
        k2, i2, c, c2 = segs[j]
        if segments_overlap(a, b, c, c2):
            raise DrawingError(f"edges {k1} and {k2} overlap along a segment")
        if k1 == k2:
            # Consecutive segments of one polyline share exactly a bend.
            if abs(i1 - i2) == 1:
                continue
            if _touch(a, b, c, c2):
                raise DrawingError(f"edge {k1} intersects itself")
            continue
        shared = set(k1) & set(k2)
        d1 = cross(c, c2, a)
        d2 = cross(c, c2, b)
        d3 = cross(a, b, c)
        d4 = cross(a, b, c2)
        if ((d1 > 0 and d2 < 0) or (d1 < 0 and d2 > 0)) and (
            (d3 > 0 and d4 < 0) or (d3 < 0 and d4 > 0)
        ):
            t = Fraction(d1, d1 - d2)
            px = Fraction(a[0]) + t * (b[0] - a[0])
            py = Fraction(a[1]) + t * (b[1] - a[1])
            pt = (px / scale, py / scale)
            ks = point_edges.setdefault(pt, set())
            ks.update((k1, k2))
            if len(ks) > 2:
                raise DrawingError(f"three edges meet at {pt}")
            pair = tuple(sorted((k1, k2)))
            crossings.append(Crossing((pair[0], pair[1]), pt))
        else:
            # Any other incidence is a touch; allowed only at a shared
            # graph vertex.
            touch_pt = _touch(a, b, c, c2)
            if touch_pt is not None:
                v = vert_at.get(touch_pt)
                if v is None or v not in shared:
                    raise DrawingError(
                        f"edges {k1} and {k2} touch non-transversally at "
                        f"({Fraction(touch_pt[0], scale)},{Fraction(touch_pt[1], scale)})"
                    )

    crossings.sort(key=lambda c: (c.edges, c.point))
    participation: dict[tuple[int, int], int] = {}
    weighted = 0
    color_totals: dict[tuple[str, str], int] = {}
    color_counts: dict[tuple[str, str], int] = {}
    for c in crossings:
        (e1, e2) = c.edges
        participation[e1] = participation.get(e1, 0) + 1
        participation[e2] = participation.get(e2, 0) + 1
        wprod = g.weights[e1] * g.weights[e2]
        weighted += wprod
        if colors is not None:
            cls = tuple(sorted((colors.get(e1, "?"), colors.get(e2, "?"))))
            color_totals[cls] = color_totals.get(cls, 0) + wprod
            color_counts[cls] = color_counts.get(cls, 0) + 1
    return CrossingReport(
        crossings=crossings,
        weighted_total=weighted,
        unweighted_total=len(crossings),
        participation=participation,
        color_totals=color_totals,
        color_counts=color_counts,
    )


def _touch(a, b, c, d) -> Optional[tuple[int, int]]:
    """A single shared point between segments ab and cd, if any."""
    pts = []
    for p, (s, t) in ((a, (c, d)), (b, (c, d)), (c, (a, b)), (d, (a, b))):
        if on_segment(p, s, t) and p not in pts:
            pts.append(p)
    if not pts:
        return None
    if len(pts) > 1:
        # Shared endpoints both-ways produce duplicates; distinct points
        # on collinear segments were rejected as overlaps earlier.
        pass
    return pts[0]


# ----------------------------------------------------------------------
# Anchored validation
# ----------------------------------------------------------------------


def verify_anchored(d: Drawing, g: WeightedAnchoredGraph) -> tuple[bool, list[str]]:
    """Anchors on the boundary polygon in the prescribed cyclic order (up
    to rotation/reflection), everything else strictly inside.
    """
    problems: list[str] = []
    if d.boundary is None:
        return False, ["drawing has no boundary polygon"]
    poly = [tuple(p) for p in d.boundary]
    if not polygon_is_ccw(poly):
        return False, ["boundary polygon is not counterclockwise"]
    anchors = set(g.anchors)

    def boundary_param(p: Point):
        for i in range(len(poly)):
            a, b = poly[i], poly[(i + 1) % len(poly)]
            if on_segment(p, a, b):
                if a[0] != b[0]:
                    t = Fraction(p[0] - a[0], b[0] - a[0])
                else:
                    t = Fraction(p[1] - a[1], b[1] - a[1])
                return (i, t)
        return None

    params = {}
    for v in g.labels_by_id:
        p = tuple(d.positions[v])
        side = point_in_convex(p, poly)
        if v in anchors:
            bp = boundary_param(p)
            if bp is None:
                problems.append(f"anchor {g.token(v)} not on the boundary")
            else:
                params[v] = bp
        else:
            if side != 1:
                problems.append(f"vertex {g.token(v)} not strictly inside")
    if problems:
        return False, problems

    # Route interiors strictly inside (convex boundary: midpoint test).
    for (u, v), pts in sorted(d.routes.items()):
        for i, p in enumerate(pts):
            side = point_in_convex(tuple(p), poly)
            endpoint_anchor = (i == 0 and u in anchors) or (i == len(pts) - 1 and v in anchors)
            if side == -1 or (side == 0 and not endpoint_anchor):
                problems.append(f"edge ({u},{v}) leaves the interior")
                break
        for i in range(len(pts) - 1):
            mid = (
                Fraction(pts[i][0] + pts[i + 1][0], 2),
                Fraction(pts[i][1] + pts[i + 1][1], 2),
            )
            if point_in_convex(mid, poly) != 1:
                problems.append(f"edge ({u},{v}) runs along the boundary")
                break
    if problems:
        return False, problems

    order = sorted(params, key=lambda v: params[v])
    want = list(g.anchors)
    if len(order) != len(want):
        return False, ["anchor count mismatch on boundary"]
    if len(set(params.values())) != len(params):
        return False, ["two anchors share a boundary point"]
    # Boundary parameters run counterclockwise; clockwise anchor orders are
    # accepted up to rotation and reflection, so compare both directions.
    if not _cyclic_equal(order, want) and not _cyclic_equal(order, want[::-1]):
        problems.append("anchor cyclic order does not match")
        return False, problems
    return True, []


def _cyclic_equal(a: list[int], b: list[int]) -> bool:
    if len(a) != len(b):
        return False
    if not a:
        return True
    if a[0] not in b:
        return False
    i = b.index(a[0])
    return a == b[i:] + b[:i]


# ----------------------------------------------------------------------
# Rotation extraction
# ----------------------------------------------------------------------


def rotation_from_drawing(d: Drawing, g: WeightedAnchoredGraph) -> dict[int, tuple[int, ...]]:
    """Clockwise cyclic order of incident edges at each vertex, from the
    initial direction of each route.  Raises on parallel initial segments.
    """
    from .geometry import sort_clockwise

    adj = g.adjacency()
    rot = {}
    for v in sorted(adj):
        dirs = []
        for u in adj[v]:
            pts = d.route(v, u)
            dx = pts[1][0] - pts[0][0]
            dy = pts[1][1] - pts[0][1]
            dirs.append((u, (dx, dy)))
        try:
            rot[v] = tuple(sort_clockwise(dirs))
        except ValueError as exc:
            raise DrawingError(f"degenerate directions at vertex {v}: {exc}") from None
    return rot


# ----------------------------------------------------------------------
# .adr format
# ----------------------------------------------------------------------


def _parse_scalar(tok: str) -> Fraction:
    if "/" in tok:
        a, b = tok.split("/")
        return Fraction(int(a), int(b))
    return Fraction(int(tok))


def serialize_adr(d: Drawing) -> str:
    lines = ["adr 1"]
    if d.boundary:
        lines.append(
            "boundary " + " ".join(f"{format_rational(p[0])} {format_rational(p[1])}" for p in d.boundary)
        )
    for v in sorted(d.positions):
        p = d.positions[v]
        lines.append(f"pos {v} {format_rational(p[0])} {format_rational(p[1])}")
    for (u, v) in sorted(d.routes):
        pts = d.routes[(u, v)]
        coords = " ".join(f"{format_rational(p[0])} {format_rational(p[1])}" for p in pts)
        lines.append(f"route {u} {v} {coords}")
    return "\n".join(lines) + "\n"


def parse_adr(text: str) -> Drawing:
    lines = text.splitlines()
    if not lines or lines[0].strip() != "adr 1":
        raise DrawingError("line 1: expected header 'adr 1'")
    d = Drawing()
    for no, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if not line or line.startswith("#") or line.startswith("port "):
            continue
        parts = line.split()
        try:
            if parts[0] == "boundary":
                vals = [_parse_scalar(t) for t in parts[1:]]
                if len(vals) % 2 or len(vals) < 6:
                    raise DrawingError("boundary needs >= 3 points")
                d.boundary = tuple((vals[i], vals[i + 1]) for i in range(0, len(vals), 2))
            elif parts[0] == "pos":
                d.positions[int(parts[1])] = (_parse_scalar(parts[2]), _parse_scalar(parts[3]))
            elif parts[0] == "route":
                u, v = int(parts[1]), int(parts[2])
                vals = [_parse_scalar(t) for t in parts[3:]]
                if len(vals) % 2 or len(vals) < 4:
                    raise DrawingError("route needs >= 2 points")
                pts = tuple((vals[i], vals[i + 1]) for i in range(0, len(vals), 2))
                d.set_route(u, v, pts)
            else:
                raise DrawingError(f"unknown record '{parts[0]}'")
        except DrawingError as exc:
            raise DrawingError(f"line {no}: {exc}") from None
        except (ValueError, IndexError):
            raise DrawingError(f"line {no}: malformed record") from None
    return d


# ----------------------------------------------------------------------
# SVG emission
# ----------------------------------------------------------------------

_PALETTE = {"blue": "#2c6fbb", "red": "#c0392b", "cycle": "#555555", "extra": "#111111"}


def emit_svg(
    d: Drawing,
    g: WeightedAnchoredGraph,
    colors: Optional[dict[tuple[int, int], str]] = None,
    report: Optional[CrossingReport] = None,
    mark_crossings: bool = False,
    scale: float = 40.0,
) -> str:
    x0, y0, x1, y1 = d.bounds()
    pad = Fraction(1, 2)
    x0, y0, x1, y1 = x0 - pad, y0 - pad, x1 + pad, y1 + pad

    def txy(p: Point) -> tuple[str, str]:
        X = float(Fraction(p[0]) - x0) * scale
        Y = float(y1 - Fraction(p[1])) * scale
        return (f"{X:.3f}", f"{Y:.3f}")

    def tx(p: Point) -> str:
        X, Y = txy(p)
        return f"{X},{Y}"

    W = float(x1 - x0) * scale
    H = float(y1 - y0) * scale
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W:.0f}" height="{H:.0f}" '
        f'viewBox="0 0 {W:.3f} {H:.3f}">'
    ]
    if d.boundary:
        pts = " ".join(tx(p) for p in d.boundary)
        parts.append(f'<polygon points="{pts}" fill="none" stroke="#999999" stroke-dasharray="6,4"/>')
    for (u, v) in sorted(d.routes):
        pts = " ".join(tx(p) for p in d.routes[(u, v)])
        color = _PALETTE.get((colors or {}).get((u, v), ""), "#333333")
        parts.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.2"/>')
    for v in sorted(d.positions):
        X, Y = txy(d.positions[v])
        parts.append(f'<circle cx="{X}" cy="{Y}" r="2.2" fill="#000000"/>')
    if mark_crossings and report is not None:
        for c in report.crossings:
            X, Y = txy(c.point)
            parts.append(
                f'<circle cx="{X}" cy="{Y}" r="3.5" fill="none" stroke="#ff8800" stroke-width="1.0"/>'
            )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
