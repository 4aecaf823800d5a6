"""CNF -> weighted anchored crossing-number instance.

The instance is a disjoint union of a blue grid graph (clause structure in
the weights) and a red graph of vertical variable paths and horizontal
clause paths, with an interleaved anchor order around a rectangle.  The
canonical drawing places blue vertex b(a,b) at the point (a, b) inside the
boundary rectangle [0,2n+2] x [0,2m+3].
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from . import labels as L
from .embedding import CombinatorialEmbedding, rotation_from_positions
from .graph import WeightedAnchoredGraph, edge_key
from .sat import CnfInstance

Point = tuple[Fraction, Fraction]


@dataclass(frozen=True)
class CrParams:
    n: int
    m: int
    w: int
    k: int
    unw_total: int
    W: int = 0  # total edge weight of the combined instance

    @staticmethod
    def of(n: int, m: int, W: int = 0) -> "CrParams":
        w = 30 * n * m
        k = (6 * n * m + 6 * n + 2 * m + 1) * w**3 - m * (w**2 + w - 1)
        return CrParams(n, m, w, k, 6 * n * m + 6 * n + 2 * m + 1, W)


def cr_params(n: int, m: int) -> CrParams:
    if n < 1 or m < 1:
        raise ValueError("need n, m >= 1")
    return CrParams.of(n, m)


@dataclass
class RegionMap:
    """Face regions of the canonical blue embedding, by canonical face key."""

    columns: dict[int, dict[str, list[tuple[str, ...]]]]
    rows_lower: dict[int, list[tuple[str, ...]]]
    rows_upper: dict[int, list[tuple[str, ...]]]
    row_enf: list[tuple[str, ...]]
    boundary_edges: dict[int, list[tuple[str, str]]]  # j -> edges of the L_j/U_j line


@dataclass
class RedPathPartition:
    """The red edge partition, as token pairs."""

    verticals: dict[int, list[tuple[str, str]]]  # V_i
    horizontals: dict[int, list[tuple[str, str]]]  # H_j
    enforcing: list[tuple[str, str]]  # H_enf

    def all_paths(self) -> list[tuple[str, list[tuple[str, str]]]]:
        out = [(f"V{i}", es) for i, es in sorted(self.verticals.items())]
        out += [(f"H{j}", es) for j, es in sorted(self.horizontals.items())]
        out.append(("Henf", self.enforcing))
        return out


@dataclass
class CrInstance:
    cnf: CnfInstance
    graph: WeightedAnchoredGraph
    blue: WeightedAnchoredGraph  # shares the combined graph's vertex ids
    red: WeightedAnchoredGraph
    params: CrParams
    regions: RegionMap
    red_paths: RedPathPartition

    def colors(self) -> dict[tuple[int, int], str]:
        out = {}
        for k in self.graph.weights:
            out[k] = "blue" if k in self.blue.weights else "red"
        return out

    def edge_id(self, ut: str, vt: str) -> tuple[int, int]:
        idx = self.graph.token_index()
        return edge_key(idx[ut], idx[vt])


# ----------------------------------------------------------------------
# Blue / red construction (token space)
# ----------------------------------------------------------------------


def _blue_data(inst: CnfInstance):
    n, m = inst.n, inst.m
    p = cr_params(n, m)
    removed = {(2 * i, b) for i in range(0, n + 2) for b in (0, 2 * m + 3)}
    verts = [
        (a, b)
        for a in range(0, 2 * n + 3)
        for b in range(0, 2 * m + 4)
        if (a, b) not in removed
    ]
    vset = set(verts)
    anchors = {(2 * i + 1, b) for i in range(0, n + 1) for b in (0, 2 * m + 3)}
    anchors |= {(a, b) for a in (0, 2 * n + 2) for b in range(1, 2 * m + 3)}

    lit_pos = {(2 * i - 1, 2 * j) for i in range(1, n + 1) for j in range(1, m + 1) if i in inst.clauses[j - 1]}
    lit_neg = {(2 * i, 2 * j) for i in range(1, n + 1) for j in range(1, m + 1) if -i in inst.clauses[j - 1]}

    def weight(a, b):
        (x1, y1), (x2, y2) = a, b
        if a in anchors or b in anchors:
            return p.w**4
        if y1 == y2 and y1 % 2 == 0 and 2 <= y1 <= 2 * m:
            lo = min(x1, x2)
            if lo % 2 == 1 and (lo, y1) in lit_pos:
                return p.w**2 - 1
            if lo % 2 == 0 and (lo, y1) in lit_neg:
                return p.w**2 - 1
        if y1 == y2 == 2 * m + 2:
            lo = min(x1, x2)
            if lo % 2 == 1:  # b(2i-1,2m+2)-b(2i,2m+2)
                i = (lo + 1) // 2
                return p.w**2 + inst.positive_occurrences(i)
            i = lo // 2  # b(2i,2m+2)-b(2i+1,2m+2)
            if 1 <= i <= n:
                return p.w**2 + inst.negative_occurrences(i)
        return p.w**2

    edges = []
    for (a, b) in verts:
        for (c, d) in ((a + 1, b), (a, b + 1)):
            if (c, d) in vset:
                if (a, b) in anchors and (c, d) in anchors:
                    continue
                edges.append(((a, b), (c, d), weight((a, b), (c, d))))
    return verts, edges, anchors


def build_blue(inst: CnfInstance) -> WeightedAnchoredGraph:
    verts, edges, anchors = _blue_data(inst)
    anchor_tokens = [L.blue(*a).token() for a in _blue_anchor_order(inst.n, inst.m)]
    return WeightedAnchoredGraph.from_labels(
        [L.blue(a, b) for (a, b) in verts],
        [(L.blue(*u).token(), L.blue(*v).token(), w) for (u, v, w) in edges],
        anchor_tokens,
    )


def _red_token(a: int, b: int, n: int, m: int) -> str:
    """Grid coordinate -> token, applying the endpoint identifications."""
    if b == 0 and 1 <= a <= 2 * n:
        return L.red_var((a + 1) // 2).token()
    if b == m + 2 and 1 <= a <= 2 * n:
        return L.red_var((a + 1) // 2, primed=True).token()
    return L.red(a, b).token()


def _red_data(inst: CnfInstance):
    n, m = inst.n, inst.m
    p = cr_params(n, m)
    corners = {(0, 0), (0, m + 2), (2 * n + 1, 0), (2 * n + 1, m + 2)}
    coords = [
        (a, b)
        for a in range(0, 2 * n + 2)
        for b in range(0, m + 3)
        if (a, b) not in corners
    ]
    cset = set(coords)
    tokens = sorted({_red_token(a, b, n, m) for (a, b) in coords})
    anchor_tokens = set()
    for i in range(1, n + 1):
        anchor_tokens.add(L.red_var(i).token())
        anchor_tokens.add(L.red_var(i, primed=True).token())
    for j in range(1, m + 2):
        anchor_tokens.add(L.red(0, j).token())
        anchor_tokens.add(L.red(2 * n + 1, j).token())

    def weight(a, b):
        (x1, y1), (x2, y2) = a, b
        if y1 == y2 and min(x1, x2) % 2 == 1:
            i = (min(x1, x2) + 1) // 2
            if 1 <= i <= n:
                if y1 == m + 1:
                    return p.w**4
                if 1 <= y1 <= m:
                    return p.w - 1
        return p.w

    edges = {}
    for (a, b) in coords:
        for (c, d) in ((a + 1, b), (a, b + 1)):
            if (c, d) in cset:
                ut = _red_token(a, b, n, m)
                vt = _red_token(c, d, n, m)
                if ut == vt:
                    continue  # identification self-loop
                if ut in anchor_tokens and vt in anchor_tokens:
                    continue
                key = tuple(sorted((ut, vt)))
                edges[key] = ((a, b), (c, d), weight((a, b), (c, d)))
    return tokens, edges, anchor_tokens


def build_red(inst: CnfInstance) -> WeightedAnchoredGraph:
    tokens, edges, _ = _red_data(inst)
    return WeightedAnchoredGraph.from_labels(
        [L.parse(t) for t in tokens],
        [(k[0], k[1], w) for k, (_, _, w) in sorted(edges.items())],
        _red_anchor_order(inst.n, inst.m),
    )


# ----------------------------------------------------------------------
# Anchor cyclic order (clockwise) and boundary positions
# ----------------------------------------------------------------------


def anchor_order(n: int, m: int) -> list[str]:
    """The full clockwise anchor sequence of the combined instance."""
    seq: list[str] = []
    # bottom, right to left
    for i in range(n, 0, -1):
        seq.append(L.blue(2 * i + 1, 0).token())
        seq.append(L.red_var(i).token())
    seq.append(L.blue(1, 0).token())
    # left side, ascending
    for j in range(1, m + 1):
        seq.append(L.blue(0, 2 * j - 1).token())
        seq.append(L.red(0, j).token())
        seq.append(L.blue(0, 2 * j).token())
    seq.append(L.blue(0, 2 * m + 1).token())
    seq.append(L.red(0, m + 1).token())
    seq.append(L.blue(0, 2 * m + 2).token())
    # top, left to right
    for i in range(1, n + 1):
        seq.append(L.blue(2 * i - 1, 2 * m + 3).token())
        seq.append(L.red_var(i, primed=True).token())
    seq.append(L.blue(2 * n + 1, 2 * m + 3).token())
    # right side, descending
    seq.append(L.blue(2 * n + 2, 2 * m + 2).token())
    seq.append(L.red(2 * n + 1, m + 1).token())
    seq.append(L.blue(2 * n + 2, 2 * m + 1).token())
    for j in range(m, 0, -1):
        seq.append(L.red(2 * n + 1, j).token())
        seq.append(L.blue(2 * n + 2, 2 * j).token())
        seq.append(L.blue(2 * n + 2, 2 * j - 1).token())
    return seq


def _blue_anchor_order(n: int, m: int) -> list[tuple[int, int]]:
    out = []
    for t in anchor_order(n, m):
        lbl = L.parse(t)
        if t.startswith("b("):
            out.append(lbl.coords)
    return out


def _red_anchor_order(n: int, m: int) -> list[str]:
    return [t for t in anchor_order(n, m) if not t.startswith("b(")]


def anchor_positions(n: int, m: int) -> dict[str, Point]:
    """Where each anchor sits on the boundary rectangle."""
    W, H = 2 * n + 2, 2 * m + 3
    pos: dict[str, Point] = {}
    for i in range(1, n + 2):
        pos[L.blue(2 * i - 1, 0).token()] = (Fraction(2 * i - 1), Fraction(0))
        pos[L.blue(2 * i - 1, H).token()] = (Fraction(2 * i - 1), Fraction(H))
    for i in range(1, n + 1):
        pos[L.red_var(i).token()] = (Fraction(2 * i), Fraction(0))
        pos[L.red_var(i, primed=True).token()] = (Fraction(2 * i), Fraction(H))
    for b in range(1, 2 * m + 3):
        pos[L.blue(0, b).token()] = (Fraction(0), Fraction(b))
        pos[L.blue(W, b).token()] = (Fraction(W), Fraction(b))
    for j in range(1, m + 2):
        y_left = 2 * j - Fraction(1, 2) if j <= m else 2 * m + Fraction(3, 2)
        y_right = 2 * j + Fraction(1, 2) if j <= m else 2 * m + Fraction(3, 2)
        pos[L.red(0, j).token()] = (Fraction(0), y_left)
        pos[L.red(2 * n + 1, j).token()] = (Fraction(W), y_right)
    return pos


# ----------------------------------------------------------------------
# Canonical blue embedding and regions
# ----------------------------------------------------------------------


def blue_positions(n: int, m: int, g: WeightedAnchoredGraph) -> dict[int, Point]:
    pos = {}
    for v in g.labels_by_id:
        t = g.token(v)
        if t.startswith("b("):
            a, b = L.parse(t).coords
            pos[v] = (Fraction(a), Fraction(b))
    return pos


def blue_anchored_embedding(inst_blue: WeightedAnchoredGraph, n: int, m: int) -> CombinatorialEmbedding:
    """The canonical anchored embedding of the blue grid (from its layout)."""
    pos = blue_positions(n, m, inst_blue)
    rect_w, rect_h = Fraction(2 * n + 2), Fraction(2 * m + 3)
    return layout_anchored_embedding(inst_blue, pos, rect_w, rect_h)


def layout_anchored_embedding(
    g: WeightedAnchoredGraph,
    pos: dict[int, Point],
    rect_w: Fraction,
    rect_h: Fraction,
    extra_dirs: Optional[dict[tuple[int, int], Point]] = None,
) -> CombinatorialEmbedding:
    """Anchored embedding of a straight-line layout inside a rectangle.

    Anchors must lie on the rectangle; virtual boundary arcs between
    consecutive anchors follow the rectangle clockwise.  ``extra_dirs`` may
    override the initial direction of (v, neighbour) edges whose drawn
    first leg is not the straight segment.
    """

    def perim(p: Point) -> Fraction:
        x, y = Fraction(p[0]), Fraction(p[1])
        if y == 0:
            return x
        if x == rect_w:
            return rect_w + y
        if y == rect_h:
            return rect_w + rect_h + (rect_w - x)
        if x == 0:
            return 2 * rect_w + rect_h + (rect_h - y)
        raise ValueError(f"anchor position {p} not on rectangle")

    total = 2 * (rect_w + rect_h)
    anchors = list(g.anchors)
    params = {a: perim(pos[a]) for a in anchors}
    order_ccw = sorted(anchors, key=lambda a: params[a])
    # The graph's anchor tuple is clockwise; the perimeter walk above is
    # counterclockwise, so the reversed tuple must match up to rotation.
    rev = list(reversed(anchors))
    start = order_ccw[0]
    i = rev.index(start)
    if rev[i:] + rev[:i] != order_ccw:
        fwd = list(anchors)
        i = fwd.index(start)
        if fwd[i:] + fwd[:i] != order_ccw:
            raise ValueError("anchor cyclic order does not match layout")

    def corner_between(p1: Fraction, p2: Fraction) -> list[Point]:
        corners = []
        for c, cp in (
            ((rect_w, Fraction(0)), rect_w),
            ((rect_w, rect_h), rect_w + rect_h),
            ((Fraction(0), rect_h), 2 * rect_w + rect_h),
            ((Fraction(0), Fraction(0)), Fraction(0)),
        ):
            cpv = cp if cp > p1 else cp + total
            p2v = p2 if p2 > p1 else p2 + total
            if p1 < cpv < p2v:
                corners.append((cp, c))
        return [c for _, c in sorted(corners)]

    base = max(g.labels_by_id) + 1
    rot_dirs: dict[int, list[tuple[int, Point]]] = {v: [] for v in g.labels_by_id}
    adj = g.adjacency()
    for v in g.labels_by_id:
        for u in adj[v]:
            if extra_dirs and (v, u) in extra_dirs:
                d = extra_dirs[(v, u)]
            else:
                d = (pos[u][0] - pos[v][0], pos[u][1] - pos[v][1])
            rot_dirs[v].append((u, d))
    virt: dict[int, str] = {}
    vid = base
    arc_positions: dict[int, Point] = {}
    for idx in range(len(order_ccw)):
        a, b2 = order_ccw[idx], order_ccw[(idx + 1) % len(order_ccw)]
        p1, p2 = params[a], params[b2]
        cs = corner_between(p1, p2 % total)
        if cs:
            spot = cs[0]
        else:
            p2v = p2 if p2 > p1 else p2 + total
            mid = (p1 + p2v) / 2 % total
            spot = _point_at(mid, rect_w, rect_h)
        s = vid
        vid += 1
        virt[s] = f"~arc:{idx}"
        arc_positions[s] = spot
        rot_dirs.setdefault(s, [])
        for end in (a, b2):
            d_se = (pos[end][0] - spot[0], pos[end][1] - spot[1])
            if d_se == (0, 0):
                raise ValueError("arc subdivider coincides with an anchor")
            rot_dirs[s].append((end, d_se))
            rot_dirs[end].append((s, (spot[0] - pos[end][0], spot[1] - pos[end][1])))

    from .geometry import sort_clockwise

    rot = {v: tuple(sort_clockwise(ds)) if ds else () for v, ds in rot_dirs.items()}
    emb = CombinatorialEmbedding.from_rotation(g, rot, virt)
    # Outer face: the unique face carrying every virtual arc vertex.
    arc_ids = set(virt)
    outer = [
        i
        for i, f in enumerate(emb.faces)
        if arc_ids <= {u for (u, _) in f}
    ]
    if len(outer) != 1:
        raise ValueError(f"outer face detection found {len(outer)} candidates")
    emb.outer_face = outer[0]
    return emb


def _point_at(p: Fraction, rect_w: Fraction, rect_h: Fraction) -> Point:
    if p <= rect_w:
        return (p, Fraction(0))
    if p <= rect_w + rect_h:
        return (rect_w, p - rect_w)
    if p <= 2 * rect_w + rect_h:
        return (rect_w - (p - rect_w - rect_h), rect_h)
    return (Fraction(0), rect_h - (p - 2 * rect_w - rect_h))


def _region_map(inst: CnfInstance, emb: CombinatorialEmbedding, g: WeightedAnchoredGraph) -> RegionMap:
    n, m = inst.n, inst.m

    def cell_key(alpha: int, beta: int) -> tuple[str, ...]:
        corners = {
            L.blue(alpha, beta).token(),
            L.blue(alpha + 1, beta).token(),
            L.blue(alpha, beta + 1).token(),
            L.blue(alpha + 1, beta + 1).token(),
        }
        return emb.face_key(emb.face_by_named_corners(corners))

    def merged_key(i: int, bottom: bool) -> tuple[str, ...]:
        # Column end face spanning alpha in [2i-1, 2i+1].
        if bottom:
            names = {
                L.blue(2 * i - 1, 0).token(),
                L.blue(2 * i + 1, 0).token(),
                L.blue(2 * i - 1, 1).token(),
                L.blue(2 * i, 1).token(),
                L.blue(2 * i + 1, 1).token(),
            }
        else:
            names = {
                L.blue(2 * i - 1, 2 * m + 3).token(),
                L.blue(2 * i + 1, 2 * m + 3).token(),
                L.blue(2 * i - 1, 2 * m + 2).token(),
                L.blue(2 * i, 2 * m + 2).token(),
                L.blue(2 * i + 1, 2 * m + 2).token(),
            }
        faces = [
            idx
            for idx in range(len(emb.faces))
            if idx != emb.outer_face
            and {
                t
                for (u, _) in emb.faces[idx]
                for t in [emb._vertex_token(u)]
                if not t.startswith("~")
            }
            == names
        ]
        if len(faces) != 1:
            raise ValueError(f"column end face lookup failed for i={i}")
        return emb.face_key(faces[0])

    columns: dict[int, dict[str, list[tuple[str, ...]]]] = {}
    for i in range(1, n + 1):
        shared = [merged_key(i, True), merged_key(i, False)]
        t_faces = [cell_key(2 * i - 1, b) for b in range(1, 2 * m + 2)] + shared
        f_faces = [cell_key(2 * i, b) for b in range(1, 2 * m + 2)] + shared
        columns[i] = {"T": t_faces, "F": f_faces}
    rows_lower = {}
    rows_upper = {}
    for j in range(1, m + 1):
        rows_lower[j] = [cell_key(a, 2 * j - 1) for a in range(0, 2 * n + 2)]
        rows_upper[j] = [cell_key(a, 2 * j) for a in range(0, 2 * n + 2)]
    row_enf = [cell_key(a, 2 * m + 1) for a in range(0, 2 * n + 2)]
    boundary_edges = {
        j: [
            (L.blue(t, 2 * j).token(), L.blue(t + 1, 2 * j).token())
            for t in range(0, 2 * n + 2)
        ]
        for j in range(1, m + 1)
    }
    return RegionMap(columns, rows_lower, rows_upper, row_enf, boundary_edges)


# ----------------------------------------------------------------------
# Combined instance
# ----------------------------------------------------------------------


def _red_paths(inst: CnfInstance) -> RedPathPartition:
    n, m = inst.n, inst.m

    def tok(a, b):
        return _red_token(a, b, n, m)

    verticals = {}
    for i in range(1, n + 1):
        es = []
        for col in (2 * i - 1, 2 * i):
            seq = [tok(col, b) for b in range(0, m + 3)]
            es += [(seq[t], seq[t + 1]) for t in range(len(seq) - 1)]
        verticals[i] = es
    horizontals = {}
    for j in range(1, m + 1):
        seq = [tok(a, j) for a in range(0, 2 * n + 2)]
        horizontals[j] = [(seq[t], seq[t + 1]) for t in range(len(seq) - 1)]
    seq = [tok(a, m + 1) for a in range(0, 2 * n + 2)]
    enforcing = [(seq[t], seq[t + 1]) for t in range(len(seq) - 1)]
    return RedPathPartition(verticals, horizontals, enforcing)


def build_cr_instance(inst: CnfInstance) -> CrInstance:
    n, m = inst.n, inst.m
    bverts, bedges, _ = _blue_data(inst)
    rtokens, redges, _ = _red_data(inst)
    all_labels = [L.blue(a, b) for (a, b) in bverts] + [L.parse(t) for t in rtokens]
    all_edges = [
        (L.blue(*u).token(), L.blue(*v).token(), w) for (u, v, w) in bedges
    ] + [(k[0], k[1], w) for k, (_, _, w) in sorted(redges.items())]
    g = WeightedAnchoredGraph.from_labels(all_labels, all_edges, anchor_order(n, m))

    idx = g.token_index()
    blue_ids = {idx[L.blue(a, b).token()] for (a, b) in bverts}
    blue = WeightedAnchoredGraph(
        {v: g.labels_by_id[v] for v in sorted(blue_ids)},
        {k: w for k, w in g.weights.items() if k[0] in blue_ids and k[1] in blue_ids},
        tuple(a for a in g.anchors if a in blue_ids),
    )
    red_ids = set(g.labels_by_id) - blue_ids
    red = WeightedAnchoredGraph(
        {v: g.labels_by_id[v] for v in sorted(red_ids)},
        {k: w for k, w in g.weights.items() if k[0] in red_ids and k[1] in red_ids},
        tuple(a for a in g.anchors if a in red_ids),
    )
    params = CrParams.of(n, m, W=g.total_weight())
    emb = blue_anchored_embedding(blue, n, m)
    regions = _region_map(inst, emb, g)
    return CrInstance(inst, g, blue, red, params, regions, _red_paths(inst))


# ----------------------------------------------------------------------
# Sidecar metadata
# ----------------------------------------------------------------------


def serialize_meta(ci: CrInstance) -> str:
    p = ci.params
    lines = ["meta cr 1"]
    for name in ("n", "m", "w", "k", "W", "unw_total"):
        lines.append(f"param {name} {getattr(p, name)}")
    for i in sorted(ci.regions.columns):
        for side in ("T", "F"):
            for key in ci.regions.columns[i][side]:
                lines.append(f"column {i} {side} {','.join(key)}")
    for j in sorted(ci.regions.rows_lower):
        for key in ci.regions.rows_lower[j]:
            lines.append(f"row L {j} {','.join(key)}")
        for key in ci.regions.rows_upper[j]:
            lines.append(f"row U {j} {','.join(key)}")
    for key in ci.regions.row_enf:
        lines.append(f"row enf {','.join(key)}")
    for j in sorted(ci.regions.boundary_edges):
        for (u, v) in ci.regions.boundary_edges[j]:
            lines.append(f"bedge {j} {u} {v}")
    for name, es in ci.red_paths.all_paths():
        for (u, v) in es:
            lines.append(f"path {name} {u} {v}")
    return "\n".join(lines) + "\n"
