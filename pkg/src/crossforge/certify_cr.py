"""Certificate drawings for crossing-number instances and their budgets.

Given a satisfying assignment, the generator draws the blue grid at its
canonical coordinates and routes each red path through its assigned
regions: variable strands inside their truth column, clause paths through
the lower row, across the designated light blue edge, then the upper row.
The budget checker recomputes every per-path crossing total from an exact
crossing report and compares against the closed forms.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import labels as L
from .drawing import Crossing, CrossingReport, Drawing, find_crossings
from .graph import WeightedAnchoredGraph, edge_key
from .reduce_cr import CrInstance, anchor_positions
from .sat import Assignment, evaluate, satisfying_variable

F = Fraction

X_LANE_A = F(5, 16)
X_LANE_B = F(11, 16)


class CertificateError(ValueError):
    pass


class BudgetViolation(ValueError):
    def __init__(self, path: str, quantity: str, expected: int, actual: int):
        self.path = path
        self.quantity = quantity
        self.expected = expected
        self.actual = actual
        self.delta = actual - expected
        super().__init__(
            f"path {path}: {quantity} = {actual}, expected {expected} (delta {self.delta:+d})"
        )


@dataclass
class PathBudget:
    name: str
    weighted: int
    unweighted: int
    expected_weighted: int
    expected_unweighted: int

    @property
    def ok(self) -> bool:
        return self.weighted == self.expected_weighted and self.unweighted == self.expected_unweighted


@dataclass
class BudgetReport:
    paths: list[PathBudget]
    monochromatic_weighted: int
    monochromatic_count: int
    weighted_total: int
    unweighted_total: int
    expected_total: int

    def lines(self) -> list[str]:
        out = []
        for p in self.paths:
            status = "ok" if p.ok else "FAIL"
            out.append(
                f"{p.name:>6}  weighted {p.weighted:>14} (expect {p.expected_weighted:>14})"
                f"  unweighted {p.unweighted:>3} (expect {p.expected_unweighted:>3})  {status}"
            )
        out.append(
            f" total  weighted {self.weighted_total:>14} (expect {self.expected_total:>14})"
            f"  unweighted {self.unweighted_total:>3}  monochromatic {self.monochromatic_count}"
        )
        return out


# ----------------------------------------------------------------------
# Drawing generation
# ----------------------------------------------------------------------


def _strand_x(i: int, truth: bool) -> tuple[Fraction, Fraction]:
    base = 2 * i - 1 if truth else 2 * i
    return (base + X_LANE_A, base + X_LANE_B)


def generate_cr_certificate(ci: CrInstance, a: Assignment) -> Drawing:
    """The anchored drawing realizing exactly k weighted crossings."""
    inst = ci.cnf
    if not evaluate(inst, a):
        raise CertificateError("assignment does not satisfy the formula")
    n, m = inst.n, inst.m
    W, H = 2 * n + 2, 2 * m + 3
    t = {j: satisfying_variable(inst, a, j) for j in range(1, m + 1)}

    idx = ci.graph.token_index()
    pos: dict[int, tuple[Fraction, Fraction]] = {}
    for v in ci.blue.labels_by_id:
        x, y = L.parse(ci.graph.token(v)).coords
        pos[v] = (F(x), F(y))
    for tok, p in anchor_positions(n, m).items():
        pos[idx[tok]] = p

    def red_y(alpha: int, j: int) -> Fraction:
        if j == m + 1:
            return 2 * m + F(3, 2)
        return 2 * j - F(1, 2) if alpha <= 2 * t[j] - 1 else 2 * j + F(1, 2)

    for i in range(1, n + 1):
        xa, xb = _strand_x(i, a[i - 1])
        for j in range(1, m + 2):
            pos[idx[f"r({2 * i - 1},{j})"]] = (xa, red_y(2 * i - 1, j))
            pos[idx[f"r({2 * i},{j})"]] = (xb, red_y(2 * i, j))

    d = Drawing(positions=pos)
    d.boundary = ((F(0), F(0)), (F(W), F(0)), (F(W), F(H)), (F(0), F(H)))
    for (u, v) in ci.graph.weights:
        d.set_route(u, v, (pos[u], pos[v]))
    return d


def colors_of(ci: CrInstance) -> dict[tuple[int, int], str]:
    return ci.colors()


# ----------------------------------------------------------------------
# Budgets
# ----------------------------------------------------------------------


def expected_budgets(ci: CrInstance) -> dict[str, tuple[int, int]]:
    """path name -> (weighted, unweighted) closed forms."""
    n, m, w = ci.params.n, ci.params.m, ci.params.w
    out = {}
    for i in range(1, n + 1):
        out[f"V{i}"] = (2 * (2 * m + 2) * w**3, 4 * m + 4)
    for j in range(1, m + 1):
        out[f"H{j}"] = ((2 * n + 2) * w**3 - (w**2 + w - 1), 2 * n + 2)
    out["Henf"] = ((2 * n + 1) * w**3, 2 * n + 1)
    return out


def check_budgets(
    d: Drawing, ci: CrInstance, report: Optional[CrossingReport] = None
) -> BudgetReport:
    """Verify every per-path crossing equality of a certificate drawing.

    Raises BudgetViolation on the first mismatched path (monochromatic
    crossings count as a mismatch of the pseudo-path 'mono').
    """
    if report is None:
        report = find_crossings(d, ci.graph, colors=colors_of(ci))
    idx = ci.graph.token_index()
    edge_to_path: dict[tuple[int, int], str] = {}
    for name, es in ci.red_paths.all_paths():
        for (ut, vt) in es:
            edge_to_path[edge_key(idx[ut], idx[vt])] = name

    per_w: dict[str, int] = {}
    per_c: dict[str, int] = {}
    mono_w = mono_c = 0
    for c in report.crossings:
        e1, e2 = c.edges
        p1, p2 = edge_to_path.get(e1), edge_to_path.get(e2)
        red_paths = [p for p in (p1, p2) if p is not None]
        if len(red_paths) == 1:
            name = red_paths[0]
            wprod = ci.graph.weights[e1] * ci.graph.weights[e2]
            per_w[name] = per_w.get(name, 0) + wprod
            per_c[name] = per_c.get(name, 0) + 1
        else:
            # red-red or blue-blue
            mono_w += ci.graph.weights[e1] * ci.graph.weights[e2]
            mono_c += 1

    expected = expected_budgets(ci)
    paths = []
    for name, (ew, ec) in expected.items():
        paths.append(PathBudget(name, per_w.get(name, 0), per_c.get(name, 0), ew, ec))
    rep = BudgetReport(
        paths=paths,
        monochromatic_weighted=mono_w,
        monochromatic_count=mono_c,
        weighted_total=report.weighted_total,
        unweighted_total=report.unweighted_total,
        expected_total=ci.params.k,
    )
    if mono_c:
        raise BudgetViolation("mono", "count", 0, mono_c)
    for p in paths:
        if p.weighted != p.expected_weighted:
            raise BudgetViolation(p.name, "weighted", p.expected_weighted, p.weighted)
        if p.unweighted != p.expected_unweighted:
            raise BudgetViolation(p.name, "unweighted", p.expected_unweighted, p.unweighted)
    if rep.weighted_total != ci.params.k:
        raise BudgetViolation("total", "weighted", ci.params.k, rep.weighted_total)
    return rep


# ----------------------------------------------------------------------
# Near-planar extension
# ----------------------------------------------------------------------


def extend_to_near_planar(d: Drawing, np_inst) -> Drawing:
    """Extend a verified certificate drawing of G to a drawing of G'+rb.

    The cycle edges run along the old boundary rectangle (crossing
    nothing); rb is routed crossing each non-cycle edge at most once.
    """
    from .transforms import NearPlanarInstance

    assert isinstance(np_inst, NearPlanarInstance)
    ci = np_inst.source
    gp = np_inst.with_extra()
    ext = Drawing(positions=dict(d.positions), boundary=None)
    for (u, v), pts in d.routes.items():
        ext.routes[(u, v)] = pts

    W = F(2 * ci.params.n + 2)
    H = F(2 * ci.params.m + 3)
    corners = [(F(0), F(0)), (W, F(0)), (W, H), (F(0), H)]

    def boundary_route(p: tuple, q: tuple) -> tuple:
        # Walk clockwise (the anchor order direction) from p to q along the
        # rectangle, inserting corner bends.
        def param(pt):
            x, y = pt
            if y == 0:
                return (W - x)  # bottom traversed right-to-left
            if x == 0:
                return W + y  # left ascending
            if y == H:
                return W + H + x  # top left-to-right
            return 2 * W + H + (H - y)  # right descending

        cw_corners = [
            ((F(0), F(0)), W),
            ((F(0), H), W + H),
            ((W, H), 2 * W + H),
            ((W, F(0)), 2 * W + 2 * H),
        ]
        p1, p2 = param(p), param(q)
        total = 2 * W + 2 * H
        bends = []
        for c, cp in cw_corners:
            cpv = cp if cp > p1 else cp + total
            p2v = p2 if p2 > p1 else p2 + total
            if p1 < cpv < p2v:
                bends.append((cpv, c))
        return tuple([p] + [c for _, c in sorted(bends)] + [q])

    # Route each cycle edge forward along the clockwise anchor walk.
    for (u, v) in ci.graph.anchor_cycle_pairs():
        ext.set_route(u, v, boundary_route(ext.positions[u], ext.positions[v]))

    r, b = np_inst.extra_edge
    candidates = [None, F(1, 7), F(-1, 7), F(2, 9), F(-2, 9), F(3, 11), F(-3, 11)]
    last_err: Optional[Exception] = None
    for bend in candidates:
        pr, pb = ext.positions[r], ext.positions[b]
        if bend is None:
            route = (pr, pb)
        else:
            mid = (F(pr[0] + pb[0], 2) + bend, F(pr[1] + pb[1], 2) + bend / 3)
            route = (pr, mid, pb)
        ext.set_route(r, b, route)
        try:
            rep = find_crossings(ext, gp)
        except Exception as exc:  # degenerate geometry: try the next bend
            last_err = exc
            continue
        ek = edge_key(r, b)
        cyc = set(np_inst.cycle_edges)
        for c in rep.crossings:
            if any(edge_key(*e) in cyc for e in c.edges):
                raise CertificateError("cycle edge participates in a crossing")
        # rb may cross each edge at most once
        seen = {}
        for c in rep.crossings:
            if ek in c.edges:
                other = c.edges[0] if c.edges[1] == ek else c.edges[1]
                seen[other] = seen.get(other, 0) + 1
        if any(cnt > 1 for cnt in seen.values()):
            last_err = CertificateError("rb crosses an edge twice")
            continue
        return ext
    raise CertificateError(f"could not route rb in general position: {last_err}")
