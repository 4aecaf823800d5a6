"""Weighted anchored graphs and the ``.agr`` text format.

A graph is simple (no loops, no parallel edges), weights are positive
integers, and the anchor set carries a clockwise cyclic order.  Instances
are treated as immutable after construction; operations return new graphs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Optional

from . import labels
from .labels import VertexLabel


class GraphError(ValueError):
    pass


def edge_key(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u <= v else (v, u)


@dataclass
class WeightedAnchoredGraph:
    labels_by_id: dict[int, VertexLabel] = field(default_factory=dict)
    weights: dict[tuple[int, int], int] = field(default_factory=dict)
    anchors: tuple[int, ...] = ()

    # ------------------------------------------------------------------
    # Construction
    # ------------------------------------------------------------------

    @staticmethod
    def from_labels(
        vertex_labels: Iterable[VertexLabel],
        edges: Iterable[tuple[str, str, int]],
        anchors: Iterable[str],
    ) -> "WeightedAnchoredGraph":
        """Build a graph with ids assigned in label-lexicographic order."""
        lbls = sorted(set(vertex_labels), key=lambda l: l.token())
        tokens = [l.token() for l in lbls]
        if len(set(tokens)) != len(tokens):
            raise GraphError("duplicate vertex label")
        by_token = {l.token(): i for i, l in enumerate(lbls)}
        g = WeightedAnchoredGraph({i: l for i, l in enumerate(lbls)})
        for ut, vt, w in edges:
            g._add_edge(by_token[ut], by_token[vt], w)
        g.anchors = tuple(by_token[t] for t in anchors)
        g.validate()
        return g

    def _add_edge(self, u: int, v: int, w: int) -> None:
        if u == v:
            raise GraphError(f"self-loop at vertex {u}")
        k = edge_key(u, v)
        if k in self.weights:
            raise GraphError(f"duplicate edge {k}")
        if w < 1:
            raise GraphError(f"non-positive weight on edge {k}")
        self.weights[k] = w

    def validate(self) -> None:
        for (u, v) in self.weights:
            if u not in self.labels_by_id or v not in self.labels_by_id:
                raise GraphError(f"edge ({u},{v}) references unknown vertex")
        if len(set(self.anchors)) != len(self.anchors):
            raise GraphError("repeated anchor")
        for a in self.anchors:
            if a not in self.labels_by_id:
                raise GraphError(f"anchor {a} is not a vertex")

    # ------------------------------------------------------------------
    # Queries
    # ------------------------------------------------------------------

    @property
    def n_vertices(self) -> int:
        return len(self.labels_by_id)

    @property
    def n_edges(self) -> int:
        return len(self.weights)

    def vertices(self) -> Iterator[int]:
        return iter(self.labels_by_id)

    def edges(self) -> Iterator[tuple[int, int]]:
        return iter(self.weights)

    def label(self, v: int) -> VertexLabel:
        return self.labels_by_id[v]

    def token(self, v: int) -> str:
        return self.labels_by_id[v].token()

    def id_of(self, token: str) -> int:
        for v, l in self.labels_by_id.items():
            if l.token() == token:
                return v
        raise KeyError(token)

    def token_index(self) -> dict[str, int]:
        return {l.token(): v for v, l in self.labels_by_id.items()}

    def adjacency(self) -> dict[int, list[int]]:
        adj: dict[int, list[int]] = {v: [] for v in self.labels_by_id}
        for (u, v) in self.weights:
            adj[u].append(v)
            adj[v].append(u)
        return adj

    def degree(self, v: int) -> int:
        return sum(1 for (a, b) in self.weights if a == v or b == v)

    def weight(self, u: int, v: int) -> int:
        return self.weights[edge_key(u, v)]

    def total_weight(self) -> int:
        return sum(self.weights.values())

    def max_degree(self) -> int:
        deg: dict[int, int] = {v: 0 for v in self.labels_by_id}
        for (u, v) in self.weights:
            deg[u] += 1
            deg[v] += 1
        return max(deg.values()) if deg else 0

    def is_unweighted(self) -> bool:
        return all(w == 1 for w in self.weights.values())

    def edge_tokens(self, u: int, v: int) -> tuple[str, str]:
        return (self.token(u), self.token(v))

    def anchor_cycle_pairs(self) -> list[tuple[int, int]]:
        """Consecutive anchor pairs in cyclic order."""
        a = self.anchors
        return [(a[i], a[(i + 1) % len(a)]) for i in range(len(a))]

    def copy(self) -> "WeightedAnchoredGraph":
        return WeightedAnchoredGraph(
            dict(self.labels_by_id), dict(self.weights), tuple(self.anchors)
        )


# ----------------------------------------------------------------------
# .agr serialization
# ----------------------------------------------------------------------


def serialize_agr(g: WeightedAnchoredGraph) -> str:
    lines = ["agr 1"]
    for v in sorted(g.labels_by_id):
        lines.append(f"v {v} {g.token(v)}")
    lines.append("anchors " + " ".join(str(a) for a in g.anchors))
    for (u, v) in sorted(g.weights):
        lines.append(f"e {u} {v} {g.weights[(u, v)]}")
    return "\n".join(lines) + "\n"


def parse_agr(text: str) -> WeightedAnchoredGraph:
    g = WeightedAnchoredGraph()
    anchors: Optional[tuple[int, ...]] = None
    lines = text.splitlines()
    if not lines or lines[0].strip() != "agr 1":
        raise GraphError("line 1: expected header 'agr 1'")
    for no, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        try:
            if parts[0] == "v":
                if len(parts) != 3:
                    raise GraphError("malformed vertex line")
                vid = int(parts[1])
                if vid < 0:
                    raise GraphError("negative vertex id")
                if vid in g.labels_by_id:
                    raise GraphError(f"duplicate vertex id {vid}")
                g.labels_by_id[vid] = labels.parse(parts[2])
            elif parts[0] == "e":
                if len(parts) != 4:
                    raise GraphError("malformed edge line")
                u, v, w = int(parts[1]), int(parts[2]), int(parts[3])
                if u not in g.labels_by_id or v not in g.labels_by_id:
                    raise GraphError(f"edge ({u},{v}) references unknown vertex")
                g._add_edge(u, v, w)
            elif parts[0] == "anchors":
                if anchors is not None:
                    raise GraphError("second anchors line")
                anchors = tuple(int(p) for p in parts[1:])
                if len(set(anchors)) != len(anchors):
                    raise GraphError("repeated anchor")
                for a in anchors:
                    if a not in g.labels_by_id:
                        raise GraphError(f"anchor {a} is not a vertex")
            else:
                raise GraphError(f"unknown record '{parts[0]}'")
        except GraphError as exc:
            raise GraphError(f"line {no}: {exc}") from None
        except ValueError:
            raise GraphError(f"line {no}: malformed integer") from None
    if anchors is None:
        raise GraphError("missing anchors line")
    g.anchors = anchors
    g.validate()
    return g


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
