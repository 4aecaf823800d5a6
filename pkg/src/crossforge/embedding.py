"""Combinatorial embeddings: rotation systems, faces, duals, connectivity.

Rotation systems store, per vertex, the clockwise cyclic order of its
neighbours as they appear in a drawing.  Face walks follow
``next(u -> v) = (v, successor of u in the clockwise order at v)``, which
traverses every bounded face of a plane drawing counterclockwise.

Anchored graphs are handled by augmentation: a virtual boundary arc between
consecutive anchors (one virtual subdivider per arc, so no parallel edges
arise) realizes the disk boundary, and an apex vertex adjacent to every
anchor pins the cyclic order.  The graph is anchored-planar exactly when
the augmented graph is planar.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

import networkx as nx

from . import labels
from .graph import GraphError, WeightedAnchoredGraph, edge_key

DirectedEdge = tuple[int, int]
RotationSystem = dict[int, tuple[int, ...]]

INF = math.inf


class EmbeddingError(ValueError):
    pass


# ----------------------------------------------------------------------
# Planarity and connectivity tests
# ----------------------------------------------------------------------


def _nx_graph(g: WeightedAnchoredGraph) -> nx.Graph:
    G = nx.Graph()
    G.add_nodes_from(g.labels_by_id)
    G.add_edges_from(g.weights)
    return G


def is_planar(g: WeightedAnchoredGraph) -> bool:
    ok, _ = nx.check_planarity(_nx_graph(g), counterexample=False)
    return ok


def _augmented(g: WeightedAnchoredGraph) -> tuple[nx.Graph, list[int], int]:
    """g plus subdivided anchor-boundary arcs plus an apex vertex.

    Returns (graph, arc subdivider ids in cyclic order, apex id).
    """
    G = _nx_graph(g)
    base = max(g.labels_by_id, default=-1) + 1
    arcs = []
    a = g.anchors
    for i in range(len(a)):
        s = base + i
        arcs.append(s)
        G.add_edge(a[i], s)
        G.add_edge(s, a[(i + 1) % len(a)])
    apex = base + len(a)
    for v in a:
        G.add_edge(apex, v)
    return G, arcs, apex


def is_anchored_planar(g: WeightedAnchoredGraph) -> bool:
    """True iff g has a crossing-free drawing in a disk with its anchors on
    the boundary in the prescribed cyclic order (up to rotation/reflection).
    """
    if len(g.anchors) < 3:
        return is_planar(g)
    G, _, _ = _augmented(g)
    ok, _ = nx.check_planarity(G, counterexample=False)
    return ok


def connected_components(g: WeightedAnchoredGraph) -> list[set[int]]:
    return [set(c) for c in nx.connected_components(_nx_graph(g))]


def _articulation_free(adj: dict[int, list[int]], skip: Optional[int]) -> bool:
    """True iff adj minus vertex ``skip`` is connected with no cut vertex."""
    nodes = [v for v in adj if v != skip]
    if len(nodes) <= 2:
        return True
    root = nodes[0]
    disc: dict[int, int] = {}
    low: dict[int, int] = {}
    parent: dict[int, Optional[int]] = {root: None}
    timer = 0
    stack: list[tuple[int, int]] = [(root, 0)]
    disc[root] = low[root] = timer
    timer += 1
    root_children = 0
    order: list[int] = [root]
    it_pos = {root: 0}
    while stack:
        v, i = stack[-1]
        nbrs = adj[v]
        if i < len(nbrs):
            stack[-1] = (v, i + 1)
            w = nbrs[i]
            if w == skip or w == parent[v]:
                continue
            if w in disc:
                if disc[w] < low[v]:
                    low[v] = disc[w]
            else:
                parent[w] = v
                disc[w] = low[w] = timer
                timer += 1
                order.append(w)
                if v == root:
                    root_children += 1
                stack.append((w, 0))
        else:
            stack.pop()
            p = parent[v]
            if p is not None:
                if low[v] < low[p]:
                    low[p] = low[v]
                if p != root and low[v] >= disc[p]:
                    return False
    if len(disc) != len(nodes):
        return False  # disconnected
    return root_children <= 1


def is_three_connected(g: WeightedAnchoredGraph) -> bool:
    """No vertex cut of size <= 2.  Graphs on < 4 vertices are declared
    not 3-connected.
    """
    return find_small_cut(g) is None


def find_small_cut(g: WeightedAnchoredGraph) -> Optional[tuple[int, ...]]:
    """A vertex cut of size <= 2 (or a size witness) if one exists.

    Returns () when the graph is too small or disconnected, (v,) for a cut
    vertex, (a, b) for a 2-cut; None when 3-connected.
    """
    if g.n_vertices < 4:
        return ()
    adj = g.adjacency()
    deg_min_v = min(adj, key=lambda v: (len(adj[v]), v))
    if len(adj[deg_min_v]) < 3:
        # Its (<=2) neighbours form a cut, or the graph is tiny/disconnected.
        return tuple(sorted(adj[deg_min_v]))
    if not _articulation_free(adj, None):
        for v in sorted(adj):
            if not _articulation_free_except(adj, None, v):
                return (v,)
    for a in sorted(adj):
        if not _articulation_free(adj, a):
            for b in sorted(adj):
                if b != a and not _articulation_free_except(adj, a, b):
                    return tuple(sorted((a, b)))
    return None


def _articulation_free_except(adj: dict[int, list[int]], skip: Optional[int], b: int) -> bool:
    """True iff removing {skip, b} leaves the graph connected."""
    nodes = [v for v in adj if v != skip and v != b]
    if not nodes:
        return True
    seen = {nodes[0]}
    stack = [nodes[0]]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w == skip or w == b or w in seen:
                continue
            seen.add(w)
            stack.append(w)
    return len(seen) == len(nodes)


# ----------------------------------------------------------------------
# Combinatorial embeddings
# ----------------------------------------------------------------------


@dataclass
class CombinatorialEmbedding:
    """A rotation system plus its face structure.

    ``rotation`` may mention virtual vertices/edges (anchored boundary
    arcs); ``graph`` holds only the real graph.  Faces are walks of
    directed edges; every directed edge lies on exactly one face.
    """

    graph: WeightedAnchoredGraph
    rotation: RotationSystem
    virtual_vertices: dict[int, str] = field(default_factory=dict)
    faces: list[tuple[DirectedEdge, ...]] = field(default_factory=list)
    outer_face: int = -1
    _face_of: dict[DirectedEdge, int] = field(default_factory=dict, repr=False)

    # -- construction --------------------------------------------------

    @staticmethod
    def from_rotation(
        graph: WeightedAnchoredGraph,
        rotation: RotationSystem,
        virtual_vertices: Optional[dict[int, str]] = None,
        outer_face_edge: Optional[DirectedEdge] = None,
    ) -> "CombinatorialEmbedding":
        emb = CombinatorialEmbedding(graph, rotation, dict(virtual_vertices or {}))
        emb._traverse_faces()
        emb._check_euler()
        if outer_face_edge is not None:
            emb.outer_face = emb._face_of[outer_face_edge]
        else:
            emb.outer_face = max(range(len(emb.faces)), key=lambda i: (len(emb.faces[i]), -i))
        return emb

    def _traverse_faces(self) -> None:
        succ: dict[int, dict[int, int]] = {}
        for v, order in self.rotation.items():
            if len(set(order)) != len(order):
                raise EmbeddingError(f"repeated neighbour in rotation at {v}")
            succ[v] = {order[i]: order[(i + 1) % len(order)] for i in range(len(order))}
        darts: set[DirectedEdge] = set()
        for v, order in self.rotation.items():
            for u in order:
                if v not in self.rotation.get(u, ()):
                    raise EmbeddingError(f"asymmetric rotation: {u} missing {v}")
                darts.add((v, u))
        self.faces = []
        self._face_of = {}
        remaining = set(darts)
        while remaining:
            start = min(remaining)
            walk = []
            cur = start
            while True:
                walk.append(cur)
                remaining.discard(cur)
                self._face_of[cur] = len(self.faces)
                u, v = cur
                cur = (v, succ[v][u])
                if cur == start:
                    break
            self.faces.append(tuple(walk))

    def _check_euler(self) -> None:
        verts = set(self.rotation)
        edges = {edge_key(u, v) for u, v in self._face_of}
        G = nx.Graph()
        G.add_nodes_from(verts)
        G.add_edges_from(edges)
        c = nx.number_connected_components(G)
        v_, e_, f_ = len(verts), len(edges), len(self.faces)
        if v_ - e_ + f_ != 1 + c:
            raise EmbeddingError(
                f"rotation system is not planar: V-E+F = {v_}-{e_}+{f_} != 1+{c}"
            )

    # -- queries ---------------------------------------------------------

    def face_of(self, dart: DirectedEdge) -> int:
        return self._face_of[dart]

    def incident_faces(self, u: int, v: int) -> tuple[int, int]:
        return (self._face_of[(u, v)], self._face_of[(v, u)])

    def face_vertices(self, i: int) -> list[int]:
        return [u for (u, _) in self.faces[i]]

    def _vertex_token(self, v: int) -> str:
        if v in self.virtual_vertices:
            return self.virtual_vertices[v]
        return self.graph.token(v)

    def face_key(self, i: int) -> tuple[str, ...]:
        """Canonical face name: sorted multiset of boundary vertex tokens."""
        return tuple(sorted(self._vertex_token(u) for (u, _) in self.faces[i]))

    def face_by_named_corners(self, tokens: Iterable[str]) -> int:
        """The unique inner face whose named (non-internal) boundary vertices
        are exactly ``tokens``; raises if absent or ambiguous.
        """
        want = frozenset(tokens)
        hits = []
        for i in range(len(self.faces)):
            if i == self.outer_face:
                continue
            named = {
                self._vertex_token(u)
                for (u, _) in self.faces[i]
                if not self._vertex_token(u).startswith(("i:", "sub:", "~"))
            }
            if named == want:
                hits.append(i)
        if len(hits) != 1:
            raise EmbeddingError(f"face lookup for {sorted(want)}: {len(hits)} matches")
        return hits[0]

    def rotation_of_real(self) -> RotationSystem:
        """The rotation system restricted to the real graph."""
        real = set(self.graph.labels_by_id)
        out: RotationSystem = {}
        for v in self.graph.labels_by_id:
            out[v] = tuple(u for u in self.rotation.get(v, ()) if u in real)
        return out


def rotation_from_positions(
    adjacency: dict[int, list[int]],
    direction: Callable[[int, int], tuple],
) -> RotationSystem:
    """Clockwise rotation system from initial edge directions."""
    from .geometry import sort_clockwise

    rot: RotationSystem = {}
    for v, nbrs in adjacency.items():
        if not nbrs:
            rot[v] = ()
            continue
        rot[v] = tuple(sort_clockwise([(u, direction(v, u)) for u in nbrs]))
    return rot


def compute_embedding(g: WeightedAnchoredGraph, anchored: bool = False) -> CombinatorialEmbedding:
    """A combinatorial embedding of g (networkx LR planarity under the hood).

    With ``anchored=True`` the embedding includes the virtual boundary arcs
    and its outer face carries all anchors in cyclic order.
    """
    if not anchored:
        ok, emb = nx.check_planarity(_nx_graph(g), counterexample=False)
        if not ok:
            raise EmbeddingError("not planar")
        rot = {v: tuple(emb.neighbors_cw_order(v)) for v in g.labels_by_id}
        for v in g.labels_by_id:
            rot.setdefault(v, ())
        return CombinatorialEmbedding.from_rotation(g, rot)

    if len(g.anchors) < 3:
        raise EmbeddingError("anchored embedding needs >= 3 anchors")
    G, arcs, apex = _augmented(g)
    ok, nxemb = nx.check_planarity(G, counterexample=False)
    if not ok:
        raise EmbeddingError("not planar")
    rot_aug: RotationSystem = {v: tuple(nxemb.neighbors_cw_order(v)) for v in G.nodes}
    # Faces of the augmented embedding that touch the apex: their non-apex
    # darts all land on the merged outer face once the apex is stripped.
    aug = CombinatorialEmbedding(g, rot_aug)
    aug._traverse_faces()
    outer_darts: set[DirectedEdge] = set()
    for walk in aug.faces:
        if any(apex in dart for dart in walk):
            outer_darts.update(d for d in walk if apex not in d)
    rot: RotationSystem = {
        v: tuple(u for u in rot_aug[v] if u != apex) for v in G.nodes if v != apex
    }
    virt = {s: f"~arc:{i}" for i, s in enumerate(arcs)}
    emb = CombinatorialEmbedding.from_rotation(g, rot, virt)
    outer_ids = {emb.face_of(d) for d in outer_darts}
    if len(outer_ids) != 1:
        raise EmbeddingError("outer face of anchored embedding is not unique")
    emb.outer_face = outer_ids.pop()
    return emb


def extract_rotation_system(emb: CombinatorialEmbedding) -> RotationSystem:
    """The clockwise rotation system of an embedding, real edges only."""
    return emb.rotation_of_real()


# ----------------------------------------------------------------------
# Dual graphs
# ----------------------------------------------------------------------


@dataclass
class DualGraph:
    """One node per face, one dual edge per primal edge."""

    embedding: CombinatorialEmbedding
    edges: list[tuple[int, int, tuple[int, int]]]  # (face, face, primal edge)

    @staticmethod
    def of(emb: CombinatorialEmbedding) -> "DualGraph":
        seen = set()
        out = []
        for (u, v) in emb._face_of:
            k = edge_key(u, v)
            if k in seen:
                continue
            seen.add(k)
            f1, f2 = emb.incident_faces(u, v)
            out.append((f1, f2, k))
        return DualGraph(emb, out)


def dual_distance(
    emb: CombinatorialEmbedding,
    f: int,
    f2: int,
    forbidden_edges: Iterable[tuple[int, int]] = (),
    forbidden_faces: Iterable[int] = (),
) -> float:
    """Minimum number of primal edges a curve from face f to face f2 must
    cross; inf when the faces are separated.  Forbidden edges cannot be
    crossed; forbidden faces cannot be entered.
    """
    nf = len(emb.faces)
    if not (0 <= f < nf) or not (0 <= f2 < nf):
        raise EmbeddingError("unknown face id")
    banned_e = {edge_key(u, v) for (u, v) in forbidden_edges}
    banned_f = set(forbidden_faces)
    if f == f2:
        return 0
    if f in banned_f or f2 in banned_f:
        return INF
    adj: dict[int, list[int]] = {i: [] for i in range(nf)}
    for (g1, g2, k) in DualGraph.of(emb).edges:
        if k in banned_e:
            continue
        adj[g1].append(g2)
        adj[g2].append(g1)
    from collections import deque

    dist = {f: 0}
    q = deque([f])
    while q:
        x = q.popleft()
        if x == f2:
            return dist[x]
        for y in adj[x]:
            if y in banned_f or y in dist:
                continue
            dist[y] = dist[x] + 1
            q.append(y)
    return INF
