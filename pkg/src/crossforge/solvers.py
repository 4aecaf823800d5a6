"""Toy-scale exact oracles for anchored crossing number and 1-planarity.

Both oracles enumerate crossing specifications (sets of independent edge
pairs), planarize each candidate by replacing crossings with degree-4
dummy vertices, and test realizability with the anchored-planarity check.
The search is restricted to good drawings: two edges cross at most once
and adjacent edges do not cross, which is sound for minima.

A second, independent oracle decides anchored planarity of small connected
graphs by enumerating rotation systems outright; it exists to cross-check
the apex-augmentation reduction.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations, product
from typing import Optional

from . import labels as L
from .embedding import CombinatorialEmbedding, EmbeddingError, is_anchored_planar
from .graph import WeightedAnchoredGraph, edge_key

EDGE_LIMIT_CR = 10
EDGE_LIMIT_1P = 14


class SolverError(ValueError):
    pass


@dataclass
class Planarization:
    """A crossing specification together with its derived graph."""

    base: WeightedAnchoredGraph
    pairs: tuple[tuple[tuple[int, int], tuple[int, int]], ...]
    orders: dict[tuple[int, int], tuple[int, ...]]  # edge -> dummy order
    derived: WeightedAnchoredGraph

    def cost(self) -> int:
        return sum(self.base.weights[a] * self.base.weights[b] for (a, b) in self.pairs)


def _independent_pairs(g: WeightedAnchoredGraph):
    es = sorted(g.weights)
    out = []
    for a, b in combinations(es, 2):
        if set(a) & set(b):
            continue
        out.append((a, b))
    return out


def _derived_graph(
    g: WeightedAnchoredGraph,
    pairs: tuple[tuple[tuple[int, int], tuple[int, int]], ...],
    orders: dict[tuple[int, int], tuple[int, ...]],
) -> WeightedAnchoredGraph:
    """Replace each crossing by a dummy vertex, splitting both edges."""
    labels_ = [g.labels_by_id[v] for v in sorted(g.labels_by_id)]
    dummy_tokens = {}
    for idx, (a, b) in enumerate(pairs):
        lbl = L.VertexLabel(L.Kind.PLAIN, None, f"x:{idx}")
        labels_.append(lbl)
        dummy_tokens[idx] = lbl.token()
    edges = []
    crossed = {e for pair in pairs for e in pair}
    for e in sorted(g.weights):
        if e not in crossed:
            edges.append((g.token(e[0]), g.token(e[1]), 1))
            continue
        chain = [g.token(e[0])]
        for idx in orders[e]:
            chain.append(dummy_tokens[idx])
        chain.append(g.token(e[1]))
        for t in range(len(chain) - 1):
            edges.append((chain[t], chain[t + 1], 1))
    return WeightedAnchoredGraph.from_labels(labels_, edges, [g.token(a) for a in g.anchors])


def _spec_orders(pairs):
    """All ways to order each edge's dummies along the edge."""
    per_edge: dict[tuple[int, int], list[int]] = {}
    for idx, (a, b) in enumerate(pairs):
        per_edge.setdefault(a, []).append(idx)
        per_edge.setdefault(b, []).append(idx)
    keys = sorted(per_edge)
    for perm_choice in product(*(list(permutations(per_edge[k])) for k in keys)):
        yield dict(zip(keys, perm_choice))


def solve_anchored_crossing_number(
    g: WeightedAnchoredGraph, max_weighted: Optional[int] = None
) -> Optional[tuple[int, Planarization]]:
    """Exact anchored crossing number with a realizing planarization, or
    None when every drawing exceeds ``max_weighted``.
    """
    if g.n_edges > EDGE_LIMIT_CR:
        raise SolverError(f"{g.n_edges} edges exceed the oracle guard ({EDGE_LIMIT_CR})")
    pairs = _independent_pairs(g)
    cost_of = {p: g.weights[p[0]] * g.weights[p[1]] for p in pairs}

    # Best-first over crossing-pair sets: pop the cheapest spec, test its
    # planarization, extend with higher-index pairs.  The first realizable
    # spec is a minimum because costs are nonnegative.
    import heapq

    heap: list[tuple[int, int, tuple[int, ...]]] = [(0, 0, ())]
    budget = 500_000
    while heap:
        budget -= 1
        if budget < 0:
            raise SolverError("anchored crossing-number search budget exhausted")
        cost, nxt, spec_idx = heapq.heappop(heap)
        if max_weighted is not None and cost > max_weighted:
            return None
        spec = tuple(pairs[i] for i in spec_idx)
        for orders in _spec_orders(spec):
            derived = _derived_graph(g, spec, orders)
            if is_anchored_planar(derived):
                return cost, Planarization(g, spec, orders, derived)
        for i in range(nxt, len(pairs)):
            heapq.heappush(heap, (cost + cost_of[pairs[i]], i + 1, spec_idx + (i,)))
    return None


def solve_one_planarity(
    g: WeightedAnchoredGraph, anchored: bool = True
) -> tuple[bool, Optional[Planarization]]:
    """Is there an (anchored) drawing with every edge crossed at most once?

    Searches matchings on independent edge pairs, smallest first.
    """
    if g.n_edges > EDGE_LIMIT_1P:
        raise SolverError(f"{g.n_edges} edges exceed the oracle guard ({EDGE_LIMIT_1P})")
    work = g if anchored else WeightedAnchoredGraph(
        dict(g.labels_by_id), dict(g.weights), ()
    )
    pairs = _independent_pairs(work)

    def feasible(spec) -> Optional[Planarization]:
        orders = {e: (idx,) for idx, pair in enumerate(spec) for e in pair}
        derived = _derived_graph(work, tuple(spec), orders)
        if is_anchored_planar(derived):
            return Planarization(work, tuple(spec), orders, derived)
        return None

    # matchings by increasing size
    for size in range(0, len(pairs) + 1):
        found_any = False
        for spec in _matchings(pairs, size):
            found_any = True
            pl = feasible(spec)
            if pl is not None:
                return True, pl
        if not found_any:
            break
    return False, None


def _matchings(pairs, size, start=0, used=None):
    if used is None:
        used = set()
    if size == 0:
        yield []
        return
    for i in range(start, len(pairs)):
        a, b = pairs[i]
        if a in used or b in used:
            continue
        used.add(a)
        used.add(b)
        for rest in _matchings(pairs, size - 1, i + 1, used):
            yield [pairs[i]] + rest
        used.discard(a)
        used.discard(b)


# ----------------------------------------------------------------------
# Independent anchored-planarity oracle (rotation-system enumeration)
# ----------------------------------------------------------------------


def anchored_planar_by_rotation_enumeration(g: WeightedAnchoredGraph) -> bool:
    """Decide anchored planarity of a small connected graph by brute force
    over rotation systems: some genus-0 rotation system must have a face
    whose walk carries the anchors in the prescribed cyclic order (either
    orientation), each anchor realized by one boundary visit.
    """
    if g.n_edges > 10:
        raise SolverError("rotation enumeration is limited to 10 edges")
    adj = g.adjacency()
    if not _connected(adj):
        raise SolverError("rotation enumeration needs a connected graph")
    verts = sorted(adj)
    choice_lists = []
    for v in verts:
        nbrs = sorted(adj[v])
        if len(nbrs) <= 2:
            choice_lists.append([tuple(nbrs)])
        else:
            first = nbrs[0]
            choice_lists.append([(first,) + p for p in permutations(nbrs[1:])])
    for rots in product(*choice_lists):
        rotation = dict(zip(verts, rots))
        try:
            emb = CombinatorialEmbedding.from_rotation(g, rotation)
        except EmbeddingError:
            continue  # positive genus
        for face in emb.faces:
            walk = [u for (u, _) in face]
            if _has_cyclic_subsequence(walk, list(g.anchors)) or _has_cyclic_subsequence(
                walk, list(reversed(g.anchors))
            ):
                return True
    return False


def _connected(adj) -> bool:
    verts = list(adj)
    if not verts:
        return True
    seen = {verts[0]}
    stack = [verts[0]]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(verts)


def _has_cyclic_subsequence(walk: list[int], target: list[int]) -> bool:
    """Can the cyclic walk visit the target vertices in cyclic order?"""
    if not target:
        return True
    n = len(walk)
    starts = [i for i, v in enumerate(walk) if v == target[0]]
    for s in starts:
        # scan the walk once around from s for target[1:]
        pos = 0
        need = target[1:]
        for step in range(1, n):
            if pos < len(need) and walk[(s + step) % n] == need[pos]:
                pos += 1
        if pos == len(need):
            return True
    return False
