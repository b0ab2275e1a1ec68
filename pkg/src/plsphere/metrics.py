"""Cell distances between vertices.

The k-cell distance between two vertices is the least number of k-cells in a
chain whose consecutive members share a (k-1)-cell, whose first cell holds
one vertex and whose last cell holds the other. Coincident vertices are at
distance 0; for k = 1 this is ordinary graph distance on the 1-skeleton.

For k >= 2 it is symmetric but not a metric: two chains meeting only at a
vertex do not join into one chain, so the triangle inequality can fail. In a
hexagon coned from its centre both rims are one triangle from the centre but
three triangles apart.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .complex import Complex
from .errors import BadDimension, VertexNotInComplex

INF = math.inf


@dataclass(frozen=True)
class DistanceField:
    origin: int
    k: int
    dist: dict

    def __getitem__(self, v):
        return self.dist[v]

    def max_finite(self):
        return max((d for d in self.dist.values() if d != INF), default=0)


def _check(K: Complex, k: int, *vertices):
    if not 1 <= k <= K.top_dim:
        raise BadDimension(f"k={k} outside 1..{K.top_dim}")
    for v in vertices:
        if (v,) not in K:
            raise VertexNotInComplex(f"vertex {v} is not in the complex")


def _bfs(K: Complex, k: int, origin: int, target=None):
    adj = K.adjacency(k)
    dist = {origin: 0}
    level = sorted(c for c in K.cells(k) if origin in c)
    seen = set(level)
    depth = 1
    while level:
        for c in level:
            for v in c:
                if v not in dist:
                    dist[v] = depth
        if target is not None and target in dist:
            return dist
        nxt = []
        for c in level:
            for d in adj[c]:
                if d not in seen:
                    seen.add(d)
                    nxt.append(d)
        level = nxt
        depth += 1
    return dist


def k_cell_distance(K: Complex, k: int, x: int, y: int):
    """Distance from ``x`` to ``y`` counted in k-cells; ``math.inf`` if unreachable."""
    _check(K, k, x, y)
    if x == y:
        return 0
    return _bfs(K, k, x, target=y).get(y, INF)


def distance_field(K: Complex, k: int, origin: int) -> DistanceField:
    """k-cell distances from ``origin`` to every vertex, by one traversal."""
    _check(K, k, origin)
    reached = _bfs(K, k, origin)
    return DistanceField(origin, k, {v: reached.get(v, INF) for v in K.vertices})
