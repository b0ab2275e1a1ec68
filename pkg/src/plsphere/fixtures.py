"""Small named triangulations used in tests, examples and the data files."""

from __future__ import annotations

from itertools import combinations

import numpy as np

from .complex import Complex, build_from_maximal_cells
from .subdivision import barycentric_subdivision, star_cell


def simplex_boundary(m: int, coords: bool = False) -> Complex:
    """Boundary of the (m+1)-simplex on vertices 0..m+1, a triangulated m-sphere."""
    vs = range(m + 2)
    cells = list(combinations(vs, m + 1))
    pts = None
    if coords:
        # standard simplex in E^(m+2) projected onto the hyperplane sum(x) = 1
        pts = {v: tuple(np.eye(m + 2)[v].tolist()) for v in vs}
    return build_from_maximal_cells(cells, pts)


def solid_simplex(m: int) -> Complex:
    return build_from_maximal_cells([tuple(range(m + 1))])


def torus7() -> Complex:
    """The 7-vertex, 14-triangle torus."""
    tris = []
    for i in range(7):
        tris.append((i, (i + 1) % 7, (i + 3) % 7))
        tris.append((i, (i + 2) % 7, (i + 3) % 7))
    return build_from_maximal_cells(tris)


def sphere_times_circle(levels: int = 3) -> Complex:
    """S^2 x S^1 as (boundary of a tetrahedron) x (cycle of ``levels`` segments).

    Each prism triangle x [i, i+1] is cut into three tetrahedra by the
    staircase rule; the global vertex order keeps neighbouring prisms
    compatible, and ``levels >= 3`` keeps the wrap-around simplicial.
    """
    if levels < 3:
        raise ValueError("need at least 3 levels")
    base = list(combinations(range(4), 3))

    def vid(v, i):
        return 4 * (i % levels) + v

    tets = []
    for i in range(levels):
        for a, b, c in base:
            tets.append((vid(a, i), vid(b, i), vid(c, i), vid(c, i + 1)))
            tets.append((vid(a, i), vid(b, i), vid(b, i + 1), vid(c, i + 1)))
            tets.append((vid(a, i), vid(a, i + 1), vid(b, i + 1), vid(c, i + 1)))
    return build_from_maximal_cells(tets)


def centroid_subdivided_simplex4() -> Complex:
    """Boundary of the 4-simplex with [1,2,3,4] coned from a new vertex 5."""
    K, _ = star_cell(simplex_boundary(3), (1, 2, 3, 4))
    return K


def barycentric_simplex4() -> Complex:
    """Full barycentric subdivision of the boundary of the 4-simplex (120 tetrahedra)."""
    K, _ = barycentric_subdivision(simplex_boundary(3))
    return K
