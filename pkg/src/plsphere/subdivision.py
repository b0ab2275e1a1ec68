"""Local refinements: edge splits and barycentric subdivision of one cell.

Both are built from stellar moves. Starring a face f at a new vertex v
replaces every cell s that contains f by the cells v + (s - w), one for each
vertex w of f. Applying the same move to any subcomplex (a surface, a curve,
a single 2-cell) gives that subcomplex's refinement, which is how curves and
regions are carried from the old complex to the new one.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .complex import Complex, Cell, boundary_cells, build_from_maximal_cells, closure, faces
from .contraction import Curve
from .errors import CellNotInComplex, NotLocalizedDifference, ZeroDimCell


def stellar_cells(cells, face: Cell, v: int) -> set[Cell]:
    """Star ``face`` at ``v`` within the complex whose top cells are ``cells``."""
    fset = set(face)
    out = set()
    for s in cells:
        if fset.issubset(s):
            rest = [u for u in s if u not in fset]
            for w in face:
                out.add(tuple(sorted([v, *rest, *(u for u in face if u != w)])))
        else:
            out.add(s)
    return out


@dataclass(frozen=True)
class SubdivisionRecord:
    """What one refinement removed and added.

    ``steps`` lists the stellar moves (face, new vertex) in the order applied;
    :meth:`apply_to` replays them on any set of cells of the old complex.
    """

    replaced: frozenset
    created: frozenset
    new_vertices: dict
    vertex_coords: dict | None
    steps: tuple

    def apply_to(self, cells) -> set[Cell]:
        out = set(cells)
        for face, v in self.steps:
            out = stellar_cells(out, face, v)
        return out

    def remap_curve(self, c: Curve) -> Curve:
        return Curve(self.apply_to(c.edges))


def _next_vertex(K: Complex) -> int:
    return (K.vertices[-1] + 1) if K.vertices else 0


def stellar_subdivision(K: Complex, targets) -> tuple[Complex, SubdivisionRecord]:
    """Star each face in ``targets`` in turn, numbering new vertices upward."""
    top = set(K.maximal_cells)
    coords = dict(K.coords) if K.coords is not None else None
    v = _next_vertex(K)
    steps, parents, new_coords = [], {}, {}
    for f in targets:
        top = stellar_cells(top, f, v)
        steps.append((f, v))
        parents[v] = f
        if coords is not None:
            x = tuple(np.mean([coords[u] for u in f], axis=0).tolist())
            coords[v] = x
            new_coords[v] = x
        v += 1
    K2 = build_from_maximal_cells(top, coords)
    old, new = set(K.coboundary), set(K2.coboundary)
    rec = SubdivisionRecord(
        replaced=frozenset(old - new),
        created=frozenset(new - old),
        new_vertices=parents,
        vertex_coords=new_coords if coords is not None else None,
        steps=tuple(steps),
    )
    return K2, rec


def split_edge(K: Complex, e: Cell) -> tuple[Complex, SubdivisionRecord]:
    """Insert a midpoint on ``e``; every cell containing ``e`` splits in two."""
    if e not in K or len(e) != 2:
        raise CellNotInComplex(f"{e} is not an edge of the complex")
    return stellar_subdivision(K, [e])


def barycentric_subdivide_cell(K: Complex, c: Cell) -> tuple[Complex, SubdivisionRecord]:
    """Barycentric subdivision of the closure of ``c``.

    Faces of ``c`` are starred in order of decreasing dimension, which yields
    (d+1)! simplices inside a d-cell; cells outside ``c`` that share a face
    with it are coned over the refined face.
    """
    if c not in K:
        raise CellNotInComplex(f"{c} is not a cell of the complex")
    if len(c) < 2:
        raise ZeroDimCell("cannot subdivide a vertex")
    targets = sorted((f for f in faces(c) if len(f) >= 2), key=lambda f: (-len(f), f))
    return stellar_subdivision(K, targets)


def barycentric_subdivision(K: Complex) -> tuple[Complex, SubdivisionRecord]:
    """Barycentric subdivision of the whole complex."""
    targets = sorted((c for c in K.coboundary if len(c) >= 2), key=lambda f: (-len(f), f))
    return stellar_subdivision(K, targets)


def star_cell(K: Complex, c: Cell) -> tuple[Complex, SubdivisionRecord]:
    """Cone ``c`` (and everything containing it) from its centroid."""
    if c not in K:
        raise CellNotInComplex(f"{c} is not a cell of the complex")
    if len(c) < 2:
        raise ZeroDimCell("cannot subdivide a vertex")
    return stellar_subdivision(K, [c])


def carrier_map(records, vertices=()) -> dict[int, frozenset]:
    """For each vertex, the vertex set of the original cell it lies inside."""
    carrier = {v: frozenset([v]) for v in vertices}
    for rec in records:
        for face, v in rec.steps:
            carrier[v] = frozenset().union(*(carrier.get(u, frozenset([u])) for u in face))
    return carrier


# -- gradual moves inside a refined region ---------------------------------

def _gf2_solve(columns: list[int], target: int) -> int | None:
    """Bitmask x with XOR of columns[i] for i in x equal to ``target``."""
    basis = {}
    for i, col in enumerate(columns):
        vec, comb = col, 1 << i
        while vec:
            top = vec.bit_length() - 1
            if top not in basis:
                basis[top] = (vec, comb)
                break
            bv, bc = basis[top]
            vec ^= bv
            comb ^= bc
    vec, comb = target, 0
    while vec:
        top = vec.bit_length() - 1
        if top not in basis:
            return None
        bv, bc = basis[top]
        vec ^= bv
        comb ^= bc
    return comb


def region_pieces(K_new: Complex, region, records=()) -> list[Cell]:
    """2-cells of ``K_new`` filling ``region``.

    ``region`` is a cell of the complex before ``records`` were applied, or an
    explicit collection of cells of ``K_new``.
    """
    if isinstance(region, tuple) and region and isinstance(region[0], int):
        cells = {region}
        for rec in records:
            cells = rec.apply_to(cells)
    else:
        cells = set(region)
    if any(len(c) < 3 for c in cells):
        raise ValueError("region must be made of cells of dimension >= 2")
    pieces = sorted(f for f in closure(cells) if len(f) == 3)
    missing = [t for t in pieces if t not in K_new]
    if missing:
        raise CellNotInComplex(f"region piece {missing[0]} is not in the refined complex")
    return pieces


def order_flips(start: Curve, flips, p: int | None = None) -> list[Curve] | None:
    """Order the 2-cells ``flips`` so every intermediate curve stays simple."""
    failed = set()

    def go(cur, remaining):
        if not remaining:
            return [cur]
        if remaining in failed:
            return None
        for t in sorted(remaining):
            if not (cur.edges & boundary_cells(t)):
                continue
            nxt = cur.flip(t)
            if nxt is None or (p is not None and p not in nxt):
                continue
            tail = go(nxt, remaining - {t})
            if tail is not None:
                return [cur, *tail]
        failed.add(remaining)
        return None

    return go(start, frozenset(flips))


def insert_gradual_subsequence(K_new: Complex, C1: Curve, C2: Curve, region, records=(), base=None) -> list[Curve]:
    """Curves C1 = X0, X1, ..., Xt = C2, each one 2-cell move apart.

    The two curves must agree outside ``region`` and their difference must be
    filled by 2-cells of the refined region. With ``base`` given, every
    intermediate curve must pass through that vertex.
    """
    if C1 == C2:
        return [C1]
    pieces = region_pieces(K_new, region, records)
    diff = C1.edges ^ C2.edges
    region_edges = {e for t in pieces for e in boundary_cells(t)}
    outside = sorted(diff - region_edges)
    if outside:
        raise NotLocalizedDifference(f"curves differ on {outside[0]}, outside the region")
    index = {e: i for i, e in enumerate(sorted(region_edges))}
    cols = [sum(1 << index[e] for e in boundary_cells(t)) for t in pieces]
    sol = _gf2_solve(cols, sum(1 << index[e] for e in diff))
    if sol is None:
        raise NotLocalizedDifference("the difference does not bound inside the region")
    chain = [t for i, t in enumerate(pieces) if sol >> i & 1]
    path = order_flips(C1, chain, base)
    if path is None:
        raise NotLocalizedDifference("no ordering of the region's cells keeps the curve simple")
    return path
