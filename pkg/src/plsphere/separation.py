"""Splitting a closed m-pseudomanifold along a closed (m-1)-cycle of its cells."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .complex import Complex, Cell, closure, make_cell, orient, strong_components, validate
from .errors import (
    BadDimension,
    CellNotInComplex,
    InvalidInput,
    NotASphere,
    NotClosed,
    NotConnected,
    NotOrientable,
    NotTwoComponents,
)


class Location(str, Enum):
    IN_D = "InD"
    ON_B = "OnB"
    IN_D_PRIME = "InDPrime"


@dataclass(frozen=True)
class SurfaceCycle:
    """Closed, connected, orientable (m-1)-cycle made of cells of a complex."""

    cells: frozenset
    closure: frozenset
    euler_characteristic: int
    sphere_checked: bool

    @property
    def dim(self) -> int:
        return len(next(iter(self.cells))) - 1

    @property
    def vertices(self) -> frozenset:
        return frozenset(c[0] for c in self.closure if len(c) == 1)

    def edges(self) -> frozenset:
        return frozenset(c for c in self.closure if len(c) == 2)

    def __contains__(self, c):
        return c in self.closure


def check_surface(K: Complex, cells) -> SurfaceCycle:
    """Verify that ``cells`` form a closed connected orientable cycle.

    For 2-dimensional cycles the Euler characteristic must also be 2, which
    together with the other checks pins the surface down as a 2-sphere. In
    higher dimensions sphere-ness is assumed, not decided.
    """
    m = K.top_dim
    cells = frozenset(make_cell(c) for c in cells)
    if not cells:
        raise InvalidInput("empty surface")
    for c in cells:
        if len(c) != m:
            raise BadDimension(f"surface cell {c} is not a {m - 1}-cell")
        if c not in K:
            raise CellNotInComplex(f"surface cell {c} is not in the complex")
    S = Complex(closure(cells))
    k = m - 1
    if k >= 1:
        free = sorted(f for f in S.cells(k - 1) if len(S.coboundary[f]) != 2)
        if free:
            raise NotClosed(f"{len(free)} {k - 1}-cells not in exactly two surface cells, e.g. {free[0]}")
    if len(strong_components(S, k=k)) != 1:
        raise NotConnected("surface cells are not connected through shared faces")
    if orient(cells) is None:
        raise NotOrientable("surface admits no consistent orientation")
    chi = S.euler_characteristic
    if k == 2 and chi != 2:
        raise NotASphere(f"closed orientable surface with Euler characteristic {chi} is not a sphere")
    return SurfaceCycle(cells, frozenset(S.coboundary), chi, sphere_checked=(k <= 2))


def glue_components(K: Complex, cut) -> list[list[Cell]]:
    """Groups of top cells connected through (m-1)-cells not in ``cut``."""
    cut = set(cut)
    m = K.top_dim
    parent = {c: c for c in K.cells(m)}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for f in K.cells(m - 1):
        if f in cut:
            continue
        cob = sorted(K.coboundary[f])
        for other in cob[1:]:
            ra, rb = find(cob[0]), find(other)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    groups = {}
    for c in sorted(K.cells(m)):
        groups.setdefault(find(c), []).append(c)
    return sorted(groups.values(), key=lambda g: g[0])


@dataclass(frozen=True)
class SeparationResult:
    complex: Complex
    inside: frozenset
    outside: frozenset
    surface: SurfaceCycle
    vertex_location: dict

    def swapped(self) -> "SeparationResult":
        flip = {Location.IN_D: Location.IN_D_PRIME, Location.IN_D_PRIME: Location.IN_D, Location.ON_B: Location.ON_B}
        return SeparationResult(self.complex, self.outside, self.inside, self.surface,
                                {v: flip[x] for v, x in self.vertex_location.items()})

    def locate(self, c: Cell) -> Location:
        """Where the relative interior of cell ``c`` lies."""
        if len(c) == 1:
            return self.vertex_location[c[0]]
        if c in self.surface.closure:
            return Location.ON_B
        top = self.complex.cells_containing(c, self.complex.top_dim)
        return Location.IN_D if top[0] in self.inside else Location.IN_D_PRIME

    def sizes(self) -> tuple[int, int]:
        return len(self.inside), len(self.outside)


def separate(K: Complex, S, check: bool = True) -> SeparationResult:
    """Split the top cells of ``K`` into the two sides of ``S``.

    ``inside`` is the side with fewer top cells; ties go to the side holding
    the lexicographically smallest top cell.
    """
    m = K.top_dim
    if check:
        rep = validate(K, m, geometry=False)
        if not (rep.is_closed_pseudomanifold and rep.is_strongly_connected and rep.is_orientable):
            raise InvalidInput(f"complex is not a closed orientable strongly connected {m}-pseudomanifold")
    if not isinstance(S, SurfaceCycle):
        cells = frozenset(make_cell(c) for c in S)
        S = check_surface(K, cells) if check else SurfaceCycle(cells, frozenset(closure(cells)), 0, False)
    groups = glue_components(K, S.cells)
    if len(groups) != 2:
        raise NotTwoComponents(f"surface leaves {len(groups)} component(s), expected 2", len(groups))
    a, b = groups
    if (len(b), b[0]) < (len(a), a[0]):
        a, b = b, a
    inside, outside = frozenset(a), frozenset(b)
    on_b = S.vertices
    loc = {}
    for v in K.vertices:
        if v in on_b:
            loc[v] = Location.ON_B
        else:
            first = K.vertex_cells[v][0]
            loc[v] = Location.IN_D if first in inside else Location.IN_D_PRIME
    return SeparationResult(K, inside, outside, S, loc)
