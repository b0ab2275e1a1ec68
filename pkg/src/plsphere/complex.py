"""Finite simplicial complexes: storage, incidence queries and validation.

A cell is a strictly increasing tuple of vertex ids. A :class:`Complex` is an
immutable collection of cells with the coface relation precomputed; it is
usually built from its maximal cells with :func:`build_from_maximal_cells`,
which adds every face.
"""

from __future__ import annotations

import hashlib
from collections import defaultdict, deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations

import numpy as np

from .errors import (
    CellNotInComplex,
    DuplicateVertexInCell,
    MissingCoordinates,
    MixedAmbientDim,
    ZeroDimCell,
)

Cell = tuple

GEOMETRY_TOL = 1e-9


def make_cell(vertices) -> Cell:
    """Canonical cell from any iterable of vertex ids."""
    c = tuple(sorted(int(v) for v in vertices))
    if not c:
        raise ValueError("a cell needs at least one vertex")
    for a, b in zip(c, c[1:]):
        if a == b:
            raise DuplicateVertexInCell(f"vertex {a} repeated in {tuple(vertices)}")
    if c[0] < 0:
        raise ValueError(f"negative vertex id in {tuple(vertices)}")
    return c


def dim(c: Cell) -> int:
    return len(c) - 1


def boundary_cells(c: Cell) -> set[Cell]:
    """The codimension-one faces of ``c``."""
    if len(c) < 2:
        raise ZeroDimCell(f"{c} has no boundary")
    return {c[:i] + c[i + 1:] for i in range(len(c))}


def faces(c: Cell, k: int | None = None):
    """All faces of ``c`` (including ``c`` itself), or only those of dimension k."""
    if k is not None:
        return [tuple(f) for f in combinations(c, k + 1)]
    return [tuple(f) for j in range(1, len(c) + 1) for f in combinations(c, j)]


def closure(cells) -> set[Cell]:
    out = set()
    for c in cells:
        out.update(faces(c))
    return out


class Complex:
    """An immutable finite simplicial complex.

    ``cells_by_dim[k]`` is the frozenset of k-cells and ``coboundary`` maps a
    cell to the (k+1)-cells containing it. Coordinates are optional.
    The constructor stores exactly the cells it is given; use
    :func:`build_from_maximal_cells` to obtain a face-closed complex.
    """

    def __init__(self, cells, coords=None):
        by_dim = defaultdict(set)
        for c in cells:
            by_dim[len(c) - 1].add(c)
        top = max(by_dim) if by_dim else -1
        self.cells_by_dim = tuple(frozenset(by_dim.get(k, ())) for k in range(top + 1))
        self.top_dim = top
        cob = {c: set() for k in range(top + 1) for c in self.cells_by_dim[k]}
        for k in range(1, top + 1):
            for c in self.cells_by_dim[k]:
                for f in boundary_cells(c):
                    if f in cob:
                        cob[f].add(c)
        self.coboundary = {c: frozenset(s) for c, s in cob.items()}
        self.coords = None if coords is None else {int(v): tuple(map(float, x)) for v, x in coords.items()}

    # -- basic queries -------------------------------------------------
    def cells(self, k: int) -> frozenset:
        if 0 <= k <= self.top_dim:
            return self.cells_by_dim[k]
        return frozenset()

    def __contains__(self, c) -> bool:
        return c in self.coboundary

    def __iter__(self):
        for k in range(self.top_dim + 1):
            yield from sorted(self.cells_by_dim[k])

    def __len__(self) -> int:
        return len(self.coboundary)

    def __repr__(self):
        return f"Complex(f_vector={self.f_vector})"

    @property
    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(s) for s in self.cells_by_dim)

    @cached_property
    def vertices(self) -> tuple[int, ...]:
        return tuple(sorted(c[0] for c in self.cells(0)))

    @property
    def euler_characteristic(self) -> int:
        return sum((-1) ** k * n for k, n in enumerate(self.f_vector))

    @cached_property
    def maximal_cells(self) -> tuple[Cell, ...]:
        return tuple(sorted(c for c, cob in self.coboundary.items() if not cob))

    @cached_property
    def vertex_cells(self) -> dict[int, tuple[Cell, ...]]:
        """For each vertex, the top-dimensional cells containing it."""
        out = defaultdict(list)
        for c in sorted(self.cells(self.top_dim)):
            for v in c:
                out[v].append(c)
        return {v: tuple(cs) for v, cs in out.items()}

    def cells_containing(self, c: Cell, k: int) -> list[Cell]:
        """The k-cells of the complex that contain ``c`` (k >= dim c)."""
        if c not in self:
            raise CellNotInComplex(f"{c} is not a cell of the complex")
        level = {c}
        for _ in range(len(c) - 1, k):
            level = {u for x in level for u in self.coboundary[x]}
        return sorted(level)

    def adjacency(self, k: int) -> dict[Cell, tuple[Cell, ...]]:
        """k-cells glued to each k-cell along a shared (k-1)-cell."""
        cache = self.__dict__.setdefault("_adjacency", {})
        if k not in cache:
            adj = {c: set() for c in self.cells(k)}
            for f in self.cells(k - 1):
                cob = self.coboundary[f]
                for a in cob:
                    adj[a].update(cob)
            cache[k] = {c: tuple(sorted(s - {c})) for c, s in adj.items()}
        return cache[k]

    def is_face_closed(self) -> bool:
        return all(f in self for k in range(1, self.top_dim + 1) for c in self.cells_by_dim[k] for f in boundary_cells(c))

    def digest(self) -> str:
        """Content hash over the canonical cell list and coordinates."""
        h = hashlib.sha256()
        for c in self.maximal_cells:
            h.update((" ".join(map(str, c)) + "\n").encode())
        if self.coords:
            for v in sorted(self.coords):
                h.update((f"{v}:" + ",".join(repr(x) for x in self.coords[v]) + "\n").encode())
        return h.hexdigest()

    def subcomplex(self, cells) -> "Complex":
        """Closure of ``cells`` as a new complex sharing this one's coordinates."""
        cl = closure(cells)
        coords = None
        if self.coords is not None:
            vs = {c[0] for c in cl if len(c) == 1}
            coords = {v: self.coords[v] for v in vs}
        return Complex(cl, coords)


def build_from_maximal_cells(maximal, coords=None) -> Complex:
    """Face-closed complex generated by ``maximal``."""
    cells = [make_cell(c) for c in maximal]
    if not cells:
        raise ValueError("at least one maximal cell is required")
    if coords is not None:
        coords = {int(v): tuple(map(float, x)) for v, x in coords.items()}
        dims = {len(x) for x in coords.values()}
        if len(dims) > 1:
            raise MixedAmbientDim(f"coordinates have ambient dimensions {sorted(dims)}")
        used = {v for c in cells for v in c}
        missing = used - set(coords)
        if missing:
            raise MissingCoordinates(f"no coordinates for vertices {sorted(missing)}")
        coords = {v: coords[v] for v in used}
    return Complex(closure(cells), coords)


def star_and_link(K: Complex, c: Cell) -> tuple[Complex, Complex]:
    """Closed star and link of ``c`` in ``K``."""
    if c not in K:
        raise CellNotInComplex(f"{c} is not a cell of the complex")
    containing = {c}
    frontier = [c]
    while frontier:
        frontier = [u for x in frontier for u in K.coboundary[x] if u not in containing]
        containing.update(frontier)
    star_cells = closure(containing)
    cset = set(c)
    link_cells = {f for f in star_cells if cset.isdisjoint(f)}
    return K.subcomplex(star_cells), K.subcomplex(link_cells)


# -- validation ---------------------------------------------------------

def strong_components(K: Complex, cells=None, k: int | None = None) -> list[list[Cell]]:
    """Components of k-cells (default: top cells) glued along (k-1)-cells."""
    if k is None:
        k = K.top_dim
    pool = set(K.cells(k) if cells is None else cells)
    adj = K.adjacency(k)
    comps = []
    seen = set()
    for start in sorted(pool):
        if start in seen:
            continue
        seen.add(start)
        comp = [start]
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                if y in pool and y not in seen:
                    seen.add(y)
                    comp.append(y)
                    queue.append(y)
        comps.append(sorted(comp))
    return comps


def orient(top_cells) -> dict[Cell, int] | None:
    """Consistent orientation signs for a set of equidimensional cells.

    Each cell gets +1 or -1 relative to its sorted vertex order; two cells
    sharing a facet must induce opposite orientations on it. Returns None on
    contradiction. Facets shared by more than two cells are ignored.
    """
    top_cells = sorted(top_cells)
    by_facet = defaultdict(list)
    for c in top_cells:
        for i in range(len(c)):
            by_facet[c[:i] + c[i + 1:]].append((c, i))
    sign = {}
    for start in top_cells:
        if start in sign:
            continue
        sign[start] = 1
        queue = deque([start])
        while queue:
            c = queue.popleft()
            for i in range(len(c)):
                f = c[:i] + c[i + 1:]
                pair = by_facet[f]
                if len(pair) != 2:
                    continue
                induced = sign[c] * (-1) ** i
                (d, j) = pair[0] if pair[1][0] == c else pair[1]
                want = -induced * (-1) ** j
                if d in sign:
                    if sign[d] != want:
                        return None
                else:
                    sign[d] = want
                    queue.append(d)
    return sign


def _intersection_violations(K: Complex) -> list[tuple[Cell, ...]]:
    """Pairs of maximal cells whose realizations meet outside their common face.

    Also reports degenerate (affinely dependent) cells as singletons.
    """
    from scipy.optimize import linprog

    pts = {v: np.asarray(x) for v, x in K.coords.items()}
    cells = list(K.maximal_cells)
    bad = []
    for c in cells:
        if len(c) > 1:
            m = np.array([pts[v] - pts[c[0]] for v in c[1:]])
            if np.linalg.matrix_rank(m, tol=GEOMETRY_TOL) < len(c) - 1:
                bad.append((c,))
    lo = {c: np.min([pts[v] for v in c], axis=0) for c in cells}
    hi = {c: np.max([pts[v] for v in c], axis=0) for c in cells}
    for a, b in combinations(cells, 2):
        if np.any(lo[a] > hi[b] + GEOMETRY_TOL) or np.any(lo[b] > hi[a] + GEOMETRY_TOL):
            continue
        shared = set(a) & set(b)
        # maximise barycentric weight placed off the shared face over common points
        na, nb = len(a), len(b)
        cost = -np.array([0.0 if v in shared else 1.0 for v in a] + [0.0 if v in shared else 1.0 for v in b])
        n = len(pts[a[0]])
        a_eq = np.zeros((n + 2, na + nb))
        for i, v in enumerate(a):
            a_eq[:n, i] = pts[v]
        for j, v in enumerate(b):
            a_eq[:n, na + j] = -pts[v]
        a_eq[n, :na] = 1.0
        a_eq[n + 1, na:] = 1.0
        b_eq = np.zeros(n + 2)
        b_eq[n:] = 1.0
        res = linprog(cost, A_eq=a_eq, b_eq=b_eq, bounds=(0, None), method="highs")
        if res.status == 0 and -res.fun > 1e-7:
            bad.append((a, b))
    return bad


@dataclass(frozen=True)
class ValidationReport:
    expect_dim: int
    is_face_closed: bool
    is_closed_pseudomanifold: bool
    is_strongly_connected: bool
    is_orientable: bool
    intersection_property_ok: bool
    euler_characteristic: int
    geometry_checked: bool = False
    violations: tuple = field(default=())

    @property
    def ok(self) -> bool:
        return not self.violations

    def as_dict(self) -> dict:
        return {
            "expect_dim": self.expect_dim,
            "is_face_closed": self.is_face_closed,
            "is_closed_pseudomanifold": self.is_closed_pseudomanifold,
            "is_strongly_connected": self.is_strongly_connected,
            "is_orientable": self.is_orientable,
            "intersection_property_ok": self.intersection_property_ok,
            "geometry_checked": self.geometry_checked,
            "euler_characteristic": self.euler_characteristic,
            "violations": [[rule, [list(c) for c in cells]] for rule, cells in self.violations],
        }


def validate(K: Complex, expect_dim: int, geometry: bool = True) -> ValidationReport:
    """Check the structural properties the algorithms rely on.

    With ``geometry=False`` the (slow) coordinate-based intersection check is
    skipped even when coordinates are present.
    """
    violations = []
    m = expect_dim

    open_faces = [(c, f) for k in range(1, K.top_dim + 1) for c in sorted(K.cells_by_dim[k])
                  for f in sorted(boundary_cells(c)) if f not in K]
    face_closed = not open_faces
    if open_faces:
        violations.append(("face_closed", tuple(f for _, f in open_faces[:10])))

    pm_bad = []
    if K.top_dim != m:
        pm_bad.append(())
        violations.append(("dimension", ()))
    else:
        impure = [c for c in K.maximal_cells if len(c) - 1 != m]
        if impure:
            pm_bad.extend(impure)
            violations.append(("pure", tuple(impure[:10])))
        if m >= 1:
            wrong = sorted(f for f in K.cells(m - 1) if len(K.coboundary[f]) != 2)
            if wrong:
                pm_bad.extend(wrong)
                violations.append(("closed_pseudomanifold", tuple(wrong[:10])))
    closed_pm = not pm_bad

    comps = strong_components(K, k=m) if 0 <= m <= K.top_dim else []
    connected = len(comps) == 1
    if not connected:
        violations.append(("strongly_connected", tuple(c[0] for c in comps[:10])))

    orientable = bool(K.cells(m)) and orient(K.cells(m)) is not None
    if not orientable:
        violations.append(("orientable", ()))

    geometry = geometry and K.coords is not None
    inter_ok = True
    if geometry:
        bad = _intersection_violations(K)
        inter_ok = not bad
        if bad:
            violations.append(("intersection_property", tuple(c for pair in bad[:10] for c in pair)))

    return ValidationReport(
        expect_dim=m,
        is_face_closed=face_closed,
        is_closed_pseudomanifold=closed_pm,
        is_strongly_connected=connected,
        is_orientable=orientable,
        intersection_property_ok=inter_ok,
        euler_characteristic=K.euler_characteristic,
        geometry_checked=geometry,
        violations=tuple(violations),
    )
