"""Pushing a contraction sequence off one side of a separating 2-sphere.

Given a closed 3-pseudomanifold K split by a 2-sphere B into the side D of
the base point and the other side D', every excursion of a curve into D'
(a *pass*) is replaced by a path on B between the same two vertices of B.
The replacement path must avoid the rest of the curve on B, so the result
stays simple; when B's 1-skeleton offers no such path, B is refined along a
corridor of triangles and the path runs through the new vertices.
Consecutive rewritten curves are then rejoined by single-cell moves inside
D and B.
"""

from __future__ import annotations

import heapq
import logging
from collections import deque
from itertools import count
from dataclasses import dataclass, field

from .complex import Complex, Cell, boundary_cells
from .contraction import (
    DEFAULT_BUDGET,
    ContractionSequence,
    Curve,
    _neighbours,
    gradual_move_cell,
    is_terminal,
    search_curves,
    validate_contraction,
)
from .errors import (
    BasePointOnWrongSide,
    BudgetExhausted,
    InvalidInput,
    NoFreeEdgeCorridor,
    NonSimpleOutputCurve,
    ProjectionRepairFailed,
    UnsupportedDimension,
)
from .separation import Location, SeparationResult, SurfaceCycle, check_surface, separate
from .subdivision import SubdivisionRecord, _gf2_solve, order_flips, stellar_subdivision

log = logging.getLogger(__name__)

MAX_ORDERED_CHAIN = 40


def _edge(a, b):
    return (a, b) if a < b else (b, a)


def _path_edges(path):
    return {_edge(a, b) for a, b in zip(path, path[1:])}


@dataclass(frozen=True)
class Pass:
    """An excursion ``leave_vertex, *alpha, enter_vertex`` through D'."""

    leave_vertex: int
    enter_vertex: int
    alpha: tuple

    @property
    def path(self) -> tuple:
        return (self.leave_vertex, *self.alpha, self.enter_vertex)


@dataclass
class OccupancySet:
    """Vertices and edges of B already used by the curve being rewritten."""

    used_vertices: set = field(default_factory=set)
    used_edges: set = field(default_factory=set)

    def add_path(self, path):
        self.used_vertices.update(path)
        self.used_edges.update(_path_edges(path))

    def admits(self, path) -> bool:
        inner = path[1:-1]
        return not any(v in self.used_vertices for v in inner) and not (_path_edges(path) & self.used_edges)


@dataclass(frozen=True)
class ProjectionResult:
    new_sequence: ContractionSequence
    final_complex: Complex
    subdivision_log: tuple
    curve_map: tuple  # curve_map[i] = index of the rewritten i-th input curve
    final_separation: SeparationResult
    projected: tuple  # rewritten counterpart of each input curve

    def as_dict(self) -> dict:
        return {
            "base_point": self.new_sequence.base_point,
            "curves": [list(c.canonical_form) for c in self.new_sequence.curves],
            "curve_map": list(self.curve_map),
            "subdivisions": len(self.subdivision_log),
            "new_vertices": sorted(v for r in self.subdivision_log for v in r.new_vertices),
            "f_vector": list(self.final_complex.f_vector),
        }


# -- side bookkeeping -------------------------------------------------------

def orient_to_base(sep: SeparationResult, p: int) -> SeparationResult:
    """The same separation with ``inside`` being the side that holds ``p``."""
    loc = sep.vertex_location.get(p)
    if loc is None:
        raise InvalidInput(f"base point {p} is not a vertex")
    if loc == Location.ON_B:
        raise BasePointOnWrongSide(f"base point {p} lies on the separating surface")
    return sep if loc == Location.IN_D else sep.swapped()


def _oriented(sep: SeparationResult, base: int | None) -> SeparationResult:
    return sep if base is None else orient_to_base(sep, base)


def find_passes(C: Curve, sep: SeparationResult, base: int | None = None) -> list[Pass]:
    """Excursions of ``C`` into D', in canonical order starting from ``base``.

    D is the side holding ``base`` (``sep.inside`` if no base is given). An arc
    that only runs along B and comes back to D is not a pass; a curve touching
    B from the D' side and diving back in yields two passes.
    """
    sep = _oriented(sep, base)
    if base is None:
        in_d = [v for v in C.canonical_form if sep.vertex_location[v] == Location.IN_D]
        if not in_d:
            raise BasePointOnWrongSide("curve has no vertex strictly inside D")
        base = min(in_d)
    if base not in C:
        raise InvalidInput(f"base point {base} is not on the curve")
    walk = C.walk_from(base)
    n = len(walk)
    passes, cur = [], None
    for i in range(n):
        a, b = walk[i], walk[(i + 1) % n]
        if sep.locate(_edge(a, b)) == Location.IN_D_PRIME:
            if cur is None:
                cur = [a]
            cur.append(b)
            if sep.vertex_location[b] == Location.ON_B:
                passes.append(Pass(cur[0], cur[-1], tuple(cur[1:-1])))
                cur = None
    return passes


# -- routing on B -------------------------------------------------------------

def _skeleton(B: SurfaceCycle):
    adj = {v: set() for v in B.vertices}
    for a, b in B.edges():
        adj[a].add(b)
        adj[b].add(a)
    return {v: sorted(n) for v, n in adj.items()}


def shortest_path_on_b(B: SurfaceCycle, start: int, goal: int, occupied: OccupancySet) -> tuple | None:
    """Lexicographically least shortest path on B's 1-skeleton avoiding ``occupied``."""
    adj = _skeleton(B)
    if start not in adj or goal not in adj:
        return None
    blocked = occupied.used_vertices - {start, goal}

    def usable(a, b):
        return b not in blocked and _edge(a, b) not in occupied.used_edges

    dist = {goal: 0}
    queue = deque([goal])
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if w not in dist and usable(u, w) and (w not in blocked):
                dist[w] = dist[u] + 1
                queue.append(w)
    if start not in dist:
        return None
    path = [start]
    while path[-1] != goal:
        u = path[-1]
        path.append(min(w for w in adj[u] if dist.get(w) == dist[u] - 1 and usable(u, w)))
    return tuple(path)


def _triangle_corridor(B: SurfaceCycle, start: int, goal: int, occupied: OccupancySet):
    """Shortest chain of B-triangles from one holding ``start`` to one holding ``goal``,
    consecutive triangles sharing an unoccupied edge."""
    tris = sorted(B.cells)
    by_edge = {}
    for t in tris:
        for e in boundary_cells(t):
            by_edge.setdefault(e, []).append(t)
    sources = [t for t in tris if start in t]
    parent = {t: None for t in sources}
    queue = deque(sources)
    while queue:
        t = queue.popleft()
        if goal in t:
            chain = [t]
            while parent[chain[-1]] is not None:
                chain.append(parent[chain[-1]])
            return chain[::-1]
        for e in sorted(boundary_cells(t)):
            if e in occupied.used_edges:
                continue
            for u in by_edge[e]:
                if u not in parent:
                    parent[u] = t
                    queue.append(u)
    return None


def project_arc(B: SurfaceCycle, pass_: Pass, occupied: OccupancySet, K: Complex):
    """A path on B replacing the excursion ``pass_``.

    Returns ``(beta, K2, records)``. When B's 1-skeleton has a free path the
    complex is unchanged and ``records`` is empty. Otherwise the two end
    triangles of a corridor of B-triangles are coned from their centroids,
    the edges crossed in between are split, and beta runs through the new
    vertices.
    """
    a, b = pass_.leave_vertex, pass_.enter_vertex
    if a not in B.vertices or b not in B.vertices:
        raise InvalidInput(f"pass endpoints {a}, {b} are not on the surface")
    beta = shortest_path_on_b(B, a, b, occupied)
    if beta is not None:
        return beta, K, []
    chain = _triangle_corridor(B, a, b, occupied)
    if chain is None:
        raise NoFreeEdgeCorridor(f"no corridor of free edges on the surface from {a} to {b}")
    crossings = [tuple(sorted(set(s) & set(t))) for s, t in zip(chain, chain[1:])]
    ends = [chain[0]] if len(chain) == 1 else [chain[0], chain[-1]]
    K2, rec = stellar_subdivision(K, ends + crossings)
    made = [v for _, v in rec.steps]
    cones = made[:len(ends)]
    mids = made[len(ends):]
    beta = (a, cones[0], *mids, cones[-1], b) if len(ends) == 2 else (a, cones[0], b)
    missing = [e for e in _path_edges(beta) if e not in K2]
    if missing:
        raise NoFreeEdgeCorridor(f"refined corridor lacks edge {missing[0]}")
    log.info("refined surface along %d triangles to route %d -> %d", len(chain), a, b)
    return beta, K2, [rec]


# -- rewriting one curve ----------------------------------------------------

def _footprint_on_b(C: Curve, sep: SeparationResult) -> OccupancySet:
    occ = OccupancySet()
    occ.used_vertices.update(v for v in C.vertices if sep.vertex_location[v] == Location.ON_B)
    occ.used_edges.update(e for e in C.edges if sep.locate(e) == Location.ON_B)
    return occ


def _replace(C: Curve, p: int, replacements) -> Curve:
    """``C`` with each pass path swapped for its new path."""
    walk = list(C.walk_from(p))
    out, i = [], 0
    n = len(walk)
    starts = {r[0].leave_vertex: r for r in replacements}
    while i < n:
        v = walk[i]
        out.append(v)
        if v in starts:
            ps, beta = starts[v]
            out.extend(beta[1:-1])
            i += len(ps.path) - 1
        else:
            i += 1
    edges = _path_edges(out + [out[0]])
    try:
        return Curve(edges)
    except InvalidInput as exc:
        raise NonSimpleOutputCurve(f"rewritten curve is not simple: {exc}") from None


def _remap(rec: SubdivisionRecord, curve: Curve) -> Curve:
    return rec.remap_curve(curve)


class _State:
    """Everything that has to follow the complex through refinements."""

    def __init__(self, K, sep, curves, regions, p):
        self.K = K
        self.sep = sep
        self.curves = list(curves)
        self.regions = list(regions)
        self.projected = []
        self.records = []
        self.p = p

    def refine(self, K2, rec):
        self.K = K2
        self.records.append(rec)
        self.curves = [_remap(rec, c) for c in self.curves]
        self.regions = [rec.apply_to(r) for r in self.regions]
        self.projected = [_remap(rec, c) for c in self.projected]
        S = check_surface(K2, rec.apply_to(self.sep.surface.cells))
        self.sep = orient_to_base(separate(K2, S, check=False), self.p)


def _run_footprint(state: _State, i: int, ps: Pass) -> OccupancySet:
    """B-vertices and B-edges used by the curves after ``i`` that keep the
    same pass while moving across cells with two or more vertices on B."""
    loc = state.sep.vertex_location
    ahead = OccupancySet()
    ends = {ps.leave_vertex, ps.enter_vertex}
    for j in range(i + 1, len(state.curves)):
        t = gradual_move_cell(state.curves[j - 1], state.curves[j])
        if t is None or sum(loc[v] == Location.ON_B for v in t) < 2:
            break
        later = find_passes(state.curves[j], state.sep, state.p)
        if not any({q.leave_vertex, q.enter_vertex} == ends for q in later):
            break
        fp = _footprint_on_b(state.curves[j], state.sep)
        ahead.used_vertices |= fp.used_vertices
        ahead.used_edges |= fp.used_edges
    ahead.used_vertices -= ends
    return ahead


def _previous_arc(state: _State, ps: Pass) -> tuple | None:
    """The arc of the previous rewritten curve joining the pass's ends, if on B."""
    if not state.projected:
        return None
    prev = state.projected[-1]
    a, b = ps.leave_vertex, ps.enter_vertex
    if a not in prev or b not in prev:
        return None
    walk = prev.walk_from(state.p)
    i, j = walk.index(a), walk.index(b)
    arc = walk[i:j + 1] if i < j else walk[j:i + 1][::-1]
    if any(state.sep.locate(e) != Location.ON_B for e in _path_edges(arc)):
        return None
    return arc


def _choose_beta(state: _State, i: int, ps: Pass, occ: OccupancySet):
    """Pick the replacement path for one pass; may refine the complex.

    Preference order: the previous curve's arc if the rest of the run can keep
    it, a fresh path the run can keep, the previous arc, a fresh path for this
    curve alone, and finally a path through a refined corridor (for the whole
    run if possible).
    """
    B = state.sep.surface
    key = (ps.leave_vertex, ps.enter_vertex)
    prev = _previous_arc(state, ps)
    ahead = _run_footprint(state, i, ps)
    wider = OccupancySet(occ.used_vertices | ahead.used_vertices, occ.used_edges | ahead.used_edges)
    if prev is not None and wider.admits(prev):
        return prev
    beta = shortest_path_on_b(B, *key, wider)
    if beta is not None:
        return beta
    if prev is not None and occ.admits(prev):
        return prev
    beta = shortest_path_on_b(B, *key, occ)
    if beta is not None:
        return beta
    try:
        beta, K2, recs = project_arc(B, ps, wider, state.K)
    except NoFreeEdgeCorridor:
        beta, K2, recs = project_arc(B, ps, occ, state.K)
    for rec in recs:
        state.refine(K2, rec)
    return beta


def _project_curve(state: _State, i: int) -> Curve:
    C = state.curves[i]
    passes = find_passes(C, state.sep, state.p)
    if not passes:
        return C
    occ = _footprint_on_b(C, state.sep)
    chosen = []
    for ps in passes:
        beta = _choose_beta(state, i, ps, occ)
        occ.add_path(beta)
        chosen.append((ps, beta))
    return _replace(C, state.p, chosen)


# -- rejoining consecutive curves -------------------------------------------

def _allowed_triangles(K: Complex, sep: SeparationResult) -> set:
    return {t for t in K.cells(2) if sep.locate(t) != Location.IN_D_PRIME}


def _bounding_chains(a: Curve, b: Curve, region, b_tris) -> list[list[Cell]]:
    """2-cells of ``region`` whose boundary sum is the difference of the curves.

    The part on the closed surface can be swapped for its complement, since
    both have the same boundary; both choices are returned, smaller first.
    """
    diff = a.edges ^ b.edges
    pieces = sorted(region)
    edges = sorted({e for t in pieces for e in boundary_cells(t)} | diff)
    index = {e: k for k, e in enumerate(edges)}
    cols = [sum(1 << index[e] for e in boundary_cells(t)) for t in pieces]
    sol = _gf2_solve(cols, sum(1 << index[e] for e in diff))
    if sol is None:
        return []
    chain = {t for k, t in enumerate(pieces) if sol >> k & 1}
    out = [sorted(chain)]
    if b_tris <= set(pieces):
        on_b = chain & b_tris
        out.append(sorted((chain - on_b) | (b_tris - on_b)))
    return sorted(out, key=len)


def _connect(K, sep, a: Curve, b: Curve, p: int, region, allowed, budget) -> list[Curve]:
    if a == b:
        return [a]
    t = gradual_move_cell(a, b, K)
    if t is not None and t in allowed:
        return [a, b]
    b_tris = set(sep.surface.cells)
    for chain in _bounding_chains(a, b, b_tris | (set(region) & allowed), b_tris):
        if len(chain) <= MAX_ORDERED_CHAIN:
            path = order_flips(a, chain, p)
            if path is not None:
                return path
    path = guided_search(K, a, b, p, allowed, budget)
    if path is None:
        raise ProjectionRepairFailed(f"could not rejoin {a} and {b} inside D and B within {budget} curves")
    return path


def guided_search(K, a: Curve, b: Curve, p: int, allowed, budget: int) -> list[Curve] | None:
    """Weighted A* over simple moves from ``a`` to ``b``.

    The estimate is the number of edges still differing from ``b``, counted
    twice; paths found are short in practice but not always shortest.
    """
    tick = count()
    depth = {a: 0}
    parent = {a: None}
    heap = [(2 * len(a.edges ^ b.edges), next(tick), a)]
    expanded = 0
    while heap and expanded < budget:
        _, _, cur = heapq.heappop(heap)
        expanded += 1
        for _, nxt in _neighbours(K, cur, p, allowed):
            if nxt in depth:
                continue
            depth[nxt] = depth[cur] + 1
            parent[nxt] = cur
            if nxt == b:
                path = [nxt]
                while parent[path[-1]] is not None:
                    path.append(parent[path[-1]])
                return path[::-1]
            heapq.heappush(heap, (depth[nxt] + 2 * len(nxt.edges ^ b.edges), next(tick), nxt))
    return None


def _check_output(K, sep, seq: ContractionSequence, allowed):
    rep = validate_contraction(K, seq)
    if not rep:
        raise ProjectionRepairFailed(f"output sequence invalid at {rep.index}: {rep.violation}")
    for c in seq.curves:
        if any(sep.locate(e) == Location.IN_D_PRIME for e in c.edges):
            raise ProjectionRepairFailed(f"{c} still enters the far side")
    for t in seq.moves():
        if t not in allowed:
            raise ProjectionRepairFailed(f"move across {t} leaves D and B")


def project_sequence(K: Complex, sep: SeparationResult, omega: ContractionSequence,
                     budget: int = DEFAULT_BUDGET) -> ProjectionResult:
    """Rewrite ``omega`` so every curve and every move lies in D and B.

    D is the side of the base point. Each curve keeps its edges in D - B and
    on B; each pass is replaced by a path on B, reused from the previous curve
    where possible and chosen to stay clear of the following curves that keep
    the same pass. ``budget`` bounds each fallback search used to rejoin two
    rewritten curves.
    """
    if K.top_dim != 3:
        raise UnsupportedDimension(f"projection is implemented for 3-dimensional complexes, got {K.top_dim}")
    p = omega.base_point
    sep = orient_to_base(sep, p)
    rep = validate_contraction(K, omega)
    if not rep:
        raise InvalidInput(f"input sequence invalid at {rep.index}: {rep.violation}")
    regions = [{t} for t in omega.moves()] + [set()]
    state = _State(K, sep, omega.curves, regions, p)
    n_passes = 0
    for i in range(len(state.curves)):
        n_passes += len(find_passes(state.curves[i], state.sep, p))
        curve = _project_curve(state, i)  # may refine and replace state.projected
        state.projected.append(curve)
    if len(state.records) > n_passes:
        log.warning("%d refinements for %d passes", len(state.records), n_passes)

    K2, sep2 = state.K, state.sep
    allowed = _allowed_triangles(K2, sep2)
    out = [state.projected[0]]
    cmap = [0]
    for i in range(1, len(state.projected)):
        seg = _connect(K2, sep2, out[-1], state.projected[i], p, state.regions[i - 1], allowed, budget)
        out.extend(seg[1:])
        cmap.append(len(out) - 1)
    if not is_terminal(K2, out[-1], p):
        try:
            tail = search_curves(K2, out[-1], p, lambda c: is_terminal(K2, c, p), budget, allowed=allowed)
        except BudgetExhausted as exc:
            raise ProjectionRepairFailed(f"could not finish the rewritten sequence: {exc}") from None
        out.extend(tail[1:])
    seq = ContractionSequence(p, out)
    _check_output(K2, sep2, seq, allowed)
    return ProjectionResult(seq, K2, tuple(state.records), tuple(cmap), sep2, tuple(state.projected))
