"""Distance-balanced shelling of a closed m-pseudomanifold toward a vertex star.

Top cells are removed one at a time. The removed region is always a ball
whose boundary B is an (m-1)-sphere; a cell may be removed only if it meets
B in a nonempty proper union of its facets and in nothing else. Among
admissible cells, the one reaching farthest from the origin (in m-cell
distance) goes first, then the one with most vertices at that distance, then
the lexicographically smallest. Removing every cell outside the star of the
origin certifies that the complex is a sphere.
"""

from __future__ import annotations

import hashlib
import logging
from dataclasses import dataclass, field
from enum import Enum

from .complex import Complex, Cell, boundary_cells, closure, faces, make_cell, orient, strong_components, validate
from .errors import InvalidInput, OriginInFirstCell, VertexNotInComplex
from .metrics import distance_field

log = logging.getLogger(__name__)


class Outcome(str, Enum):
    SUCCESS = "Success"
    OBSTRUCTED = "Obstructed"


class ObstructionReason(str, Enum):
    NO_ADMISSIBLE_CANDIDATE = "no_admissible_candidate"
    DEGENERATE_BOUNDARY = "degenerate_boundary"


class Verdict(str, Enum):
    SPHERE = "sphere"
    NOT_SIMPLY_CONNECTED = "not_simply_connected"
    NOT_A_SPHERE = "not_a_sphere"
    INCONCLUSIVE = "inconclusive"


def boundary_hash(cells) -> str:
    h = hashlib.sha256()
    for c in sorted(cells):
        h.update((" ".join(map(str, c)) + "\n").encode())
    return h.hexdigest()[:16]


@dataclass(frozen=True)
class ShellingTrace:
    origin: int
    first_cell: Cell
    removals: tuple  # ((cell, boundary hash after removal), ...)
    outcome: Outcome
    reason: ObstructionReason | None = None
    frontier: tuple = ()  # boundary cells at the point of obstruction
    complex_digest: str = ""
    candidates: tuple = field(default=())  # inadmissible candidates when stuck

    @property
    def removed_cells(self) -> list[Cell]:
        return [c for c, _ in self.removals]

    def as_dict(self) -> dict:
        return {
            "origin": self.origin,
            "first_cell": list(self.first_cell),
            "removals": [[list(c), h] for c, h in self.removals],
            "outcome": self.outcome.value,
            "reason": self.reason.value if self.reason else None,
            "frontier": [list(c) for c in self.frontier],
            "complex_digest": self.complex_digest,
        }


def _check_input(K: Complex, o: int):
    m = K.top_dim
    rep = validate(K, m, geometry=False)
    if not (rep.is_closed_pseudomanifold and rep.is_strongly_connected and rep.is_orientable):
        raise InvalidInput(f"complex is not a closed orientable strongly connected {m}-pseudomanifold")
    if (o,) not in K:
        raise VertexNotInComplex(f"origin {o} is not a vertex")


def admissible(e: Cell, boundary: set) -> bool:
    """Whether removing ``e`` keeps the removed region a ball.

    ``e`` must meet the current boundary in at least one and at most m of its
    facets, and every face of ``e`` lying on the boundary must be a face of one
    of those facets.
    """
    shared = [f for f in boundary_cells(e) if f in boundary]
    if not shared or len(shared) == len(e):
        return False
    bd_faces = closure(boundary)
    allowed = closure(shared)
    return all(f in allowed for f in faces(e) if f != e and f in bd_faces)


def boundary_is_sphere_like(cells) -> bool:
    """Closed, strongly connected, orientable (m-1)-pseudomanifold (chi = 2 when 2-dimensional)."""
    if not cells:
        return False
    S = Complex(closure(cells))
    k = S.top_dim
    if k >= 1 and any(len(S.coboundary[f]) != 2 for f in S.cells(k - 1)):
        return False
    if len(strong_components(S, k=k)) != 1 or orient(cells) is None:
        return False
    return k != 2 or S.euler_characteristic == 2


def _priority(cell, dist):
    ds = [dist[v] for v in cell]
    top = max(ds)
    return (-top, -ds.count(top), cell)


def shell(K: Complex, o: int, e0: Cell | None = None) -> ShellingTrace:
    """Remove top cells farthest-first from ``o`` until only its star remains."""
    _check_input(K, o)
    m = K.top_dim
    dist = distance_field(K, m, o).dist
    star = {c for c in K.vertex_cells[o]}
    tops = K.cells(m)
    if e0 is None:
        e0 = min((c for c in tops if o not in c), key=lambda c: _priority(c, dist))
    else:
        e0 = make_cell(e0)
        if e0 not in tops:
            raise InvalidInput(f"{e0} is not a top cell")
        if o in e0:
            raise OriginInFirstCell(f"first cell {e0} contains the origin {o}")

    boundary = set(boundary_cells(e0))
    removed = {e0}
    removals = [(e0, boundary_hash(boundary))]
    digest = K.digest()
    # candidate set: unremoved non-star cells with a facet on the boundary
    cands = {d for f in boundary for d in K.coboundary[f] if d not in removed and d not in star}
    while True:
        if len(removed) + len(star) == len(tops):
            return ShellingTrace(o, e0, tuple(removals), Outcome.SUCCESS, complex_digest=digest)
        ok = [c for c in cands if admissible(c, boundary)]
        if not ok:
            log.info("shelling stuck after %d removals with %d candidates", len(removals), len(cands))
            return ShellingTrace(o, e0, tuple(removals), Outcome.OBSTRUCTED,
                                 ObstructionReason.NO_ADMISSIBLE_CANDIDATE, tuple(sorted(boundary)),
                                 digest, tuple(sorted(cands)))
        e = min(ok, key=lambda c: _priority(c, dist))
        facets = boundary_cells(e)
        boundary ^= facets
        removed.add(e)
        cands.discard(e)
        for f in facets:
            if f in boundary:
                cands.update(d for d in K.coboundary[f] if d not in removed and d not in star)
        removals.append((e, boundary_hash(boundary)))
        if not boundary_is_sphere_like(boundary):
            return ShellingTrace(o, e0, tuple(removals), Outcome.OBSTRUCTED,
                                 ObstructionReason.DEGENERATE_BOUNDARY, tuple(sorted(boundary)), digest)


@dataclass(frozen=True)
class TraceCheck:
    ok: bool
    step: int | None = None
    message: str = ""

    def __bool__(self):
        return self.ok


def verify_trace(K: Complex, trace: ShellingTrace) -> TraceCheck:
    """Replay a trace against ``K`` and re-check every invariant."""
    if trace.complex_digest and trace.complex_digest != K.digest():
        return TraceCheck(False, None, "trace was produced for a different complex")
    m = K.top_dim
    tops = K.cells(m)
    o = trace.origin
    if (o,) not in K:
        return TraceCheck(False, None, f"origin {o} not in complex")
    star = set(K.vertex_cells[o])
    if not trace.removals or trace.removals[0][0] != trace.first_cell:
        return TraceCheck(False, 0, "first removal is not the recorded first cell")
    boundary = set()
    removed = set()
    for i, (e, h) in enumerate(trace.removals):
        if e not in tops or e in removed:
            return TraceCheck(False, i, f"{e} is not an unremoved top cell")
        if o in e:
            return TraceCheck(False, i, f"{e} contains the origin")
        if i == 0:
            boundary = set(boundary_cells(e))
        else:
            if not admissible(e, boundary):
                return TraceCheck(False, i, f"{e} does not meet the boundary in a facet disk")
            boundary ^= boundary_cells(e)
        removed.add(e)
        if boundary_hash(boundary) != h:
            return TraceCheck(False, i, "boundary hash mismatch")
        degenerate = not boundary_is_sphere_like(boundary)
        last = i == len(trace.removals) - 1
        if degenerate and not (last and trace.reason == ObstructionReason.DEGENERATE_BOUNDARY):
            return TraceCheck(False, i, "boundary is not a closed connected orientable pseudomanifold")
    if trace.outcome == Outcome.SUCCESS:
        if set(tops) - removed != star:
            return TraceCheck(False, len(trace.removals), "remaining cells are not the star of the origin")
    return TraceCheck(True)


@dataclass(frozen=True)
class Certificate:
    verdict: Verdict
    trace: ShellingTrace
    message: str

    def as_dict(self) -> dict:
        return {"verdict": self.verdict.value, "message": self.message, "trace": self.trace.as_dict()}


def sphere_certificate(K: Complex, o: int, e0: Cell | None = None) -> Certificate:
    """Run the shelling and turn its outcome into a verdict.

    A complete shelling certifies a sphere; its reverse order rebuilds
    ``K - e0`` from the star of ``o``. A boundary that stops being a
    pseudomanifold is the negative signal. A stuck but valid frontier is
    inconclusive unless the Euler characteristic already rules out a sphere.
    """
    trace = shell(K, o, e0)
    m = K.top_dim
    if trace.outcome == Outcome.SUCCESS:
        return Certificate(Verdict.SPHERE, trace,
                           f"sphere certificate: K is a PL {m}-sphere ({len(trace.removals)} removals)")
    if trace.reason == ObstructionReason.DEGENERATE_BOUNDARY:
        return Certificate(Verdict.NOT_SIMPLY_CONNECTED, trace,
                           "moving boundary degenerated: not simply connected")
    chi = K.euler_characteristic
    if chi != 1 + (-1) ** m:
        return Certificate(Verdict.NOT_A_SPHERE, trace,
                           f"shelling obstructed and Euler characteristic {chi} differs from a {m}-sphere's")
    return Certificate(Verdict.INCONCLUSIVE, trace,
                       f"shelling obstructed after {len(trace.removals)} removals; no admissible cell")
