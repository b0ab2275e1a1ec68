"""Simple closed edge curves and their contraction sequences.

Two curves are one *move* apart when the symmetric difference of their edge
sets is the boundary of a single 2-cell. A contraction sequence is a list of
curves through a base point, each one move from the next, ending at the
boundary of a 2-cell that contains the base point.
"""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass

from .complex import Complex, boundary_cells, make_cell
from .errors import BudgetExhausted, CellNotInComplex, InvalidInput

DEFAULT_BUDGET = 10_000


def _edge(a, b):
    return (a, b) if a < b else (b, a)


def _cycle_order(edges) -> tuple[int, ...] | None:
    """Vertex order of a single simple cycle, or None if ``edges`` is not one."""
    if len(edges) < 3:
        return None
    nbrs = defaultdict(list)
    for a, b in edges:
        nbrs[a].append(b)
        nbrs[b].append(a)
    if any(len(n) != 2 for n in nbrs.values()):
        return None
    start = min(nbrs)
    first = min(nbrs[start])
    order = [start, first]
    while True:
        a, b = nbrs[order[-1]]
        nxt = a if a != order[-2] else b
        if nxt == start:
            break
        order.append(nxt)
    if len(order) != len(nbrs):
        return None
    return tuple(order)


class Curve:
    """A simple closed curve given by its edges.

    ``canonical_form`` lists the vertices starting at the smallest one and
    heading toward its smaller neighbour; it identifies the curve regardless
    of how the cycle was written down.
    """

    __slots__ = ("edges", "canonical_form")

    def __init__(self, edges):
        es = frozenset(make_cell(e) for e in edges)
        if any(len(e) != 2 for e in es):
            raise InvalidInput("curve edges must be 1-cells")
        order = _cycle_order(es)
        if order is None:
            raise InvalidInput("edges do not form one simple cycle")
        self.edges = es
        self.canonical_form = order

    @classmethod
    def from_vertices(cls, seq) -> "Curve":
        seq = list(seq)
        if len(seq) > 1 and seq[0] == seq[-1]:
            seq = seq[:-1]
        if len(set(seq)) != len(seq):
            raise InvalidInput(f"vertex repeated in {seq}")
        return cls(_edge(seq[i], seq[(i + 1) % len(seq)]) for i in range(len(seq)))

    @property
    def vertices(self) -> frozenset:
        return frozenset(self.canonical_form)

    def __len__(self):
        return len(self.edges)

    def __contains__(self, v):
        return v in self.vertices

    def __eq__(self, other):
        return isinstance(other, Curve) and self.edges == other.edges

    def __hash__(self):
        return hash(self.edges)

    def __repr__(self):
        return f"Curve({'-'.join(map(str, self.canonical_form))})"

    def walk_from(self, v) -> tuple[int, ...]:
        """Vertices in canonical orientation, rotated to start at ``v``."""
        i = self.canonical_form.index(v)
        return self.canonical_form[i:] + self.canonical_form[:i]

    def flip(self, t) -> "Curve | None":
        """The curve after exchanging its part on the 2-cell ``t``, if still simple."""
        return simple_curve_or_none(self.edges.symmetric_difference(boundary_cells(t)))


def simple_curve_or_none(edges) -> Curve | None:
    try:
        return Curve(edges)
    except InvalidInput:
        return None


@dataclass(frozen=True)
class ContractionSequence:
    base_point: int
    curves: tuple

    def __post_init__(self):
        object.__setattr__(self, "curves", tuple(self.curves))

    def __len__(self):
        return len(self.curves)

    def moves(self):
        return [gradual_move_cell(a, b) for a, b in zip(self.curves, self.curves[1:])]


def gradual_move_cell(c1: Curve, c2: Curve, K: Complex | None = None):
    """The 2-cell whose boundary is the symmetric difference, or None."""
    diff = c1.edges ^ c2.edges
    if len(diff) != 3:
        return None
    vs = {v for e in diff for v in e}
    if len(vs) != 3:
        return None
    t = tuple(sorted(vs))
    if K is not None and t not in K:
        return None
    return t


def is_terminal(K: Complex, c: Curve, p: int) -> bool:
    if len(c) != 3 or p not in c:
        return False
    return tuple(sorted(c.vertices)) in K


@dataclass(frozen=True)
class ContractionReport:
    ok: bool
    index: int | None = None
    violation: str | None = None

    def __bool__(self):
        return self.ok


def validate_contraction(K: Complex, seq: ContractionSequence) -> ContractionReport:
    """Check every sequence invariant; report the first offending index."""
    p = seq.base_point
    if not seq.curves:
        return ContractionReport(False, 0, "empty sequence")
    for i, c in enumerate(seq.curves):
        missing = [e for e in sorted(c.edges) if e not in K]
        if missing:
            return ContractionReport(False, i, f"edge {missing[0]} not in complex")
        if p not in c:
            return ContractionReport(False, i, f"curve does not contain base point {p}")
        if i and gradual_move_cell(seq.curves[i - 1], c, K) is None:
            return ContractionReport(False, i, "not a single 2-cell move from the previous curve")
    if not is_terminal(K, seq.curves[-1], p):
        return ContractionReport(False, len(seq.curves) - 1, "non-terminal final curve")
    return ContractionReport(True)


def _neighbours(K: Complex, c: Curve, p: int, allowed=None):
    tris = set()
    for e in c.edges:
        tris.update(K.coboundary[e])
    if allowed is not None:
        tris &= allowed
    for t in sorted(tris):
        nxt = c.flip(t)
        if nxt is not None and p in nxt:
            yield t, nxt


def search_curves(K: Complex, start: Curve, p: int, is_goal, budget: int, allowed=None):
    """Breadth-first search over simple curves through ``p``.

    Returns the list of curves from ``start`` to the first goal reached.
    Expansion order is deterministic (2-cells in sorted order), so among the
    shortest solutions the one with the lexicographically least move list wins.
    """
    if is_goal(start):
        return [start]
    parent = {start: None}
    queue = deque([start])
    expanded = 0
    while queue:
        if expanded >= budget:
            raise BudgetExhausted(f"budget of {budget} expanded curves used up", expanded)
        cur = queue.popleft()
        expanded += 1
        for _, nxt in _neighbours(K, cur, p, allowed):
            if nxt in parent:
                continue
            parent[nxt] = cur
            if is_goal(nxt):
                path = [nxt]
                while parent[path[-1]] is not None:
                    path.append(parent[path[-1]])
                return path[::-1]
            queue.append(nxt)
    raise BudgetExhausted(
        f"all {expanded} reachable curves expanded without reaching the goal",
        expanded,
        space_exhausted=True,
    )


def search_contraction(K: Complex, C: Curve, p: int, budget: int = DEFAULT_BUDGET) -> ContractionSequence:
    """Find a contraction of ``C`` to a 2-cell boundary through ``p``.

    Raises BudgetExhausted when no terminal curve is found; that outcome is
    inconclusive, since contractions through non-simple curves are not searched.
    """
    if p not in C:
        raise InvalidInput(f"base point {p} is not on the curve")
    for e in C.edges:
        if e not in K:
            raise CellNotInComplex(f"curve edge {e} is not in the complex")
    path = search_curves(K, C, p, lambda c: is_terminal(K, c, p), budget)
    return ContractionSequence(p, path)
