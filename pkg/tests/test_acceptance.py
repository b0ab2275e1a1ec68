"""End-to-end acceptance checks, one test per criterion.

Each test prints ``criterion N: PASS`` or ``criterion N: FAIL (...)`` straight
to the terminal, so the summary survives pytest's output capture.
"""

import dataclasses
import os
import random
import subprocess
import sys
import time
from contextlib import contextmanager
from itertools import combinations

import networkx as nx
import numpy as np
import pytest

from plsphere.complex import validate
from plsphere.contraction import (
    ContractionSequence,
    Curve,
    gradual_move_cell,
    search_contraction,
    validate_contraction,
)
from plsphere.errors import BudgetExhausted, NotTwoComponents
from plsphere.fixtures import (
    barycentric_simplex4,
    centroid_subdivided_simplex4,
    simplex_boundary,
    solid_simplex,
    sphere_times_circle,
    torus7,
)
from plsphere.metrics import distance_field, k_cell_distance
from plsphere.projection import project_sequence
from plsphere.separation import Location, separate
from plsphere.shelling import Outcome, boundary_hash, shell, verify_trace
from plsphere.subdivision import barycentric_subdivide_cell, split_edge

from conftest import DATA, random_connected_complex

S4 = list(combinations([1, 2, 3, 4], 3))


@pytest.fixture
def criterion(capsys):
    @contextmanager
    def run(n, limit=None):
        start = time.perf_counter()
        try:
            yield
            elapsed = time.perf_counter() - start
            if limit is not None:
                assert elapsed < limit, f"took {elapsed:.2f} s, limit {limit} s"
        except AssertionError as exc:
            with capsys.disabled():
                first = str(exc).splitlines()[0] if str(exc) else "assertion failed"
                print(f"\ncriterion {n}: FAIL ({first})")
            raise
        with capsys.disabled():
            print(f"\ncriterion {n}: PASS ({time.perf_counter() - start:.2f} s)")
    return run


def test_criterion_1_validation(criterion):
    with criterion(1, limit=1):
        for m in (1, 2, 3, 4):
            rep = validate(simplex_boundary(m), m, geometry=False)
            assert rep.is_closed_pseudomanifold and rep.is_orientable and rep.is_strongly_connected
            assert rep.euler_characteristic == 1 + (-1) ** m
        assert not validate(solid_simplex(3), 3).is_closed_pseudomanifold


def test_criterion_2_metrics(criterion):
    rng = random.Random(2024)
    corpus2 = [random_connected_complex(rng, 2, 30) for _ in range(100)]
    corpus3 = [random_connected_complex(rng, 3, 30) for _ in range(100)]
    with criterion(2, limit=10):
        for K in corpus2:
            G = nx.Graph(list(K.cells(1)))
            o = K.vertices[0]
            oracle = nx.single_source_shortest_path_length(G, o)
            assert distance_field(K, 1, o).dist == {v: oracle[v] for v in K.vertices}
        violations = []
        for k, corpus in ((2, corpus2), (3, corpus3)):
            for K in corpus:
                table = {v: distance_field(K, k, v).dist for v in K.vertices}
                o = K.vertices[-1]
                assert all(table[o][v] == k_cell_distance(K, k, o, v) for v in K.vertices)
                for x in K.vertices:
                    for y in K.vertices:
                        assert table[x][y] == table[y][x]
                for x, y, z in combinations(K.vertices, 3):
                    for a, b, c in ((x, y, z), (y, z, x), (z, x, y)):
                        if table[a][c] > table[a][b] + table[b][c]:
                            violations.append((k, table[a][c], table[a][b], table[b][c]))
        if violations:
            per_k = {k: sum(1 for v in violations if v[0] == k) for k in (2, 3)}
            # prefer a finite witness: pinched complexes also give inf > finite
            k, ac, ab, bc = min(violations, key=lambda v: (v[1] == float("inf"), v))
            raise AssertionError(f"triangle inequality fails {per_k}, e.g. d^({k}) {ac} > {ab} + {bc}")


def _point_in_cell(p, pts):
    """Barycentric coordinates of ``p`` in the simplex spanned by ``pts``, or None."""
    A = np.vstack([np.array(pts).T, np.ones(len(pts))])
    lam, *_ = np.linalg.lstsq(A, np.append(p, 1.0), rcond=None)
    if np.linalg.norm(A @ lam - np.append(p, 1.0)) > 1e-9 or lam.min() < -1e-9:
        return None
    return lam


def _covered(K, points):
    tops = [[K.coords[v] for v in c] for c in K.cells(K.top_dim)]
    return all(any(_point_in_cell(p, t) is not None for t in tops) for p in points)


def _sample(K, rng, n):
    tops = sorted(K.cells(K.top_dim))
    out = []
    for _ in range(n):
        c = rng.choice(tops)
        w = rng.dirichlet(np.ones(len(c)))
        out.append(sum(wi * np.array(K.coords[v]) for wi, v in zip(w, c)))
    return out


def test_criterion_3_subdivision(criterion):
    with criterion(3, limit=30):
        K, rec = barycentric_subdivide_cell(simplex_boundary(2), (1, 2, 3))
        assert sum(1 for t in K.cells(2) if all(v in rec.new_vertices or v in (1, 2, 3) for v in t)) == 6
        K, rec = barycentric_subdivide_cell(simplex_boundary(3), (1, 2, 3, 4))
        assert sum(1 for t in K.cells(3) if all(v in rec.new_vertices or v in (1, 2, 3, 4) for v in t)) == 24

        rng = random.Random(3)
        nrng = np.random.default_rng(3)
        ops = 0
        while ops < 200:
            K = simplex_boundary(3, coords=True)
            for _ in range(5):
                before = K
                if rng.random() < 0.5:
                    K, _ = split_edge(K, rng.choice(sorted(K.cells(1))))
                else:
                    K, _ = barycentric_subdivide_cell(K, rng.choice(sorted(K.cells(rng.randint(1, 3)))))
                ops += 1
                rep = validate(K, 3, geometry=False)
                assert rep.ok and rep.is_orientable and rep.euler_characteristic == 0
                assert _covered(K, _sample(before, nrng, 4))
                assert _covered(before, _sample(K, nrng, 4))


def test_criterion_4_separation(criterion):
    with criterion(4, limit=1):
        K = simplex_boundary(3)
        assert sorted(separate(K, S4).sizes()) == [1, 4]
        for t in S4:
            rest = [s for s in S4 if s != t]
            with pytest.raises(NotTwoComponents) as info:
                separate(K, rest, check=False)
            assert info.value.n_components == 1
        K2, rec = barycentric_subdivide_cell(K, (1, 2, 3, 4))
        sizes = sorted(separate(K2, rec.apply_to(S4)).sizes())
        assert sizes == [4, 24], f"sizes after subdivision are {sizes}, expected [4, 24]"


def test_criterion_5_contraction(criterion):
    with criterion(5, limit=30):
        K = simplex_boundary(2)
        G = nx.Graph(list(K.cells(1)))
        cycles = {Curve.from_vertices(c) for c in nx.simple_cycles(G.to_directed()) if len(c) >= 3 and 0 in c}
        assert cycles
        for c in sorted(cycles, key=lambda c: c.canonical_form):
            seq = search_contraction(K, c, 0, budget=100)
            assert validate_contraction(K, seq)
        T = torus7()
        with pytest.raises(BudgetExhausted):
            search_contraction(T, Curve.from_vertices([0, 1, 2]), 0, budget=10_000)


def test_criterion_6_projection(criterion):
    K = centroid_subdivided_simplex4()
    sep = separate(K, S4)
    omega = ContractionSequence(0, [Curve.from_vertices(w) for w in
                                    ([0, 1, 5, 3], [0, 1, 2, 5, 3], [0, 1, 2, 3], [0, 1, 2])])
    with criterion(6, limit=5):
        assert validate_contraction(K, omega)
        assert any(5 in c for c in omega.curves)
        r = project_sequence(K, sep, omega)
        K2, sep2 = r.final_complex, r.final_separation
        new = r.new_sequence
        assert validate_contraction(K2, new)
        # everything in D and B
        assert all(sep2.locate(e) != Location.IN_D_PRIME for c in new.curves for e in c.edges)
        # (a) the part strictly inside D is untouched
        for old, proj in zip(omega.curves, r.projected):
            inner = {e for e in old.edges if sep2.locate(e) == Location.IN_D}
            assert inner == {e for e in proj.edges if sep2.locate(e) == Location.IN_D}
        # (b) simple curves: a closed walk visiting each vertex once
        for c in new.curves:
            assert len(c.canonical_form) == len(c.edges) == len(set(c.canonical_form))
        # (c) consecutive curves differ by one 2-cell boundary
        for a, b in zip(new.curves, new.curves[1:]):
            assert gradual_move_cell(a, b, K2) is not None
        # (d) projecting again changes nothing
        again = project_sequence(K2, sep2, new)
        assert again.new_sequence == new and not again.subdivision_log


def _mutations(K, trace):
    rem = list(trace.removals)
    o = trace.origin
    star_cell = K.vertex_cells[o][0]
    yield dataclasses.replace(trace, removals=())
    yield dataclasses.replace(trace, removals=tuple(rem[:-1]))
    yield dataclasses.replace(trace, removals=tuple([(rem[0][0], boundary_hash([]))] + rem[1:]))
    yield dataclasses.replace(trace, removals=tuple(rem + [(star_cell, rem[-1][1])]))
    yield dataclasses.replace(trace, complex_digest="f" * 64)
    if len(rem) > 2:
        yield dataclasses.replace(trace, removals=tuple(rem[:1] + rem[2:]))
        yield dataclasses.replace(trace, removals=tuple(rem[:1] + rem[:1] + rem[1:]))


def test_criterion_7_shelling(criterion):
    with criterion(7, limit=60):
        successes = []
        for m in (3, 4):
            K = simplex_boundary(m)
            tr = shell(K, 0)
            assert tr.outcome == Outcome.SUCCESS and len(tr.removals) == 1
            successes.append((K, tr))
        B = barycentric_simplex4()
        n_top = len(B.cells(3))
        for o in B.vertices:
            tr = shell(B, o)
            assert tr.outcome == Outcome.SUCCESS
            star = len(B.vertex_cells[o])
            assert len(tr.removals) == n_top - star <= n_top - 1
            successes.append((B, tr))
        for K in (torus7(), sphere_times_circle()):
            tr = shell(K, 0)
            assert tr.outcome == Outcome.OBSTRUCTED
            assert verify_trace(K, tr)
        for K, tr in successes:
            assert verify_trace(K, tr)
            for bad in _mutations(K, tr):
                assert not verify_trace(K, bad)


FIXTURES = ["simplex3", "simplex4", "centroid4", "torus7", "s2s1", "bary4", "solid3"]
COMMANDS = [
    ["validate"],
    ["distance", "--k", "1", "--from", "0", "--field"],
    ["separate", "--surface", "S"],
    ["contract", "--curve", "C", "--base", "0", "--budget", "2000"],
    ["project", "--surface", "S", "--curve", "C", "--base", "0", "--budget", "2000"],
    ["shell", "--origin", "0"],
]


def _cli(args, hash_seed):
    env = dict(os.environ, PYTHONHASHSEED=str(hash_seed))
    out = subprocess.run([sys.executable, "-m", "plsphere", *args, "--format", "structured"],
                         capture_output=True, env=env)
    return out.returncode, out.stdout


def test_criterion_8_determinism(criterion):
    with criterion(8):
        mismatched = []
        for fx in FIXTURES:
            for cmd in COMMANDS:
                args = [cmd[0], str(DATA / f"{fx}.cplx"), *cmd[1:]]
                a, b = _cli(args, 1), _cli(args, 2)
                assert a[1], f"no report for {fx} {cmd[0]}"
                if a != b:
                    mismatched.append(f"{fx} {cmd[0]}")
        assert not mismatched, f"reports differ: {mismatched}"
