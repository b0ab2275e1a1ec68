import random
from itertools import combinations

import networkx as nx
import pytest

from plsphere.complex import star_and_link
from plsphere.errors import NotASphere, NotClosed, NotConnected, NotTwoComponents
from plsphere.fixtures import barycentric_simplex4, simplex_boundary, sphere_times_circle
from plsphere.separation import Location, check_surface, separate
from plsphere.subdivision import barycentric_subdivide_cell

S4 = list(combinations([1, 2, 3, 4], 3))


def dual_components(K, cut):
    """Oracle: connected components of the top-cell adjacency graph with the
    faces in ``cut`` removed."""
    m = K.top_dim
    G = nx.Graph()
    G.add_nodes_from(K.cells(m))
    for f in K.cells(m - 1):
        if f in cut:
            continue
        a, b = sorted(K.coboundary[f])
        G.add_edge(a, b)
    return sorted(len(c) for c in nx.connected_components(G))


def level_sphere(i, levels=3):
    return [tuple(4 * i + v for v in t) for t in combinations(range(4), 3)]


def base_torus(levels=3):
    """The boundary of base triangle [0,1,2] swept around the circle."""
    tris = []
    for i in range(levels):
        j = (i + 1) % levels
        for a, b in [(0, 1), (0, 2), (1, 2)]:
            ai, bi, aj, bj = 4 * i + a, 4 * i + b, 4 * j + a, 4 * j + b
            tris.append(tuple(sorted((ai, bi, bj))))
            tris.append(tuple(sorted((ai, aj, bj))))
    return tris


def test_simplex_boundary_splits_one_four():
    K = simplex_boundary(3)
    res = separate(K, S4)
    assert res.sizes() == (1, 4)
    assert res.inside == {(1, 2, 3, 4)}
    assert res.vertex_location[0] == Location.IN_D_PRIME
    assert all(res.vertex_location[v] == Location.ON_B for v in (1, 2, 3, 4))
    assert dual_components(K, set(S4)) == [1, 4]


def test_after_barycentric_subdivision_both_sides_have_24():
    K2, rec = barycentric_subdivide_cell(simplex_boundary(3), (1, 2, 3, 4))
    S = rec.apply_to(S4)
    assert len(S) == 24
    res = separate(K2, S)
    assert sorted(res.sizes()) == dual_components(K2, S) == [24, 24]


def test_removing_a_triangle_leaves_one_component():
    K = simplex_boundary(3)
    with pytest.raises(NotClosed):
        separate(K, S4[1:])
    with pytest.raises(NotTwoComponents) as info:
        separate(K, S4[1:], check=False)
    assert info.value.n_components == 1


def test_level_sphere_in_sphere_times_circle_does_not_separate():
    K = sphere_times_circle()
    S = check_surface(K, level_sphere(0))
    assert S.euler_characteristic == 2
    with pytest.raises(NotTwoComponents):
        separate(K, S)
    # two level spheres cut the circle direction twice
    assert dual_components(K, set(level_sphere(0)) | set(level_sphere(1))) == [12, 24]


def test_two_level_spheres_are_not_one_surface():
    K = sphere_times_circle()
    with pytest.raises(NotConnected):
        check_surface(K, level_sphere(0) + level_sphere(1))


def test_torus_surface_is_rejected_as_sphere():
    K = sphere_times_circle()
    T = base_torus()
    assert all(t in K for t in T)
    with pytest.raises(NotASphere):
        check_surface(K, T)
    res = separate(K, T, check=False)
    assert sorted(res.sizes()) == dual_components(K, set(T))


def test_vertex_links_separate_star_from_rest():
    K = barycentric_simplex4()
    rng = random.Random(7)
    for v in rng.sample(K.vertices, 6):
        _, link = star_and_link(K, (v,))
        res = separate(K, link.cells(2))
        star = frozenset(K.vertex_cells[v])
        assert star in (res.inside, res.outside)
        assert res.inside | res.outside == K.cells(3)
        assert not res.inside & res.outside
        expected = Location.IN_D if star == res.inside else Location.IN_D_PRIME
        assert res.locate((v,)) == expected


def test_locate_cells():
    res = separate(simplex_boundary(3), S4)
    assert res.locate((1, 2)) == Location.ON_B
    assert res.locate((0, 1)) == Location.IN_D_PRIME
    assert res.locate((0, 1, 2)) == Location.IN_D_PRIME
    assert res.swapped().locate((0, 1)) == Location.IN_D
