import math

import pytest

from cubulations import (doubling, make_boundary_cube, make_klein_grid,
                         make_pillow, make_polygon, make_torus_grid)
from cubulations.complex_core import (Cubulation, boundary_of_simplex,
                                      from_triangulation)
from cubulations.symmetry import identity_perm

from conftest import surface_corpus


def boundary_cube_f_oracle(m):
    """Face counts of the m-cube boundary by direct binomial counting."""
    return tuple(math.comb(m, k) * 2 ** (m - k) for k in range(m))


@pytest.mark.parametrize("m", [2, 3, 4, 5])
def test_boundary_cube_counts(m):
    c = make_boundary_cube(m - 1)
    assert c.f_vector() == boundary_cube_f_oracle(m)
    assert c.validate("closed-manifold").ok


def test_boundary_cube_chi():
    assert make_boundary_cube(2).euler_characteristic() == 2
    assert make_boundary_cube(3).euler_characteristic() == 0


def test_pillow():
    p = make_pillow()
    assert p.f_vector() == (4, 4, 2)
    assert p.validate("closed-manifold").ok
    assert p.euler_characteristic() == 2


def test_polygon():
    assert make_polygon(4).f_vector() == (4, 4)
    assert make_polygon(7).f_vector() == (7, 7)
    assert make_polygon(2).validate("closed-manifold").ok
    with pytest.raises(ValueError):
        make_polygon(1)


def test_grids():
    t = make_torus_grid(3, 3)
    assert t.f_vector() == (9, 18, 9)
    assert t.euler_characteristic() == 0
    assert t.validate("closed-manifold").ok
    k = make_klein_grid(3, 3)
    assert k.f_vector() == (9, 18, 9)
    assert k.euler_characteristic() == 0
    assert k.validate("closed-manifold").ok
    with pytest.raises(ValueError):
        make_torus_grid(1, 3)
    assert make_torus_grid(2, 2).validate("closed-manifold").ok


def test_self_identification_reported_not_raised():
    # single square with facet 0 paired to its own facet 1
    att = identity_perm(1)
    pairings = {(0, 0): (0, 1, att), (0, 1): (0, 0, att)}
    c = Cubulation(2, 1, pairings)
    rep = c.validate("closed-manifold")
    assert not rep.ok
    assert any("self-identification" in p for p in rep.problems)


def test_non_involutive_reported():
    att = identity_perm(1)
    pairings = {(0, 0): (1, 0, att)}
    c = Cubulation(2, 2, pairings)
    rep = c.validate("complex")
    assert not rep.ok
    assert any("involutive" in p for p in rep.problems)


def test_unpaired_facets_fail_closed_mode():
    c = Cubulation.from_gluings(2, 2, [(0, 0, 1, 0)])
    assert not c.validate("closed-manifold").ok
    assert c.validate("manifold-with-boundary").ok


def test_derive_cells_deterministic(bd3):
    a = bd3.derive_cells()
    b = make_boundary_cube(2).derive_cells()
    assert a.by_dim == b.by_dim
    # every descriptor appears in exactly one class
    total = sum(len(cls) for d in a.by_dim for cls in d)
    assert total == bd3.num_cubes * 3 ** bd3.dim


def test_doubling_counts():
    assert doubling(make_polygon(3)).f_vector() == (6, 6)
    d = doubling(make_boundary_cube(2))
    assert d.f_vector() == (26, 48, 24)
    assert d.validate("closed-manifold").ok
    dp = doubling(make_pillow())
    assert dp.f_vector() == (10, 16, 8)
    assert dp.validate("closed-manifold").ok


def test_doubling_preserves_chi_and_top_count():
    for name, c in surface_corpus():
        d = doubling(c)
        assert d.euler_characteristic() == c.euler_characteristic(), name
        assert d.f_vector()[-1] == 4 * c.f_vector()[-1], name
        assert d.validate("closed-manifold").ok, name


def test_doubling_3d():
    b = make_boundary_cube(3)
    d = doubling(b)
    assert d.f_vector()[-1] == 8 * b.f_vector()[-1]
    assert d.euler_characteristic() == 0
    assert d.validate("closed-manifold").ok


def test_from_triangulation_tetra():
    c = from_triangulation(boundary_of_simplex(2))
    assert c.f_vector() == (14, 24, 12)
    assert c.euler_characteristic() == 2
    assert c.validate("closed-manifold").ok


def test_from_triangulation_circle():
    c = from_triangulation(boundary_of_simplex(1))
    assert c.f_vector() == (6, 6)


def test_from_triangulation_3sphere():
    c = from_triangulation(boundary_of_simplex(3))
    assert c.f_vector()[-1] == 5 * 4
    assert c.euler_characteristic() == 0
    assert c.validate("closed-manifold").ok


def test_from_triangulation_rejects_bad_input():
    with pytest.raises(ValueError):
        from_triangulation([(0, 1, 2), (0, 1, 2)])      # duplicate simplex
    with pytest.raises(ValueError):
        from_triangulation([(0, 1, 2), (0, 1, 3)])       # open edges
    with pytest.raises(ValueError):
        from_triangulation([(0, 1, 1), (0, 1, 2)])       # degenerate


def test_standardness():
    assert make_boundary_cube(2).is_standard()
    p = make_pillow()
    assert not p.is_standard()
    # the pillow's 1-skeleton is a 4-cycle, hence standard up to dim 1
    assert p.is_k_standard(0)
    assert p.is_k_standard(1)
    assert not p.is_k_standard(2)
    assert make_torus_grid(3, 3).is_standard()
    assert not make_torus_grid(2, 2).is_standard()


def test_validator_accepts_3_torus_style_product():
    # two-cube hyper-pillow: the double of a 3-ball is the 3-sphere
    gl = [(0, f, 1, f) for f in range(6)]
    c = Cubulation.from_gluings(3, 2, gl)
    assert c.validate("closed-manifold").ok
    assert c.euler_characteristic() == 0
    assert c.f_vector() == (8, 12, 6, 2)
