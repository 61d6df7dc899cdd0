import pytest

from cubulations import (make_boundary_cube, make_pillow, make_polygon,
                         make_torus_grid)
from cubulations.certificate import certificate, is_isomorphic
from cubulations.moves import (all_sites, apply_move, enumerate_templates,
                               find_sites, fvector_delta, get_template,
                               is_ball)

from conftest import surface_corpus


def template_map(n):
    return {t.name: t for t in enumerate_templates(n)}


def test_census_n1():
    ts = enumerate_templates(1)
    assert len(ts) == 2
    assert all(t.np for t in ts)
    tm = template_map(1)
    assert tm["b1"].delta_f == (2, 2)
    assert tm["b2"].delta_f == (0, 0)
    assert tm["b1"].k == 1 and tm["b2"].k == 2


def test_census_n2():
    ts = enumerate_templates(2)
    assert len(ts) == 4
    assert sum(1 for t in ts if t.np) == 3
    tm = template_map(2)
    assert tm["b1"].delta_f == (4, 8, 4)
    assert tm["b2"].delta_f == (2, 4, 2)
    assert tm["b3"].delta_f == (0, 0, 0)
    non_np = [t for t in ts if not t.np]
    assert len(non_np) == 1
    assert non_np[0].k == 3
    # the non-np side contains a parallel facet pair; b3's sides do not
    axes3 = [f >> 1 for f in tm["b3"].b_facets]
    assert len(set(axes3)) == 3


def test_census_n3():
    ts = enumerate_templates(3)
    assert sum(1 for t in ts if t.np) == 4
    ks = sorted(t.k for t in ts if t.np)
    assert ks == [1, 2, 3, 4]
    for t in ts:
        assert (t.delta_f[0] + t.delta_f[1]) % 4 == 0


def test_is_ball_examples():
    assert is_ball(2, [0])                  # one facet of the 3-cube boundary
    assert not is_ball(2, [0, 1])           # two opposite facets: disconnected
    assert is_ball(2, [0, 2, 3, 4, 5])      # complement of one facet
    assert not is_ball(2, [])
    assert not is_ball(2, range(6))
    assert is_ball(2, [0, 2])
    assert is_ball(2, [0, 2, 4])            # corner triple
    assert is_ball(2, [0, 1, 2])            # parallel-containing strip
    assert is_ball(1, [0])
    assert not is_ball(1, [0, 1])


def test_template_sides_are_balls():
    for n in (1, 2, 3):
        for t in enumerate_templates(n):
            assert is_ball(n, t.b_facets), t.name
            assert is_ball(n, t.bp_facets), t.name


def test_find_sites_bd3(bd3):
    tm = template_map(2)
    assert len(find_sites(bd3, tm["b1"], "forward")) == 6
    # the 5-facet hemisphere is a genuine subcomplex of the cube boundary
    # (the cube boundary is b1 applied to the pillow), so inverse sites exist
    inv = find_sites(bd3, tm["b1"], "inverse")
    assert len(inv) == 6
    back = apply_move(bd3, inv[0]).complex
    assert is_isomorphic(back, make_pillow())
    assert len(find_sites(bd3, tm["b2"], "forward")) == 12
    assert len(find_sites(bd3, tm["b3"], "forward")) == 8


def test_find_sites_pillow(pillow):
    tm = template_map(2)
    # the pillow's squares share four edges, not one: the two-square ball
    # cannot embed (cell injectivity fails), so b2 has no sites
    assert find_sites(pillow, tm["b2"], "forward") == []
    assert len(find_sites(pillow, tm["b1"], "forward")) == 2
    r = apply_move(pillow, find_sites(pillow, tm["b1"], "forward")[0])
    assert is_isomorphic(r.complex, make_boundary_cube(2))


def test_apply_b1_counts(bd3):
    tm = template_map(2)
    r = apply_move(bd3, find_sites(bd3, tm["b1"], "forward")[0])
    assert r.complex.f_vector() == (12, 20, 10)
    assert r.complex.validate("closed-manifold").ok


def test_apply_b3_is_f_neutral(bd3):
    tm = template_map(2)
    r = apply_move(bd3, find_sites(bd3, tm["b3"], "forward")[0])
    assert r.complex.f_vector() == bd3.f_vector()
    assert r.complex.euler_characteristic() == 2


@pytest.mark.parametrize("name,cmaker", [
    ("bd3", lambda: make_boundary_cube(2)),
    ("pillow", make_pillow),
    ("poly4", lambda: make_polygon(4)),
    ("torus33", lambda: make_torus_grid(3, 3)),
])
def test_roundtrip_every_site(name, cmaker):
    c = cmaker()
    tm = template_map(c.dim)
    cert0 = certificate(c)
    fv = c.f_vector()
    chi = c.euler_characteristic()
    for site in all_sites(c):
        t = tm[site.template]
        res = apply_move(c, site)
        expected = tuple(f + d for f, d in zip(fv, t.delta(site.orientation)))
        assert res.complex.f_vector() == expected, (site.template,
                                                    site.orientation)
        assert res.complex.euler_characteristic() == chi
        flip = "inverse" if site.orientation == "forward" else "forward"
        back_sites = [s for s in find_sites(res.complex, t, flip)
                      if set(s.cubes) == set(res.new_cubes)]
        assert back_sites, "no inverse site at the freshly written cells"
        back = apply_move(res.complex, back_sites[0])
        assert certificate(back.complex) == cert0


def test_apply_never_rejected_on_corpus():
    for name, c in surface_corpus():
        for site in all_sites(c):
            apply_move(c, site)         # raises MoveRejected on failure


def test_sites_deterministic(bd3):
    tm = template_map(2)
    a = find_sites(bd3, tm["b2"], "forward")
    b = find_sites(make_boundary_cube(2), tm["b2"], "forward")
    assert [(s.cubes, s.syms) for s in a] == [(s.cubes, s.syms) for s in b]


def test_fvector_delta_accessor():
    tm = template_map(2)
    assert fvector_delta(tm["b1"]) == (4, 8, 4)
    assert get_template(2, "b1").delta("inverse") == (-4, -8, -4)
    with pytest.raises(KeyError):
        get_template(2, "nope")


def test_torus_has_no_corner_sites(torus33):
    # every torus-grid vertex meets four squares, so the three-square corner
    # ball cannot sit inside it
    tm = template_map(2)
    assert find_sites(torus33, tm["b3"], "forward") == []
