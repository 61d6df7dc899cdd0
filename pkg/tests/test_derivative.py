import random

import pytest

from cubulations import (doubling, make_boundary_cube, make_pillow,
                         make_polygon, make_torus_grid)
from cubulations.complex_core import boundary_of_simplex, from_triangulation
from cubulations.derivative import (babson_chan_check, bordism_invariant_s2,
                                    cancelling_pairs, canonical_code,
                                    classify_surface, derivative_complex,
                                    homotopy_census, strata, trace_circles)
from cubulations.moves import all_sites, apply_move, enumerate_templates, \
    find_sites

from conftest import (NEITHER_PATH, SEMI_SIMPLE_PATH, apply_seq, random_walk,
                      surface_corpus)


def test_components_bd3(bd3):
    dc = derivative_complex(bd3)
    assert dc.component_count == 3
    assert all(len(comp) == 4 for comp in dc.components)


def test_components_pillow(pillow):
    dc = derivative_complex(pillow)
    assert dc.component_count == 2
    assert all(len(comp) == 2 for comp in dc.components)


def test_components_torus(torus33):
    dc = derivative_complex(torus33)
    assert dc.component_count == 6


def test_components_3d():
    dc = derivative_complex(make_boundary_cube(3))
    # four axis classes of the 4-cube, one equatorial component each
    assert dc.component_count == 4


def test_trace_bd3(bd3):
    tr = trace_circles(bd3)
    assert tr.ns_total == 0
    assert len(tr.double_points) == 6
    assert all(a != b for a, b in tr.double_points.values())
    assert sum(len(c) for c in tr.components) == 12


def test_trace_pillow(pillow):
    tr = trace_circles(pillow)
    assert tr.ns_total == 0
    assert len(tr.double_points) == 2
    assert all(a != b for a, b in tr.double_points.values())


def test_double_point_count_is_f2():
    for name, c in surface_corpus():
        tr = trace_circles(c)
        assert len(tr.double_points) == c.f_vector()[2], name
        assert tr.ns_total == sum(tr.ns_per_component), name


def test_b1_adds_embedded_circle(bd3):
    tm = {t.name: t for t in enumerate_templates(2)}
    before = trace_circles(bd3)
    r = apply_move(bd3, find_sites(bd3, tm["b1"], "forward")[0]).complex
    after = trace_circles(r)
    assert after.component_count == before.component_count + 1
    assert all(x == 0 for x in after.ns_per_component)


def test_canonical_code():
    assert canonical_code((5, 9, 9, 5)) == canonical_code((9, 5, 5, 9))
    assert canonical_code((1, 2, 3)) == canonical_code((3, 1, 2))
    assert canonical_code((1, 2, 3)) == canonical_code((3, 2, 1))
    assert canonical_code(()) == ()


def test_cancelling_pairs_unit_cases():
    assert cancelling_pairs((0, 1, 1, 0)) == {0: 1}
    assert cancelling_pairs((0, 1, 0, 1)) is None
    assert cancelling_pairs((0, 0, 7), self_points={0}) is None   # odd count
    assert cancelling_pairs((7, 8, 9)) == {}                      # no self pts
    # two tight pairs on one circle
    assert cancelling_pairs((0, 1, 1, 0, 2, 3, 3, 2)) == {0: 1, 2: 3}
    # mixed symbols inside an arc spoil tightness
    assert cancelling_pairs((0, 9, 1, 1, 0), self_points={0, 1}) is None


def test_classify_corpus_simple():
    for name, c in surface_corpus():
        cl = classify_surface(c)
        assert cl.verdict == "simple", name


def test_classify_semi_simple(bd3):
    c = apply_seq(bd3, SEMI_SIMPLE_PATH)
    cl = classify_surface(c)
    assert cl.verdict == "semi-simple"
    assert sum(cl.trace.ns_per_component) == 4
    matched = [m for m in cl.matchings if m]
    assert matched and all(len(m) >= 1 for m in matched)


def test_classify_neither(bd3):
    c = apply_seq(bd3, NEITHER_PATH)
    cl = classify_surface(c)
    assert cl.verdict == "neither"
    assert cl.failing_components


def test_strata_bd3(bd3):
    st = strata(bd3)
    assert st.chi == (8, -12, 6)
    assert sum(st.chi) == 2
    assert babson_chan_check(bd3)


def test_strata_pillow(pillow):
    st = strata(pillow)
    assert st.chi[2] == 2
    assert sum(st.chi) == 2
    assert babson_chan_check(pillow)


def test_strata_torus(torus33):
    st = strata(torus33)
    assert st.chi == (9, -18, 9)
    assert sum(st.chi) == 0
    assert babson_chan_check(torus33)


def test_strata_3d():
    b = make_boundary_cube(3)
    st = strata(b)
    assert sum(st.chi) == 0
    assert babson_chan_check(b)


def test_strata_sum_is_chi_everywhere():
    for name, c in surface_corpus():
        assert sum(strata(c).chi) == c.euler_characteristic(), name
        assert babson_chan_check(c), name
    for extra in (doubling(make_boundary_cube(2)), doubling(make_pillow()),
                  from_triangulation(boundary_of_simplex(2))):
        assert babson_chan_check(extra)


def test_babson_chan_along_random_walks(bd3):
    rng = random.Random(31)
    for _ in range(12):
        c = random_walk(bd3, rng.randint(1, 4), rng)
        assert babson_chan_check(c)
        assert trace_circles(c).ns_total % 2 == c.f_vector()[0] % 2


def test_bordism_invariant_s2():
    assert bordism_invariant_s2(make_boundary_cube(2)) == 0
    assert bordism_invariant_s2(make_pillow()) == 0
    assert bordism_invariant_s2(doubling(make_boundary_cube(2))) == 0
    with pytest.raises(ValueError):
        bordism_invariant_s2(make_torus_grid(3, 3))


def test_homotopy_census():
    divs, dets = homotopy_census(make_torus_grid(3, 3))
    assert divs == (1, 1, 1, 1, 1, 1)
    assert sorted(dets) == [0] * 6 + [1] * 9
    assert homotopy_census(make_boundary_cube(2)) == ((), ())


def test_trace_requires_surface():
    with pytest.raises(ValueError):
        trace_circles(make_polygon(4))
