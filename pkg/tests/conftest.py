import random

import pytest

from cubulations import (make_boundary_cube, make_klein_grid, make_pillow,
                         make_polygon, make_torus_grid)
from cubulations.complex_core import (Cubulation, boundary_of_simplex,
                                      from_triangulation)
from cubulations.moves import apply_move, find_sites, get_template
from cubulations.symmetry import all_signed_perms, facet_axis, restrict_to_facet


@pytest.fixture
def bd3():
    return make_boundary_cube(2)


@pytest.fixture
def pillow():
    return make_pillow()


@pytest.fixture
def torus33():
    return make_torus_grid(3, 3)


@pytest.fixture
def klein33():
    return make_klein_grid(3, 3)


@pytest.fixture
def c_tetra():
    return from_triangulation(boundary_of_simplex(2))


def surface_corpus():
    return [
        ("bd3", make_boundary_cube(2)),
        ("pillow", make_pillow()),
        ("torus33", make_torus_grid(3, 3)),
        ("klein33", make_klein_grid(3, 3)),
        ("c-tetra", from_triangulation(boundary_of_simplex(2))),
    ]


def apply_seq(c, seq):
    """Apply (template, orientation, site index) steps; deterministic."""
    for tname, orient, idx in seq:
        t = get_template(c.dim, tname)
        sites = find_sites(c, t, orient)
        c = apply_move(c, sites[idx]).complex
    return c


# deterministic paths from bd3 into the other classification verdicts
NEITHER_PATH = [("b1", "forward", 0), ("q3.1", "forward", 0)]
SEMI_SIMPLE_PATH = [("b2", "forward", 0), ("b2", "forward", 3),
                    ("b2", "forward", 11)]


def shuffle_labels(c, rng):
    """Random cube relabelling plus a random symmetry of each cube."""
    m, n = c.num_cubes, c.dim
    perm = list(range(m))
    rng.shuffle(perm)
    syms = [rng.choice(all_signed_perms(n)) for _ in range(m)]
    pairs = {}
    for (a, f), (b, g, att) in c.pairings.items():
        a2, b2 = perm[a], perm[b]
        sa, sb = syms[a], syms[b]
        att2 = restrict_to_facet(sb, facet_axis(g)).compose(att).compose(
            restrict_to_facet(sa, facet_axis(f)).inverse())
        pairs[(a2, sa.apply_facet(f))] = (b2, sb.apply_facet(g), att2)
    return Cubulation(n, m, pairs)


def random_walk(c, steps, rng, np_only=False):
    """Random move sequence; returns the endpoint complex."""
    from cubulations.moves import all_sites
    for _ in range(steps):
        sites = all_sites(c, np_only=np_only)
        if not sites:
            break
        c = apply_move(c, rng.choice(sites)).complex
    return c
