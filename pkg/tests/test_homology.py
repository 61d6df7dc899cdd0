import random

import pytest

from cubulations import (make_boundary_cube, make_klein_grid, make_pillow,
                         make_polygon, make_torus_grid)
from cubulations.homology import (Homology1, boundary_matrices, hnf_rows,
                                  kernel_basis, smith_normal_form,
                                  smith_via_minors, solve_integer)


def random_matrix(rng, r, c, lo=-6, hi=6):
    return [[rng.randint(lo, hi) for _ in range(c)] for _ in range(r)]


def test_snf_matches_minors_oracle():
    rng = random.Random(21)
    for _ in range(120):
        m = random_matrix(rng, rng.randint(1, 4), rng.randint(1, 4))
        assert smith_normal_form(m) == smith_via_minors(m), m


def test_snf_divisibility_chain():
    rng = random.Random(22)
    for _ in range(60):
        m = random_matrix(rng, rng.randint(1, 5), rng.randint(1, 5))
        d = smith_normal_form(m)
        for a, b in zip(d, d[1:]):
            assert b % a == 0


def test_hnf_idempotent_and_spans():
    rng = random.Random(23)
    for _ in range(60):
        m = random_matrix(rng, rng.randint(1, 4), rng.randint(2, 5))
        h = hnf_rows(m)
        assert hnf_rows(h) == h
        # same lattice: HNF of the stack equals HNF of either part
        assert hnf_rows(m + h) == h


def test_kernel_basis_properties():
    rng = random.Random(24)
    for _ in range(60):
        r, c = rng.randint(1, 4), rng.randint(2, 5)
        m = random_matrix(rng, r, c, -4, 4)
        kb = kernel_basis(m)
        for v in kb:
            assert all(sum(m[i][j] * v[j] for j in range(c)) == 0
                       for i in range(r))
        assert len(kb) == c - len(smith_normal_form(m))


def test_solve_integer():
    rng = random.Random(25)
    for _ in range(80):
        r, c = rng.randint(1, 4), rng.randint(1, 5)
        m = random_matrix(rng, r, c, -4, 4)
        x = [rng.randint(-3, 3) for _ in range(c)]
        rhs = [sum(m[i][j] * x[j] for j in range(c)) for i in range(r)]
        got = solve_integer(m, rhs)
        assert got is not None
        assert all(sum(m[i][j] * got[j] for j in range(c)) == rhs[i]
                   for i in range(r))
    # unsolvable over Z
    assert solve_integer([[2]], [1]) is None
    assert solve_integer([[2, 0], [0, 2]], [1, 0]) is None


def test_boundary_of_boundary_vanishes():
    for c in (make_boundary_cube(2), make_pillow(), make_torus_grid(3, 3),
              make_klein_grid(3, 3)):
        d1, d2 = boundary_matrices(c)
        cols = len(d2[0]) if d2 and d2[0] else 0
        for i in range(len(d1)):
            for f in range(cols):
                assert sum(d1[i][e] * d2[e][f]
                           for e in range(len(d2))) == 0


@pytest.mark.parametrize("maker,rank,torsion", [
    (lambda: make_boundary_cube(2), 0, ()),
    (make_pillow, 0, ()),
    (lambda: make_torus_grid(3, 3), 2, ()),
    (lambda: make_torus_grid(2, 4), 2, ()),
    (lambda: make_klein_grid(3, 3), 1, (2,)),
    (lambda: make_polygon(5), 1, ()),
])
def test_h1_groups(maker, rank, torsion):
    h = Homology1(maker())
    assert h.rank == rank
    assert h.torsion == torsion


def test_h1_class_of_cycles():
    t = make_torus_grid(3, 3)
    h = Homology1(t)
    # the zero cycle is trivial
    free, tors = h.class_of([0] * h.edge_count)
    assert not any(free) and not any(tors)
    with pytest.raises(ValueError):
        h.class_of([1] + [0] * (h.edge_count - 1))   # not a cycle
