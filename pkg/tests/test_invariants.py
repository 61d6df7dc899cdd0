import pytest

from cubulations import make_boundary_cube, make_pillow, make_polygon
from cubulations.invariants import (NotTabulated, bordism_group_report,
                                    fb2_class, fb_class, fb_of_delta,
                                    move_lattice, quotient_invariants,
                                    reduced2_moduli, stable_stem,
                                    stable_stem_rp, surjectivity_preimages)
from cubulations.moves import enumerate_templates


def test_lattice_n1():
    lat = move_lattice(1)
    assert set(lat.generators) == {(2, 2), (0, 0)}
    assert lat.basis == ((2, 2),)


def test_lattice_n2():
    lat = move_lattice(2)
    assert lat.basis == ((2, 4, 2),)
    assert (4, 8, 4) in lat.generators


def test_moduli_match_closed_forms():
    # a_n = 2, a_{n-1} = 2n, a_{n-2} = 2, a_0 = 2, a_1 = 3 + (-1)^n (n > 2)
    assert quotient_invariants(1).moduli == (2, 2)
    assert quotient_invariants(2).moduli == (2, 4, 2)
    assert quotient_invariants(3).moduli == (2, 2, 6, 2)


def test_extra_relation_n3():
    inv = quotient_invariants(3)
    assert ((1, 1, 0, 0), 4) in inv.extra_relations
    for t in enumerate_templates(3):
        assert (t.delta_f[0] + t.delta_f[1]) % 4 == 0


def test_generators_reduce_to_zero():
    for n in (1, 2, 3):
        inv = quotient_invariants(n)
        for t in enumerate_templates(n):
            residues, extras = fb_of_delta(n, t.delta_f)
            assert not any(residues), (n, t.name)
            assert not any(extras), (n, t.name)


def test_exact_invariants_annihilate_generators():
    for n in (1, 2, 3):
        inv = quotient_invariants(n)
        for e in inv.exact_invariants:
            for t in enumerate_templates(n):
                assert sum(x * d for x, d in zip(e, t.delta_f)) == 0


def test_surjectivity_preimages():
    for n in (1, 2, 3):
        pre, moduli = surjectivity_preimages(n)
        # each unit vector is its own preimage under the projection
        for i, v in enumerate(pre):
            assert v[i] % moduli[i] == 1 % moduli[i]
            assert all(v[j] == 0 for j in range(n + 1) if j != i)


def test_snf_vs_moduli_consistency():
    # |det| of any full-rank square submatrix of the basis is divisible by
    # the product of the elementary divisors
    for n in (1, 2, 3):
        lat = move_lattice(n)
        inv = quotient_invariants(n)
        divisors = [d for d in inv.snf_diagonal]
        assert len(divisors) == len(lat.basis)
        prod = 1
        for d in divisors:
            prod *= d
        from itertools import combinations
        from cubulations.homology import _det
        rows = [list(b) for b in lat.basis]
        k = len(rows)
        for cols in combinations(range(n + 1), k):
            sub = [[row[j] for j in cols] for row in rows]
            det = _det(sub)
            if det:
                assert det % prod == 0


def test_fb_classes():
    b = make_boundary_cube(2)
    fb = fb_class(b)
    assert fb.residues == (0, 0, 0)
    assert fb2_class(b) == (0, 0, 0)
    p = make_pillow()
    assert fb_class(p).residues == (0, 0, 0)
    g3 = make_polygon(3)
    assert fb_class(g3).residues == (1, 1)
    assert reduced2_moduli(3) == (2, 2, 6, 2)
    assert reduced2_moduli(4) == (2, 2, 2, 8, 2)


def test_stable_stems_table():
    assert stable_stem(0) == "Z"
    assert stable_stem(3) == "Z/24"
    assert stable_stem(7) == "Z/240"
    assert stable_stem(8) == "Z/2+Z/2"
    assert stable_stem_rp(3) == "Z/8"
    with pytest.raises(NotTabulated):
        stable_stem(9)
    with pytest.raises(NotTabulated):
        stable_stem_rp(4)


def test_bordism_reports():
    assert bordism_group_report(1)["group"] == "Z/2"
    assert bordism_group_report(3)["group"] == "Z/8"
    assert bordism_group_report(4, oriented=True)["group"] == "Z/24"
    with pytest.raises(NotTabulated):
        bordism_group_report(5)
