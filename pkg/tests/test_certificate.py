import random

import pytest

from cubulations import (make_boundary_cube, make_klein_grid, make_pillow,
                         make_polygon, make_torus_grid)
from cubulations.certificate import (certificate, decode_certificate,
                                     is_isomorphic)
from cubulations.surgery import make_tube

from conftest import shuffle_labels, surface_corpus


def test_certificates_stable_under_relabelling():
    rng = random.Random(11)
    for name, c in surface_corpus():
        cert = certificate(c)
        for _ in range(100):
            assert certificate(shuffle_labels(c, rng)) == cert, name


def test_certificates_distinguish():
    cs = [make_boundary_cube(2), make_pillow(), make_torus_grid(3, 3),
          make_klein_grid(3, 3), make_polygon(4), make_polygon(6)]
    certs = [certificate(c) for c in cs]
    assert len(set(certs)) == len(certs)


def test_same_f_vector_different_class():
    # torus and klein grids share the f-vector but are not isomorphic
    assert not is_isomorphic(make_torus_grid(3, 3), make_klein_grid(3, 3))


def test_decode_roundtrip():
    rng = random.Random(12)
    for name, c in surface_corpus():
        cert = certificate(c)
        d = decode_certificate(cert)
        assert certificate(d) == cert, name
        assert d.f_vector() == c.f_vector(), name


def test_decode_with_boundary_and_disconnected():
    t = make_tube(2, 3)
    cert = certificate(t)
    assert certificate(decode_certificate(cert)) == cert
    arcs = make_tube(1, 4)              # two disjoint arcs
    cert2 = certificate(arcs)
    d = decode_certificate(cert2)
    assert certificate(d) == cert2
    assert d.num_cubes == arcs.num_cubes


def test_polygon_sizes_differ():
    certs = {certificate(make_polygon(k)) for k in range(2, 12)}
    assert len(certs) == 10
