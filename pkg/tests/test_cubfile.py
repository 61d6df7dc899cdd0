import pytest

from cubulations import cubfile
from cubulations.certificate import certificate, is_isomorphic
from cubulations.complex_core import make_boundary_cube

from conftest import surface_corpus


def test_roundtrip_all_corpus():
    for name, c in surface_corpus():
        text = cubfile.dumps(c)
        c2 = cubfile.loads(text)
        assert is_isomorphic(c, c2), name
        # canonical writer output is byte-stable
        assert cubfile.dumps(c2) == text, name


def test_comment_and_blank_lines():
    text = """# a comment
CUB 1

dim 1
cube a
cube b   # trailing comment
glue a.0 b.1
glue a.1 b.0
"""
    c = cubfile.loads(text)
    assert c.f_vector() == (2, 2)


def test_nontrivial_attaching_map_tokens():
    text = """CUB 1
dim 2
cube a
cube b
glue a.0 b.0 -0
"""
    c = cubfile.loads(text)
    (b, g, att) = c.partner(0, 0)
    assert (b, g) == (1, 0)
    assert att.signs == (-1,)
    out = cubfile.dumps(c)
    assert "-0" in out


def test_vcube_boundary_cube():
    text = "CUB 1\ndim 2\n" + "\n".join(
        f"vcube {' '.join(vs)}" for vs in [
            "0 1 2 3", "4 5 6 7", "0 1 4 5",
            "2 3 6 7", "0 2 4 6", "1 3 5 7"]) + "\n"
    c = cubfile.loads(text)
    assert c.f_vector() == (8, 12, 6)
    assert is_isomorphic(c, make_boundary_cube(2))


def test_vcube_ambiguity_is_loud():
    text = """CUB 1
dim 2
vcube 0 1 2 3
vcube 0 1 4 5
vcube 0 1 6 7
"""
    with pytest.raises(cubfile.CubFormatError) as exc:
        cubfile.loads(text)
    assert "ambiguous" in str(exc.value)


def test_parse_errors_carry_line_numbers():
    with pytest.raises(cubfile.CubFormatError) as exc:
        cubfile.loads("CUB 1\ndim 2\ncube a\nglue a.0 a.9\n")
    assert exc.value.line == 4
    with pytest.raises(cubfile.CubFormatError) as exc:
        cubfile.loads("CUB 2\n")
    assert exc.value.line == 1
    with pytest.raises(cubfile.CubFormatError):
        cubfile.loads("CUB 1\ncube a\n")          # cube before dim
    with pytest.raises(cubfile.CubFormatError):
        cubfile.loads("CUB 1\ndim 2\ncube a\ncube a\n")


def test_double_gluing_rejected():
    with pytest.raises(cubfile.CubFormatError) as exc:
        cubfile.loads(
            "CUB 1\ndim 1\ncube a\ncube b\ncube c\n"
            "glue a.0 b.0\nglue a.0 c.0\n")
    assert "glued twice" in str(exc.value)


def test_bad_perm_rejected():
    with pytest.raises(cubfile.CubFormatError):
        cubfile.loads("CUB 1\ndim 3\ncube a\ncube b\nglue a.0 b.0 +0 +0\n")
    with pytest.raises(cubfile.CubFormatError):
        cubfile.loads("CUB 1\ndim 2\ncube a\ncube b\nglue a.0 b.0 x1\n")
