"""Named built-in complexes used by the CLI and the test suite."""

from __future__ import annotations

from .complex_core import (boundary_of_simplex, doubling, from_triangulation,
                           make_boundary_cube, make_klein_grid, make_pillow,
                           make_polygon, make_torus_grid)

_FIXED = {
    "pillow": make_pillow,
    "c-of-tetrahedron": lambda: from_triangulation(boundary_of_simplex(2)),
}

_FAMILIES = (
    ("boundary-cube-N", "boundary of the N-cube, N = 2..5"),
    ("polygon-K", "circle with K edges, K >= 2"),
    ("torus-P-Q", "P x Q torus grid, P, Q >= 2"),
    ("klein-P-Q", "P x Q Klein bottle grid, P, Q >= 2"),
    ("pillow", "two squares glued along their whole boundary"),
    ("c-of-tetrahedron", "cubulated boundary of the tetrahedron"),
    ("doubled-NAME", "doubling of any corpus complex"),
)


class UnknownCorpusName(KeyError):
    pass


def corpus_names():
    """Family patterns with descriptions, for `corpus list`."""
    return list(_FAMILIES)


def corpus_samples():
    """Concrete sample names whose digests stay stable across runs."""
    return [
        "boundary-cube-3", "boundary-cube-4", "pillow", "polygon-4",
        "polygon-5", "torus-3-3", "klein-3-3", "c-of-tetrahedron",
        "doubled-boundary-cube-3", "doubled-pillow",
    ]


def get_corpus(name):
    if name in _FIXED:
        return _FIXED[name]()
    if name.startswith("doubled-"):
        return doubling(get_corpus(name[len("doubled-"):]))
    parts = name.split("-")
    try:
        if parts[0] == "boundary" and parts[1] == "cube" and len(parts) == 3:
            size = int(parts[2])
            if not 2 <= size <= 5:
                raise UnknownCorpusName(
                    f"boundary-cube-N supports N = 2..5, got {size}")
            return make_boundary_cube(size - 1)
        if parts[0] == "polygon" and len(parts) == 2:
            return make_polygon(int(parts[1]))
        if parts[0] == "torus" and len(parts) == 3:
            return make_torus_grid(int(parts[1]), int(parts[2]))
        if parts[0] == "klein" and len(parts) == 3:
            return make_klein_grid(int(parts[1]), int(parts[2]))
    except (ValueError, IndexError) as exc:
        raise UnknownCorpusName(f"malformed corpus name {name!r}") from exc
    raise UnknownCorpusName(f"unknown corpus name {name!r}")
