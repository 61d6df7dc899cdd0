"""Reader and writer for the .cub text format.

Grammar (line oriented, '#' starts a comment):

    CUB 1
    dim <n>
    cube <name>
    glue <a>.<fa> <b>.<fb> [<perm>]
    vcube <v0> ... <v_{2^n-1}>

Facet indices run 0..2n-1 with 2i the face {x_i = 0} and 2i+1 the face
{x_i = 1}.  <perm> is n-1 whitespace separated tokens "<sign><axis>"
(default "+0 +1 ..."), giving the image of each intrinsic axis of the first
facet.  Each facet may appear in at most one glue line; the inverse gluing
is implied.  A vcube line declares a cube by its 2^n corner vertex labels
(corner b has coordinates given by the bits of b); the loader converts
vertex lists to pairings by matching facet vertex sets and fails on any
ambiguous or inconsistent match.
"""

from __future__ import annotations

from itertools import product

from .complex_core import Cubulation
from .symmetry import (SignedPerm, facet_axis, facet_index, facet_side,
                       identity_perm, intrinsic_axes)


class CubFormatError(ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


def _parse_perm(tokens, n, lineno):
    if len(tokens) != n - 1:
        raise CubFormatError(
            f"attaching map needs {n - 1} tokens, got {len(tokens)}", lineno)
    images, signs = [], []
    for tok in tokens:
        if len(tok) < 2 or tok[0] not in "+-" or not tok[1:].isdigit():
            raise CubFormatError(f"bad attaching token {tok!r}", lineno)
        images.append(int(tok[1:]))
        signs.append(1 if tok[0] == "+" else -1)
    if sorted(images) != list(range(n - 1)):
        raise CubFormatError("attaching map is not a permutation", lineno)
    return SignedPerm(tuple(images), tuple(signs))


def loads(text):
    """Parse a .cub document into a Cubulation."""
    lines = text.splitlines()
    dim = None
    names = []
    name_index = {}
    vcubes = {}
    glue_records = []
    saw_header = False
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if not saw_header:
            if parts != ["CUB", "1"]:
                raise CubFormatError("expected header 'CUB 1'", lineno)
            saw_header = True
            continue
        if parts[0] == "dim":
            if dim is not None:
                raise CubFormatError("duplicate dim line", lineno)
            if len(parts) != 2 or not parts[1].isdigit() or int(parts[1]) < 1:
                raise CubFormatError("bad dim line", lineno)
            dim = int(parts[1])
            continue
        if dim is None:
            raise CubFormatError("dim must come before cubes and gluings",
                                 lineno)
        if parts[0] == "cube":
            if len(parts) != 2:
                raise CubFormatError("cube line needs exactly one name", lineno)
            _add_cube(parts[1], names, name_index, lineno)
        elif parts[0] == "vcube":
            if len(parts) != 1 + (1 << dim):
                raise CubFormatError(
                    f"vcube needs {1 << dim} vertex labels", lineno)
            name = f"v{len(vcubes)}"
            _add_cube(name, names, name_index, lineno)
            vcubes[name_index[name]] = tuple(parts[1:])
        elif parts[0] == "glue":
            if len(parts) < 3:
                raise CubFormatError("glue needs two facet references", lineno)
            ref_a, ref_b = parts[1], parts[2]
            att = (_parse_perm(parts[3:], dim, lineno) if len(parts) > 3
                   else identity_perm(dim - 1))
            glue_records.append((ref_a, ref_b, att, lineno))
        else:
            raise CubFormatError(f"unknown directive {parts[0]!r}", lineno)
    if not saw_header:
        raise CubFormatError("empty document, expected 'CUB 1'", 1)
    if dim is None:
        raise CubFormatError("missing dim line", len(lines))

    pairings = {}

    def add_pair(a, fa, b, fb, att, lineno):
        for key in ((a, fa), (b, fb)):
            if key in pairings:
                raise CubFormatError(
                    f"facet {names[key[0]]}.{key[1]} glued twice", lineno)
        pairings[(a, fa)] = (b, fb, att)
        pairings[(b, fb)] = (a, fa, att.inverse())

    for ref_a, ref_b, att, lineno in glue_records:
        a, fa = _parse_facet_ref(ref_a, name_index, dim, lineno)
        b, fb = _parse_facet_ref(ref_b, name_index, dim, lineno)
        add_pair(a, fa, b, fb, att, lineno)

    if vcubes:
        for a, fa, b, fb, att in _pairings_from_vertices(vcubes, dim, names):
            if (a, fa) not in pairings:
                add_pair(a, fa, b, fb, att, None)

    return Cubulation(dim, len(names), pairings, names=tuple(names))


def _add_cube(name, names, name_index, lineno):
    if name in name_index:
        raise CubFormatError(f"duplicate cube name {name!r}", lineno)
    name_index[name] = len(names)
    names.append(name)


def _parse_facet_ref(ref, name_index, dim, lineno):
    if "." not in ref:
        raise CubFormatError(f"facet reference {ref!r} needs '<cube>.<facet>'",
                             lineno)
    name, _, fs = ref.rpartition(".")
    if name not in name_index:
        raise CubFormatError(f"unknown cube {name!r}", lineno)
    if not fs.isdigit() or int(fs) >= 2 * dim:
        raise CubFormatError(f"bad facet index {fs!r}", lineno)
    return name_index[name], int(fs)


def _facet_corners(n, f):
    """Corner bit-vectors of a facet, ordered by its intrinsic axes."""
    a, s = facet_axis(f), facet_side(f)
    out = []
    for bits in product((0, 1), repeat=n - 1):
        corner = [0] * n
        corner[a] = s
        for r, ax in enumerate(intrinsic_axes(n, a)):
            corner[ax] = bits[r]
        out.append(tuple(corner))
    return out


def _corner_index(corner):
    idx = 0
    for i, b in enumerate(corner):
        idx |= b << i
    return idx


def _pairings_from_vertices(vcubes, n, names):
    """Derive pairings by matching facet vertex sets across vertex cubes."""
    facet_sets = {}
    for cube, verts in vcubes.items():
        if len(set(verts)) != len(verts):
            raise CubFormatError(
                f"cube {names[cube]} repeats a vertex label")
        for f in range(2 * n):
            key = frozenset(verts[_corner_index(c)]
                            for c in _facet_corners(n, f))
            facet_sets.setdefault(key, []).append((cube, f))
    out = []
    for key, hits in facet_sets.items():
        if len(hits) == 1:
            continue
        if len(hits) > 2:
            raise CubFormatError(
                f"facet vertex set {sorted(key)} matches {len(hits)} facets; "
                "gluing is ambiguous")
        (a, fa), (b, fb) = hits
        if a == b:
            raise CubFormatError(
                f"facet vertex set {sorted(key)} appears twice on cube "
                f"{names[a]}")
        out.append((a, fa, b, fb,
                    _attaching_from_vertices(vcubes[a], fa, vcubes[b], fb, n,
                                             names[a], names[b])))
    return out


def _attaching_from_vertices(verts_a, fa, verts_b, fb, n, name_a, name_b):
    corners_a = _facet_corners(n, fa)
    corners_b = _facet_corners(n, fb)
    label_to_bits = {}
    for c in corners_b:
        bits = tuple(c[ax] for ax in intrinsic_axes(n, facet_axis(fb)))
        label_to_bits[verts_b[_corner_index(c)]] = bits
    # image of each intrinsic basis direction of facet fa
    axes_a = intrinsic_axes(n, facet_axis(fa))
    base = corners_a[0]
    base_bits = label_to_bits[verts_a[_corner_index(base)]]
    images, signs = [None] * (n - 1), [None] * (n - 1)
    for r, ax in enumerate(axes_a):
        stepped = list(base)
        stepped[ax] = 1 - stepped[ax]
        bits = label_to_bits[verts_a[_corner_index(tuple(stepped))]]
        diff = [i for i in range(n - 1) if bits[i] != base_bits[i]]
        if len(diff) != 1:
            raise CubFormatError(
                f"vertex labels of {name_a}.{fa} and {name_b}.{fb} do not "
                "define a cube isomorphism")
        images[r] = diff[0]
        signs[r] = 1 if base_bits[diff[0]] == 0 else -1
    att = SignedPerm(tuple(images), tuple(signs))
    # verify the full correspondence, not just the frame at one corner
    for c in corners_a:
        bits_a = tuple(c[ax] for ax in axes_a)
        expect = att.apply_pattern(bits_a, (1, 0))
        got = label_to_bits[verts_a[_corner_index(c)]]
        if tuple(expect) != got:
            raise CubFormatError(
                f"vertex labels of {name_a}.{fa} and {name_b}.{fb} do not "
                "define a cube isomorphism")
    return att


def dumps(c, comment=None):
    """Canonical .cub text: cubes in id order, each pairing written once."""
    lines = []
    if comment:
        for row in comment.splitlines():
            lines.append(f"# {row}")
    lines.append("CUB 1")
    lines.append(f"dim {c.dim}")
    for name in c.names:
        lines.append(f"cube {name}")
    seen = set()
    glue_lines = []
    for (a, f), (b, g, att) in sorted(c.pairings.items()):
        if (b, g) in seen:
            continue
        seen.add((a, f))
        parts = [f"glue {c.names[a]}.{f} {c.names[b]}.{g}"]
        if not att.is_identity():
            toks = " ".join(
                f"{'+' if s > 0 else '-'}{i}"
                for i, s in zip(att.images, att.signs))
            parts.append(toks)
        glue_lines.append(" ".join(parts))
    lines.extend(glue_lines)
    return "\n".join(lines) + "\n"


def load(path):
    with open(path, "r", encoding="utf-8") as fh:
        return loads(fh.read())


def save(c, path, comment=None):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(c, comment=comment))
