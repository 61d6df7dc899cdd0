"""Signed permutations of cube axes and the facet-attachment algebra.

Conventions used throughout the package:

* an n-cube has axes 0..n-1; facet 2*axis + side is the face
  {x_axis = side}, side in {0, 1};
* the intrinsic axes of the facet normal to `axis` are the remaining
  axes in increasing order, so intrinsic slot r of that facet is
  axis sorted(axes - {axis})[r];
* a SignedPerm g on k slots sends slot j to slot g.images[j],
  reversing the unit interval on that slot when g.signs[j] == -1;
* an attaching map between paired facets is a SignedPerm on n-1 slots
  mapping the intrinsic axes of the source facet to those of the target.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations, product


def facet_axis(f):
    return f >> 1


def facet_side(f):
    return f & 1


def facet_index(axis, side):
    return 2 * axis + side


def opposite_facet(f):
    return f ^ 1


@lru_cache(maxsize=None)
def intrinsic_axes(n, axis):
    """Axes of the facet normal to `axis`, in increasing order."""
    return tuple(a for a in range(n) if a != axis)


@lru_cache(maxsize=None)
def axis_rank(n, axis, excluded):
    """Slot of `axis` among the intrinsic axes of the facet normal to `excluded`."""
    return intrinsic_axes(n, excluded).index(axis)


@dataclass(frozen=True)
class SignedPerm:
    """A signed permutation: slot j maps to images[j] with sign signs[j]."""

    images: tuple
    signs: tuple

    @property
    def size(self):
        return len(self.images)

    def compose(self, other):
        """self after other (apply `other` first)."""
        img = tuple(self.images[other.images[j]] for j in range(other.size))
        sgn = tuple(other.signs[j] * self.signs[other.images[j]]
                    for j in range(other.size))
        return SignedPerm(img, sgn)

    def inverse(self):
        k = self.size
        img = [0] * k
        sgn = [1] * k
        for j in range(k):
            img[self.images[j]] = j
            sgn[self.images[j]] = self.signs[j]
        return SignedPerm(tuple(img), tuple(sgn))

    def apply_facet(self, f):
        """Image of a facet under the symmetry (for size-n perms acting on cubes)."""
        a, s = facet_axis(f), facet_side(f)
        return facet_index(self.images[a], s if self.signs[a] > 0 else 1 - s)

    def apply_pattern(self, pattern, flip):
        """Relabel a per-axis symbol tuple; `flip` reverses a symbol under sign -1."""
        out = [None] * len(pattern)
        for j, sym in enumerate(pattern):
            out[self.images[j]] = sym if self.signs[j] > 0 else flip[sym]
        return tuple(out)

    def is_identity(self):
        return all(s == 1 for s in self.signs) and \
            all(i == j for j, i in enumerate(self.images))


def identity_perm(k):
    return SignedPerm(tuple(range(k)), (1,) * k)


@lru_cache(maxsize=None)
def all_signed_perms(k):
    """All signed permutations on k slots, in a fixed deterministic order."""
    out = []
    for img in permutations(range(k)):
        for sgn in product((1, -1), repeat=k):
            out.append(SignedPerm(img, sgn))
    out.sort(key=lambda g: (g.images, g.signs))
    return tuple(out)


@lru_cache(maxsize=None)
def perm_index_map(k):
    return {g: i for i, g in enumerate(all_signed_perms(k))}


def restrict_to_facet(g, axis):
    """Restriction of a cube symmetry to the facet normal to `axis`.

    Returns the induced SignedPerm from the intrinsic axes of that facet to
    the intrinsic axes of the facet normal to g.images[axis].
    """
    n = g.size
    target_axis = g.images[axis]
    src = intrinsic_axes(n, axis)
    img = [0] * (n - 1)
    sgn = [1] * (n - 1)
    for r, a in enumerate(src):
        img[r] = axis_rank(n, g.images[a], target_axis)
        sgn[r] = g.signs[a]
    return SignedPerm(tuple(img), tuple(sgn))


def wall_correspondence(n, f_src, f_dst, att):
    """Full axis correspondence induced by a facet pairing.

    For cubes glued along facets f_src and f_dst with attaching map `att`,
    returns the SignedPerm from the source cube's axes to the target cube's
    axes under which the gluing looks like two lattice cubes sharing a wall:
    the normal axis maps with sign +1 exactly when the glued sides differ.
    """
    ia, sa = facet_axis(f_src), facet_side(f_src)
    ib, sb = facet_axis(f_dst), facet_side(f_dst)
    img = [0] * n
    sgn = [1] * n
    img[ia] = ib
    sgn[ia] = 1 if sa != sb else -1
    src = intrinsic_axes(n, ia)
    dst = intrinsic_axes(n, ib)
    for r, a in enumerate(src):
        r2 = att.images[r]
        img[a] = dst[r2]
        sgn[a] = att.signs[r]
    return SignedPerm(tuple(img), tuple(sgn))


def transport_pattern(n, pattern, f_src, f_dst, att, flip, side_symbols=(0, 1)):
    """Carry a per-axis symbol tuple across a facet pairing.

    The source pattern must lie on f_src, i.e. pattern[axis(f_src)] is the
    symbol for side(f_src).  The result lies on f_dst.
    """
    ia = facet_axis(f_src)
    ib, sb = facet_axis(f_dst), facet_side(f_dst)
    dst = intrinsic_axes(n, ib)
    out = [None] * n
    out[ib] = side_symbols[sb]
    for r, a in enumerate(intrinsic_axes(n, ia)):
        r2 = att.images[r]
        sym = pattern[a]
        out[dst[r2]] = sym if att.signs[r] > 0 else flip[sym]
    return tuple(out)


# Symbol alphabets for face patterns.  Cell patterns use 0, 1, STAR; the
# midplane-subdivision patterns refine each axis into five symbols.
STAR = 2
FLIP_CELL = (1, 0, 2)

SUB_V0, SUB_LO, SUB_MID, SUB_HI, SUB_V1 = range(5)
FLIP_SUB = (SUB_V1, SUB_HI, SUB_MID, SUB_LO, SUB_V0)
SUB_SIDE_SYMBOLS = (SUB_V0, SUB_V1)


class SymTables:
    """Precomputed multiplication/action tables for the symmetries of an n-cube.

    All group elements and attaching maps are referred to by their index in
    the deterministic ordering of all_signed_perms; the tables below turn the
    canonical-labelling inner loops into array lookups.
    """

    def __init__(self, n):
        self.n = n
        self.syms = all_signed_perms(n)
        self.count = len(self.syms)
        self.sym_id = perm_index_map(n)
        self.atts = all_signed_perms(n - 1)
        self.att_count = len(self.atts)
        self.att_id = perm_index_map(n - 1)
        self.identity_att = self.att_id[identity_perm(n - 1)]
        self.identity_sym = self.sym_id[identity_perm(n)]

        cnt, syms = self.count, self.syms
        self.comp = [[self.sym_id[syms[i].compose(syms[j])] for j in range(cnt)]
                     for i in range(cnt)]
        self.inv = [self.sym_id[syms[i].inverse()] for i in range(cnt)]
        self.fact = [[syms[i].apply_facet(f) for f in range(2 * n)]
                     for i in range(cnt)]
        self.restr = [[self.att_id[restrict_to_facet(syms[i], a)]
                       for a in range(n)] for i in range(cnt)]

        self.att_comp = [[self.att_id[self.atts[i].compose(self.atts[j])]
                          for j in range(self.att_count)]
                         for i in range(self.att_count)]
        self.att_inv = [self.att_id[self.atts[i].inverse()]
                        for i in range(self.att_count)]

        # wall[f_src][f_dst][att] -> sym id of the induced axis correspondence
        self.wall = [[[self.sym_id[wall_correspondence(n, fs, fd, self.atts[a])]
                       for a in range(self.att_count)]
                      for fd in range(2 * n)]
                     for fs in range(2 * n)]


@lru_cache(maxsize=None)
def sym_tables(n):
    return SymTables(n)
