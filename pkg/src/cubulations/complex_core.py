"""Abstract cubical complexes with facet pairings.

A Cubulation is a set of abstract n-cubes together with a partial involution
on (cube, facet) pairs; each pairing carries an attaching map (a signed
permutation of the facet's intrinsic axes).  Faces of cubes are written as
patterns over {0, 1, *}; derived cells are equivalence classes of
(cube, pattern) descriptors under transport across the pairings.  This
representation handles non-standard complexes (two cubes may share several
faces, as in the pillow) which vertex lists cannot express.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product

from .symmetry import (FLIP_CELL, STAR, SignedPerm, all_signed_perms,
                       facet_axis, facet_index, facet_side, identity_perm,
                       intrinsic_axes, opposite_facet, transport_pattern)


@lru_cache(maxsize=None)
def cell_patterns(n):
    """All length-n patterns over {0, 1, STAR}, indexed by base-3 code."""
    out = []
    for code in range(3 ** n):
        pat = []
        x = code
        for _ in range(n):
            pat.append(x % 3)
            x //= 3
        out.append(tuple(pat))
    return tuple(out)


def pattern_code(pattern):
    code = 0
    for sym in reversed(pattern):
        code = code * 3 + sym
    return code


def pattern_dim(pattern):
    return sum(1 for s in pattern if s == STAR)


@lru_cache(maxsize=None)
def patterns_on_facet(n, f):
    """Codes of the patterns lying on a facet (pattern[axis] == side)."""
    a, s = facet_axis(f), facet_side(f)
    return tuple(code for code, pat in enumerate(cell_patterns(n))
                 if pat[a] == s)


def subface_patterns(pattern):
    """All patterns obtained by fixing stars (the face itself included)."""
    slots = [i for i, s in enumerate(pattern) if s == STAR]
    out = []
    for choice in product((0, 1, STAR), repeat=len(slots)):
        q = list(pattern)
        for i, sym in zip(slots, choice):
            q[i] = sym
        out.append(tuple(q))
    return out


class _UnionFind:
    __slots__ = ("parent",)

    def __init__(self, size):
        self.parent = list(range(size))

    def find(self, x):
        p = self.parent
        root = x
        while p[root] != root:
            root = p[root]
        while p[x] != root:
            p[x], x = root, p[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if ra > rb:
                ra, rb = rb, ra
            self.parent[rb] = ra


@dataclass
class CellTable:
    """Derived cells of a complex: classes of (cube, pattern) descriptors."""

    dim: int
    by_dim: tuple            # by_dim[d] = tuple of classes, each a sorted tuple
    index: dict              # (cube, pattern) -> (d, class position)

    @property
    def f_vector(self):
        return tuple(len(cls) for cls in self.by_dim)

    def cells(self, d):
        return self.by_dim[d]

    def class_of(self, cube, pattern):
        return self.index[(cube, pattern)]


@dataclass
class ValidationReport:
    mode: str
    problems: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.problems

    def __bool__(self):
        return self.ok


class Cubulation:
    """An abstract cubical complex given by facet pairings.

    Values are immutable after construction; derived data (cell table,
    certificate) is cached on first use.  All operations in the package are
    pure functions of Cubulation values.
    """

    __slots__ = ("dim", "num_cubes", "pairings", "names", "_cells",
                 "_cert", "_compiled")

    def __init__(self, dim, num_cubes, pairings, names=None):
        if dim < 1:
            raise ValueError("dimension must be >= 1")
        if num_cubes < 0:
            raise ValueError("negative cube count")
        self.dim = dim
        self.num_cubes = num_cubes
        pairs = {}
        for (c, f), val in pairings.items():
            c2, f2, att = val
            if not (0 <= c < num_cubes and 0 <= c2 < num_cubes):
                raise ValueError(f"cube id out of range in pairing {c}.{f}")
            if not (0 <= f < 2 * dim and 0 <= f2 < 2 * dim):
                raise ValueError(f"facet index out of range in pairing {c}.{f}")
            if att.size != dim - 1:
                raise ValueError(f"attaching map has wrong size at {c}.{f}")
            pairs[(c, f)] = (c2, f2, att)
        self.pairings = pairs
        if names is None:
            names = tuple(f"c{i}" for i in range(num_cubes))
        self.names = tuple(names)
        self._cells = None
        self._cert = None
        self._compiled = None

    # -- construction helpers -------------------------------------------------

    @staticmethod
    def from_gluings(dim, num_cubes, gluings, names=None):
        """Build a complex from one-sided glue records.

        Each record is (a, fa, b, fb) or (a, fa, b, fb, att); the inverse
        pairing is added automatically.  A facet may be glued at most once.
        """
        pairs = {}
        ident = identity_perm(dim - 1)
        for rec in gluings:
            if len(rec) == 4:
                a, fa, b, fb = rec
                att = ident
            else:
                a, fa, b, fb, att = rec
                if not isinstance(att, SignedPerm):
                    att = SignedPerm(tuple(x[0] for x in att),
                                     tuple(x[1] for x in att))
            for key in ((a, fa), (b, fb)):
                if key in pairs:
                    raise ValueError(f"facet {key[0]}.{key[1]} glued twice")
            pairs[(a, fa)] = (b, fb, att)
            pairs[(b, fb)] = (a, fa, att.inverse())
        return Cubulation(dim, num_cubes, pairs, names=names)

    def partner(self, cube, facet):
        return self.pairings.get((cube, facet))

    def is_closed(self):
        return len(self.pairings) == 2 * self.dim * self.num_cubes

    def boundary_facets(self):
        return [(c, f) for c in range(self.num_cubes)
                for f in range(2 * self.dim) if (c, f) not in self.pairings]

    def __eq__(self, other):
        return (isinstance(other, Cubulation) and self.dim == other.dim
                and self.num_cubes == other.num_cubes
                and self.pairings == other.pairings)

    def __hash__(self):
        return hash((self.dim, self.num_cubes,
                     tuple(sorted((k, v[:2]) for k, v in self.pairings.items()))))

    def __repr__(self):
        kind = "closed" if self.is_closed() else "with boundary"
        return (f"Cubulation(dim={self.dim}, cubes={self.num_cubes}, "
                f"{kind})")

    # -- derived cells ---------------------------------------------------------

    def _check_involutive(self):
        problems = []
        for (c, f), (c2, f2, att) in self.pairings.items():
            back = self.pairings.get((c2, f2))
            if back is None or back[0] != c or back[1] != f:
                problems.append(f"pairing {c}.{f} -> {c2}.{f2} is not involutive")
            elif back[2] != att.inverse():
                problems.append(
                    f"attaching maps of pairing {c}.{f} <-> {c2}.{f2} "
                    "are not mutually inverse")
        return problems

    def _require_involutive(self):
        problems = self._check_involutive()
        if problems:
            raise ValueError("malformed pairings: " + "; ".join(problems))

    def derive_cells(self):
        """Group (cube, pattern) descriptors into derived cells.

        Deterministic: classes are keyed by their smallest descriptor and
        listed in sorted order per dimension.
        """
        if self._cells is not None:
            return self._cells
        self._require_involutive()
        n, m = self.dim, self.num_cubes
        pats = cell_patterns(n)
        P = len(pats)
        uf = _UnionFind(m * P)
        seen = set()
        for (c, f), (c2, f2, att) in self.pairings.items():
            if (c2, f2, c, f) in seen:
                continue
            seen.add((c, f, c2, f2))
            for code in patterns_on_facet(n, f):
                q = transport_pattern(n, pats[code], f, f2, att, FLIP_CELL)
                uf.union(c * P + code, c2 * P + pattern_code(q))
        groups = {}
        for c in range(m):
            base = c * P
            for code in range(P):
                groups.setdefault(uf.find(base + code), []).append(
                    (c, pats[code]))
        by_dim = [[] for _ in range(n + 1)]
        for root in sorted(groups):
            members = tuple(sorted(groups[root]))
            d = pattern_dim(members[0][1])
            by_dim[d].append(members)
        index = {}
        for d, classes in enumerate(by_dim):
            for i, cls in enumerate(classes):
                for desc in cls:
                    index[desc] = (d, i)
        self._cells = CellTable(n, tuple(tuple(x) for x in by_dim), index)
        return self._cells

    def f_vector(self):
        return self.derive_cells().f_vector

    def euler_characteristic(self):
        fv = self.f_vector()
        return sum((-1) ** i * fi for i, fi in enumerate(fv))

    # -- validation ------------------------------------------------------------

    def validate(self, mode="complex"):
        """Check the complex/manifold invariants; problems are reported, not raised."""
        if mode not in ("complex", "closed-manifold", "manifold-with-boundary"):
            raise ValueError(f"unknown validation mode {mode!r}")
        report = ValidationReport(mode)
        report.problems.extend(self._check_involutive())
        for (c, f), (c2, f2, att) in self.pairings.items():
            if c == c2:
                report.problems.append(
                    f"self-identification: facet {c}.{f} paired to facet "
                    f"{f2} of the same cube")
        if report.problems:
            return report

        cells = self.derive_cells()
        for d, classes in enumerate(cells.by_dim):
            for cls in classes:
                cubes = [c for c, _ in cls]
                if len(set(cubes)) != len(cubes):
                    report.problems.append(
                        f"self-identification: two dimension-{d} faces of "
                        f"cube {cls[0][0]} lie in one derived cell")
        if report.problems:
            return report
        if mode == "complex":
            return report

        if mode == "closed-manifold" and not self.is_closed():
            unpaired = self.boundary_facets()
            report.problems.append(
                f"{len(unpaired)} unpaired facets in a complex declared closed")
            return report

        if self.dim <= 3:
            self._check_links(report, closed=(mode == "closed-manifold"))
        else:
            report.notes.append(
                f"link condition unchecked for dimension {self.dim}")
        return report

    def _check_links(self, report, closed):
        n = self.dim
        cells = self.derive_cells()
        if n == 1:
            for cls in cells.by_dim[0]:
                k = len(cls)
                if closed and k != 2:
                    report.problems.append(
                        f"vertex {cls[0]} has {k} edge ends (expected 2)")
                elif not closed and k not in (1, 2):
                    report.problems.append(
                        f"vertex {cls[0]} has {k} edge ends")
            return
        if n == 2:
            # The link of a vertex is the cycle/path of square corners around
            # it; with the corner graph each corner has at most two
            # neighbours, so the only failure mode is a missing pairing.
            for cls in cells.by_dim[0]:
                deficiency = 0
                for cube, pat in cls:
                    for a in range(2):
                        if (cube, facet_index(a, pat[a])) not in self.pairings:
                            deficiency += 1
                if closed and deficiency:
                    report.problems.append(
                        f"vertex {cls[0]} meets the boundary in a closed complex")
                if not closed and deficiency not in (0, 2):
                    report.problems.append(
                        f"vertex link of {cls[0]} is not a circle or an arc")
            return
        # n == 3: the link is the surface glued from one triangle per cube
        # corner; side r of the triangle at corner (c, p) lies in the facet
        # of c normal to axis r at value p[r].
        for cls in cells.by_dim[0]:
            tri_index = {desc: i for i, desc in enumerate(cls)}
            nodes = 3 * len(cls)          # triangle vertices: (corner, axis)
            uf = _UnionFind(nodes)
            paired_sides = 0
            unpaired_sides = 0
            for desc in cls:
                cube, pat = desc
                i0 = tri_index[desc]
                for k in range(3):
                    f = facet_index(k, pat[k])
                    pr = self.pairings.get((cube, f))
                    if pr is None:
                        unpaired_sides += 1
                        continue
                    paired_sides += 1
                    c2, f2, att = pr
                    pat2 = transport_pattern(3, pat, f, f2, att, FLIP_CELL)
                    j0 = tri_index[(c2, pat2)]
                    k2 = facet_axis(f2)
                    dst = intrinsic_axes(3, k2)
                    for r, a in enumerate(intrinsic_axes(3, k)):
                        a2 = dst[att.images[r]]
                        uf.union(i0 * 3 + a, j0 * 3 + a2)
            v = len({uf.find(x) for x in range(nodes)})
            e = paired_sides // 2 + unpaired_sides
            faces = len(cls)
            chi = v - e + faces
            if closed:
                if unpaired_sides:
                    report.problems.append(
                        f"vertex {cls[0]} meets the boundary in a closed complex")
                elif chi != 2:
                    report.problems.append(
                        f"link of vertex {cls[0]} is a closed surface with "
                        f"Euler characteristic {chi}, not a sphere")
            else:
                if unpaired_sides == 0 and chi != 2:
                    report.problems.append(
                        f"link of interior vertex {cls[0]} has Euler "
                        f"characteristic {chi}, not a sphere")
                if unpaired_sides and chi != 1:
                    report.problems.append(
                        f"link of boundary vertex {cls[0]} has Euler "
                        f"characteristic {chi}, not a disk")

    # -- standardness ----------------------------------------------------------

    def _face_class_sets(self, max_dim=None):
        cells = self.derive_cells()
        if max_dim is None:
            max_dim = self.dim
        out = []
        for d in range(max_dim + 1):
            for i, cls in enumerate(cells.by_dim[d]):
                cube, pat = cls[0]
                faces = {cells.index[(cube, q)] for q in subface_patterns(pat)}
                out.append(((d, i), faces))
        return out

    def is_k_standard(self, k):
        """True iff cells of dimension <= k pairwise share at most one maximal face."""
        items = self._face_class_sets(min(k, self.dim))
        for i in range(len(items)):
            _, fi = items[i]
            for j in range(i + 1, len(items)):
                _, fj = items[j]
                common = fi & fj
                if not common:
                    continue
                maximal = max(common, key=lambda c: c[0])
                cube, pat = self.derive_cells().by_dim[maximal[0]][maximal[1]][0]
                span = {self.derive_cells().index[(cube, q)]
                        for q in subface_patterns(pat)}
                if common != span:
                    return False
        return True

    def is_standard(self):
        return self.is_k_standard(self.dim)


# ---------------------------------------------------------------------------
# constructors


def make_boundary_cube(n):
    """The boundary of the (n+1)-cube as a closed cubulation of the n-sphere.

    Cube i of the result is facet i of C^{n+1}; two non-parallel facets are
    glued along their shared (n-1)-face with the attaching map induced by
    the identity on ambient axes.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    N = n + 1
    gluings = []
    for i in range(N):
        for b in (0, 1):
            for j in range(i + 1, N):
                for c in (0, 1):
                    # facet-cubes (i, b) and (j, c) share {x_i = b, x_j = c}
                    a1 = facet_index(i, b)
                    a2 = facet_index(j, c)
                    ii = intrinsic_axes(N, i)     # axes of cube (i, b)
                    jj = intrinsic_axes(N, j)
                    f1 = facet_index(ii.index(j), c)
                    f2 = facet_index(jj.index(i), b)
                    shared_from_1 = [a for a in ii if a != j]
                    shared_from_2 = [a for a in jj if a != i]
                    att = [None] * (n - 1)
                    for r, a in enumerate(shared_from_1):
                        att[r] = (shared_from_2.index(a), 1)
                    gluings.append((a1, f1, a2, f2,
                                    SignedPerm(tuple(x[0] for x in att),
                                               tuple(x[1] for x in att))))
    names = [f"f{facet_axis(i)}{'+' if facet_side(i) else '-'}"
             for i in range(2 * N)]
    return Cubulation.from_gluings(n, 2 * N, gluings, names=names)


def make_pillow():
    """Two squares glued along all four boundary edges."""
    gluings = [(0, f, 1, f) for f in range(4)]
    return Cubulation.from_gluings(2, 2, gluings, names=("top", "bottom"))


def make_polygon(k):
    """A circle cubulated by k edges."""
    if k < 2:
        raise ValueError("a polygon needs at least 2 edges "
                         "(a single edge would glue to itself)")
    gluings = [(t, 1, (t + 1) % k, 0) for t in range(k)]
    return Cubulation.from_gluings(1, k, gluings)


def _grid_gluings(p, q, flip_wrap):
    """Gluings of a p x q square grid; the column wraparound is reflected
    vertically when flip_wrap is set (Klein bottle)."""
    def cube(i, j):
        return i + p * j

    gluings = []
    flip_att = SignedPerm((0,), (-1,))
    for j in range(q):
        for i in range(p):
            if i + 1 < p:
                gluings.append((cube(i, j), 1, cube(i + 1, j), 0))
            if j + 1 < q:
                gluings.append((cube(i, j), 3, cube(i, j + 1), 2))
        # row wrap: right edge of the last column back to the first column
        if flip_wrap:
            gluings.append((cube(p - 1, j), 1, cube(0, q - 1 - j), 0, flip_att))
        else:
            gluings.append((cube(p - 1, j), 1, cube(0, j), 0))
    for i in range(p):
        gluings.append((cube(i, q - 1), 3, cube(i, 0), 2))
    return gluings


def make_torus_grid(p, q):
    """The p x q grid cubulation of the torus.

    p, q >= 2 is required: a 1-wide grid would pair a facet of a square with
    another facet of the same square, which the complex definition forbids.
    """
    if p < 2 or q < 2:
        raise ValueError("torus grid needs p, q >= 2 to avoid "
                         "self-identified squares")
    return Cubulation.from_gluings(2, p * q, _grid_gluings(p, q, False))


def make_klein_grid(p, q):
    """The p x q grid cubulation of the Klein bottle (reflected wraparound)."""
    if p < 2 or q < 2:
        raise ValueError("klein grid needs p, q >= 2 to avoid "
                         "self-identified squares")
    return Cubulation.from_gluings(2, p * q, _grid_gluings(p, q, True))


def doubling(c):
    """Divide every k-cube into 2^k equal cubes.

    Cube (i, corner) of the result occupies the dyadic corner `corner` of
    cube i; internal walls are glued by the identity and outer walls follow
    the parent pairings.
    """
    c._require_involutive()
    n, m = c.dim, c.num_cubes
    ident = identity_perm(n - 1)

    def sub_id(cube, corner):
        code = 0
        for bit in reversed(corner):
            code = code * 2 + bit
        return cube * (1 << n) + code

    corners = list(product((0, 1), repeat=n))
    gluings = []
    for cube in range(m):
        for corner in corners:
            for a in range(n):
                if corner[a] == 0:
                    other = list(corner)
                    other[a] = 1
                    gluings.append((sub_id(cube, corner), facet_index(a, 1),
                                    sub_id(cube, tuple(other)),
                                    facet_index(a, 0), ident))
    seen = set()
    for (cube, f), (c2, f2, att) in c.pairings.items():
        if (c2, f2, cube, f) in seen:
            continue
        seen.add((cube, f, c2, f2))
        a, s = facet_axis(f), facet_side(f)
        a2, s2 = facet_axis(f2), facet_side(f2)
        dst = intrinsic_axes(n, a2)
        for corner in corners:
            if corner[a] != s:
                continue
            other = [None] * n
            other[a2] = s2
            for r, ax in enumerate(intrinsic_axes(n, a)):
                bit = corner[ax]
                other[dst[att.images[r]]] = bit if att.signs[r] > 0 else 1 - bit
            gluings.append((sub_id(cube, corner), f,
                            sub_id(c2, tuple(other)), f2, att))
    return Cubulation.from_gluings(n, m * (1 << n), gluings)


def from_triangulation(simplices, require_manifold=True):
    """The cubulation obtained by cutting each n-simplex into n+1 cubes.

    Each simplex contributes one cube per vertex v; the cube's axes are the
    remaining vertices in increasing order and its corner S (a subset of
    those) is the barycenter of {v} | S.  Cubes are glued along barycentric
    faces, inside each simplex and across shared facets.
    """
    simplices = [tuple(s) for s in simplices]
    if not simplices:
        raise ValueError("empty triangulation")
    n = len(simplices[0]) - 1
    if n < 1 or n > 3:
        raise ValueError("only dimensions 1..3 are supported")
    seen = set()
    for s in simplices:
        if len(s) != n + 1:
            raise ValueError("mixed simplex dimensions")
        if len(set(s)) != n + 1:
            raise ValueError(f"degenerate simplex {s}")
        key = frozenset(s)
        if key in seen:
            raise ValueError(f"duplicate simplex {sorted(s)}")
        seen.add(key)
    facets = {}
    for si, s in enumerate(simplices):
        for drop in s:
            key = frozenset(v for v in s if v != drop)
            facets.setdefault(key, []).append((si, drop))
    for key, hits in facets.items():
        if len(hits) != 2:
            raise ValueError(
                f"face {sorted(key)} lies in {len(hits)} simplices; "
                "a closed manifold needs exactly 2")
    if require_manifold:
        _check_simplicial_links(simplices, n)

    cube_id = {}
    for si, s in enumerate(simplices):
        for v in s:
            cube_id[(si, v)] = len(cube_id)

    def axes_of(si, v):
        return sorted(u for u in simplices[si] if u != v)

    gluings = []
    for si, s in enumerate(simplices):
        svs = sorted(s)
        # inside the simplex: cubes at v and w share the wall of barycenters
        # of faces containing both
        for vi in range(len(svs)):
            for wi in range(vi + 1, len(svs)):
                v, w = svs[vi], svs[wi]
                av, aw = axes_of(si, v), axes_of(si, w)
                shared_v = [u for u in av if u != w]
                shared_w = [u for u in aw if u != v]
                att = SignedPerm(
                    tuple(shared_w.index(u) for u in shared_v),
                    (1,) * (n - 1))
                gluings.append((cube_id[(si, v)], facet_index(av.index(w), 1),
                                cube_id[(si, w)], facet_index(aw.index(v), 1),
                                att))
    for key, ((sa, da), (sb, db)) in facets.items():
        for v in key:
            ava, avb = axes_of(sa, v), axes_of(sb, v)
            shared_a = [u for u in ava if u != da]
            shared_b = [u for u in avb if u != db]
            att = SignedPerm(
                tuple(shared_b.index(u) for u in shared_a),
                (1,) * (n - 1))
            gluings.append((cube_id[(sa, v)], facet_index(ava.index(da), 0),
                            cube_id[(sb, v)], facet_index(avb.index(db), 0),
                            att))
    return Cubulation.from_gluings(n, len(cube_id), gluings)


def _check_simplicial_links(simplices, n):
    if n == 1:
        degree = {}
        for s in simplices:
            for v in s:
                degree[v] = degree.get(v, 0) + 1
        for v, d in degree.items():
            if d != 2:
                raise ValueError(f"vertex {v} lies in {d} edges, expected 2")
        return
    vertices = {v for s in simplices for v in s}
    for v in vertices:
        star = [s for s in simplices if v in s]
        link = [tuple(sorted(u for u in s if u != v)) for s in star]
        if n == 2:
            deg = {}
            for a, b in link:
                deg[a] = deg.get(a, 0) + 1
                deg[b] = deg.get(b, 0) + 1
            if any(d != 2 for d in deg.values()) or not _connected_graph(link):
                raise ValueError(f"link of vertex {v} is not a single circle")
        else:
            edges = {}
            for tri in link:
                for drop in tri:
                    e = tuple(sorted(u for u in tri if u != drop))
                    edges[e] = edges.get(e, 0) + 1
            if any(cnt != 2 for cnt in edges.values()):
                raise ValueError(f"link of vertex {v} is not a closed surface")
            vs = {u for tri in link for u in tri}
            chi = len(vs) - len(edges) + len(link)
            if chi != 2 or not _connected_graph(
                    [e for tri in link for e in
                     [tuple(sorted(tri[:2])), tuple(sorted(tri[1:]))]]):
                raise ValueError(f"link of vertex {v} is not a 2-sphere")


def _connected_graph(edges):
    if not edges:
        return True
    adj = {}
    for a, b in edges:
        adj.setdefault(a, set()).add(b)
        adj.setdefault(b, set()).add(a)
    verts = list(adj)
    seen = {verts[0]}
    stack = [verts[0]]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == len(verts)


def boundary_of_simplex(n):
    """The boundary of the (n+1)-simplex as a list of n-simplices."""
    verts = list(range(n + 2))
    return [tuple(v for v in verts if v != drop) for drop in verts]
