"""Exact integer matrix routines and cellular 1-homology.

Matrices are lists of int lists; Python integers keep everything exact.
Smith normal form comes in two flavours: the working elimination algorithm
and a naive determinantal-divisor oracle used to cross-check it in tests.
"""

from __future__ import annotations

from itertools import combinations
from math import gcd

from .symmetry import (FLIP_CELL, STAR, facet_axis, facet_side,
                       transport_pattern)


def _clone(mat):
    return [list(row) for row in mat]


def hnf_rows(mat):
    """Row Hermite normal form; returns the nonzero rows.

    Pivots are positive, entries above each pivot are reduced to lie in
    [0, pivot); the row span is unchanged, so the nonzero rows are a
    canonical lattice basis.
    """
    if not mat:
        return []
    a = _clone(mat)
    rows, cols = len(a), len(a[0])
    r = 0
    for c in range(cols):
        pivot = None
        for i in range(r, rows):
            if a[i][c]:
                pivot = i
                break
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        # clear below by gcd steps
        for i in range(r + 1, rows):
            while a[i][c]:
                q = a[r][c] // a[i][c]
                a[r] = [x - q * y for x, y in zip(a[r], a[i])]
                a[r], a[i] = a[i], a[r]
        if a[r][c] < 0:
            a[r] = [-x for x in a[r]]
        for i in range(r):
            q = a[i][c] // a[r][c]
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[r])]
        r += 1
        if r == rows:
            break
    return [row for row in a[:r]]


def smith_normal_form(mat):
    """Elementary divisors d_1 | d_2 | ... of an integer matrix."""
    if not mat or not mat[0]:
        return []
    a = _clone(mat)
    rows, cols = len(a), len(a[0])
    divisors = []
    s = 0
    while s < min(rows, cols):
        # find a nonzero pivot of smallest absolute value
        best = None
        for i in range(s, rows):
            for j in range(s, cols):
                if a[i][j] and (best is None
                                or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        a[s], a[i] = a[i], a[s]
        for row in a:
            row[s], row[j] = row[j], row[s]
        # clear row and column s
        dirty = False
        for i in range(s + 1, rows):
            if a[i][s]:
                q = a[i][s] // a[s][s]
                a[i] = [x - q * y for x, y in zip(a[i], a[s])]
                if a[i][s]:
                    dirty = True
        for j in range(s + 1, cols):
            if a[s][j]:
                q = a[s][j] // a[s][s]
                for row in a:
                    row[j] -= q * row[s]
                if a[s][j]:
                    dirty = True
        if dirty:
            continue
        # divisibility fix-up: fold in any entry not divisible by the pivot
        offender = None
        for i in range(s + 1, rows):
            for j in range(s + 1, cols):
                if a[i][j] % a[s][s]:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            a[s] = [x + y for x, y in zip(a[s], a[offender])]
            continue
        divisors.append(abs(a[s][s]))
        s += 1
    return divisors


def smith_via_minors(mat):
    """Elementary divisors from gcds of k x k minors (slow test oracle)."""
    if not mat or not mat[0]:
        return []
    rows, cols = len(mat), len(mat[0])
    divisors = []
    prev = 1
    for k in range(1, min(rows, cols) + 1):
        g = 0
        for ri in combinations(range(rows), k):
            for ci in combinations(range(cols), k):
                g = gcd(g, _det([[mat[i][j] for j in ci] for i in ri]))
            if g == 1:
                break
        if g == 0:
            break
        divisors.append(g // prev)
        prev = g
    return divisors


def _det(m):
    k = len(m)
    if k == 1:
        return m[0][0]
    if k == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    total = 0
    for j in range(k):
        if m[0][j]:
            minor = [row[:j] + row[j + 1:] for row in m[1:]]
            total += (-1) ** j * m[0][j] * _det(minor)
    return total


def kernel_basis(mat):
    """Integer basis of {x : mat @ x = 0}, via column reduction."""
    if not mat:
        return []
    rows, cols = len(mat), len(mat[0])
    a = _clone(mat)
    u = [[1 if i == j else 0 for j in range(cols)] for i in range(cols)]

    def col_op(j1, j2, q):
        for i in range(rows):
            a[i][j1] -= q * a[i][j2]
        for i in range(cols):
            u[i][j1] -= q * u[i][j2]

    def col_swap(j1, j2):
        for i in range(rows):
            a[i][j1], a[i][j2] = a[i][j2], a[i][j1]
        for i in range(cols):
            u[i][j1], u[i][j2] = u[i][j2], u[i][j1]

    r = 0
    for i in range(rows):
        pivot = None
        for j in range(r, cols):
            if a[i][j]:
                pivot = j
                break
        if pivot is None:
            continue
        col_swap(r, pivot)
        for j in range(r + 1, cols):
            while a[i][j]:
                q = a[i][r] // a[i][j]
                col_op(r, j, q)
                col_swap(r, j)
        r += 1
        if r == cols:
            break
    return [[u[i][j] for i in range(cols)] for j in range(r, cols)]


def solve_integer(mat, rhs):
    """One integer solution x of mat @ x = rhs, or None."""
    if not mat:
        return [] if not any(rhs) else None
    rows, cols = len(mat), len(mat[0])
    a = [list(row) + [rhs[i]] for i, row in enumerate(mat)]
    # column HNF on the coefficient part, tracking column ops
    u = [[1 if i == j else 0 for j in range(cols)] for i in range(cols)]

    def col_op(j1, j2, q):
        for i in range(rows):
            a[i][j1] -= q * a[i][j2]
        for i in range(cols):
            u[i][j1] -= q * u[i][j2]

    def col_swap(j1, j2):
        for i in range(rows):
            a[i][j1], a[i][j2] = a[i][j2], a[i][j1]
        for i in range(cols):
            u[i][j1], u[i][j2] = u[i][j2], u[i][j1]

    r = 0
    pivots = []
    for i in range(rows):
        pivot = None
        for j in range(r, cols):
            if a[i][j]:
                pivot = j
                break
        if pivot is None:
            continue
        col_swap(r, pivot)
        for j in range(r + 1, cols):
            while a[i][j]:
                q = a[i][r] // a[i][j]
                col_op(r, j, q)
                col_swap(r, j)
        pivots.append(i)
        r += 1
        if r == cols:
            break
    # back-substitute on the triangular system
    y = [0] * cols
    for idx, i in enumerate(pivots):
        acc = a[i][cols]
        for j in range(idx):
            acc -= a[i][j] * y[j]
        if acc % a[i][idx]:
            return None
        y[idx] = acc // a[i][idx]
    x = [sum(u[i][j] * y[j] for j in range(cols)) for i in range(cols)]
    for i in range(rows):
        if sum(mat[i][j] * x[j] for j in range(cols)) != rhs[i]:
            return None
    return x


# ---------------------------------------------------------------------------
# cellular 1-homology with integer coefficients


class _SignedUnionFind:
    """Union-find tracking a +-1 sign of each element relative to its root."""

    def __init__(self, size):
        self.parent = list(range(size))
        self.sign = [1] * size
        self.consistent = True

    def root_and_sign(self, x):
        root, s = x, 1
        while self.parent[root] != root:
            s *= self.sign[root]
            root = self.parent[root]
        # compress the path, keeping each sign relative to the new root
        y, acc = x, s
        while self.parent[y] != root:
            nxt, ns = self.parent[y], self.sign[y]
            self.parent[y] = root
            self.sign[y] = acc
            acc *= ns  # sign of nxt relative to root
            y = nxt
        return root, s

    def union(self, x, y, rel_sign):
        """Declare sign(x) == rel_sign * sign(y)."""
        rx, sx = self.root_and_sign(x)
        ry, sy = self.root_and_sign(y)
        if rx == ry:
            if sx != rel_sign * sy:
                self.consistent = False
            return
        # attach ry under rx so that the relation holds
        self.parent[ry] = rx
        self.sign[ry] = sx * rel_sign * sy


def _oriented_edge_classes(c):
    """Edge classes with a per-descriptor sign relative to the class root.

    The root descriptor is oriented along its free axis; transporting across
    a pairing multiplies by the attaching sign of that axis.
    """
    n = c.dim
    cells = c.derive_cells()
    edges = cells.by_dim[1]
    desc_pos = {}
    for i, cls in enumerate(edges):
        for desc in cls:
            desc_pos[desc] = i
    flat = []
    flat_index = {}
    for i, cls in enumerate(edges):
        for desc in cls:
            flat_index[desc] = len(flat)
            flat.append(desc)
    uf = _SignedUnionFind(len(flat))
    seen = set()
    for (a, f), (b, g, att) in c.pairings.items():
        if (b, g, a, f) in seen:
            continue
        seen.add((a, f, b, g))
        ax = facet_axis(f)
        for desc in flat:
            cube, pat = desc
            if cube != a or pat[ax] != facet_side(f):
                continue
            q = transport_pattern(n, pat, f, g, att, FLIP_CELL)
            free = next(i for i, s in enumerate(pat) if s == STAR)
            r = free - (1 if free > ax else 0)
            sgn = att.signs[r]
            uf.union(flat_index[desc], flat_index[(b, q)], sgn)
    signs = {}
    for i, cls in enumerate(edges):
        root_desc = cls[0]
        root_id, root_sign = uf.root_and_sign(flat_index[root_desc])
        for desc in cls:
            rid, s = uf.root_and_sign(flat_index[desc])
            signs[desc] = s * root_sign
    return signs


def boundary_matrices(c):
    """(d1, d2): integer boundary maps of the cubical chain complex.

    d1 is vertices x edges, d2 is edges x squares; each derived cell is
    oriented by its smallest descriptor.
    """
    cells = c.derive_cells()
    verts, edges = cells.by_dim[0], cells.by_dim[1]
    squares = cells.by_dim[2] if c.dim >= 2 else []
    edge_sign = _oriented_edge_classes(c)
    d1 = [[0] * len(edges) for _ in verts]
    for j, cls in enumerate(edges):
        cube, pat = cls[0]
        free = next(i for i, s in enumerate(pat) if s == STAR)
        head = list(pat)
        head[free] = 1
        tail = list(pat)
        tail[free] = 0
        d1[cells.index[(cube, tuple(head))][1]][j] += 1
        d1[cells.index[(cube, tuple(tail))][1]][j] -= 1
    d2 = [[0] * len(squares) for _ in edges]
    for j, cls in enumerate(squares):
        cube, pat = cls[0]
        free = [i for i, s in enumerate(pat) if s == STAR]
        i_ax, j_ax = free
        # boundary of I_i x I_j: {1}xI - {0}xI - Ix{1} + Ix{0}
        for ax, other, coeffs in ((i_ax, j_ax, (1, -1)), (j_ax, i_ax, (-1, 1))):
            for side, coeff in zip((1, 0), coeffs):
                q = list(pat)
                q[ax] = side
                desc = (cube, tuple(q))
                row = cells.index[desc][1]
                d2[row][j] += coeff * edge_sign[desc]
    return d1, d2


class Homology1:
    """H_1 of a complex with a map from integer 1-cycles to invariant coords.

    Coordinates split into a free part (Z^rank) and torsion residues; the
    free part of a class is only canonical up to a GL(rank, Z) change of
    basis, so cross-complex comparisons should use GL-invariant data.
    """

    def __init__(self, c):
        d1, d2 = boundary_matrices(c)
        self.edge_count = len(d1[0]) if d1 else 0
        kb = kernel_basis(d1)
        self.cycle_basis = kb
        k = len(kb)
        kmat = [[kb[j][i] for j in range(k)]
                for i in range(self.edge_count)]
        self._kmat = kmat
        cols = len(d2[0]) if d2 and d2[0] else 0
        w = []
        for jj in range(cols):
            col = [d2[i][jj] for i in range(len(d2))]
            sol = solve_integer(kmat, col)
            if sol is None:
                raise AssertionError("boundary is not a cycle")
            w.append(sol)
        # relations among cycle coordinates
        wmat = [[w[jj][i] for jj in range(cols)] for i in range(k)]
        self._u, self._div = _snf_left_transform(wmat)
        self.torsion = tuple(d for d in self._div if d > 1)
        self.rank = self._div.count(0)

    def class_of(self, cycle):
        """(free coords, torsion residues) of an integer 1-cycle."""
        w = solve_integer(self._kmat, list(cycle))
        if w is None:
            raise ValueError("not a cycle in the 1-skeleton")
        k = len(w)
        u = [sum(self._u[i][j] * w[j] for j in range(k)) for i in range(k)]
        free = tuple(u[i] for i in range(k) if self._div[i] == 0)
        torsion = tuple(u[i] % self._div[i] for i in range(k)
                        if self._div[i] > 1)
        return free, torsion


def _snf_left_transform(mat):
    """Smith form data with the left transform only.

    Returns (U, divisors) where U @ mat @ V is diagonal; divisors has one
    entry per row of the presentation (0 marks a free generator).
    """
    rows = len(mat)
    cols = len(mat[0]) if mat and mat[0] else 0
    a = _clone(mat) if cols else [[] for _ in range(rows)]
    u = [[1 if i == j else 0 for j in range(rows)] for i in range(rows)]
    s = 0
    divisors = [0] * rows
    while s < rows and s < cols:
        best = None
        for i in range(s, rows):
            for j in range(s, cols):
                if a[i][j] and (best is None
                                or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        a[s], a[i] = a[i], a[s]
        u[s], u[i] = u[i], u[s]
        for row in a:
            row[s], row[j] = row[j], row[s]
        dirty = False
        for i in range(s + 1, rows):
            if a[i][s]:
                q = a[i][s] // a[s][s]
                a[i] = [x - q * y for x, y in zip(a[i], a[s])]
                u[i] = [x - q * y for x, y in zip(u[i], u[s])]
                if a[i][s]:
                    dirty = True
        for j in range(s + 1, cols):
            if a[s][j]:
                q = a[s][j] // a[s][s]
                for row in a:
                    row[j] -= q * row[s]
                if a[s][j]:
                    dirty = True
        if dirty:
            continue
        offender = None
        for i in range(s + 1, rows):
            for j in range(s + 1, cols):
                if a[i][j] % a[s][s]:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            a[s] = [x + y for x, y in zip(a[s], a[offender])]
            u[s] = [x + y for x, y in zip(u[s], u[offender])]
            continue
        divisors[s] = abs(a[s][s])
        s += 1
    return u, divisors
