"""The derivative complex of a cubulation and its immersion data.

Every n-cube is cut by its n midplanes; gluing the cuts across facet
pairings yields an (n-1)-complex whose natural map into the manifold is a
codimension-one normal-crossings immersion.  For surfaces the components
are immersed circles: we trace them, read off Gauss codes and
self-intersection counts, decide the simple/semi-simple classification, and
stratify the manifold by multiplicity to check the parity identity between
the f-vector and the Euler characteristics of the strata.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .complex_core import doubling
from .homology import Homology1
from .symmetry import (FLIP_SUB, STAR, SUB_HI, SUB_LO, SUB_MID,
                       SUB_SIDE_SYMBOLS, facet_axis, facet_index, facet_side,
                       intrinsic_axes, transport_pattern)


@dataclass
class DerivativeComplex:
    """Sheets (cube, axis) of the midplane complex and their components."""

    dim: int
    sheets: tuple                 # all (cube, axis) pairs
    adjacency: dict               # sheet -> sorted tuple of adjacent sheets
    components: tuple             # sorted tuples of sheets

    @property
    def component_count(self):
        return len(self.components)

    def component_of(self, sheet):
        for i, comp in enumerate(self.components):
            if sheet in comp:
                return i
        raise KeyError(sheet)


def _continue_sheet(c, cube, axis, f):
    """Continue the sheet normal to `axis` through facet f, if paired."""
    pr = c.pairings.get((cube, f))
    if pr is None:
        return None
    c2, f2, att = pr
    r = intrinsic_axes(c.dim, facet_axis(f)).index(axis)
    axis2 = intrinsic_axes(c.dim, facet_axis(f2))[att.images[r]]
    return c2, axis2, f2


def derivative_complex(c):
    """Sheets and connected components of the midplane complex."""
    c._require_involutive()
    n = c.dim
    sheets = tuple((cube, a) for cube in range(c.num_cubes)
                   for a in range(n))
    index = {s: i for i, s in enumerate(sheets)}
    adjacency = {s: set() for s in sheets}
    parent = list(range(len(sheets)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for cube, a in sheets:
        for f in range(2 * n):
            if facet_axis(f) == a:
                continue
            nxt = _continue_sheet(c, cube, a, f)
            if nxt is None:
                continue
            c2, a2, _ = nxt
            adjacency[(cube, a)].add((c2, a2))
            ra, rb = find(index[(cube, a)]), find(index[(c2, a2)])
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    groups = {}
    for s in sheets:
        groups.setdefault(find(index[s]), []).append(s)
    components = tuple(tuple(sorted(g))
                       for _, g in sorted(groups.items()))
    return DerivativeComplex(n, sheets,
                             {s: tuple(sorted(v))
                              for s, v in adjacency.items()},
                             components)


# ---------------------------------------------------------------------------
# surface traces


@dataclass
class ImmersionTrace:
    """Circle components of the derivative complex of a surface cubulation.

    Each component is a cyclic sheet sequence; double points are labelled by
    the square they sit in.  ns counts, per component, the double points
    both of whose passages belong to that component.
    """

    components: tuple             # tuple of passage tuples (square, axis, enter_side)
    double_points: dict           # square -> (component of sheet axis 0, of axis 1)
    gauss_codes: tuple            # per component: tuple of square labels
    canonical_codes: tuple        # rotation/reflection-normalized shape codes
    ns_per_component: tuple
    ns_total: int

    @property
    def component_count(self):
        return len(self.components)


def trace_circles(c):
    """Trace the immersed circles of a closed surface cubulation."""
    if c.dim != 2:
        raise ValueError("traces are defined for surface cubulations")
    if not c.is_closed():
        raise ValueError("trace requires a closed complex")
    c._require_involutive()
    remaining = {(cube, a) for cube in range(c.num_cubes) for a in (0, 1)}
    components = []
    while remaining:
        start = min(remaining)
        passages = []
        cube, axis = start
        enter_side = 0
        while True:
            passages.append((cube, axis, enter_side))
            remaining.discard((cube, axis))
            out_f = facet_index(1 - axis, 1 - enter_side)
            cube, axis, f2 = _continue_sheet(c, cube, axis, out_f)
            enter_side = facet_side(f2)
            if (cube, axis, enter_side) == (start[0], start[1], 0):
                break
        components.append(tuple(passages))

    sheet_comp = {}
    for i, comp in enumerate(components):
        for cube, axis, _ in comp:
            sheet_comp[(cube, axis)] = i
    double_points = {sq: (sheet_comp[(sq, 0)], sheet_comp[(sq, 1)])
                     for sq in range(c.num_cubes)}
    codes = tuple(tuple(p[0] for p in comp) for comp in components)
    ns = []
    for i, comp in enumerate(components):
        ns.append(sum(1 for sq, (a, b) in double_points.items()
                      if a == i and b == i))
    return ImmersionTrace(tuple(components), double_points, codes,
                          tuple(canonical_code(w) for w in codes),
                          tuple(ns), sum(ns))


def canonical_code(word):
    """Normalize a cyclic word up to rotation, reflection and relabelling."""
    if not word:
        return ()
    candidates = []
    seqs = [word, tuple(reversed(word))]
    for seq in seqs:
        for shift in range(len(seq)):
            rot = seq[shift:] + seq[:shift]
            names = {}
            out = []
            for x in rot:
                if x not in names:
                    names[x] = len(names)
                out.append(names[x])
            candidates.append(tuple(out))
    return min(candidates)


def cancelling_pairs(code, self_points=None):
    """Perfect matching of self double points into tight pairs, or None.

    Two points p, q form a tight pair when the cyclic code contains the
    adjacencies "p q" and "q p" at disjoint positions: the two arcs joining
    them are then distinct, mutually disjoint and free of other double
    points.  A component with an odd number of self points always fails.
    """
    if self_points is None:
        counts = {}
        for x in code:
            counts[x] = counts.get(x, 0) + 1
        self_points = {x for x, k in counts.items() if k == 2}
    pts = sorted(self_points)
    if not pts:
        return {}
    if len(pts) % 2:
        return None
    L = len(code)
    adjacency_slots = {}
    for i in range(L):
        a, b = code[i], code[(i + 1) % L]
        adjacency_slots.setdefault((a, b), []).append(i)

    def tight(p, q):
        for i in adjacency_slots.get((p, q), ()):
            for j in adjacency_slots.get((q, p), ()):
                if not ({i, (i + 1) % L} & {j, (j + 1) % L}):
                    return True
        return False

    pairs = {}

    def backtrack(todo):
        if not todo:
            return True
        p = todo[0]
        rest = todo[1:]
        for qi, q in enumerate(rest):
            if tight(p, q):
                pairs[p] = q
                pairs[q] = p
                if backtrack(rest[:qi] + rest[qi + 1:]):
                    return True
                del pairs[p], pairs[q]
        return False

    if backtrack(pts):
        matching = {}
        for p, q in pairs.items():
            if p < q:
                matching[p] = q
        return matching
    return None


@dataclass
class SurfaceClassification:
    verdict: str                  # "simple" | "semi-simple" | "neither"
    trace: ImmersionTrace
    matchings: tuple              # per component: dict or None
    failing_components: tuple


def classify_surface(c):
    """Simple / semi-simple / neither, with the witnessing matchings."""
    trace = trace_circles(c)
    if all(x == 0 for x in trace.ns_per_component):
        matches = tuple({} for _ in trace.components)
        return SurfaceClassification("simple", trace, matches, ())
    matchings = []
    failing = []
    for i, code in enumerate(trace.gauss_codes):
        selfpts = {sq for sq, (a, b) in trace.double_points.items()
                   if a == i and b == i}
        m = cancelling_pairs(code, selfpts)
        matchings.append(m)
        if m is None and selfpts:
            failing.append(i)
    verdict = "semi-simple" if not failing else "neither"
    return SurfaceClassification(verdict, trace, tuple(matchings),
                                 tuple(failing))


# ---------------------------------------------------------------------------
# strata of the immersion


@dataclass
class Stratification:
    """Open-cell counts of the multiplicity strata.

    counts[k][d] is the number of open d-cells consisting of k-tuple points
    of the immersion (k = 0 is the complement of the image); chi[k] is the
    alternating sum, an open d-cell contributing (-1)^d.
    """

    dim: int
    counts: tuple
    chi: tuple


def strata(c):
    """Stratify the manifold by immersion multiplicity.

    Works on the midplane subdivision: each axis of a cube contributes one
    of five symbols (vertex 0, open lower half, midplane, open upper half,
    vertex 1); classes of glued subdivision cells are counted by dimension
    and by the number of midplane coordinates.
    """
    c._require_involutive()
    n = c.dim
    if n > 3:
        raise ValueError("strata are computed for n <= 3")
    m = c.num_cubes
    symbols = list(range(5))
    local = list(product(symbols, repeat=n))
    code_of = {pat: i for i, pat in enumerate(local)}
    P = len(local)
    parent = list(range(m * P))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    seen = set()
    for (a, f), (b, g, att) in c.pairings.items():
        if (b, g, a, f) in seen:
            continue
        seen.add((a, f, b, g))
        ax, side = facet_axis(f), facet_side(f)
        side_symbol = SUB_SIDE_SYMBOLS[side]
        for code, pat in enumerate(local):
            if pat[ax] != side_symbol:
                continue
            q = transport_pattern(n, pat, f, g, att, FLIP_SUB,
                                  side_symbols=SUB_SIDE_SYMBOLS)
            union(a * P + code, b * P + code_of[q])
    reps = {}
    for cube in range(m):
        for code, pat in enumerate(local):
            reps.setdefault(find(cube * P + code), pat)
    counts = [[0] * (n + 1) for _ in range(n + 1)]
    for pat in reps.values():
        k = sum(1 for s in pat if s == SUB_MID)
        d = sum(1 for s in pat if s in (SUB_LO, SUB_HI))
        counts[k][d] += 1
    chi = tuple(sum((-1) ** d * row[d] for d in range(n + 1))
                for row in counts)
    return Stratification(n, tuple(tuple(r) for r in counts), chi)


def babson_chan_check(c):
    """f_i == chi(X_i) mod 2 for all i, where X_i is the i-tuple stratum."""
    st = strata(c)
    fv = c.f_vector()
    return all((fv[i] - st.chi[i]) % 2 == 0 for i in range(c.dim + 1))


def bordism_invariant_s2(c):
    """The mod-2 class of a 2-sphere cubulation, cross-checked against ns.

    Returns f_0 mod 2; raises on non-sphere input, and reports an internal
    inconsistency if the self-intersection count disagrees mod 2.
    """
    if c.dim != 2:
        raise ValueError("input must be a surface cubulation")
    report = c.validate("closed-manifold")
    if not report.ok:
        raise ValueError("input is not a closed surface: "
                         + "; ".join(report.problems))
    if c.euler_characteristic() != 2:
        raise ValueError("input surface is not a 2-sphere (chi != 2)")
    f0 = c.f_vector()[0] % 2
    trace = trace_circles(c)
    if trace.ns_total % 2 != f0:
        raise AssertionError(
            f"internal consistency error: ns_total = {trace.ns_total} "
            f"but f0 = {c.f_vector()[0]}")
    return f0


# ---------------------------------------------------------------------------
# homotopy data of the immersed circles (via the doubled complex)


def circle_cycles_in_doubling(c):
    """Integer 1-cycles of the doubled complex carried by the traced circles.

    Each sheet passage of the trace runs along two edges of the doubled
    complex (facet midpoint to centre to facet midpoint); the returned
    vectors are indexed by the doubled complex's derived edge classes.
    """
    if c.dim != 2:
        raise ValueError("circle cycles are defined for surfaces")
    trace = trace_circles(c)
    dc = doubling(c)
    cells = dc.derive_cells()
    edges = cells.by_dim[1]
    from .homology import _oriented_edge_classes
    signs = _oriented_edge_classes(dc)

    def sub_id(cube, corner):
        code = 0
        for bit in reversed(corner):
            code = code * 2 + bit
        return cube * 4 + code

    vectors = []
    for comp in trace.components:
        vec = [0] * len(edges)
        for square, axis, enter_side in comp:
            b_ax = 1 - axis
            direction = 1 if enter_side == 0 else -1
            for half in (enter_side, 1 - enter_side):
                corner = [0, 0]
                corner[axis] = 0
                corner[b_ax] = half
                pat = [None, None]
                pat[axis] = 1
                pat[b_ax] = STAR
                desc = (sub_id(square, tuple(corner)), tuple(pat))
                d, idx = cells.index[desc]
                vec[idx] += direction * signs[desc]
        vectors.append(vec)
    return vectors, dc


def homotopy_census(c):
    """GL-invariant summary of the nonzero circle classes in H_1.

    Returns (sorted divisibilities, sorted pairwise |det|) of the nonzero
    free-part classes; comparable across complexes related by moves, unlike
    raw coordinates which depend on a choice of H_1 basis.
    """
    vectors, dc = circle_cycles_in_doubling(c)
    h = Homology1(dc)
    classes = [h.class_of(v)[0] for v in vectors]
    nonzero = [v for v in classes if any(v)]
    from math import gcd
    divisibilities = sorted(
        gcd(*(abs(x) for x in v)) if len(v) > 1 else abs(v[0])
        for v in nonzero)
    dets = []
    if h.rank == 2:
        for i in range(len(nonzero)):
            for j in range(i + 1, len(nonzero)):
                a, b = nonzero[i], nonzero[j]
                dets.append(abs(a[0] * b[1] - a[1] * b[0]))
    return tuple(divisibilities), tuple(sorted(dets))
