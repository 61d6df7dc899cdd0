"""Connected sums of cubulations through an explicit tube.

The tube of length l over an n-cube e is the shell of e x [0, l] with the
two open end cells removed: a manifold with two boundary spheres, each the
boundary of an n-cube.  A connected sum removes one open top cell from each
summand and splices the tube in, with a chosen hyperoctahedral twist at the
far end.
"""

from __future__ import annotations

from dataclasses import dataclass

from .complex_core import Cubulation
from .derivative import trace_circles
from .symmetry import (SignedPerm, all_signed_perms, facet_axis, facet_index,
                       facet_side, identity_perm, intrinsic_axes,
                       restrict_to_facet)


def make_tube(n, length):
    """Shell of (n-cube) x [0, length] minus the two open end cells.

    Side cubes are indexed by (facet of the base cube, level); their axes
    are the facet's intrinsic axes followed by the height direction.  For
    n = 1 the tube is two disjoint arcs.
    """
    if length < 3:
        raise ValueError("tube length must be >= 3")
    if not 1 <= n <= 3:
        raise ValueError("tubes are built for 1 <= n <= 3")
    h = n - 1                      # height axis of each side cube
    ident = identity_perm(n - 1)

    def cube_id(f, level):
        return f * length + level

    gluings = []
    for f in range(2 * n):
        for level in range(length - 1):
            gluings.append((cube_id(f, level), facet_index(h, 1),
                            cube_id(f, level + 1), facet_index(h, 0), ident))
    # neighbouring side walls share (facet_i intersect facet_j) x [level]
    for fi in range(2 * n):
        i, b = facet_axis(fi), facet_side(fi)
        for fj in range(fi + 1, 2 * n):
            j, cside = facet_axis(fj), facet_side(fj)
            if i == j:
                continue
            ii = intrinsic_axes(n, i)
            jj = intrinsic_axes(n, j)
            f_on_i = facet_index(ii.index(j), cside)
            f_on_j = facet_index(jj.index(i), b)
            shared_i = [a for a in ii if a != j]
            shared_j = [a for a in jj if a != i]
            # intrinsic slots of the shared wall: base axes then height
            images = [0] * (n - 1)
            signs = [1] * (n - 1)
            for r, a in enumerate(shared_i):
                images[r] = shared_j.index(a)
            images[n - 2] = n - 2 if n >= 2 else 0
            att = SignedPerm(tuple(images), tuple(signs)) if n >= 2 \
                else identity_perm(0)
            for level in range(length):
                gluings.append((cube_id(fi, level), f_on_i,
                                cube_id(fj, level), f_on_j, att))
    names = tuple(f"t{f}.{level}" for f in range(2 * n)
                  for level in range(length))
    return Cubulation.from_gluings(n, 2 * n * length, gluings, names=names)


@dataclass(frozen=True)
class TubeSpec:
    length: int = 3
    twist: SignedPerm = None      # symmetry of the n-cube at the far end

    def resolved_twist(self, n):
        return self.twist if self.twist is not None else identity_perm(n)


@dataclass(frozen=True)
class SumSpec:
    left: Cubulation
    left_cell: int
    right: Cubulation
    right_cell: int
    tube: TubeSpec = TubeSpec()


def connected_sum(spec):
    """Remove the chosen open cells and splice the tube between them.

    The near end of the tube is glued by the identity identification of the
    removed cell's boundary; the far end is glued through the twist.  Cube
    order in the result: left complex minus its cell, tube, right complex
    minus its cell.
    """
    c, d = spec.left, spec.right
    if c.dim != d.dim:
        raise ValueError("summands must have equal dimension")
    n = c.dim
    if not (0 <= spec.left_cell < c.num_cubes
            and 0 <= spec.right_cell < d.num_cubes):
        raise ValueError("chosen cells do not exist")
    for cx, name in ((c, "left"), (d, "right")):
        if not cx.is_closed():
            raise ValueError(f"{name} summand is not closed")
    length = spec.tube.length
    tube = make_tube(n, length)
    twist = spec.tube.resolved_twist(n)
    if twist.size != n:
        raise ValueError("twist must be a symmetry of the n-cube")

    lc, rc = spec.left_cell, spec.right_cell
    left_keep = [x for x in range(c.num_cubes) if x != lc]
    right_keep = [x for x in range(d.num_cubes) if x != rc]
    lidx = {x: i for i, x in enumerate(left_keep)}
    tbase = len(left_keep)
    rbase = tbase + tube.num_cubes
    ridx = {x: rbase + i for i, x in enumerate(right_keep)}

    pairings = {}

    def add(a, fa, b, fb, att):
        pairings[(a, fa)] = (b, fb, att)
        pairings[(b, fb)] = (a, fa, att.inverse())

    for (a, f), (b, g, att) in c.pairings.items():
        if a == lc or b == lc or (a, f) > (b, g):
            continue
        add(lidx[a], f, lidx[b], g, att)
    for (a, f), (b, g, att) in d.pairings.items():
        if a == rc or b == rc or (a, f) > (b, g):
            continue
        add(ridx[a], f, ridx[b], g, att)
    for (a, f), (b, g, att) in tube.pairings.items():
        if (a, f) > (b, g):
            continue
        add(tbase + a, f, tbase + b, g, att)

    h = n - 1
    # near end: facet fe of the removed left cell was glued to (x, fx); the
    # bottom of side column fe takes its place, base axes matching the
    # facet's intrinsic axes identically
    for fe in range(2 * n):
        x, fx, att = c.pairings[(lc, fe)]
        tube_cube = tbase + fe * length
        add(tube_cube, facet_index(h, 0), lidx[x], fx, att)
    # far end, twisted: facet fe of the base cube corresponds to facet
    # twist(fe) of the removed right cell
    for fe in range(2 * n):
        te = twist.apply_facet(fe)
        y, fy, att = d.pairings[(rc, te)]
        tube_cube = tbase + fe * length + (length - 1)
        restr = restrict_to_facet(twist, facet_axis(fe))
        total = att.compose(restr)
        add(tube_cube, facet_index(h, 1), ridx[y], fy, total)

    total_cubes = rbase + len(right_keep)
    return Cubulation(n, total_cubes, pairings)


def all_twists(n):
    return all_signed_perms(n)


@dataclass
class AdditivityReport:
    ok: bool
    checks: tuple                 # (name, passed, detail) triples


def invariant_additivity_check(spec):
    """Compare invariants of the sum against the summands.

    Verifies f_0 parity additivity, the double-point census bookkeeping
    (ring circles from the tube, untouched components passing through, and
    the expected total), and the sphere-invariant consistency when both
    summands are spheres.
    """
    c, d = spec.left, spec.right
    if c.dim != 2:
        raise ValueError("the additivity check is defined for surfaces")
    out = connected_sum(spec)
    length = spec.tube.length
    checks = []

    fv_c, fv_d, fv_o = c.f_vector(), d.f_vector(), out.f_vector()
    checks.append(("f0 parity additive",
                   fv_o[0] % 2 == (fv_c[0] + fv_d[0]) % 2,
                   f"{fv_o[0]} vs {fv_c[0]} + {fv_d[0]}"))
    checks.append(("chi additive",
                   out.euler_characteristic()
                   == c.euler_characteristic() + d.euler_characteristic() - 2,
                   f"chi = {out.euler_characteristic()}"))

    tr_c, tr_d, tr_o = trace_circles(c), trace_circles(d), trace_circles(out)
    checks.append(("double points counted",
                   len(tr_o.double_points)
                   == len(tr_c.double_points) + len(tr_d.double_points)
                   + 4 * length - 2,
                   f"{len(tr_o.double_points)} double points"))

    # components away from the removed cells survive with their squares;
    # build the correspondence through surviving square ids
    lc, rc = spec.left_cell, spec.right_cell
    left_keep = [x for x in range(c.num_cubes) if x != lc]
    right_keep = [x for x in range(d.num_cubes) if x != rc]
    lmap = {x: i for i, x in enumerate(left_keep)}
    tbase = len(left_keep)
    rbase = tbase + 4 * length
    rmap = {x: rbase + i for i, x in enumerate(right_keep)}

    def census(trace, keep, relabel, avoid):
        # multiset of (length, ns) over components not meeting the removed cell
        out_census = []
        matched = []
        for i, comp in enumerate(trace.components):
            squares = {p[0] for p in comp}
            if avoid in squares:
                continue
            out_census.append((len(comp), trace.ns_per_component[i]))
            matched.append(frozenset(relabel[s] for s in squares))
        return sorted(out_census), matched

    cen_c, match_c = census(tr_c, left_keep, lmap, lc)
    cen_d, match_d = census(tr_d, right_keep, rmap, rc)
    result_components = {
        frozenset(p[0] for p in comp): (len(comp),
                                        tr_o.ns_per_component[i])
        for i, comp in enumerate(tr_o.components)}
    survived = 0
    for squares in match_c + match_d:
        if squares in result_components:
            survived += 1
    checks.append(("untouched components survive",
                   survived == len(match_c) + len(match_d),
                   f"{survived} of {len(match_c) + len(match_d)}"))

    # tube rings: one embedded circle of 4 sheets per level
    ring_count = 0
    for i, comp in enumerate(tr_o.components):
        squares = {p[0] for p in comp}
        if all(tbase <= s < rbase for s in squares) and len(comp) == 4:
            if tr_o.ns_per_component[i] == 0:
                ring_count += 1
    checks.append(("tube rings embedded",
                   ring_count == length,
                   f"{ring_count} rings for length {length}"))

    if c.euler_characteristic() == 2 and d.euler_characteristic() == 2:
        checks.append(("sphere invariant consistent",
                       tr_o.ns_total % 2 == fv_o[0] % 2,
                       f"ns = {tr_o.ns_total}, f0 = {fv_o[0]}"))
    return AdditivityReport(all(p for _, p, _ in checks), tuple(checks))
