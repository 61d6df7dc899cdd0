"""Bubble-move templates and their application.

A template is an unordered pair {B, B'} of complementary balls, each a union
of facets of the boundary of the (n+1)-cube.  Applying the move to an
n-dimensional complex excises an embedded copy of one side and glues in the
other along the shared boundary sphere.  Templates are enumerated by brute
force over facet subsets, deduplicated under the symmetry group of the
(n+1)-cube; a move and its inverse are one template with two orientations.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .certificate import compile_pairings
from .complex_core import Cubulation, make_boundary_cube, subface_patterns
from .symmetry import (FLIP_CELL, all_signed_perms, facet_axis,
                       restrict_to_facet, sym_tables)


class MoveRejected(Exception):
    """Applying a move here would produce an invalid complex."""


# ---------------------------------------------------------------------------
# ball recognition on facet subsets of the boundary sphere


class _BoundaryCells:
    """Cell data of the boundary-of-(n+1)-cube complex, shared per dimension."""

    def __init__(self, n):
        self.n = n
        self.bc = make_boundary_cube(n)
        cells = self.bc.derive_cells()
        ids = []
        cubes_of = []
        dim_of = []
        key_of = {}
        for d, classes in enumerate(cells.by_dim):
            for i, cls in enumerate(classes):
                key_of[(d, i)] = len(ids)
                ids.append((d, i))
                cubes_of.append(frozenset(c for c, _ in cls))
                dim_of.append(d)
        strict_cofaces = [set() for _ in ids]
        for d, classes in enumerate(cells.by_dim):
            for i, cls in enumerate(classes):
                me = key_of[(d, i)]
                cube, pat = cls[0]
                for q in subface_patterns(pat):
                    face = key_of[cells.index[(cube, q)]]
                    if face != me:
                        strict_cofaces[face].add(me)
        self.cell_count = len(ids)
        self.cubes_of = cubes_of
        self.dim_of = dim_of
        self.strict_cofaces = strict_cofaces
        # cube adjacency graph of the boundary complex
        adj = [set() for _ in range(self.bc.num_cubes)]
        for (a, _f), (b, _g, _att) in self.bc.pairings.items():
            adj[a].add(b)
        self.cube_adj = [sorted(s) for s in adj]

    def cells_of_subset(self, subset):
        return [i for i in range(self.cell_count)
                if self.cubes_of[i] & subset]

    def connected(self, subset):
        subset = set(subset)
        if not subset:
            return False
        start = min(subset)
        seen = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in self.cube_adj[x]:
                if y in subset and y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen) == len(subset)

    def collapses_to_point(self, subset):
        """Greedy free-face collapsing of the closed union of the given facets."""
        alive = set(self.cells_of_subset(subset))
        while len(alive) > 1:
            best = None
            for cell in sorted(alive):
                cof = self.strict_cofaces[cell] & alive
                if len(cof) == 1:
                    best = (cell, next(iter(cof)))
                    break
            if best is None:
                return False
            alive.discard(best[0])
            alive.discard(best[1])
        return len(alive) == 1 and self.dim_of[next(iter(alive))] == 0


@lru_cache(maxsize=None)
def _boundary_cells(n):
    return _BoundaryCells(n)


def is_ball(n, facet_subset):
    """Whether a union of facets of the boundary (n+1)-cube is an n-ball.

    The certificate used is: nonempty, proper, connected, connected
    complement, and greedily collapsible to a point.
    """
    bcd = _boundary_cells(n)
    subset = frozenset(facet_subset)
    total = bcd.bc.num_cubes
    if not subset or len(subset) >= total:
        return False
    complement = frozenset(range(total)) - subset
    if not bcd.connected(subset) or not bcd.connected(complement):
        return False
    return bcd.collapses_to_point(subset)


# ---------------------------------------------------------------------------
# templates


@dataclass(frozen=True)
class MoveTemplate:
    """A complementary ball pair in the boundary of the (n+1)-cube.

    `b_facets` is the support of the forward move (the excised side) and
    `bp_facets` its complement; `delta_f` is the f-vector change of a forward
    application.  `np` marks templates where one side contains no two
    parallel facets.
    """

    dim: int
    name: str
    k: int
    np: bool
    b_facets: tuple
    bp_facets: tuple
    delta_f: tuple

    def side_facets(self, orientation):
        _check_orientation(orientation)
        return self.b_facets if orientation == "forward" else self.bp_facets

    def delta(self, orientation):
        _check_orientation(orientation)
        sign = 1 if orientation == "forward" else -1
        return tuple(sign * d for d in self.delta_f)


def _check_orientation(orientation):
    if orientation not in ("forward", "inverse"):
        raise ValueError(f"orientation must be 'forward' or 'inverse', "
                         f"got {orientation!r}")


def _has_parallel_pair(facets):
    axes = [facet_axis(f) for f in facets]
    return len(set(axes)) < len(axes)


def _subset_counts(bcd, subset):
    counts = [0] * (bcd.n + 1)
    for cell in bcd.cells_of_subset(subset):
        counts[bcd.dim_of[cell]] += 1
    return tuple(counts)


@lru_cache(maxsize=None)
def _facet_action(n):
    """Action of the symmetries of C^{n+1} on its facets (= boundary cubes)."""
    group = all_signed_perms(n + 1)
    total = 2 * (n + 1)
    return [tuple(g.apply_facet(f) for f in range(total)) for g in group]


def enumerate_templates(n):
    """All bubble-move templates in dimension n, one per symmetry class."""
    if not 1 <= n <= 4:
        raise ValueError("templates are enumerated for 1 <= n <= 4")
    return list(_template_registry(n))


@lru_cache(maxsize=None)
def _template_registry(n):
    bcd = _boundary_cells(n)
    total = bcd.bc.num_cubes
    action = _facet_action(n)
    full = (1 << total) - 1

    def to_mask(facets):
        m = 0
        for f in facets:
            m |= 1 << f
        return m

    def act(perm, mask):
        out = 0
        for f in range(total):
            if mask >> f & 1:
                out |= 1 << perm[f]
        return out

    ball_cache = {}

    def ball(mask):
        if mask not in ball_cache:
            ball_cache[mask] = is_ball(
                n, [f for f in range(total) if mask >> f & 1])
        return ball_cache[mask]

    classes = {}
    for mask in range(1, full):
        key = min(min(act(p, mask), act(p, full ^ mask)) for p in action)
        if key in classes:
            continue
        if ball(mask) and ball(full ^ mask):
            classes[key] = None

    templates = []
    for key in sorted(classes):
        comp = full ^ key
        side_a = tuple(f for f in range(total) if key >> f & 1)
        side_b = tuple(f for f in range(total) if comp >> f & 1)
        if len(side_a) > len(side_b) or \
                (len(side_a) == len(side_b) and side_a > side_b):
            side_a, side_b = side_b, side_a
        np = (not _has_parallel_pair(side_a)) or \
            (not _has_parallel_pair(side_b))
        fa = _subset_counts(bcd, frozenset(side_a))
        fb = _subset_counts(bcd, frozenset(side_b))
        delta = tuple(y - x for x, y in zip(fa, fb))
        templates.append((len(side_a), np, side_a, side_b, delta))

    templates.sort(key=lambda t: (t[0], not t[1], t[2]))
    out = []
    np_seen = {}
    q_seen = {}
    for k, np, side_a, side_b, delta in templates:
        if np:
            np_seen[k] = np_seen.get(k, 0) + 1
            name = f"b{k}" if np_seen[k] == 1 else f"b{k}.{np_seen[k]}"
        else:
            q_seen[k] = q_seen.get(k, 0) + 1
            name = f"q{k}.{q_seen[k]}"
        out.append(MoveTemplate(n, name, k, np, side_a, side_b, delta))
    return tuple(out)


def get_template(n, name):
    for t in _template_registry(n):
        if t.name == name:
            return t
    raise KeyError(f"no template named {name!r} in dimension {n}")


def fvector_delta(template):
    return template.delta_f


# ---------------------------------------------------------------------------
# compiled template sides


class _Side:
    """One side of a template, prepared for embedding search and gluing."""

    def __init__(self, n, facets):
        bcd = _boundary_cells(n)
        bc = bcd.bc
        self.n = n
        self.ids = tuple(sorted(facets))
        self.local = {x: i for i, x in enumerate(self.ids)}
        inside = set(self.ids)
        pairings = {}
        interface = {}
        for (a, f), (b, g, att) in bc.pairings.items():
            if a not in inside:
                continue
            if b in inside:
                pairings[(self.local[a], f)] = (self.local[b], g, att)
            else:
                interface[(self.local[a], f)] = (b, g, att)
        self.sub = Cubulation(n, len(self.ids), pairings)
        self.interface = interface
        self.cells = self.sub.derive_cells()
        boundary = set()
        for d, classes in enumerate(self.cells.by_dim):
            for i, cls in enumerate(classes):
                for cube, pat in cls:
                    if any((cube, 2 * a + pat[a]) not in pairings
                           for a in range(n) if pat[a] != 2):
                        boundary.add((d, i))
                        break
        self.boundary_classes = boundary
        self._build_plan()

    def _build_plan(self):
        tables = sym_tables(self.n)
        k = self.sub.num_cubes
        pt = compile_pairings(self.sub)
        seen = [False] * k
        seen[0] = True
        order = [0]
        plan = []
        checks = []
        qi = 0
        used_pairs = set()
        while qi < len(order):
            u = order[qi]
            qi += 1
            for f in range(2 * self.n):
                pr = pt[u][f]
                if pr is None:
                    continue
                v, g, a = pr
                if (v, g, u, f) in used_pairs:
                    continue
                used_pairs.add((u, f, v, g))
                if not seen[v]:
                    seen[v] = True
                    order.append(v)
                    plan.append((u, f, v, g, a))
                else:
                    checks.append((u, f, v, g, a))
        if not all(seen):
            raise AssertionError("template side is not connected")
        self.plan = plan
        self.checks = checks
        self.tables = tables


def _side_stabilizer(n, side):
    """Self-symmetries of the side: ambient symmetries fixing its facet set.

    Each element is returned as (cube relabelling, per-cube symmetry ids)
    acting on the side's local cubes.
    """
    bcd = _boundary_cells(n)
    group = all_signed_perms(n + 1)
    action = _facet_action(n)
    tables = sym_tables(n)
    inside = set(side.ids)
    out = []
    for g, perm in zip(group, action):
        if {perm[x] for x in side.ids} != inside:
            continue
        relabel = tuple(side.local[perm[x]] for x in side.ids)
        syms = tuple(
            tables.sym_id[restrict_to_facet(g, facet_axis(x))]
            for x in side.ids)
        out.append((relabel, syms))
    return out


class _CompiledTemplate:
    def __init__(self, template):
        n = template.dim
        self.template = template
        self.sides = {
            "forward": _Side(n, template.b_facets),
            "inverse": _Side(n, template.bp_facets),
        }
        self.stab = {
            key: _side_stabilizer(n, side)
            for key, side in self.sides.items()
        }

    def excised(self, orientation):
        return self.sides[orientation]

    def inserted(self, orientation):
        return self.sides["inverse" if orientation == "forward" else "forward"]


@lru_cache(maxsize=None)
def _compiled(n, name):
    return _CompiledTemplate(get_template(n, name))


# ---------------------------------------------------------------------------
# sites


@dataclass(frozen=True)
class MoveSite:
    """An embedding of a template side into a complex.

    `cubes[u]` is the image of the side's local cube u and `syms[u]` the
    symmetry index carrying local coordinates to the image cube's
    coordinates.  Sites are normalized under the template's self-symmetries.
    """

    template: str
    dim: int
    orientation: str
    cubes: tuple
    syms: tuple

    def key(self):
        return (self.template, self.orientation, self.cubes, self.syms)


def find_sites(c, template, orientation="forward"):
    """All embeddings of the excised side, up to template self-symmetries.

    An embedding must be injective on cubes and on derived cells, and the
    interior cells of the embedded side may bound only image cubes.
    """
    _check_orientation(orientation)
    if c.dim != template.dim:
        raise ValueError("template dimension does not match the complex")
    comp = _compiled(template.dim, template.name)
    side = comp.excised(orientation)
    stab = comp.stab[orientation]
    tables = side.tables
    ptc = compile_pairings(c)
    k = side.sub.num_cubes

    found = set()
    for t0 in range(c.num_cubes):
        for s0 in range(tables.count):
            emb = _try_embed(side, ptc, t0, s0, tables, k)
            if emb is None:
                continue
            if not _cells_embed(side, c, emb, tables):
                continue
            cubes, syms = emb
            key = min(
                (tuple(cubes[relabel[u]] for u in range(k)),
                 tuple(tables.comp[syms[relabel[u]]][taus[u]]
                       for u in range(k)))
                for relabel, taus in stab)
            found.add(key)
    return [MoveSite(template.name, template.dim, orientation,
                     key[0], key[1])
            for key in sorted(found)]


def _try_embed(side, ptc, t0, s0, tables, k):
    comp = tables.comp
    inv = tables.inv
    fact = tables.fact
    wall = tables.wall
    att_comp = tables.att_comp
    att_inv = tables.att_inv
    restr = tables.restr

    cubes = [None] * k
    syms = [None] * k
    cubes[0] = t0
    syms[0] = s0
    used = {t0}
    for (u, f, v, g, a) in side.plan:
        F = fact[syms[u]][f]
        pr = ptc[cubes[u]][F]
        if pr is None:
            return None
        tv, G, b = pr
        if tv in used:
            return None
        rho_b = wall[f][g][a]
        rho_t = wall[F][G][b]
        sv = comp[comp[rho_t][syms[u]]][inv[rho_b]]
        cubes[v] = tv
        syms[v] = sv
        used.add(tv)
    for (u, f, v, g, a) in side.checks:
        F = fact[syms[u]][f]
        pr = ptc[cubes[u]][F]
        if pr is None:
            return None
        tv, G, b = pr
        if tv != cubes[v] or G != fact[syms[v]][g]:
            return None
        expect = att_comp[att_comp[restr[syms[v]][facet_axis(g)]][a]][
            att_inv[restr[syms[u]][facet_axis(f)]]]
        if b != expect:
            return None
    return tuple(cubes), tuple(syms)


def _cells_embed(side, c, emb, tables):
    """Cell injectivity and the interiority condition for one embedding."""
    cubes, syms = emb
    target_cells = c.derive_cells()
    image = set(cubes)
    taken = {}
    for d, classes in enumerate(side.cells.by_dim):
        for i, cls in enumerate(classes):
            u, pat = cls[0]
            g = tables.syms[syms[u]]
            q = g.apply_pattern(pat, FLIP_CELL)
            tgt = target_cells.index[(cubes[u], q)]
            if tgt in taken:
                return False
            taken[tgt] = (d, i)
            if (d, i) not in side.boundary_classes:
                td, ti = tgt
                if any(cc not in image
                       for cc, _p in target_cells.by_dim[td][ti]):
                    return False
    return True


# ---------------------------------------------------------------------------
# application


@dataclass
class MoveResult:
    complex: Cubulation
    new_cubes: tuple
    removed: tuple
    site: MoveSite


def apply_move(c, site, validate=True):
    """Excise the embedded side and glue in the complementary ball.

    Returns a MoveResult whose complex keeps the surviving cubes first (in
    their original order) followed by the inserted cubes.  If the outcome
    fails validation the move is rejected with a diagnostic; this is a legal
    outcome, not a crash.
    """
    template = get_template(site.dim, site.template)
    comp = _compiled(site.dim, site.template)
    side = comp.excised(site.orientation)
    insert = comp.inserted(site.orientation)
    tables = side.tables
    n = c.dim

    image = set(site.cubes)
    keep = [x for x in range(c.num_cubes) if x not in image]
    new_index = {x: i for i, x in enumerate(keep)}
    base = len(keep)

    pairings = {}
    for (a, f), (b, g, att) in c.pairings.items():
        if a in image or b in image:
            continue
        pairings[(new_index[a], f)] = (new_index[b], g, att)
    for (u, f), (v, g, att) in insert.sub.pairings.items():
        pairings[(base + u, f)] = (base + v, g, att)
    for (y, fy), (bc_x, fx, att_yx) in insert.interface.items():
        x_local = side.local[bc_x]
        sig = site.syms[x_local]
        F = tables.fact[sig][fx]
        pr = c.pairings.get((site.cubes[x_local], F))
        if pr is None:
            raise MoveRejected(
                f"site interface facet {site.cubes[x_local]}.{F} is unpaired")
        ext, fe, beta = pr
        if ext in image:
            raise MoveRejected(
                "site boundary folds back onto the excised ball")
        restr = tables.atts[tables.restr[sig][facet_axis(fx)]]
        total = beta.compose(restr.compose(att_yx))
        pairings[(base + y, fy)] = (new_index[ext], fe, total)
        pairings[(new_index[ext], fe)] = (base + y, fy, total.inverse())

    out = Cubulation(n, base + insert.sub.num_cubes, pairings)
    if validate:
        mode = "closed-manifold" if c.is_closed() else "manifold-with-boundary"
        report = out.validate(mode)
        if not report.ok:
            raise MoveRejected(
                "move produces an invalid complex: "
                + "; ".join(report.problems))
    return MoveResult(out, tuple(range(base, out.num_cubes)),
                      tuple(sorted(image)), site)


def all_sites(c, n=None, np_only=False, template_names=None):
    """Deterministic list of every applicable (template, orientation, site)."""
    n = c.dim if n is None else n
    out = []
    for t in enumerate_templates(n):
        if np_only and not t.np:
            continue
        if template_names is not None and t.name not in template_names:
            continue
        for orientation in ("forward", "inverse"):
            for site in find_sites(c, t, orientation):
                out.append(site)
    return out
