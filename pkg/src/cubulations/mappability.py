"""Edge-equivalence classes, orientations, and the development map.

Two edges are related when they are opposite sides of some square; classes
of this relation drive the combinatorial criteria for mapping or embedding
a cubulation into the standard lattice: pick an orientation of each class
and a partition of the classes into families (perpendicular edges landing
in different families), and develop edge paths by signed family counts.
The cubulation maps into the lattice skeleton iff the development of every
closed path vanishes, and a standard one embeds iff developments separate
vertices as well.
"""

from __future__ import annotations

from dataclasses import dataclass

from .symmetry import (FLIP_CELL, STAR, facet_axis, facet_index, facet_side,
                       transport_pattern)


def _edge_free_axis(pattern):
    return next(i for i, s in enumerate(pattern) if s == STAR)


class _ParityUF:
    """Union-find with a parity bit and generator bookkeeping for witnesses."""

    def __init__(self, size):
        self.parent = list(range(size))
        self.parity = [0] * size
        self.edges = []            # (x, y, parity, tag) generator list
        self.odd_witness = None

    def root(self, x):
        p = 0
        while self.parent[x] != x:
            p ^= self.parity[x]
            x = self.parent[x]
        return x, p

    def union(self, x, y, parity, tag):
        self.edges.append((x, y, parity, tag))
        rx, px = self.root(x)
        ry, py = self.root(y)
        if rx == ry:
            if px ^ py != parity and self.odd_witness is None:
                self.odd_witness = (x, y, parity, tag)
            return
        self.parent[ry] = rx
        self.parity[ry] = px ^ parity ^ py


@dataclass
class EdgeClasses:
    """Partition of the derived edges under the opposite-sides relation."""

    class_of: tuple               # derived edge index -> class index
    members: tuple                # class index -> sorted edge indices
    perpendicular: tuple          # pairs of class indices forced apart

    @property
    def count(self):
        return len(self.members)


def edge_classes(c):
    cells = c.derive_cells()
    edges = cells.by_dim[1]
    parent = list(range(len(edges)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    squares = cells.by_dim[2] if c.dim >= 2 else ()
    for cls in squares:
        cube, pat = cls[0]
        i_ax, j_ax = [i for i, s in enumerate(pat) if s == STAR]
        for fixed, free in ((i_ax, j_ax), (j_ax, i_ax)):
            side0 = list(pat)
            side0[fixed] = 0
            side1 = list(pat)
            side1[fixed] = 1
            a = cells.index[(cube, tuple(side0))][1]
            b = cells.index[(cube, tuple(side1))][1]
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)

    roots = sorted({find(i) for i in range(len(edges))})
    class_index = {r: i for i, r in enumerate(roots)}
    class_of = tuple(class_index[find(i)] for i in range(len(edges)))
    members = [[] for _ in roots]
    for i, cls_i in enumerate(class_of):
        members[cls_i].append(i)

    # classes with non-parallel edges in one cube must sit in distinct
    # families; collect those constraints (and self-conflicts)
    perp = set()
    by_cube_axis = {}
    for i, cls in enumerate(edges):
        for cube, pat in cls:
            by_cube_axis.setdefault(cube, []).append(
                (_edge_free_axis(pat), class_of[i]))
    for cube, pairs in by_cube_axis.items():
        for ai, ci in pairs:
            for aj, cj in pairs:
                if ai != aj:
                    perp.add((min(ci, cj), max(ci, cj)))
    return EdgeClasses(class_of, tuple(tuple(sorted(m)) for m in members),
                       tuple(sorted(perp)))


def is_simple_general(c):
    """No class meets a cube in two non-parallel edges."""
    ec = edge_classes(c)
    return all(a != b for a, b in ec.perpendicular)


@dataclass
class ClassOrientation:
    """A head-vertex choice per derived edge, parallel across each class."""

    edge_heads: tuple             # edge index -> (tail vertex, head vertex)
    edge_sign: tuple              # orientation relative to the edge's own rep
    witness: tuple or None        # odd transport cycle if not orientable

    @property
    def ok(self):
        return self.witness is None


def orient_classes(c):
    """Orient every class so related parallel edges point the same way.

    Parity BFS over the descriptor graph generated by facet transports and
    opposite-sides steps; returns a failure witness (an odd cycle of
    generator steps) instead of an orientation when one exists.
    """
    n = c.dim
    cells = c.derive_cells()
    edges = cells.by_dim[1]
    flat = []
    flat_index = {}
    for i, cls in enumerate(edges):
        for desc in cls:
            flat_index[desc] = len(flat)
            flat.append(desc)
    uf = _ParityUF(len(flat))

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
            free = _edge_free_axis(pat)
            r = free - (1 if free > ax else 0)
            parity = 0 if att.signs[r] > 0 else 1
            uf.union(flat_index[desc], flat_index[(b, q)], parity,
                     ("transport", desc, (b, q)))

    squares = cells.by_dim[2] if n >= 2 else ()
    for cls in squares:
        cube, pat = cls[0]
        i_ax, j_ax = [i for i, s in enumerate(pat) if s == STAR]
        for fixed in (i_ax, j_ax):
            side0 = list(pat)
            side0[fixed] = 0
            side1 = list(pat)
            side1[fixed] = 1
            uf.union(flat_index[(cube, tuple(side0))],
                     flat_index[(cube, tuple(side1))], 0,
                     ("opposite", (cube, tuple(side0)), (cube, tuple(side1))))

    if uf.odd_witness is not None:
        return ClassOrientation((), (), _odd_cycle_witness(uf, flat))

    heads = []
    signs = []
    for cls in edges:
        rep = cls[0]
        _, parity = uf.root(flat_index[rep])
        # anchor orientation on the class root so transport-related edges
        # in one equivalence class stay parallel
        sign = 1 if parity == 0 else -1
        cube, pat = rep
        free = _edge_free_axis(pat)
        lo = list(pat)
        lo[free] = 0
        hi = list(pat)
        hi[free] = 1
        tail = cells.index[(cube, tuple(lo))][1]
        head = cells.index[(cube, tuple(hi))][1]
        if sign < 0:
            tail, head = head, tail
        heads.append((tail, head))
        signs.append(sign)
    return ClassOrientation(tuple(heads), tuple(signs), None)


def _odd_cycle_witness(uf, flat):
    """Reconstruct an explicit odd cycle from the recorded generators."""
    x, y, parity, tag = uf.odd_witness
    adj = {}
    for (a, b, p, t) in uf.edges:
        adj.setdefault(a, []).append((b, p, t))
        adj.setdefault(b, []).append((a, p, t))
    # BFS path from x to y avoiding the closing generator itself
    start, goal = x, y
    prev = {start: None}
    queue = [start]
    qi = 0
    while qi < len(queue):
        node = queue[qi]
        qi += 1
        if node == goal:
            break
        for (nxt, p, t) in adj.get(node, ()):
            if t == tag:
                continue
            if nxt not in prev:
                prev[nxt] = (node, p, t)
                queue.append(nxt)
    steps = []
    node = goal
    while prev[node] is not None:
        parent, p, t = prev[node]
        steps.append((t[0], t[1], t[2], p))
        node = parent
    steps.reverse()
    steps.append((tag[0], tag[1], tag[2], parity))
    return tuple(steps)


@dataclass
class FamilyPartition:
    family_of: tuple              # class index -> family index
    families: tuple               # family index -> tuple of class indices

    @property
    def count(self):
        return len(self.families)


def finest_partition(ec):
    return FamilyPartition(tuple(range(ec.count)),
                           tuple((i,) for i in range(ec.count)))


def partition_from_blocks(ec, blocks):
    family_of = [None] * ec.count
    for fi, block in enumerate(blocks):
        for ci in block:
            family_of[ci] = fi
    if any(f is None for f in family_of):
        raise ValueError("blocks do not cover all classes")
    return FamilyPartition(tuple(family_of),
                           tuple(tuple(sorted(b)) for b in blocks))


def check_partition(ec, partition):
    """Perpendicular classes must lie in different families."""
    for a, b in ec.perpendicular:
        if a == b or partition.family_of[a] == partition.family_of[b]:
            return False
    return True


def _edge_vector(c, ec, orientation, partition, nfam):
    """Per derived edge: (tail vertex, head vertex, family basis vector)."""
    out = []
    for i, (tail, head) in enumerate(orientation.edge_heads):
        fam = partition.family_of[ec.class_of[i]]
        out.append((tail, head, fam))
    return out


def development(c, partition, orientation, path):
    """Signed family counts along an edge path.

    The path is a sequence of (edge index, direction) with direction +1 for
    travel along the assigned orientation.  Consecutive edges must share the
    intermediate vertex.
    """
    ec = edge_classes(c)
    vec = [0] * partition.count
    at = None
    for edge, direction in path:
        tail, head = orientation.edge_heads[edge]
        if direction < 0:
            tail, head = head, tail
        if at is not None and at != tail:
            raise ValueError("path is not connected")
        at = head
        vec[partition.family_of[ec.class_of[edge]]] += direction
    return tuple(vec)


def _vertex_development(c, ec, orientation, partition):
    """Develop vertices over a spanning forest; None where inconsistent.

    Returns (coords per vertex, ok) where ok means every non-tree edge
    closed up, i.e. the development vanishes on all cycles.
    """
    cells = c.derive_cells()
    nv = len(cells.by_dim[0])
    nfam = partition.count
    info = _edge_vector(c, ec, orientation, partition, nfam)
    adj = [[] for _ in range(nv)]
    for e, (tail, head, fam) in enumerate(info):
        adj[tail].append((head, fam, 1, e))
        adj[head].append((tail, fam, -1, e))
    coords = [None] * nv
    ok = True
    for start in range(nv):
        if coords[start] is not None:
            continue
        coords[start] = (0,) * nfam
        queue = [start]
        qi = 0
        while qi < len(queue):
            v = queue[qi]
            qi += 1
            base = coords[v]
            for (w, fam, sign, _e) in adj[v]:
                stepped = list(base)
                stepped[fam] += sign
                stepped = tuple(stepped)
                if coords[w] is None:
                    coords[w] = stepped
                    queue.append(w)
                elif coords[w] != stepped:
                    ok = False
    return coords, ok


def check_mappable(c, partition, orientation):
    """Development vanishes on every closed edge path."""
    if not orientation.ok:
        raise ValueError("orientation is not valid")
    ec = edge_classes(c)
    if not check_partition(ec, partition):
        raise ValueError("partition violates perpendicularity")
    _, ok = _vertex_development(c, ec, orientation, partition)
    return ok


def check_embeddable(c, partition, orientation):
    """Mappable, develops vertices injectively, and the complex is standard."""
    ec = edge_classes(c)
    if not check_partition(ec, partition):
        raise ValueError("partition violates perpendicularity")
    coords, ok = _vertex_development(c, ec, orientation, partition)
    if not ok:
        return False
    if len(set(coords)) != len(coords):
        return False
    return c.is_standard() and is_simple_general(c)


@dataclass
class MappabilityCertificate:
    partition: FamilyPartition
    orientation: ClassOrientation
    vertex_coords: tuple


def search_partition(c, max_families=None, node_budget=200000):
    """Look for a partition and orientation certifying mappability.

    Tries the finest partition first, then backtracks over groupings of
    classes into families (with per-class sign flips, respecting
    perpendicularity).  Returns a certificate or None; None is a bounded
    search outcome, not a proof of non-mappability.
    """
    if not is_simple_general(c):
        return None
    orientation = orient_classes(c)
    if not orientation.ok:
        return None
    ec = edge_classes(c)
    fp = finest_partition(ec)
    coords, ok = _vertex_development(c, ec, orientation, fp)
    if ok:
        return MappabilityCertificate(fp, orientation, tuple(coords))

    # cycle defect of each class: the finest development per class
    defects = _class_cycle_defects(c, ec, orientation)
    ncls = ec.count
    conflict = [set() for _ in range(ncls)]
    for a, b in ec.perpendicular:
        conflict[a].add(b)
        conflict[b].add(a)

    budget = [node_budget]
    groups = []          # list of lists of (class, sign)
    sums = []            # running defect sums per group

    def backtrack(i):
        if budget[0] <= 0:
            return None
        budget[0] -= 1
        if i == ncls:
            if all(not any(s) for s in sums):
                blocks = [[ci for ci, _ in g] for g in groups]
                part = partition_from_blocks(ec, blocks)
                signs = {}
                for g in groups:
                    for ci, sg in g:
                        signs[ci] = sg
                flipped = _flip_orientation(orientation, ec, signs)
                cs, ok2 = _vertex_development(c, ec, flipped, part)
                if ok2:
                    return MappabilityCertificate(part, flipped, tuple(cs))
            return None
        if max_families is not None and len(groups) > max_families:
            return None
        for gi in range(len(groups)):
            if any(ci in conflict[i] for ci, _ in groups[gi]):
                continue
            for sign in (1, -1):
                groups[gi].append((i, sign))
                old = sums[gi]
                sums[gi] = tuple(x + sign * d
                                 for x, d in zip(old, defects[i]))
                res = backtrack(i + 1)
                if res is not None:
                    return res
                sums[gi] = old
                groups[gi].pop()
        groups.append([(i, 1)])
        sums.append(defects[i])
        res = backtrack(i + 1)
        if res is not None:
            return res
        groups.pop()
        sums.pop()
        return None

    return backtrack(0)


def _flip_orientation(orientation, ec, class_signs):
    """Reverse whole classes of edges; class_signs maps class -> +-1."""
    heads = list(orientation.edge_heads)
    esign = list(orientation.edge_sign)
    for e in range(len(heads)):
        if class_signs.get(ec.class_of[e], 1) < 0:
            t, h = heads[e]
            heads[e] = (h, t)
            esign[e] = -esign[e]
    return ClassOrientation(tuple(heads), tuple(esign), None)


def _class_cycle_defects(c, ec, orientation):
    """Per class: the vector of its signed counts over a cycle basis."""
    cells = c.derive_cells()
    nv = len(cells.by_dim[0])
    ne = len(cells.by_dim[1])
    adj = [[] for _ in range(nv)]
    for e in range(ne):
        tail, head = orientation.edge_heads[e]
        adj[tail].append((head, e, 1))
        adj[head].append((tail, e, -1))
    # spanning forest and fundamental cycles
    parent_edge = [None] * nv
    depth = [0] * nv
    seen = [False] * nv
    tree_edges = set()
    order = []
    for start in range(nv):
        if seen[start]:
            continue
        seen[start] = True
        queue = [start]
        qi = 0
        while qi < len(queue):
            v = queue[qi]
            qi += 1
            order.append(v)
            for (w, e, sign) in adj[v]:
                if not seen[w]:
                    seen[w] = True
                    parent_edge[w] = (v, e, sign)
                    depth[w] = depth[v] + 1
                    tree_edges.add(e)
                    queue.append(w)
    cycles = []
    for e in range(ne):
        if e in tree_edges:
            continue
        tail, head = orientation.edge_heads[e]
        # cycle: e from tail to head, tree path head -> lca, then lca -> tail
        counts = {e: 1}
        a, b = head, tail
        while depth[a] > depth[b]:
            v, pe, sign = parent_edge[a]
            counts[pe] = counts.get(pe, 0) - sign
            a = v
        while depth[b] > depth[a]:
            v, pe, sign = parent_edge[b]
            counts[pe] = counts.get(pe, 0) + sign
            b = v
        while a != b:
            v, pe, sign = parent_edge[a]
            counts[pe] = counts.get(pe, 0) - sign
            a = v
            v, pe, sign = parent_edge[b]
            counts[pe] = counts.get(pe, 0) + sign
            b = v
        cycles.append(counts)
    defects = []
    for ci in range(ec.count):
        vec = []
        for counts in cycles:
            total = 0
            for e, mult in counts.items():
                if ec.class_of[e] == ci:
                    total += mult
            vec.append(total)
        defects.append(tuple(vec))
    return defects
