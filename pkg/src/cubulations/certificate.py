"""Canonical certificates for cubulations.

Two complexes are isomorphic iff one can be carried to the other by
relabelling cubes and applying a hyperoctahedral symmetry to each cube.  The
certificate is the lexicographically smallest breadth-first encoding over
all choices of (start cube, start symmetry); candidate starts are pruned by
an iterative refinement of cube colours, and each candidate encoding is
abandoned as soon as it exceeds the best one found so far.

The winning encoding determines the complex up to isomorphism, so a
certificate can be decoded back into a representative complex; orbit
searches use this to avoid keeping every explored complex in memory.
"""

from __future__ import annotations

import struct

from .complex_core import Cubulation
from .symmetry import facet_axis, facet_side, opposite_facet, sym_tables

_MAGIC = b"CC1"

_UNPAIRED = 0
_FRESH = 1
_SEEN = 2


def compile_pairings(c):
    """Pairing table with attaching maps replaced by their table indices."""
    if c._compiled is not None:
        return c._compiled
    tables = sym_tables(c.dim)
    pt = [[None] * (2 * c.dim) for _ in range(c.num_cubes)]
    for (a, f), (b, g, att) in c.pairings.items():
        pt[a][f] = (b, g, tables.att_id[att])
    c._compiled = pt
    return pt


def _components(pt, m):
    seen = [False] * m
    comps = []
    for start in range(m):
        if seen[start]:
            continue
        comp = [start]
        seen[start] = True
        stack = [start]
        while stack:
            x = stack.pop()
            for pr in pt[x]:
                if pr is not None and not seen[pr[0]]:
                    seen[pr[0]] = True
                    comp.append(pr[0])
                    stack.append(pr[0])
        comps.append(comp)
    return comps


def _refine_colors(pt, cubes, rounds=2):
    """Iterative colour refinement on the cube adjacency structure."""
    local = {c: i for i, c in enumerate(cubes)}
    colors = []
    for c in cubes:
        partners = sorted(
            (pr[0] if pr is not None else -1) for pr in pt[c])
        profile = []
        prev, run = None, 0
        for p in partners:
            if p == prev:
                run += 1
            else:
                if prev is not None:
                    profile.append(run)
                prev, run = p, 1
        profile.append(run)
        unpaired = sum(1 for pr in pt[c] if pr is None)
        colors.append((unpaired, tuple(sorted(profile))))
    rank = _rank(colors)
    for _ in range(rounds):
        nxt = []
        for i, c in enumerate(cubes):
            neigh = sorted(
                rank[local[pr[0]]] for pr in pt[c]
                if pr is not None and pr[0] in local)
            nxt.append((rank[i], tuple(neigh)))
        new_rank = _rank(nxt)
        if new_rank == rank:
            break
        rank = new_rank
    return rank


def _rank(colors):
    order = sorted(set(colors))
    idx = {col: i for i, col in enumerate(order)}
    return [idx[col] for col in colors]


def _encode_component(pt, cubes, tables, n):
    """Lexicographically minimal BFS encoding of one connected component."""
    two_n = 2 * n
    comp = tables.comp
    inv = tables.inv
    fact = tables.fact
    wall = tables.wall
    restr = tables.restr
    att_comp = tables.att_comp
    att_inv = tables.att_inv
    acount = tables.att_count

    rank = _refine_colors(pt, cubes)
    best_rank = min(rank)
    starts = [c for c, r in zip(cubes, rank) if r == best_rank]

    best = None
    label = {}
    for start in starts:
        for s0 in range(tables.count):
            label.clear()
            label[start] = 0
            syms = [s0]
            order = [start]
            out = []
            worse = False
            prefix_ok = best is not None   # tracking equality with best
            qi = 0
            while qi < len(order) and not worse:
                c = order[qi]
                sc = syms[qi]
                sc_inv = inv[sc]
                qi += 1
                base = (qi - 1) * two_n
                for fc in range(two_n):
                    f = fact[sc_inv][fc]
                    pr = pt[c][f]
                    if pr is None:
                        tok = 0
                    else:
                        c2, f2, a = pr
                        lab = label.get(c2)
                        if lab is None:
                            label[c2] = len(order)
                            # canonical coords of c2 make this wall trivial
                            rho = wall[f][f2][a]
                            syms.append(comp[sc][inv[rho]])
                            order.append(c2)
                            tok = 1
                        else:
                            s2 = syms[lab]
                            fc2 = fact[s2][f2]
                            # attaching map rewritten in canonical coords
                            r_src = att_inv[restr[sc][facet_axis(f)]]
                            r_dst = restr[s2][facet_axis(f2)]
                            ac = att_comp[r_dst][att_comp[a][r_src]]
                            tok = (lab * two_n + fc2) * acount + ac + 2
                    if prefix_ok:
                        b = best[base + fc]
                        if tok > b:
                            worse = True
                            break
                        if tok < b:
                            prefix_ok = False
                    out.append(tok)
            if worse:
                continue
            if best is None or out < best:
                best = out
    return best


def certificate(c):
    """Canonical byte string determined by the isomorphism class of c."""
    if c._cert is not None:
        return c._cert
    c._require_involutive()
    n = c.dim
    tables = sym_tables(n)
    pt = compile_pairings(c)
    comps = _components(pt, c.num_cubes)
    encodings = sorted(
        (len(comp), _encode_component(pt, comp, tables, n))
        for comp in comps)
    payload = bytearray()
    payload += _MAGIC
    payload += struct.pack("<BHH", n, c.num_cubes, len(encodings))
    for size, enc in encodings:
        payload += struct.pack("<H", size)
        payload += struct.pack(f"<{len(enc)}I", *enc)
    cert = bytes(payload)
    c._cert = cert
    return cert


def decode_certificate(cert):
    """Rebuild a representative complex from a certificate."""
    if cert[:3] != _MAGIC:
        raise ValueError("not a certificate")
    n, total, ncomp = struct.unpack_from("<BHH", cert, 3)
    tables = sym_tables(n)
    two_n = 2 * n
    acount = tables.att_count
    pos = 3 + 5
    pairings = {}
    offset = 0
    for _ in range(ncomp):
        (size,) = struct.unpack_from("<H", cert, pos)
        pos += 2
        toks = struct.unpack_from(f"<{size * two_n}I", cert, pos)
        pos += 4 * size * two_n
        next_new = 1
        for i in range(size):
            for fc in range(two_n):
                tok = toks[i * two_n + fc]
                if tok == 0:
                    continue
                if tok == 1:
                    c2 = next_new
                    next_new += 1
                    f2 = opposite_facet(fc)
                    att = tables.atts[tables.identity_att]
                else:
                    rest, ac = divmod(tok - 2, acount)
                    c2, f2 = divmod(rest, two_n)
                    att = tables.atts[ac]
                key = (offset + i, fc)
                if key not in pairings:
                    pairings[key] = (offset + c2, f2, att)
                    pairings[(offset + c2, f2)] = (offset + i, fc,
                                                   att.inverse())
        offset += size
    return Cubulation(n, total, pairings)


def is_isomorphic(a, b):
    return certificate(a) == certificate(b)
