"""Bounded exploration of the bubble-move rewriting graph.

States are deduplicated by canonical certificate; the store keeps only
certificates plus search metadata, decoding a representative complex on
demand.  Path search runs a bidirectional BFS meeting on certificates, and
returned move sequences are replayed to verify them.  Non-equivalence is
only ever claimed through an invariant separation, never through search
exhaustion.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .certificate import certificate, decode_certificate
from .derivative import homotopy_census
from .invariants import fb_class
from .moves import MoveSite, all_sites, apply_move, get_template


@dataclass(frozen=True)
class SearchConfig:
    max_depth: int = 4
    np_only: bool = False
    max_states: int = 10 ** 6
    templates: tuple = None       # optional whitelist of template names

    def __post_init__(self):
        if self.max_depth < 0 or self.max_states <= 0:
            raise ValueError("budgets must be positive")


@dataclass
class OrbitEntry:
    depth: int
    parent: bytes                 # parent certificate (or None for the seed)
    move: tuple                   # (template, orientation, cubes, syms)


@dataclass
class OrbitStore:
    seed: bytes
    config: SearchConfig
    entries: dict = field(default_factory=dict)
    truncated: bool = False

    def __len__(self):
        return len(self.entries)

    def __contains__(self, cert):
        return cert in self.entries

    def representative(self, cert):
        return decode_certificate(cert)

    def depth_histogram(self):
        hist = {}
        for e in self.entries.values():
            hist[e.depth] = hist.get(e.depth, 0) + 1
        return dict(sorted(hist.items()))

    def save(self, path):
        """Append-only record file: one JSON object per state."""
        with open(path, "w", encoding="utf-8") as fh:
            header = {
                "seed": self.seed.hex(),
                "config": {
                    "max_depth": self.config.max_depth,
                    "np_only": self.config.np_only,
                    "max_states": self.config.max_states,
                    "templates": list(self.config.templates)
                    if self.config.templates else None,
                },
                "truncated": self.truncated,
            }
            fh.write(json.dumps(header, sort_keys=True) + "\n")
            for cert, e in self.entries.items():
                rec = {
                    "cert": cert.hex(),
                    "depth": e.depth,
                    "parent": e.parent.hex() if e.parent else None,
                    "move": _move_to_json(e.move),
                }
                fh.write(json.dumps(rec, sort_keys=True) + "\n")

    @staticmethod
    def load(path):
        with open(path, "r", encoding="utf-8") as fh:
            header = json.loads(fh.readline())
            cfg = SearchConfig(
                max_depth=header["config"]["max_depth"],
                np_only=header["config"]["np_only"],
                max_states=header["config"]["max_states"],
                templates=tuple(header["config"]["templates"])
                if header["config"]["templates"] else None)
            store = OrbitStore(bytes.fromhex(header["seed"]), cfg,
                               truncated=header["truncated"])
            for line in fh:
                rec = json.loads(line)
                store.entries[bytes.fromhex(rec["cert"])] = OrbitEntry(
                    rec["depth"],
                    bytes.fromhex(rec["parent"]) if rec["parent"] else None,
                    _move_from_json(rec["move"]))
            return store


def _move_to_json(move):
    if move is None:
        return None
    template, orientation, cubes, syms = move
    return [template, orientation, list(cubes), list(syms)]


def _move_from_json(data):
    if data is None:
        return None
    return (data[0], data[1], tuple(data[2]), tuple(data[3]))


def _site_of(move, dim):
    template, orientation, cubes, syms = move
    return MoveSite(template, dim, orientation, cubes, syms)


def bfs_orbit(seed, cfg=SearchConfig()):
    """Breadth-first orbit of the seed, deduplicated by certificate.

    Deterministic given the config: states are expanded in insertion order,
    sites in their canonical order.  Exhausting a budget sets the truncated
    flag; it is not an error.
    """
    report = seed.validate("closed-manifold")
    if not report.ok:
        raise ValueError("seed is not a valid closed manifold: "
                         + "; ".join(report.problems))
    seed_cert = certificate(seed)
    store = OrbitStore(seed_cert, cfg)
    store.entries[seed_cert] = OrbitEntry(0, None, None)
    frontier = [(seed_cert, seed)]
    depth = 0
    while frontier and depth < cfg.max_depth:
        depth += 1
        nxt = []
        for parent_cert, parent in frontier:
            for site in all_sites(parent, np_only=cfg.np_only,
                                  template_names=cfg.templates):
                if len(store.entries) >= cfg.max_states:
                    store.truncated = True
                    return store
                child = apply_move(parent, site).complex
                child_cert = certificate(child)
                if child_cert in store.entries:
                    continue
                store.entries[child_cert] = OrbitEntry(
                    depth, parent_cert,
                    (site.template, site.orientation, site.cubes, site.syms))
                nxt.append((child_cert, child))
        frontier = nxt
    return store


@dataclass
class MoveStep:
    source: bytes
    template: str
    orientation: str
    cubes: tuple
    syms: tuple
    result: bytes


@dataclass
class MoveSequence:
    steps: tuple

    def replay(self):
        """Re-apply every step, verifying each certificate along the way."""
        if not self.steps:
            return True
        current = decode_certificate(self.steps[0].source)
        for step in self.steps:
            if certificate(current) != step.source:
                return False
            site = MoveSite(step.template, current.dim, step.orientation,
                            step.cubes, step.syms)
            current = apply_move(current, site).complex
            if certificate(current) != step.result:
                return False
        return True


@dataclass
class PathResult:
    status: str                   # "found" | "inequivalent" | "not-found"
    sequence: MoveSequence = None
    reason: str = None


def find_path(a, b, cfg=SearchConfig()):
    """Bidirectional bounded search for a move sequence from a to b.

    A provable separation by the f-vector residue class is reported as
    inequivalence; search exhaustion is reported as not-found and proves
    nothing.
    """
    if a.dim != b.dim:
        raise ValueError("complexes must have equal dimension")
    ca, cb = certificate(a), certificate(b)
    if ca == cb:
        return PathResult("found", MoveSequence(()))
    fa, fb = fb_class(a), fb_class(b)
    if fa != fb:
        return PathResult(
            "inequivalent", None,
            f"f-vector residue classes differ: {fa.residues} vs "
            f"{fb.residues} (mod {_moduli_of(a)})")

    sides = {
        "a": {ca: (0, None, None)},
        "b": {cb: (0, None, None)},
    }
    frontiers = {"a": [(ca, a)], "b": [(cb, b)]}
    states = 2
    meet = None
    for _ in range(cfg.max_depth):
        tag = "a" if len(frontiers["a"]) <= len(frontiers["b"]) else "b"
        other = "b" if tag == "a" else "a"
        if not frontiers[tag]:
            tag, other = other, tag
        if not frontiers[tag]:
            break
        nxt = []
        for parent_cert, parent in frontiers[tag]:
            for site in all_sites(parent, np_only=cfg.np_only,
                                  template_names=cfg.templates):
                if states >= cfg.max_states:
                    return PathResult("not-found", None,
                                      "state budget exhausted")
                child = apply_move(parent, site).complex
                child_cert = certificate(child)
                if child_cert in sides[tag]:
                    continue
                sides[tag][child_cert] = (
                    sides[tag][parent_cert][0] + 1, parent_cert,
                    (site.template, site.orientation, site.cubes, site.syms))
                states += 1
                nxt.append((child_cert, child))
                if child_cert in sides[other]:
                    meet = child_cert
                    break
            if meet:
                break
        frontiers[tag] = nxt
        if meet:
            break
    if meet is None:
        return PathResult("not-found", None,
                          f"no path within depth {cfg.max_depth} "
                          f"and {cfg.max_states} states")

    steps = _chain(sides["a"], meet, forward=True) \
        + _reverse_chain(sides["b"], meet)
    seq = MoveSequence(tuple(steps))
    if not seq.replay():
        raise AssertionError("reconstructed path fails to replay")
    return PathResult("found", seq)


def _moduli_of(a):
    from .invariants import quotient_invariants
    return quotient_invariants(a.dim).moduli


def _chain(side, meet, forward):
    """Steps from the seed of this side down to the meet certificate."""
    chain = []
    cert = meet
    while True:
        depth, parent, move = side[cert]
        if parent is None:
            break
        chain.append((parent, move, cert))
        cert = parent
    chain.reverse()
    return [MoveStep(p, m[0], m[1], m[2], m[3], ch) for p, m, ch in chain]


def _reverse_chain(side, meet):
    """Invert the b-side chain: moves from the meet back up to b's seed."""
    steps = []
    cert = meet
    while True:
        depth, parent, move = side[cert]
        if parent is None:
            break
        template = get_template(
            decode_certificate(cert).dim, move[0])
        flip = "inverse" if move[1] == "forward" else "forward"
        child = decode_certificate(cert)
        # find the inverse site at the freshly written cells by scanning in
        # canonical order for the site that restores the parent certificate
        from .moves import find_sites
        found = None
        for site in find_sites(child, template, flip):
            res = apply_move(child, site).complex
            if certificate(res) == parent:
                found = site
                break
        if found is None:
            raise AssertionError("inverse site reconstruction failed")
        steps.append(MoveStep(cert, found.template, found.orientation,
                              found.cubes, found.syms, parent))
        cert = parent
    return steps


@dataclass
class AuditReport:
    ok: bool
    states: int
    failures: tuple
    homotopy_checked: bool


def invariant_audit(store, check_homotopy=None):
    """Assert the move invariants across a computed orbit.

    The f-vector residue class must be constant; on np-only surface orbits
    of non-simply-connected seeds the census of nontrivial circle classes
    must be constant as well.  Any violation indicates an implementation
    bug, so failures are collected and reported as hard errors.
    """
    seed = decode_certificate(store.seed)
    want_fb = fb_class(seed)
    if check_homotopy is None:
        check_homotopy = (store.config.np_only and seed.dim == 2
                          and seed.euler_characteristic() != 2)
    want_census = homotopy_census(seed) if check_homotopy else None
    failures = []
    for cert in store.entries:
        c = decode_certificate(cert)
        got = fb_class(c)
        if got != want_fb:
            failures.append(("fb", cert.hex()[:16], got))
        if check_homotopy:
            census = homotopy_census(c)
            if census != want_census:
                failures.append(("homotopy", cert.hex()[:16], census))
    return AuditReport(not failures, len(store.entries), tuple(failures),
                       check_homotopy)
