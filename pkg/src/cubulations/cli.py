"""Command-line interface.

Every command writes a JSON report with a stable schema to stdout (or to
--out); reports carry the command, input digests, the tool version, and the
seed where randomness is involved, and are byte-identical for identical
inputs and version.  Exit codes: 0 success, 1 domain error (invalid complex
or failed check), 2 usage error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys

from . import __version__
from . import cubfile
from .certificate import certificate, decode_certificate, is_isomorphic
from .complex_core import doubling
from .corpus import UnknownCorpusName, corpus_names, corpus_samples, get_corpus
from .derivative import (babson_chan_check, classify_surface,
                         bordism_invariant_s2, strata, trace_circles)
from .equivalence import SearchConfig, bfs_orbit, find_path, invariant_audit
from .invariants import (NotTabulated, bordism_group_report, fb_class,
                         move_lattice, quotient_invariants)
from .mappability import (check_embeddable, edge_classes, is_simple_general,
                          orient_classes, search_partition)
from .moves import enumerate_templates, get_template
from .surgery import SumSpec, TubeSpec, connected_sum, make_tube
from .symmetry import SignedPerm, all_signed_perms

SCHEMA = "cubulations.report/1"


class UsageError(Exception):
    pass


class DomainError(Exception):
    pass


def _digest(text):
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def load_complex(spec):
    """A complex argument: 'corpus:<name>' or a path to a .cub file."""
    if spec.startswith("corpus:"):
        name = spec[len("corpus:"):]
        try:
            c = get_corpus(name)
        except UnknownCorpusName as exc:
            raise UsageError(str(exc)) from exc
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        return c, {"spec": spec, "sha256": _digest(cubfile.dumps(c))}
    try:
        with open(spec, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {spec}: {exc}") from exc
    try:
        c = cubfile.loads(text)
    except cubfile.CubFormatError as exc:
        raise DomainError(f"parse error in {spec}: {exc}") from exc
    return c, {"spec": spec, "sha256": _digest(text)}


def emit(report, args):
    text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def make_report(command, inputs, result, seed=None):
    report = {
        "schema": SCHEMA,
        "tool_version": __version__,
        "command": command,
        "inputs": inputs,
        "result": result,
    }
    if seed is not None:
        report["seed"] = seed
    return report


def _require_valid(c, mode="closed-manifold"):
    rep = c.validate(mode)
    if not rep.ok:
        raise DomainError("invalid complex: " + "; ".join(rep.problems))


# -- commands ---------------------------------------------------------------


def cmd_validate(args):
    c, digest = load_complex(args.complex)
    rep = c.validate(args.mode)
    result = {"mode": args.mode, "ok": rep.ok, "problems": rep.problems,
              "notes": rep.notes}
    emit(make_report("validate", [digest], result), args)
    return 0 if rep.ok else 1


def cmd_fvec(args):
    c, digest = load_complex(args.complex)
    result = {"f_vector": list(c.f_vector()),
              "euler_characteristic": c.euler_characteristic(),
              "cubes": c.num_cubes, "dim": c.dim,
              "standard": c.is_standard()}
    emit(make_report("fvec", [digest], result), args)
    return 0


def cmd_invariants(args):
    c, digest = load_complex(args.complex)
    _require_valid(c)
    fb = fb_class(c)
    inv = quotient_invariants(c.dim)
    result = {
        "f_vector": list(c.f_vector()),
        "moduli": list(inv.moduli),
        "fb_residues": list(fb.residues),
        "fb_reduced2": list(fb.reduced2),
        "extra_relation_values": list(fb.extras),
    }
    emit(make_report("invariants", [digest], result), args)
    return 0


def cmd_templates(args):
    ts = enumerate_templates(args.dim)
    result = {"dim": args.dim, "count": len(ts),
              "np_count": sum(1 for t in ts if t.np),
              "templates": [
                  {"name": t.name, "k": t.k, "np": t.np,
                   "delta_f": list(t.delta_f),
                   "b_facets": list(t.b_facets),
                   "bp_facets": list(t.bp_facets)}
                  for t in ts]}
    if args.export_dir:
        import os
        from .moves import _boundary_cells
        os.makedirs(args.export_dir, exist_ok=True)
        bc = _boundary_cells(args.dim).bc
        for t in ts:
            for side, facets in (("B", t.b_facets), ("Bp", t.bp_facets)):
                sub = _facet_subcomplex(bc, facets)
                path = os.path.join(args.export_dir,
                                    f"{t.name}.{side}.cub")
                cubfile.save(sub, path)
        with open(os.path.join(args.export_dir, "manifest.json"), "w",
                  encoding="utf-8") as fh:
            json.dump(result, fh, sort_keys=True, indent=2)
    emit(make_report("templates", [], result), args)
    return 0


def _facet_subcomplex(bc, facets):
    from .complex_core import Cubulation
    inside = {x: i for i, x in enumerate(sorted(facets))}
    pairings = {}
    for (a, f), (b, g, att) in bc.pairings.items():
        if a in inside and b in inside:
            pairings[(inside[a], f)] = (inside[b], g, att)
    return Cubulation(bc.dim, len(inside), pairings,
                      names=tuple(bc.names[x] for x in sorted(facets)))


def cmd_lattice(args):
    lat = move_lattice(args.dim)
    inv = quotient_invariants(args.dim)
    result = {
        "dim": args.dim,
        "generators": [list(g) for g in lat.generators],
        "basis": [list(b) for b in lat.basis],
        "snf_diagonal": list(inv.snf_diagonal),
        "free_rank": inv.free_rank,
        "moduli": list(inv.moduli),
        "exact_invariants": [list(e) for e in inv.exact_invariants],
        "extra_relations": [
            {"coefficients": list(cc), "modulus": m}
            for cc, m in inv.extra_relations],
        "is_product_lattice": inv.is_product,
    }
    emit(make_report("lattice", [], result), args)
    return 0


def cmd_derivative(args):
    c, digest = load_complex(args.complex)
    _require_valid(c)
    if c.dim != 2:
        raise DomainError("derivative reports are for surface cubulations")
    tr = trace_circles(c)
    st = strata(c)
    result = {
        "components": [
            {"sheets": [[sq, ax] for sq, ax, _ in comp],
             "gauss_code": list(tr.gauss_codes[i]),
             "canonical_code": list(tr.canonical_codes[i]),
             "ns": tr.ns_per_component[i]}
            for i, comp in enumerate(tr.components)],
        "double_points": {str(sq): list(pair)
                          for sq, pair in tr.double_points.items()},
        "ns_total": tr.ns_total,
        "strata_cells": [list(row) for row in st.counts],
        "strata_chi": list(st.chi),
        "babson_chan": babson_chan_check(c),
    }
    emit(make_report("derivative", [digest], result), args)
    return 0


def cmd_classify(args):
    c, digest = load_complex(args.complex)
    _require_valid(c)
    if c.dim != 2:
        raise DomainError("classification is for surface cubulations")
    cl = classify_surface(c)
    result = {
        "verdict": cl.verdict,
        "ns_per_component": list(cl.trace.ns_per_component),
        "matchings": [
            {str(p): q for p, q in m.items()} if m is not None else None
            for m in cl.matchings],
        "simple_general_agrees":
            is_simple_general(c) == (cl.verdict == "simple"),
    }
    emit(make_report("classify", [digest], result), args)
    return 0


def cmd_mappable(args, embeddable=False):
    c, digest = load_complex(args.complex)
    _require_valid(c)
    if not is_simple_general(c):
        result = {"simple": False, "certified": False,
                  "note": "complex is not simple"}
        emit(make_report("embeddable" if embeddable else "mappable",
                         [digest], result), args)
        return 1
    cert = search_partition(c, max_families=args.max_families)
    if cert is None:
        result = {"simple": True, "certified": False,
                  "note": "bounded search found no certificate; this does "
                          "not prove non-mappability"}
        emit(make_report("embeddable" if embeddable else "mappable",
                         [digest], result), args)
        return 1
    payload = {
        "simple": True,
        "certified": True,
        "families": [list(block) for block in cert.partition.families],
        "edge_orientations": [list(h) for h in
                              cert.orientation.edge_heads],
        "vertex_coordinates": [list(v) for v in cert.vertex_coords],
    }
    if embeddable:
        ok = check_embeddable(c, cert.partition, cert.orientation)
        payload["embeddable"] = ok
        payload["standard"] = c.is_standard()
        emit(make_report("embeddable", [digest], payload), args)
        return 0 if ok else 1
    emit(make_report("mappable", [digest], payload), args)
    return 0


def cmd_embeddable(args):
    return cmd_mappable(args, embeddable=True)


def cmd_consum(args):
    left, dleft = load_complex(args.left)
    right, dright = load_complex(args.right)
    _require_valid(left)
    _require_valid(right)
    twist = _parse_twist(args.twist, left.dim)
    spec = SumSpec(left, args.left_cell, right, args.right_cell,
                   TubeSpec(args.tube_length, twist))
    try:
        out = connected_sum(spec)
    except ValueError as exc:
        raise DomainError(str(exc)) from exc
    rep = out.validate("closed-manifold")
    if not rep.ok:
        raise DomainError("sum failed validation: " + "; ".join(rep.problems))
    result = {
        "f_vector": list(out.f_vector()),
        "euler_characteristic": out.euler_characteristic(),
        "cub": cubfile.dumps(out),
    }
    if args.check_additivity:
        if left.dim == 2:
            from .surgery import invariant_additivity_check
            add = invariant_additivity_check(spec)
            result["additivity"] = {
                "ok": add.ok,
                "checks": [{"name": n, "ok": p, "detail": d}
                           for n, p, d in add.checks]}
        else:
            result["additivity"] = {"ok": None,
                                    "note": "defined for surfaces only"}
    if args.save:
        cubfile.save(out, args.save)
    emit(make_report("consum", [dleft, dright], result), args)
    return 0


def _parse_twist(text, n):
    if not text:
        return None
    toks = text.split()
    if len(toks) != n:
        raise UsageError(f"twist needs {n} signed axis tokens")
    images, signs = [], []
    for tok in toks:
        if len(tok) < 2 or tok[0] not in "+-" or not tok[1:].isdigit():
            raise UsageError(f"bad twist token {tok!r}")
        images.append(int(tok[1:]))
        signs.append(1 if tok[0] == "+" else -1)
    if sorted(images) != list(range(n)):
        raise UsageError("twist is not a permutation of the axes")
    return SignedPerm(tuple(images), tuple(signs))


def cmd_orbit(args):
    c, digest = load_complex(args.complex)
    cfg = SearchConfig(max_depth=args.depth, np_only=args.np_only,
                       max_states=args.max_states,
                       templates=tuple(args.template) if args.template
                       else None)
    store = bfs_orbit(c, cfg)
    audit = invariant_audit(store) if args.audit else None
    result = {
        "states": len(store),
        "depth_histogram": {str(k): v
                            for k, v in store.depth_histogram().items()},
        "truncated": store.truncated,
    }
    if audit is not None:
        result["audit"] = {"ok": audit.ok,
                           "homotopy_checked": audit.homotopy_checked,
                           "failures": [list(f) for f in audit.failures]}
    if args.store:
        store.save(args.store)
        result["store"] = args.store
    emit(make_report("orbit", [digest], result), args)
    return 0


def cmd_path(args):
    a, da = load_complex(args.source)
    b, db = load_complex(args.target)
    cfg = SearchConfig(max_depth=args.depth, np_only=args.np_only,
                       max_states=args.max_states)
    res = find_path(a, b, cfg)
    result = {"status": res.status}
    if res.sequence is not None:
        result["moves"] = [
            {"template": s.template, "orientation": s.orientation,
             "cubes": list(s.cubes)}
            for s in res.sequence.steps]
        result["replayed"] = res.sequence.replay()
    if res.reason:
        result["reason"] = res.reason
    emit(make_report("path", [da, db], result), args)
    return 0 if res.status in ("found", "inequivalent") else 1


def cmd_export_dot(args):
    c, digest = load_complex(args.complex)
    _require_valid(c)
    if c.dim != 2:
        raise DomainError("dot export is for surface cubulations")
    tr = trace_circles(c)
    lines = ["graph immersion {"]
    for sq in sorted(tr.double_points):
        lines.append(f'  p{sq} [label="{sq}"];')
    for i, code in enumerate(tr.gauss_codes):
        L = len(code)
        for j in range(L):
            a, b = code[j], code[(j + 1) % L]
            lines.append(f"  p{a} -- p{b} [label=\"K{i}\"];")
    lines.append("}")
    text = "\n".join(lines) + "\n"
    if args.out_dot:
        with open(args.out_dot, "w", encoding="utf-8") as fh:
            fh.write(text)
    result = {"dot": text, "components": len(tr.gauss_codes)}
    emit(make_report("export-dot", [digest], result), args)
    return 0


def cmd_bordism(args):
    try:
        result = bordism_group_report(args.n, oriented=args.oriented)
    except NotTabulated as exc:
        result = {"group": None, "not_tabulated": True,
                  "description": str(exc)}
        emit(make_report("bordism", [], result), args)
        return 1
    emit(make_report("bordism", [], result), args)
    return 0


def cmd_corpus(args):
    if args.action == "list":
        result = {"families": [{"pattern": p, "description": d}
                               for p, d in corpus_names()],
                  "samples": corpus_samples()}
        emit(make_report("corpus", [], result), args)
        return 0
    try:
        c = get_corpus(args.name)
    except (UnknownCorpusName, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    text = cubfile.dumps(c, comment=f"corpus complex {args.name}")
    if args.save:
        with open(args.save, "w", encoding="utf-8") as fh:
            fh.write(text)
    result = {"name": args.name, "cub": text,
              "f_vector": list(c.f_vector()),
              "sha256": _digest(text)}
    emit(make_report("corpus", [], result), args)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="cubulations",
        description="bubble moves, invariants and immersion data for "
                    "cubulated manifolds")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.set_defaults(func=func)
        p.add_argument("--out", help="write the JSON report to this file")
        return p

    p = add("validate", cmd_validate, help="check complex/manifold invariants")
    p.add_argument("complex")
    p.add_argument("--mode", default="closed-manifold",
                   choices=["complex", "closed-manifold",
                            "manifold-with-boundary"])

    p = add("fvec", cmd_fvec, help="f-vector and Euler characteristic")
    p.add_argument("complex")

    p = add("invariants", cmd_invariants, help="move-invariant residues")
    p.add_argument("complex")

    p = add("templates", cmd_templates, help="enumerate bubble-move templates")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--export-dir", help="write .cub files and a manifest")

    p = add("lattice", cmd_lattice, help="move lattice and quotient data")
    p.add_argument("--dim", type=int, required=True)

    p = add("derivative", cmd_derivative,
            help="circles, Gauss codes, strata of the immersion")
    p.add_argument("complex")

    p = add("classify", cmd_classify, help="simple / semi-simple / neither")
    p.add_argument("complex")

    p = add("mappable", cmd_mappable, help="search a mappability certificate")
    p.add_argument("complex")
    p.add_argument("--max-families", type=int, default=None)

    p = add("embeddable", cmd_embeddable,
            help="mappability certificate plus injectivity and standardness")
    p.add_argument("complex")
    p.add_argument("--max-families", type=int, default=None)

    p = add("consum", cmd_consum, help="connected sum through a tube")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--left-cell", type=int, default=0)
    p.add_argument("--right-cell", type=int, default=0)
    p.add_argument("--tube-length", type=int, default=3)
    p.add_argument("--twist", default=None,
                   help="signed axis tokens, e.g. '+1 -0'")
    p.add_argument("--check-additivity", action="store_true")
    p.add_argument("--save", help="write the sum as a .cub file")

    p = add("orbit", cmd_orbit, help="bounded breadth-first orbit search")
    p.add_argument("complex")
    p.add_argument("--depth", type=int, default=2)
    p.add_argument("--np-only", action="store_true")
    p.add_argument("--max-states", type=int, default=10 ** 6)
    p.add_argument("--template", action="append",
                   help="restrict to these template names")
    p.add_argument("--audit", action="store_true")
    p.add_argument("--store", help="persist the orbit store to this file")

    p = add("path", cmd_path, help="bidirectional move-sequence search")
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("--depth", type=int, default=4)
    p.add_argument("--np-only", action="store_true")
    p.add_argument("--max-states", type=int, default=10 ** 5)

    p = add("export-dot", cmd_export_dot, help="immersion image graph as DOT")
    p.add_argument("complex")
    p.add_argument("--out-dot", help="write the DOT text to this file")

    p = add("bordism", cmd_bordism, help="tabulated bordism group lookup")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--oriented", action="store_true")

    p = add("corpus", cmd_corpus, help="named built-in complexes")
    p.add_argument("action", choices=["list", "get"])
    p.add_argument("name", nargs="?")
    p.add_argument("--save", help="write the .cub file here")

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "corpus" and args.action == "get" and not args.name:
        parser.error("corpus get needs a name")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
