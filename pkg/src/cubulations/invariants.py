"""Move-lattice invariants of the f-vector.

The f-vector changes of all bubble moves in dimension n span a lattice in
Z^{n+1}; residues of the f-vector modulo that lattice are move invariants.
Everything here is recomputed from the enumerated templates: the per
coordinate moduli, the Smith normal form of the quotient, and any small
integer functionals preserved beyond the per-coordinate ones.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from math import gcd

from .homology import hnf_rows, kernel_basis, smith_normal_form, solve_integer
from .moves import enumerate_templates


@dataclass(frozen=True)
class MoveLattice:
    n: int
    generators: tuple       # delta_f of every template (forward orientation)
    basis: tuple            # reduced integer basis rows

    @property
    def rank(self):
        return len(self.basis)


@lru_cache(maxsize=None)
def move_lattice(n):
    gens = tuple(t.delta_f for t in enumerate_templates(n))
    basis = tuple(tuple(row) for row in hnf_rows([list(g) for g in gens]))
    return MoveLattice(n, gens, basis)


@dataclass(frozen=True)
class QuotientInvariants:
    n: int
    snf_diagonal: tuple       # elementary divisors of the generator matrix
    free_rank: int            # rank of the free part of Z^{n+1}/lattice
    moduli: tuple             # greatest per-coordinate moduli a_0..a_n
    exact_invariants: tuple   # functionals vanishing on every generator
    extra_relations: tuple    # ((coeffs, modulus), ...) beyond the moduli
    is_product: bool          # whether the lattice is the product of a_i Z


@lru_cache(maxsize=None)
def quotient_invariants(n, coeff_bound=2, max_modulus=8):
    lat = move_lattice(n)
    gens = [g for g in lat.generators if any(g)]
    moduli = tuple(_column_gcd(gens, i) for i in range(n + 1))
    if any(a == 0 for a in moduli):
        raise AssertionError("a coordinate of the move lattice vanishes")
    snf = tuple(smith_normal_form([list(g) for g in gens]))
    exact = tuple(tuple(r) for r in
                  hnf_rows(kernel_basis([list(g) for g in gens])))
    extras = _extra_relations(gens, moduli, exact, coeff_bound, max_modulus)
    product_lattice = _is_product_lattice(lat.basis, moduli, n)
    return QuotientInvariants(n, snf, n + 1 - len(snf), moduli, exact,
                              tuple(extras), product_lattice)


def _column_gcd(gens, i):
    g = 0
    for row in gens:
        g = gcd(g, row[i])
    return g


def _in_row_lattice(rows, vec):
    if not rows:
        return not any(vec)
    cols = len(rows[0])
    mat = [[rows[j][i] for j in range(len(rows))] for i in range(cols)]
    return solve_integer(mat, list(vec)) is not None


def _coset_reducer(rows, n1):
    """Canonical coset representative map modulo an integer row lattice."""
    h = hnf_rows(rows)
    pivots = []
    for r in h:
        pivots.append((next(j for j, x in enumerate(r) if x), r))

    def reduce(vec):
        v = list(vec)
        for j, row in pivots:
            q = v[j] // row[j]
            if q:
                v = [x - q * y for x, y in zip(v, row)]
        return tuple(v)

    return reduce


def _extra_relations(gens, moduli, exact, coeff_bound, max_modulus):
    """Primitive functionals c with c . delta == 0 (mod m) on all generators,
    beyond the per-coordinate moduli.

    Exact invariants (reported separately) and their mod-m shadows are
    dropped.  Candidates are grouped into classes modulo unit scaling and
    modulo functionals whose values the moduli and exact invariants already
    determine; each class is reported through its simplest found members.
    """
    n1 = len(moduli)
    exact_rows = [list(e) for e in exact]
    classes = {}
    for m in range(2, max_modulus + 1):
        units = [u for u in range(1, m) if gcd(u, m) == 1]
        shadow_rows = exact_rows + [
            [m if j == i else 0 for j in range(n1)] for i in range(n1)]
        implied_rows = exact_rows + [
            [(m // gcd(m, moduli[i])) if j == i else 0 for j in range(n1)]
            for i in range(n1)]
        reduce = _coset_reducer(implied_rows, n1)
        for coeffs in product(range(-coeff_bound, coeff_bound + 1),
                              repeat=n1):
            if all(x == 0 for x in coeffs):
                continue
            g0 = 0
            for x in coeffs:
                g0 = gcd(g0, x)
            if g0 != 1:
                continue
            first = next(x for x in coeffs if x)
            if first < 0:
                continue
            values = [sum(c * d for c, d in zip(coeffs, g)) for g in gens]
            if any(v % m for v in values):
                continue
            if not any(values):
                continue  # exact invariant, reported separately
            if all(c * a % m == 0 for c, a in zip(coeffs, moduli)):
                continue  # already determined by the per-coordinate moduli
            if _in_row_lattice(shadow_rows, coeffs):
                continue  # mod-m shadow of an exact invariant
            key = (m, min(reduce([u * x for x in coeffs]) for u in units))
            classes.setdefault(key, set()).add(coeffs)
    out = []
    for (m, _), members in sorted(classes.items()):
        rank = {c: (sum(1 for x in c if x), sum(abs(x) for x in c), c)
                for c in members}
        best = min(rank.values())[:2]
        for c in sorted(members):
            if rank[c][:2] == best:
                out.append((c, m))
    return sorted(set(out))


def _is_product_lattice(basis, moduli, n):
    """Whether the lattice equals the product of its coordinate projections."""
    prod_rows = [[moduli[i] if j == i else 0 for j in range(n + 1)]
                 for i in range(n + 1)]
    ha = hnf_rows([list(r) for r in basis])
    return ha == hnf_rows(prod_rows)


def surjectivity_preimages(n):
    """Standard basis preimages witnessing surjectivity onto prod Z/a_i."""
    inv = quotient_invariants(n)
    return [tuple(1 if j == i else 0 for j in range(n + 1))
            for i in range(n + 1)], inv.moduli


@dataclass(frozen=True)
class FbClass:
    n: int
    residues: tuple       # f_i mod a_i(n)
    reduced2: tuple       # f mod (2, ..., 2, 2n, 2)
    extras: tuple         # values of the extra relations


def reduced2_moduli(n):
    mods = [2] * (n + 1)
    if n >= 1:
        mods[n - 1] = 2 * n
    return tuple(mods)


def fb_class(c):
    """Move-invariant residue class of the f-vector."""
    n = c.dim
    if n > 4:
        raise ValueError("invariants are tabulated for n <= 4")
    inv = quotient_invariants(n)
    fv = c.f_vector()
    residues = tuple(f % a for f, a in zip(fv, inv.moduli))
    reduced = tuple(f % a for f, a in zip(fv, reduced2_moduli(n)))
    extras = tuple(sum(cc * f for cc, f in zip(coeffs, fv)) % m
                   for coeffs, m in inv.extra_relations)
    return FbClass(n, residues, reduced, extras)


def fb2_class(c):
    return fb_class(c).reduced2


def fb_of_delta(n, delta):
    inv = quotient_invariants(n)
    residues = tuple(d % a for d, a in zip(delta, inv.moduli))
    extras = tuple(sum(cc * d for cc, d in zip(coeffs, delta)) % m
                   for coeffs, m in inv.extra_relations)
    return residues, extras


# ---------------------------------------------------------------------------
# tabulated bordism groups


STABLE_STEMS = {
    0: "Z",
    1: "Z/2",
    2: "Z/2",
    3: "Z/24",
    4: "0",
    5: "0",
    6: "Z/2",
    7: "Z/240",
    8: "Z/2+Z/2",
}

STABLE_STEMS_RP = {
    1: "Z/2",
    2: "Z/2",
    3: "Z/8",
}


class NotTabulated(KeyError):
    """Requested group value lies outside the tabulated range."""


def stable_stem(n):
    if n not in STABLE_STEMS:
        raise NotTabulated(f"pi_{n}^s is not tabulated")
    return STABLE_STEMS[n]


def stable_stem_rp(n):
    if n not in STABLE_STEMS_RP:
        raise NotTabulated(f"pi_{n}^s(RP^infinity) is not tabulated")
    return STABLE_STEMS_RP[n]


def bordism_group_report(n, oriented=False):
    """Tabulated bordism group of codimension-1 immersions in the n-sphere.

    The unoriented group is the n-th stable stem of RP^infinity; the
    oriented one is the (n-1)-st stable stem.
    """
    if oriented:
        return {"group": stable_stem(n - 1),
                "description": f"I+(S^{n}) = pi_{n - 1}^s"}
    return {"group": stable_stem_rp(n),
            "description": f"I(S^{n}) = pi_{n}^s(RP^infinity)"}
