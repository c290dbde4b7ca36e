"""The simple-module catalog and projective/injective machinery.

The irreducible modules of both finite groups are materialized as images of
the reflection Hecke operator on Borel inductions, keyed by (torus character,
subset marker).  Injective hulls are cut out of inductions from the torus
(projective, since the torus has order prime to p) by idempotent refinement
in the endomorphism algebra, and identified by their socles.
"""

from __future__ import annotations

import random

import numpy as np

from . import linalg as la
from .gf import TorusChar
from .groups import GammaGroup
from .modrep import (Factor, InducedModule, chop_report, hecke_image, hom_space,
                     induce_from_borel, seed_candidate_space,
                     standard_basis_words)


class CatalogEntry:
    def __init__(self, chi, J, factor, theta):
        self.chi = chi
        self.J = J
        self.factor = factor
        self.theta = theta
        self.dim = factor.dim
        inv = factor.sylow_invariants()
        if inv.shape[0] != 1:
            raise RuntimeError("catalog module has a fixed space of dimension != 1")
        self.seed = inv[0]
        words, vecs = standard_basis_words(factor, self.seed)
        self.basis_data = (words, la.inverse(factor.F, vecs.T.copy()))

    def key(self):
        return (self.chi.key(), self.J)

    def __repr__(self):
        return f"CatalogEntry(chi={self.chi.key()}, J={self.J}, dim={self.dim})"


def build_catalog(group, tower) -> dict:
    """All simple modules, keyed by (chi key, J marker)."""
    gamma_side = isinstance(group, GammaGroup)
    out = {}
    for chi in tower.all_chars():
        if gamma_side:
            has_both = chi.is_det_type()
            marker = ("s",)
        else:
            has_both = chi.is_s_fixed()
            marker = ("s'",)
        img = hecke_image(group, tower, chi)
        out[(chi.key(), ())] = CatalogEntry(chi, (), img, theta=-1 if has_both else 0)
        if has_both:
            img1 = hecke_image(group, tower, chi, plus_one=True)
            out[(chi.key(), marker)] = CatalogEntry(chi, marker, img1, theta=0)
    return out


def match_signature(catalog: dict, sig: dict):
    """Catalog key of a chopped factor from its signature, or None."""
    if "chi" not in sig:
        return None
    for key, entry in catalog.items():
        if entry.chi.key() == sig["chi"] and entry.dim == sig["dim"] \
                and entry.theta == sig.get("theta", entry.theta):
            return key
    return None


def induced_multiplicities(group, tower, catalog, seed=0):
    """m[chi key][catalog key] = multiplicity of the simple in ind from Borel."""
    out = {}
    for chi in tower.all_chars():
        amb = induce_from_borel(group, tower, chi)
        rep = chop_report(amb.whole(), seed=seed)
        row = {}
        for s in rep["factors"]:
            key = match_signature(catalog, s)
            if key is None:
                raise RuntimeError(f"unmatched factor {s} in induction at {chi.key()}")
            row[key] = row.get(key, 0) + 1
        out[chi.key()] = row
    return out


def socle(catalog: dict, target: Factor):
    """[(catalog key, multiplicity)] of the socle, via explicit module maps."""
    out = []
    for key in sorted(catalog):
        entry = catalog[key]
        homs = hom_space(entry.factor, entry.basis_data, target, entry.chi, entry.theta)
        if homs:
            out.append((key, len(homs)))
    return out


def socle_is_simple(catalog, target) -> bool:
    parts = socle(catalog, target)
    return len(parts) == 1 and parts[0][1] == 1


# -- inductions from the torus and their endomorphism algebras

def induce_from_torus(group, tower, chi: TorusChar) -> InducedModule:
    return InducedModule(group, tower, chi, side="torus")


def torus_eigvec_rows(ind: InducedModule):
    """Rows spanning {w : h.w = chi(h) w}; these index End by adjunction."""
    F = ind.F
    gens = ind.gens()
    rows = la.eye(F, ind.dim)
    for name, h in (("h_a", (1, 0)), ("h_d", (0, 1))):
        lam = ind.chi.value(h)
        M = np.array(gens[name])
        d = np.arange(ind.dim)
        M[d, d] = F.addv(M[d, d], np.full(ind.dim, F.neg(lam), dtype=np.int64))
        D = la.matmul(F, M, rows.T.copy())
        ker = la.nullspace(F, D)
        if ker.shape[0] == 0:
            return la.zeros(0, ind.dim)
        rows = la.matmul(F, ker, rows)
    return rows


def torus_end_basis(ind: InducedModule):
    return [endo_from_eigvec(ind, w) for w in torus_eigvec_rows(ind)]


def endo_from_eigvec(ind: InducedModule, w):
    """Endomorphism with basis function at coset j mapping to act(rep_j^-1) w."""
    F = ind.F
    n = ind.dim
    out = la.zeros(n, n)
    nz = np.nonzero(w)[0]
    for j in range(n):
        perm, scale = ind.act_monomial(ind._inv_reps[j])
        out[perm[nz], j] = F.mulv(scale[nz], w[nz])
    return out


def fitting_split(F, dim, end_mats, rng, rounds=12):
    """Orthogonal idempotents refining the identity inside the endomorphisms.

    Returns image row bases of the final idempotents (the summands).
    """
    idems = [la.eye(F, dim)]
    stable = 0
    while stable < rounds:
        stable += 1
        new = []
        changed = False
        for e in idems:
            img, piv = la.rref(F, e.T.copy())
            r = img.shape[0]
            if r <= 1:
                new.append(e)
                continue
            psi_full = _random_endo(F, end_mats, rng)
            psi = la.matmul(F, la.matmul(F, e, psi_full), e)
            rimg = la.matmul(F, psi, img.T.copy())
            cols = []
            for k in range(r):
                c = la.solve_in_row_space(F, img, piv, rimg[:, k])
                if c is None:
                    raise RuntimeError("endomorphism does not preserve the image")
                cols.append(c)
            psir = np.stack(cols, axis=1)
            mp = la.minpoly_matrix(F, psir, rng)
            facs = la.factor_full(F, mp, rng)
            if len(facs) <= 1:
                new.append(e)
                continue
            changed = True
            for proj in _primary_projectors(F, mp, facs):
                pr = la.peval_matrix(F, proj, psir)
                lift = la.matmul(F, img.T.copy(), pr)
                full = la.matmul(F, lift, e[np.array(piv)])
                new.append(full)
        idems = new
        if changed:
            stable = 0
    return [la.row_space(F, e.T.copy()) for e in idems]


def _random_endo(F, end_mats, rng):
    n = end_mats[0].shape[0]
    A = la.zeros(n, n)
    for M in end_mats:
        c = rng.randrange(F.N)
        if c:
            A = F.addv(A, F.scalev(c, M))
    return A


def _primary_projectors(F, minpoly, factorization):
    """CRT idempotent polynomials for the primary decomposition."""
    out = []
    for fac, mult in factorization:
        fm = [F.one]
        for _ in range(mult):
            fm = la.pmul(F, fm, fac)
        rest = la.pdivmod(F, minpoly, fm)[0]
        inv = _poly_invmod(F, rest, fm)
        out.append(la.pmod(F, la.pmul(F, rest, inv), minpoly))
    return out


def _poly_invmod(F, a, m):
    r0, r1 = la.pnorm(m), la.pmod(F, a, m)
    s0, s1 = [], [F.one]
    while r1:
        q, r2 = la.pdivmod(F, r0, r1)
        r0, r1 = r1, r2
        s2 = _psub2(F, s0, la.pmul(F, q, s1))
        s0, s1 = s1, s2
    if len(r0) - 1 != 0:
        raise ZeroDivisionError("polynomials not coprime")
    lead = F.inv(int(r0[0]))
    return [F.mul(int(c), lead) for c in s0]


def _psub2(F, a, b):
    n = max(len(a), len(b))
    out = []
    for k in range(n):
        x = int(a[k]) if k < len(a) else 0
        y = int(b[k]) if k < len(b) else 0
        out.append(F.add(x, F.neg(y)))
    return la.pnorm(out)


def split_torus_induction(group, tower, chi: TorusChar, seed=0):
    """Indecomposable summands (as Factors) of the torus induction."""
    ind = induce_from_torus(group, tower, chi)
    ends = torus_end_basis(ind)
    rng = random.Random(seed)
    parts = fitting_split(tower.C, ind.dim, ends, rng)
    return ind, [Factor(ind, img, la.zeros(0, ind.dim)) for img in parts]


def injective_hull(group, tower, catalog, entry: CatalogEntry, seed=0):
    """The indecomposable summand of a torus induction with the given socle."""
    ind, parts = split_torus_induction(group, tower, entry.chi, seed=seed)
    matches = []
    for part in parts:
        soc = socle(catalog, part)
        if soc == [(entry.key(), 1)]:
            matches.append(part)
    if not matches:
        raise RuntimeError(f"no summand with simple socle {entry.key()} found")
    dims = {p.dim for p in matches}
    if len(dims) != 1:
        raise RuntimeError("socle-matched summands of different dimensions")
    return matches[0]


def split_surjection_certificate(group, tower, entry: CatalogEntry):
    """Certify the simple is a direct summand of a torus induction.

    Produces maps simple -> ind -> simple composing to a nonzero scalar;
    a summand of a projective whose socle is itself is injective.
    """
    F = tower.C
    ind = induce_from_torus(group, tower, entry.chi)
    whole = ind.whole()
    ups = hom_space(entry.factor, entry.basis_data, whole, entry.chi, entry.theta)
    if not ups:
        return False
    seeds = seed_candidate_space(entry.factor, entry.chi, entry.theta)
    for w in seeds:
        down = _map_from_torus_induction(ind, entry.factor, w)
        for up in ups:
            comp = la.matmul(F, down, up)
            if comp.any():
                return True
    return False


def _map_from_torus_induction(ind: InducedModule, target: Factor, w_class):
    """Module map from the torus induction sending the identity-coset function
    to the given class (a chi-eigenvector of the torus)."""
    F = target.F
    vamb = target.lift(w_class)
    cols = []
    for j in range(ind.dim):
        g = ind._inv_reps[j]
        img = la.matvec(F, target.ambient.act_dense(g), vamb)
        cols.append(target.class_coords(img))
    return np.stack(cols, axis=1)
