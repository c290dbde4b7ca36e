"""Finite-group modules over the coefficient field, and everything the
verification suites ask of them: parabolic induction, Hecke-operator images,
composition-factor chopping, socles, summand splitting, injective hulls.

A module is always presented inside an ambient induced module: a *Factor*
is a pair of nested invariant subspaces (lower < upper) of the ambient space
with the subquotient action carried in explicit class coordinates.  Chopping
is a Norton-Parker meataxe (random algebra element, kernel of an irreducible
factor of its minimal polynomial, spin and dual spin), accelerated by a
torus-eigenvector seed pass on the fixed space of the Sylow subgroup.
"""

from __future__ import annotations

import random

import numpy as np

from . import linalg as la
from .gf import TorusChar, h_inv
from .groups import GammaGroup, GammaPrimeGroup, CosetTable, pack_elements


class InducedModule:
    """ind from the Borel (side='borel') or from the torus (side='torus')."""

    def __init__(self, group, tower, chi: TorusChar, side="borel"):
        self.group = group
        self.tower = tower
        self.F = tower.C
        self.chi = chi
        self.side = side
        self.is_gamma = isinstance(group, GammaGroup)
        if side == "borel":
            self.cosets = CosetTable(group)
            self.reps = self.cosets.reps
        else:
            self.reps, self._elt_table = _torus_cosets(group, tower)
        self.dim = len(self.reps)
        self._gens_cache = None
        self._Tfull_cache = None
        self._inv_reps = [group.inv(r) for r in self.reps]
        self._reps_arr = np.array(self.reps, dtype=np.int64)
        self._chi_table = _chi_value_table(tower, chi)

    # classification of m into (coset index, torus pair of the left part)

    def classify(self, m):
        if self.side == "borel":
            return self.cosets.classify(m)
        G = self.group
        packed, idx_arr = self._elt_table
        key = _pack_one(m, G.F.N)
        pos = int(np.searchsorted(packed, key))
        idx = int(idx_arr[pos])
        h_mat = G.mul(m, self._inv_reps[idx])
        if self.is_gamma:
            h = G.h_pair_of_diag(h_mat[0], h_mat[4])
        else:
            h = G.h_pair_of(h_mat)
        return idx, h

    def classify_batch(self, P):
        """Vectorized classification of the rows of P: (indices, h-value codes).

        The returned codes are the chi-values of the torus parts directly.
        """
        F, t, G = self.group.F, self.tower, self.group
        n = P.shape[0]
        if self.side == "torus":
            packed = np.zeros(n, dtype=np.int64)
            for k in range(P.shape[1]):
                packed = packed * F.N + P[:, k]
            table, idx_arr = self._elt_table
            pos = np.searchsorted(table, packed)
            idx = idx_arr[pos]
            inv_arr = np.array([self._inv_reps[i] for i in idx], dtype=np.int64)
            H = _pairwise_mul(G, P, inv_arr)
            if self.is_gamma:
                a_codes, d_codes = H[:, 0], H[:, 4]
            else:
                a_codes, d_codes = H[:, 0], H[:, 4]
            return idx, self._chi_values_from_codes(a_codes, d_codes, invert=False)
        # Borel side: closed-form cell extraction
        if self.is_gamma:
            corner = P[:, 6]
            upper = corner == 0
            x = np.where(upper, 0, F.mulv(P[:, 7], _safe_inv(F, corner)))
            y = np.where(upper, 0, F.mulv(P[:, 8], _safe_inv(F, corner)))
            pair_key = x * F.N + y
            idx = np.where(upper, 0, self.cosets.pair_index_array()[pair_key])
            # Borel part b = P * u(-x, conj(y)) * n_s^-1 for cell rows
            c1, c2, c3 = (P[:, 0], P[:, 1], P[:, 2])
            negx = F.negv(x)
            ybar = _conj_v(F, t, y)
            xbar = _conj_v(F, t, x)
            # third column of P u(-x, ybar): ybar c1 + xbar c2 + c3
            col3 = F.addv(F.addv(c3, F.mulv(ybar, c1)), F.mulv(xbar, c2))
            se = self.group.sqrt_eps
            b11 = F.mulv(np.full(n, F.neg(se), dtype=np.int64), col3)
            # (1,1)-entry is untouched by the corner swap: second column of P u
            b22 = F.addv(P[:, 4], F.mulv(negx, P[:, 3]))
            a_codes = np.where(upper, P[:, 0], b11)
            d_codes = np.where(upper, P[:, 4], b22)
            return idx, self._chi_values_from_codes(a_codes, d_codes, invert=False)
        corner = P[:, 1]
        upper = corner == 0
        g = np.where(upper, 0, F.mulv(P[:, 0], _safe_inv(F, corner)))
        idx = np.where(upper, 0, self.cosets.param_index_array()[g])
        # b = P * (n' u(g))^-1; its (1,1)-entry is -sqrt_eps * P12 after the
        # unipotent column operation, and the scalar part is untouched
        se = self.group.sqrt_eps
        b11 = F.mulv(np.full(P.shape[0], F.neg(se), dtype=np.int64), P[:, 1])
        a_codes = np.where(upper, P[:, 0], b11)
        d_codes = P[:, 4]
        return idx, self._chi_values_from_codes(a_codes, d_codes, invert=False)

    def _chi_values_from_codes(self, a_codes, d_codes, invert=False):
        """chi-values (coefficient field codes) of torus pairs given by codes."""
        t = self.tower
        F = self.group.F
        ia = a_codes - 1
        idlog = d_codes - 1
        j = idlog // (t.q - 1)
        tab = self._chi_table
        vals = tab[(ia % (t.qq - 1)) * (t.q + 1) + (j % (t.q + 1))]
        return vals

    def act_monomial(self, g):
        """(perm, scale): column i maps to row perm[i] with coefficient scale[i].

        scale[i] is the chi-value of the inverse torus part, realizing the
        right-translation representation on the induced space.
        """
        G, t = self.group, self.tower
        ginv = G.inv(g)
        from .groups import mul_all
        P = mul_all(G, ginv, self._reps_arr, left=False)
        perm, vals = self.classify_batch(P)
        C = self.F
        scale = C.invv(np.where(vals == 0, C.one, vals))
        if (vals == 0).any():
            raise RuntimeError("character value vanished; corrupted torus pair")
        return perm, scale

    def act_dense(self, g):
        perm, scale = self.act_monomial(g)
        M = la.zeros(self.dim, self.dim)
        M[perm, np.arange(self.dim)] = scale
        return M

    def gens(self) -> dict:
        if self._gens_cache is None:
            self._gens_cache = {name: self.act_dense(g)
                                for name, g in self.group.generators().items()}
        return self._gens_cache

    def unipotent_gen_names(self):
        return [n for n in self.gens() if n.startswith("u_")]

    def reflection_rep_inverses(self):
        """Inverses of the coset representatives in the reflection double coset."""
        G = self.group
        if self.is_gamma:
            reps = [G.mul(G.n_s, G.u_matrix(x, y)) for (x, y) in G.constraint_pairs()]
        else:
            reps = [G.mul(G.n_sp, G.u_matrix(gp)) for gp in G.unipotent_params()]
        return [G.inv(r) for r in reps]

    def T_full(self):
        """Sum of the actions of the inverted reflection-coset representatives.

        Restricted to fixed vectors of the Sylow subgroup this is the right
        action of the reflection generator of the finite Hecke algebra.
        """
        if self._Tfull_cache is None:
            F = self.F
            T = la.zeros(self.dim, self.dim)
            cols = np.arange(self.dim)
            for m in self.reflection_rep_inverses():
                perm, scale = self.act_monomial(m)
                T[perm, cols] = F.addv(T[perm, cols], scale)
            self._Tfull_cache = T
        return self._Tfull_cache

    def whole(self) -> "Factor":
        upper = la.eye(self.F, self.dim)
        lower = la.zeros(0, self.dim)
        return Factor(self, upper, lower)


def _torus_cosets(group, tower):
    """Coset representatives for the torus and a packed lookup for all elements."""
    els = group.enumerate_cells()
    F = group.F
    width = 9 if isinstance(group, GammaGroup) else 5
    arr = np.array(els, dtype=np.int64)
    from .groups import mul_all
    packed_min = None
    for i in range(tower.qq - 1):
        for j in range(tower.q + 1):
            h = group.h_matrix((i, j))
            prod = mul_all(group, h, arr, left=True)
            packed = np.zeros(len(els), dtype=np.int64)
            for k in range(width):
                packed = packed * F.N + prod[:, k]
            packed_min = packed if packed_min is None else np.minimum(packed_min, packed)
    is_rep = np.zeros(len(els), dtype=bool)
    self_packed = np.zeros(len(els), dtype=np.int64)
    for k in range(width):
        self_packed = self_packed * F.N + arr[:, k]
    is_rep = self_packed == packed_min
    reps = [els[i] for i in np.nonzero(is_rep)[0]]
    reps_arr = np.array(reps, dtype=np.int64)
    # enumerate each coset: packed(h * rep) -> coset index
    all_packed = []
    all_idx = []
    for i in range(tower.qq - 1):
        for j in range(tower.q + 1):
            h = group.h_matrix((i, j))
            prod = mul_all(group, h, reps_arr, left=True)
            packed = np.zeros(len(reps), dtype=np.int64)
            for k in range(width):
                packed = packed * F.N + prod[:, k]
            all_packed.append(packed)
            all_idx.append(np.arange(len(reps), dtype=np.int64))
    packed = np.concatenate(all_packed)
    idx = np.concatenate(all_idx)
    order = np.argsort(packed, kind="stable")
    return reps, (packed[order], idx[order])


def _pack_one(m, N):
    key = 0
    for c in m:
        key = key * N + int(c)
    return key


def _pairwise_mul(group, A, B):
    """Rowwise products of two arrays of flattened group elements."""
    F = group.F
    n = A.shape[0]
    if isinstance(group, GammaGroup):
        out = np.zeros((n, 9), dtype=np.int64)
        for i in range(3):
            for j in range(3):
                acc = np.zeros(n, dtype=np.int64)
                for k in range(3):
                    acc = F.addv(acc, F.mulv(A[:, 3 * i + k], B[:, 3 * k + j]))
                out[:, 3 * i + j] = acc
        return out
    out = np.zeros((n, 5), dtype=np.int64)
    for i in range(2):
        for j in range(2):
            acc = np.zeros(n, dtype=np.int64)
            for k in range(2):
                acc = F.addv(acc, F.mulv(A[:, 2 * i + k], B[:, 2 * k + j]))
            out[:, 2 * i + j] = acc
    out[:, 4] = F.mulv(A[:, 4], B[:, 4])
    return out


def _conj_v(F, tower, codes):
    codes = np.asarray(codes)
    return np.where(codes == 0, 0, (codes - 1) * tower.q % (F.N - 1) + 1)


def _safe_inv(F, codes):
    codes = np.asarray(codes)
    return F.invv(np.where(codes == 0, F.one, codes))


def _chi_value_table(tower, chi):
    """Value codes of chi on all torus pairs, indexed by i*(q+1)+j."""
    t = tower
    tab = np.zeros((t.qq - 1) * (t.q + 1), dtype=np.int64)
    for i in range(t.qq - 1):
        for j in range(t.q + 1):
            tab[i * (t.q + 1) + j] = chi.value((i, j))
    return tab


class Factor:
    """Subquotient upper/lower of an ambient induced module."""

    def __init__(self, ambient: InducedModule, upper, lower, label=None):
        self.ambient = ambient
        self.F = ambient.F
        self.upper = upper        # rref rows spanning the numerator
        self.lower = lower        # rref rows spanning the denominator
        self.dim = upper.shape[0] - lower.shape[0]
        self.label = label
        self._class_data = None
        self._gens_class = None
        self._inv_cache = None

    # -- class coordinates: a complement basis of lower inside upper

    def _classes(self):
        if self._class_data is None:
            F = self.F
            acc = la.EchelonAccumulator(F, self.ambient.dim)
            for row in self.lower:
                acc.insert(row)
            comp = []
            for row in self.upper:
                if acc.insert(np.array(row)):
                    comp.append(acc.rows[-1].copy())
            C = np.stack(comp) if comp else la.zeros(0, self.ambient.dim)
            # reduction machinery: reduce an ambient vector, read class coords
            red = la.EchelonAccumulator(F, self.ambient.dim)
            for row in self.lower:
                red.insert(row)
            Crref, piv = la.rref(F, C) if len(comp) else (C, [])
            self._class_data = (Crref, piv, red)
        return self._class_data

    def class_coords(self, v):
        """Coordinates of the class of an ambient vector v (must lie in upper)."""
        C, piv, red = self._classes()
        w = red.reduce(v)
        coords = la.solve_in_row_space(self.F, C, piv, w)
        if coords is None:
            raise ValueError("vector not in the subquotient")
        return coords

    def lift(self, coords):
        C, piv, red = self._classes()
        return la.matvec(self.F, C.T.copy(), np.array(coords, dtype=np.int64)) \
            if self.dim else np.zeros(self.ambient.dim, dtype=np.int64)

    def class_matrix_of(self, ambient_op):
        """Matrix (class coords) induced by an ambient operator preserving the pair."""
        C, piv, red = self._classes()
        if self.dim == 0:
            return la.zeros(0, 0)
        img = la.matmul(self.F, ambient_op, C.T.copy())
        cols = [self.class_coords(img[:, k]) for k in range(self.dim)]
        return np.stack(cols, axis=1)

    def gens_class(self) -> dict:
        if self._gens_class is None:
            self._gens_class = {name: self.class_matrix_of(M)
                                for name, M in self.ambient.gens().items()}
        return self._gens_class

    # -- invariants of the Sylow subgroup, with torus and Hecke data

    def sylow_invariants(self):
        """Rows (class coords) of the fixed space of the unipotent radical."""
        if self._inv_cache is not None:
            return self._inv_cache
        F = self.F
        gens = self.gens_class()
        blocks = []
        for name in self.ambient.unipotent_gen_names():
            M = np.array(gens[name])
            d = np.arange(self.dim)
            M[d, d] = F.addv(M[d, d], np.full(self.dim, F.neg(F.one), dtype=np.int64))
            blocks.append(M)
        self._inv_cache = la.nullspace(F, np.concatenate(blocks, axis=0)) \
            if blocks else la.eye(F, self.dim)
        return self._inv_cache

    def h_character_of_line(self, v_class):
        """(R, c) of the torus action on the line spanned by a fixed vector."""
        F, t = self.F, self.ambient.tower
        gens = self.gens_class()
        vals = []
        for name in ("h_a", "h_d"):
            w = la.matvec(F, gens[name], v_class)
            lam = _eigen_ratio(F, v_class, w)
            vals.append(lam)
        C, Om = t.C, t.Omega
        step = (C.N - 1) // (t.qq - 1)
        R = C.dlog(vals[0]) // step
        cd = C.dlog(vals[1]) // step
        if cd % (t.q - 1):
            raise ValueError("torus eigenvalue incompatible with a character")
        c = (cd // (t.q - 1)) % (t.q + 1)
        return (R % (t.qq - 1), c)

    def hecke_theta(self, v_class):
        """Eigenvalue of the reflection Hecke operator on a fixed line (or None)."""
        F = self.F
        v_amb = self.lift(v_class)
        w_amb = la.matvec(F, self.ambient.T_full(), v_amb)
        w = self.class_coords(w_amb)
        if not w.any():
            return 0
        try:
            return _eigen_ratio(F, v_class, w)
        except ValueError:
            return None

    # -- derived factors

    def submodule_from_classes(self, rows_class):
        """Intermediate factor lower < X <= upper from class-coordinate rows."""
        F = self.F
        amb_rows = [self.lift(r) for r in rows_class]
        allrows = list(self.lower) + amb_rows
        X = la.row_space(F, np.stack(allrows)) if allrows else self.lower
        return X

    def spin_classes(self, seed_rows_class):
        """Row space (ambient) of the submodule generated by given classes."""
        F = self.F
        gens = self.gens_class()
        acc = la.EchelonAccumulator(F, self.dim)
        queue = []
        for r in seed_rows_class:
            if acc.insert(np.array(r, dtype=np.int64)):
                queue.append(acc.rows[-1].copy())
        while queue:
            v = queue.pop()
            for M in gens.values():
                w = la.matvec(F, M, v)
                if acc.insert(w):
                    queue.append(acc.rows[-1].copy())
        return acc.basis()


def _eigen_ratio(F, v, w):
    """w = lam v: recover lam or raise."""
    nz = np.nonzero(v)[0]
    if len(nz) == 0:
        raise ValueError("zero vector")
    lam = F.mul(int(w[nz[0]]), F.inv(int(v[nz[0]])))
    if not np.array_equal(w, F.scalev(lam, v)):
        raise ValueError("not an eigenvector")
    return lam


# -- induction and Hecke images

def induce_from_borel(group, tower, chi: TorusChar) -> InducedModule:
    return InducedModule(group, tower, chi, side="borel")


def hecke_operator(src: InducedModule, dst: InducedModule):
    """The intertwiner ind(chi) -> ind(chi^s) summing over the reflection cell."""
    G, F, t = src.group, src.F, src.tower
    n = src.dim
    T = la.zeros(n, n)
    if isinstance(G, GammaGroup):
        cell = [G.mul(G.n_s, G.u_matrix(x, y)) for (x, y) in G.constraint_pairs()]
    else:
        cell = [G.mul(G.n_sp, G.u_matrix(gp)) for gp in G.unipotent_params()]
    for j, rep in enumerate(dst.reps):
        for m in cell:
            i, h = src.classify(G.mul(m, rep))
            T[j, i] = F.add(int(T[j, i]), src.chi.value(h))
    return T


def hecke_image(group, tower, chi: TorusChar, plus_one=False):
    """Image of the reflection Hecke operator (optionally of 1 + T).

    Returns a Factor inside the target induced module.
    """
    src = induce_from_borel(group, tower, chi)
    dst = src if chi.is_s_fixed() else induce_from_borel(group, tower, chi.s_twist())
    T = hecke_operator(src, dst)
    if plus_one:
        d = np.arange(src.dim)
        T = np.array(T)
        T[d, d] = tower.C.addv(T[d, d], np.full(src.dim, tower.C.one, dtype=np.int64))
    img = la.row_space(tower.C, T.T.copy())
    return Factor(dst, img, la.zeros(0, dst.dim))


# -- the meataxe

class ChopBudgetError(RuntimeError):
    pass


def chop(factor: Factor, seed: int = 0, budget: int = 200):
    """Complete list of composition factors (as Factor objects)."""
    rng = random.Random(seed)
    out = []
    stack = [factor]
    while stack:
        f = stack.pop()
        if f.dim == 0:
            continue
        if f.dim == 1:
            out.append(f)
            continue
        X = _find_proper_ambient(f, rng, budget)
        if X is None:
            out.append(f)
            continue
        amb = f.ambient
        stack.append(Factor(amb, X, f.lower))
        stack.append(Factor(amb, f.upper, X))
    return out


def _find_proper_ambient(f: Factor, rng, budget):
    """Ambient row space X with lower < X < upper, or None if f is simple."""
    F = f.F
    # seed pass: torus eigenvectors inside the Sylow fixed space
    inv = f.sylow_invariants()
    if inv.shape[0] == 0:
        raise RuntimeError("fixed space of a p-group cannot vanish")
    for v in _torus_eigenvectors(f, inv):
        rows = f.spin_classes([v])
        if 0 < rows.shape[0] < f.dim:
            return f.submodule_from_classes(rows)
    # Norton-Parker pass
    gens = list(f.gens_class().values())
    certified = False
    for _ in range(budget):
        A = _random_algebra_element(F, gens, rng)
        try:
            mp = la.minpoly_matrix(F, A, rng)
        except RuntimeError:
            continue
        sf = la.squarefree_part(F, mp)
        try:
            factors = la.factor_squarefree(F, sf, rng)
        except RuntimeError:
            continue
        factors.sort(key=len)
        for fac in factors:
            fA = la.peval_matrix(F, fac, A)
            ker = la.nullspace(F, fA)
            if ker.shape[0] == 0:
                continue
            rows = f.spin_classes([ker[0]])
            if 0 < rows.shape[0] < f.dim:
                return f.submodule_from_classes(rows)
            dual_sub = _dual_spin(f, fA, rng)
            if dual_sub is not None:
                return dual_sub
            if ker.shape[0] == len(fac) - 1:
                certified = True
                break
        if certified:
            return None
    raise ChopBudgetError("meataxe budget exhausted; retry with a new seed")


def _torus_eigenvectors(f: Factor, inv_rows):
    """Joint eigenvectors of the torus generators on the fixed space."""
    F = f.F
    gens = f.gens_class()
    spaces = [inv_rows]
    for name in ("h_a", "h_d"):
        M = gens[name]
        new = []
        for rows in spaces:
            if rows.shape[0] == 0:
                continue
            if rows.shape[0] == 1:
                new.append(rows)
                continue
            S, R, piv = _restrict_operator(F, M, rows)
            for lam in _eigenvalues(F, S):
                Sh = np.array(S)
                d = np.arange(Sh.shape[0])
                Sh[d, d] = F.addv(Sh[d, d], np.full(len(d), F.neg(lam), dtype=np.int64))
                kerc = la.nullspace(F, Sh)
                if kerc.shape[0]:
                    new.append(la.matmul(F, kerc, R))
        spaces = new
    out = []
    for rows in spaces:
        for r in rows:
            out.append(r)
    return out


def _restrict_operator(F, M, rows):
    """Matrix of M on the row span (rows assumed M-stable)."""
    R, piv = la.rref(F, rows)
    img = la.matmul(F, M, R.T.copy())
    cols = []
    for k in range(R.shape[0]):
        c = la.solve_in_row_space(F, R, piv, img[:, k])
        if c is None:
            raise ValueError("row space not stable under operator")
        cols.append(c)
    return np.stack(cols, axis=1), R, piv


def _eigenvalues(F, S):
    rng = random.Random(11)
    mp = la.minpoly_matrix(F, S, rng)
    sf = la.squarefree_part(F, mp)
    evs = []
    for fac in la.factor_squarefree(F, sf, rng):
        if len(fac) - 1 == 1:
            evs.append(F.neg(int(fac[0])))
    return evs


def _random_algebra_element(F, gens, rng):
    n = gens[0].shape[0]
    A = la.zeros(n, n)
    for _ in range(rng.randint(2, 4)):
        w = gens[rng.randrange(len(gens))]
        for _ in range(rng.randint(0, 2)):
            w = la.matmul(F, w, gens[rng.randrange(len(gens))])
        c = rng.randrange(1, F.N)
        A = F.addv(A, F.scalev(c, w))
    return A


def _restrict_to_tuple(F, M, rows):
    sub, R, piv = _restrict_operator(F, M, rows)
    return sub


def _dual_spin(f: Factor, fA, rng):
    """Norton dual test: spin a kernel vector of fA-transpose in the dual."""
    F = f.F
    kerT = la.nullspace(F, fA.T.copy())
    if kerT.shape[0] == 0:
        return None
    gens_T = [np.ascontiguousarray(M.T) for M in f.gens_class().values()]
    acc = la.EchelonAccumulator(F, f.dim)
    queue = []
    if acc.insert(kerT[0]):
        queue.append(acc.rows[-1].copy())
    while queue:
        v = queue.pop()
        for M in gens_T:
            w = la.matvec(F, M, v)
            if acc.insert(w):
                queue.append(acc.rows[-1].copy())
    if acc.dim == f.dim:
        return None
    ann = la.nullspace(F, acc.basis())
    rows = f.spin_classes([r for r in ann])
    if 0 < rows.shape[0] < f.dim:
        return f.submodule_from_classes(rows)
    return None


# -- labeling factors against the character catalog

def factor_signature(f: Factor, with_theta=True):
    """(dim, H-character pair, theta) of a factor with 1-dim fixed line."""
    inv = f.sylow_invariants()
    sig = {"dim": f.dim, "fixed_dim": int(inv.shape[0])}
    if inv.shape[0] == 1:
        v = inv[0]
        sig["chi"] = f.h_character_of_line(v)
        if with_theta:
            theta = f.hecke_theta(v)
            F = f.F
            if theta == 0:
                sig["theta"] = 0
            elif theta == F.neg(F.one):
                sig["theta"] = -1
            else:
                sig["theta"] = ("code", int(theta)) if theta is not None else None
    return sig


def chop_report(factor: Factor, seed: int = 0, with_theta=True):
    """Multiset of factor signatures; dims always sum to the input dimension."""
    factors = chop(factor, seed=seed)
    sigs = [factor_signature(g, with_theta=with_theta) for g in factors]
    assert sum(s["dim"] for s in sigs) == factor.dim
    agg = {}
    for s in sigs:
        key = (s["dim"], s.get("chi"), s.get("theta"))
        agg[key] = agg.get(key, 0) + 1
    return {"factors": sigs, "multiset": agg}


# -- homomorphisms via standard bases

def standard_basis_words(f: Factor, seed_class):
    """Generator words sending the seed to a spanning set, as (name, prev) chains."""
    gens = f.gens_class()
    order = sorted(gens)
    acc = la.EchelonAccumulator(f.F, f.dim)
    words = []
    seeds = [np.array(seed_class, dtype=np.int64)]
    if not acc.insert(seeds[0]):
        raise ValueError("zero seed")
    words.append(())
    vecs = [seeds[0]]
    k = 0
    while k < len(vecs):
        for name in order:
            w = la.matvec(f.F, gens[name], vecs[k])
            if acc.insert(w):
                vecs.append(w)
                words.append(words[k] + (name,))
        k += 1
    if len(vecs) != f.dim:
        raise ValueError("seed does not generate")
    return words, np.stack(vecs)


def seed_candidate_space(target: Factor, chi: TorusChar, theta):
    """Rows spanning the fixed vectors with the given torus character and
    reflection-operator eigenvalue; the natural home of seed vectors."""
    F = target.F
    t = target.ambient.tower
    inv = target.sylow_invariants()
    if inv.shape[0] == 0:
        return inv
    rows = inv
    for name, h in (("h_a", (1, 0)), ("h_d", (0, 1))):
        lam = chi.value(h)
        S, R, piv = _restrict_operator(F, target.gens_class()[name], rows)
        Sh = np.array(S)
        d = np.arange(Sh.shape[0])
        Sh[d, d] = F.addv(Sh[d, d], np.full(len(d), F.neg(lam), dtype=np.int64))
        kerc = la.nullspace(F, Sh)
        if kerc.shape[0] == 0:
            return la.zeros(0, target.dim)
        rows = la.matmul(F, kerc, R)
    # impose the reflection-operator eigenvalue
    want = 0 if theta == 0 else F.neg(F.one)
    conds = []
    for r in rows:
        w_amb = la.matvec(F, target.ambient.T_full(), target.lift(r))
        w = target.class_coords(w_amb)
        if want:
            w = F.addv(w, F.scalev(F.neg(want), r))
        conds.append(w)
    D = np.stack(conds)
    ker = la.nullspace(F, D.T.copy())
    if ker.shape[0] == 0:
        return la.zeros(0, target.dim)
    return la.matmul(F, ker, rows)


def hom_space(simple: Factor, simple_basis_data, target: Factor, chi: TorusChar,
              theta):
    """Basis of module maps simple -> target (standard-basis method).

    simple_basis_data is (words, std_to_class_inverse) from the catalog: the
    candidate matrix built by word application is converted from
    standard-basis source coordinates to the simple's class coordinates.
    """
    F = target.F
    words, v_inv = simple_basis_data
    cands = seed_candidate_space(target, chi, theta)
    if cands.shape[0] == 0:
        return []
    gens_t = target.gens_class()
    gens_s = simple.gens_class()
    mats = []
    for v in cands:
        cols = [_apply_word(F, gens_t, w, v) for w in words]
        X = np.stack(cols, axis=1)
        mats.append(la.matmul(F, X, v_inv))
    defects = []
    for X in mats:
        ds = []
        for name in sorted(gens_t):
            lhs = la.matmul(F, gens_t[name], X)
            rhs = la.matmul(F, X, gens_s[name])
            ds.append(F.addv(lhs, F.negv(rhs)).ravel())
        defects.append(np.concatenate(ds))
    D = np.stack(defects)
    ker = la.nullspace(F, D.T.copy()) if D.any() else la.eye(F, len(mats))
    homs = []
    for coeffs in ker:
        X = la.zeros(mats[0].shape[0], mats[0].shape[1])
        for c, Xi in zip(coeffs, mats):
            if c:
                X = F.addv(X, F.scalev(int(c), Xi))
        if X.any():
            homs.append(X)
    return homs


def _apply_word(F, gens, word, v):
    out = np.array(v, dtype=np.int64)
    for name in word:
        out = la.matvec(F, gens[name], out)
    return out
