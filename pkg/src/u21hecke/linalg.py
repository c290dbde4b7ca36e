"""Exact linear algebra over Zech-coded small fields, vectorized with numpy.

Matrices are int64 arrays of field codes.  Row reduction, kernels, products
and Krylov minimal polynomials cover everything the module layer needs;
polynomial utilities supply gcds, distinct-degree splitting and
Cantor-Zassenhaus factor extraction for the meataxe.
"""

from __future__ import annotations

import numpy as np


def zeros(n, m):
    return np.zeros((n, m), dtype=np.int64)


def eye(F, n):
    M = zeros(n, n)
    np.fill_diagonal(M, F.one)
    return M


def matmul(F, A, B):
    n, k = A.shape
    k2, m = B.shape
    assert k == k2
    out = zeros(n, m)
    for t in range(k):
        col = A[:, t]
        nz = col != 0
        if not nz.any():
            continue
        out[nz] = F.addv(out[nz], F.mulv(col[nz, None], B[t][None, :]))
    return out


def matvec(F, A, v):
    prod = F.mulv(A, v[None, :])
    # fold columns pairwise (field addition is not a ufunc reduce)
    while prod.shape[1] > 1:
        m = prod.shape[1]
        half = m // 2
        folded = F.addv(prod[:, :half], prod[:, half:2 * half])
        if m % 2:
            folded = np.concatenate([folded, prod[:, -1:]], axis=1)
        prod = folded
    return prod[:, 0]


def rref(F, M):
    """Reduced row echelon form; returns (R, pivot_columns)."""
    R = np.array(M, dtype=np.int64)
    n, m = R.shape
    pivots = []
    r = 0
    for c in range(m):
        if r >= n:
            break
        rows = np.nonzero(R[r:, c])[0]
        if len(rows) == 0:
            continue
        pr = r + rows[0]
        if pr != r:
            R[[r, pr]] = R[[pr, r]]
        R[r] = F.scalev(int(F.invv(np.array([R[r, c]]))[0]), R[r])
        col = R[:, c].copy()
        col[r] = 0
        nz = np.nonzero(col)[0]
        if len(nz):
            factors = F.negv(col[nz])
            R[nz] = F.addv(R[nz], F.mulv(factors[:, None], R[r][None, :]))
        pivots.append(c)
        r += 1
    return R[:r], pivots


def rank(F, M):
    return rref(F, M)[0].shape[0]


def nullspace(F, M):
    """Basis (rows) of the right kernel of M."""
    n, m = M.shape
    R, pivots = rref(F, M)
    free = [c for c in range(m) if c not in pivots]
    basis = zeros(len(free), m)
    for k, fc in enumerate(free):
        basis[k, fc] = F.one
        for i, pc in enumerate(pivots):
            basis[k, pc] = F.neg(int(R[i, fc]))
    return basis


def row_space(F, M):
    return rref(F, M)[0]


def inverse(F, M):
    n = M.shape[0]
    aug = np.concatenate([M, eye(F, n)], axis=1)
    R, piv = rref(F, aug)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("matrix not invertible")
    return R[:, n:]


def solve_in_row_space(F, basis_rref, pivots, v):
    """Coordinates of v in the span of an rref basis, or None."""
    w = np.array(v, dtype=np.int64)
    coords = []
    for i, pc in enumerate(pivots):
        c = int(w[pc])
        coords.append(c)
        if c:
            w = F.addv(w, F.scalev(F.neg(c), basis_rref[i]))
    if w.any():
        return None
    return np.array(coords, dtype=np.int64)


class EchelonAccumulator:
    """Incremental row-echelon basis; reduce-and-insert one vector at a time."""

    def __init__(self, F, width):
        self.F = F
        self.width = width
        self.rows = []
        self.pivot_of_row = []

    def reduce(self, v):
        F = self.F
        w = np.array(v, dtype=np.int64)
        for row, pc in zip(self.rows, self.pivot_of_row):
            c = int(w[pc])
            if c:
                w = F.addv(w, F.scalev(F.neg(c), row))
        return w

    def insert(self, v):
        """Reduce v; if independent, normalize, insert, return True."""
        F = self.F
        w = self.reduce(v)
        nz = np.nonzero(w)[0]
        if len(nz) == 0:
            return False
        pc = int(nz[0])
        w = F.scalev(F.inv(int(w[pc])), w)
        for i, row in enumerate(self.rows):
            c = int(row[pc])
            if c:
                self.rows[i] = F.addv(row, F.scalev(F.neg(c), w))
        self.rows.append(w)
        self.pivot_of_row.append(pc)
        return True

    def basis(self):
        if not self.rows:
            return zeros(0, self.width)
        order = np.argsort(self.pivot_of_row)
        return np.stack([self.rows[i] for i in order])

    @property
    def dim(self):
        return len(self.rows)


# -- dense polynomial arithmetic over a small field (low degree first)

def pnorm(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return c


def pmul(F, a, b):
    a, b = pnorm(a), pnorm(b)
    if not a or not b:
        return []
    out = np.zeros(len(a) + len(b) - 1, dtype=np.int64)
    bv = np.array(b, dtype=np.int64)
    for i, c in enumerate(a):
        if c:
            out[i:i + len(b)] = F.addv(out[i:i + len(b)], F.scalev(int(c), bv))
    return pnorm(out.tolist())


def pmod(F, a, b):
    a, b = pnorm(a), pnorm(b)
    if not b:
        raise ZeroDivisionError
    a = np.array(a, dtype=np.int64)
    bv = np.array(b, dtype=np.int64)
    inv_lead = F.inv(int(b[-1]))
    da, db = len(a) - 1, len(b) - 1
    while da >= db and len(a):
        coef = F.mul(int(a[-1]), inv_lead)
        if coef:
            a[da - db:da + 1] = F.addv(a[da - db:da + 1],
                                       F.scalev(F.neg(coef), bv))
        a = a[:-1]
        while len(a) and a[-1] == 0:
            a = a[:-1]
        da = len(a) - 1
    return pnorm(a.tolist())


def pdivmod(F, a, b):
    a, b = pnorm(a), pnorm(b)
    if not b:
        raise ZeroDivisionError
    q = [0] * max(0, len(a) - len(b) + 1)
    r = list(a)
    inv_lead = F.inv(int(b[-1]))
    while len(r) >= len(b) and r:
        coef = F.mul(int(r[-1]), inv_lead)
        shift = len(r) - len(b)
        q[shift] = coef
        if coef:
            rv = np.array(r, dtype=np.int64)
            rv[shift:shift + len(b)] = F.addv(
                rv[shift:shift + len(b)], F.scalev(F.neg(coef), np.array(b, dtype=np.int64)))
            r = rv.tolist()
        r.pop()
        r = pnorm(r)
    return pnorm(q), pnorm(r)


def pgcd(F, a, b):
    a, b = pnorm(a), pnorm(b)
    while b:
        a, b = b, pmod(F, a, b)
    if a:
        lead_inv = F.inv(int(a[-1]))
        a = [F.mul(int(c), lead_inv) for c in a]
    return a


def ppowmod(F, a, e, mod):
    result = [F.one]
    base = pmod(F, a, mod)
    while e:
        if e & 1:
            result = pmod(F, pmul(F, result, base), mod)
        base = pmod(F, pmul(F, base, base), mod)
        e >>= 1
    return result


def pderiv(F, a):
    out = []
    for k in range(1, len(a)):
        c = a[k]
        acc = 0
        for _ in range(k % F.ell):
            acc = F.add(acc, int(c))
        out.append(acc)
    return pnorm(out)


def peval_matrix(F, poly, A, matmul_fn=None):
    """poly(A) by Horner."""
    mm = matmul_fn or (lambda X, Y: matmul(F, X, Y))
    n = A.shape[0]
    out = zeros(n, n)
    for c in reversed(pnorm(poly)):
        out = mm(out, A)
        if c:
            d = np.arange(n)
            out[d, d] = F.addv(out[d, d], np.full(n, c, dtype=np.int64))
    return out


def minpoly_vector(F, matvec_fn, v, maxdeg):
    """Monic minimal polynomial of the vector v under the operator."""
    width = len(v)
    acc = EchelonAccumulator(F, width)
    vecs = [np.array(v, dtype=np.int64)]
    acc.insert(vecs[0])
    while len(vecs) <= maxdeg:
        nxt = matvec_fn(vecs[-1])
        if not acc.insert(nxt):
            # solve for the dependency coefficients
            K = np.stack(vecs + [nxt]).T
            ker = nullspace(F, K)
            for row in ker:
                if row[-1] != 0:
                    inv = F.inv(int(row[-1]))
                    coeffs = [F.mul(int(c), inv) for c in row]
                    return pnorm(coeffs)
            raise RuntimeError("dependency detection failed")
        vecs.append(nxt)
    raise RuntimeError("minimal polynomial exceeds bound")


def minpoly_matrix(F, A, rng, tries=6):
    """Minimal polynomial of A (lcm of vector minimal polynomials)."""
    n = A.shape[0]
    mp = [F.one]
    for _ in range(tries):
        v = np.array([rng.randrange(F.N) for _ in range(n)], dtype=np.int64)
        if not v.any():
            continue
        mv = minpoly_vector(F, lambda w: matvec(F, A, w), v, n)
        g = pgcd(F, mp, mv)
        mp = pdivmod(F, pmul(F, mp, mv), g)[0]
        if peval_is_zero(F, mp, A):
            return mp
    if peval_is_zero(F, mp, A):
        return mp
    raise RuntimeError("minimal polynomial not found within budget")


def peval_is_zero(F, poly, A):
    return not peval_matrix(F, poly, A).any()


def distinct_degree_split(F, poly):
    """[(d, product of irreducible factors of degree d)] for squarefree poly."""
    out = []
    f = pnorm(poly)
    u = [0, F.one]  # x
    d = 0
    while len(f) - 1 > 0:
        d += 1
        if 2 * d > len(f) - 1:
            out.append((len(f) - 1, f))
            break
        u = ppowmod(F, u, F.N, f)
        diff = _psub(F, u, [0, F.one])
        g = pgcd(F, diff, f)
        if len(g) - 1 > 0:
            out.append((d, g))
            f = pdivmod(F, f, g)[0]
            u = pmod(F, u, f)
    return out


def _psub(F, a, b):
    n = max(len(a), len(b))
    out = []
    for k in range(n):
        x = int(a[k]) if k < len(a) else 0
        y = int(b[k]) if k < len(b) else 0
        out.append(F.add(x, F.neg(y)))
    return pnorm(out)


def equal_degree_factor(F, poly, d, rng, budget=120):
    """One irreducible factor of a squarefree product of degree-d irreducibles."""
    f = pnorm(poly)
    attempts = 0
    while len(f) - 1 > d:
        attempts += 1
        if attempts > budget:
            raise RuntimeError("equal-degree splitting budget exhausted")
        a = pnorm([rng.randrange(F.N) for _ in range(len(f) - 1)])
        if len(a) - 1 < 1:
            continue
        g = pgcd(F, a, f)
        if not (0 < len(g) - 1 < len(f) - 1):
            b = ppowmod(F, a, (F.N ** d - 1) // 2, f)
            g = pgcd(F, _psub(F, b, [F.one]), f)
        if 0 < len(g) - 1 < len(f) - 1:
            h = pdivmod(F, f, g)[0]
            f = g if len(g) <= len(h) else h
    return f


def squarefree_part(F, poly):
    d = pderiv(F, poly)
    if not d:
        # p-th power: take p-th root and recurse
        root = poly[:: F.ell]
        root = [F.pow(int(c), F.N // F.ell) if c else 0 for c in root]
        return squarefree_part(F, root)
    g = pgcd(F, poly, d)
    sf = pdivmod(F, poly, g)[0]
    if not pnorm(sf):
        return pnorm(poly)
    lead = F.inv(int(pnorm(sf)[-1]))
    return [F.mul(int(c), lead) for c in pnorm(sf)]


def factor_squarefree(F, poly, rng):
    """Full factorization of a squarefree monic polynomial."""
    out = []
    for d, prod in distinct_degree_split(F, poly):
        rem = prod
        while len(rem) - 1 > 0:
            fac = equal_degree_factor(F, rem, d, rng)
            out.append(fac)
            rem = pdivmod(F, rem, fac)[0]
    return out


def factor_full(F, poly, rng):
    """[(irreducible, multiplicity)] for a monic polynomial."""
    poly = pnorm(poly)
    lead = F.inv(int(poly[-1]))
    poly = [F.mul(int(c), lead) for c in poly]
    out = []
    rem = poly
    sf = squarefree_part(F, rem)
    for fac in factor_squarefree(F, sf, rng):
        mult = 0
        while True:
            q, r = pdivmod(F, rem, fac)
            if r:
                break
            rem = q
            mult += 1
        out.append((fac, mult))
    if len(rem) - 1 > 0:
        # leftover from imperfect squarefree handling: recurse
        for fac, mult in factor_full(F, rem, rng):
            merged = False
            for i, (g, m) in enumerate(out):
                if g == fac:
                    out[i] = (g, m + mult)
                    merged = True
            if not merged:
                out.append((fac, mult))
    return out
