"""The finite unitary groups at the two vertex stabilizers.

Gamma is the full 3x3 unitary group over GF(q^2) for the antidiagonal
Hermitian form; GammaPrime is U(1,1) x U(1), realized on the corner 2x2
block (antidiagonal form) plus a norm-one scalar.  Elements are tuples of
field codes, so they hash and sort; bulk enumeration and conjugacy-class
counting are vectorized over packed numpy arrays.

Both groups expose the Bruhat-cell data the Hecke layer needs: reduction
from local matrices, classification of an element into Borel cosets, and
extraction of the torus part of a big-cell factorization.
"""

from __future__ import annotations

import numpy as np

from .gf import FieldTower
from .localfield import LocalMatrix


def gamma_order(q: int) -> int:
    return q ** 3 * (q + 1) * (q * q - 1) * (q ** 3 + 1)


def gamma_prime_order(q: int) -> int:
    return q * (q - 1) * (q + 1) ** 3


class GammaGroup:
    """U(2,1)(GF(q^2)/GF(q)) as 3x3 matrices, elements = 9-tuples of codes."""

    def __init__(self, tower: FieldTower):
        self.tower = tower
        self.F = tower.Fq2
        self.q = tower.q
        se = tower.sqrt_eps()
        self.sqrt_eps = se
        self.eps = self.F.mul(se, se)
        F = self.F
        self.identity = (F.one, 0, 0, 0, F.one, 0, 0, 0, F.one)
        self.n_s = (0, 0, F.neg(F.inv(se)), 0, F.one, 0, se, 0, 0)
        self._constraint_pairs = None
        self._elements = None

    # -- element arithmetic

    def mul(self, a, b):
        F = self.F
        out = []
        for i in range(3):
            for j in range(3):
                acc = 0
                for k in range(3):
                    acc = F.add(acc, F.mul(a[3 * i + k], b[3 * k + j]))
                out.append(acc)
        return tuple(out)

    def inv(self, a):
        # g^-1 = s g* s: conjugate transpose with both indices flipped
        F, t = self.F, self.tower
        return tuple(t.conj(a[3 * (2 - j) + (2 - i)]) for i in range(3) for j in range(3))

    def in_group(self, a) -> bool:
        F, t = self.F, self.tower
        s = (0, 0, F.one, 0, F.one, 0, F.one, 0, 0)
        astar = tuple(t.conj(a[3 * j + i]) for i in range(3) for j in range(3))
        return self.mul(self.mul(astar, s), a) == s

    def h_matrix(self, h) -> tuple:
        """Torus element diag(a, delta, conj(a)^-1) from the pair (i, j)."""
        F, t = self.F, self.tower
        i, j = h
        a = F.element_from_power(i)
        delta = F.element_from_power((t.q - 1) * j)
        return (a, 0, 0, 0, delta, 0, 0, 0, F.inv(t.conj(a)))

    def h_pair_of_diag(self, a_code: int, delta_code: int):
        F, t = self.F, self.tower
        i = F.dlog(a_code)
        jd = F.dlog(delta_code)
        if jd % (t.q - 1):
            raise ValueError("middle entry is not norm-one")
        return (i % (t.qq - 1), (jd // (t.q - 1)) % (t.q + 1))

    def u_matrix(self, x: int, y: int) -> tuple:
        F, t = self.F, self.tower
        if t.trace(y) != F.neg(t.norm(x)):
            raise ValueError("unipotent constraint violated")
        return (F.one, x, y, 0, F.one, F.neg(t.conj(x)), 0, 0, F.one)

    def constraint_pairs(self):
        if self._constraint_pairs is None:
            t, F = self.tower, self.F
            out = []
            for x in range(F.N):
                target = F.neg(t.norm(x)) if x else 0
                for y in range(F.N):
                    if t.trace(y) == target:
                        out.append((x, y))
            self._constraint_pairs = out
        return self._constraint_pairs

    def unipotents(self):
        return [self.u_matrix(x, y) for (x, y) in self.constraint_pairs()]

    def h_pairs(self):
        t = self.tower
        return [(i, j) for i in range(t.qq - 1) for j in range(t.q + 1)]

    def borel_elements(self):
        return [self.mul(self.h_matrix(h), u)
                for h in self.h_pairs() for u in self.unipotents()]

    def generators(self) -> dict:
        t, F = self.tower, self.F
        gens = {
            "h_a": self.h_matrix((1, 0)),
            "h_d": self.h_matrix((0, 1)),
            "n_s": self.n_s,
        }
        xs = [F.element_from_power(k) for k in range(2 * t.f)]
        for k, x in enumerate(xs):
            y = self._solve_y(F.neg(t.norm(x)))
            gens[f"u_x{k}"] = self.u_matrix(x, y)
        tz = [y for y in range(F.N) if y and t.trace(y) == 0]
        basis = []
        for y in tz:
            if y not in _additive_span(F, t.p, basis):
                basis.append(y)
        for k, y in enumerate(basis):
            gens[f"u_z{k}"] = self.u_matrix(0, y)
        return gens

    def _solve_y(self, target: int) -> int:
        t, F = self.tower, self.F
        for y in range(F.N):
            if t.trace(y) == target:
                return y
        raise RuntimeError("trace is surjective; unreachable")

    # -- Bruhat-cell structure

    def is_upper(self, m) -> bool:
        return m[3] == 0 and m[6] == 0 and m[7] == 0

    def bruhat_extract(self, m):
        """('1', h) for Borel elements, ('s', h) with m = u1 n_s h u2 otherwise."""
        F, t = self.F, self.tower
        if m[6] == 0:
            if not self.is_upper(m):
                raise ValueError("corner zero but not upper triangular: not a group element")
            return ("1", self.h_pair_of_diag(m[0], m[4]))
        # strip u2 using the bottom row, then read h off the remaining matrix
        x2 = F.div(m[7], m[6])
        y2 = F.div(m[8], m[6])
        u2inv = self.u_matrix(F.neg(x2), t.conj(y2))
        w = self.mul(m, u2inv)
        a = F.div(w[6], self.sqrt_eps)
        delta = w[4]
        return ("s", self.h_pair_of_diag(a, delta))

    def borel_coset_index(self, m):
        """Index data of the right coset containing m among B\\Gamma.

        Returns (key, h) where key is None for the Borel coset or the pair
        (x, y) indexing the representative n_s u(x, y), and h is the torus
        pair of the Borel part b with m = b * rep.
        """
        F, t = self.F, self.tower
        if m[6] == 0:
            return None, self.h_pair_of_diag(m[0], m[4])
        x = F.div(m[7], m[6])
        y = F.div(m[8], m[6])
        rep = self.mul(self.n_s, self.u_matrix(x, y))
        b = self.mul(m, self.inv(rep))
        return (x, y), self.h_pair_of_diag(b[0], b[4])

    # -- enumeration

    def order(self) -> int:
        return gamma_order(self.q)

    def enumerate_cells(self):
        """All elements via the Borel cells; cached."""
        if self._elements is None:
            borel = self.borel_elements()
            els = list(borel)
            for u in self.unipotents():
                uns = self.mul(u, self.n_s)
                els.extend(self.mul(uns, b) for b in borel)
            self._elements = els
        return self._elements

    def scan_enumerate_packed(self):
        """Brute-force oracle: vectorized scan of all matrices with g* s g = s.

        Returns a sorted packed array; independent of the cell construction.
        """
        F, t = self.F, self.tower
        N = F.N
        codes = np.arange(N, dtype=np.int64)
        conj = np.array([t.conj(int(c)) for c in codes], dtype=np.int64)

        def pairing(x, y):
            # <x, y> = conj(x1) y3 + conj(x2) y2 + conj(x3) y1, vectorized
            acc = F.mulv(conj[x[0]], y[2])
            acc = F.addv(acc, F.mulv(conj[x[1]], y[1]))
            acc = F.addv(acc, F.mulv(conj[x[2]], y[0]))
            return acc

        vecs = np.stack(np.meshgrid(codes, codes, codes, indexing="ij"), axis=0).reshape(3, -1)
        self_pair = pairing(vecs, vecs)
        iso = vecs[:, (self_pair == 0) & ~((vecs == 0).all(axis=0))]
        one = F.one
        out = []
        c2_pool = vecs[:, pairing(vecs, vecs) == one]
        for a in range(iso.shape[1]):
            c1 = iso[:, a:a + 1]
            mask = pairing(np.broadcast_to(c1, c2_pool.shape), c2_pool) == 0
            c2s = c2_pool[:, mask]
            for bcol in range(c2s.shape[1]):
                c2 = c2s[:, bcol:bcol + 1]
                m1 = pairing(np.broadcast_to(c1, vecs.shape), vecs) == one
                m2 = pairing(np.broadcast_to(c2, vecs.shape), vecs) == 0
                m3 = self_pair == 0
                c3s = vecs[:, m1 & m2 & m3]
                for ccol in range(c3s.shape[1]):
                    c3 = c3s[:, ccol]
                    out.append((int(c1[0, 0]), int(c2[0, 0]), int(c3[0]),
                                int(c1[1, 0]), int(c2[1, 0]), int(c3[1]),
                                int(c1[2, 0]), int(c2[2, 0]), int(c3[2])))
        packed = pack_elements(out, N)
        packed.sort()
        return packed

    def reduce_local(self, g: LocalMatrix) -> tuple:
        """Reduction of an integral local matrix to Gamma."""
        return tuple(g[i, j].residue() for i in range(3) for j in range(3))


class GammaPrimeGroup:
    """U(1,1) x U(1): elements (a, b, c, d, delta) for the 2x2 block [[a,b],[c,d]]."""

    def __init__(self, tower: FieldTower):
        self.tower = tower
        self.F = tower.Fq2
        self.q = tower.q
        se = tower.sqrt_eps()
        self.sqrt_eps = se
        F = self.F
        self.identity = (F.one, 0, 0, F.one, F.one)
        self.n_sp = (0, F.neg(F.inv(se)), se, 0, F.one)
        self._elements = None

    def mul(self, x, y):
        F = self.F
        a = F.add(F.mul(x[0], y[0]), F.mul(x[1], y[2]))
        b = F.add(F.mul(x[0], y[1]), F.mul(x[1], y[3]))
        c = F.add(F.mul(x[2], y[0]), F.mul(x[3], y[2]))
        d = F.add(F.mul(x[2], y[1]), F.mul(x[3], y[3]))
        return (a, b, c, d, F.mul(x[4], y[4]))

    def inv(self, x):
        # A^-1 = J A* J for the antidiagonal form J
        F, t = self.F, self.tower
        return (t.conj(x[3]), t.conj(x[1]), t.conj(x[2]), t.conj(x[0]), F.inv(x[4]))

    def in_group(self, x) -> bool:
        F, t = self.F, self.tower
        a, b, c, d, delta = x
        cond1 = F.add(F.mul(t.conj(a), c), F.mul(t.conj(c), a)) == 0
        cond2 = F.add(F.mul(t.conj(a), d), F.mul(t.conj(c), b)) == F.one
        cond3 = F.add(F.mul(t.conj(b), d), F.mul(t.conj(d), b)) == 0
        cond4 = t.norm(delta) == F.one
        return cond1 and cond2 and cond3 and cond4

    def h_matrix(self, h) -> tuple:
        F, t = self.F, self.tower
        i, j = h
        a = F.element_from_power(i) if i % (t.qq - 1) else F.one
        delta = F.element_from_power((t.q - 1) * j) if ((t.q - 1) * j) % (t.qq - 1) else F.one
        return (a, 0, 0, F.inv(t.conj(a)), delta)

    def h_pair_of(self, x):
        F, t = self.F, self.tower
        i = F.dlog(x[0])
        jd = F.dlog(x[4])
        if jd % (t.q - 1):
            raise ValueError("scalar part is not norm-one")
        return (i % (t.qq - 1), (jd // (t.q - 1)) % (t.q + 1))

    def u_matrix(self, g: int) -> tuple:
        """Lower unipotent [[1,0],[g,1]], trace(g) = 0."""
        F, t = self.F, self.tower
        if t.trace(g) != 0:
            raise ValueError("unipotent parameter must have zero trace")
        return (F.one, 0, g, F.one, F.one)

    def unipotent_params(self):
        t, F = self.tower, self.F
        return [g for g in range(F.N) if t.trace(g) == 0]

    def unipotents(self):
        return [self.u_matrix(g) for g in self.unipotent_params()]

    def generators(self) -> dict:
        t, F = self.tower, self.F
        gens = {"h_a": self.h_matrix((1, 0)), "h_d": self.h_matrix((0, 1)),
                "n_sp": self.n_sp}
        basis = []
        for g in self.unipotent_params():
            if g and g not in _additive_span(F, t.p, basis):
                basis.append(g)
        for k, g in enumerate(basis):
            gens[f"u_z{k}"] = self.u_matrix(g)
        return gens

    def is_lower(self, x) -> bool:
        return x[1] == 0

    def bruhat_extract(self, x):
        F, t = self.F, self.tower
        if self.is_lower(x):
            return ("1", self.h_pair_of(x))
        g2 = F.div(x[0], x[1])
        u2inv = self.u_matrix(F.neg(g2))
        w = self.mul(x, u2inv)
        # w = u1 n' h: the (1,2)-entry is -conj(a)^-1/sqrt_eps
        a = F.inv(t.conj(F.neg(F.mul(w[1], self.sqrt_eps))))
        return ("s", self.h_pair_of((a, 0, 0, F.inv(t.conj(a)), w[4])))

    def borel_coset_index(self, x):
        """Right-coset index among B'\\Gamma' (lower Borel); see GammaGroup."""
        F = self.F
        if x[1] == 0:
            return None, self.h_pair_of((x[0], 0, 0, x[3], x[4]))
        g = F.div(x[0], x[1])
        rep = self.mul(self.n_sp, self.u_matrix(g))
        b = self.mul(x, self.inv(rep))
        return g, self.h_pair_of((b[0], 0, 0, b[3], b[4]))

    def order(self) -> int:
        return gamma_prime_order(self.q)

    def borel_elements(self):
        out = []
        for h in [(i, j) for i in range(self.tower.qq - 1) for j in range(self.tower.q + 1)]:
            hm = self.h_matrix(h)
            for u in self.unipotents():
                out.append(self.mul(hm, u))
        return out

    def enumerate_cells(self):
        if self._elements is None:
            borel = self.borel_elements()
            els = list(borel)
            for u in self.unipotents():
                un = self.mul(u, self.n_sp)
                els.extend(self.mul(un, b) for b in borel)
            self._elements = els
        return self._elements

    def scan_enumerate(self):
        """Brute-force oracle over all 2x2 blocks (use at q = 3 only)."""
        F, t = self.F, self.tower
        out = []
        deltas = [d for d in range(1, F.N) if t.norm(d) == F.one]
        for a in range(F.N):
            for b in range(F.N):
                for c in range(F.N):
                    for d in range(F.N):
                        if self.in_group((a, b, c, d, F.one)):
                            out.extend((a, b, c, d, dd) for dd in deltas)
        return out

    def reduce_local(self, g: LocalMatrix) -> tuple:
        """Reduction of a local matrix with the K'-pattern to GammaPrime."""
        a = g[0, 0].residue()
        b = g[0, 2].coeff(-1)
        c = g[2, 0].coeff(1)
        d = g[2, 2].residue()
        delta = g[1, 1].residue()
        return (a, b, c, d, delta)


def _additive_span(F, p, basis):
    span = {0}
    for b in basis:
        new = set(span)
        for s in span:
            cur = s
            for _ in range(p - 1):
                cur = F.add(cur, b)
                new.add(cur)
        span = new
    return span


# -- packed numpy element sets and conjugacy machinery

def pack_elements(elements, N: int) -> np.ndarray:
    arr = np.array(elements, dtype=np.int64)
    packed = np.zeros(len(elements), dtype=np.int64)
    for k in range(arr.shape[1]):
        packed = packed * N + arr[:, k]
    return packed


def mul_all(group, g, arr: np.ndarray, left=True) -> np.ndarray:
    """Vectorized product of a fixed element with an (N x w) code array."""
    F = group.F
    if isinstance(group, GammaGroup):
        dim = 3
        cols = [arr[:, k] for k in range(9)]
        out = []
        for i in range(dim):
            for j in range(dim):
                acc = np.zeros(arr.shape[0], dtype=np.int64)
                for k in range(dim):
                    if left:
                        acc = F.addv(acc, F.scalev(g[3 * i + k], cols[3 * k + j]))
                    else:
                        acc = F.addv(acc, F.mulv(cols[3 * i + k],
                                                 np.full(arr.shape[0], g[3 * k + j],
                                                         dtype=np.int64)))
                out.append(acc)
        return np.stack(out, axis=1)
    dim = 2
    cols = [arr[:, k] for k in range(5)]
    out = []
    for i in range(dim):
        for j in range(dim):
            acc = np.zeros(arr.shape[0], dtype=np.int64)
            for k in range(dim):
                if left:
                    acc = F.addv(acc, F.scalev(g[2 * i + k], cols[2 * k + j]))
                else:
                    acc = F.addv(acc, F.mulv(cols[2 * i + k],
                                             np.full(arr.shape[0], g[2 * k + j],
                                                     dtype=np.int64)))
            out.append(acc)
    if left:
        out.append(F.scalev(g[4], cols[4]))
    else:
        out.append(F.mulv(cols[4], np.full(arr.shape[0], g[4], dtype=np.int64)))
    return np.stack(out, axis=1)


def p_regular_class_count(group, q: int) -> int:
    """Number of conjugacy classes of elements of order prime to p."""
    p = group.tower.p
    els = group.enumerate_cells()
    F = group.F
    N = F.N
    arr = np.array(els, dtype=np.int64)
    n, w = arr.shape

    order = group.order()
    m = order
    while m % p == 0:
        m //= p

    # g^m via binary powering, vectorized elementwise matrix products
    def square_or_mul(A, B):
        if isinstance(group, GammaGroup):
            out = []
            for i in range(3):
                for j in range(3):
                    acc = np.zeros(n, dtype=np.int64)
                    for k in range(3):
                        acc = F.addv(acc, F.mulv(A[:, 3 * i + k], B[:, 3 * k + j]))
                    out.append(acc)
            return np.stack(out, axis=1)
        out = []
        for i in range(2):
            for j in range(2):
                acc = np.zeros(n, dtype=np.int64)
                for k in range(2):
                    acc = F.addv(acc, F.mulv(A[:, 2 * i + k], B[:, 2 * k + j]))
                out.append(acc)
        out.append(F.mulv(A[:, 4], B[:, 4]))
        return np.stack(out, axis=1)

    ident = np.tile(np.array(group.identity, dtype=np.int64), (n, 1))
    acc, base, e = ident, arr, m
    while e:
        if e & 1:
            acc = square_or_mul(acc, base)
        base = square_or_mul(base, base)
        e >>= 1
    regular = (acc == ident).all(axis=1)
    reg = arr[regular]

    packed = pack_elements([tuple(r) for r in reg], N)
    order_idx = np.argsort(packed, kind="stable")
    sorted_packed = packed[order_idx]
    reg_sorted = reg[order_idx]

    labels = np.arange(len(reg_sorted), dtype=np.int64)
    gens = list(group.generators().values())
    gens = gens + [group.inv(g) for g in gens]
    perms = []
    for g in gens:
        ginv = group.inv(g)
        conj = mul_all(group, ginv, mul_all(group, g, reg_sorted, left=False), left=True)
        cp = np.zeros(len(reg_sorted), dtype=np.int64)
        for k in range(conj.shape[1]):
            cp = cp * N + conj[:, k]
        pos = np.searchsorted(sorted_packed, cp)
        if not (sorted_packed[pos] == cp).all():
            raise RuntimeError("conjugate left the p-regular set; impossible")
        perms.append(pos)
    changed = True
    while changed:
        changed = False
        for pos in perms:
            new = np.minimum(labels, labels[pos])
            new = np.minimum(new, new[pos])
            if not np.array_equal(new, labels):
                labels = new
                changed = True
    return int(len(np.unique(labels)))


class CosetTable:
    """Ordered representatives for Borel cosets with index lookup."""

    def __init__(self, group):
        self.group = group
        if isinstance(group, GammaGroup):
            reps = [group.identity]
            keys = {None: 0}
            for (x, y) in group.constraint_pairs():
                keys[(x, y)] = len(reps)
                reps.append(group.mul(group.n_s, group.u_matrix(x, y)))
        else:
            reps = [group.identity]
            keys = {None: 0}
            for g in group.unipotent_params():
                keys[g] = len(reps)
                reps.append(group.mul(group.n_sp, group.u_matrix(g)))
        self.reps = reps
        self.keys = keys
        self._pair_index = None
        self._param_index = None

    def pair_index_array(self):
        """Packed (x, y) -> representative index, for vectorized classification."""
        if self._pair_index is None:
            N = self.group.F.N
            arr = np.zeros(N * N, dtype=np.int64)
            for key, idx in self.keys.items():
                if key is not None:
                    arr[key[0] * N + key[1]] = idx
            self._pair_index = arr
        return self._pair_index

    def param_index_array(self):
        if self._param_index is None:
            N = self.group.F.N
            arr = np.zeros(N, dtype=np.int64)
            for key, idx in self.keys.items():
                if key is not None:
                    arr[key] = idx
            self._param_index = arr
        return self._param_index

    def __len__(self):
        return len(self.reps)

    def classify(self, m):
        """(index, h) with m = b * reps[index] and h the torus pair of b."""
        key, h = self.group.borel_coset_index(m)
        return self.keys[key], h

    def action_permutation(self, g):
        """The permutation (with torus twists) of cosets under right translation."""
        out = []
        for rep in self.reps:
            idx, h = self.classify(self.group.mul(rep, g))
            out.append((idx, h))
        return out
