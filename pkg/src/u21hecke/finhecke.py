"""Convolution Hecke algebras of the two finite groups at the special vertices.

Elements are sparse tables over double-coset labels ('1', h) and ('s', h)
with h a torus pair; the basis has size 2|H|.  Convolution evaluates
(f1 * f2)(g) = sum over cosets x of f1(x) f2(x^-1 g) using the Bruhat-cell
classification of matrices, with a fast label-shift path when one factor is
supported on the torus.  Coefficients live either in the tower's coefficient
field or in plain integers (for identities whose constants are integral).
"""

from __future__ import annotations

from .gf import FieldTower, TorusChar, h_mul, h_inv, h_s_conj
from .groups import GammaGroup, GammaPrimeGroup


class IntDomain:
    """Plain integer coefficients, for relations with integral constants."""

    zero = 0
    one = 1

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a in (1, -1):
            return a
        raise ZeroDivisionError("only units are invertible over the integers")

    def from_int(self, n):
        return n


class HeckeElem:
    """Sparse coefficient table over the double-coset labels of one algebra."""

    __slots__ = ("algebra", "table")

    def __init__(self, algebra, table=None):
        self.algebra = algebra
        self.table = {}
        if table:
            for k, v in table.items():
                if v != algebra.domain.zero:
                    self.table[k] = v

    def __add__(self, other):
        self._check(other)
        D = self.algebra.domain
        out = dict(self.table)
        for k, v in other.table.items():
            w = D.add(out.get(k, D.zero), v)
            if w == D.zero:
                out.pop(k, None)
            else:
                out[k] = w
        return HeckeElem(self.algebra, out)

    def __neg__(self):
        D = self.algebra.domain
        return HeckeElem(self.algebra, {k: D.neg(v) for k, v in self.table.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        D = self.algebra.domain
        return HeckeElem(self.algebra, {k: D.mul(c, v) for k, v in self.table.items()})

    def __mul__(self, other):
        return self.algebra.convolve(self, other)

    def is_zero(self):
        return not self.table

    def __eq__(self, other):
        return isinstance(other, HeckeElem) and self.algebra is other.algebra \
            and self.table == other.table

    def _check(self, other):
        if self.algebra is not other.algebra:
            raise ValueError("algebra tag mismatch")

    def coefficient(self, label):
        return self.table.get(label, self.algebra.domain.zero)

    def __repr__(self):
        items = sorted(self.table.items())
        return "HeckeElem{" + ", ".join(f"{k}: {v}" for k, v in items[:6]) \
            + (", ..." if len(items) > 6 else "") + "}"


class HeckeAlgebra:
    """End of the induction of the trivial character from the Sylow subgroup."""

    def __init__(self, group, tower: FieldTower, domain=None):
        self.group = group
        self.tower = tower
        self.domain = tower.C if domain is None else domain
        self.is_gamma = isinstance(group, GammaGroup)
        if self.is_gamma:
            self._w_mat = group.n_s
            self._w_cosets = [group.mul(group.u_matrix(x, y), group.n_s)
                              for (x, y) in group.constraint_pairs()]
        else:
            self._w_mat = group.n_sp
            self._w_cosets = [group.mul(group.u_matrix(g), group.n_sp)
                              for g in group.unipotent_params()]
        self._w_coset_invs = [group.inv(m) for m in self._w_cosets]
        self._h_cache = {}

    # -- basis elements

    def basis_labels(self):
        t = self.tower
        hs = [(i, j) for i in range(t.qq - 1) for j in range(t.q + 1)]
        return [("1", h) for h in hs] + [("s", h) for h in hs]

    def one(self):
        return HeckeElem(self, {("1", (0, 0)): self.domain.one})

    def T(self, label):
        return HeckeElem(self, {label: self.domain.one})

    def T_h(self, h):
        return self.T(("1", (h[0] % (self.tower.qq - 1), h[1] % (self.tower.q + 1))))

    def T_w(self, h=(0, 0)):
        """The reflection operator times a torus element."""
        return self.T(("s", (h[0] % (self.tower.qq - 1), h[1] % (self.tower.q + 1))))

    def T_hs(self, y_exp: int):
        """T at the norm-style torus cocharacter value: h_s(gamma^i) = (i, i)."""
        t = self.tower
        return self.T_h((y_exp % (t.qq - 1), y_exp % (t.q + 1)))

    def e_chi(self, chi: TorusChar):
        D, t = self.domain, self.tower
        inv_h = D.inv(D.from_int(t.H_order))
        table = {}
        for i in range(t.qq - 1):
            for j in range(t.q + 1):
                table[("1", (i, j))] = D.mul(inv_h, chi.value((i, j)))
        return HeckeElem(self, table)

    def tau_s(self):
        """(q+1) sum over units minus q sum over norm-one-line units."""
        t, D = self.tower, self.domain
        out = {}
        for i in range(t.qq - 1):
            lbl = ("1", (i, i % (t.q + 1)))
            c = D.from_int(t.q + 1)
            if i % (t.q + 1) == 0:
                # gamma^i lies in GF(q): subtract the q-multiple
                c = D.add(c, D.neg(D.from_int(t.q)))
            out[lbl] = D.add(out.get(lbl, D.zero), c)
        return HeckeElem(self, out)

    def tau_sp(self):
        t, D = self.tower, self.domain
        out = {}
        for i in range(0, t.qq - 1, t.q + 1):
            lbl = ("1", (i, i % (t.q + 1)))
            out[lbl] = D.add(out.get(lbl, D.zero), D.one)
        return HeckeElem(self, out)

    # -- convolution

    def _h_matrix(self, h):
        if h not in self._h_cache:
            self._h_cache[h] = self.group.h_matrix(h)
        return self._h_cache[h]

    def convolve(self, f1: HeckeElem, f2: HeckeElem) -> HeckeElem:
        f1._check(f2)
        D = self.domain
        t = self.tower
        out: dict = {}

        def bump(lbl, c):
            if c == D.zero:
                return
            w = D.add(out.get(lbl, D.zero), c)
            if w == D.zero:
                out.pop(lbl, None)
            else:
                out[lbl] = w

        s1 = [(h, c) for (w, h), c in f1.table.items() if w == "s"]
        t1 = [(h, c) for (w, h), c in f1.table.items() if w == "1"]
        s2 = [(h, c) for (w, h), c in f2.table.items() if w == "s"]
        t2 = [(h, c) for (w, h), c in f2.table.items() if w == "1"]

        # torus * torus and torus * s: label shifts
        for h1, c1 in t1:
            for h2, c2 in t2:
                bump(("1", h_mul(t, h1, h2)), D.mul(c1, c2))
            for h2, c2 in s2:
                bump(("s", h_mul(t, h_s_conj(t, h1), h2)), D.mul(c1, c2))
        # s * torus: right shift
        for h1, c1 in s1:
            for h2, c2 in t2:
                bump(("s", h_mul(t, h1, h2)), D.mul(c1, c2))

        # s * s: honest convolution evaluated on every label
        if s1 and s2:
            G = self.group
            val2 = {}
            for h2, c2 in s2:
                val2[("s", h2)] = c2
            for lbl in self.basis_labels():
                g_mat = self._label_matrix(lbl)
                acc = D.zero
                for h1, c1 in s1:
                    hm = self._h_matrix(h1)
                    for inv_rep in self._w_coset_invs:
                        # rep = u w; coset rep of the double coset is u w h1
                        m = G.mul(G.inv(hm), G.mul(inv_rep, g_mat))
                        w, h = G.bruhat_extract(m)
                        c2 = val2.get((w, h))
                        if c2 is not None:
                            acc = D.add(acc, D.mul(c1, c2))
                bump(lbl, acc)
        return HeckeElem(self, out)

    def _label_matrix(self, lbl):
        w, h = lbl
        hm = self._h_matrix(h)
        if w == "1":
            return hm
        return self.group.mul(self._w_mat, hm)

    # -- relation verification

    def expected_quadratic(self, chi: TorusChar):
        """(A, B) with T_w^2 e = A T_w e + B e for this algebra and character."""
        q = self.tower.q
        if self.is_gamma:
            if chi.is_det_type():
                return (q ** 3 - 1, q ** 3)
            if chi.is_s_fixed():
                return (q - q ** 2, q ** 3)
            return (0, None)  # B = zeta(-1) q^3, flagged by None
        if chi.is_s_fixed():
            return (q - 1, q)
        return (0, None)

    def quadratic_case_constants(self, chi: TorusChar):
        D = self.domain
        q = self.tower.q
        A, B = self.expected_quadratic(chi)
        if B is None:
            zb = chi.zeta_minus_one()
            base = q ** 3 if self.is_gamma else q
            return D.from_int(A), D.mul(zb, D.from_int(base))
        return D.from_int(A), D.from_int(B)

    def verify_quadratic(self, chi: TorusChar, T2=None):
        """Measure the quadratic relation constants; returns a report row."""
        D = self.domain
        e = self.e_chi(chi)
        Tw = self.T_w()
        if T2 is None:
            T2 = self.convolve(Tw, Tw)
        lhs = self.convolve(T2, e)
        Te = self.convolve(Tw, e)
        A, B = self.quadratic_case_constants(chi)
        rhs = Te.scale(A) + e.scale(B)
        # measured constants read off one label of each cell
        measured_A = measured_B = D.zero
        for lbl, c in Te.table.items():
            if lbl[0] == "s":
                measured_A = D.mul(lhs.coefficient(lbl), D.inv(c))
                break
        for lbl, c in e.table.items():
            if lbl[0] == "1":
                num = D.add(lhs.coefficient(lbl),
                            D.neg(D.mul(measured_A, Te.coefficient(lbl))))
                measured_B = D.mul(num, D.inv(c))
                break
        return {
            "chi": chi.key(),
            "case": chi.case(),
            "algebra": "vertex0" if self.is_gamma else "vertex1",
            "measured": (measured_A, measured_B),
            "expected": (A, B),
            "exact_match": (lhs - rhs).is_zero(),
        }


def catalog_characters(tower: FieldTower, gamma_side: bool):
    """All simple-module characters of the finite Hecke algebra (char p).

    Entries: (chi, J) with J a subset marker; value table assigns the
    reflection generator 0 or -1 per the classification.
    """
    out = []
    for chi in tower.all_chars():
        if gamma_side:
            J0 = ("s",) if chi.is_det_type() else ()
        else:
            J0 = ("s'",) if chi.is_s_fixed() else ()
        subsets = [()] if not J0 else [(), J0]
        for J in subsets:
            if J0 and J == ():
                t_val = -1
            else:
                t_val = 0
            out.append({"chi": chi, "J": J, "T_value": t_val})
    return out


def catalog_count(tower: FieldTower, gamma_side: bool) -> int:
    return len(catalog_characters(tower, gamma_side))
