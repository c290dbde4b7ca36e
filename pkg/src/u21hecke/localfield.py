"""Truncated Laurent-series model of the quadratic unramified local field
and the 3x3 unitary group over it.

The base field is taken in equal characteristic, E = GF(q^2)((w)) with the
uniformizer w fixed by conjugation, which acts coefficientwise by x -> x^q.
Residue-class representatives are then honest constants and every
double-coset representative below satisfies its defining constraint exactly.

Elements carry a known-coefficient window [val, prec); operations that would
need coefficients beyond the window raise ``PrecisionError`` instead of
returning wrong data.  Exact elements (finite w-expansions) have prec = None.
"""

from __future__ import annotations

from .gf import FieldTower

INF = float("inf")


class PrecisionError(ArithmeticError):
    pass


class LaurentRing:
    def __init__(self, tower: FieldTower, precision: int = 12):
        self.tower = tower
        self.F = tower.Fq2
        self.precision = precision
        self.zero = Laurent(self, 0, (), None)
        self.one = Laurent(self, 0, (self.F.one,), None)

    def const(self, code: int) -> "Laurent":
        return Laurent(self, 0, (code,), None)

    def monomial(self, code: int, k: int) -> "Laurent":
        return Laurent(self, k, (code,), None)

    def from_coeffs(self, val: int, codes, prec=None) -> "Laurent":
        return Laurent(self, val, tuple(codes), prec)


class Laurent:
    """A Laurent series known on the exponent window [val, prec).

    Invariant: the leading stored coefficient is nonzero (or the element is
    exact zero / an all-zero window, in which case coeffs is empty and val
    records the best lower bound on the valuation).
    """

    __slots__ = ("ring", "val", "coeffs", "prec")

    def __init__(self, ring, val, coeffs, prec):
        coeffs = list(coeffs)
        while coeffs and coeffs[0] == 0:
            coeffs.pop(0)
            val += 1
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        if prec is not None:
            coeffs = coeffs[: max(0, prec - val)]
            while coeffs and coeffs[-1] == 0:
                coeffs.pop()
        if not coeffs:
            val = val if prec is None else prec
        self.ring = ring
        self.val = val
        self.coeffs = tuple(coeffs)
        self.prec = prec

    # -- classification

    @property
    def exact(self) -> bool:
        return self.prec is None

    def is_zero(self) -> bool:
        if self.coeffs:
            return False
        if self.exact:
            return True
        raise PrecisionError("element indistinguishable from zero at this precision")

    def valuation(self) -> int:
        if self.coeffs:
            return self.val
        if self.exact:
            raise ValueError("valuation of exact zero")
        raise PrecisionError("valuation unknown: zero to working precision")

    def is_integral(self) -> bool:
        if not self.coeffs:
            return True if self.exact else self.val >= 0
        return self.val >= 0

    def coeff(self, k: int) -> int:
        if self.prec is not None and k >= self.prec:
            raise PrecisionError(f"coefficient at w^{k} beyond window")
        if k < self.val or k >= self.val + len(self.coeffs):
            return 0
        return self.coeffs[k - self.val]

    def residue(self) -> int:
        """Reduction mod w of an integral element."""
        if not self.is_integral():
            raise ValueError("residue of a non-integral element")
        return self.coeff(0)

    # -- arithmetic

    def __add__(self, other: "Laurent") -> "Laurent":
        F = self.ring.F
        prec = _min_prec(self.prec, other.prec)
        lo = min(self.val, other.val)
        hi = max(self.val + len(self.coeffs), other.val + len(other.coeffs))
        if prec is not None:
            hi = min(hi, prec)
        out = []
        for k in range(lo, hi):
            a = self.coeffs[k - self.val] if self.val <= k < self.val + len(self.coeffs) else 0
            b = other.coeffs[k - other.val] if other.val <= k < other.val + len(other.coeffs) else 0
            out.append(F.add(a, b))
        return Laurent(self.ring, lo, out, prec)

    def __neg__(self) -> "Laurent":
        F = self.ring.F
        return Laurent(self.ring, self.val, [F.neg(c) for c in self.coeffs], self.prec)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: "Laurent") -> "Laurent":
        F = self.ring.F
        if not self.coeffs or not other.coeffs:
            if (self.exact and not self.coeffs) or (other.exact and not other.coeffs):
                return self.ring.zero
            v = self.val + other.val
            return Laurent(self.ring, v, (), v)
        prec = None
        if self.prec is not None:
            prec = self.prec + other.val
        if other.prec is not None:
            p2 = other.prec + self.val
            prec = p2 if prec is None else min(prec, p2)
        lo = self.val + other.val
        n = len(self.coeffs) + len(other.coeffs) - 1
        out = [0] * n
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[i + j] = F.add(out[i + j], F.mul(a, b))
        return Laurent(self.ring, lo, out, prec)

    def inverse(self) -> "Laurent":
        F = self.ring.F
        if not self.coeffs:
            if self.exact:
                raise ZeroDivisionError("inverse of zero")
            raise PrecisionError("inverse of an element indistinguishable from zero")
        if len(self.coeffs) == 1:
            return Laurent(self.ring, -self.val, (F.inv(self.coeffs[0]),),
                           None if self.exact else self.prec - 2 * self.val)
        width = (self.prec - self.val) if self.prec is not None else self.ring.precision
        c0inv = F.inv(self.coeffs[0])
        inv = [c0inv] + [0] * (width - 1)
        for k in range(1, width):
            acc = 0
            for i in range(1, min(k, len(self.coeffs) - 1) + 1):
                acc = F.add(acc, F.mul(self.coeffs[i], inv[k - i]))
            inv[k] = F.neg(F.mul(c0inv, acc))
        return Laurent(self.ring, -self.val, inv, -self.val + width)

    def __truediv__(self, other):
        return self * other.inverse()

    def conj(self) -> "Laurent":
        q = self.ring.tower.q
        F = self.ring.F
        return Laurent(self.ring, self.val,
                       [F.pow(c, q) for c in self.coeffs], self.prec)

    def eq(self, other: "Laurent") -> bool:
        d = self - other
        return d.is_zero() if d.exact else not d.coeffs

    def __repr__(self):
        if not self.coeffs:
            return "0" if self.exact else f"O(w^{self.val})"
        terms = [f"{c}*w^{self.val + i}" for i, c in enumerate(self.coeffs) if c]
        s = " + ".join(terms)
        return s if self.exact else s + f" + O(w^{self.prec})"


def _min_prec(p1, p2):
    if p1 is None:
        return p2
    if p2 is None:
        return p1
    return min(p1, p2)


class LocalMatrix:
    """3x3 matrix over the Laurent model; group elements satisfy m* s m = s."""

    __slots__ = ("ring", "rows")

    def __init__(self, ring: LaurentRing, rows):
        self.ring = ring
        self.rows = tuple(tuple(r) for r in rows)

    def __getitem__(self, ij):
        return self.rows[ij[0]][ij[1]]

    def __mul__(self, other: "LocalMatrix") -> "LocalMatrix":
        z = self.ring.zero
        rows = []
        for i in range(3):
            row = []
            for j in range(3):
                acc = z
                for k in range(3):
                    acc = acc + self.rows[i][k] * other.rows[k][j]
                row.append(acc)
            rows.append(row)
        return LocalMatrix(self.ring, rows)

    def conj_transpose(self) -> "LocalMatrix":
        return LocalMatrix(self.ring, [[self.rows[j][i].conj() for j in range(3)]
                                       for i in range(3)])

    def unitary_inv(self) -> "LocalMatrix":
        """Inverse of a group element: g^-1 = s g* s."""
        g = self.conj_transpose()
        # s flips both indices
        return LocalMatrix(self.ring, [[g.rows[2 - i][2 - j] for j in range(3)]
                                       for i in range(3)])

    def eq(self, other) -> bool:
        return all(self.rows[i][j].eq(other.rows[i][j])
                   for i in range(3) for j in range(3))

    def is_integral(self) -> bool:
        return all(e.is_integral() for r in self.rows for e in r)

    def in_group(self) -> bool:
        m = self.conj_transpose() * form_matrix(self.ring) * self
        return m.eq(form_matrix(self.ring))

    def is_identity(self) -> bool:
        return self.eq(identity(self.ring))

    def residues(self):
        return tuple(tuple(e.residue() for e in r) for r in self.rows)

    def has_K_prime_pattern(self) -> bool:
        """Valuation pattern of the second maximal compact subgroup."""
        bounds = ((0, 0, -1), (1, 0, 0), (1, 1, 0))
        for i in range(3):
            for j in range(3):
                e = self.rows[i][j]
                if e.coeffs and e.val < bounds[i][j]:
                    return False
                if not e.coeffs and not e.exact and e.val < bounds[i][j]:
                    raise PrecisionError("entry known only above its K'-bound")
        return True

    def __repr__(self):
        return "LocalMatrix[" + "; ".join(
            ", ".join(repr(e) for e in r) for r in self.rows) + "]"


def identity(ring: LaurentRing) -> LocalMatrix:
    o, z = ring.one, ring.zero
    return LocalMatrix(ring, [[o, z, z], [z, o, z], [z, z, o]])


def form_matrix(ring: LaurentRing) -> LocalMatrix:
    o, z = ring.one, ring.zero
    return LocalMatrix(ring, [[z, z, o], [z, o, z], [o, z, z]])


def diag(ring: LaurentRing, a: Laurent, b: Laurent, c: Laurent) -> LocalMatrix:
    z = ring.zero
    return LocalMatrix(ring, [[a, z, z], [z, b, z], [z, z, c]])


def unipotent(ring: LaurentRing, x: Laurent, y: Laurent, lower: bool = False) -> LocalMatrix:
    """u(x, y) (or the lower variant) subject to x conj(x) + y + conj(y) = 0."""
    c = x * x.conj() + y + y.conj()
    if c.coeffs:
        raise ValueError("unipotent constraint violated")
    o, z = ring.one, ring.zero
    if lower:
        return LocalMatrix(ring, [[o, z, z], [x, o, z], [y, -(x.conj()), o]])
    return LocalMatrix(ring, [[o, x, y], [z, o, -(x.conj())], [z, z, o]])


class LocalContext:
    """Distinguished elements and coset machinery over one tower."""

    def __init__(self, tower: FieldTower, precision: int = 12):
        self.tower = tower
        self.ring = LaurentRing(tower, precision)
        R, F = self.ring, tower.Fq2
        se = tower.sqrt_eps()
        self.sqrt_eps_code = se
        self.eps_code = F.mul(se, se)
        o, z = R.one, R.zero
        se_l = R.const(se)
        sei_l = R.const(F.inv(se))
        w = R.monomial(F.one, 1)
        wi = R.monomial(F.one, -1)
        self.s = form_matrix(R)
        self.s_prime = LocalMatrix(R, [[z, z, wi], [z, o, z], [w, z, z]])
        self.n_s = LocalMatrix(R, [[z, z, -sei_l], [z, o, z], [se_l, z, z]])
        self.n_s_prime = LocalMatrix(R, [[z, z, -(wi * sei_l)], [z, o, z], [w * se_l, z, z]])
        self.alpha = diag(R, wi, o, w)
        self.alpha_inv = diag(R, w, o, wi)

    # constraint solutions over the residue field: x conj(x) + y + conj(y) = 0

    def residue_constraint_pairs(self, nonzero_y=False):
        t, F = self.tower, self.tower.Fq2
        out = []
        for x in range(F.N):
            target = F.neg(t.norm(x)) if x else 0
            for y in range(F.N):
                if t.trace(y) == target:
                    if nonzero_y and y == 0:
                        continue
                    out.append((x, y))
        return out

    def trace_zero(self):
        t, F = self.tower, self.tower.Fq2
        return [y for y in range(F.N) if t.trace(y) == 0]

    def u_const(self, x_code: int, y_code: int, lower=False) -> LocalMatrix:
        R = self.ring
        return unipotent(R, R.const(x_code), R.const(y_code), lower=lower)

    # -- Bruhat cell over the full field: G = B u B n_s U (unique factorization)

    def field_bruhat(self, g: LocalMatrix):
        """Return ('B', g) or ('BnsU', b, x, y) with g = b n_s u(x, y)."""
        g31 = g[2, 0]
        if not g31.coeffs:
            if g31.exact:
                return ("B", g, None, None)
            raise PrecisionError("corner entry indistinguishable from zero")
        x = g[2, 1] / g31
        y = g[2, 2] / g31
        u = unipotent(self.ring, x, y)
        b = g * (self.n_s * u).unitary_inv()
        return ("BnsU", b, x, y)

    def rewrite_ns_u(self, x: Laurent, y: Laurent):
        """For non-integral (x, y): n_s u(x, y) = b1 * k1 with b1 upper
        triangular and k1 a lower unipotent in the pro-p radical."""
        R = self.ring
        F = self.tower.Fq2
        se = R.const(self.sqrt_eps_code)
        sei = R.const(F.inv(self.sqrt_eps_code))
        eps = R.const(self.eps_code)
        xp = x.conj() * se
        yp = -(y * eps)
        if not yp.coeffs or yp.valuation() >= 0:
            raise ValueError("rewrite applies to non-integral data only")
        ypi = yp.inverse()
        a1, a2 = -(xp.conj() * yp.conj().inverse()), ypi
        a3, a4 = -(xp.conj() * ypi), ypi
        t0 = diag(R, yp * sei, -(yp.conj() * ypi), -(yp.conj().inverse() * se))
        u12 = unipotent(R, a1, a2)
        # n_s t0 n_s^-1 stays in the torus
        t1 = self.n_s * t0 * self.n_s.unitary_inv()
        c1 = a3.conj() * se
        c2 = -(a4 * eps)
        eta = diag(R, -R.one, R.one, -R.one)  # n_s^2
        k1 = unipotent(R, -c1, c2, lower=True)
        b1 = u12 * t1 * eta
        return b1, k1

    def iwasawa_decompose(self, g: LocalMatrix):
        """g = b k with b upper triangular in the group and k integral.

        Returns (b, k, cell) with cell 'B' when k is in the pro-p radical of
        the standard parahoric and 'Bns' when k = n_s * (pro-p radical part).
        """
        if g.is_integral():
            return identity(self.ring), g, self._cell_of_integral(g)
        kind, b, x, y = self.field_bruhat(g)
        if kind == "B":
            return b, identity(self.ring), "B"
        if x.is_integral() and y.is_integral():
            u = unipotent(self.ring, x, y)
            return b, self.n_s * u, "Bns"
        b1, k1 = self.rewrite_ns_u(x, y)
        return b * b1, k1, "B"

    def _cell_of_integral(self, g: LocalMatrix):
        r = g.residues()
        if r[2][0] == 0:
            return "B"
        return "Bns"

    def coset_class(self, g: LocalMatrix) -> str:
        """Which of the two Iwasawa cells contains g."""
        _, _, cell = self.iwasawa_decompose(g)
        return cell

    def torus_data(self, b: LocalMatrix):
        """(n, u, d) with the (1,1)-entry = (unit of residue u) * w^n and the
        middle entry reducing to d; b must be upper triangular in the group."""
        d1 = b[0, 0]
        n = d1.valuation()
        u = d1.coeffs[0]
        d2 = b[1, 1]
        if d2.valuation() != 0:
            raise ValueError("middle entry of a torus part must be a unit")
        d = d2.coeffs[0]
        return n, u, d

    # -- double-coset representative families

    def family_ns(self):
        """u(x,y) n_s over all residue constraint pairs (the g I cosets)."""
        return [self.u_const(x, y) * self.n_s
                for (x, y) in self.residue_constraint_pairs()]

    def family_ns_prime(self):
        """u^-(0, w y) n_s' over trace-zero y."""
        R = self.ring
        out = []
        for y in self.trace_zero():
            u = unipotent(R, R.zero, R.monomial(y, 1) if y else R.zero, lower=True)
            out.append(u * self.n_s_prime)
        return out

    def _uy_levels(self, x_levels: int, y_levels: int, shift: bool):
        """Exact pairs (x, y) with x over o/p^x_levels, y over o/p^y_levels,
        subject to x conj(x) + y + conj(y) = 0 (shift=False) or
        w x conj(x) + y + conj(y) = 0 (shift=True), as constant expansions."""
        F, t = self.tower.Fq2, self.tower
        R = self.ring

        def x_candidates(levels):
            if levels == 0:
                yield ()
                return
            for head in x_candidates(levels - 1):
                for c in range(F.N):
                    yield head + (c,)

        out = []
        for xd in x_candidates(x_levels):
            x = Laurent(R, 0, xd, None)
            xx = x * x.conj()
            if shift:
                xx = R.monomial(F.one, 1) * xx
            # solve trace(y) = -xx levelwise over [0, y_levels)
            def y_candidates(level, acc):
                if level == y_levels:
                    out.append((x, Laurent(R, 0, acc, None)))
                    return
                target = F.neg(xx.coeff(level))
                # subtract contribution already fixed: none, traces are levelwise
                for c in range(F.N):
                    if t.trace(c) == target:
                        y_candidates(level + 1, acc + (c,))
            y_candidates(0, ())
        return out

    def family_alpha(self):
        """alpha u(x, y): x over residues, y over o/p^2 (the I g cosets)."""
        return [self.alpha * unipotent(self.ring, x, y)
                for (x, y) in self._uy_levels(1, 2, shift=False)]

    def family_alpha_inv(self):
        """alpha^-1 u^-(w x, w y): the mirrored family."""
        R, F = self.ring, self.tower.Fq2
        w = R.monomial(F.one, 1)
        out = []
        for (x, y) in self._uy_levels(1, 2, shift=True):
            out.append(self.alpha_inv * unipotent(R, w * x, w * y, lower=True))
        return out

    def family_ns_alpha(self, n: int):
        """Representatives for the length-(3+4n) (resp. -4n-3) double cosets."""
        if abs(n) > 2:
            raise ValueError("representative families tabulated for |n| <= 2 only")
        R, F = self.ring, self.tower.Fq2
        alpha_n = identity(R)
        step = self.alpha if n >= 0 else self.alpha_inv
        for _ in range(abs(n)):
            alpha_n = alpha_n * step
        base = self.n_s * alpha_n
        out = []
        if n >= 0:
            for (x, y) in self._uy_levels(n + 1, 2 * n + 1, shift=False):
                out.append(base * unipotent(R, x, y))
        else:
            w = R.monomial(F.one, 1)
            for (x, y) in self._uy_levels(-n - 1, -2 * n - 1, shift=True):
                out.append(base * unipotent(R, w * x, w * y, lower=True))
        return out

    def coset_family(self, label: str, n: int | None = None):
        if label == "InsI":
            return self.family_ns()
        if label == "InspI":
            return self.family_ns_prime()
        if label == "IaI":
            return self.family_alpha()
        if label == "IainvI":
            return self.family_alpha_inv()
        if label == "InsanI":
            if n is None:
                raise ValueError("power n required")
            return self.family_ns_alpha(n)
        raise ValueError(f"unknown coset family {label!r}")

    # -- membership tests at the pro-p level

    def in_pro_p_radical(self, g: LocalMatrix) -> bool:
        """Membership in the pro-p radical of the edge stabilizer."""
        if not g.is_integral():
            return False
        r = g.residues()
        F = self.tower.Fq2
        return (r[1][0] == 0 and r[2][0] == 0 and r[2][1] == 0
                and r[0][0] == F.one and r[1][1] == F.one and r[2][2] == F.one)

    def in_iwahori(self, g: LocalMatrix) -> bool:
        if not g.is_integral():
            return False
        r = g.residues()
        return r[1][0] == 0 and r[2][0] == 0 and r[2][1] == 0
