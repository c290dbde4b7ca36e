"""Exact finite-field arithmetic and the coefficient-field tower.

Two field implementations share one scalar interface: ``SmallField`` keeps
every element as an integer code backed by Zech-logarithm tables (fast, and
the only kind the vectorized linear algebra accepts), ``PolyExtField`` keeps
coefficient tuples for fields too large to tabulate (e.g. GF(5^12)).

A ``FieldTower`` bundles the residue field GF(q^2) with its conjugation
x -> x^q, a coefficient field containing enough roots of unity for every
character of the finite torus H = GF(q^2)^x x U(1), and the multiplicative
embedding ``iota`` matching the two.  Torus characters are integer pairs
(r, c) evaluated through ``iota``; they are never stored as value tables.
"""

from __future__ import annotations

import numpy as np


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1 if d == 2 else 2
    return True


def factorize(n: int) -> dict[int, int]:
    """Prime factorization by trial division; fine for n up to ~10^10."""
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def multiplicative_order(a: int, modulus: int) -> int:
    if modulus <= 1:
        raise ValueError("modulus must exceed 1")
    import math
    if math.gcd(a, modulus) != 1:
        raise ValueError(f"{a} is not a unit mod {modulus}")
    k, x = 1, a % modulus
    while x != 1:
        x = (x * a) % modulus
        k += 1
    return k


# -- polynomial helpers over the prime field (coefficient lists, low degree first)

def _poly_trim(c):
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_mulmod(a, b, mod, ell):
    res = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                res[i + j] = (res[i + j] + x * y) % ell
    return _poly_rem(res, mod, ell)


def _poly_rem(a, mod, ell):
    a = _poly_trim(list(a))
    dm = len(mod) - 1
    inv_lead = pow(mod[-1], -1, ell)
    while a and len(a) - 1 >= dm:
        shift = len(a) - 1 - dm
        coef = (a[-1] * inv_lead) % ell
        if coef:
            for i, mco in enumerate(mod):
                a[i + shift] = (a[i + shift] - coef * mco) % ell
        a.pop()
        _poly_trim(a)
    return a


def _poly_powmod(a, e, mod, ell):
    result = [1]
    base = _poly_rem(a, mod, ell)
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, mod, ell)
        base = _poly_mulmod(base, base, mod, ell)
        e >>= 1
    return result


def _poly_gcd(a, b, ell):
    a, b = list(a), list(b)
    _poly_trim(a), _poly_trim(b)
    while b:
        a = _poly_mod_full(a, b, ell)
        a, b = b, a
    return a


def _poly_mod_full(a, b, ell):
    a = list(a)
    inv_lead = pow(b[-1], -1, ell)
    while a and len(a) >= len(b):
        shift = len(a) - len(b)
        coef = (a[-1] * inv_lead) % ell
        for i, bco in enumerate(b):
            a[i + shift] = (a[i + shift] - coef * bco) % ell
        _poly_trim(a)
    return a


def poly_is_irreducible(coeffs: list[int], ell: int) -> bool:
    """Rabin test: x^(ell^m) = x mod f, and no earlier coincidence at m/r."""
    m = len(coeffs) - 1
    if m < 1 or coeffs[-1] == 0:
        return False
    if m == 1:
        return True
    if coeffs[0] == 0:
        return False
    x = [0, 1]
    xq = _poly_powmod(x, ell ** m, coeffs, ell)
    diff = [(a - b) % ell for a, b in zip(xq + [0] * 2, x + [0] * len(xq))]
    if _poly_trim(list(diff)):
        return False
    for r in factorize(m):
        xqr = _poly_powmod(x, ell ** (m // r), coeffs, ell)
        diff = [(a - b) % ell for a, b in zip(xqr + [0] * 2, x + [0] * len(xqr))]
        g = _poly_gcd(diff, coeffs, ell)
        if len(g) - 1 > 0:
            return False
    return True


def scan_modulus(ell: int, m: int, seed: int = 0) -> tuple[int, ...]:
    """First irreducible monic polynomial of degree m in a lexicographic scan.

    The scan starts at the point encoded by ``seed`` (base-ell digits give the
    low coefficients) and wraps, so the choice is deterministic given seed.
    """
    if m == 1:
        return (0, 1)
    total = ell ** m
    start = seed % total
    for k in range(total):
        enc = (start + k) % total
        coeffs = []
        e = enc
        for _ in range(m):
            coeffs.append(e % ell)
            e //= ell
        coeffs.append(1)
        if poly_is_irreducible(coeffs, ell):
            return tuple(coeffs)
    raise ValueError(f"no irreducible polynomial of degree {m} over GF({ell})")


class SmallField:
    """GF(ell^m) with integer element codes and Zech-log addition tables.

    Code 0 is zero; code k (1 <= k <= N-1) is g^(k-1) for the chosen
    multiplicative generator g.  Multiplication is exponent arithmetic,
    addition goes through the Zech table, both vectorize over numpy arrays.
    """

    def __init__(self, ell: int, m: int, seed: int = 0, modulus=None):
        if not is_prime(ell):
            raise ValueError(f"characteristic {ell} is not prime")
        self.ell = ell
        self.m = m
        self.N = ell ** m
        if self.N > 1 << 22:
            raise ValueError(f"field of size {self.N} too large to tabulate")
        self.modulus = tuple(modulus) if modulus is not None else scan_modulus(ell, m, seed)
        if len(self.modulus) != m + 1 or not poly_is_irreducible(list(self.modulus), ell):
            raise ValueError("modulus must be irreducible of the requested degree")
        self._build_tables()

    def _build_tables(self):
        ell, m, N = self.ell, self.m, self.N
        mod = list(self.modulus)

        def enc(poly):
            e = 0
            for c in reversed(poly + [0] * (m - len(poly))):
                e = e * ell + c
            return e

        # pick the first primitive element in encoding order
        fac = factorize(N - 1)
        gen_poly = None
        for cand in range(1, N):
            poly = []
            e = cand
            for _ in range(m):
                poly.append(e % ell)
                e //= ell
            _poly_trim(poly)
            ok = all(
                _poly_trim(list(_poly_powmod(poly, (N - 1) // r, mod, ell))) != [1]
                for r in fac
            ) if N > 2 else True
            if _poly_trim(list(_poly_powmod(poly, N - 1, mod, ell))) == [1] and ok:
                gen_poly = poly
                break
        if gen_poly is None:
            raise RuntimeError("no generator found")
        self.generator_coeffs = tuple(gen_poly + [0] * (m - len(gen_poly)))

        # exhaustive power table: encoding -> code and back
        enc2code = np.zeros(N, dtype=np.int64)
        code2enc = np.zeros(N, dtype=np.int64)
        cur = [1]
        for k in range(1, N):
            e = enc(list(cur))
            enc2code[e] = k
            code2enc[k] = e
            cur = _poly_mulmod(cur, gen_poly, mod, ell)
        if enc(list(cur)) != 1:
            raise RuntimeError("generator order mismatch")
        self._enc2code = enc2code
        self._code2enc = code2enc

        # Zech table: zech[d] = code of 1 + g^d (0 when the sum vanishes)
        zech = np.zeros(N - 1, dtype=np.int64)
        for d in range(N - 1):
            e = code2enc[d + 1]
            e1 = e + 1 if (e % ell) != ell - 1 else e - (ell - 1)
            zech[d] = enc2code[e1]
        self.zech = zech
        self.one = 1
        self.zero = 0
        self.neg_one = 1 if ell == 2 else ((N - 1) // 2 % (N - 1)) + 1

    # -- scalar ops on codes

    def add(self, a: int, b: int) -> int:
        if a == 0:
            return b
        if b == 0:
            return a
        i, j = a - 1, b - 1
        d = (j - i) % (self.N - 1)
        z = self.zech[d]
        if z == 0:
            return 0
        return (i + z - 1) % (self.N - 1) + 1

    def neg(self, a: int) -> int:
        return self.mul(a, self.neg_one)

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return (a - 1 + b - 1) % (self.N - 1) + 1

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return (-(a - 1)) % (self.N - 1) + 1

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise ZeroDivisionError
            return 0 if e else 1
        return (a - 1) * e % (self.N - 1) + 1

    def from_int(self, n: int) -> int:
        n %= self.ell
        code = 0
        for _ in range(n):
            code = self.add(code, 1)
        return code

    def frobenius(self, a: int) -> int:
        return self.pow(a, self.ell)

    def dlog(self, a: int) -> int:
        if a == 0:
            raise ValueError("dlog of zero")
        return a - 1

    def element_from_power(self, k: int) -> int:
        return k % (self.N - 1) + 1

    def coeffs(self, a: int) -> tuple[int, ...]:
        e = int(self._code2enc[a]) if a else 0
        out = []
        for _ in range(self.m):
            out.append(e % self.ell)
            e //= self.ell
        return tuple(out)

    def elements(self):
        return range(self.N)

    # -- vectorized ops on numpy code arrays (int64)

    def addv(self, a, b):
        a = np.asarray(a)
        b = np.asarray(b)
        az = a == 0
        bz = b == 0
        d = (b - a) % (self.N - 1)
        z = self.zech[np.where(az | bz, 0, d)]
        out = np.where(z == 0, 0, (a - 1 + np.where(z == 0, 1, z) - 1) % (self.N - 1) + 1)
        out = np.where(az, b, out)
        out = np.where(bz, a, out)
        return out

    def mulv(self, a, b):
        a = np.asarray(a)
        b = np.asarray(b)
        z = (a == 0) | (b == 0)
        return np.where(z, 0, (a - 1 + b - 1) % (self.N - 1) + 1)

    def negv(self, a):
        a = np.asarray(a)
        return np.where(a == 0, 0, (a - 1 + self.neg_one - 1) % (self.N - 1) + 1)

    def invv(self, a):
        a = np.asarray(a)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero")
        return (-(a - 1)) % (self.N - 1) + 1

    def scalev(self, c, a):
        if c == 0:
            return np.zeros_like(np.asarray(a))
        a = np.asarray(a)
        return np.where(a == 0, 0, (a - 1 + c - 1) % (self.N - 1) + 1)

    def describe(self) -> dict:
        return {
            "kind": "small",
            "char": self.ell,
            "degree": self.m,
            "modulus": list(self.modulus),
            "generator": list(self.generator_coeffs),
        }

    def __repr__(self):
        return f"SmallField(GF({self.ell}^{self.m}))"


class PolyExtField:
    """GF(ell^m) with coefficient-tuple elements, for fields too big to tabulate."""

    def __init__(self, ell: int, m: int, seed: int = 0, modulus=None):
        if not is_prime(ell):
            raise ValueError(f"characteristic {ell} is not prime")
        self.ell = ell
        self.m = m
        self.N = ell ** m
        self.modulus = tuple(modulus) if modulus is not None else scan_modulus(ell, m, seed)
        self.zero = (0,) * m
        self.one = (1,) + (0,) * (m - 1)

    def _t(self, poly) -> tuple[int, ...]:
        poly = list(poly) + [0] * self.m
        return tuple(poly[: self.m])

    def add(self, a, b):
        return tuple((x + y) % self.ell for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple((x - y) % self.ell for x, y in zip(a, b))

    def neg(self, a):
        return tuple((-x) % self.ell for x in a)

    def mul(self, a, b):
        return self._t(_poly_mulmod(list(a), list(b), list(self.modulus), self.ell))

    def inv(self, a):
        if a == self.zero:
            raise ZeroDivisionError("inverse of zero")
        return self.pow(a, self.N - 2)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e):
        if e < 0:
            return self.pow(self.inv(a), -e)
        return self._t(_poly_powmod(list(a), e, list(self.modulus), self.ell))

    def from_int(self, n):
        return (n % self.ell,) + (0,) * (self.m - 1)

    def frobenius(self, a):
        return self.pow(a, self.ell)

    def coeffs(self, a):
        return tuple(a)

    def order_of(self, a) -> int:
        fac = factorize(self.N - 1)
        order = self.N - 1
        for r, k in fac.items():
            for _ in range(k):
                if self.pow(a, order // r) == self.one:
                    order //= r
                else:
                    break
        return order

    def element_of_order(self, n: int):
        """First element (in encoding order) of exact multiplicative order n."""
        if (self.N - 1) % n:
            raise ValueError(f"no elements of order {n} in GF({self.ell}^{self.m})")
        for cand in range(2, min(self.N, 10000)):
            poly = []
            e = cand
            for _ in range(self.m):
                poly.append(e % self.ell)
                e //= self.ell
            x = self.pow(self._t(poly), (self.N - 1) // n)
            if x != self.one and self.order_of(x) == n:
                return x
        raise RuntimeError("no element of the requested order found in scan range")

    def describe(self) -> dict:
        return {
            "kind": "poly",
            "char": self.ell,
            "degree": self.m,
            "modulus": list(self.modulus),
        }

    def __repr__(self):
        return f"PolyExtField(GF({self.ell}^{self.m}))"


class FieldTower:
    """Residue field GF(q^2) plus a coefficient field with all H-characters.

    H = GF(q^2)^x x U(1) has order (q^2-1)(q+1); the coefficient field
    contains a root of unity Omega of order q^2-1 and the embedding
    iota: GF(q^2)^x -> C^x sends the residue generator gamma to Omega.
    U(1) characters go through iota restricted along U(1) < GF(q^2)^x.
    """

    def __init__(self, p: int, f: int, ell: int | None = None, seed: int = 0,
                 coeff_deg: int | None = None):
        if p == 2:
            raise ValueError("odd residual characteristic required")
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.f = f
        self.q = p ** f
        self.qq = self.q * self.q
        ell = p if ell is None else ell
        self.ell = ell
        H_order = (self.qq - 1) * (self.q + 1)
        self.H_order = H_order
        self.H_exponent = _lcm(self.qq - 1, self.q + 1)
        if ell != p and H_order % ell == 0:
            raise ValueError(f"coefficient characteristic {ell} divides |H| = {H_order}")
        if coeff_deg is None:
            m = multiplicative_order(ell, H_order)
        else:
            m = coeff_deg
            if (ell ** m - 1) % self.H_exponent:
                raise ValueError(
                    f"GF({ell}^{m}) lacks roots of unity of order {self.H_exponent}")
        self.coeff_deg = m
        self.seed = seed

        self.Fq2 = SmallField(p, 2 * f, seed=seed)
        if ell ** m <= 1 << 22:
            self.C = SmallField(ell, m, seed=seed)
            omega = self.C.element_from_power((self.C.N - 1) // (self.qq - 1))
        else:
            self.C = PolyExtField(ell, m, seed=seed)
            omega = self.C.element_of_order(self.qq - 1)
        self.Omega = omega  # image of the residue generator, order q^2-1

    # conjugation and norms on the residue field

    def conj(self, a: int) -> int:
        return self.Fq2.pow(a, self.q)

    def in_Fq(self, a: int) -> bool:
        return self.conj(a) == a

    def trace(self, a: int) -> int:
        return self.Fq2.add(a, self.conj(a))

    def norm(self, a: int) -> int:
        return self.Fq2.pow(a, self.q + 1)

    def iota(self, a: int):
        """Multiplicative embedding GF(q^2) -> C (0 -> 0)."""
        if a == 0:
            return self.C.zero
        return self.C.pow(self.Omega, self.Fq2.dlog(a))

    def nonsquare_unit(self) -> int:
        """The fixed nonsquare of GF(q): norm of the residue generator is a
        GF(q)-generator, so gamma^(q+1) is a nonsquare there iff exponent odd."""
        g_q = self.Fq2.pow(self.Fq2.element_from_power(1), self.q + 1)
        # g_q generates GF(q)^x; it is a nonsquare in GF(q) since q-1 is even
        return g_q

    def sqrt_eps(self) -> int:
        """A square root in GF(q^2) of the fixed nonsquare unit of GF(q)."""
        eps = self.nonsquare_unit()
        k = self.Fq2.dlog(eps)
        if k % 2:
            raise RuntimeError("nonsquare of GF(q) must be a square in GF(q^2)")
        return self.Fq2.element_from_power(k // 2)

    def char(self, r: int, c: int) -> "TorusChar":
        return TorusChar(self, r, c)

    def all_chars(self):
        return [TorusChar(self, r, c)
                for r in range(self.qq - 1) for c in range(self.q + 1)]

    def describe(self) -> dict:
        return {
            "p": self.p,
            "f": self.f,
            "q": self.q,
            "coeff_char": self.ell,
            "coeff_deg": self.coeff_deg,
            "seed": self.seed,
            "residue_field": self.Fq2.describe(),
            "coeff_field": self.C.describe(),
            "H_order": self.H_order,
        }

    def __repr__(self):
        return f"FieldTower(q={self.q}, C=GF({self.ell}^{self.coeff_deg}))"


def _lcm(a, b):
    import math
    return a * b // math.gcd(a, b)


class TorusChar:
    """Character of H = GF(q^2)^x x U(1), stored by the integer pair (r, c).

    The value on the torus element diag(a, delta, conj(a)^-1) is
    iota(a)^r * iota(delta)^c.  H elements are exponent pairs (i, j):
    a = gamma^i and delta = gamma^((q-1) j).
    """

    def __init__(self, tower: FieldTower, r: int, c: int):
        self.tower = tower
        self.r = r % (tower.qq - 1)
        self.c = c % (tower.q + 1)

    def key(self) -> tuple[int, int]:
        return (self.r, self.c)

    def value(self, h: tuple[int, int]):
        """Value on h = (i, j), i.e. a = gamma^i, delta = gamma^((q-1)j)."""
        t = self.tower
        i, j = h
        e = (i * self.r + (t.q - 1) * j * self.c) % (t.qq - 1)
        return t.C.pow(t.Omega, e)

    def value_on_matrix_entries(self, a_code: int, delta_code: int):
        """Value from residue-field codes of a and delta."""
        t = self.tower
        i = t.Fq2.dlog(a_code)
        jd = t.Fq2.dlog(delta_code) if delta_code != t.Fq2.one else 0
        if jd % (t.q - 1):
            raise ValueError("second torus entry is not norm-one")
        return self.value((i, jd // (t.q - 1)))

    # classification of the character relative to the reflection action

    def zeta_exp(self) -> int:
        """Exponent r_d with zeta(a) = a^(r_d) in the Gamma-side bookkeeping."""
        t = self.tower
        return (self.r + self.c * (t.q - 1)) % (t.qq - 1)

    def is_det_type(self) -> bool:
        return self.zeta_exp() == 0

    def is_s_fixed(self) -> bool:
        return self.r % (self.tower.q - 1) == 0

    def case(self) -> str:
        if self.is_det_type():
            return "trivial"
        if self.is_s_fixed():
            return "hybrid"
        return "regular"

    def s_twist(self) -> "TorusChar":
        return TorusChar(self.tower, -self.tower.q * self.r, self.c)

    def zeta_minus_one(self):
        """zeta(-1) as a coefficient-field element (always +-1)."""
        t = self.tower
        e = self.zeta_exp() * ((t.qq - 1) // 2)
        return t.C.pow(t.Omega, e % (t.qq - 1))

    def orbit_key(self) -> tuple[int, int]:
        rs = self.s_twist().r
        return (min(self.r, rs), self.c)

    def __eq__(self, other):
        return isinstance(other, TorusChar) and self.key() == other.key() \
            and self.tower is other.tower

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"TorusChar(r={self.r}, c={self.c}, {self.case()})"


def h_elements(tower: FieldTower):
    """All of H as exponent pairs (i, j)."""
    return [(i, j) for i in range(tower.qq - 1) for j in range(tower.q + 1)]


def h_mul(tower: FieldTower, h1, h2):
    return ((h1[0] + h2[0]) % (tower.qq - 1), (h1[1] + h2[1]) % (tower.q + 1))


def h_inv(tower: FieldTower, h):
    return ((-h[0]) % (tower.qq - 1), (-h[1]) % (tower.q + 1))


def h_s_conj(tower: FieldTower, h):
    """Image of h under conjugation by the length-3 reflection lift."""
    return ((-tower.q * h[0]) % (tower.qq - 1), h[1])


def build_tower(p: int, f: int, ell: int | None = None, seed: int = 0,
                coeff_deg: int | None = None) -> FieldTower:
    """Construct the tower; ell defaults to p (the defining-characteristic track)."""
    return FieldTower(p, f, ell=ell, seed=seed, coeff_deg=coeff_deg)


def smallest_split_prime(q: int) -> int:
    """Smallest prime l with l = 1 mod |H|, for the prime-to-p track."""
    H = (q * q - 1) * (q + 1)
    n = H + 1
    while True:
        if is_prime(n):
            return n
        n += H
