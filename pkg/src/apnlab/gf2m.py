"""Arithmetic in GF(2^m), 1 <= m <= 24.

Field elements are m-bit ints in the polynomial basis: bit i is the
coefficient of X^i, reduction is modulo an explicit irreducible polynomial.
Binary polynomials (the modulus, minimal polynomials, ...) use the same
packing with no degree limit.
"""

from __future__ import annotations

import numpy as np

from . import bits

MAX_M = 24
_LOG_TABLE_MAX_M = 20


# ---------------------------------------------------------------- F_2[X] ops

def poly_degree(p: int) -> int:
    return p.bit_length() - 1


def poly_mulmod(a: int, b: int, mod: int) -> int:
    """a*b mod `mod`, all packed binary polynomials."""
    deg = poly_degree(mod)
    res = 0
    while b:
        if b & 1:
            res ^= a
        b >>= 1
        a <<= 1
        if a >> deg & 1:
            a ^= mod
    return res


def poly_mod(a: int, mod: int) -> int:
    dm = poly_degree(mod)
    da = poly_degree(a)
    while da >= dm:
        a ^= mod << (da - dm)
        da = poly_degree(a)
    return a


def poly_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, poly_mod(a, b)
    return a


def irreducible_factor_degree(p: int) -> int | None:
    """Degree of the smallest-degree nontrivial factor of p, or None if p is
    irreducible.  Uses gcd(X^(2^k) + X, p) sweeps for k up to deg(p)/2."""
    m = poly_degree(p)
    if m < 1:
        return 0
    if p & 1 == 0:  # divisible by X
        return 1 if m > 1 else None
    x = 2  # the polynomial X
    xq = x
    for k in range(1, m // 2 + 1):
        xq = poly_mulmod(xq, xq, p)  # X^(2^k) mod p
        g = poly_gcd(p, xq ^ x)
        if g != 1:
            return k
    return None


def default_modulus(m: int) -> int:
    """Smallest irreducible degree-m polynomial (as an integer, constant
    term forced to 1)."""
    for p in range((1 << m) | 1, 1 << (m + 1), 2):
        if irreducible_factor_degree(p) is None:
            return p
    raise RuntimeError(f"no irreducible polynomial of degree {m} found")  # unreachable


# ---------------------------------------------------------------- the field

class FieldSpec:
    """GF(2^m) with a validated irreducible modulus.

    Immutable once constructed.  All element operations are pure functions of
    (field, operands).  Prefer make_field() over calling this directly.
    """

    __slots__ = ("m", "modulus", "order", "_exp", "_log")

    def __init__(self, m: int, modulus: int):
        if not 1 <= m <= MAX_M:
            raise ValueError(f"m={m} out of supported range 1..{MAX_M}")
        if poly_degree(modulus) != m:
            raise ValueError(
                f"modulus {modulus:#x} has degree {poly_degree(modulus)}, expected {m}")
        if not modulus & 1:
            raise ValueError(f"modulus {modulus:#x} has zero constant term, hence the factor X")
        k = irreducible_factor_degree(modulus)
        if k is not None:
            raise ValueError(
                f"modulus {modulus:#x} is reducible: it has a factor of degree {k}")
        self.m = m
        self.modulus = modulus
        self.order = 1 << m
        self._exp = None
        self._log = None

    def __repr__(self):
        return f"FieldSpec(m={self.m}, modulus={self.modulus:#x})"

    def __eq__(self, other):
        return (isinstance(other, FieldSpec)
                and self.m == other.m and self.modulus == other.modulus)

    def __hash__(self):
        return hash((self.m, self.modulus))

    # -- arithmetic

    def add(self, a: int, b: int) -> int:
        return a ^ b

    def mul(self, a: int, b: int) -> int:
        if self._log is not None:
            if a == 0 or b == 0:
                return 0
            return int(self._exp[self._log[a] + self._log[b]])
        m, mod = self.m, self.modulus
        res = 0
        while b:
            if b & 1:
                res ^= a
            b >>= 1
            a <<= 1
            if a >> m & 1:
                a ^= mod
        return res

    def sq(self, a: int) -> int:
        return self.mul(a, a)

    def pow(self, a: int, k: int) -> int:
        if a == 0:
            if k < 0:
                raise ZeroDivisionError("0 has no negative powers")
            return 0 if k else 1
        k %= self.order - 1
        if self._log is not None:
            return int(self._exp[(self._log[a] * k) % (self.order - 1)])
        res, base = 1, a
        while k:
            if k & 1:
                res = self.mul(res, base)
            base = self.mul(base, base)
            k >>= 1
        return res

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 is not invertible")
        return self.pow(a, self.order - 2)

    def trace(self, a: int) -> int:
        """Absolute trace onto F_2, returned as 0 or 1."""
        t = a
        x = a
        for _ in range(self.m - 1):
            x = self.sq(x)
            t ^= x
        return t

    def relative_trace(self, a: int, k: int) -> int:
        """Trace onto the subfield GF(2^k): sum of a^(2^(k*i)).  k must divide m."""
        if self.m % k:
            raise ValueError(f"k={k} does not divide m={self.m}")
        t = 0
        x = a
        for _ in range(self.m // k):
            t ^= x
            for _ in range(k):
                x = self.sq(x)
        return t

    def is_seventh_power(self, u: int) -> bool:
        """Whether u is a 7th power in the field (0 counts; everything is a
        7th power unless 7 divides 2^m - 1, i.e. unless 3 | m)."""
        q1 = self.order - 1
        if u == 0 or q1 % 7:
            return True
        return self.pow(u, q1 // 7) == 1

    def seventh_root(self, u: int) -> int:
        """Some x with x^7 = u; raises ValueError if none exists."""
        if u == 0:
            return 0
        q1 = self.order - 1
        if q1 % 7:
            # gcd(7, q1) = 1: x = u^(7^-1 mod q1)
            return self.pow(u, pow(7, -1, q1))
        for x in range(1, self.order):
            if self.pow(x, 7) == u:
                return x
        raise ValueError(f"{u:#x} is not a seventh power")

    # -- tables (for the vectorized/jitted kernels)

    def _build_tables(self):
        if self.m > _LOG_TABLE_MAX_M:
            raise ValueError(f"log/exp tables unsupported above m={_LOG_TABLE_MAX_M}")
        q1 = self.order - 1
        exp = np.zeros(2 * q1, dtype=np.int64)
        log = np.zeros(self.order, dtype=np.int64)
        g = self._find_generator()
        x = 1
        for i in range(q1):
            exp[i] = x
            log[x] = i
            x = self.mul(g, x)
        exp[q1:] = exp[:q1]
        log[0] = -1
        self._exp, self._log = exp, log

    def _find_generator(self) -> int:
        q1 = self.order - 1
        if q1 == 1:
            return 1
        fac = _prime_factors(q1)
        for g in range(2, self.order):
            if all(self.pow(g, q1 // p) != 1 for p in fac):
                return g
        raise RuntimeError("no multiplicative generator found")  # unreachable

    @property
    def exp_table(self) -> np.ndarray:
        if self._exp is None:
            self._build_tables()
        return self._exp

    @property
    def log_table(self) -> np.ndarray:
        if self._log is None:
            self._build_tables()
        return self._log

    def mul_vec(self, a, b):
        """Elementwise product of arrays (or array and scalar) of elements."""
        exp, log = self.exp_table, self.log_table
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        out = exp[log[a] + log[b]]
        return np.where((a == 0) | (b == 0), 0, out)


def _prime_factors(n: int) -> list[int]:
    fac = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            fac.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        fac.append(n)
    return fac


_field_cache: dict[tuple[int, int], FieldSpec] = {}


def make_field(m: int, modulus: int | str = "default") -> FieldSpec:
    """GF(2^m); modulus is a packed polynomial int or "default" (the
    lexicographically smallest irreducible of degree m)."""
    if not 1 <= m <= MAX_M:
        raise ValueError(f"m={m} out of supported range 1..{MAX_M}")
    if modulus == "default":
        modulus = default_modulus(m)
    key = (m, modulus)
    f = _field_cache.get(key)
    if f is None:
        f = _field_cache[key] = FieldSpec(m, modulus)
    return f


# ------------------------------------------------------- polynomials over GF

def poly_eval(coeffs, field: FieldSpec, x: int) -> int:
    """Evaluate sum coeffs[i] * x^i (coeffs low-to-high, field elements)."""
    acc = 0
    for c in reversed(coeffs):
        acc = field.mul(acc, x) ^ c
    return acc


def trace_dual_rows(field: FieldSpec) -> list[int]:
    """Rows of the bit-matrix carrying a mask a to the element s with
    parity(a & x) == trace(s * x) for all x: the inverse of the trace Gram
    matrix G[i][j] = trace(X^i * X^j) of the polynomial basis."""
    gram = []
    for i in range(field.m):
        row = 0
        for j in range(field.m):
            if field.trace(field.mul(1 << i, 1 << j)):
                row |= 1 << j
        gram.append(row)
    return bits.invert(gram, field.m)


def find_roots(coeffs, field: FieldSpec) -> list[int]:
    """All roots in the field of a nonzero polynomial, ascending.  Exhaustive
    scan; fine for the field sizes this package targets."""
    if not any(coeffs):
        raise ValueError("zero polynomial has every element as a root")
    return [x for x in range(field.order) if poly_eval(coeffs, field, x) == 0]


def minimal_polynomial(u: int, field: FieldSpec) -> int:
    """Minimal polynomial of u over F_2, packed into an int."""
    orbit = {u}
    x = field.sq(u)
    while x not in orbit:
        orbit.add(x)
        x = field.sq(x)
    # product of (X + c) over the conjugacy orbit, coefficients in the field
    poly = [1]
    for c in sorted(orbit):
        poly = _poly_times_linear(poly, c, field)
    out = 0
    for i, c in enumerate(poly):
        if c not in (0, 1):
            raise AssertionError("minimal polynomial has a coefficient outside F_2")
        out |= c << i
    return out


def _poly_times_linear(poly, c, field):
    # poly(X) * (X + c)
    out = [0] * (len(poly) + 1)
    for i, p in enumerate(poly):
        out[i + 1] ^= p
        out[i] ^= field.mul(p, c)
    return out


def element_from_minpoly(field: FieldSpec, poly_bits: int) -> int:
    """Smallest field element whose minimal polynomial is poly_bits."""
    deg = poly_degree(poly_bits)
    coeffs = [(poly_bits >> i) & 1 for i in range(deg + 1)]
    for x in range(field.order):
        if poly_eval(coeffs, field, x) == 0 and minimal_polynomial(x, field) == poly_bits:
            return x
    raise ValueError(f"polynomial {poly_bits:#b} has no root with that minimal polynomial")
