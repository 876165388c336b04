"""Exact arithmetic for the binary fields GF(2^k), k <= 16.

Elements are plain ints in [0, 2^k), read as polynomials over GF(2)
modulo a fixed irreducible polynomial.  The modulus for each k is the
lexicographically smallest irreducible of that degree, so element
encodings are reproducible across runs and machines.

Multiplication uses exp/log tables built lazily per field (at most
2^16 entries).  Addition is xor.  Squaring is injective, so every
element has a unique square root.
"""

from __future__ import annotations

# Lexicographically smallest irreducible polynomial of degree k over GF(2),
# encoded as an int with bit k set.  Verified by tests/test_fields.py.
IRREDUCIBLE = {
    1: 0x2,
    2: 0x7,
    3: 0xB,
    4: 0x13,
    5: 0x25,
    6: 0x43,
    7: 0x83,
    8: 0x11B,
    9: 0x203,
    10: 0x409,
    11: 0x805,
    12: 0x1009,
    13: 0x201B,
    14: 0x4021,
    15: 0x8003,
    16: 0x1002B,
}

MAX_K = 16


def poly_mulmod(a: int, b: int, modulus: int, k: int) -> int:
    """Multiply bit-polynomials a, b modulo an irreducible of degree k."""
    r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if (a >> k) & 1:
            a ^= modulus
    return r


class GF2k:
    """The field GF(2^k) for a fixed k, operating on int-encoded elements."""

    _cache: dict[int, "GF2k"] = {}

    def __init__(self, k: int):
        if not 1 <= k <= MAX_K:
            raise ValueError(f"GF(2^k) supported for 1 <= k <= {MAX_K}, got k={k}")
        self.k = k
        self.order = 1 << k
        self.modulus = IRREDUCIBLE[k]
        self._exp: list[int] | None = None
        self._log: list[int] | None = None
        self._solve_cols: list[int] | None = None

    @classmethod
    def get(cls, k: int) -> "GF2k":
        f = cls._cache.get(k)
        if f is None:
            f = cls(k)
            cls._cache[k] = f
        return f

    def _build_tables(self) -> None:
        # Find a multiplicative generator by trial; the group is cyclic of
        # order 2^k - 1.
        n = self.order - 1
        factors = []
        m = n
        d = 2
        while d * d <= m:
            if m % d == 0:
                factors.append(d)
                while m % d == 0:
                    m //= d
            d += 1
        if m > 1:
            factors.append(m)
        g = 2 if self.k > 1 else 1
        while True:
            if all(self._pow_raw(g, n // p) != 1 for p in factors) or n == 1:
                break
            g += 1
        exp = [0] * (2 * n)
        log = [0] * self.order
        v = 1
        for i in range(n):
            exp[i] = v
            exp[i + n] = v
            log[v] = i
            v = poly_mulmod(v, g, self.modulus, self.k)
        assert v == 1
        self._exp, self._log = exp, log

    def _pow_raw(self, a: int, e: int) -> int:
        r = 1
        while e:
            if e & 1:
                r = poly_mulmod(r, a, self.modulus, self.k)
            a = poly_mulmod(a, a, self.modulus, self.k)
            e >>= 1
        return r

    def add(self, a: int, b: int) -> int:
        return a ^ b

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if a == 1:
            return b
        if b == 1:
            return a
        if self._exp is None:
            self._build_tables()
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in GF(2^k)")
        if a == 1:
            return 1
        if self._exp is None:
            self._build_tables()
        return self._exp[self.order - 1 - self._log[a]]

    def sqrt(self, a: int) -> int:
        """Unique square root; squaring is a bijection in characteristic 2."""
        return self._pow_raw(a, 1 << (self.k - 1))

    def trace(self, a: int) -> int:
        """Absolute trace to GF(2)."""
        t = 0
        x = a
        for _ in range(self.k):
            t ^= x
            x = poly_mulmod(x, x, self.modulus, self.k)
        return t & 1 if self.k == 1 else self._trace_fold(t)

    @staticmethod
    def _trace_fold(t: int) -> int:
        # After summing the Frobenius orbit the result lies in GF(2) = {0,1}.
        assert t in (0, 1)
        return t

    def artin_schreier(self, c: int) -> int | None:
        """Solve x^2 + x = c; None when the trace of c is 1."""
        if self.trace(c) != 0:
            return None
        if self._solve_cols is None:
            # Column j of the GF(2)-linear map x -> x^2 + x.
            cols = []
            for j in range(self.k):
                b = 1 << j
                cols.append(poly_mulmod(b, b, self.modulus, self.k) ^ b)
            self._solve_cols = cols
        # Gaussian elimination over GF(2) on the k x k system.
        cols = self._solve_cols
        rows = [0] * self.k
        for j, col in enumerate(cols):
            for i in range(self.k):
                if (col >> i) & 1:
                    rows[i] |= 1 << j
        aug = [rows[i] | (((c >> i) & 1) << self.k) for i in range(self.k)]
        piv = []
        r = 0
        for j in range(self.k):
            sel = None
            for i in range(r, self.k):
                if (aug[i] >> j) & 1:
                    sel = i
                    break
            if sel is None:
                continue
            aug[r], aug[sel] = aug[sel], aug[r]
            for i in range(self.k):
                if i != r and (aug[i] >> j) & 1:
                    aug[i] ^= aug[r]
            piv.append(j)
            r += 1
        for i in range(r, self.k):
            if (aug[i] >> self.k) & 1:
                return None
        x = 0
        for i, j in enumerate(piv):
            if (aug[i] >> self.k) & 1:
                x |= 1 << j
        assert poly_mulmod(x, x, self.modulus, self.k) ^ x == c
        # Pick the smaller of the two solutions {x, x+1} for canonicity.
        return min(x, x ^ 1)
