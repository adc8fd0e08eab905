"""Exact arithmetic in cyclotomic fields Q(zeta_m).

An element is stored as integer numerators ``num`` over the power basis
1, zeta, ..., zeta^(phi(m)-1) together with one positive common
denominator ``den``; numerators and denominator are kept coprime.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from numbers import Rational


def _poly_divmod_int(a, b):
    """Divide integer polynomials (low-to-high coefficient lists), b monic."""
    a = list(a)
    q = [0] * max(len(a) - len(b) + 1, 1)
    db = len(b) - 1
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i]
        if c:
            q[i - db] = c
            for j in range(db + 1):
                a[i - db + j] -= c * b[j]
    r = a[:db] if db else [0]
    return q, r


@lru_cache(maxsize=None)
def cyclotomic_poly(m: int) -> tuple:
    """Coefficients (low to high) of the m-th cyclotomic polynomial.

    Obtained by dividing x^m - 1 by Phi_d for every proper divisor d of m.
    """
    if m < 1:
        raise ValueError("conductor must be positive")
    num = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            num, r = _poly_divmod_int(num, cyclotomic_poly(d))
            assert not any(r)
    while len(num) > 1 and num[-1] == 0:
        num.pop()
    return tuple(num)


def totient(m: int) -> int:
    return len(cyclotomic_poly(m)) - 1


@lru_cache(maxsize=None)
def _power_table(m: int) -> tuple:
    """Reduced basis vectors of zeta_m^e for 0 <= e < m."""
    phi = cyclotomic_poly(m)
    n = len(phi) - 1
    rows = []
    cur = [1] + [0] * (n - 1) if n else []
    for _ in range(m):
        rows.append(tuple(cur))
        # multiply by x and reduce by the monic Phi_m
        top = cur[-1] if n else 0
        cur = [0] + cur[:-1] if n else []
        if top:
            for j in range(n):
                cur[j] -= top * phi[j]
    return tuple(rows)


def power_bound(m: int) -> int:
    """max over e of the sup-norm of zeta_m^e written in the power basis."""
    return max(max((abs(c) for c in row), default=0) for row in _power_table(m))


def _lcm(a, b):
    return a // gcd(a, b) * b


class CycNum:
    """An element of Q(zeta_m)."""

    __slots__ = ("m", "num", "den")

    def __init__(self, m: int, num, den: int = 1):
        n = totient(m)
        num = list(num)
        if len(num) > n:
            num = _reduce_raw(m, num)
        elif len(num) < n:
            num = num + [0] * (n - len(num))
        if den < 0:
            num = [-c for c in num]
            den = -den
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        g = den
        for c in num:
            if g == 1:
                break
            g = gcd(g, c)
        if g != 1:
            num = [c // g for c in num]
            den //= g
        self.m = m
        self.num = tuple(num)
        self.den = den

    # construction helpers -------------------------------------------------

    @classmethod
    def from_rational(cls, q, m: int = 1) -> "CycNum":
        q = Fraction(q)
        return cls(m, [q.numerator], q.denominator)

    @classmethod
    def root(cls, m: int, j: int = 1) -> "CycNum":
        """zeta_m ** j."""
        return cls(m, _power_table(m)[j % m], 1)

    @classmethod
    def _raw(cls, m, num, den):
        # trusted fast path: num already reduced, coprime to den
        obj = object.__new__(cls)
        obj.m = m
        obj.num = num
        obj.den = den
        return obj

    # structure --------------------------------------------------------------

    def lift(self, M: int) -> "CycNum":
        """Embed into Q(zeta_M) for a multiple M of the conductor."""
        if M == self.m:
            return self
        if M % self.m:
            raise ValueError(f"conductor {self.m} does not divide {M}")
        step = M // self.m
        table = _power_table(M)
        out = [0] * totient(M)
        for l, c in enumerate(self.num):
            if c:
                row = table[(l * step) % M]
                for j, v in enumerate(row):
                    if v:
                        out[j] += c * v
        return CycNum._raw(M, tuple(out), self.den)

    def _coerce(self, other):
        if isinstance(other, CycNum):
            if other.m == self.m:
                return self, other
            M = _lcm(self.m, other.m)
            return self.lift(M), other.lift(M)
        if isinstance(other, (int, Rational)):
            return self, CycNum.from_rational(other, self.m)
        return None

    def is_zero(self) -> bool:
        return not any(self.num)

    def __bool__(self):
        return any(self.num)

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("not a rational number")
        return Fraction(self.num[0] if self.num else 0, self.den)

    def coeffs(self) -> list:
        return [Fraction(c, self.den) for c in self.num]

    def is_integral_basis(self) -> bool:
        return self.den == 1

    # arithmetic -------------------------------------------------------------

    def __neg__(self):
        return CycNum._raw(self.m, tuple(-c for c in self.num), self.den)

    def __add__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        if a.den == b.den:
            return CycNum(a.m, [x + y for x, y in zip(a.num, b.num)], a.den)
        return CycNum(a.m, [x * b.den + y * a.den for x, y in zip(a.num, b.num)], a.den * b.den)

    __radd__ = __add__

    def __sub__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return CycNum(self.m, [c * other for c in self.num], self.den)
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        m = a.m
        n = len(a.num)
        if n == 1:
            return CycNum(m, [a.num[0] * b.num[0]], a.den * b.den)
        raw = [0] * (2 * n - 1)
        for i, x in enumerate(a.num):
            if x:
                for j, y in enumerate(b.num):
                    if y:
                        raw[i + j] += x * y
        return CycNum(m, _reduce_raw(m, raw), a.den * b.den)

    __rmul__ = __mul__

    def inverse(self) -> "CycNum":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(zeta_m)")
        n = len(self.num)
        if n == 1:
            return CycNum(self.m, [self.den], self.num[0])
        # solve (self) * y = 1 using the multiplication matrix
        cols = []
        for l in range(n):
            e = [0] * n
            e[l] = 1
            cols.append((self * CycNum(self.m, e)).coeffs())
        rhs = [Fraction(1)] + [Fraction(0)] * (n - 1)
        y = _solve_fraction([[cols[j][i] for j in range(n)] for i in range(n)], rhs)
        den = 1
        for v in y:
            den = _lcm(den, v.denominator)
        return CycNum(self.m, [int(v * den) for v in y], den)

    def __truediv__(self, other):
        if isinstance(other, (int, Rational)):
            q = Fraction(other)
            if q == 0:
                raise ZeroDivisionError("division by zero")
            return CycNum(self.m, [c * q.denominator for c in self.num], self.den * q.numerator)
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return a * b.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = CycNum.from_rational(1, self.m)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def conj(self) -> "CycNum":
        """Complex conjugate: zeta -> zeta^-1."""
        m = self.m
        table = _power_table(m)
        out = [0] * len(self.num)
        for l, c in enumerate(self.num):
            if c:
                for j, v in enumerate(table[(-l) % m]):
                    if v:
                        out[j] += c * v
        return CycNum._raw(m, tuple(out), self.den)

    def __eq__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return a.den == b.den and a.num == b.num

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    __hash__ = None

    def __repr__(self):
        if self.is_rational():
            return f"CycNum({self.to_fraction()})"
        terms = []
        for l, c in enumerate(self.num):
            if c:
                q = Fraction(c, self.den)
                terms.append(f"{q}" if l == 0 else f"{q}*z{self.m}^{l}")
        return "CycNum(" + " + ".join(terms) + ")"

    def to_json(self):
        return {"m": self.m, "num": list(self.num), "den": self.den}

    @classmethod
    def from_json(cls, obj):
        return cls(obj["m"], obj["num"], obj["den"])


def _reduce_raw(m: int, raw) -> list:
    n = totient(m)
    if len(raw) <= n:
        return list(raw) + [0] * (n - len(raw))
    table = _power_table(m)
    out = list(raw[:n])
    for e in range(n, len(raw)):
        c = raw[e]
        if c:
            for j, v in enumerate(table[e % m]):
                if v:
                    out[j] += c * v
    return out


def _solve_fraction(A, b):
    n = len(A)
    M = [list(map(Fraction, row)) + [Fraction(v)] for row, v in zip(A, b)]
    for c in range(n):
        piv = next(r for r in range(c, n) if M[r][c] != 0)
        M[c], M[piv] = M[piv], M[c]
        inv = 1 / M[c][c]
        M[c] = [v * inv for v in M[c]]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return [M[r][n] for r in range(n)]


def cyc_reduce(m: int, raw_coeffs) -> CycNum:
    """Canonical element of Q(zeta_m) from a raw polynomial in zeta_m.

    ``raw_coeffs`` may have any length and may contain Fractions.
    """
    fr = [Fraction(c) for c in raw_coeffs]
    den = 1
    for c in fr:
        den = _lcm(den, c.denominator)
    ints = [int(c * den) for c in fr]
    return CycNum(m, _reduce_raw(m, ints) if ints else [0], den)


def common_conductor(values) -> int:
    m = 1
    for v in values:
        m = _lcm(m, v.m)
    return m
