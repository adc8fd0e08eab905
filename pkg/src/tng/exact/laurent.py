"""Multivariable Laurent polynomials over cyclotomic fields."""

from __future__ import annotations

from numbers import Rational
from typing import Dict, Sequence, Tuple

from .cyclotomic import CycNum, _lcm

Exponent = Tuple[int, ...]

EXPONENT_LIMIT = 2**31


def _as_cyc(c, m=1) -> CycNum:
    if isinstance(c, CycNum):
        return c
    return CycNum.from_rational(c, m)


class LaurentPoly:
    """Element of Q(zeta_m)[x_1^±1, ..., x_b^±1].

    ``terms`` maps exponent tuples to nonzero CycNum coefficients that all
    share the conductor ``m``.  Instances are treated as immutable.
    """

    __slots__ = ("nvars", "terms", "m")

    def __init__(self, nvars: int, terms=None, m: int | None = None):
        self.nvars = nvars
        terms = dict(terms or {})
        if m is None:
            m = 1
            for c in terms.values():
                if isinstance(c, CycNum):
                    m = _lcm(m, c.m)
        clean = {}
        for e, c in terms.items():
            e = tuple(e)
            if len(e) != nvars:
                raise ValueError(f"exponent {e} has wrong length for {nvars} variables")
            c = _as_cyc(c, m)
            if c.m != m:
                c = c.lift(m)
            if c:
                clean[e] = c
        self.terms = clean
        self.m = m

    @classmethod
    def _raw(cls, nvars, terms, m):
        obj = object.__new__(cls)
        obj.nvars = nvars
        obj.terms = terms
        obj.m = m
        return obj

    # constructors -----------------------------------------------------------

    @classmethod
    def zero(cls, nvars: int, m: int = 1):
        return cls._raw(nvars, {}, m)

    @classmethod
    def constant(cls, c, nvars: int, m: int = 1):
        c = _as_cyc(c, m)
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def one(cls, nvars: int, m: int = 1):
        return cls.constant(1, nvars, m)

    @classmethod
    def monomial(cls, exp: Sequence[int], coeff=1, m: int = 1):
        exp = tuple(exp)
        return cls(len(exp), {exp: _as_cyc(coeff, m)})

    @classmethod
    def variable(cls, i: int, nvars: int):
        e = [0] * nvars
        e[i] = 1
        return cls.monomial(e)

    @classmethod
    def from_coeffs(cls, coeffs: Sequence, low: int = 0, m: int | None = None):
        """Univariate polynomial sum(coeffs[i] t^(low + i))."""
        return cls(1, {(low + i,): c for i, c in enumerate(coeffs) if c}, m)

    # basic queries --------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def support(self):
        return sorted(self.terms)

    def min_exponents(self) -> Exponent:
        if not self.terms:
            return (0,) * self.nvars
        return tuple(min(e[i] for e in self.terms) for i in range(self.nvars))

    def max_exponents(self) -> Exponent:
        if not self.terms:
            return (0,) * self.nvars
        return tuple(max(e[i] for e in self.terms) for i in range(self.nvars))

    def spread(self, i: int = 0) -> int:
        """max - min exponent in variable i (0 for the zero polynomial)."""
        if not self.terms:
            return 0
        vals = [e[i] for e in self.terms]
        return max(vals) - min(vals)

    def leading(self):
        """(exponent, coeff) of the lexicographically greatest term."""
        e = max(self.terms)
        return e, self.terms[e]

    def coeff(self, exp) -> CycNum:
        return self.terms.get(tuple(exp), CycNum.from_rational(0, self.m))

    def is_integral(self) -> bool:
        return all(c.den == 1 for c in self.terms.values())

    # coercion ---------------------------------------------------------------

    def lift(self, M: int) -> "LaurentPoly":
        if M == self.m:
            return self
        return LaurentPoly._raw(self.nvars, {e: c.lift(M) for e, c in self.terms.items()}, M)

    def _coerce(self, other):
        if isinstance(other, LaurentPoly):
            if other.nvars != self.nvars:
                raise ValueError("variable count mismatch")
            if other.m == self.m:
                return self, other
            M = _lcm(self.m, other.m)
            return self.lift(M), other.lift(M)
        if isinstance(other, (int, Rational, CycNum)):
            return self._coerce(LaurentPoly.constant(other, self.nvars))
        return None

    # arithmetic -------------------------------------------------------------

    def __neg__(self):
        return LaurentPoly._raw(self.nvars, {e: -c for e, c in self.terms.items()}, self.m)

    def __add__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        out = dict(a.terms)
        for e, c in b.terms.items():
            if e in out:
                s = out[e] + c
                if s:
                    out[e] = s
                else:
                    del out[e]
            else:
                out[e] = c
        return LaurentPoly._raw(a.nvars, out, a.m)

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
        if isinstance(other, (int, Rational, CycNum)):
            if isinstance(other, CycNum) and other.m != self.m:
                M = _lcm(self.m, other.m)
                return self.lift(M) * other.lift(M)
            if not other:
                return LaurentPoly.zero(self.nvars, self.m)
            return LaurentPoly._raw(self.nvars, {e: c * other for e, c in self.terms.items()}, self.m)
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        if len(a.terms) < len(b.terms):
            a, b = b, a
        out: Dict[Exponent, CycNum] = {}
        for e2, c2 in b.terms.items():
            for e1, c1 in a.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                p = c1 * c2
                if e in out:
                    out[e] = out[e] + p
                else:
                    out[e] = p
        return LaurentPoly._raw(a.nvars, {e: c for e, c in out.items() if c}, a.m)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if not self.is_monomial():
                raise ValueError("only monomials are invertible")
            (e, c), = self.terms.items()
            return LaurentPoly.monomial(tuple(-x * (-n) for x in e), c.inverse() ** (-n))
        result = LaurentPoly.one(self.nvars, self.m)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, exp: Sequence[int]) -> "LaurentPoly":
        """Multiply by the monomial x^exp."""
        exp = tuple(exp)
        return LaurentPoly._raw(
            self.nvars, {tuple(a + b for a, b in zip(e, exp)): c for e, c in self.terms.items()}, self.m
        )

    def scale(self, c) -> "LaurentPoly":
        return self * c

    def __eq__(self, other):
        pair = self._coerce(other) if isinstance(other, (LaurentPoly, int, Rational, CycNum)) else None
        if pair is None:
            return NotImplemented
        a, b = pair
        if a.terms.keys() != b.terms.keys():
            return False
        return all(a.terms[e] == b.terms[e] for e in a.terms)

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    __hash__ = None

    # normalization --------------------------------------------------------

    def normalize(self) -> "LaurentPoly":
        """Canonical representative of the unit class (see laurent_normalize)."""
        if not self.terms:
            return self
        lo = self.min_exponents()
        e, c = max(self.terms.items())
        inv = c.inverse()
        out = {}
        for f, d in self.terms.items():
            out[tuple(a - b for a, b in zip(f, lo))] = d * inv
        return LaurentPoly._raw(self.nvars, out, self.m)

    def equiv(self, other: "LaurentPoly") -> bool:
        """Equality up to multiplication by a unit r*f."""
        return self.normalize() == other.normalize()

    # maps -----------------------------------------------------------------

    def specialize(self, phi) -> "LaurentPoly":
        """Apply the exponent map f -> phi(f).

        ``phi`` is a sequence of integer rows, one per output variable, each
        of length ``nvars``; a flat integer vector means one output variable.
        """
        rows = [list(phi)] if phi and isinstance(phi[0], int) else [list(r) for r in phi]
        out: Dict[Exponent, CycNum] = {}
        for e, c in self.terms.items():
            f = tuple(sum(r[i] * e[i] for i in range(self.nvars)) for r in rows)
            if f in out:
                out[f] = out[f] + c
            else:
                out[f] = c
        return LaurentPoly._raw(len(rows), {f: c for f, c in out.items() if c}, self.m)

    def twist(self, m: int, exps: Sequence[int]) -> "LaurentPoly":
        """Coefficientwise twist f -> zeta_m^<exps, f> f."""
        M = _lcm(self.m, m)
        base = self.lift(M)
        step = M // m
        out = {}
        for e, c in base.terms.items():
            k = sum(a * b for a, b in zip(exps, e)) * step
            out[e] = c * CycNum.root(M, k)
        return LaurentPoly._raw(self.nvars, out, M)

    def eval_at_root(self, m: int, j: int) -> CycNum:
        """Value of a univariate polynomial at zeta_m^j."""
        if self.nvars != 1:
            raise ValueError("eval_at_root needs a univariate polynomial")
        M = _lcm(self.m, m)
        step = M // m
        total = CycNum.from_rational(0, M)
        for (e,), c in self.terms.items():
            total = total + c.lift(M) * CycNum.root(M, e * j * step)
        return total

    def conj(self) -> "LaurentPoly":
        """Conjugate coefficients and invert the group elements."""
        return LaurentPoly._raw(
            self.nvars, {tuple(-x for x in e): c.conj() for e, c in self.terms.items()}, self.m
        )

    # dense univariate views ----------------------------------------------

    def to_dense(self):
        """(low exponent, [coefficients low..high]) for univariate input."""
        if self.nvars != 1:
            raise ValueError("univariate only")
        if not self.terms:
            return 0, []
        lo = min(e[0] for e in self.terms)
        hi = max(e[0] for e in self.terms)
        zero = CycNum.from_rational(0, self.m)
        return lo, [self.terms.get((lo + i,), zero) for i in range(hi - lo + 1)]

    # serialization --------------------------------------------------------

    def to_json(self):
        return {
            "nvars": self.nvars,
            "m": self.m,
            "terms": [[list(e), c.to_json()] for e, c in sorted(self.terms.items())],
        }

    @classmethod
    def from_json(cls, obj):
        return cls(obj["nvars"], {tuple(e): CycNum.from_json(c) for e, c in obj["terms"]}, obj["m"])

    def __repr__(self):
        if not self.terms:
            return "LaurentPoly(0)"
        names = ["t"] if self.nvars == 1 else [f"x{i}" for i in range(self.nvars)]
        parts = []
        for e, c in sorted(self.terms.items(), reverse=True):
            mono = "*".join(
                (n if k == 1 else f"{n}^{k}") for n, k in zip(names, e) if k
            )
            cs = repr(c)[7:-1]
            parts.append(cs if not mono else (mono if cs == "1" else f"({cs})*{mono}"))
        return "LaurentPoly(" + " + ".join(parts) + ")"


def laurent_normalize(p: LaurentPoly) -> LaurentPoly:
    """Fix the unit: min exponent 0 in every variable, lex-max coefficient 1."""
    return p.normalize()


def exact_divide(f: LaurentPoly, g: LaurentPoly) -> LaurentPoly | None:
    """f / g if g divides f in the Laurent ring, else None."""
    if g.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    f, g = f._coerce(g)
    if f.is_zero():
        return LaurentPoly.zero(f.nvars, f.m)
    lo = [a - b for a, b in zip(f.min_exponents(), g.min_exponents())]
    hi = [a - b for a, b in zip(f.max_exponents(), g.max_exponents())]
    if any(l > h for l, h in zip(lo, hi)):
        return None
    ge, gc = g.leading()
    ginv = gc.inverse()
    rem = dict(f.terms)
    quot = {}
    gterms = list(g.terms.items())
    while rem:
        e = max(rem)
        q_e = tuple(a - b for a, b in zip(e, ge))
        if any(x < l or x > h for x, l, h in zip(q_e, lo, hi)):
            return None
        q_c = rem[e] * ginv
        quot[q_e] = q_c
        for ee, cc in gterms:
            k = tuple(a + b for a, b in zip(ee, q_e))
            v = rem.get(k)
            v = -(cc * q_c) if v is None else v - cc * q_c
            if v:
                rem[k] = v
            else:
                rem.pop(k, None)
    return LaurentPoly._raw(f.nvars, quot, f.m)


# --- dense univariate helpers (coefficient lists, low to high) -----------


def _trim(a):
    while a and not a[-1]:
        a.pop()
    return a


def udivmod(a, b):
    """Polynomial division over Q(zeta_m); b nonzero dense list."""
    a = list(a)
    _trim(a)
    b = _trim(list(b))
    if not b:
        raise ZeroDivisionError
    inv = b[-1].inverse()
    db = len(b) - 1
    if len(a) - 1 < db:
        return [], a
    q = [None] * (len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i]
        if c:
            qc = c * inv
            q[i - db] = qc
            for j in range(db):
                if b[j]:
                    a[i - db + j] = a[i - db + j] - qc * b[j]
        else:
            q[i - db] = c
        a[i] = c * 0
    return q, _trim(a[:db])


def umonic(a):
    inv = a[-1].inverse()
    return [c * inv for c in a]


def ugcd(a, b):
    """Monic gcd of dense univariate polynomials over Q(zeta_m)."""
    a = _trim(list(a))
    b = _trim(list(b))
    while b:
        _, r = udivmod(a, b)
        a, b = b, (umonic(r) if r else r)
    return umonic(a) if a else []
