"""GCDs of Laurent polynomials over Q(zeta_m).

Univariate: Euclid over the coefficient field.  Multivariable: recursion on
the last variable, splitting off contents and running a subresultant
pseudo-remainder sequence on the primitive parts.
"""

from __future__ import annotations

from typing import Dict, List

from ..errors import DimensionExceeded
from .laurent import LaurentPoly, exact_divide, ugcd

MAX_GCD_VARS = 3


def _split(f: LaurentPoly, v: int) -> Dict[int, LaurentPoly]:
    """Coefficients of f as a polynomial in x_v (x_v exponent zeroed)."""
    parts: Dict[int, dict] = {}
    for e, c in f.terms.items():
        d = e[v]
        key = e[:v] + (0,) + e[v + 1:]
        parts.setdefault(d, {})[key] = c
    return {d: LaurentPoly._raw(f.nvars, t, f.m) for d, t in parts.items()}


def _join(coeffs: Dict[int, LaurentPoly], v: int, nvars: int, m: int) -> LaurentPoly:
    out = {}
    for d, c in coeffs.items():
        for e, val in c.terms.items():
            out[e[:v] + (d,) + e[v + 1:]] = val
    return LaurentPoly._raw(nvars, out, m)


def _deg(f: LaurentPoly, v: int) -> int:
    return max(e[v] for e in f.terms)


def _lc(f: LaurentPoly, v: int) -> LaurentPoly:
    return _split(f, v)[_deg(f, v)]


def _divexact(f, g):
    q = exact_divide(f, g)
    if q is None:
        raise ArithmeticError("expected exact division failed")
    return q


def _prem(A: LaurentPoly, B: LaurentPoly, v: int) -> LaurentPoly:
    """Pseudo-remainder of A by B in the variable x_v."""
    dB = _deg(B, v)
    lcB = _lc(B, v)
    R = A
    e = _deg(A, v) - dB + 1
    while not R.is_zero() and _deg(R, v) >= dB:
        dR = _deg(R, v)
        lcR = _lc(R, v)
        shift = [0] * A.nvars
        shift[v] = dR - dB
        R = R * lcB - (B * lcR).shift(shift)
        e -= 1
    if e > 0:
        R = R * (lcB ** e)
    return R


def _content(f: LaurentPoly, v: int) -> LaurentPoly:
    coeffs = sorted(_split(f, v).values(), key=lambda c: len(c.terms))
    g = coeffs[0]
    for c in coeffs[1:]:
        if g.is_constant():
            break
        g = _gcd_rec(g, c, v - 1)
    return g


def _gcd_rec(f: LaurentPoly, g: LaurentPoly, v: int) -> LaurentPoly:
    """gcd of polynomials involving only x_0..x_v (exponents >= 0)."""
    if f.is_zero():
        return g
    if g.is_zero():
        return f
    if v < 0 or f.is_constant() or g.is_constant():
        return LaurentPoly.one(f.nvars, f.m)
    if v == 0:
        a = _dense(f)
        b = _dense(g)
        r = ugcd(a, b)
        return LaurentPoly._raw(
            f.nvars, {(i,) + (0,) * (f.nvars - 1): c for i, c in enumerate(r) if c}, f.m
        )
    df = _deg(f, v)
    dg = _deg(g, v)
    if df == 0 and dg == 0:
        return _gcd_rec(f, g, v - 1)
    if df == 0:
        return _gcd_rec(f, _content(g, v), v - 1)
    if dg == 0:
        return _gcd_rec(_content(f, v), g, v - 1)
    cf = _content(f, v)
    cg = _content(g, v)
    c = _gcd_rec(cf, cg, v - 1)
    A = _divexact(f, cf)
    B = _divexact(g, cg)
    if _deg(A, v) < _deg(B, v):
        A, B = B, A
    gg = LaurentPoly.one(f.nvars, f.m)
    h = gg
    while True:
        delta = _deg(A, v) - _deg(B, v)
        R = _prem(A, B, v)
        if R.is_zero():
            break
        if _deg(R, v) == 0:
            return c
        A, B = B, _divexact(R, gg * h ** delta)
        gg = _lc(A, v)
        if delta == 0:
            pass
        elif delta == 1:
            h = gg
        else:
            h = _divexact(gg ** delta, h ** (delta - 1))
    return c * _divexact(B, _content(B, v))


def _dense(f: LaurentPoly) -> List:
    zero = f.coeff((-1,) * f.nvars)
    hi = max(e[0] for e in f.terms)
    out = [zero] * (hi + 1)
    for e, c in f.terms.items():
        out[e[0]] = c
    return out


def laurent_gcd(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    """Greatest common divisor, returned in normalized form."""
    if p.nvars != q.nvars:
        raise ValueError("variable count mismatch")
    if p.nvars > MAX_GCD_VARS:
        raise DimensionExceeded(f"multivariable gcd limited to {MAX_GCD_VARS} variables")
    p, q = p._coerce(q)
    if p.is_zero():
        return q.normalize()
    if q.is_zero():
        return p.normalize()
    a = p.shift([-x for x in p.min_exponents()])
    b = q.shift([-x for x in q.min_exponents()])
    return _gcd_rec(a, b, p.nvars - 1).normalize()


def gcd_many(polys) -> LaurentPoly:
    polys = list(polys)
    g = polys[0]
    for f in polys[1:]:
        if not g.is_zero() and g.normalize().is_constant():
            break
        g = laurent_gcd(g, f)
    return g.normalize()
