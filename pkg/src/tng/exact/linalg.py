"""Determinants over Laurent-polynomial rings."""

from __future__ import annotations

from typing import List, Sequence

from ..errors import SizeExceeded
from .cyclotomic import CycNum, _lcm
from .laurent import LaurentPoly, udivmod
from .modular import det_modular

MAX_DET_SIZE = 64
MAX_COFACTOR_SIZE = 12

PolyMatrix = List[List[LaurentPoly]]


def _nvars_of(M, nvars):
    if nvars is not None:
        return nvars
    for row in M:
        for e in row:
            return e.nvars
    raise ValueError("cannot infer the variable count of an empty matrix")


def identity_matrix(k: int, nvars: int, m: int = 1) -> PolyMatrix:
    zero = LaurentPoly.zero(nvars, m)
    one = LaurentPoly.one(nvars, m)
    return [[one if i == j else zero for j in range(k)] for i in range(k)]


def det_poly(M: Sequence[Sequence[LaurentPoly]], nvars: int | None = None, method: str = "auto") -> LaurentPoly:
    """Exact determinant of a square matrix of Laurent polynomials.

    ``method`` is one of ``auto``, ``bareiss`` (univariate only),
    ``cofactor`` (size <= 12) or ``modular``.
    """
    n = len(M)
    if any(len(row) != n for row in M):
        raise ValueError("matrix is not square")
    if n > MAX_DET_SIZE:
        raise SizeExceeded(f"determinant size {n} exceeds {MAX_DET_SIZE}")
    if n == 0:
        return LaurentPoly.one(nvars or 1)
    b = _nvars_of(M, nvars)
    if method == "auto":
        if n <= 2:
            method = "cofactor"
        elif b == 1:
            method = "bareiss" if n <= 4 else "modular"
        else:
            method = "cofactor" if n <= 3 else "modular"
    if method == "bareiss":
        if b != 1:
            raise ValueError("Bareiss elimination is implemented for univariate matrices")
        return det_bareiss(M)
    if method == "cofactor":
        if n > MAX_COFACTOR_SIZE:
            raise SizeExceeded(f"cofactor expansion limited to size {MAX_COFACTOR_SIZE}")
        return det_cofactor(M, b)
    if method == "modular":
        return det_modular(M, b)
    raise ValueError(f"unknown method {method!r}")


def det_cofactor(M, nvars: int) -> LaurentPoly:
    """Laplace expansion along rows, memoized on the set of used columns."""
    n = len(M)
    memo = {}

    def rec(row, mask):
        if row == n:
            return LaurentPoly.one(nvars)
        key = mask
        if key in memo:
            return memo[key]
        total = LaurentPoly.zero(nvars)
        sign = 1
        for j in range(n):
            if mask >> j & 1:
                continue
            e = M[row][j]
            if e.terms:
                sub = rec(row + 1, mask | (1 << j))
                if sub.terms:
                    term = e * sub
                    total = total + term if sign > 0 else total - term
            sign = -sign
        memo[key] = total
        return total

    return rec(0, 0)


def det_bareiss(M) -> LaurentPoly:
    """Fraction-free elimination over Q(zeta_m)[t] with exact divisions."""
    n = len(M)
    m = 1
    for row in M:
        for e in row:
            m = _lcm(m, e.m)
    zero = CycNum.from_rational(0, m)
    one = CycNum.from_rational(1, m)
    shift = 0
    A = []
    for row in M:
        row = [e.lift(m) for e in row]
        live = [e for e in row if e.terms]
        if not live:
            return LaurentPoly.zero(1, m)
        lo = min(min(f[0] for f in e.terms) for e in live)
        shift += lo
        dense = []
        for e in row:
            if not e.terms:
                dense.append([])
                continue
            hi = max(f[0] for f in e.terms)
            vec = [zero] * (hi - lo + 1)
            for (f,), c in e.terms.items():
                vec[f - lo] = c
            dense.append(vec)
        A.append(dense)
    sign = 1
    prev = [one]
    for k in range(n - 1):
        if not A[k][k]:
            for r in range(k + 1, n):
                if A[r][k]:
                    A[k], A[r] = A[r], A[k]
                    sign = -sign
                    break
            else:
                return LaurentPoly.zero(1, m)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = _psub(_pmul(A[i][j], A[k][k]), _pmul(A[i][k], A[k][j]))
                if num:
                    q, r = udivmod(num, prev)
                    assert not r, "Bareiss division was not exact"
                    A[i][j] = q
                else:
                    A[i][j] = []
        prev = A[k][k]
    res = A[n - 1][n - 1]
    out = {(i + shift,): (c if sign > 0 else -c) for i, c in enumerate(res) if c}
    return LaurentPoly(1, out, m)


def _pmul(a, b):
    if not a or not b:
        return []
    out = [None] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            if not y:
                continue
            v = x * y
            out[i + j] = v if out[i + j] is None else out[i + j] + v
    zero = a[0] * 0
    out = [zero if v is None else v for v in out]
    while out and not out[-1]:
        out.pop()
    return out


def _psub(a, b):
    n = max(len(a), len(b))
    if not a:
        out = [-y for y in b]
    elif not b:
        out = list(a)
    else:
        zero = a[0] * 0
        out = [(a[i] if i < len(a) else zero) - (b[i] if i < len(b) else zero) for i in range(n)]
    while out and not out[-1]:
        out.pop()
    return out


def matmul_poly(A, B, nvars: int) -> PolyMatrix:
    rows, inner = len(A), len(B)
    cols = len(B[0]) if B else 0
    out = []
    for i in range(rows):
        row = []
        for j in range(cols):
            s = LaurentPoly.zero(nvars)
            for k in range(inner):
                if A[i][k].terms and B[k][j].terms:
                    s = s + A[i][k] * B[k][j]
            row.append(s)
        out.append(row)
    return out
