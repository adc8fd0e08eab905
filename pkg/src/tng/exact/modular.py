"""Multi-modular determinants of Laurent-polynomial matrices.

The matrix is shifted to honest polynomials, multivariable input is folded
to one variable by Kronecker substitution, and the determinant is
recovered exactly from its images modulo several primes p = 1 mod lcm(m, N):

* zeta_m is sent to each primitive m-th root of unity mod p in turn
  (Phi_m splits completely), and t to the N-th roots of unity, N a power
  of two above the degree bound;
* one batched numpy elimination computes all those determinants mod p;
* an inverse NTT recovers the t-coefficients, a small Vandermonde solve
  the power-basis coordinates in zeta_m;
* CRT over enough primes to exceed twice an a-priori coefficient bound
  gives the integers.

All arithmetic is integral; primes stay below 2**26 so products of two
residues fit in int64.
"""

from __future__ import annotations

from functools import lru_cache
from math import gcd
from typing import List, Sequence

import numpy as np

from .cyclotomic import CycNum, _lcm, power_bound, totient
from .laurent import LaurentPoly

PRIME_LIMIT = 1 << 26


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@lru_cache(maxsize=None)
def primes_one_mod(L: int, count: int) -> tuple:
    """The ``count`` largest primes p < 2**26 with p = 1 mod L."""
    out = []
    k = (PRIME_LIMIT - 2) // L
    while len(out) < count and k > 0:
        p = k * L + 1
        if _is_prime(p):
            out.append(p)
        k -= 1
    if len(out) < count:
        raise ArithmeticError(f"not enough primes = 1 mod {L} below 2**26")
    return tuple(out)


@lru_cache(maxsize=None)
def primitive_root(p: int) -> int:
    n = p - 1
    factors = []
    q = 2
    while q * q <= n:
        if n % q == 0:
            factors.append(q)
            while n % q == 0:
                n //= q
        q += 1
    if n > 1:
        factors.append(n)
    for g in range(2, p):
        if all(pow(g, (p - 1) // f, p) != 1 for f in factors):
            return g
    raise ArithmeticError("no primitive root")


def _vec_pow(x: np.ndarray, e: int, p: int) -> np.ndarray:
    result = np.ones_like(x)
    base = x % p
    while e:
        if e & 1:
            result = result * base % p
        base = base * base % p
        e >>= 1
    return result


def det_mod_batch(A: np.ndarray, p: int) -> np.ndarray:
    """Determinants mod p of a stack of square int64 matrices (entries in [0, p))."""
    A = A.copy()
    B, n, _ = A.shape
    det = np.ones(B, dtype=np.int64)
    if n == 0:
        return det
    idx = np.arange(B)
    for c in range(n):
        nz = A[:, c:, c] != 0
        has = nz.any(axis=1)
        piv = np.argmax(nz, axis=1) + c
        swap = (piv != c) & has
        if swap.any():
            rows_c = A[idx, c, :].copy()
            rows_p = A[idx, piv, :].copy()
            A[idx[swap], c, :] = rows_p[swap]
            A[idx[swap], piv[swap], :] = rows_c[swap]
            det[swap] = (p - det[swap]) % p
        pv = np.where(has, A[:, c, c], 1)
        det = np.where(has, det * pv % p, 0)
        if c == n - 1:
            break
        inv = _vec_pow(pv, p - 2, p)
        factors = A[:, c + 1:, c] * inv[:, None] % p
        A[:, c + 1:, c:] = (A[:, c + 1:, c:] - factors[:, :, None] * A[:, None, c, c:]) % p
    return det


def _bitrev(N: int) -> np.ndarray:
    bits = N.bit_length() - 1
    r = np.zeros(N, dtype=np.int64)
    for i in range(N):
        r[i] = int(format(i, f"0{bits}b")[::-1], 2) if bits else 0
    return r


_BITREV = {}


def ntt(a: np.ndarray, root: int, p: int) -> np.ndarray:
    """Values of the coefficient arrays a[..., e] at root**s, s = 0..N-1."""
    N = a.shape[-1]
    if N not in _BITREV:
        _BITREV[N] = _bitrev(N)
    a = a[..., _BITREV[N]] % p
    lead = a.shape[:-1]
    length = 2
    while length <= N:
        half = length // 2
        wl = pow(root, N // length, p)
        ws = np.empty(half, dtype=np.int64)
        cur = 1
        for i in range(half):
            ws[i] = cur
            cur = cur * wl % p
        blocks = a.reshape(lead + (N // length, length))
        u = blocks[..., :half]
        v = blocks[..., half:] * ws % p
        a = np.concatenate(((u + v) % p, (u - v) % p), axis=-1).reshape(lead + (N,))
        length *= 2
    return a


def _crt_pair(r1, m1, r2, m2):
    # combine x = r1 mod m1, x = r2 mod m2
    t = (r2 - r1) * pow(m1, -1, m2) % m2
    return r1 + m1 * t, m1 * m2


def det_modular(M: Sequence[Sequence[LaurentPoly]], nvars: int) -> LaurentPoly:
    """Exact determinant of a square Laurent-polynomial matrix."""
    n = len(M)
    m = 1
    for row in M:
        for e in row:
            m = _lcm(m, e.m)
    rows = [[e.lift(m) for e in row] for row in M]

    # clear denominators row by row
    scale = 1
    for i, row in enumerate(rows):
        L = 1
        for e in row:
            for c in e.terms.values():
                L = _lcm(L, c.den)
        if L != 1:
            rows[i] = [e * L for e in row]
            scale *= L

    # shift rows, then columns, to nonnegative exponents
    shift = [0] * nvars
    for i, row in enumerate(rows):
        live = [e for e in row if e.terms]
        if not live:
            return LaurentPoly.zero(nvars, m)
        lo = [min(min(f[v] for f in e.terms) for e in live) for v in range(nvars)]
        if any(lo):
            rows[i] = [e.shift([-x for x in lo]) for e in row]
            shift = [a + b for a, b in zip(shift, lo)]
    for j in range(n):
        live = [rows[i][j] for i in range(n) if rows[i][j].terms]
        if not live:
            return LaurentPoly.zero(nvars, m)
        lo = [min(min(f[v] for f in e.terms) for e in live) for v in range(nvars)]
        if any(lo):
            for i in range(n):
                rows[i][j] = rows[i][j].shift([-x for x in lo])
            shift = [a + b for a, b in zip(shift, lo)]

    # per-variable degree bounds
    dbound = []
    for v in range(nvars):
        rmax = sum(max((max(f[v] for f in e.terms) for e in row if e.terms), default=0) for row in rows)
        cmax = sum(
            max((max(f[v] for f in rows[i][j].terms) for i in range(n) if rows[i][j].terms), default=0)
            for j in range(n)
        )
        dbound.append(min(rmax, cmax))
    weights = []
    w = 1
    for v in range(nvars):
        weights.append(w)
        w *= dbound[v] + 1
    total_deg = sum(d * wt for d, wt in zip(dbound, weights))

    # coefficient bound
    norms = [[sum(sum(abs(x) for x in c.num) for c in e.terms.values()) for e in row] for row in rows]
    rprod = 1
    for row in norms:
        rprod *= sum(row)
    cprod = 1
    for j in range(n):
        cprod *= sum(norms[i][j] for i in range(n))
    bound = power_bound(m) * min(rprod, cprod)
    if bound == 0:
        return LaurentPoly.zero(nvars, m)

    N = 1
    while N < total_deg + 1:
        N *= 2
    phi = totient(m)
    units = [u for u in range(1, m + 1) if gcd(u, m) == 1] if m > 1 else [1]
    L = _lcm(m, N)

    # term list: (row, col, kronecker exponent, basis coefficients)
    term_r, term_c, term_e, term_coef = [], [], [], []
    for i, row in enumerate(rows):
        for j, e in enumerate(row):
            for f, c in e.terms.items():
                term_r.append(i)
                term_c.append(j)
                term_e.append(sum(a * b for a, b in zip(f, weights)))
                term_coef.append(c.num)
    term_r = np.array(term_r, dtype=np.int64)
    term_c = np.array(term_c, dtype=np.int64)
    term_e = np.array(term_e, dtype=np.int64)

    needed = 2 * bound + 1
    residues = None
    modulus = 1
    count = 1
    while True:
        primes = primes_one_mod(L, count)
        p = primes[count - 1]
        coefs = _det_coeffs_mod_p(p, m, N, phi, units, n, term_r, term_c, term_e, term_coef)
        if residues is None:
            residues = [[int(x) for x in row] for row in coefs]
            modulus = p
        else:
            new = []
            for row_old, row_new in zip(residues, coefs):
                new_row = []
                for r1, r2 in zip(row_old, row_new):
                    x, _ = _crt_pair(r1, modulus, int(r2), p)
                    new_row.append(x)
                new.append(new_row)
            residues = new
            modulus *= p
        if modulus >= needed:
            break
        count += 1

    half = modulus // 2
    out = {}
    for k in range(total_deg + 1):
        vec = [x - modulus if x > half else x for x in residues[k]]
        if any(vec):
            rem = k
            f = []
            for v in range(nvars):
                f.append(rem % (dbound[v] + 1) + shift[v])
                rem //= dbound[v] + 1
            out[tuple(f)] = CycNum(m, vec, scale)
    return LaurentPoly(nvars, out, m)


def _det_coeffs_mod_p(p, m, N, phi, units, n, term_r, term_c, term_e, term_coef) -> np.ndarray:
    g = primitive_root(p)
    omega = pow(g, (p - 1) // m, p)
    roots = [pow(omega, u, p) for u in units]
    I = len(roots)
    # value of each term coefficient at each primitive m-th root
    W = np.array([[pow(r, l, p) for l in range(phi)] for r in roots], dtype=np.int64)  # (I, phi)
    C = np.array(term_coef, dtype=object)
    C = np.array([[int(x) % p for x in row] for row in C], dtype=np.int64).reshape(len(term_coef), phi)
    a = np.zeros((I, len(term_coef)), dtype=np.int64)
    for l in range(phi):
        a = (a + W[:, l][:, None] * C[:, l][None, :]) % p
    coeff = np.zeros((I, n, n, N), dtype=np.int64)
    for i in range(I):
        np.add.at(coeff[i], (term_r, term_c, term_e), a[i])
    coeff %= p
    wN = pow(g, (p - 1) // N, p)
    vals = ntt(coeff, wN, p)  # (I, n, n, N)
    mats = np.moveaxis(vals, -1, 1).reshape(I * N, n, n)
    dets = det_mod_batch(np.ascontiguousarray(mats), p).reshape(I, N)
    winv = pow(wN, p - 2, p)
    tco = ntt(dets, winv, p) * pow(N, p - 2, p) % p  # (I, N) coefficients in t
    # basis coordinates: solve Vandermonde in the primitive roots
    Vinv = _inverse_mod([[pow(r, l, p) for l in range(phi)] for r in roots], p)
    Vinv = np.array(Vinv, dtype=np.int64)  # (phi, I)
    out = np.zeros((N, phi), dtype=np.int64)
    for i in range(I):
        out = (out + tco[i][:, None] * Vinv[:, i][None, :]) % p
    return out


def _inverse_mod(A: List[List[int]], p: int) -> List[List[int]]:
    n = len(A)
    M = [list(map(int, row)) + [int(i == j) for j in range(n)] for i, row in enumerate(A)]
    for c in range(n):
        piv = next(r for r in range(c, n) if M[r][c] % p)
        M[c], M[piv] = M[piv], M[c]
        inv = pow(M[c][c], p - 2, p)
        M[c] = [x * inv % p for x in M[c]]
        for r in range(n):
            if r != c and M[r][c]:
                f = M[r][c]
                M[r] = [(x - f * y) % p for x, y in zip(M[r], M[c])]
    return [row[n:] for row in M]
