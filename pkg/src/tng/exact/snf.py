"""Smith and Hermite normal forms of integer matrices (Python ints)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List

Matrix = List[List[int]]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A: Matrix, B: Matrix) -> Matrix:
    if not A:
        return []
    inner = len(B)
    cols = len(B[0]) if B else 0
    return [[sum(A[i][k] * B[k][j] for k in range(inner)) for j in range(cols)] for i in range(len(A))]


def det_int(A: Matrix) -> int:
    """Exact integer determinant by fraction-free (Bareiss) elimination."""
    n = len(A)
    if n == 0:
        return 1
    M = [list(r) for r in A]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for r in range(k + 1, n):
                if M[r][k]:
                    M[k], M[r] = M[r], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


@dataclass(frozen=True)
class SnfResult:
    """A = U * D * V with U, V unimodular and D diagonal, d1 | d2 | ..."""

    U: Matrix
    D: Matrix
    V: Matrix
    Uinv: Matrix
    Vinv: Matrix

    @property
    def diagonal(self) -> List[int]:
        return [self.D[i][i] for i in range(min(len(self.D), len(self.D[0]) if self.D else 0))]


def smith_normal_form(A: Matrix, ncols: int | None = None) -> SnfResult:
    """Smith normal form with transforms.

    Works on a copy D with the row operations mirrored into Uinv (so that
    Uinv * A * Vinv = D) and their inverses accumulated into U and V.
    ``ncols`` is needed only when A has no rows.
    """
    rows = len(A)
    cols = len(A[0]) if rows else (ncols or 0)
    D = [list(r) for r in A]
    U, Uinv = identity(rows), identity(rows)
    V, Vinv = identity(cols), identity(cols)

    def row_add(i, j, q):  # row_i += q * row_j
        if q == 0:
            return
        D[i] = [a + q * b for a, b in zip(D[i], D[j])]
        Uinv[i] = [a + q * b for a, b in zip(Uinv[i], Uinv[j])]
        for r in range(rows):  # U <- U * E^-1 : col_j -= q * col_i
            U[r][j] -= q * U[r][i]

    def row_swap(i, j):
        D[i], D[j] = D[j], D[i]
        Uinv[i], Uinv[j] = Uinv[j], Uinv[i]
        for r in range(rows):
            U[r][i], U[r][j] = U[r][j], U[r][i]

    def row_neg(i):
        D[i] = [-a for a in D[i]]
        Uinv[i] = [-a for a in Uinv[i]]
        for r in range(rows):
            U[r][i] = -U[r][i]

    def col_add(i, j, q):  # col_i += q * col_j
        if q == 0:
            return
        for r in range(rows):
            D[r][i] += q * D[r][j]
        for r in range(cols):
            Vinv[r][i] += q * Vinv[r][j]
        V[j] = [a - q * b for a, b in zip(V[j], V[i])]

    def col_swap(i, j):
        for r in range(rows):
            D[r][i], D[r][j] = D[r][j], D[r][i]
        for r in range(cols):
            Vinv[r][i], Vinv[r][j] = Vinv[r][j], Vinv[r][i]
        V[i], V[j] = V[j], V[i]

    t = 0
    while t < min(rows, cols):
        # pick a nonzero entry of minimal absolute value in the remaining block
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                if D[i][j] and (best is None or abs(D[i][j]) < abs(D[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        row_swap(t, best[0])
        col_swap(t, best[1])
        while True:
            p = D[t][t]
            dirty = False
            for i in range(t + 1, rows):
                if D[i][t]:
                    row_add(i, t, -(D[i][t] // p))
                    if D[i][t]:
                        dirty = True
            for j in range(t + 1, cols):
                if D[t][j]:
                    col_add(j, t, -(D[t][j] // p))
                    if D[t][j]:
                        dirty = True
            if not dirty:
                # enforce divisibility of the rest of the block
                bad = None
                for i in range(t + 1, rows):
                    for j in range(t + 1, cols):
                        if D[i][j] % p:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                row_add(t, bad, 1)
                continue
            # move the smallest remainder into the pivot spot
            best = (t, t)
            for i in range(t, rows):
                if D[i][t] and abs(D[i][t]) < abs(D[best[0]][best[1]]):
                    best = (i, t)
            for j in range(t, cols):
                if D[t][j] and abs(D[t][j]) < abs(D[best[0]][best[1]]):
                    best = (t, j)
            if best[0] != t:
                row_swap(t, best[0])
            if best[1] != t:
                col_swap(t, best[1])
        if D[t][t] < 0:
            row_neg(t)
        t += 1
    return SnfResult(U=U, D=D, V=V, Uinv=Uinv, Vinv=Vinv)


def hermite_rows(A: Matrix) -> Matrix:
    """Row-style Hermite normal form (nonzero rows only) of an integer matrix."""
    M = [list(r) for r in A if any(r)]
    if not M:
        return []
    cols = len(M[0])
    r = 0
    for c in range(cols):
        if r == len(M):
            break
        while True:
            nz = [i for i in range(r, len(M)) if M[i][c]]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(M[i][c]))
            M[r], M[piv] = M[piv], M[r]
            done = True
            for i in range(r + 1, len(M)):
                if M[i][c]:
                    q = M[i][c] // M[r][c]
                    M[i] = [a - q * b for a, b in zip(M[i], M[r])]
                    if M[i][c]:
                        done = False
            if done:
                break
        if any(M[i][c] for i in range(r, len(M))):
            if M[r][c] < 0:
                M[r] = [-a for a in M[r]]
            for i in range(r):
                q = M[i][c] // M[r][c]
                M[i] = [a - q * b for a, b in zip(M[i], M[r])]
            r += 1
    return [row for row in M if any(row)]
