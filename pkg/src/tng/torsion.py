"""Twisted torsion of deficiency-one presentations.

The Fox Jacobian of the relators, pushed through ``alpha (x) psi``, is a
((g-1)k x gk) matrix of Laurent polynomials.  For a class phi with
phi(x_j) != 0 the torsion is the Wada quotient

    tau = det(A_j) / det(alpha(x_j) t^phi(x_j) - I),

A_j being the Jacobian with block column j removed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import ceil
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import (
    DeficiencyMismatch,
    DenominatorVanishes,
    RankTooLarge,
    RankTooSmall,
    SizeExceeded,
    ZeroClass,
)
from .exact.cyclotomic import CycNum
from .exact.gcd import MAX_GCD_VARS, gcd_many, laurent_gcd
from .exact.laurent import LaurentPoly, exact_divide
from .exact.linalg import det_poly
from .words import AbelianizationData, Presentation, abelianize

MAX_MINORS = 20000


@dataclass(frozen=True)
class TorsionValue:
    """numerator / denominator up to a unit; ``flag`` records the route."""

    numerator: LaurentPoly
    denominator: LaurentPoly
    flag: str = "wada"          # "zero", "wada" or "deltas"

    @classmethod
    def make(cls, num: LaurentPoly, den: LaurentPoly, flag: str = "wada", reduce: bool = True) -> "TorsionValue":
        if num.is_zero():
            return cls.zero(num.nvars, num.m)
        if den.is_zero():
            raise DenominatorVanishes("torsion denominator is zero")
        if reduce and num.nvars <= MAX_GCD_VARS:
            g = laurent_gcd(num, den)
            if not g.is_constant():
                num = exact_divide(num, g)
                den = exact_divide(den, g)
        return cls(num.normalize(), den.normalize(), flag)

    @classmethod
    def zero(cls, nvars: int, m: int = 1) -> "TorsionValue":
        return cls(LaurentPoly.zero(nvars, m), LaurentPoly.one(nvars, m), "zero")

    @property
    def nvars(self) -> int:
        return self.numerator.nvars

    def is_zero(self) -> bool:
        return self.flag == "zero" or self.numerator.is_zero()

    def is_polynomial(self) -> bool:
        """True when the reduced denominator is a unit."""
        return self.is_zero() or self.denominator.normalize().is_monomial()

    def equiv(self, other: "TorsionValue") -> bool:
        if self.is_zero() or other.is_zero():
            return self.is_zero() and other.is_zero()
        return (self.numerator * other.denominator).equiv(other.numerator * self.denominator)

    def __eq__(self, other):
        return isinstance(other, TorsionValue) and self.equiv(other)

    __hash__ = None

    def to_json(self):
        return {"numerator": self.numerator.to_json(), "denominator": self.denominator.to_json(), "flag": self.flag}

    def __repr__(self):
        if self.is_zero():
            return "TorsionValue(0)"
        return f"TorsionValue(({self.numerator!r}) / ({self.denominator!r}))"


@dataclass(frozen=True)
class DeltaTriple:
    delta0: LaurentPoly
    delta1: LaurentPoly
    delta2: LaurentPoly
    b: int


# --- Fox Jacobian ---------------------------------------------------------------


def _check_deficiency(p: Presentation):
    if len(p.relators) != p.ngens - 1:
        raise DeficiencyMismatch(
            f"expected {p.ngens - 1} relators for {p.ngens} generators, got {len(p.relators)}"
        )


def _accumulate(acc, nrows, ncols, nvars, m):
    zero = LaurentPoly.zero(nvars, m)
    out = [[zero] * ncols for _ in range(nrows)]
    for (i, j), polys in acc.items():
        terms = {}
        for deg, zs in polys.items():
            raw = [0] * m
            for z, c in zs.items():
                raw[z] += c
            val = CycNum(m, raw)
            if val:
                terms[deg] = val
        if terms:
            out[i][j] = LaurentPoly._raw(nvars, terms, m)
    return out


def fox_jacobian(p: Presentation, alpha, psi: Sequence[Sequence[int]]):
    """Block matrix with block (i, j) = (alpha (x) psi)(d r_i / d x_j).

    ``psi`` has one integer vector per generator (the exponent of t).
    """
    _check_deficiency(p)
    k = alpha.dim
    m = alpha.m
    g = p.ngens
    b = len(psi[0]) if len(psi) else 1
    acc: Dict[Tuple[int, int], Dict[tuple, Dict[int, int]]] = {}
    inv_cache = {}
    for ri, r in enumerate(p.relators):
        perm = list(range(k))
        exps = [0] * k
        deg = [0] * b
        for code in r.codes:
            x = abs(code) - 1
            if code > 0:
                _add_term(acc, ri * k, x * k, perm, exps, tuple(deg), 1, m, k)
                sp, se = alpha.perms[x], alpha.exps[x]
                sign = 1
            else:
                if x not in inv_cache:
                    inv_cache[x] = _inverse(alpha.perms[x], alpha.exps[x], m)
                sp, se = inv_cache[x]
                sign = -1
            for a in range(k):
                rr = perm[a]
                exps[a] += se[rr]
                perm[a] = sp[rr]
            for c in range(b):
                deg[c] += sign * psi[x][c]
            if code < 0:
                _add_term(acc, ri * k, x * k, perm, exps, tuple(deg), -1, m, k)
    return _accumulate(acc, (g - 1) * k, g * k, b, m)


def _add_term(acc, row0, col0, perm, exps, deg, coef, m, k):
    for a in range(k):
        cell = acc.setdefault((row0 + a, col0 + perm[a]), {}).setdefault(deg, {})
        z = exps[a] % m
        cell[z] = cell.get(z, 0) + coef


def _inverse(perm, exps, m):
    k = len(perm)
    ip = [0] * k
    ie = [0] * k
    for i in range(k):
        ip[perm[i]] = i
        ie[perm[i]] = (-exps[i]) % m
    return tuple(ip), tuple(ie)


def delete_block_column(J, j: int, k: int):
    return [row[: j * k] + row[(j + 1) * k:] for row in J]


def generator_block_det(alpha, x: int, shift: Sequence[int]) -> LaurentPoly:
    """det(alpha(x) * t^shift - I), via the cycle decomposition of the monomial matrix.

    A cycle of length L whose entries multiply to zeta^c contributes the
    factor (-1)^L (1 - zeta^c t^(L*shift)).
    """
    k, m = alpha.dim, alpha.m
    nvars = len(shift)
    perm, exps = alpha.perms[x], alpha.exps[x]
    seen = [False] * k
    result = LaurentPoly.one(nvars, m)
    sign = 1
    for s in range(k):
        if seen[s]:
            continue
        L, c, i = 0, 0, s
        while not seen[i]:
            seen[i] = True
            c += exps[i]
            i = perm[i]
            L += 1
        if L % 2:
            sign = -sign
        f = LaurentPoly._raw(nvars, {tuple(L * e for e in shift): CycNum.root(m, c)}, m)
        result = result * (LaurentPoly.one(nvars, m) - f)
    return result if sign > 0 else -result


# --- univariate torsion -------------------------------------------------------


def wada_parts(p: Presentation, alpha, values: Sequence[int], column: Optional[int] = None):
    """(det A_j, det(alpha(x_j) t^v_j - I), j) for the class with the given generator values."""
    _check_deficiency(p)
    if not any(values):
        raise ZeroClass("the class vanishes on every generator")
    if column is None:
        column = next(j for j, v in enumerate(values) if v)
    elif not values[column]:
        raise DenominatorVanishes(f"class is zero on generator {column}")
    psi = [[v] for v in values]
    J = fox_jacobian(p, alpha, psi)
    A = delete_block_column(J, column, alpha.dim)
    num = det_poly(A, 1) if A else LaurentPoly.one(1, alpha.m)
    den = generator_block_det(alpha, column, [values[column]])
    return num, den, column


def class_values(p: Presentation, phi: Sequence[int], ab: AbelianizationData | None = None) -> List[int]:
    ab = ab or abelianize(p)
    vals = ab.class_on_generators(list(phi))
    if not any(vals):
        raise ZeroClass("phi is the zero class")
    return vals


def tau_univariate(p: Presentation, alpha, phi: Sequence[int], column: Optional[int] = None,
                   ab: AbelianizationData | None = None) -> TorsionValue:
    """tau(N, phi, alpha) as a normalized quotient in one variable."""
    _check_deficiency(p)
    vals = class_values(p, phi, ab)
    return tau_from_values(p, alpha, vals, column)


def tau_from_values(p: Presentation, alpha, values: Sequence[int], column: Optional[int] = None) -> TorsionValue:
    """Wada quotient for a class given directly by its values on the generators."""
    num, den, _ = wada_parts(p, alpha, values, column)
    return TorsionValue.make(num, den, "wada")


def deg_from_values(p: Presentation, alpha, values: Sequence[int]) -> int:
    """deg tau without gcd or normalization: spreads are additive."""
    num, den, _ = wada_parts(p, alpha, values)
    if num.is_zero():
        return 0
    return max(0, num.spread(0) - den.spread(0))


def deg_tau(v: TorsionValue) -> int:
    if v.nvars != 1:
        raise ValueError("deg_tau needs a univariate torsion value")
    if v.is_zero():
        return 0
    return max(0, v.numerator.spread(0) - v.denominator.spread(0))


def lower_bound(deg: int, k: int) -> Tuple[Fraction, int]:
    """Thurston-norm lower bound deg/k and its integer ceiling.

    The ceiling relies on the Thurston norm being an integer on integral
    classes; callers report both values.
    """
    if k < 1:
        raise ValueError("dimension must be positive")
    q = Fraction(deg, k)
    return q, ceil(q)


# --- multivariable torsion -----------------------------------------------------


def multivariable_parts(p: Presentation, alpha, ab: AbelianizationData | None = None):
    """Jacobian determinants and generator block determinants in b variables."""
    _check_deficiency(p)
    ab = ab or abelianize(p)
    b = ab.free_rank
    if b < 2:
        raise RankTooSmall(f"multivariable torsion needs b >= 2, got {b}")
    if b > MAX_GCD_VARS:
        raise RankTooLarge(f"multivariable torsion limited to b <= {MAX_GCD_VARS}, got {b}")
    psi = [list(r) for r in ab.projection]
    J = fox_jacobian(p, alpha, psi)
    k = alpha.dim
    nums, dens = [], []
    for j in range(p.ngens):
        A = delete_block_column(J, j, k)
        nums.append(det_poly(A, b) if A else LaurentPoly.one(b, alpha.m))
        dens.append(generator_block_det(alpha, j, psi[j]))
    return nums, dens, psi


def delta0(alpha, psi, dens=None) -> LaurentPoly:
    """gcd of the k x k minors of the stacked column (alpha(x_j) psi(x_j) - I)_j."""
    k = alpha.dim
    g = len(psi)
    b = len(psi[0])
    dens = dens if dens is not None else [generator_block_det(alpha, j, psi[j]) for j in range(g)]
    g0 = gcd_many(dens)
    if g0.is_constant() and not g0.is_zero():
        return g0
    # stacked gk x k matrix
    rows = []
    one = LaurentPoly.one(b, alpha.m)
    for j in range(g):
        for a in range(k):
            row = [LaurentPoly.zero(b, alpha.m)] * k
            col = alpha.perms[j][a]
            mono = LaurentPoly._raw(b, {tuple(psi[j]): CycNum.root(alpha.m, alpha.exps[j][a])}, alpha.m)
            row = list(row)
            row[col] = mono
            row[a] = row[a] - one
            rows.append(row)
    count = 0
    for combo in itertools.combinations(range(g * k), k):
        count += 1
        if count > MAX_MINORS:
            raise SizeExceeded("too many minors for the order of H_0")
        d = det_poly([rows[i] for i in combo], b)
        if d.is_zero():
            continue
        g0 = laurent_gcd(g0, d)
        if g0.is_constant():
            break
    return g0


def tau_multivariable(p: Presentation, alpha, ab: AbelianizationData | None = None,
                      with_deltas: bool = False):
    """tau(N, alpha) in Z[F] = Q(zeta)[t_1^±1, ..., t_b^±1].

    Delta_1 is the gcd over j of det(A_j).  Since det(A_j) = tau * det(alpha(x_j)psi(x_j) - I)
    for every j, dividing by the gcd of the generator block determinants
    gives tau itself.
    """
    nums, dens, psi = multivariable_parts(p, alpha, ab)
    b = len(psi[0])
    d1 = gcd_many(nums)
    d0 = delta0(alpha, psi, dens)
    if d1.is_zero():
        tv = TorsionValue.zero(b, alpha.m)
    else:
        gd = gcd_many(dens)
        tv = TorsionValue.make(d1, gd, "deltas")
    if with_deltas:
        return tv, DeltaTriple(d0, d1, LaurentPoly.one(b, alpha.m), b)
    return tv


# --- specialization and twisting ---------------------------------------------------


def specialize(v: TorsionValue, phi: Sequence[int]) -> TorsionValue:
    """Apply f -> t^phi(f) to numerator and denominator."""
    if not any(phi):
        raise ZeroClass("cannot specialize at the zero class")
    if v.is_zero():
        return TorsionValue.zero(1, v.numerator.m)
    num = v.numerator.specialize(list(phi))
    den = v.denominator.specialize(list(phi))
    if den.is_zero():
        raise DenominatorVanishes("phi annihilates the denominator")
    return TorsionValue.make(num, den, v.flag)


def twist_by_character(v, m: int, exps: Sequence[int]):
    """Coefficientwise twist f -> zeta_m^<e, f> f of a TorsionValue, DeltaTriple or LaurentPoly."""
    if isinstance(v, LaurentPoly):
        return v.twist(m, exps)
    if isinstance(v, DeltaTriple):
        return DeltaTriple(v.delta0.twist(m, exps), v.delta1.twist(m, exps), v.delta2.twist(m, exps), v.b)
    if v.is_zero():
        return v
    return TorsionValue.make(v.numerator.twist(m, exps), v.denominator.twist(m, exps), v.flag)


# --- fast certified degrees for many characters of one cover ---------------------


class DegreeTemplate:
    """Degrees of tau for all induced reps of one cover, certified cheaply.

    For the Jacobian with block column ``column`` deleted, every row of
    block row r has its terms at the prefix degrees of r, whatever the
    character.  Let D_top be the sum of the row maxima and L_top the matrix
    of top-degree coefficients; then the coefficient of t^D_top in det(A_j)
    is det(L_top).  If det(L_top) is nonzero modulo a prime p = 1 mod m
    (with zeta_m sent to a primitive root mod p, a ring homomorphism), the
    top degree is exactly D_top; likewise at the bottom.  Characters for
    which either test fails are left to the exact computation.
    """

    def __init__(self, p: Presentation, cover, values: Sequence[int], column: Optional[int] = None):
        import numpy as np

        _check_deficiency(p)
        if not any(values):
            raise ZeroClass("the class vanishes on every generator")
        if column is None:
            column = next(j for j, v in enumerate(values) if v)
        self.column = column
        self.k = k = cover.index
        self.ng = cover.presentation.ngens
        self.den_spread = k * abs(values[column])
        g = p.ngens
        act = cover.quotient.action
        inv = _inverse_rows(act)
        blocks = [x for x in range(g) if x != column]
        bpos = {x: i for i, x in enumerate(blocks)}
        top, bot = [], []
        self.dtop = 0
        self.dbot = 0
        for ri, r in enumerate(p.relators):
            # prefix degrees are the same for every coset
            terms_deg = []
            d = 0
            for code in r.codes:
                x = abs(code) - 1
                if code > 0:
                    if x != column:
                        terms_deg.append(d)
                    d += values[x]
                else:
                    d -= values[x]
                    if x != column:
                        terms_deg.append(d)
            if not terms_deg:
                raise ValueError("a relator has no Fox terms outside the deleted column")
            hi, lo = max(terms_deg), min(terms_deg)
            self.dtop += k * hi
            self.dbot += k * lo
            for a in range(k):
                i = a
                vec = np.zeros(self.ng, dtype=np.int64)
                d = 0
                for code in r.codes:
                    x = abs(code) - 1
                    if code > 0:
                        if x != column and d in (hi, lo):
                            entry = (ri * k + a, bpos[x] * k + i, 1, vec.copy())
                            (top if d == hi else bot).append(entry)
                            if hi == lo:
                                bot.append(entry)
                        s = cover.schreier[i][x]
                        if s is not None:
                            vec[s] += 1
                        i = act[i][x]
                        d += values[x]
                    else:
                        j = inv[i][x]
                        s = cover.schreier[j][x]
                        if s is not None:
                            vec[s] -= 1
                        i = j
                        d -= values[x]
                        if x != column and d in (hi, lo):
                            entry = (ri * k + a, bpos[x] * k + i, -1, vec.copy())
                            (top if d == hi else bot).append(entry)
                            if hi == lo:
                                bot.append(entry)
        self.size = (g - 1) * k
        self._top = self._pack(top)
        self._bot = self._pack(bot)

    @property
    def upper_bound(self) -> int:
        """deg tau for every character is at most this (each det term takes one entry per row)."""
        return max(0, self.dtop - self.dbot - self.den_spread)

    @staticmethod
    def _pack(terms):
        import numpy as np

        rows = np.array([t[0] for t in terms], dtype=np.int64)
        cols = np.array([t[1] for t in terms], dtype=np.int64)
        signs = np.array([t[2] for t in terms], dtype=np.int64)
        C = np.array([t[3] for t in terms], dtype=np.int64)
        return rows, cols, signs, C

    def _nonsingular(self, packed, V, m, p):
        import numpy as np

        from .exact.modular import det_mod_batch, primitive_root

        rows, cols, signs, C = packed
        B = V.shape[0]
        n = self.size
        omega = pow(primitive_root(p), (p - 1) // m, p)
        powers = np.array([pow(omega, e, p) for e in range(m)], dtype=np.int64)
        E = (V @ C.T) % m                                  # (B, T)
        vals = (powers[E] * signs[None, :]) % p
        L = np.zeros(B * n * n, dtype=np.int64)
        flat = (np.arange(B, dtype=np.int64)[:, None] * n * n + rows[None, :] * n + cols[None, :])
        np.add.at(L, flat.ravel(), vals.ravel())
        L = (L % p).reshape(B, n, n)
        return det_mod_batch(L, p) != 0

    def degrees(self, V, m: int, chunk: int = 512):
        """Certified deg tau for each row of character values V, or -1."""
        import numpy as np

        from .exact.modular import primes_one_mod

        V = np.asarray(V, dtype=np.int64).reshape(-1, self.ng)
        out = np.full(V.shape[0], -1, dtype=np.int64)
        spread = self.dtop - self.dbot
        deg = max(0, spread - self.den_spread)
        for p in primes_one_mod(m, 2):
            todo = np.nonzero(out < 0)[0]
            for s in range(0, len(todo), chunk):
                idx = todo[s: s + chunk]
                ok = self._nonsingular(self._top, V[idx], m, p) & self._nonsingular(self._bot, V[idx], m, p)
                out[idx[ok]] = deg
        return out


def _inverse_rows(act):
    k = len(act)
    g = len(act[0]) if act else 0
    inv = [[0] * g for _ in range(k)]
    for i in range(k):
        for x in range(g):
            inv[act[i][x]][x] = i
    return inv
