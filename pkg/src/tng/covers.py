"""Finite quotients, kernel presentations, characters and induced reps.

Permutations are tuples ``p`` with ``i -> p[i]`` and act on the right:
the product ``p * q`` sends ``i`` to ``q[p[i]]``.  A word therefore acts on
the point ``i`` letter by letter from left to right, which is also how the
coset action of the group on the cosets of a kernel is written.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, replace
from functools import lru_cache
from math import gcd
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .errors import BudgetExhausted, DegreeExceeded
from .exact.cyclotomic import CycNum
from .words import AbelianizationData, Presentation, Word, abelianize

Perm = Tuple[int, ...]

MAX_DEGREE = 7


def perm_mul(p: Perm, q: Perm) -> Perm:
    return tuple(q[x] for x in p)


def perm_inv(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def conjugate(p: Perm, c: Perm) -> Perm:
    """Relabel the points of p by c: the result sends c[i] to c[p[i]]."""
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[c[i]] = c[x]
    return tuple(out)


def perm_of_word(images: Sequence[Perm], word: Word) -> Perm:
    n = len(images[0]) if images else 0
    inv = {}
    cur = list(range(n))
    for code in word.codes:
        g = abs(code) - 1
        if code > 0:
            p = images[g]
        else:
            if g not in inv:
                inv[g] = perm_inv(images[g])
            p = inv[g]
        cur = [p[x] for x in cur]
    return tuple(cur)


@lru_cache(maxsize=None)
def _class_reps(n: int) -> Tuple[Perm, ...]:
    """Lexicographically minimal element of every conjugacy class of S_n."""
    allp = list(itertools.permutations(range(n)))
    seen = set()
    reps = []
    for p in allp:
        if p in seen:
            continue
        cls = {conjugate(p, c) for c in allp}
        seen |= cls
        reps.append(min(cls))
    return tuple(sorted(reps))


@lru_cache(maxsize=None)
def _centralizer(p: Perm) -> Tuple[Perm, ...]:
    return tuple(c for c in itertools.permutations(range(len(p))) if conjugate(p, c) == p)


@dataclass(frozen=True)
class PermHom:
    """A homomorphism to S_n, one image per generator, in canonical form."""

    degree: int
    images: Tuple[Perm, ...]

    def of_word(self, w: Word) -> Perm:
        return perm_of_word(self.images, w)

    def to_json(self):
        return {"degree": self.degree, "images": [list(p) for p in self.images]}


def _relators_ok(rels, images, n) -> bool:
    """Check every relator from every start point with partially defined perms.

    ``images`` holds lists with ``-1`` for undefined points.  A trace that
    completes must return to its start point.
    """
    invs = []
    for im in images:
        inv = [-1] * n
        for i, x in enumerate(im):
            if x >= 0:
                inv[x] = i
        invs.append(inv)
    for codes in rels:
        for s in range(n):
            cur = s
            for c in codes:
                cur = images[c - 1][cur] if c > 0 else invs[-c - 1][cur]
                if cur < 0:
                    break
            else:
                if cur != s:
                    return False
    return True


def enumerate_perm_homs(p: Presentation, n: int) -> Iterator[PermHom]:
    """All homs to S_n up to simultaneous conjugation, in lexicographic order."""
    if n < 1 or n > MAX_DEGREE:
        raise DegreeExceeded(f"degree must be between 1 and {MAX_DEGREE}, got {n}")
    g = p.ngens
    rels = [r.codes for r in p.relators]
    for first in _class_reps(n):
        cent = _centralizer(first)
        images = [list(first)] + [[-1] * n for _ in range(g - 1)]
        if not _relators_ok(rels, images, n):
            continue
        yield from _extend(rels, images, 1, 0, n, g, first, cent)


def _extend(rels, images, gen, point, n, g, first, cent):
    if gen == g:
        imgs = tuple(tuple(im) for im in images)
        for c in cent:
            other = tuple(conjugate(q, c) for q in imgs)
            if other < imgs:
                return
        yield PermHom(n, imgs)
        return
    used = set(x for x in images[gen] if x >= 0)
    nxt = (gen, point + 1) if point + 1 < n else (gen + 1, 0)
    for v in range(n):
        if v in used:
            continue
        images[gen][point] = v
        if _relators_ok(rels, images, n):
            yield from _extend(rels, images, nxt[0], nxt[1], n, g, first, cent)
        images[gen][point] = -1


@dataclass(frozen=True)
class FiniteQuotient:
    """Image of a PermHom; cosets of the kernel are labelled by elements.

    ``elements[i]`` is the image of the coset with label ``i``; labels are
    assigned in breadth-first order from the identity over the generators,
    so the coset table ``action`` only depends on the kernel.
    """

    source: PermHom
    elements: Tuple[Perm, ...]
    action: Tuple[Tuple[int, ...], ...]     # action[i][x] = label of coset i.x

    @property
    def order(self) -> int:
        return len(self.elements)

    def key(self) -> Tuple[Tuple[int, ...], ...]:
        """Canonical coset table; equal keys mean equal kernels."""
        return self.action


def image_and_kernel(h: PermHom) -> FiniteQuotient:
    ident = tuple(range(h.degree))
    index = {ident: 0}
    elements = [ident]
    action: List[List[int]] = []
    i = 0
    while i < len(elements):
        row = []
        for x in h.images:
            e = perm_mul(elements[i], x)
            if e not in index:
                index[e] = len(elements)
                elements.append(e)
            row.append(index[e])
        action.append(row)
        i += 1
    return FiniteQuotient(h, tuple(elements), tuple(tuple(r) for r in action))


def trivial_quotient(p: Presentation) -> FiniteQuotient:
    return image_and_kernel(PermHom(1, tuple((0,) for _ in range(p.ngens))))


@dataclass(frozen=True)
class CoverPresentation:
    """Kernel presentation produced by Reidemeister-Schreier rewriting."""

    base: Presentation
    quotient: FiniteQuotient
    transversal: Tuple[Word, ...]
    presentation: Presentation
    schreier: Tuple[Tuple[Optional[int], ...], ...]   # schreier[i][x] -> kernel generator or None

    @property
    def index(self) -> int:
        return self.quotient.order

    def generator_word(self, s: int) -> Word:
        """The kernel generator s as a word in the base generators."""
        for i, row in enumerate(self.schreier):
            for x, v in enumerate(row):
                if v == s:
                    j = self.quotient.action[i][x]
                    return self.transversal[i] * Word([x + 1]) * self.transversal[j].inverse()
        raise IndexError(s)

    def rewrite(self, w: Word, start: int = 0) -> Tuple[Word, int]:
        """Rewrite t_start * w into kernel generators; returns (word, end coset)."""
        act = self.quotient.action
        inv = _inverse_action(act)
        i = start
        out = []
        for code in w.codes:
            x = abs(code) - 1
            if code > 0:
                s = self.schreier[i][x]
                if s is not None:
                    out.append(s + 1)
                i = act[i][x]
            else:
                j = inv[i][x]
                s = self.schreier[j][x]
                if s is not None:
                    out.append(-(s + 1))
                i = j
        return Word(out), i

    def pullback_projection(self, psi: Sequence[Sequence[int]]) -> List[List[int]]:
        """psi composed with the inclusion, one row per kernel generator."""
        b = len(psi[0]) if psi else 0
        tp = [self._word_vec(t, psi, b) for t in self.transversal]
        rows = []
        for s in range(self.presentation.ngens):
            i, x = self._locate(s)
            j = self.quotient.action[i][x]
            rows.append([tp[i][c] + psi[x][c] - tp[j][c] for c in range(b)])
        return rows

    def _locate(self, s):
        for i, row in enumerate(self.schreier):
            for x, v in enumerate(row):
                if v == s:
                    return i, x
        raise IndexError(s)

    @staticmethod
    def _word_vec(w, psi, b):
        v = [0] * b
        for code in w.codes:
            row = psi[abs(code) - 1]
            sg = 1 if code > 0 else -1
            for c in range(b):
                v[c] += sg * row[c]
        return v


def _inverse_action(act):
    k = len(act)
    g = len(act[0]) if act else 0
    inv = [[0] * g for _ in range(k)]
    for i in range(k):
        for x in range(g):
            inv[act[i][x]][x] = i
    return inv


def reidemeister_schreier(p: Presentation, q: FiniteQuotient) -> CoverPresentation:
    k = q.order
    g = p.ngens
    act = q.action
    # breadth-first Schreier transversal over positive generators
    trans: List[Optional[Word]] = [None] * k
    tree = set()
    trans[0] = Word()
    queue = [0]
    for i in queue:
        for x in range(g):
            j = act[i][x]
            if trans[j] is None:
                trans[j] = trans[i] * Word([x + 1])
                tree.add((i, x))
                queue.append(j)
    schreier: List[List[Optional[int]]] = []
    names = []
    count = 0
    for i in range(k):
        row = []
        for x in range(g):
            if (i, x) in tree:
                row.append(None)
            else:
                row.append(count)
                names.append(f"s{i}_{x}")
                count += 1
        schreier.append(row)
    if k == 1:
        names = list(p.generators)
    cover = CoverPresentation(p, q, tuple(trans), Presentation(tuple(names), ()), tuple(tuple(r) for r in schreier))
    rels = []
    for r in p.relators:
        for i in range(k):
            w, end = cover.rewrite(r, i)
            if end != i:
                raise ValueError("relator does not lie in the kernel")
            rels.append(w)
    pres = Presentation(tuple(names), tuple(rels), name=f"{p.name}~{k}" if p.name else "")
    return replace(cover, presentation=pres)


def subgroup_h1(c: CoverPresentation) -> AbelianizationData:
    return abelianize(c.presentation)


# --- characters ---------------------------------------------------------------


@dataclass(frozen=True)
class FinChar:
    """Character of a group onto Z/m, given by its value on each generator."""

    order: int
    values: Tuple[int, ...]

    def of_word(self, w: Word) -> int:
        s = 0
        for code in w.codes:
            s += self.values[abs(code) - 1] if code > 0 else -self.values[abs(code) - 1]
        return s % self.order

    def exact_order(self) -> int:
        d = self.order
        for v in self.values:
            d = gcd(d, v)
        return self.order // d


def enumerate_characters(h1: AbelianizationData, m: int) -> List[FinChar]:
    """All homomorphisms H_1 -> Z/m, in lexicographic order of coordinates."""
    if m < 1:
        raise ValueError("character order must be positive")
    ranges = [range(m)] * h1.free_rank
    for d in h1.torsion:
        step = m // gcd(d, m)
        ranges.append(range(0, m, step))
    ngen = len(h1.projection)
    out = []
    for coords in itertools.product(*ranges):
        free = coords[: h1.free_rank]
        tors = coords[h1.free_rank:]
        vals = []
        for j in range(ngen):
            v = sum(a * c for a, c in zip(h1.projection[j], free))
            v += sum(a * c for a, c in zip(h1.torsion_projection[j], tors))
            vals.append(v % m)
        out.append(FinChar(m, tuple(vals)))
    return out


def deck_action_matrices(c: CoverPresentation, cosets: Sequence[int] | None = None) -> List[List[List[int]]]:
    """Action of deck transformations on the kernel generators, in H_1.

    Row s of the matrix for coset j holds the exponent sums of
    t_j s t_j^-1 rewritten in the kernel generators.
    """
    ng = c.presentation.ngens
    words = [c.generator_word(s) for s in range(ng)]
    mats = []
    for j in (range(c.index) if cosets is None else cosets):
        t = c.transversal[j]
        rows = []
        for s in range(ng):
            w, _ = c.rewrite(t * words[s] * t.inverse(), 0)
            rows.append(w.exponent_sums(ng))
        mats.append(rows)
    return mats


ORBIT_TABLE_LIMIT = 1 << 23


class CharacterSpace:
    """All characters H_1(kernel) -> Z/m, indexed by a mixed-radix code.

    A character is given by digits: one in Z/m per free coordinate of H_1
    and one in Z/gcd(d, m) per torsion summand Z/d (value = digit * m/gcd).
    Codes count through the digits lexicographically, so code order matches
    :func:`enumerate_characters`.

    With ``symmetries`` (a list of affine maps on values) only one member
    per orbit is emitted: the smallest code, and only if every member of the
    orbit has exact order m (orbits that reach a smaller order were already
    covered at that order).
    """

    def __init__(self, h1: AbelianizationData, m: int, symmetries=()):
        self.h1 = h1
        self.m = m
        b = h1.free_rank
        self.radices = [m] * b + [gcd(d, m) for d in h1.torsion]
        self.steps = [1] * b + [m // gcd(d, m) for d in h1.torsion]
        ng = len(h1.projection)
        self.ngens = ng
        # values = Q digits (mod m)
        self.Q = [
            [h1.projection[j][i] for i in range(b)]
            + [h1.torsion_projection[j][i] * self.steps[b + i] for i in range(len(h1.torsion))]
            for j in range(ng)
        ]
        self.size = 1
        for r in self.radices:
            self.size *= r
        self.symmetries = list(symmetries)
        self._maps = [self._affine(f) for f in self.symmetries]
        self._table = None
        if self._maps and self.size <= ORBIT_TABLE_LIMIT:
            self._table = self._orbit_table()

    # coordinates ------------------------------------------------------------

    def decode(self, code: int) -> List[int]:
        digits = []
        for r in reversed(self.radices):
            digits.append(code % r)
            code //= r
        return digits[::-1]

    def encode(self, digits: Sequence[int]) -> int:
        code = 0
        for d, r in zip(digits, self.radices):
            code = code * r + d % r
        return code

    def values_of(self, digits: Sequence[int]) -> Tuple[int, ...]:
        return tuple(sum(q * d for q, d in zip(row, digits)) % self.m for row in self.Q)

    def digits_of(self, values: Sequence[int]) -> List[int]:
        out = []
        for w, step, r in zip(self.h1.basis_words, self.steps, self.radices):
            v = sum(a * x for a, x in zip(w, values)) % self.m
            if v % step:
                raise ValueError("values do not define a character")
            out.append((v // step) % r)
        return out

    def char(self, code: int) -> FinChar:
        return FinChar(self.m, self.values_of(self.decode(code)))

    def order_of_digits(self, digits) -> int:
        o = 1
        for d, r in zip(digits, self.radices):
            o = _lcm(o, r // gcd(d, r))
        return o

    # symmetries ---------------------------------------------------------------

    def _affine(self, f):
        """Matrix and shift of a value-space map, in digit coordinates."""
        n = len(self.radices)
        zero = self.digits_of(f(tuple([0] * self.ngens)))
        cols = []
        for i in range(n):
            e = [0] * n
            e[i] = 1
            img = self.digits_of(f(self.values_of(e)))
            cols.append([(x - z) for x, z in zip(img, zero)])
        M = [[cols[i][j] for i in range(n)] for j in range(n)]
        return M, zero

    def _apply(self, M, shift, digits):
        return [
            (sum(a * d for a, d in zip(row, digits)) + s) % r
            for row, s, r in zip(M, shift, self.radices)
        ]

    def orbit(self, code: int) -> List[int]:
        start = self.decode(code)
        seen = {code}
        stack = [start]
        while stack:
            d = stack.pop()
            for M, shift in self._maps:
                e = self._apply(M, shift, d)
                c = self.encode(e)
                if c not in seen:
                    seen.add(c)
                    stack.append(e)
        return sorted(seen)

    def _orbit_table(self):
        import numpy as np

        n = len(self.radices)
        rad = np.array(self.radices, dtype=np.int64)
        weights = np.ones(n, dtype=np.int64)
        for i in range(n - 2, -1, -1):
            weights[i] = weights[i + 1] * rad[i + 1]
        codes = np.arange(self.size, dtype=np.int64)
        digits = (codes[:, None] // weights[None, :]) % rad[None, :]
        order = np.ones(self.size, dtype=np.int64)
        for i in range(n):
            g = np.gcd(digits[:, i], rad[i])
            o = rad[i] // g
            order = np.lcm(order, o)
        images = []
        for M, shift in self._maps:
            Mx = np.array(M, dtype=np.int64)
            img = (digits @ Mx.T + np.array(shift, dtype=np.int64)) % rad
            images.append(img @ weights)
        del digits
        label = codes.copy()
        low = order.copy()
        while True:
            changed = False
            for img in images:
                nl = np.minimum(label, label[img])
                no = np.minimum(low, low[img])
                np.minimum.at(nl, img, nl)
                np.minimum.at(no, img, no)
                if not changed and (not np.array_equal(nl, label) or not np.array_equal(no, low)):
                    changed = True
                label, low = nl, no
            if not changed:
                break
        keep = (label == codes) & (low == self.m) & (order == self.m)
        return np.nonzero(keep)[0]

    # iteration ---------------------------------------------------------------------

    def is_emitted(self, code: int) -> bool:
        digits = self.decode(code)
        if self.order_of_digits(digits) != self.m:
            return False
        if not self._maps:
            return True
        orb = self.orbit(code)
        return orb[0] == code and all(self.order_of_digits(self.decode(c)) == self.m for c in orb)

    def next_code(self, start: int = 0) -> Optional[int]:
        """Smallest emitted code >= start, or None."""
        if self._table is not None:
            import numpy as np

            i = int(np.searchsorted(self._table, start))
            return int(self._table[i]) if i < len(self._table) else None
        for code in range(start, self.size):
            if self.is_emitted(code):
                return code
        return None

    def emitted(self) -> Iterator[int]:
        code = self.next_code(0)
        while code is not None:
            yield code
            code = self.next_code(code + 1)


def cover_symmetries(c: CoverPresentation, m: int, twist: Optional[Sequence[int]] = None):
    """Deck, Galois and (optionally) twist symmetries on character values.

    Deck transformations by the images of the base generators generate the
    deck group; Galois automorphisms zeta -> zeta^u permute the characters of
    each order; ``twist`` is the value vector of a character of the base
    group restricted to the kernel, added as a translation.
    """
    act = c.quotient.action
    gens = sorted({act[0][x] for x in range(c.base.ngens)} - {0})
    maps = []
    for A in deck_action_matrices(c, gens):
        maps.append(lambda v, A=A: tuple(sum(a * x for a, x in zip(row, v)) % m for row in A))
    for u in range(2, m):
        if gcd(u, m) == 1:
            maps.append(lambda v, u=u: tuple(u * x % m for x in v))
    if twist is not None and any(x % m for x in twist):
        maps.append(lambda v, t=tuple(twist): tuple((x + y) % m for x, y in zip(v, t)))
    return maps


def _lcm(a, b):
    return a * b // gcd(a, b)



def count_characters(h1: AbelianizationData, m: int) -> int:
    c = m ** h1.free_rank
    for d in h1.torsion:
        c *= gcd(d, m)
    return c


# --- induced representations -------------------------------------------------


@dataclass(frozen=True)
class InducedRep:
    """Monomial representation: x -> matrix with entry zeta_m^exps[x][i] at (i, perms[x][i]).

    Matrices act on row vectors, so the map on words is a homomorphism.
    """

    dim: int
    m: int
    perms: Tuple[Perm, ...]
    exps: Tuple[Tuple[int, ...], ...]

    def word_monomial(self, w: Word) -> Tuple[Perm, Tuple[int, ...]]:
        k = self.dim
        perm = list(range(k))
        exps = [0] * k
        invs = {}
        for code in w.codes:
            x = abs(code) - 1
            if code > 0:
                sp, se = self.perms[x], self.exps[x]
            else:
                if x not in invs:
                    invs[x] = _monomial_inverse(self.perms[x], self.exps[x], self.m)
                sp, se = invs[x]
            for i in range(k):
                r = perm[i]
                exps[i] += se[r]
                perm[i] = sp[r]
        return tuple(perm), tuple(e % self.m for e in exps)

    def matrix(self, x: int):
        """Dense k x k CycNum matrix of generator x."""
        return self.word_matrix(Word([x + 1]))

    def word_matrix(self, w: Word):
        perm, exps = self.word_monomial(w)
        zero = CycNum.from_rational(0, self.m)
        out = [[zero] * self.dim for _ in range(self.dim)]
        for i in range(self.dim):
            out[i][perm[i]] = CycNum.root(self.m, exps[i])
        return out

    def is_identity(self, w: Word) -> bool:
        perm, exps = self.word_monomial(w)
        return perm == tuple(range(self.dim)) and not any(exps)


def _monomial_inverse(perm, exps, m):
    k = len(perm)
    ip = [0] * k
    ie = [0] * k
    for i in range(k):
        ip[perm[i]] = i
        ie[perm[i]] = (-exps[i]) % m
    return tuple(ip), tuple(ie)


def induce_character(p: Presentation, q: FiniteQuotient, c: CoverPresentation, rho: FinChar) -> InducedRep:
    k = q.order
    perms = []
    exps = []
    for x in range(p.ngens):
        perms.append(tuple(q.action[i][x] for i in range(k)))
        row = []
        for i in range(k):
            s = c.schreier[i][x]
            row.append(0 if s is None else rho.values[s] % rho.order)
        exps.append(tuple(row))
    return InducedRep(k, rho.order, tuple(perms), tuple(exps))


def trivial_rep(p: Presentation) -> InducedRep:
    return InducedRep(1, 1, tuple((0,) for _ in range(p.ngens)), tuple((0,) for _ in range(p.ngens)))


def one_dim_rep(p: Presentation, m: int, values: Sequence[int]) -> InducedRep:
    """The 1-dimensional rep x_j -> zeta_m^values[j] (must kill the relators)."""
    return InducedRep(1, m, tuple((0,) for _ in range(p.ngens)), tuple((v % m,) for v in values))


# --- systematic enumeration ---------------------------------------------------


class QuotientCatalog:
    """Per-presentation cache of homs, quotients, covers and kernel H_1.

    Everything stored is a pure function of the presentation, so sharing a
    catalog never changes the enumeration order.
    """

    def __init__(self, p: Presentation):
        self.p = p
        self._homs: Dict[int, List[PermHom]] = {}
        self._quot: Dict[Tuple[int, int], FiniteQuotient] = {}
        self._cover: Dict[Tuple[int, int], CoverPresentation] = {}
        self._h1: Dict[Tuple[int, int], AbelianizationData] = {}
        self._chars: Dict[tuple, CharacterSpace] = {}
        self._fresh: Dict[Tuple[int, int], bool] = {}
        self._keys_upto: Dict[int, set] = {}
        self._base_h1: Optional[AbelianizationData] = None

    def homs(self, n: int) -> List[PermHom]:
        if n not in self._homs:
            self._homs[n] = list(enumerate_perm_homs(self.p, n))
        return self._homs[n]

    def quotient(self, n: int, h: int) -> FiniteQuotient:
        if (n, h) not in self._quot:
            self._quot[(n, h)] = image_and_kernel(self.homs(n)[h])
        return self._quot[(n, h)]

    def is_new_kernel(self, n: int, h: int) -> bool:
        """False when an earlier hom (smaller degree, or same degree and
        smaller index) already has the same kernel."""
        if (n, h) not in self._fresh:
            earlier = set()
            for d in range(1, n):
                earlier |= self._all_keys(d)
            key = self.quotient(n, h).key()
            fresh = key not in earlier
            if fresh:
                fresh = all(self.quotient(n, j).key() != key for j in range(h))
            self._fresh[(n, h)] = fresh
        return self._fresh[(n, h)]

    def _all_keys(self, n):
        if n not in self._keys_upto:
            self._keys_upto[n] = {self.quotient(n, j).key() for j in range(len(self.homs(n)))}
        return self._keys_upto[n]

    def cover(self, n: int, h: int) -> CoverPresentation:
        if (n, h) not in self._cover:
            self._cover[(n, h)] = reidemeister_schreier(self.p, self.quotient(n, h))
        return self._cover[(n, h)]

    def h1(self, n: int, h: int) -> AbelianizationData:
        if (n, h) not in self._h1:
            self._h1[(n, h)] = subgroup_h1(self.cover(n, h))
        return self._h1[(n, h)]

    def char_space(self, n: int, h: int, m: int, reduce_orbits: bool = False) -> CharacterSpace:
        key = (n, h, m, reduce_orbits)
        if key not in self._chars:
            syms = ()
            if reduce_orbits:
                syms = cover_symmetries(self.cover(n, h), m, self._twist(n, h))
            self._chars[key] = CharacterSpace(self.h1(n, h), m, syms)
        return self._chars[key]

    def exact_characters(self, n: int, h: int, m: int, reduce_orbits: bool = False) -> List[FinChar]:
        space = self.char_space(n, h, m, reduce_orbits)
        return [space.char(c) for c in space.emitted()]

    def base_h1(self) -> AbelianizationData:
        if self._base_h1 is None:
            self._base_h1 = abelianize(self.p)
        return self._base_h1

    def _twist(self, n, h):
        # twisting by characters of H_1/torsion preserves the univariate
        # degree only when that group is cyclic
        ab = self.base_h1()
        if ab.free_rank != 1:
            return None
        return [r[0] for r in self.cover(n, h).pullback_projection([list(r) for r in ab.projection])]


@dataclass(frozen=True)
class EnumerationCursor:
    """Position in the dovetailed stream of (quotient, character) pairs.

    Cells (n, m) are visited by increasing n + m and, within a stage, by
    increasing n.  Inside a cell the homs of degree n are taken in order and,
    for each, the characters of exact order m on the kernel; ``char_index``
    is the CharacterSpace code to resume from.  By default a hom is skipped
    when an earlier one has the same kernel, and one character is kept per
    symmetry orbit (see :class:`CharacterSpace`).
    """

    n: int = 1
    hom_index: int = 0
    m: int = 1
    char_index: int = 0
    index: int = 0                # number of candidates emitted so far
    max_degree: int = 5
    max_order: int = 12
    max_dim: int = 24
    dedupe_kernels: bool = True
    reduce_orbits: bool = True

    def to_json(self) -> dict:
        return {
            "n": self.n, "hom_index": self.hom_index, "m": self.m, "char_index": self.char_index,
            "index": self.index, "max_degree": self.max_degree, "max_order": self.max_order,
            "max_dim": self.max_dim, "dedupe_kernels": self.dedupe_kernels,
            "reduce_orbits": self.reduce_orbits,
        }

    @classmethod
    def from_json(cls, obj) -> "EnumerationCursor":
        if isinstance(obj, str):
            obj = json.loads(obj)
        fields_ = {f: obj[f] for f in ("n", "hom_index", "m", "char_index")}
        extra = {f: obj[f] for f in ("index", "max_degree", "max_order", "max_dim", "dedupe_kernels", "reduce_orbits") if f in obj}
        return cls(**fields_, **extra)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


@dataclass(frozen=True)
class Candidate:
    index: int
    n: int
    hom_index: int
    m: int
    char_index: int
    rep: InducedRep
    hom: PermHom
    character: FinChar

    def describe(self) -> dict:
        return {
            "cursor": self.index, "degree": self.n, "hom_index": self.hom_index,
            "hom": [list(x) for x in self.hom.images], "dimension": self.rep.dim,
            "char_order": self.m, "char_index": self.char_index,
            "character": list(self.character.values),
        }


def _cells(cur: EnumerationCursor):
    """Dovetail cells at or after the cursor's cell."""
    for s in range(cur.n + cur.m, cur.max_degree + cur.max_order + 1):
        for n in range(1, cur.max_degree + 1):
            m = s - n
            if m < 1 or m > cur.max_order:
                continue
            if s == cur.n + cur.m and n < cur.n:
                continue
            yield n, m


def next_candidate(p: Presentation, cur: EnumerationCursor, catalog: QuotientCatalog | None = None):
    """Return (Candidate, advanced cursor); raises BudgetExhausted at the end."""
    catalog = catalog or QuotientCatalog(p)
    for n, m in _cells(cur):
        start_h = cur.hom_index if (n, m) == (cur.n, cur.m) else 0
        homs = catalog.homs(n)
        for h in range(start_h, len(homs)):
            q = catalog.quotient(n, h)
            if q.order > cur.max_dim:
                continue
            if cur.dedupe_kernels and not catalog.is_new_kernel(n, h):
                continue
            start_c = cur.char_index if (n, m, h) == (cur.n, cur.m, cur.hom_index) else 0
            space = catalog.char_space(n, h, m, cur.reduce_orbits)
            code = space.next_code(start_c)
            if code is not None:
                rho = space.char(code)
                rep = induce_character(p, q, catalog.cover(n, h), rho)
                cand = Candidate(cur.index, n, h, m, code, rep, homs[h], rho)
                new = replace(cur, n=n, hom_index=h, m=m, char_index=code + 1, index=cur.index + 1)
                return cand, new
    raise BudgetExhausted("enumeration frontier exhausted")


def iterate_candidates(p: Presentation, cur: EnumerationCursor | None = None, catalog=None):
    """Generator of (Candidate, cursor after it) until the frontier is exhausted."""
    cur = cur or EnumerationCursor()
    catalog = catalog or QuotientCatalog(p)
    while True:
        try:
            cand, cur = next_candidate(p, cur, catalog)
        except BudgetExhausted:
            return
        yield cand, cur
