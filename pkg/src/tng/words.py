"""Finitely presented groups: words, presentations, Fox calculus, H_1.

Letters are encoded as nonzero integers: generator ``i`` (0-based) is
``i + 1`` and its inverse is ``-(i + 1)``.  ``Word.letters`` exposes the
(index, sign) view.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Sequence, Tuple

from .errors import (
    EmptyGeneratorList,
    EmptyRelator,
    ParseError,
    SizeExceeded,
    UnknownLetter,
)
from .exact.cyclotomic import CycNum
from .exact.laurent import LaurentPoly
from .exact.snf import hermite_rows, smith_normal_form

MAX_GENERATORS = 64
MAX_RELATOR_LENGTH = 10**5

_NAME = re.compile(r"[a-z][a-z0-9_]*\Z")


def free_reduce(codes: Iterable[int]) -> Tuple[int, ...]:
    """Cancel adjacent inverse pairs (stack based, one pass)."""
    out: List[int] = []
    for c in codes:
        if c == 0:
            raise ValueError("letter code 0 is not allowed")
        if out and out[-1] == -c:
            out.pop()
        else:
            out.append(c)
    return tuple(out)


class Word:
    """A freely reduced word in the generators."""

    __slots__ = ("codes", "_hash")

    def __init__(self, codes: Iterable[int] = ()):
        self.codes = free_reduce(codes)
        self._hash = hash(self.codes)

    @classmethod
    def from_letters(cls, letters: Iterable[Tuple[int, int]]) -> "Word":
        return cls((i + 1) * s for i, s in letters)

    @classmethod
    def _trusted(cls, codes: Tuple[int, ...]) -> "Word":
        w = object.__new__(cls)
        w.codes = codes
        w._hash = hash(codes)
        return w

    @property
    def letters(self) -> List[Tuple[int, int]]:
        return [(abs(c) - 1, 1 if c > 0 else -1) for c in self.codes]

    def __len__(self):
        return len(self.codes)

    def __iter__(self):
        return iter(self.codes)

    def __mul__(self, other: "Word") -> "Word":
        if not isinstance(other, Word):
            return NotImplemented
        a, b = self.codes, other.codes
        i = 0
        while i < len(a) and i < len(b) and a[-1 - i] == -b[i]:
            i += 1
        return Word._trusted(a[: len(a) - i] + b[i:])

    def inverse(self) -> "Word":
        return Word._trusted(tuple(-c for c in reversed(self.codes)))

    def __eq__(self, other):
        return isinstance(other, Word) and self.codes == other.codes

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return (len(self.codes), self.codes) < (len(other.codes), other.codes)

    def exponent_sums(self, ngens: int) -> List[int]:
        v = [0] * ngens
        for c in self.codes:
            v[abs(c) - 1] += 1 if c > 0 else -1
        return v

    def max_generator(self) -> int:
        return max((abs(c) for c in self.codes), default=0)

    def __repr__(self):
        return f"Word({list(self.codes)})"

    def format(self, names: Sequence[str]) -> str:
        parts = []
        for c in self.codes:
            n = names[abs(c) - 1]
            if c > 0:
                parts.append(n)
            else:
                parts.append(n.upper() if len(n) == 1 else f"{n}^-1")
        return " ".join(parts) if parts else "1"


@dataclass(frozen=True)
class Presentation:
    generators: Tuple[str, ...]
    relators: Tuple[Word, ...]
    name: str = ""

    def __post_init__(self):
        gens = tuple(self.generators)
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "relators", tuple(self.relators))
        if not gens:
            raise EmptyGeneratorList("presentation needs at least one generator")
        if len(set(gens)) != len(gens):
            raise ParseError("duplicate generator names")
        if len(gens) > MAX_GENERATORS:
            raise SizeExceeded(f"at most {MAX_GENERATORS} generators are supported")
        for r in self.relators:
            if not len(r):
                raise EmptyRelator("relator reduces to the empty word")
            if len(r) > MAX_RELATOR_LENGTH:
                raise SizeExceeded(f"relator length exceeds {MAX_RELATOR_LENGTH}")
            if r.max_generator() > len(gens):
                raise UnknownLetter("relator uses an undeclared generator")

    @property
    def ngens(self) -> int:
        return len(self.generators)

    def deficiency(self) -> int:
        return self.ngens - len(self.relators)

    def to_text(self) -> str:
        lines = ["gens: " + " ".join(self.generators)]
        for r in self.relators:
            lines.append("rel: " + r.format(self.generators))
        return "\n".join(lines) + "\n"

    def word(self, text: str) -> Word:
        """Parse a word written in this presentation's letters."""
        return Word(_parse_letters(text.split(), self.generators, None))


def _parse_letters(tokens, names, lineno) -> List[int]:
    index = {n: i for i, n in enumerate(names)}
    singles = all(len(n) == 1 for n in names)
    codes = []
    for tok in tokens:
        if tok in index:
            codes.append(index[tok] + 1)
            continue
        if tok.endswith("^-1") and tok[:-3] in index:
            codes.append(-(index[tok[:-3]] + 1))
            continue
        if len(tok) == 1 and tok.lower() in index and tok.isupper():
            codes.append(-(index[tok.lower()] + 1))
            continue
        if singles and tok.isalpha():
            # compact form such as "abaBAB"
            for ch in tok:
                if ch in index:
                    codes.append(index[ch] + 1)
                elif ch.isupper() and ch.lower() in index:
                    codes.append(-(index[ch.lower()] + 1))
                else:
                    raise UnknownLetter(f"unknown letter {ch!r}", lineno)
            continue
        raise UnknownLetter(f"unknown letter {tok!r}", lineno)
    return codes


def parse_presentation(text: str, name: str = "") -> Presentation:
    """Parse the ``gens:`` / ``rel:`` text format."""
    gens = None
    relators = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, rest = line.partition(":")
        key = key.strip()
        if not sep:
            raise ParseError(f"expected 'gens:' or 'rel:', got {line!r}", lineno)
        if key == "gens":
            if gens is not None:
                raise ParseError("duplicate gens line", lineno)
            gens = rest.split()
            if not gens:
                raise EmptyGeneratorList("empty generator list", lineno)
            for g in gens:
                if not _NAME.match(g):
                    raise ParseError(f"invalid generator name {g!r}", lineno)
            if len(set(gens)) != len(gens):
                raise ParseError("duplicate generator names", lineno)
        elif key == "rel":
            if gens is None:
                raise ParseError("'rel:' before 'gens:'", lineno)
            codes = _parse_letters(rest.split(), gens, lineno)
            w = Word(codes)
            if not len(w):
                raise EmptyRelator("relator reduces to the empty word", lineno)
            relators.append(w)
        else:
            raise ParseError(f"unknown key {key!r}", lineno)
    if gens is None:
        raise EmptyGeneratorList("missing 'gens:' line")
    return Presentation(tuple(gens), tuple(relators), name)


def load_presentation(path) -> Presentation:
    path = Path(path)
    return parse_presentation(path.read_text(encoding="utf-8"), name=path.stem)


# --- group ring and Fox calculus --------------------------------------------


class GroupRingElement:
    """Finite integer combination of words with collected terms."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        out: Dict[Word, int] = {}
        if terms:
            items = terms.items() if isinstance(terms, dict) else terms
            for w, c in items:
                if c:
                    out[w] = out.get(w, 0) + c
        self.terms = {w: c for w, c in out.items() if c}

    @classmethod
    def of(cls, word: Word, coeff: int = 1):
        return cls({word: coeff})

    def __add__(self, other):
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0) + c
        return GroupRingElement(out)

    def __neg__(self):
        return GroupRingElement({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return GroupRingElement({w: c * other for w, c in self.terms.items()})
        if isinstance(other, Word):
            other = GroupRingElement.of(other)
        out: Dict[Word, int] = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 * w2
                out[w] = out.get(w, 0) + c1 * c2
        return GroupRingElement(out)

    def __rmul__(self, other):
        if isinstance(other, Word):
            return GroupRingElement.of(other) * self
        return self * other

    def __eq__(self, other):
        return isinstance(other, GroupRingElement) and self.terms == other.terms

    def __repr__(self):
        return "GroupRingElement(" + ", ".join(f"{c}*{w.codes}" for w, c in sorted(self.terms.items())) + ")"

    def is_zero(self):
        return not self.terms


def fox_derivative(w: Word, x: int) -> GroupRingElement:
    """Fox derivative of ``w`` with respect to generator index ``x``."""
    return fox_gradient(w, x + 1)[x]


def fox_gradient(w: Word, ngens: int) -> List[GroupRingElement]:
    """All Fox derivatives of ``w`` in one pass over an accumulating prefix."""
    acc: List[Dict[Word, int]] = [dict() for _ in range(ngens)]
    prefix: Tuple[int, ...] = ()
    for c in w.codes:
        j = abs(c) - 1
        if c > 0:
            key = Word._trusted(prefix)
            if j < ngens:
                acc[j][key] = acc[j].get(key, 0) + 1
            prefix = prefix + (c,)
        else:
            prefix = prefix + (c,)
            key = Word._trusted(prefix)
            if j < ngens:
                acc[j][key] = acc[j].get(key, 0) - 1
    return [GroupRingElement(a) for a in acc]


# --- abelianization ----------------------------------------------------------


@dataclass(frozen=True)
class AbelianizationData:
    """H_1 of a presentation: Z^b + torsion, and the projection to Z^b."""

    free_rank: int
    torsion: Tuple[int, ...]
    projection: Tuple[Tuple[int, ...], ...]          # generator -> Z^b
    torsion_projection: Tuple[Tuple[int, ...], ...] = field(default=())  # generator -> sum Z/d_i
    # one exponent vector per H_1 coordinate (free ones first) representing
    # the corresponding basis element of H_1
    basis_words: Tuple[Tuple[int, ...], ...] = field(default=())

    def psi(self, word: Word) -> Tuple[int, ...]:
        v = [0] * self.free_rank
        for c in word.codes:
            row = self.projection[abs(c) - 1]
            s = 1 if c > 0 else -1
            for i in range(self.free_rank):
                v[i] += s * row[i]
        return tuple(v)

    def class_on_generators(self, phi: Sequence[int]) -> List[int]:
        """Values of the class phi in hom(Z^b, Z) on each generator."""
        if len(phi) != self.free_rank:
            raise ValueError(f"class has {len(phi)} entries, H^1 has rank {self.free_rank}")
        return [sum(a * b for a, b in zip(row, phi)) for row in self.projection]


def abelianize(p: Presentation) -> AbelianizationData:
    g = p.ngens
    R = [r.exponent_sums(g) for r in p.relators]
    snf = smith_normal_form(R, ncols=g)
    diag = snf.diagonal
    free_idx = [i for i in range(g) if i >= len(diag) or diag[i] == 0]
    tors_idx = [i for i in range(len(diag)) if diag[i] > 1]
    Vinv = snf.Vinv
    P = [[Vinv[j][i] for i in free_idx] for j in range(g)]
    if free_idx:
        H = hermite_rows([[P[j][i] for j in range(g)] for i in range(len(free_idx))])
        P = [[H[i][j] for i in range(len(H))] for j in range(g)]
    T = [[Vinv[j][i] % diag[i] for i in tors_idx] for j in range(g)]
    V = snf.V
    basis = []
    if free_idx:
        # G = V_free * P is the unimodular change of free basis; invert it
        G = [[sum(V[i][j] * P[j][c] for j in range(g)) for c in range(len(free_idx))] for i in free_idx]
        Ginv = _unimodular_inverse(G)
        for i in range(len(free_idx)):
            basis.append(tuple(sum(Ginv[i][l] * V[free_idx[l]][j] for l in range(len(free_idx))) for j in range(g)))
    for i in tors_idx:
        basis.append(tuple(V[i]))
    return AbelianizationData(
        free_rank=len(free_idx),
        torsion=tuple(diag[i] for i in tors_idx),
        projection=tuple(tuple(r) for r in P),
        torsion_projection=tuple(tuple(r) for r in T),
        basis_words=tuple(basis),
    )


def _unimodular_inverse(G):
    from fractions import Fraction

    n = len(G)
    M = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(G)]
    for c in range(n):
        piv = next(r for r in range(c, n) if M[r][c])
        M[c], M[piv] = M[piv], M[c]
        inv = 1 / M[c][c]
        M[c] = [x * inv for x in M[c]]
        for r in range(n):
            if r != c and M[r][c]:
                f = M[r][c]
                M[r] = [a - f * b for a, b in zip(M[r], M[c])]
    out = [[int(x) for x in row[n:]] for row in M]
    assert all(x.denominator == 1 for row in M for x in row[n:])
    return out


# --- pushing group-ring elements through a representation -----------------


def push_group_ring(e: GroupRingElement, rep, psi: Sequence[Sequence[int]]):
    """Sum of coeff * rep(word) * t^psi(word) as a k x k Laurent matrix.

    ``rep`` must provide ``dim``, ``m`` and ``word_monomial(word)`` returning
    ``(perm, exps)`` with rep(word)[i][perm[i]] = zeta_m^exps[i].  ``psi``
    gives one integer vector per generator.
    """
    k = rep.dim
    b = len(psi[0]) if psi else 0
    acc: Dict[Tuple[int, int], Dict[Tuple[int, ...], Dict[int, int]]] = {}
    for w, c in e.terms.items():
        perm, exps = rep.word_monomial(w)
        deg = [0] * b
        for code in w.codes:
            row = psi[abs(code) - 1]
            s = 1 if code > 0 else -1
            for i in range(b):
                deg[i] += s * row[i]
        deg = tuple(deg)
        for i in range(k):
            cell = acc.setdefault((i, perm[i]), {}).setdefault(deg, {})
            z = exps[i] % rep.m
            cell[z] = cell.get(z, 0) + c
    return monomial_accumulator_to_matrix(acc, k, b, rep.m)


def monomial_accumulator_to_matrix(acc, k, b, m):
    zero = LaurentPoly.zero(b, m)
    out = [[zero] * k for _ in range(k)]
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
            out[i][j] = LaurentPoly._raw(b, terms, m)
    return out
