"""Newton polytopes, twisted Alexander norms and their unit balls.

The norm of a torsion polynomial p in direction phi is the width of its
support, y(phi) = max phi(f1) - phi(f2) over support points.  Its ball
{phi : y(phi) <= k} is k times the polar of the difference body P - P.
Vertices of P - P correspond to the facets of the ball and so to the open
top-dimensional cones on which y is linear; that correspondence drives both
the witness choice and the equality certificate.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .errors import DimensionExceeded, IncompleteCones, MismatchedWitness, SearchBudgetExceeded, ZeroPolynomial
from .exact.cyclotomic import CycNum, _lcm
from .exact.laurent import LaurentPoly
from .hull import Polytope, convex_hull, dot, echelon, orthogonal_complement, primitive, project_onto_span, sub, vec
from .torsion import TorsionValue

EQUAL, A_IN_B, B_IN_A, INCOMPARABLE = "equal", "A⊊B", "B⊊A", "incomparable"
KAPPA_CAP = 100


@dataclass(frozen=True)
class SupportSet:
    b: int
    points: Tuple[Tuple[Tuple[int, ...], CycNum], ...]

    @classmethod
    def of(cls, p: LaurentPoly) -> "SupportSet":
        return cls(p.nvars, tuple(sorted(p.terms.items())))

    def exponents(self):
        return [f for f, _ in self.points]


def _poly_of(p):
    if isinstance(p, TorsionValue):
        return p.numerator
    return p


def newton_polytope(p: LaurentPoly) -> Polytope:
    """Convex hull of the exponent support of a nonzero Laurent polynomial."""
    p = _poly_of(p)
    if p is None or p.is_zero():
        raise ZeroPolynomial("the Newton polytope of zero is empty")
    if p.nvars > 3:
        raise DimensionExceeded(f"Newton polytopes need b <= 3, got {p.nvars}")
    return convex_hull(list(p.terms))


def _width(p: LaurentPoly, phi) -> int:
    if p is None or p.is_zero():
        return 0
    vals = [sum(a * b for a, b in zip(phi, f)) for f in p.terms]
    return max(vals) - min(vals)


def alexander_norm(p, phi: Sequence[int]) -> int:
    """Support width of p in direction phi; 0 for the zero polynomial.

    A rational torsion value contributes numerator width minus denominator
    width (never negative), which for one variable is |phi| times deg.
    """
    if p is None or (isinstance(p, int) and p == 0):
        return 0
    if isinstance(p, TorsionValue):
        if p.is_zero():
            return 0
        return max(0, _width(p.numerator, phi) - _width(p.denominator, phi))
    return _width(p, phi)


def degenerate_hyperplanes(p: LaurentPoly) -> List[Tuple[int, ...]]:
    """Normals f1 - f2 (primitive, up to sign) of the classes where specialization may drop degree."""
    p = _poly_of(p)
    out = set()
    for f1, f2 in itertools.combinations(sorted(p.terms), 2):
        n = primitive(sub(f1, f2))
        if n < tuple(-x for x in n):
            n = tuple(-x for x in n)
        out.add(n)
    return sorted(out)


def difference_body(P: Polytope) -> Polytope:
    return convex_hull([sub(u, v) for u in P.vertices for v in P.vertices])


def polar(P: Polytope, k=1) -> Polytope:
    """{phi : phi . x <= k on P} for a full-dimensional P with 0 in its interior."""
    if P.dim != P.b:
        raise ValueError("polar needs a full-dimensional polytope")
    pts = []
    for n, c in P.facets:
        if c <= 0:
            raise ValueError("the origin is not interior")
        pts.append(tuple(Fraction(k) * x / c for x in n))
    return convex_hull(pts)


# --- norm balls -------------------------------------------------------------------


@dataclass
class NormBallDesc:
    """The ball {phi : y(phi) <= k} of a support-width norm.

    ``vertices`` are the vertices of the cross-section of the ball with the
    span W of the difference body; the ball is that cross-section plus the
    ``degenerate`` subspace W^perp on which the norm vanishes.  ``cones`` are
    the vertices of the difference body, one per open top-dimensional cone.
    """

    b: int
    k: int
    source: Optional[Polytope]
    difference: Polytope
    vertices: List[Tuple[Fraction, ...]]
    degenerate: List[Tuple[int, ...]]
    ball: Optional[Polytope] = None

    @property
    def cones(self):
        return self.difference.vertices

    def width(self, phi) -> Fraction:
        return max(dot(phi, v) for v in self.difference.vertices)

    def norm(self, phi) -> Fraction:
        """y(phi) / k, the norm whose unit ball this is."""
        return self.width(vec(phi)) / self.k

    def contains(self, phi) -> bool:
        return self.norm(phi) <= 1

    def is_whole_space(self) -> bool:
        return len(self.degenerate) == self.b

    def cone_of(self, phi) -> Optional[int]:
        """Index of the open cone containing phi, or None on a cone wall."""
        phi = vec(phi)
        vals = [dot(phi, v) for v in self.cones]
        top = max(vals)
        hits = [i for i, x in enumerate(vals) if x == top]
        return hits[0] if len(hits) == 1 else None

    def facet_vertices(self, i: int) -> List[Tuple[Fraction, ...]]:
        v = self.cones[i]
        return [u for u in self.vertices if dot(u, v) == self.k]

    def witness_classes(self) -> List[Tuple[int, ...]]:
        """One primitive integral class per open cone: the facet barycenter, cleared.

        The zero norm has no facets; there the rays are returned instead,
        since a single class cannot show that a norm vanishes everywhere.
        """
        if self.is_whole_space():
            return self.ray_classes()
        out = []
        for i in range(len(self.cones)):
            face = self.facet_vertices(i)
            bary = tuple(sum(c) / len(face) for c in zip(*face))
            out.append(primitive(bary))
        return out

    def ray_classes(self) -> List[Tuple[int, ...]]:
        """Primitive classes through every vertex and both ways along every zero direction."""
        out = [primitive(v) for v in self.vertices]
        for w in self.degenerate:
            out.append(tuple(w))
            out.append(tuple(-x for x in w))
        return out

    def to_json(self):
        return {
            "b": self.b,
            "k": self.k,
            "vertices": [[str(x) for x in v] for v in self.vertices],
            "degenerate": [list(w) for w in self.degenerate],
        }


def dual_ball(p, k: int = 1) -> NormBallDesc:
    """Ball of the support-width norm of p scaled by 1/k.

    ``p`` may be a LaurentPoly or a TorsionValue; for one variable the
    rational degree is used, for several the denominator must be a unit.
    """
    if isinstance(p, TorsionValue):
        b = p.nvars
        if b == 1:
            w = 0 if p.is_zero() else max(0, p.numerator.spread() - p.denominator.spread())
            source = None if p.is_zero() else newton_polytope(p.numerator)
            return _ball_from_difference(convex_hull([(-w,), (w,)]), k, source)
        if not p.is_zero() and len(p.denominator.terms) != 1:
            raise ValueError("multivariable balls need a polynomial torsion")
        p = p.numerator if not p.is_zero() else None
        if p is None:
            return _ball_from_difference(convex_hull([(0,) * b]), k, None)
    if p.nvars > 3:
        raise DimensionExceeded(f"norm balls need b <= 3, got {p.nvars}")
    if p.is_zero():
        return _ball_from_difference(convex_hull([(0,) * p.nvars]), k, None)
    P = newton_polytope(p)
    return _ball_from_difference(difference_body(P), k, P)


def interval_ball(deg: int, k: int) -> NormBallDesc:
    """Ball of the norm |phi| deg on H^1 = Z, scaled by 1/k."""
    return _ball_from_difference(convex_hull([(-deg,), (deg,)]), k, None)


def _ball_from_difference(D: Polytope, k: int, source: Optional[Polytope]) -> NormBallDesc:
    b = D.b
    span, _ = echelon([v for v in D.vertices if any(v)]) if D.dim else ([], [])
    degenerate = orthogonal_complement(span, b) if len(span) < b else []
    verts = []
    for n, c in D.facets:
        nw = project_onto_span(n, span) if degenerate else n
        verts.append(tuple(Fraction(k) * x / c for x in nw))
    verts = sorted(set(verts))
    ball = convex_hull(verts) if verts else None
    return NormBallDesc(b, k, source, D, verts, degenerate, ball)


def ball_compare(A: NormBallDesc, B: NormBallDesc) -> str:
    """Exact inclusion test between two balls of the same dimension."""
    if A.b != B.b:
        raise ValueError("balls live in different dimensions")

    def inside(X, Y):
        return all(Y.norm(v) <= 1 for v in X.vertices) and all(Y.norm(w) == 0 for w in X.degenerate)

    ab, ba = inside(A, B), inside(B, A)
    if ab and ba:
        return EQUAL
    if ab:
        return A_IN_B
    if ba:
        return B_IN_A
    return INCOMPARABLE


# --- faces and characters ------------------------------------------------------------


def face_polynomials(p: LaurentPoly) -> List[Tuple[dict, LaurentPoly]]:
    """Restriction of p to every face of its Newton polytope."""
    p = _poly_of(p)
    P = newton_polytope(p)
    out = []
    for dim, face in P.faces():
        cuts = P.facets_containing(face)
        terms = {f: c for f, c in p.terms.items() if all(dot(n, f) == off for n, off in cuts)}
        desc = {"dim": dim, "vertices": [tuple(int(x) for x in P.vertices[i]) for i in sorted(face)]}
        out.append((desc, LaurentPoly(p.nvars, terms, p.m)))
    return out


def _kappas(b: int):
    for r in range(1, KAPPA_CAP + 1):
        shell = [v for v in itertools.product(range(-r, r + 1), repeat=b) if max(abs(x) for x in v) == r]
        shell.sort(key=lambda v: (sum(abs(x) for x in v), tuple(-x for x in v)))
        yield from shell


def evaluate_character(p: LaurentPoly, kappa, m: int, j: int) -> CycNum:
    """Value of p at the character f -> zeta_m^(j kappa(f))."""
    M = _lcm(p.m, m)
    total = CycNum.from_rational(0, M)
    for f, c in p.terms.items():
        e = j * sum(a * b for a, b in zip(kappa, f)) * (M // m)
        total = total + c.lift(M) * CycNum.root(M, e)
    return total


def select_character(polys: Sequence[LaurentPoly]) -> Tuple[Tuple[int, ...], int, int]:
    """A finite character of Z^b that is nonzero on every input polynomial.

    kappa is the first integer vector (by sup-norm, then l1, then reverse
    lexicographic) separating the support points of each polynomial; then m
    and j are the smallest with every kappa-pushforward nonzero at zeta_m^j.
    """
    polys = [_poly_of(p) for p in polys]
    if not polys or any(p.is_zero() for p in polys):
        raise ZeroPolynomial("select_character needs nonzero polynomials")
    b = polys[0].nvars
    for kappa in _kappas(b):
        if all(len({dot(kappa, f) for f in p.terms}) == len(p.terms) for p in polys):
            break
    else:
        raise SearchBudgetExceeded(f"no separating kappa with sup-norm <= {KAPPA_CAP}")
    pushed = [p.specialize(list(kappa)) for p in polys]
    m = 1
    while True:
        for j in range(m):
            if all(q.eval_at_root(m, j) for q in pushed):
                if not all(evaluate_character(p, kappa, m, j) for p in polys):
                    raise AssertionError("character failed direct verification")
                return tuple(kappa), m, j
        m += 1


# --- equality certificates ------------------------------------------------------------


@dataclass
class EqualityCertificate:
    """Witnesses showing the Thurston norm equals the norm of ``ball`` everywhere."""

    ball: NormBallDesc
    witnesses: List[Tuple[Tuple[int, ...], Fraction, int, str]]
    mode: str = "cones"
    rejected: List[MismatchedWitness] = field(default_factory=list)

    def to_json(self):
        return {
            "mode": self.mode,
            "witnesses": [
                {"phi": list(phi), "lower": str(lo), "upper": up, "provenance": prov}
                for phi, lo, up, prov in self.witnesses
            ],
            "rejected": [str(r) for r in self.rejected],
        }


def _as_witness(w):
    phi, lower, upper = w[0], w[1], w[2]
    prov = w[3] if len(w) > 3 else ""
    return tuple(int(x) for x in phi), Fraction(lower), upper, prov


def certify_equality(ball: NormBallDesc, witnesses, mode: str = "cones") -> EqualityCertificate:
    """Check that every cone (or, in ``rays`` mode, every ray) carries a matching witness.

    A witness is (class, lower, upper[, provenance]).  Witnesses whose bounds
    disagree are recorded as rejected and otherwise ignored.
    """
    if mode not in ("cones", "rays"):
        raise ValueError(f"unknown certification mode {mode!r}")
    good, rejected = [], []
    for w in witnesses:
        phi, lower, upper, prov = _as_witness(w)
        if upper is None or lower != upper:
            rejected.append(MismatchedWitness(f"class {list(phi)}: lower {lower} != upper {upper}"))
        else:
            good.append((phi, lower, int(upper), prov))
    chosen, uncovered = [], []
    if ball.b == 0:
        return EqualityCertificate(ball, [], mode, rejected)
    if mode == "cones" and not ball.is_whole_space():
        for i, v in enumerate(ball.cones):
            hit = [w for w in good if ball.cone_of(w[0]) == i]
            if hit:
                chosen.append(hit[0])
            else:
                uncovered.append(tuple(str(x) for x in v))
    else:
        for ray in ball.ray_classes():
            hit = [w for w in good if primitive(w[0]) == ray]
            if hit:
                chosen.append(hit[0])
            else:
                uncovered.append(ray)
    if uncovered:
        raise IncompleteCones(f"{len(uncovered)} cone(s) lack a matching witness", uncovered)
    return EqualityCertificate(ball, chosen, mode, rejected)
