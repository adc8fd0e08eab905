"""Exact convex hulls in dimension at most three.

Points are tuples of integers or Fractions and every predicate is an exact
determinant, so there is no epsilon anywhere.  Point sets that span a
lower-dimensional affine subspace are handled by projecting onto a coordinate
subspace on which the projection is injective, hulling there, and lifting the
facet inequalities back (their normals get zeros in the dropped coordinates).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Dict, FrozenSet, List, Sequence, Tuple

from .errors import DimensionExceeded

Vec = Tuple[Fraction, ...]


def vec(x) -> Vec:
    return tuple(Fraction(a) for a in x)


def sub(a, b) -> Vec:
    return tuple(x - y for x, y in zip(a, b))


def dot(a, b) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def cross(a, b) -> Vec:
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


def orient2(a, b, c) -> Fraction:
    """Twice the signed area of abc; positive for a left turn."""
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def orient3(a, b, c, d) -> Fraction:
    return dot(cross(sub(b, a), sub(c, a)), sub(d, a))


def primitive(v) -> Tuple[int, ...]:
    """Smallest positive integer multiple of a rational vector, made primitive."""
    v = vec(v)
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    return tuple(x // g for x in ints) if g else tuple(ints)


# --- small exact linear algebra -------------------------------------------------


def echelon(rows: Sequence[Sequence]) -> Tuple[List[Vec], List[int]]:
    """Reduced row echelon form of the span; returns (basis rows, pivot columns)."""
    A = [list(vec(r)) for r in rows]
    if not A:
        return [], []
    ncols = len(A[0])
    basis, pivots = [], []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(A)) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = 1 / A[r][c]
        A[r] = [x * inv for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == len(A):
            break
    basis = [tuple(A[i]) for i in range(r)]
    return basis, pivots


def orthogonal_complement(rows: Sequence[Sequence], n: int) -> List[Tuple[int, ...]]:
    """Primitive integer basis of the vectors orthogonal to all ``rows``."""
    basis, pivots = echelon(rows) if rows else ([], [])
    free = [c for c in range(n) if c not in pivots]
    out = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for row, p in zip(basis, pivots):
            v[p] = -row[f]
        out.append(primitive(v))
    return out


def solve(A: Sequence[Sequence], b: Sequence) -> Vec:
    """Solve a nonsingular square system exactly."""
    n = len(A)
    M = [list(vec(row)) + [Fraction(y)] for row, y in zip(A, b)]
    for c in range(n):
        piv = next(r for r in range(c, n) if M[r][c] != 0)
        M[c], M[piv] = M[piv], M[c]
        inv = 1 / M[c][c]
        M[c] = [x * inv for x in M[c]]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return tuple(M[r][n] for r in range(n))


def project_onto_span(v, basis: Sequence[Vec]) -> Vec:
    """Orthogonal projection of ``v`` onto the span of the (independent) ``basis``."""
    if not basis:
        return tuple(Fraction(0) for _ in v)
    gram = [[dot(a, b) for b in basis] for a in basis]
    coef = solve(gram, [dot(a, v) for a in basis])
    out = [Fraction(0)] * len(v)
    for c, a in zip(coef, basis):
        for i in range(len(v)):
            out[i] += c * a[i]
    return tuple(out)


# --- the polytope type ------------------------------------------------------------


@dataclass
class Polytope:
    """Convex hull of finitely many points in Q^b.

    ``facets`` are inequalities (normal, offset) meaning normal . x <= offset,
    facets relative to the affine hull when the polytope is not full
    dimensional; ``equations`` cut out that affine hull.  ``facet_vertices``
    lists, per facet, the indices of the vertices lying on it.
    """

    b: int
    vertices: List[Vec]
    facets: List[Tuple[Vec, Fraction]]
    equations: List[Tuple[Vec, Fraction]] = field(default_factory=list)
    dim: int = 0
    facet_vertices: List[FrozenSet[int]] = field(default_factory=list)

    def contains(self, x) -> bool:
        x = vec(x)
        return all(dot(n, x) == c for n, c in self.equations) and all(dot(n, x) <= c for n, c in self.facets)

    def support(self, phi) -> Fraction:
        """max over the polytope of phi . x."""
        return max(dot(phi, v) for v in self.vertices)

    def vertex_set(self):
        return frozenset(self.vertices)

    def same_as(self, other: "Polytope") -> bool:
        return self.b == other.b and self.vertex_set() == other.vertex_set()

    def faces(self) -> List[Tuple[int, FrozenSet[int]]]:
        """Every nonempty face as (dimension, vertex indices), whole polytope last."""
        found = set(self.facet_vertices)
        frontier = list(found)
        while frontier:
            new = []
            for a in frontier:
                for b in self.facet_vertices:
                    c = a & b
                    if c and c not in found:
                        found.add(c)
                        new.append(c)
            frontier = new
        whole = frozenset(range(len(self.vertices)))
        found.discard(whole)
        out = [(affine_dim([self.vertices[i] for i in f]), f) for f in found]
        out.sort(key=lambda t: (t[0], sorted(t[1])))
        out.append((self.dim, whole))
        return out

    def facets_containing(self, face: FrozenSet[int]) -> List[Tuple[Vec, Fraction]]:
        return [f for f, vs in zip(self.facets, self.facet_vertices) if face <= vs]

    def __repr__(self):
        verts = ", ".join("(" + ",".join(str(x) for x in v) + ")" for v in self.vertices)
        return f"Polytope(dim={self.dim}, vertices=[{verts}])"


def affine_dim(points: Sequence[Vec]) -> int:
    if len(points) <= 1:
        return 0
    basis, _ = echelon([sub(p, points[0]) for p in points[1:]])
    return len(basis)


def convex_hull(points: Sequence[Sequence]) -> Polytope:
    """Exact convex hull of a nonempty point set in Q^b, b <= 3."""
    pts = sorted(set(vec(p) for p in points))
    if not pts:
        raise ValueError("convex hull of an empty set")
    b = len(pts[0])
    if b > 3:
        raise DimensionExceeded(f"polytope geometry is limited to dimension 3, got {b}")
    origin = pts[0]
    basis, pivots = echelon([sub(p, origin) for p in pts[1:]]) if len(pts) > 1 else ([], [])
    d = len(basis)
    equations = [(vec(n), dot(n, origin)) for n in orthogonal_complement(basis, b)] if d < b else []
    # projecting onto the pivot coordinates is injective on the affine hull
    proj = [tuple(p[c] for c in pivots) for p in pts]
    if d == 0:
        vidx, rel = [0], []
    elif d == 1:
        vidx, rel = _hull1(proj)
    elif d == 2:
        vidx, rel = _hull2(proj)
    else:
        vidx, rel = _hull3(proj)
    vertices = [pts[i] for i in vidx]
    facets, fverts = [], []
    for normal, offset, members in rel:
        full = [Fraction(0)] * b
        for c, x in zip(pivots, normal):
            full[c] = x
        facets.append((tuple(full), offset))
        fverts.append(frozenset(vidx.index(i) for i in members))
    return Polytope(b, vertices, facets, equations, d, fverts)


def _hull1(pts):
    lo = min(range(len(pts)), key=lambda i: pts[i][0])
    hi = max(range(len(pts)), key=lambda i: pts[i][0])
    one = (Fraction(1),)
    rel = [((-one[0],), -pts[lo][0], [lo]), (one, pts[hi][0], [hi])]
    return [lo, hi], rel


def _hull2(pts):
    """Gift wrapping; returns counterclockwise vertex indices and edge inequalities."""
    start = min(range(len(pts)), key=lambda i: pts[i])
    hull = [start]
    cur = start
    while True:
        cand = next(i for i in range(len(pts)) if i != cur)
        for r in range(len(pts)):
            if r == cur or r == cand:
                continue
            o = orient2(pts[cur], pts[cand], pts[r])
            if o < 0:
                cand = r
            elif o == 0 and _dist2(pts[cur], pts[r]) > _dist2(pts[cur], pts[cand]):
                cand = r
        if cand == start:
            break
        hull.append(cand)
        cur = cand
    rel = []
    for a, c in zip(hull, hull[1:] + hull[:1]):
        d = sub(pts[c], pts[a])
        normal = (d[1], -d[0])
        rel.append((normal, dot(normal, pts[a]), [a, c]))
    return hull, rel


def _dist2(a, b):
    return sum((x - y) ** 2 for x, y in zip(a, b))


def _hull3(pts):
    """Incremental hull with exact orientation tests, coplanar triangles merged."""
    n = len(pts)
    i0 = 0
    i1 = next(i for i in range(n) if pts[i] != pts[i0])
    d01 = sub(pts[i1], pts[i0])
    i2 = next(i for i in range(n) if any(x != 0 for x in cross(d01, sub(pts[i], pts[i0]))))
    i3 = next(i for i in range(n) if orient3(pts[i0], pts[i1], pts[i2], pts[i]) != 0)
    # faces oriented so that orient3(face, p) > 0 means p sees the face
    faces = set()
    quad = (i0, i1, i2, i3)
    for skip in range(4):
        a, b_, c = (quad[i] for i in range(4) if i != skip)
        if orient3(pts[a], pts[b_], pts[c], pts[quad[skip]]) > 0:
            b_, c = c, b_
        faces.add((a, b_, c))
    for p in range(n):
        if p in (i0, i1, i2, i3):
            continue
        visible = [f for f in faces if orient3(pts[f[0]], pts[f[1]], pts[f[2]], pts[p]) > 0]
        if not visible:
            continue
        edges = set()
        for a, b_, c in visible:
            edges.update(((a, b_), (b_, c), (c, a)))
        horizon = [e for e in edges if (e[1], e[0]) not in edges]
        faces.difference_update(visible)
        for a, b_ in horizon:
            faces.add((a, b_, p))
    # merge coplanar triangles into facets
    planes: Dict[Tuple, set] = {}
    for a, b_, c in faces:
        normal = primitive(cross(sub(pts[b_], pts[a]), sub(pts[c], pts[a])))
        key = (normal, dot(normal, pts[a]))
        planes.setdefault(key, set()).update((a, b_, c))
    rel = []
    extreme = set()
    for (normal, offset), members in planes.items():
        members = sorted(members)
        # drop points lying inside a merged facet or in the middle of its edges
        axis = max(range(3), key=lambda i: abs(normal[i]))
        keep = [i for i in range(3) if i != axis]
        flat = [tuple(pts[i][k] for k in keep) for i in members]
        corner, _ = _hull2(flat)
        on = [members[i] for i in corner]
        extreme.update(on)
        rel.append((vec(normal), Fraction(offset), on))
    vidx = sorted(extreme)
    return vidx, rel
