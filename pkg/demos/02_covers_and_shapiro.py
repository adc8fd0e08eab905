"""
Finite covers, induced representations and Shapiro's lemma
===========================================================

Homomorphisms of the trefoil group onto S3 give a 6-fold cover.  A
character of the cover's fundamental group, induced back to the base,
is a 6-dimensional monomial representation; its torsion agrees with the
cover's torsion twisted by the character.  Each such representation also
gives a lower bound deg(tau) / k on the Thurston norm.
"""

from itertools import islice

from tng.corpus import get
from tng.covers import (
    EnumerationCursor,
    QuotientCatalog,
    enumerate_characters,
    induce_character,
    iterate_candidates,
    one_dim_rep,
)
from tng.torsion import deg_tau, tau_from_values, tau_univariate
from tng.words import abelianize

p = get("trefoil")
cat = QuotientCatalog(p)
for n in (2, 3):
    for h, hom in enumerate(cat.homs(n)):
        print(f"degree {n} hom {h}: images {hom.images}, image order {cat.quotient(n, h).order}")

# pick the hom onto S3
h = next(h for h in range(len(cat.homs(3))) if cat.quotient(3, h).order == 6)
q, c = cat.quotient(3, h), cat.cover(3, h)
print("cover presentation:", c.presentation.to_text())
h1 = cat.h1(3, h)
print("H1 of the cover: rank", h1.free_rank, "torsion", h1.torsion)

ab = abelianize(p)
vals = [sum(row) for row in c.pullback_projection([list(r) for r in ab.projection])]
for rho in enumerate_characters(h1, 2)[:3]:
    alpha = induce_character(p, q, c, rho)
    base = tau_univariate(p, alpha, [1])
    cover = tau_from_values(c.presentation, one_dim_rep(c.presentation, rho.order, rho.values), vals)
    print(f"character {rho.values}: dim {alpha.dim}, equal torsion: {base.equiv(cover)}, "
          f"bound {deg_tau(base)}/{alpha.dim}")

# the search order used by the drivers
cur = EnumerationCursor(max_degree=3, max_order=3)
for cand, after in islice(iterate_candidates(p, cur), 8):
    t = tau_univariate(p, cand.rep, [1])
    print(cand.index, (cand.n, cand.hom_index, cand.m), "k =", cand.rep.dim, "deg =", deg_tau(t))
print("resume from:", after.dumps())
