"""
The Thurston norm ball of the Whitehead link
============================================

For a two-component link H^1 has rank 2 and the torsion is a Laurent
polynomial in two variables.  Its Newton polytope is the unit square, so
the Alexander norm is |a| + |b| and its unit ball is the diamond with
vertices (+-1, 0), (0, +-1).  Four punctured disks bound the norm above on
one class per cone of the ball, which pins down the whole Thurston norm.
"""

import os
import tempfile

from tng.corpus import get
from tng.covers import trivial_rep
from tng.driver import UpperBoundRegistry, render_report, run_algorithm_b
from tng.normgeom import alexander_norm, dual_ball, face_polynomials, newton_polytope, select_character
from tng.torsion import tau_multivariable

p = get("whitehead")
tau = tau_multivariable(p, trivial_rep(p))
print("tau =", tau)
print("Newton polytope vertices:", [tuple(int(x) for x in v) for v in newton_polytope(tau.numerator).vertices])
for phi in [(1, 0), (0, 1), (1, 1), (2, -3)]:
    print("  norm of", phi, "=", alexander_norm(tau, phi))

ball = dual_ball(tau, 1)
print("ball vertices:", [tuple(str(x) for x in v) for v in ball.vertices])
print("one class per cone:", ball.witness_classes())

# a character that keeps every face polynomial alive
faces = face_polynomials(tau.numerator)
print(len(faces), "faces; selected character (kappa, m, j):", select_character([q for _, q in faces]))

registry = UpperBoundRegistry()
for phi, bound in [((1, 0), 1), ((0, 1), 1), ((1, 1), 2), ((1, -1), 2)]:
    registry.add("whitehead", phi, bound, "punctured disks")
report, _ = run_algorithm_b(p, registry, budget=10, manifold="whitehead")
print("status:", report.status)

out = os.path.join(tempfile.gettempdir(), "whitehead_ball.svg")
with open(out, "wb") as fh:
    fh.write(render_report(report, "svg"))
print("ball picture written to", out)
