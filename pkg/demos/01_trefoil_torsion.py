"""
Twisted torsion of the trefoil, by hand and by the library
===========================================================

The trefoil group has the one-relator presentation <a, b | aba = bab>.
Fox calculus turns the relator into a 1 x 2 Jacobian; deleting one column
and dividing by (t - 1) gives the torsion, here (1 - t + t^2) / (t - 1).
Its degree, 1, is a lower bound for the Thurston norm of the generator of
H^1, and a genus one Seifert surface shows that the bound is sharp.
"""

from tng.covers import trivial_rep
from tng.driver import UpperBoundRegistry, render_report, run_algorithm_a
from tng.torsion import deg_tau, fox_jacobian, lower_bound, tau_univariate
from tng.words import abelianize, fox_derivative, parse_presentation

p = parse_presentation("gens: a b\nrel: a b a B A B\n", name="trefoil")
r = p.relators[0]
print("relator:", r)

# free derivatives live in the group ring of the free group
for x in range(p.ngens):
    print(f"d r / d {p.generators[x]} =", fox_derivative(r, x))

# abelianizing sends both generators to t
ab = abelianize(p)
print("b1 =", ab.free_rank, " generator images:", ab.projection)
alpha = trivial_rep(p)
J = fox_jacobian(p, alpha, [list(row) for row in ab.projection])
print("Jacobian:", J)

tau = tau_univariate(p, alpha, [1])
print("tau =", tau)
print("deg tau =", deg_tau(tau), " lower bound (value, ceiling):", lower_bound(deg_tau(tau), alpha.dim))

# the per-class search, certified against one upper bound
registry = UpperBoundRegistry()
registry.add("trefoil", [1], 1, "Seifert surface of genus 1")
report, _ = run_algorithm_a(p, [1], registry, budget=5, manifold="trefoil")
print(render_report(report).decode())
