"""Lower bounds on the Thurston norm from twisted Reidemeister torsion.

Subpackages and modules, bottom up: ``exact`` (cyclotomic numbers, Laurent
polynomials, gcds, Smith form, determinants), ``words`` (presentations and
Fox calculus), ``covers`` (finite quotients, Reidemeister-Schreier, induced
representations, the candidate stream), ``torsion``, ``hull`` and
``normgeom`` (Newton polytopes and norm balls), ``driver`` and ``cli``.
"""

__version__ = "0.1.0"
