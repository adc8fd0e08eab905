"""Knot and link groups used for testing and demonstrations.

Two-bridge knots and links b(p, q) have the Schubert presentation
<a, b | a w = w b> (p odd) or <a, b | a w = w a> (p even), where
w = b^e1 a^e2 b^e3 ... has length p - 1 and e_i = (-1)^floor(i q / p)
for odd q.  An even q is replaced by p - q, which gives the mirror image
and hence the same group.
"""

from __future__ import annotations

from importlib import resources

from ..words import Presentation, Word, parse_presentation

# name -> (p, q, Seifert genus, Alexander polynomial coefficients)
KNOTS = {
    "trefoil": (3, 1, 1, (1, -1, 1)),
    "figure_eight": (5, 3, 1, (1, -3, 1)),
    "knot_5_1": (5, 1, 2, (1, -1, 1, -1, 1)),
    "knot_5_2": (7, 3, 1, (2, -3, 2)),
    "knot_6_1": (9, 7, 1, (2, -5, 2)),
    "knot_6_2": (11, 7, 2, (1, -3, 3, -3, 1)),
    "knot_6_3": (13, 5, 2, (1, -3, 5, -3, 1)),
}

LINKS = {
    "hopf": (2, 1),
    "torus_link_2_4": (4, 1),
    "whitehead": (8, 3),
}


def schubert_word(p: int, q: int) -> Word:
    codes = []
    for i in range(1, p):
        e = -1 if (i * q // p) % 2 else 1
        gen = 2 if i % 2 else 1
        codes.append(gen * e)
    return Word(codes)


def two_bridge(p: int, q: int, name: str = "") -> Presentation:
    """Presentation of the two-bridge knot or link b(p, q)."""
    if p < 2 or not 0 < q < p:
        raise ValueError("need p >= 2 and 0 < q < p")
    if q % 2 == 0:
        q = p - q
    w = schubert_word(p, q)
    last = Word([1]) if p % 2 == 0 else Word([2])
    rel = Word([1]) * w * last.inverse() * w.inverse()
    return Presentation(("a", "b"), (rel,), name)


def unknot() -> Presentation:
    return parse_presentation("gens: a\n", name="unknot")


def corpus_knots():
    """(name, presentation, genus) for every knot in the table, unknot excluded."""
    return [(name, two_bridge(p, q, name), g) for name, (p, q, g, _) in KNOTS.items()]


def get(name: str) -> Presentation:
    """Presentation by name, from the bundled ``.pres`` files."""
    path = resources.files(__name__) / f"{name}.pres"
    if not path.is_file():
        raise KeyError(name)
    return parse_presentation(path.read_text(encoding="utf-8"), name=name)


def names():
    return sorted(p.name[:-5] for p in resources.files(__name__).iterdir() if p.name.endswith(".pres"))
