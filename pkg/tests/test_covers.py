import itertools
import random

import pytest

from tng.corpus import get
from tng.covers import (
    CharacterSpace,
    EnumerationCursor,
    QuotientCatalog,
    count_characters,
    cover_symmetries,
    enumerate_characters,
    enumerate_perm_homs,
    image_and_kernel,
    induce_character,
    iterate_candidates,
    next_candidate,
    perm_mul,
    perm_of_word,
    reidemeister_schreier,
    subgroup_h1,
    trivial_quotient,
)
from tng.errors import BudgetExhausted, DegreeExceeded
from tng.exact.cyclotomic import CycNum
from tng.torsion import deg_from_values
from tng.words import Word, abelianize, parse_presentation

FREE1 = parse_presentation("gens: a")
FREE2 = parse_presentation("gens: a b")


def quotient_for(p, images):
    from tng.covers import PermHom

    return image_and_kernel(PermHom(len(images[0]), tuple(tuple(x) for x in images)))


# --- permutation homs ------------------------------------------------------------------


def test_degree_one_is_trivial():
    for p in (FREE1, FREE2, get("trefoil")):
        homs = list(enumerate_perm_homs(p, 1))
        assert len(homs) == 1 and homs[0].images == ((0,),) * p.ngens


def test_free_rank_one_degree_two():
    homs = list(enumerate_perm_homs(FREE1, 2))
    assert [h.images for h in homs] == [((0, 1),), ((1, 0),)]


def test_degree_limits():
    with pytest.raises(DegreeExceeded):
        list(enumerate_perm_homs(FREE1, 8))
    with pytest.raises(DegreeExceeded):
        list(enumerate_perm_homs(FREE1, 0))


def _conj_class(images, n):
    out = []
    for c in itertools.permutations(range(n)):
        ci = [0] * n
        for i, x in enumerate(c):
            ci[x] = i
        out.append(tuple(tuple(c[im[ci[i]]] for i in range(n)) for im in images))
    return min(out)


@pytest.mark.parametrize("name,n", [("trefoil", 3), ("trefoil", 4), ("figure_eight", 4), ("whitehead", 3)])
def test_homs_brute_force(name, n):
    p = get(name)
    got = [h.images for h in enumerate_perm_homs(p, n)]
    # no two emitted homs are simultaneously conjugate
    classes = [_conj_class(im, n) for im in got]
    assert len(set(classes)) == len(classes)
    # every relator-satisfying assignment is conjugate to an emitted one
    ident = tuple(range(n))
    want = set()
    for images in itertools.product(itertools.permutations(range(n)), repeat=p.ngens):
        if all(perm_of_word(images, r) == ident for r in p.relators):
            want.add(_conj_class(images, n))
    assert set(classes) == want
    assert got == sorted(got)


def test_trefoil_s3_hom_present(trefoil):
    homs = list(enumerate_perm_homs(trefoil, 3))
    target = _conj_class(((1, 0, 2), (0, 2, 1)), 3)
    assert target in {_conj_class(h.images, 3) for h in homs}


# --- quotients and Reidemeister-Schreier ----------------------------------------------------


def test_image_orders(trefoil):
    assert trivial_quotient(trefoil).order == 1
    assert quotient_for(FREE1, [(1, 0)]).order == 2
    q = quotient_for(trefoil, [(1, 0, 2), (0, 2, 1)])
    assert q.order == 6
    elems = set(q.elements)
    assert all(perm_mul(a, b) in elems for a in elems for b in elems)


def test_rs_index_one(trefoil):
    c = reidemeister_schreier(trefoil, trivial_quotient(trefoil))
    assert c.presentation.generators == trefoil.generators
    assert c.presentation.relators == trefoil.relators


def test_rs_cyclic_double_cover():
    q = quotient_for(FREE1, [(1, 0)])
    c = reidemeister_schreier(FREE1, q)
    assert c.transversal == (Word(), Word([1]))
    assert c.presentation.ngens == 1 and c.presentation.relators == ()
    assert c.generator_word(0) == Word([1, 1])


@pytest.mark.parametrize("images", [
    [(1, 0), (0, 1)], [(1, 0), (1, 0)], [(1, 2, 0), (0, 1, 2)], [(1, 0, 2), (0, 2, 1)],
    [(1, 0, 3, 2), (2, 3, 0, 1)],
])
def test_nielsen_schreier_rank(images):
    q = quotient_for(FREE2, images)
    c = reidemeister_schreier(FREE2, q)
    k = q.order
    assert c.presentation.ngens == 1 + k * (2 - 1)
    h1 = subgroup_h1(c)
    assert h1.free_rank == 1 + k and h1.torsion == ()


def test_schreier_transversal_prefix_closed():
    p = get("figure_eight")
    cat = QuotientCatalog(p)
    for n in (2, 3, 4):
        for h in range(len(cat.homs(n))):
            c = cat.cover(n, h)
            trans = set(c.transversal)
            for t in c.transversal:
                for i in range(len(t.codes)):
                    assert Word(t.codes[:i]) in trans


def test_cover_generators_lie_in_kernel_and_rewrite_back():
    p = get("trefoil")
    cat = QuotientCatalog(p)
    rng = random.Random(1)
    for n in (2, 3, 4):
        for h in range(len(cat.homs(n))):
            c = cat.cover(n, h)
            hom = cat.homs(n)[h]
            ident = tuple(range(n))
            gens = [c.generator_word(s) for s in range(c.presentation.ngens)]
            for w in gens:
                assert hom.of_word(w) == ident
            # rewrite a random kernel element and substitute back
            for _ in range(5):
                w = Word()
                for _ in range(4):
                    s = rng.randrange(len(gens))
                    w = w * (gens[s] if rng.random() < 0.5 else gens[s].inverse())
                rw, end = c.rewrite(w, 0)
                assert end == 0
                back = Word()
                for code in rw.codes:
                    g = gens[abs(code) - 1]
                    back = back * (g if code > 0 else g.inverse())
                assert back == w
            # the rewritten relators are the transversal conjugates of the base relator
            for i, r in enumerate(c.presentation.relators):
                back = Word()
                for code in r.codes:
                    g = gens[abs(code) - 1]
                    back = back * (g if code > 0 else g.inverse())
                t = c.transversal[i % c.index]
                assert back == t * p.relators[i // c.index] * t.inverse()


def test_subgroup_h1_examples(trefoil):
    c = reidemeister_schreier(trefoil, trivial_quotient(trefoil))
    h1 = subgroup_h1(c)
    assert h1.free_rank == 1 and h1.torsion == ()
    q = quotient_for(FREE2, [(1, 0), (0, 1)])
    h1 = subgroup_h1(reidemeister_schreier(FREE2, q))
    assert h1.free_rank == 3
    z2 = parse_presentation("gens: g\nrel: g g")
    assert subgroup_h1(reidemeister_schreier(z2, trivial_quotient(z2))).torsion == (2,)


# --- characters -------------------------------------------------------------------------


def test_character_counts():
    z = abelianize(FREE1)
    assert len(enumerate_characters(z, 2)) == 2
    z2 = abelianize(parse_presentation("gens: a\nrel: a a"))
    chars = enumerate_characters(z2, 3)
    assert len(chars) == 1 and chars[0].values == (0,)
    assert len(enumerate_characters(abelianize(FREE2), 2)) == 4
    mixed = abelianize(parse_presentation("gens: a b c\nrel: a a b b\nrel: b b b b b b"))
    for m in (1, 2, 3, 4, 6):
        assert len(enumerate_characters(mixed, m)) == count_characters(mixed, m)


def test_characters_kill_cover_relators():
    p = get("figure_eight")
    cat = QuotientCatalog(p)
    for n in (2, 3, 4):
        for h in range(len(cat.homs(n))):
            c = cat.cover(n, h)
            for m in (2, 3, 4):
                chars = enumerate_characters(cat.h1(n, h), m)
                assert len(set(ch.values for ch in chars)) == len(chars)
                for ch in chars:
                    assert all(ch.of_word(r) == 0 for r in c.presentation.relators)


def test_character_space_matches_enumeration():
    p = get("trefoil")
    cat = QuotientCatalog(p)
    for n, h in [(1, 0), (3, 1), (4, 2)]:
        if h >= len(cat.homs(n)):
            continue
        h1 = cat.h1(n, h)
        for m in (2, 4, 6):
            space = CharacterSpace(h1, m)
            allc = enumerate_characters(h1, m)
            assert [space.char(c).values for c in range(space.size)] == [ch.values for ch in allc]
            exact = [ch.values for ch in allc if ch.exact_order() == m]
            assert [space.char(c).values for c in space.emitted()] == exact


def test_orbit_reduction_covers_every_character():
    # every exact-order character is a symmetry image of an emitted one or of a lower order one
    p = get("trefoil")
    cat = QuotientCatalog(p)
    n, h = 3, next(h for h in range(len(cat.homs(3))) if cat.quotient(3, h).order == 6)
    for m in (2, 3, 4):
        full = CharacterSpace(cat.h1(n, h), m)
        red = cat.char_space(n, h, m, reduce_orbits=True)
        reps = set(red.emitted())
        for code in range(full.size):
            if full.order_of_digits(full.decode(code)) != m:
                continue
            orb = red.orbit(code)
            lower = any(red.order_of_digits(red.decode(c)) != m for c in orb)
            assert lower or min(orb) in reps


def test_symmetries_preserve_degree():
    p = get("trefoil")
    cat = QuotientCatalog(p)
    ab = abelianize(p)
    vals = ab.class_on_generators([1])
    for n in (2, 3):
        for h in range(len(cat.homs(n))):
            c, q = cat.cover(n, h), cat.quotient(n, h)
            for m in (2, 3, 4):
                space = CharacterSpace(cat.h1(n, h), m)
                twist = cat._twist(n, h)
                syms = cover_symmetries(c, m, twist)
                for code in range(0, space.size, max(1, space.size // 6)):
                    ch = space.char(code)
                    d0 = deg_from_values(p, induce_character(p, q, c, ch), vals)
                    for f in syms:
                        img = type(ch)(m, f(ch.values))
                        assert deg_from_values(p, induce_character(p, q, c, img), vals) == d0


# --- induced representations ---------------------------------------------------------------


def _is_monomial_unitary(M):
    k = len(M)
    for row in M:
        if sum(1 for z in row if z) != 1:
            return False
    for j in range(k):
        if sum(1 for i in range(k) if M[i][j]) != 1:
            return False
    return all(z * z.conj() == 1 for row in M for z in row if z)


def test_induced_trivial_is_regular(trefoil):
    q = quotient_for(trefoil, [(1, 0, 2), (0, 2, 1)])
    c = reidemeister_schreier(trefoil, q)
    rho = enumerate_characters(subgroup_h1(c), 1)[0]
    alpha = induce_character(trefoil, q, c, rho)
    assert alpha.dim == 6 and alpha.m == 1
    for x in range(2):
        M = alpha.matrix(x)
        assert all(z == 0 or z == 1 for row in M for z in row)
        assert [row.index(next(z for z in row if z)) for row in M] == [q.action[i][x] for i in range(6)]


def test_induced_index_one_is_the_character(trefoil):
    q = trivial_quotient(trefoil)
    c = reidemeister_schreier(trefoil, q)
    rho = enumerate_characters(subgroup_h1(c), 5)[2]
    alpha = induce_character(trefoil, q, c, rho)
    assert alpha.dim == 1
    for x in range(2):
        assert alpha.matrix(x)[0][0] == CycNum.root(5, rho.values[x])


def test_induced_sign_character_on_double_cover():
    q = quotient_for(FREE1, [(1, 0)])
    c = reidemeister_schreier(FREE1, q)
    rho = enumerate_characters(subgroup_h1(c), 2)[1]      # a^2 -> -1
    assert rho.values == (1,)
    alpha = induce_character(FREE1, q, c, rho)
    A = alpha.matrix(0)
    zero = CycNum.from_rational(0)
    # matrices act on row vectors: e_0 a = e_1, e_1 a = e_0 * rho(a^2)
    assert A == [[zero, CycNum.from_rational(1)], [CycNum.from_rational(-1), zero]]
    # conjugate by diag(1, -1) to the column-convention matrix [[0, -1], [1, 0]]
    D = [[1, 0], [0, -1]]
    conj = [[sum(D[i][a] * A[a][b] * D[b][j] for a in range(2) for b in range(2)) for j in range(2)] for i in range(2)]
    assert conj == [[0, -1], [1, 0]]
    sq = alpha.word_matrix(Word([1, 1]))
    assert sq == [[-1, zero], [zero, -1]]


def test_emitted_reps_are_representations():
    for name in ("trefoil", "figure_eight", "whitehead"):
        p = get(name)
        cur = EnumerationCursor(max_degree=4, max_order=4)
        for cand, _ in itertools.islice(iterate_candidates(p, cur), 150):
            alpha = cand.rep
            for r in p.relators:
                assert alpha.is_identity(r)
            for x in range(p.ngens):
                assert _is_monomial_unitary(alpha.matrix(x))
            assert alpha.is_identity(Word([1, -1]))


# --- enumeration cursor ---------------------------------------------------------------------


def test_fresh_cursor_gives_trivial_rep(trefoil):
    cand, cur = next_candidate(trefoil, EnumerationCursor())
    assert cand.index == 0 and cand.n == 1 and cand.m == 1 and cand.rep.dim == 1
    assert cand.character.values == (0, 0)
    assert cur.index == 1


def test_second_cell_is_base_abelianization(trefoil):
    cur = EnumerationCursor(reduce_orbits=False)
    cand, cur = next_candidate(trefoil, cur)
    cand2, _ = next_candidate(trefoil, cur)
    assert (cand2.n, cand2.m, cand2.rep.dim) == (1, 2, 1)
    assert cand2.character.exact_order() == 2
    # with orbit reduction that character is a twist of the trivial one and is skipped
    cand, cur = next_candidate(trefoil, EnumerationCursor())
    cand2, _ = next_candidate(trefoil, cur)
    assert (cand2.n, cand2.m) == (2, 1)


def test_dovetail_order(figure_eight):
    cur = EnumerationCursor(max_degree=3, max_order=3)
    cells = [(c.n, c.m) for c, _ in iterate_candidates(figure_eight, cur)]
    stages = [n + m for n, m in cells]
    assert stages == sorted(stages)
    assert cells[0] == (1, 1)
    with pytest.raises(BudgetExhausted):
        last = None
        for _, last in iterate_candidates(figure_eight, cur):
            pass
        next_candidate(figure_eight, last)


def test_replay_from_serialized_cursor(whitehead):
    cur = EnumerationCursor(max_degree=3, max_order=4)
    full = [(c.describe(), c.rep) for c, _ in itertools.islice(iterate_candidates(whitehead, cur), 60)]
    mid = None
    for i, (_, c) in enumerate(iterate_candidates(whitehead, cur)):
        if i == 24:
            mid = c
            break
    restored = EnumerationCursor.from_json(mid.dumps())
    assert restored == mid
    tail = [(c.describe(), c.rep) for c, _ in itertools.islice(iterate_candidates(whitehead, restored), 35)]
    assert tail == full[25:]


def test_dimension_cap(trefoil):
    cur = EnumerationCursor(max_degree=4, max_order=2, max_dim=4)
    assert all(c.rep.dim <= 4 for c, _ in iterate_candidates(trefoil, cur))
