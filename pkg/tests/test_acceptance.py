"""End-to-end acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run on its own with ``pytest tests/test_acceptance.py -v``; the summary lines
appear at the end of the run (or inline with ``-s``).
"""

import itertools
import json
import random
import time
from contextlib import contextmanager
from math import ceil

import numpy as np
import pytest

from tng import cli
from tng.corpus import corpus_knots, get, names
from tng.covers import (
    EnumerationCursor,
    QuotientCatalog,
    count_characters,
    enumerate_characters,
    induce_character,
    iterate_candidates,
    trivial_rep,
)
from tng.driver import UpperBoundRegistry, run_algorithm_a
from tng.errors import DenominatorVanishes
from tng.exact.laurent import LaurentPoly
from tng.normgeom import alexander_norm, evaluate_character, face_polynomials, newton_polytope, select_character
from tng.torsion import (
    DegreeTemplate,
    TorsionValue,
    class_values,
    deg_from_values,
    deg_tau,
    delta0,
    specialize,
    tau_multivariable,
    tau_univariate,
    twist_by_character,
)
from tng.words import abelianize, parse_presentation

from conftest import ACCEPTANCE, upoly

TREFOIL_TEXT = "gens: a b\nrel: a b a B A B\n"


@contextmanager
def criterion(n, title, limit=None):
    """Time the body; record and print one PASS/FAIL line for criterion n."""
    info = {}
    t0 = time.perf_counter()
    ok = False
    try:
        yield info
        ok = True
    finally:
        dt = time.perf_counter() - t0
        slow = limit is not None and dt >= limit
        verdict = "PASS" if ok and not slow else "FAIL"
        detail = ", ".join(f"{k}={v}" for k, v in info.items())
        budget = f" (limit {limit:g}s)" if limit is not None else ""
        line = f"criterion {n:2d} {verdict}: {title} [{dt:.2f}s{budget}]" + (f" {detail}" if detail else "")
        ACCEPTANCE[n] = line
        print(line)
    assert not slow, f"criterion {n} took {dt:.2f}s, limit {limit}s"


def write(path, text):
    path.write_text(text)
    return str(path)


def run_cli(args):
    code = cli.main(args)
    return code


def tv(num, den):
    return TorsionValue.make(num, den)


T_MINUS_1 = upoly([-1, 1])


# --- 1 ---------------------------------------------------------------------------------------------


def test_criterion_1_trefoil(tmp_path):
    pres = write(tmp_path / "trefoil.pres", TREFOIL_TEXT)
    reg = write(tmp_path / "reg.json", json.dumps({"trefoil": {"[1]": {"bound": 1, "provenance": "genus 1"}}}))
    out = tmp_path / "out.json"
    with criterion(1, "trefoil bound certified at 1", 1.0) as info:
        p = parse_presentation(TREFOIL_TEXT)
        # hand Fox calculus: tau = (1 - t + t^2) / (t - 1)
        t = tau_univariate(p, trivial_rep(p), [1])
        assert t.equiv(tv(upoly([1, -1, 1]), T_MINUS_1))
        assert deg_tau(t) == 1
        code = run_cli(["bound", "--pres", pres, "--phi", "1", "--registry", reg, "--budget", "1",
                        "--out", str(out)])
        report = json.loads(out.read_text())
        assert code == 0 and report["status"] == "certified"
        assert report["bounds"][0]["lower_ceiling"] == 1 and report["bounds"][0]["upper"] == 1
        assert report["bounds"][0]["witness"]["dimension"] == 1
        info["lower"] = report["bounds"][0]["lower_ceiling"]


# --- 2 ---------------------------------------------------------------------------------------------


def test_criterion_2_figure_eight():
    p = get("figure_eight")
    reg = UpperBoundRegistry()
    reg.add("figure_eight", [1], 1, "genus 1")
    with criterion(2, "figure-eight deg 1 and certified x = 1", 1.0) as info:
        t = tau_univariate(p, trivial_rep(p), [1])
        assert t.equiv(tv(upoly([1, -3, 1]), T_MINUS_1))
        assert deg_tau(t) == 1
        report, _ = run_algorithm_a(p, [1], reg, 1, "figure_eight")
        assert report.status == "certified" and report.bounds[0]["lower_ceiling"] == 1
        info["deg"] = deg_tau(t)


# --- 3 ---------------------------------------------------------------------------------------------


def test_criterion_3_unknot():
    p = get("unknot")
    reg = UpperBoundRegistry()
    reg.add("unknot", [1], 0, "disk")
    run_algorithm_a(p, [1], reg, 1, "unknot")         # warm the import paths
    with criterion(3, "unknot certified x = 0", 0.1) as info:
        t = tau_univariate(p, trivial_rep(p), [1])
        assert t.equiv(tv(LaurentPoly.one(1), T_MINUS_1))
        assert deg_tau(t) == 0
        report, _ = run_algorithm_a(p, [1], reg, 1, "unknot")
        assert report.status == "certified" and report.bounds[0]["lower_ceiling"] == 0
        info["deg"] = deg_tau(t)


# --- 4 ---------------------------------------------------------------------------------------------


def _hand_fox(word, gen, images):
    """d word / d gen pushed to Z[x, y], letter by letter (independent of tng.words)."""
    out = {}
    pos = (0, 0)
    for ch in word:
        x = ch.lower()
        v = images[x]
        if ch.islower():
            if x == gen:
                out[pos] = out.get(pos, 0) + 1
            pos = (pos[0] + v[0], pos[1] + v[1])
        else:
            pos = (pos[0] - v[0], pos[1] - v[1])
            if x == gen:
                out[pos] = out.get(pos, 0) - 1
    return LaurentPoly(2, {e: c for e, c in out.items() if c})


def test_criterion_4_whitehead(tmp_path):
    text = get("whitehead").to_text()
    pres = write(tmp_path / "whitehead.pres", text)
    reg = write(tmp_path / "reg.json", json.dumps({"whitehead": {
        "[1, 0]": {"bound": 1, "provenance": "twice punctured disk"},
        "[0, 1]": {"bound": 1, "provenance": "twice punctured disk"},
        "[1, 1]": {"bound": 2, "provenance": "sum"},
        "[1, -1]": {"bound": 2, "provenance": "difference"},
    }}))
    out = tmp_path / "ball.json"
    with criterion(4, "Whitehead ball is the unit diamond, certified", 10.0) as info:
        p = get("whitehead")
        ab = abelianize(p)
        images = {"a": ab.projection[0], "b": ab.projection[1]}
        rel = "".join(text.split("rel:")[1].split())
        # Wada quotient with the column of a deleted: (dr/db) / (a - 1)
        num = _hand_fox(rel, "b", images)
        den = LaurentPoly(2, {tuple(images["a"]): 1, (0, 0): -1})
        oracle = tv(num, den)
        t = tau_multivariable(p, trivial_rep(p))
        assert t.equiv(oracle)
        assert sorted(newton_polytope(t.numerator).vertices) == [(0, 0), (0, 1), (1, 0), (1, 1)]
        code = run_cli(["ball", "--pres", pres, "--registry", reg, "--budget", "5", "--out", str(out)])
        report = json.loads(out.read_text())
        assert code == 0 and report["status"] == "certified"
        verts = sorted(tuple(int(x) for x in v) for v in report["ball"]["vertices"])
        assert verts == [(-1, 0), (0, -1), (0, 1), (1, 0)]
        assert len(report["certificate"]["witnesses"]) == 4
        info["vertices"] = verts


# --- 5 ---------------------------------------------------------------------------------------------


def test_criterion_5_shapiro():
    from test_torsion import shapiro_pair

    with criterion(5, "Shapiro: induced rep torsion = cover character torsion", 120.0) as info:
        cases = 0
        for name in ("trefoil", "figure_eight"):
            p = get(name)
            cat = QuotientCatalog(p)
            for n in (1, 2, 3):
                for h in range(len(cat.homs(n))):
                    for m in range(1, 7):
                        for rho in enumerate_characters(cat.h1(n, h), m):
                            base, cover = shapiro_pair(p, cat, n, h, rho)
                            assert base.equiv(cover), (name, n, h, rho)
                            cases += 1
        assert cases >= 20
        info["cases"] = cases


# --- 6 ---------------------------------------------------------------------------------------------


def test_criterion_6_change_of_variables():
    p = get("whitehead")
    rng = random.Random(61)
    reps = [c.rep for c, _ in itertools.islice(
        iterate_candidates(p, EnumerationCursor(max_degree=3, max_order=4)), 12)]
    with criterion(6, "specialize(tau_multivariable) = tau_univariate on Whitehead", 60.0) as info:
        taus = [tau_multivariable(p, a) for a in reps]
        checked = skipped = 0
        seen = set()
        while checked < 50:
            phi = (rng.randint(-6, 6), rng.randint(-6, 6))
            if not any(phi) or phi in seen:
                continue
            seen.add(phi)
            alpha, t = reps[0], taus[0]
            assert specialize(t, phi).equiv(tau_univariate(p, alpha, phi))
            checked += 1
        twisted = 0
        for alpha, t in zip(reps[1:], taus[1:]):
            for _ in range(5):
                phi = (rng.randint(-4, 4), rng.randint(-4, 4))
                if not any(phi):
                    continue
                try:
                    s = specialize(t, phi)
                except DenominatorVanishes:
                    skipped += 1
                    continue
                assert s.equiv(tau_univariate(p, alpha, phi))
                twisted += 1
        info["classes"] = checked
        info["twisted_pairs"] = twisted
        info["inadmissible_skipped"] = skipped


# --- 7 ---------------------------------------------------------------------------------------------


def test_criterion_7_delta_structure():
    with criterion(7, "Delta_0 != 0; polynomial torsion when b > 1 and Delta_1 != 0") as info:
        computations = polys = 0
        for name in names():
            p = get(name)
            b = abelianize(p).free_rank
            cur = EnumerationCursor(max_degree=3, max_order=4, max_dim=12)
            psi = [list(r) for r in abelianize(p).projection]
            for cand, _ in itertools.islice(iterate_candidates(p, cur), 25):
                if b == 1:
                    assert not delta0(cand.rep, psi).is_zero(), (name, cand.index)
                    computations += 1
                    continue
                t, d = tau_multivariable(p, cand.rep, with_deltas=True)
                assert not d.delta0.is_zero(), (name, cand.index)
                computations += 1
                if b > 1 and not d.delta1.is_zero():
                    assert t.is_polynomial(), (name, cand.index)
                    polys += 1
        info["computations"] = computations
        info["b>1 polynomial checks"] = polys


# --- 8 ---------------------------------------------------------------------------------------------


def test_criterion_8_norm_from_twisted_specialization():
    rng = random.Random(8)
    with criterion(8, "selected character recovers the Alexander norm", 60.0) as info:
        entries = 0
        for name in ("whitehead", "hopf", "torus_link_2_4"):
            p = get(name)
            reps = [c.rep for c, _ in itertools.islice(
                iterate_candidates(p, EnumerationCursor(max_degree=3, max_order=3)), 4)]
            for alpha in reps:
                t = tau_multivariable(p, alpha)
                if t.is_zero():
                    continue
                polys = [q for _, q in face_polynomials(t.numerator)]
                kappa, m, j = select_character(polys)
                assert all(evaluate_character(q, kappa, m, j) for q in polys)
                twisted = twist_by_character(t, m, [j * x for x in kappa])
                done = 0
                while done < 100:
                    phi = tuple(rng.randint(-9, 9) for _ in range(t.nvars))
                    if not any(phi):
                        continue
                    assert deg_tau(specialize(twisted, phi)) == alexander_norm(t, phi), (name, phi)
                    done += 1
                entries += 1
        info["torsions"] = entries
        info["classes_each"] = 100


# --- 9 ---------------------------------------------------------------------------------------------


def _exact_count(h1, m):
    """Characters of H_1 -> Z/m of exact order m (Moebius over the divisors)."""
    return count_characters(h1, m) - sum(_exact_count(h1, d) for d in range(1, m) if m % d == 0)


def test_criterion_9_degree_soundness():
    """Every (cover, character) within n <= 4, m <= 6 obeys ceil(deg / k) <= 2g - 1.

    Three layers: the character-independent bound deg <= DegreeTemplate.upper_bound
    covers every character; certified exact degrees for one character per
    symmetry orbit; exact torsion for a fixed sample of the characters the
    certificate could not settle, plus a sample of the certified ones.
    """
    rng = random.Random(9)
    with criterion(9, "ceil(deg tau / k) <= 2g - 1 across the n <= 4, m <= 6 frontier", 600.0) as info:
        totals = dict(reps=0, orbit_reps=0, certified=0, exact=0, violations=0)
        for name, p, g in corpus_knots():
            cat = QuotientCatalog(p)
            vals = class_values(p, [1])
            limit = 2 * g - 1
            pending = []
            for n in range(1, 5):
                for h in range(len(cat.homs(n))):
                    q, c = cat.quotient(n, h), cat.cover(n, h)
                    T = DegreeTemplate(p, c, vals)
                    k = q.order
                    for m in range(1, 7):
                        count = _exact_count(cat.h1(n, h), m)
                        totals["reps"] += count
                        if count and ceil(T.upper_bound / k) > limit:
                            totals["violations"] += count
                        space = cat.char_space(n, h, m, True)
                        codes = list(space.emitted())
                        if not codes:
                            continue
                        V = np.array([space.values_of(space.decode(x)) for x in codes], dtype=np.int64)
                        degs = T.degrees(V, m)
                        totals["orbit_reps"] += len(codes)
                        for x, d in zip(codes, degs.tolist()):
                            if d >= 0:
                                totals["certified"] += 1
                                if d > T.upper_bound or ceil(d / k) > limit:
                                    totals["violations"] += 1
                            pending.append((d, n, h, m, x))
            unsettled = [e for e in pending if e[0] < 0]
            settled = [e for e in pending if e[0] >= 0]
            sample = rng.sample(unsettled, min(40, len(unsettled))) + rng.sample(settled, min(20, len(settled)))
            for d, n, h, m, x in sample:
                q, c = cat.quotient(n, h), cat.cover(n, h)
                rep = induce_character(p, q, c, cat.char_space(n, h, m, True).char(x))
                exact = deg_from_values(p, rep, vals)
                totals["exact"] += 1
                assert d < 0 or d == exact, (name, n, h, m, x)
                if ceil(exact / q.order) > limit:
                    totals["violations"] += 1
        assert totals["violations"] == 0
        info.update(totals)


# --- 10 --------------------------------------------------------------------------------------------


def test_criterion_10_algebraic_properties():
    import test_exact
    import test_torsion
    import test_words

    with criterion(10, "Fox, SNF, cyclotomic, gcd and Wada property suites", 300.0) as info:
        test_words.test_fox_product_rule_1000()
        test_exact.test_snf_random_500()
        test_exact.test_snf_product_matches_determinant()
        for m in test_exact.CONDUCTORS:
            test_exact.test_field_axioms(m, random.Random(m))
        test_exact.test_gcd_of_product_with_factor()
        test_exact.test_multivariable_gcd_divisibility(random.Random(10))
        test_exact.test_trivariate_gcd()
        for name, phi in [("trefoil", [1]), ("figure_eight", [1]), ("knot_5_2", [1]),
                          ("whitehead", [1, 0]), ("whitehead", [2, -1]), ("whitehead", [1, 1])]:
            test_torsion.test_wada_column_independence(name, phi)
        info["suites"] = 6


# --- 11 --------------------------------------------------------------------------------------------


def test_criterion_11_determinism(tmp_path):
    pres = write(tmp_path / "whitehead.pres", get("whitehead").to_text())
    outs = [tmp_path / "w1.json", tmp_path / "w8.json"]
    with criterion(11, "tng ball with 1 and 8 workers is byte-identical") as info:
        codes = []
        for workers, out in zip((1, 8), outs):
            codes.append(run_cli(["ball", "--pres", pres, "--budget", "60", "--max-degree", "3",
                                  "--workers", str(workers), "--out", str(out)]))
        a, b = outs[0].read_bytes(), outs[1].read_bytes()
        assert codes[0] == codes[1]
        assert a == b
        info["bytes"] = len(a)
        info["budget_used"] = json.loads(a)["budget_used"]


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v", "-s"]))
