"""Algorithms A and B: lower bounds from twisted torsion against a registry of upper bounds.

The lower-bound side walks the candidate stream of finite induced
representations and turns each torsion into a lower bound (per class) or a
norm ball (per manifold).  Upper bounds come from
:class:`UpperBoundRegistry`, a user-supplied table of upper bounds with
provenance strings.  The tool never invents an upper bound.

Budgets count candidates, not seconds, and every merge is keyed by the
candidate's cursor index, so reports do not depend on the worker count.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, gcd
from typing import Dict, List, Optional, Sequence, Tuple

from .covers import (
    EnumerationCursor,
    FinChar,
    QuotientCatalog,
    induce_character,
    next_candidate,
)
from .errors import (
    BudgetExhausted,
    DimensionExceeded,
    IncompleteCones,
    RegistryConflict,
    SchemaViolation,
    UnsupportedFormat,
    ZeroClass,
)
from .hull import convex_hull
from .exact.laurent import LaurentPoly
from .normgeom import (
    A_IN_B,
    EqualityCertificate,
    NormBallDesc,
    _ball_from_difference,
    ball_compare,
    certify_equality,
    dual_ball,
    interval_ball,
)
from .torsion import DegreeTemplate, _check_deficiency, class_values, deg_from_values, tau_multivariable
from .words import Presentation, abelianize, parse_presentation

CERTIFIED, BOUNDED, INCONCLUSIVE = "certified", "bounded", "inconclusive"
EXIT_CODES = {CERTIFIED: 0, BOUNDED: 2, INCONCLUSIVE: 3}
ASSUMPTIONS = [
    "the manifold is irreducible with toroidal or empty boundary (asserted by the user, not checked)",
    "the manifold is not a closed graph manifold (asserted by the user, not checked)",
]


# --- the upper-bound registry ----------------------------------------------------


def canonical_class(phi: Sequence[int]) -> Tuple[Tuple[int, ...], int]:
    """(primitive class with first nonzero entry positive, multiplier)."""
    g = 0
    for x in phi:
        g = gcd(g, abs(int(x)))
    if g == 0:
        raise ZeroClass("the zero class has no primitive form")
    prim = [int(x) // g for x in phi]
    first = next(x for x in prim if x)
    if first < 0:
        prim = [-x for x in prim]
    return tuple(prim), g


class UpperBoundRegistry:
    """Upper bounds on the Thurston norm, stored per primitive class.

    The norm is symmetric and homogeneous, so x(n phi) = |n| x(phi).  An
    entry for n phi with bound B gives x(phi) <= floor(B / |n|), an integer
    because the norm is integral on integral classes.  Of two entries for
    the same class the smaller is kept.
    """

    def __init__(self):
        self.entries: Dict[Tuple[str, Tuple[int, ...]], Tuple[int, str]] = {}

    def add(self, manifold: str, phi: Sequence[int], bound: int, provenance: str = ""):
        if bound < 0:
            raise SchemaViolation(f"{manifold}/{list(phi)}: bound must be nonnegative")
        prim, g = canonical_class(phi)
        key = (manifold, prim)
        value = (bound // g, provenance)
        if key not in self.entries or value[0] < self.entries[key][0]:
            self.entries[key] = value

    def lookup(self, manifold: str, phi: Sequence[int]) -> Optional[Tuple[int, str]]:
        prim, g = canonical_class(phi)
        hit = self.entries.get((manifold, prim))
        if hit is None:
            return None
        return hit[0] * g, hit[1]

    def __len__(self):
        return len(self.entries)

    def to_json(self):
        out: Dict[str, dict] = {}
        for (man, phi), (bound, prov) in sorted(self.entries.items()):
            out.setdefault(man, {})[json.dumps(list(phi))] = {"bound": bound, "provenance": prov}
        return out

    @classmethod
    def from_json(cls, obj, source: str = "registry") -> "UpperBoundRegistry":
        reg = cls()
        if not isinstance(obj, dict):
            raise SchemaViolation(f"{source}: top level must be an object mapping manifold ids to entries")
        for man, table in obj.items():
            if not isinstance(table, dict):
                raise SchemaViolation(f"{source}: field {man!r} must be an object")
            for key, entry in table.items():
                where = f"{source}: field {man}/{key}"
                try:
                    phi = json.loads(key)
                except json.JSONDecodeError:
                    raise SchemaViolation(f"{where}: class key is not a JSON array") from None
                if not isinstance(phi, list) or not phi or not all(isinstance(x, int) and not isinstance(x, bool) for x in phi):
                    raise SchemaViolation(f"{where}: class key must be a nonempty array of integers")
                if not any(phi):
                    raise SchemaViolation(f"{where}: class must be nonzero")
                if not isinstance(entry, dict) or set(entry) - {"bound", "provenance"} or "bound" not in entry:
                    raise SchemaViolation(f"{where}: entry must be {{'bound': int, 'provenance': str}}")
                bound = entry["bound"]
                if not isinstance(bound, int) or isinstance(bound, bool) or bound < 0:
                    raise SchemaViolation(f"{where}/bound: must be an integer >= 0, got {bound!r}")
                prov = entry.get("provenance", "")
                if not isinstance(prov, str):
                    raise SchemaViolation(f"{where}/provenance: must be a string")
                reg.add(man, phi, bound, prov)
        return reg


def load_registry(path) -> UpperBoundRegistry:
    text = open(path, encoding="utf-8").read()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaViolation(f"{path}: line {e.lineno}, column {e.colno}: {e.msg}") from None
    return UpperBoundRegistry.from_json(obj, str(path))


# --- bounds and reports ------------------------------------------------------------


@dataclass
class BoundCell:
    """Best lower bound for one class and the smallest cursor index reaching it."""

    phi: Tuple[int, ...]
    value: Optional[Fraction] = None
    index: Optional[int] = None
    witness: Optional[dict] = None

    def offer(self, value: Fraction, index: int, witness: dict) -> bool:
        if self.value is None or value > self.value or (value == self.value and index < self.index):
            self.value, self.index, self.witness = value, index, witness
            return True
        return False

    def merge(self, other: "BoundCell") -> "BoundCell":
        out = BoundCell(self.phi, self.value, self.index, self.witness)
        if other.value is not None:
            out.offer(other.value, other.index, other.witness)
        return out

    @property
    def ceiling(self) -> Optional[int]:
        return None if self.value is None else ceil(self.value)


@dataclass
class RunReport:
    mode: str
    status: str
    manifold: str
    b1: int
    bounds: List[dict]
    ball: Optional[NormBallDesc] = None
    certificate: Optional[EqualityCertificate] = None
    budget_used: int = 0
    cursor: Optional[EnumerationCursor] = None
    witness: Optional[dict] = None
    notes: List[str] = field(default_factory=list)

    def to_json(self) -> dict:
        ball = None
        if self.ball is not None:
            ball = {
                "vertices": [[str(x) for x in v] for v in self.ball.vertices],
                "degenerate": [list(w) for w in self.ball.degenerate],
                "scale": self.ball.k,
            }
        return {
            "status": self.status,
            "mode": self.mode,
            "manifold": self.manifold,
            "b1": self.b1,
            "bounds": self.bounds,
            "ball": ball,
            "ball_witness": self.witness,
            "certificate": self.certificate.to_json() if self.certificate else None,
            "budget_used": self.budget_used,
            "cursor": self.cursor.to_json() if self.cursor else None,
            "assumptions": ASSUMPTIONS,
            "notes": self.notes,
        }

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.status]


def _bound_entry(phi, cell: BoundCell, upper) -> dict:
    return {
        "phi": list(phi),
        "lower_rational": None if cell.value is None else str(cell.value),
        "lower_ceiling": cell.ceiling,
        "upper": None if upper is None else upper[0],
        "upper_provenance": None if upper is None else upper[1],
        "witness": cell.witness,
    }


# --- candidate evaluation (runs in workers) ----------------------------------------------

_STATE: dict = {}


def _worker_init(p: Presentation):
    _STATE.clear()
    _STATE["p"] = p
    _STATE["catalog"] = QuotientCatalog(p)
    _STATE["templates"] = {}
    _STATE["ab"] = abelianize(p)


def _rep(item):
    index, n, h, m, values = item
    cat = _STATE["catalog"]
    return induce_character(_STATE["p"], cat.quotient(n, h), cat.cover(n, h), FinChar(m, tuple(values)))


def _eval_degrees(task):
    """Degrees of tau at one class for a chunk of (index, n, h, m, values) items."""
    items, classes = task
    p = _STATE["p"]
    cat = _STATE["catalog"]
    out = []
    for item in items:
        index, n, h, m, values = item
        rep = None
        degs = []
        for vals in classes:
            d = -1
            if p.relators:
                key = (n, h, tuple(vals))
                T = _STATE["templates"].get(key)
                if T is None:
                    T = _STATE["templates"][key] = DegreeTemplate(p, cat.cover(n, h), vals)
                d = int(T.degrees([values], m)[0])
            if d < 0:
                rep = rep or _rep(item)
                d = deg_from_values(p, rep, vals)
            degs.append(d)
        out.append((index, degs, cat.quotient(n, h).order))
    return out


def _eval_torsion(task):
    items, _ = task
    out = []
    for item in items:
        rep = _rep(item)
        tv = tau_multivariable(_STATE["p"], rep, _STATE["ab"])
        out.append((item[0], tv, rep.dim))
    return out


class _Evaluator:
    """Runs evaluation chunks in-process or on a process pool; results keep input order."""

    def __init__(self, p: Presentation, workers: int):
        self.workers = max(1, int(workers))
        self.pool = None
        if self.workers > 1:
            self.pool = ProcessPoolExecutor(self.workers, initializer=_worker_init, initargs=(p,))
        else:
            _worker_init(p)

    def run(self, fn, items, extra):
        if not items:
            return []
        if self.pool is None:
            return fn((items, extra))
        size = max(1, -(-len(items) // self.workers))
        chunks = [(items[i:i + size], extra) for i in range(0, len(items), size)]
        out = []
        for part in self.pool.map(fn, chunks):
            out.extend(part)
        return out

    def close(self):
        if self.pool is not None:
            self.pool.shutdown(cancel_futures=True)


def _describe(item, dim) -> dict:
    index, n, h, m, values = item
    return {"cursor": index, "n": n, "hom": h, "char_order": m, "character": list(values), "dimension": dim}


def _pull(p, cur, catalog, count):
    """Up to ``count`` candidates as plain items, each with the cursor just after it."""
    items, cursors = [], []
    for _ in range(count):
        try:
            cand, cur = next_candidate(p, cur, catalog)
        except BudgetExhausted:
            return items, cursors, True
        items.append((cand.index, cand.n, cand.hom_index, cand.m, tuple(cand.character.values)))
        cursors.append(cur)
    return items, cursors, False


CHUNK = 256


# --- Algorithm A ---------------------------------------------------------------------------


@dataclass
class RunState:
    """Everything needed to continue an interrupted run."""

    mode: str
    presentation: str
    manifold: str
    cursor: EnumerationCursor
    used: int = 0
    budget: int = 0
    phi: Optional[List[int]] = None
    cells: Dict[str, list] = field(default_factory=dict)
    ball_source: Optional[dict] = None
    registry: Optional[dict] = None
    exhausted: bool = False
    certify_mode: str = "cones"

    def to_json(self):
        return {
            "mode": self.mode, "presentation": self.presentation, "manifold": self.manifold,
            "cursor": self.cursor.to_json(), "used": self.used, "budget": self.budget,
            "phi": self.phi, "cells": self.cells, "ball_source": self.ball_source,
            "registry": self.registry, "exhausted": self.exhausted, "certify_mode": self.certify_mode,
        }

    @classmethod
    def from_json(cls, obj) -> "RunState":
        obj = dict(obj)
        obj["cursor"] = EnumerationCursor.from_json(obj["cursor"])
        return cls(**obj)


def save_state(state: RunState, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(state.to_json(), fh, sort_keys=True, indent=1)


def load_state(path) -> RunState:
    with open(path, encoding="utf-8") as fh:
        return RunState.from_json(json.load(fh))


def _cursor_for(max_degree=4, max_char_order=6, max_dim=24) -> EnumerationCursor:
    return EnumerationCursor(max_degree=max_degree, max_order=max_char_order, max_dim=max_dim)


def run_algorithm_a(p: Presentation, phi: Sequence[int], registry: Optional[UpperBoundRegistry] = None,
                    budget: int = 100, manifold: Optional[str] = None, cursor: Optional[EnumerationCursor] = None,
                    workers: int = 1, state: Optional[RunState] = None) -> Tuple[RunReport, RunState]:
    """Lower bounds on x(phi) from deg tau / k until they meet the registry bound."""
    _check_deficiency(p)
    ab = abelianize(p)
    phi = [int(x) for x in phi]
    values = class_values(p, phi, ab)
    manifold = manifold or p.name or "manifold"
    registry = registry or UpperBoundRegistry()
    if state is None:
        state = RunState("bound", p.to_text(), manifold, cursor or _cursor_for(), phi=phi,
                         registry=registry.to_json())
    state.budget += budget
    upper = registry.lookup(manifold, phi)
    cell = BoundCell(tuple(phi))
    if "phi" in state.cells:
        v, i, w = state.cells["phi"]
        cell = BoundCell(tuple(phi), Fraction(v), i, w)

    def done():
        return upper is not None and cell.value is not None and cell.ceiling >= upper[0]

    ev = _Evaluator(p, workers) if not done() else None
    catalog = _STATE["catalog"] if ev is not None and ev.pool is None else QuotientCatalog(p)
    try:
        while not done() and not state.exhausted and state.used < state.budget:
            want = min(CHUNK * ev.workers, state.budget - state.used)
            items, cursors, ended = _pull(p, state.cursor, catalog, want)
            results = ev.run(_eval_degrees, items, [values])
            for item, after, (index, degs, k) in zip(items, cursors, results):
                state.used += 1
                state.cursor = after
                cell.offer(Fraction(degs[0], k), index, dict(_describe(item, k), degree=degs[0]))
                if done():
                    break
            else:
                state.exhausted = ended
    finally:
        if ev is not None:
            ev.close()
    if cell.value is not None:
        state.cells["phi"] = [str(cell.value), cell.index, cell.witness]
    if upper is not None and cell.value is not None and cell.ceiling > upper[0]:
        raise RegistryConflict(
            f"registry bound {upper[0]} for {phi} is below the proven lower bound {cell.ceiling}")
    if cell.value is None:
        status = INCONCLUSIVE
    elif done():
        status = CERTIFIED
    else:
        status = BOUNDED
    certificate = None
    if status == CERTIFIED:
        certificate = EqualityCertificate(None, [(tuple(phi), cell.ceiling, upper[0], upper[1])], "class")
    report = RunReport("bound", status, manifold, ab.free_rank, [_bound_entry(phi, cell, upper)],
                       certificate=certificate, budget_used=state.used, cursor=state.cursor)
    return report, state


# --- Algorithm B -------------------------------------------------------------------------------


def _zero_ball(b: int) -> NormBallDesc:
    return _ball_from_difference(convex_hull([(0,) * b]), 1, None)


def _restore_ball(source, b):
    if source is None:
        return _zero_ball(b)
    if "deg" in source:
        return interval_ball(source["deg"], source["k"])
    return dual_ball(LaurentPoly.from_json(source["numerator"]), source["k"])


def _certify(ball, manifold, registry, mode):
    classes = ball.witness_classes() if mode == "cones" else ball.ray_classes()
    witnesses = []
    for phi in classes:
        lower = ball.norm(phi)
        upper = registry.lookup(manifold, phi)
        if upper is not None and ceil(lower) > upper[0]:
            raise RegistryConflict(
                f"registry bound {upper[0]} for {list(phi)} is below the proven lower bound {ceil(lower)}")
        witnesses.append((phi, lower, None if upper is None else upper[0], "" if upper is None else upper[1]))
    try:
        return certify_equality(ball, witnesses, mode), witnesses
    except IncompleteCones:
        return None, witnesses


def run_algorithm_b(p: Presentation, registry: Optional[UpperBoundRegistry] = None, budget: int = 100,
                    manifold: Optional[str] = None, cursor: Optional[EnumerationCursor] = None,
                    workers: int = 1, state: Optional[RunState] = None,
                    certify_mode: str = "cones") -> Tuple[RunReport, RunState]:
    """Shrink the norm ball B(N, alpha) over the candidate stream until the registry pins it down.

    The current norm z starts at zero.  It is replaced by a candidate's
    norm only when the candidate's ball is strictly smaller; after each
    replacement one class per open cone of the ball is looked up in the
    registry and the equality test is run.
    """
    _check_deficiency(p)
    ab = abelianize(p)
    b = ab.free_rank
    manifold = manifold or p.name or "manifold"
    registry = registry or UpperBoundRegistry()
    if state is None:
        state = RunState("ball", p.to_text(), manifold, cursor or _cursor_for(), registry=registry.to_json(),
                         certify_mode=certify_mode)
    certify_mode = state.certify_mode
    state.budget += budget
    if b == 0:
        cert = EqualityCertificate(None, [], certify_mode)
        return RunReport("ball", CERTIFIED, manifold, 0, [], certificate=cert, cursor=state.cursor,
                         notes=["H^1 vanishes, so there is nothing to prove"]), state
    if b > 3:
        raise DimensionExceeded(f"norm-ball mode needs b1 <= 3, got {b}")
    ball = _restore_ball(state.ball_source, b)
    witness = state.ball_source["witness"] if state.ball_source else None
    cert, witnesses = None, []
    attempted = False
    values = class_values(p, [1], ab) if b == 1 else None
    ev = _Evaluator(p, workers)
    catalog = _STATE["catalog"] if ev.pool is None else QuotientCatalog(p)
    try:
        while cert is None and not state.exhausted and state.used < state.budget:
            want = min(CHUNK * ev.workers, state.budget - state.used)
            items, cursors, ended = _pull(p, state.cursor, catalog, want)
            if b == 1:
                results = ev.run(_eval_degrees, items, [values])
            else:
                results = ev.run(_eval_torsion, items, None)
            for item, after, res in zip(items, cursors, results):
                state.used += 1
                state.cursor = after
                if b == 1:
                    index, degs, k = res
                    new = interval_ball(degs[0], k)
                    source = {"deg": degs[0], "k": k}
                    info = dict(_describe(item, k), degree=degs[0])
                else:
                    index, tv, k = res
                    new = dual_ball(tv, k)
                    num = tv.numerator if not tv.is_zero() else LaurentPoly.zero(b)
                    source = {"numerator": num.to_json(), "k": k}
                    info = _describe(item, k)
                if ball_compare(new, ball) == A_IN_B:
                    ball, witness = new, info
                    state.ball_source = dict(source, witness=info)
                    attempted = False
                if not attempted:
                    attempted = True
                    cert, witnesses = _certify(ball, manifold, registry, certify_mode)
                    if cert is not None:
                        break
            else:
                state.exhausted = ended
    finally:
        ev.close()
    if not witnesses:
        _, witnesses = _certify(ball, manifold, registry, certify_mode)
    bounds = []
    for phi, lower, upper, prov in witnesses:
        bounds.append({
            "phi": list(phi), "lower_rational": str(lower), "lower_ceiling": ceil(lower),
            "upper": upper, "upper_provenance": prov or None, "witness": witness,
        })
    if cert is not None:
        status = CERTIFIED
    elif state.used == 0:
        status = INCONCLUSIVE
    else:
        status = BOUNDED
    report = RunReport("ball", status, manifold, b, bounds, ball=ball, certificate=cert,
                       budget_used=state.used, cursor=state.cursor, witness=witness)
    return report, state


def resume(state: RunState, budget: Optional[int] = None, workers: int = 1) -> Tuple[RunReport, RunState]:
    """Continue a saved run; ``budget`` more candidates (default: the original budget again)."""
    p = parse_presentation(state.presentation, name=state.manifold)
    registry = UpperBoundRegistry.from_json(state.registry or {})
    extra = state.budget if budget is None else budget
    if state.mode == "bound":
        return run_algorithm_a(p, state.phi, registry, extra, state.manifold, workers=workers, state=state)
    return run_algorithm_b(p, registry, extra, state.manifold, workers=workers, state=state)


# --- rendering ------------------------------------------------------------------------------------


def render_report(r: RunReport, fmt: str = "json") -> bytes:
    if fmt == "json":
        return (json.dumps(r.to_json(), sort_keys=True, indent=2, ensure_ascii=False) + "\n").encode("utf-8")
    if fmt == "svg":
        if r.ball is None or r.b1 != 2:
            raise UnsupportedFormat("svg output needs a norm-ball report with b1 = 2")
        return _ball_svg(r).encode("utf-8")
    raise UnsupportedFormat(f"unknown format {fmt!r}")


def _ball_svg(r: RunReport) -> str:
    ball = r.ball
    size, pad = 400, 60
    pts = [tuple(float(x) for x in v) for v in ball.vertices] or [(0.0, 0.0)]
    rays = [tuple(float(x) for x in b["phi"]) for b in r.bounds]
    extent = max([abs(c) for v in pts for c in v] + [1e-9])
    scale = (size / 2 - pad) / extent

    def xy(v):
        return size / 2 + v[0] * scale, size / 2 - v[1] * scale

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
           f'<line x1="0" y1="{size / 2}" x2="{size}" y2="{size / 2}" stroke="#bbb"/>',
           f'<line x1="{size / 2}" y1="0" x2="{size / 2}" y2="{size}" stroke="#bbb"/>']
    if ball.ball is not None and ball.ball.dim == 2:
        poly = " ".join("%.3f,%.3f" % xy(v) for v in _ccw(ball.ball.vertices))
        out.append(f'<polygon points="{poly}" fill="#cfe0f5" stroke="#1f4e8c" stroke-width="2"/>')
    elif len(ball.vertices) == 2:
        (x1, y1), (x2, y2) = xy(pts[0]), xy(pts[1])
        out.append(f'<line x1="{x1:.3f}" y1="{y1:.3f}" x2="{x2:.3f}" y2="{y2:.3f}" stroke="#1f4e8c" stroke-width="2"/>')
    for w in ball.degenerate:
        out.append(f'<!-- zero-norm direction {list(w)} -->')
    for ray in rays:
        n = max(abs(ray[0]), abs(ray[1])) or 1.0
        x, y = xy((ray[0] / n * extent, ray[1] / n * extent))
        out.append(f'<line x1="{size / 2}" y1="{size / 2}" x2="{x:.3f}" y2="{y:.3f}" stroke="#c0392b" stroke-dasharray="4 3"/>')
    for v, raw in zip(pts, ball.vertices):
        x, y = xy(v)
        label = "(" + ",".join(str(c) for c in raw) + ")"
        out.append(f'<circle cx="{x:.3f}" cy="{y:.3f}" r="3" fill="#1f4e8c"/>')
        out.append(f'<text x="{x + 6:.3f}" y="{y - 6:.3f}" font-size="12" font-family="monospace">{label}</text>')
    out.append(f'<text x="8" y="18" font-size="13" font-family="sans-serif">{r.manifold}: {r.status}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _ccw(vertices):
    cx = sum(v[0] for v in vertices) / len(vertices)
    cy = sum(v[1] for v in vertices) / len(vertices)
    return sorted(vertices, key=lambda v: math.atan2(float(v[1] - cy), float(v[0] - cx)))
