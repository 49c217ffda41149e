"""Brute-force reference semantics used to cross-check the solver.

Nothing here calls into ``engine`` or ``preference``, and none of the
family, order or measure methods of ``core`` is used: families are
materialized by enumeration, closures are built set by set, and orders and
measures are re-evaluated from their raw data.
"""

from __future__ import annotations

import itertools
import math
from typing import Iterable

from .core import (
    AnyFamily,
    Card,
    Chain,
    Even,
    Extensional,
    Indicator,
    Linear,
    MeasureAtom,
    NormalRule,
    Pairs,
    PreorderAtom,
    Program,
    Rank,
    SCAtom,
    Weights,
)
from .errors import CapExceededError, MixedInfinityError

ORACLE_CAP = 16


def _subsets(items: Iterable[str]):
    items = sorted(items)
    for r in range(len(items) + 1):
        for c in itertools.combinations(items, r):
            yield frozenset(c)


def _order(models):
    return sorted(models, key=lambda m: (len(m), sorted(m)))


# --------------------------------------------------------------------------
# Gelfond-Lifschitz


def gl_stable_models(rules: Iterable[NormalRule], atoms: Iterable[str] = (),
                     cap: int = ORACLE_CAP) -> list[frozenset]:
    rules = list(rules)
    universe = set(atoms)
    for r in rules:
        universe |= {r.head, *r.pos, *r.neg}
    if len(universe) > cap:
        raise CapExceededError(len(universe), cap, "normal program")
    out = []
    for m in _subsets(universe):
        reduct = [(r.head, r.pos) for r in rules if not (set(r.neg) & m)]
        least: set = set()
        while True:
            new = {h for h, pos in reduct if set(pos) <= least}
            if new <= least:
                break
            least |= new
        if least == m:
            out.append(m)
    return _order(out)


# --------------------------------------------------------------------------
# SC stable models over the full universe


class _Tables:
    """Materialized families and upper closures, one per distinct SC atom."""

    def __init__(self):
        self._family: dict = {}
        self._closure: dict = {}

    def family(self, a: SCAtom) -> frozenset:
        if a not in self._family:
            fam = a.family
            if isinstance(fam, Extensional):
                members = frozenset(fam.sets)
            else:
                members = frozenset(s for s in _subsets(a.base) if _builtin_member(fam, s))
            self._family[a] = members
        return self._family[a]

    def closure(self, a: SCAtom) -> frozenset:
        if a not in self._closure:
            members = self.family(a)
            self._closure[a] = frozenset(
                y for y in _subsets(a.base) if any(z <= y for z in members)
            )
        return self._closure[a]


def _builtin_member(fam, s: frozenset) -> bool:
    if isinstance(fam, AnyFamily):
        return True
    if isinstance(fam, Even):
        return len(s) % 2 == 0
    if isinstance(fam, Card):
        return fam.lo <= len(s) <= fam.hi
    raise TypeError(fam)


def _head_sc(head) -> SCAtom:
    return head.sc if isinstance(head, (PreorderAtom, MeasureAtom)) else head


def _is_sc_stable(program: Program, m: frozenset, tables: _Tables) -> bool:
    def sat(a):
        return (m & a.base) in tables.family(a)

    horn = []
    for r in program.rules:
        body_ok = all(sat(b) for b in r.body)
        head = _head_sc(r.head)
        if body_ok and not sat(head):
            return False
        if body_ok:
            for a in head.base & m:
                horn.append((a, r.body))
    n: set = set()
    while True:
        step = {a for a, body in horn if all((frozenset(n) & b.base) in tables.closure(b) for b in body)}
        if step <= n:
            break
        n |= step
    return n == m


def oracle_stable_models(program: Program, cap: int = ORACLE_CAP) -> list[frozenset]:
    if len(program.universe) > cap:
        raise CapExceededError(len(program.universe), cap, "universe")
    tables = _Tables()
    return _order(m for m in _subsets(program.universe) if _is_sc_stable(program, m, tables))


# --------------------------------------------------------------------------
# preference, recomputed from raw order and measure data


def _leq(order, a: frozenset, b: frozenset) -> bool:
    if isinstance(order, Chain):
        if a == b:
            return True
        pos = {s: i for i, s in enumerate(order.sets)}
        return a in pos and b in pos and pos[a] <= pos[b]
    if isinstance(order, Pairs):
        rel = set(order.pairs)
        if not order.closed:
            return (a, b) in rel
        if a == b:
            return True
        # Warshall over the mentioned sets
        nodes = sorted({x for p in rel for x in p}, key=lambda s: (len(s), sorted(s)))
        reach = {(x, y): (x, y) in rel for x in nodes for y in nodes}
        for k in nodes:
            for i in nodes:
                if reach[i, k]:
                    for j in nodes:
                        if reach[k, j]:
                            reach[i, j] = True
        return reach.get((a, b), False)
    if isinstance(order, Rank):
        table = dict(order.weights)
        return table.get(a, order.default) <= table.get(b, order.default)
    raise TypeError(order)


def _rho(measure, s: frozenset) -> float:
    if isinstance(measure, Weights):
        return dict(measure.weights).get(s, measure.default)
    if isinstance(measure, Indicator):
        return measure.if_in if measure.pivot in s else measure.if_out
    if isinstance(measure, Linear):
        w = dict(measure.weights)
        return _sum([measure.offset] + [w.get(x, 0.0) for x in s])
    raise TypeError(measure)


def _sum(values) -> float:
    values = list(values)
    if math.inf in values and -math.inf in values:
        raise MixedInfinityError("sum mixes +inf and -inf")
    return math.fsum(values) if all(math.isfinite(v) for v in values) else sum(values)


def _prefs(program: Program, m: frozenset, tables: _Tables) -> frozenset:
    return frozenset(
        r.head for r in program.rules
        if isinstance(r.head, (PreorderAtom, MeasureAtom))
        and all((m & b.base) in tables.family(b) for b in r.body)
    )


def _product(t, m1, m2) -> tuple[bool, bool]:
    """(T |= m1 < m2, T |= m1 ~ m2) straight from the definitions."""
    le = [_leq(a.order, m1 & a.base, m2 & a.base) for a in t]
    ge = [_leq(a.order, m2 & a.base, m1 & a.base) for a in t]
    strict = all(le) and any(x and not y for x, y in zip(le, ge))
    return strict, all(le) and all(ge)


def _wsum(t, m) -> float:
    return _sum(_rho(a.measure, m & a.base) for a in t)


def oracle_beats(program: Program, m1: frozenset, m2: frozenset, mode: str,
                 tables: _Tables | None = None) -> bool:
    """Whether m1 is strictly preferred to m2 under ``mode`` (ic, it, w-ic, w-it, w-is)."""
    tables = tables or _Tables()
    p1, p2 = _prefs(program, m1, tables), _prefs(program, m2, tables)
    common = p1 & p2
    if mode == "ic":
        return _product(common, m1, m2)[0]
    if mode == "it":
        strict, equiv = _product(common, m1, m2)
        return (p1 > p2 and (strict or equiv)) or (p1 == p2 and strict)
    if mode == "w-ic":
        return _wsum(common, m1) < _wsum(common, m2)
    if mode == "w-it":
        s1, s2 = _wsum(common, m1), _wsum(common, m2)
        return (p1 > p2 and (s1 < s2 or s1 == s2)) or (p1 == p2 and s1 < s2)
    if mode == "w-is":
        return _wsum(p1, m1) < _wsum(p2, m2)
    raise ValueError(f"unknown mode {mode!r}")


def oracle_preferred(program: Program, mode: str, cap: int = ORACLE_CAP) -> list[frozenset]:
    """Quadratic all-pairs filter over ``oracle_stable_models``."""
    mode = getattr(mode, "value", mode)
    tables = _Tables()
    models = oracle_stable_models(program, cap)
    return [m for m in models
            if not any(oracle_beats(program, o, m, mode, tables) for o in models)]
