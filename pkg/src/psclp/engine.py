"""SC stable models: Horn SC programs, the NSS transform and enumeration.

``is_stable`` follows the definitions literally on frozensets.
``enumerate_stable`` runs the same check over bitmasks, restricted to
subsets of the head support of the program.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Iterable

from .core import (
    Card,
    AnyFamily,
    Even,
    Extensional,
    Family,
    Program,
    SCAtom,
    canonical,
    is_model,
    reduct,
    satisfies_closure,
    satisfies_sc,
    sort_models,
)
from .errors import CapExceededError

log = logging.getLogger(__name__)

DEFAULT_CAP = 22


@dataclass(frozen=True)
class HornRule:
    head: str
    body: tuple = ()  # SC atoms, read through their upper closure


@dataclass(frozen=True)
class HornProgram:
    rules: tuple = ()

    def heads(self) -> frozenset:
        return frozenset(r.head for r in self.rules)


def tp_step(h: HornProgram, m: frozenset) -> frozenset:
    """One-step provability: heads of rules whose closed bodies M satisfies."""
    return frozenset(r.head for r in h.rules if all(satisfies_closure(m, b) for b in r.body))


def least_model(h: HornProgram) -> frozenset:
    m: frozenset = frozenset()
    limit = len(h.heads()) + 1
    for _ in range(limit + 1):
        nxt = tp_step(h, m)
        if nxt == m:
            return m
        m = nxt
    raise RuntimeError("T_P iteration did not reach a fixpoint")


def nss_transform(program: Program, m: frozenset) -> HornProgram:
    out = []
    for r in program.rules:
        if not all(satisfies_sc(m, b) for b in r.body):
            continue
        for a in canonical(reduct(r.head).base & m):
            out.append(HornRule(a, r.body))
    return HornProgram(tuple(out))


def is_stable(program: Program, m: frozenset) -> bool:
    m = frozenset(m)
    return is_model(m, program) and least_model(nss_transform(program, m)) == m


def head_support(program: Program) -> frozenset:
    out: set = set()
    for r in program.rules:
        out |= reduct(r.head).base
    return frozenset(out)


# --------------------------------------------------------------------------
# bitmask evaluation


def _family_checks(family: Family, base_mask: int) -> tuple[Callable[[int], bool], Callable[[int], bool]]:
    """Membership and closure tests on ``mask & base_mask``."""
    if isinstance(family, AnyFamily):
        return (lambda y: True), (lambda y: True)
    if isinstance(family, Even):
        return (lambda y: (y & base_mask).bit_count() % 2 == 0), (lambda y: True)
    if isinstance(family, Card):
        lo, hi = family.lo, family.hi
        return (
            lambda y: lo <= (y & base_mask).bit_count() <= hi,
            lambda y: (y & base_mask).bit_count() >= lo,
        )
    raise TypeError(family)


class _Compiled:
    def __init__(self, program: Program):
        support = head_support(program)
        order = list(canonical(support)) + list(canonical(program.universe - support))
        self.atoms = order
        self.n_support = len(support)
        self.index = {a: i for i, a in enumerate(order)}
        self.rules = []
        for r in program.rules:
            head = reduct(r.head)
            hmask = self.mask(head.base)
            self.rules.append((hmask, self._atom(head), tuple(self._atom(b) for b in r.body)))

    def mask(self, s: Iterable[str]) -> int:
        out = 0
        for a in s:
            out |= 1 << self.index[a]
        return out

    def unmask(self, m: int) -> frozenset:
        return frozenset(a for i, a in enumerate(self.atoms) if m >> i & 1)

    def _atom(self, a: SCAtom):
        bm = self.mask(a.base)
        if isinstance(a.family, Extensional):
            members = frozenset(self.mask(s) for s in a.family.sets)
            member_list = tuple(members)
            return (
                lambda y: (y & bm) in members,
                lambda y: any(z & ~(y & bm) == 0 for z in member_list),
            )
        return _family_checks(a.family, bm)

    def stable(self, m: int) -> bool:
        active = []
        for hmask, (head_sc, _), body in self.rules:
            if all(sc(m) for sc, _ in body):
                if not head_sc(m):
                    return False
                emitted = hmask & m
                if emitted:
                    active.append((emitted, body))
        covered = 0
        for emitted, _ in active:
            covered |= emitted
        if covered != m:
            return False
        n = 0
        changed = True
        while changed:
            changed = False
            for emitted, body in active:
                if emitted & ~n and all(cl(n) for _, cl in body):
                    n |= emitted
                    changed = True
        return n == m


def enumerate_stable(program: Program, cap: int = DEFAULT_CAP, force: bool = False) -> list[frozenset]:
    """All SC stable models, by cardinality then lexicographically."""
    comp = _Compiled(program)
    if comp.n_support > cap and not force:
        raise CapExceededError(comp.n_support, cap, "head support")
    log.debug("enumerating 2^%d candidates", comp.n_support)
    found = [comp.unmask(m) for m in range(1 << comp.n_support) if comp.stable(m)]
    return sort_models(found)
