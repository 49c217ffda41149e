"""Preference relations between models of PSC atoms and of PSC programs."""

from __future__ import annotations

import enum
from typing import Iterable

from .core import (
    MEASURE,
    PREORDERED,
    MeasureAtom,
    PreorderAtom,
    Program,
    ext_sum,
    is_psc,
    satisfies_sc,
    set_repr,
    sort_models,
)
from .engine import DEFAULT_CAP, enumerate_stable
from .errors import ModeMismatchError, NotAModelError, OrderDomainError


class Verdict(enum.Enum):
    FIRST_PREFERRED = "first-preferred"
    SECOND_PREFERRED = "second-preferred"
    EQUIVALENT = "equivalent"
    INDISTINGUISHABLE = "indistinguishable"

    def mirror(self) -> "Verdict":
        if self is Verdict.FIRST_PREFERRED:
            return Verdict.SECOND_PREFERRED
        if self is Verdict.SECOND_PREFERRED:
            return Verdict.FIRST_PREFERRED
        return self


class OrderMode(enum.Enum):
    IC = "ic"
    IT = "it"
    W_IC = "w-ic"
    W_IT = "w-it"
    W_IS = "w-is"

    @property
    def weak(self) -> bool:
        return self.value.startswith("w-")


def default_mode(program: Program) -> OrderMode:
    return OrderMode.W_IS if program.kind == MEASURE else OrderMode.IC


def check_mode(program: Program, mode: OrderMode) -> None:
    kind = program.kind
    if kind == PREORDERED and mode.weak:
        raise ModeMismatchError(f"mode {mode.value} needs a measure program")
    if kind == MEASURE and not mode.weak:
        raise ModeMismatchError(f"mode {mode.value} needs a pre-ordered program")


# --------------------------------------------------------------------------
# sets of pre-ordered atoms


def _projections(t: Iterable[PreorderAtom], m1: frozenset, m2: frozenset):
    for a in t:
        p1, p2 = m1 & a.base, m2 & a.base
        for p in (p1, p2):
            if not a.family.contains(p):
                raise NotAModelError(
                    f"projection {set_repr(p)} does not satisfy the atom over {set_repr(a.base)}"
                )
        yield a.order, p1, p2


def _preorder_relation(t, m1, m2) -> tuple[bool, bool, bool, bool]:
    """(all <=, all >=, some <, some >) over the atoms of ``t``."""
    le12 = le21 = True
    lt12 = lt21 = False
    for order, p1, p2 in _projections(t, m1, m2):
        a, b = order.leq(p1, p2), order.leq(p2, p1)
        le12 &= a
        le21 &= b
        lt12 |= a and not b
        lt21 |= b and not a
    return le12, le21, lt12, lt21


def compare_preordered_set(t: Iterable[PreorderAtom], m1: frozenset, m2: frozenset) -> Verdict:
    """Product-order comparison of two models of the pre-ordered atoms ``t``.

    An empty ``t`` gives INDISTINGUISHABLE.
    """
    t = list(t)
    le12, le21, lt12, lt21 = _preorder_relation(t, frozenset(m1), frozenset(m2))
    if not t:
        return Verdict.INDISTINGUISHABLE
    if le12 and lt12:
        return Verdict.FIRST_PREFERRED
    if le21 and lt21:
        return Verdict.SECOND_PREFERRED
    if le12 and le21:
        return Verdict.EQUIVALENT
    return Verdict.INDISTINGUISHABLE


# --------------------------------------------------------------------------
# sets of measure atoms


def weak_sum(t: Iterable[MeasureAtom], m: frozenset) -> float:
    values = []
    m = frozenset(m)
    for a in t:
        p = m & a.base
        if not a.family.contains(p):
            raise OrderDomainError(f"projection {set_repr(p)} is outside the family of the atom over {set_repr(a.base)}")
        values.append(a.measure.value(p))
    return ext_sum(values)


def _compare_sums(s1: float, s2: float) -> Verdict:
    if s1 < s2:
        return Verdict.FIRST_PREFERRED
    if s2 < s1:
        return Verdict.SECOND_PREFERRED
    return Verdict.EQUIVALENT


def compare_measure_set(t: Iterable[MeasureAtom], m1: frozenset, m2: frozenset) -> Verdict:
    t = list(t)
    return _compare_sums(weak_sum(t, m1), weak_sum(t, m2))


# --------------------------------------------------------------------------
# programs


def pref_set(program: Program, m: frozenset) -> frozenset:
    """PSC heads of the rules whose bodies M satisfies."""
    m = frozenset(m)
    return frozenset(
        r.head for r in program.rules
        if is_psc(r.head) and all(satisfies_sc(m, b) for b in r.body)
    )


def _check_in_domain(prefs, m):
    for a in prefs:
        if not a.family.contains(m & a.base):
            raise OrderDomainError(
                f"model {set_repr(m)} projects outside the family of an active PSC atom"
            )


def compare_models(program: Program, m1: frozenset, m2: frozenset, mode: OrderMode) -> Verdict:
    check_mode(program, mode)
    m1, m2 = frozenset(m1), frozenset(m2)
    p1, p2 = pref_set(program, m1), pref_set(program, m2)
    _check_in_domain(p1, m1)
    _check_in_domain(p2, m2)
    common = p1 & p2

    if mode is OrderMode.W_IS:
        return _compare_sums(weak_sum(p1, m1), weak_sum(p2, m2))

    if not mode.weak:
        if mode is OrderMode.IC:
            return compare_preordered_set(common, m1, m2)
        le12, le21, lt12, lt21 = _preorder_relation(common, m1, m2)
        pref12, pref21 = le12 and lt12, le21 and lt21
        sim = le12 and le21
        if (p1 > p2 and (pref12 or sim)) or (p1 == p2 and pref12):
            return Verdict.FIRST_PREFERRED
        if (p2 > p1 and (pref21 or sim)) or (p1 == p2 and pref21):
            return Verdict.SECOND_PREFERRED
        if p1 == p2 and compare_preordered_set(common, m1, m2) is Verdict.EQUIVALENT:
            return Verdict.EQUIVALENT
        return Verdict.INDISTINGUISHABLE

    s1, s2 = weak_sum(common, m1), weak_sum(common, m2)
    if mode is OrderMode.W_IC:
        return _compare_sums(s1, s2)
    # W_IT
    if (p1 > p2 and s1 <= s2) or (p1 == p2 and s1 < s2):
        return Verdict.FIRST_PREFERRED
    if (p2 > p1 and s2 <= s1) or (p1 == p2 and s2 < s1):
        return Verdict.SECOND_PREFERRED
    if p1 == p2 and s1 == s2:
        return Verdict.EQUIVALENT
    return Verdict.INDISTINGUISHABLE


def verdict_matrix(program: Program, models: list, mode: OrderMode) -> list[list[Verdict]]:
    return [[compare_models(program, a, b, mode) for b in models] for a in models]


def filter_preferred(program: Program, models: list, mode: OrderMode) -> list[frozenset]:
    """Models not strictly beaten by any other model under ``mode``."""
    return sort_models(
        m for m in models
        if not any(compare_models(program, other, m, mode) is Verdict.FIRST_PREFERRED
                   for other in models if other != m)
    )


def preferred_models(program: Program, mode: OrderMode | None = None,
                     cap: int = DEFAULT_CAP, force: bool = False) -> list[frozenset]:
    mode = default_mode(program) if mode is None else mode
    check_mode(program, mode)
    return filter_preferred(program, enumerate_stable(program, cap, force), mode)

