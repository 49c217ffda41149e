"""Answer set optimization programs and their translation to PSC programs.

An ASO program pairs a normal generating program with preference rules
``C_1 > ... > C_k :- body``.  ``translate_aso`` builds the simple
pre-ordered PSC program whose preferred stable models correspond to the
optimal models of the ASO program.
"""

from __future__ import annotations

import enum
import functools
from dataclasses import dataclass
from typing import Iterable, Union

from .core import (
    ANY,
    NormalRule,
    PreorderAtom,
    Program,
    Rank,
    Rule,
    SCAtom,
    literal_to_sc,
    normal_rule_to_sc,
    powerset,
    sort_models,
)
from .errors import CapExceededError, StrongNegationInGenError, WidthExceededError
from .oracle import gl_stable_models

MAX_WIDTH = 16


# --------------------------------------------------------------------------
# Boolean combinations


@dataclass(frozen=True)
class Lit:
    atom: str
    strong: bool = False  # strong negation: -atom

    def __str__(self) -> str:
        return f"-{self.atom}" if self.strong else self.atom


@dataclass(frozen=True)
class Naf:
    """Default negation; only ever applied to a literal."""

    lit: Lit

    def __post_init__(self):
        if not isinstance(self.lit, Lit):
            raise TypeError("default negation applies to literals only")


@dataclass(frozen=True)
class And:
    parts: tuple

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))


@dataclass(frozen=True)
class Or:
    parts: tuple

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))


BoolComb = Union[Lit, Naf, And, Or]


def bc_atoms(c: BoolComb) -> frozenset:
    if isinstance(c, Lit):
        return frozenset((c.atom,))
    if isinstance(c, Naf):
        return frozenset((c.lit.atom,))
    out: set = set()
    for p in c.parts:
        out |= bc_atoms(p)
    return frozenset(out)


def satisfies_bc(s: Iterable[str], c: BoolComb) -> bool:
    """Satisfaction of a Boolean combination by a set of literal strings."""
    s = s if isinstance(s, (set, frozenset)) else frozenset(s)
    if isinstance(c, Lit):
        return str(c) in s
    if isinstance(c, Naf):
        return str(c.lit) not in s
    if isinstance(c, And):
        return all(satisfies_bc(s, p) for p in c.parts)
    if isinstance(c, Or):
        return any(satisfies_bc(s, p) for p in c.parts)
    raise TypeError(c)


# --------------------------------------------------------------------------
# preference rules and degrees


@dataclass(frozen=True)
class AsoPrefRule:
    options: tuple
    body_pos: tuple = ()
    body_neg: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "options", tuple(self.options))
        object.__setattr__(self, "body_pos", tuple(self.body_pos))
        object.__setattr__(self, "body_neg", tuple(self.body_neg))
        if not self.options:
            raise ValueError("a preference rule needs at least one option")

    def atoms(self) -> frozenset:
        out = set()
        for c in self.options:
            out |= bc_atoms(c)
        out |= {l.atom for l in self.body_pos}
        out |= {l.atom for l in self.body_neg}
        return frozenset(out)

    def body_holds(self, s) -> bool:
        return all(str(l) in s for l in self.body_pos) and all(str(l) not in s for l in self.body_neg)


@dataclass(frozen=True)
class AsoProgram:
    gen: tuple
    pref: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "gen", tuple(self.gen))
        object.__setattr__(self, "pref", tuple(self.pref))
        for r in self.gen:
            for a in (r.head, *r.pos, *r.neg):
                if a.startswith("-"):
                    raise StrongNegationInGenError(f"strong negation {a} in generating program")

    def atoms(self) -> frozenset:
        out: set = set()
        for r in self.gen:
            out |= r.atoms()
        for r in self.pref:
            out |= r.atoms()
        return frozenset(out)

    def gen_atoms(self) -> frozenset:
        out: set = set()
        for r in self.gen:
            out |= r.atoms()
        return frozenset(out)


IRRELEVANT = "I"
Degree = Union[int, str]


def satisfaction_degree(s, r: AsoPrefRule) -> Degree:
    s = frozenset(s)
    if not r.body_holds(s):
        return IRRELEVANT
    for i, c in enumerate(r.options, start=1):
        if satisfies_bc(s, c):
            return i
    return IRRELEVANT


def degree_gt(a: Degree, b: Degree) -> bool:
    if a == IRRELEVANT:
        return b != IRRELEVANT and b >= 2
    if b == IRRELEVANT:
        return False
    # lower index is the better degree
    return a < b


def degree_geq(a: Degree, b: Degree) -> bool:
    return a == b or {a, b} == {IRRELEVANT, 1} or degree_gt(a, b)


class VectorOrder(enum.Enum):
    GT = "gt"
    LT = "lt"
    EQUAL = "equal"
    GEQ = "geq"  # both >= hold but the vectors differ (I against 1)
    INCOMPARABLE = "incomparable"


def degree_vector(s, pref: Iterable[AsoPrefRule]) -> tuple:
    return tuple(satisfaction_degree(s, r) for r in pref)


def compare_vectors(v1: tuple, v2: tuple) -> VectorOrder:
    if v1 == v2:
        return VectorOrder.EQUAL
    geq12 = all(degree_geq(a, b) for a, b in zip(v1, v2))
    geq21 = all(degree_geq(b, a) for a, b in zip(v1, v2))
    if geq12 and any(degree_gt(a, b) for a, b in zip(v1, v2)):
        return VectorOrder.GT
    if geq21 and any(degree_gt(b, a) for a, b in zip(v1, v2)):
        return VectorOrder.LT
    if geq12 and geq21:
        return VectorOrder.GEQ
    return VectorOrder.INCOMPARABLE


def vector_compare(s1, s2, pref: Iterable[AsoPrefRule]) -> VectorOrder:
    pref = tuple(pref)
    return compare_vectors(degree_vector(s1, pref), degree_vector(s2, pref))


def answer_sets(program: AsoProgram, cap: int = 16) -> list[frozenset]:
    atoms = program.gen_atoms()
    if len(atoms) > cap:
        raise CapExceededError(len(atoms), cap, "generating program")
    return gl_stable_models(program.gen, atoms, cap=max(cap, len(atoms)))


def aso_optimal_models(program: AsoProgram, cap: int = 16) -> list[frozenset]:
    sets = answer_sets(program, cap)
    vectors = {s: degree_vector(s, program.pref) for s in sets}
    return sort_models(
        s for s in sets
        if not any(compare_vectors(vectors[o], vectors[s]) is VectorOrder.GT for o in sets)
    )


# --------------------------------------------------------------------------
# translation


def _fresh_prefix(atoms: frozenset, prefix: str) -> str:
    while any(prefix + a in atoms for a in atoms):
        prefix += "_"
    return prefix


def _fresh_atom(atoms: frozenset, name: str) -> str:
    while name in atoms:
        name += "_"
    return name


@dataclass(frozen=True)
class AsoTranslation:
    program: Program
    atoms: frozenset  # At
    bar: dict  # a -> barred a
    inconsistent: str  # the constraint atom D

    def barred(self, s: Iterable[str]) -> frozenset:
        return frozenset(self.bar[a] for a in s)

    def project(self, m: frozenset) -> frozenset:
        return project_unbarred(m, self.atoms)


def project_unbarred(m: frozenset, at: frozenset) -> frozenset:
    return frozenset(m) & frozenset(at)


def _rank_classes(degrees: Iterable[Degree]) -> dict:
    """Map each degree to a rank; rank i <= rank j iff the degree is >=."""
    def cmp(a, b):
        if degree_gt(a, b):
            return -1
        if degree_gt(b, a):
            return 1
        return 0

    ordered = sorted(set(degrees), key=functools.cmp_to_key(cmp))
    ranks: dict = {}
    level = 0
    for i, d in enumerate(ordered):
        if i and not (degree_geq(d, ordered[i - 1]) and degree_geq(ordered[i - 1], d)):
            level += 1
        ranks[d] = level
    return ranks


def rule_order(rule: AsoPrefRule, bar: dict, max_width: int = MAX_WIDTH) -> PreorderAtom:
    """The atom <bar(At(W)), P(bar(At(W))), <=_W> for one preference rule."""
    width = rule.atoms()
    if len(width) > max_width:
        raise WidthExceededError(f"preference rule mentions {len(width)} atoms, limit is {max_width}")
    degrees = {a: satisfaction_degree(a, rule) for a in powerset(width)}
    ranks = _rank_classes(degrees.values())
    weights = tuple((frozenset(bar[x] for x in a), ranks[d]) for a, d in degrees.items())
    base = frozenset(bar[x] for x in width)
    return PreorderAtom(SCAtom(base, ANY), Rank(weights))


def translate(program: AsoProgram, max_width: int = MAX_WIDTH) -> AsoTranslation:
    at = program.atoms()
    prefix = _fresh_prefix(at, "bar_")
    bar = {a: prefix + a for a in sorted(at)}
    taken = at | frozenset(bar.values())
    d = _fresh_atom(taken, "inconsistent")

    rules = [normal_rule_to_sc(r) for r in program.gen]
    rules += [Rule(rule_order(w, bar, max_width)) for w in program.pref]
    for a in sorted(at):
        rules.append(Rule(literal_to_sc(bar[a]), (literal_to_sc(a),)))
        rules.append(Rule(literal_to_sc(d), (literal_to_sc(bar[a]), literal_to_sc(a, True), literal_to_sc(d, True))))
    universe = taken | {d}
    return AsoTranslation(Program(tuple(rules), universe), at, bar, d)


def translate_aso(program: AsoProgram, max_width: int = MAX_WIDTH) -> Program:
    return translate(program, max_width).program


def order_by_conditions(rule: AsoPrefRule, a: frozenset, b: frozenset) -> bool:
    """bar(A) <=_W bar(B) by the four listed conditions, without degrees."""
    if not rule.body_holds(a):
        return True
    if not any(satisfies_bc(a, c) for c in rule.options):
        return True
    if satisfies_bc(a, rule.options[0]):
        return True
    if not rule.body_holds(b):
        return False
    z = next((i for i, c in enumerate(rule.options) if satisfies_bc(a, c)), None)
    j = next((i for i, c in enumerate(rule.options) if satisfies_bc(b, c)), None)
    return z is not None and j is not None and z <= j
