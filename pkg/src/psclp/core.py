"""Atoms, set constraint (SC) atoms, preference atoms, rules and programs.

Atoms are plain strings and sets of atoms are ``frozenset`` objects.  Every
value defined here is immutable once constructed.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Optional, Union

from .errors import MixedInfinityError, OrderDomainError, SemanticError

AtomSet = frozenset

ATOM_PATTERN = re.compile(r"[a-z][A-Za-z0-9_]*(?:\(\d+\))?\Z")


def check_atom(name: str) -> str:
    if not isinstance(name, str) or not ATOM_PATTERN.match(name):
        raise SemanticError(f"invalid atom name {name!r}")
    return name


def atoms(*names: str) -> frozenset:
    """Shorthand used throughout the tests: ``atoms("a", "b")``."""
    return frozenset(names)


def canonical(s: Iterable[str]) -> tuple[str, ...]:
    return tuple(sorted(s))


def model_key(s: Iterable[str]) -> tuple[int, tuple[str, ...]]:
    """Sort key for sets: by cardinality, then lexicographically."""
    t = canonical(s)
    return (len(t), t)


def sort_models(models: Iterable[frozenset]) -> list[frozenset]:
    return sorted(models, key=model_key)


def powerset(base: Iterable[str]) -> Iterator[frozenset]:
    items = canonical(base)
    for r in range(len(items) + 1):
        for combo in itertools.combinations(items, r):
            yield frozenset(combo)


# --------------------------------------------------------------------------
# Families


class Family:
    """A family F of subsets of some base set X.

    ``contains`` and ``closure_contains`` take a set already intersected
    with the base.
    """

    def contains(self, subset: frozenset) -> bool:
        raise NotImplementedError

    def closure_contains(self, subset: frozenset) -> bool:
        raise NotImplementedError

    def enumerate(self, base: frozenset) -> Iterator[frozenset]:
        for s in powerset(base):
            if self.contains(s):
                yield s


@dataclass(frozen=True)
class Extensional(Family):
    sets: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "sets", frozenset(frozenset(s) for s in self.sets))

    def contains(self, subset):
        return subset in self.sets

    def closure_contains(self, subset):
        return any(z <= subset for z in self.sets)

    def enumerate(self, base):
        yield from sort_models(self.sets)


@dataclass(frozen=True)
class Even(Family):
    def contains(self, subset):
        return len(subset) % 2 == 0

    def closure_contains(self, subset):
        # the empty set is always a member
        return True


@dataclass(frozen=True)
class Card(Family):
    lo: int
    hi: int

    def __post_init__(self):
        if self.lo < 0 or self.hi < 0:
            raise SemanticError(f"cardinality bounds must be nonnegative, got {self.lo}..{self.hi}")
        if self.lo > self.hi:
            raise SemanticError(f"empty cardinality range {self.lo}..{self.hi}")

    def contains(self, subset):
        return self.lo <= len(subset) <= self.hi

    def closure_contains(self, subset):
        return len(subset) >= self.lo


@dataclass(frozen=True)
class AnyFamily(Family):
    def contains(self, subset):
        return True

    def closure_contains(self, subset):
        return True


EVEN = Even()
ANY = AnyFamily()


@dataclass(frozen=True)
class SCAtom:
    """A set constraint atom <X, F>."""

    base: frozenset
    family: Family

    def __post_init__(self):
        object.__setattr__(self, "base", frozenset(self.base))
        if isinstance(self.family, Extensional):
            for s in self.family.sets:
                if not s <= self.base:
                    raise SemanticError(
                        f"family member {set_repr(s)} is not a subset of base {set_repr(self.base)}"
                    )

    def project(self, m: frozenset) -> frozenset:
        return m & self.base

    def __contains__(self, subset: frozenset) -> bool:
        """Family membership of a subset of the base."""
        return frozenset(subset) <= self.base and self.family.contains(frozenset(subset))

    def members(self) -> Iterator[frozenset]:
        return self.family.enumerate(self.base)


def set_repr(s: Iterable[str]) -> str:
    return "{" + ",".join(canonical(s)) + "}"


def satisfies_sc(m: frozenset, a: SCAtom) -> bool:
    """M |= <X,F> iff M n X is in F."""
    return a.family.contains(m & a.base)


def satisfies_closure(m: frozenset, a: SCAtom) -> bool:
    """M n X belongs to the upper closure of F, without materializing it."""
    return a.family.closure_contains(m & a.base)


def literal_to_sc(name: str, negated: bool = False) -> SCAtom:
    """``a`` becomes <{a},{{a}}> and ``not a`` becomes <{a},{{}}>."""
    base = frozenset((name,))
    if negated:
        return SCAtom(base, Extensional(frozenset((frozenset(),))))
    return SCAtom(base, Extensional(frozenset((base,))))


# --------------------------------------------------------------------------
# Pre-orders


class Preorder:
    def leq(self, a: frozenset, b: frozenset) -> bool:
        raise NotImplementedError

    def mentioned(self) -> tuple[frozenset, ...]:
        """Every set named explicitly by the order."""
        return ()


@dataclass(frozen=True)
class Chain(Preorder):
    """Each listed set is below every later one."""

    sets: tuple

    def __post_init__(self):
        sets = tuple(frozenset(s) for s in self.sets)
        if len(set(sets)) != len(sets):
            raise SemanticError("chain lists the same set twice")
        object.__setattr__(self, "sets", sets)

    @cached_property
    def _index(self) -> dict:
        return {s: i for i, s in enumerate(self.sets)}

    def leq(self, a, b):
        if a == b:
            return True
        ia, ib = self._index.get(a), self._index.get(b)
        return ia is not None and ib is not None and ia <= ib

    def mentioned(self):
        return self.sets


@dataclass(frozen=True)
class Pairs(Preorder):
    """Listed ``(A, B)`` pairs meaning A <= B.

    With ``closed=True`` (the default) the relation is the reflexive and
    transitive closure of the pairs.  ``closed=False`` keeps the raw relation
    as given, which need not be a pre-order; see ``preorder_violations``.
    """

    pairs: tuple
    closed: bool = True

    def __post_init__(self):
        pairs = tuple(sorted(
            {(frozenset(a), frozenset(b)) for a, b in self.pairs},
            key=lambda p: (model_key(p[0]), model_key(p[1])),
        ))
        object.__setattr__(self, "pairs", pairs)

    @cached_property
    def _relation(self) -> frozenset:
        rel = set(self.pairs)
        if not self.closed:
            return frozenset(rel)
        succ: dict = {}
        for a, b in rel:
            succ.setdefault(a, set()).add(b)
        closure = set()
        for start in succ:
            seen = {start}
            stack = [start]
            while stack:
                x = stack.pop()
                for y in succ.get(x, ()):
                    if y not in seen:
                        seen.add(y)
                        stack.append(y)
            closure.update((start, y) for y in seen)
        return frozenset(closure)

    def leq(self, a, b):
        if self.closed and a == b:
            return True
        return (a, b) in self._relation

    def mentioned(self):
        seen = {}
        for a, b in self.pairs:
            seen.setdefault(a, None)
            seen.setdefault(b, None)
        return tuple(seen)


@dataclass(frozen=True)
class Rank(Preorder):
    """A <= B iff w(A) <= w(B); unlisted sets get ``default``."""

    weights: tuple
    default: Optional[float] = None

    def __post_init__(self):
        items = self.weights.items() if isinstance(self.weights, Mapping) else self.weights
        table: dict = {}
        for s, w in items:
            s = frozenset(s)
            if s in table:
                raise SemanticError(f"set {set_repr(s)} ranked twice")
            table[s] = float(w)
        object.__setattr__(self, "weights", tuple(sorted(table.items(), key=lambda p: model_key(p[0]))))
        if self.default is not None:
            object.__setattr__(self, "default", float(self.default))

    @cached_property
    def table(self) -> dict:
        return dict(self.weights)

    def weight(self, s: frozenset) -> float:
        w = self.table.get(s, self.default)
        if w is None:
            raise OrderDomainError(f"set {set_repr(s)} has no rank and the order has no default")
        return w

    def leq(self, a, b):
        return self.weight(a) <= self.weight(b)


def strictly_less(order: Preorder, a: frozenset, b: frozenset) -> bool:
    return order.leq(a, b) and not order.leq(b, a)


def preorder_violations(order: Preorder, domain: Iterable[frozenset], limit: int = 10) -> list[str]:
    """Reflexivity and transitivity failures of ``order`` on ``domain``."""
    dom = list(domain)
    out: list[str] = []
    leq = {(a, b): order.leq(a, b) for a in dom for b in dom}
    for a in dom:
        if not leq[a, a]:
            out.append(f"not reflexive at {set_repr(a)}")
            if len(out) >= limit:
                return out
    for a in dom:
        for b in dom:
            if not leq[a, b]:
                continue
            for c in dom:
                if leq[b, c] and not leq[a, c]:
                    out.append(f"not transitive: {set_repr(a)} <= {set_repr(b)} <= {set_repr(c)}")
                    if len(out) >= limit:
                        return out
    return out


# --------------------------------------------------------------------------
# Measures


def ext_sum(values: Iterable[float]) -> float:
    """Sum over [-inf, inf]; +inf plus -inf is undefined and rejected."""
    total = 0.0
    pos = neg = False
    for v in values:
        if v == math.inf:
            pos = True
        elif v == -math.inf:
            neg = True
        else:
            total += v
    if pos and neg:
        raise MixedInfinityError("sum mixes +inf and -inf")
    if pos:
        return math.inf
    if neg:
        return -math.inf
    return total


class Measure:
    def value(self, s: frozenset) -> float:
        raise NotImplementedError

    def mentioned(self) -> tuple[frozenset, ...]:
        return ()

    def shifted(self, c: float) -> "Measure":
        """The same measure with ``c`` added to every value."""
        raise NotImplementedError


@dataclass(frozen=True)
class Weights(Measure):
    weights: tuple
    default: Optional[float] = None

    def __post_init__(self):
        items = self.weights.items() if isinstance(self.weights, Mapping) else self.weights
        table: dict = {}
        for s, w in items:
            s = frozenset(s)
            if s in table:
                raise SemanticError(f"set {set_repr(s)} weighted twice")
            table[s] = float(w)
        object.__setattr__(self, "weights", tuple(sorted(table.items(), key=lambda p: model_key(p[0]))))
        if self.default is not None:
            object.__setattr__(self, "default", float(self.default))

    @cached_property
    def table(self) -> dict:
        return dict(self.weights)

    def value(self, s):
        w = self.table.get(s, self.default)
        if w is None:
            raise OrderDomainError(f"set {set_repr(s)} has no weight and the measure has no default")
        return w

    def mentioned(self):
        return tuple(s for s, _ in self.weights)

    def shifted(self, c):
        default = None if self.default is None else self.default + c
        return Weights(tuple((s, w + c) for s, w in self.weights), default)


@dataclass(frozen=True)
class Indicator(Measure):
    """``if_in`` when the pivot atom is in the set, ``if_out`` otherwise."""

    pivot: str
    if_in: float = 0.0
    if_out: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "if_in", float(self.if_in))
        object.__setattr__(self, "if_out", float(self.if_out))

    def value(self, s):
        return self.if_in if self.pivot in s else self.if_out

    def shifted(self, c):
        return Indicator(self.pivot, self.if_in + c, self.if_out + c)


@dataclass(frozen=True)
class Linear(Measure):
    """offset + sum of per-atom weights; atoms without a weight count 0."""

    weights: tuple
    offset: float = 0.0

    def __post_init__(self):
        items = self.weights.items() if isinstance(self.weights, Mapping) else self.weights
        table = {}
        for a, w in items:
            if a in table:
                raise SemanticError(f"atom {a} weighted twice")
            table[a] = float(w)
        object.__setattr__(self, "weights", tuple(sorted(table.items())))
        object.__setattr__(self, "offset", float(self.offset))

    @cached_property
    def table(self) -> dict:
        return dict(self.weights)

    def value(self, s):
        return ext_sum([self.offset] + [self.table.get(a, 0.0) for a in canonical(s)])

    def shifted(self, c):
        return Linear(self.weights, self.offset + c)


# --------------------------------------------------------------------------
# Preference atoms, rules, programs


@dataclass(frozen=True)
class PreorderAtom:
    """A pre-ordered PSC atom <X, F, <=_F>."""

    sc: SCAtom
    order: Preorder

    def __post_init__(self):
        for s in self.order.mentioned():
            if s not in self.sc:
                raise SemanticError(f"order mentions {set_repr(s)}, which is not in the family")
        if isinstance(self.order, Rank):
            for s, _ in self.order.weights:
                if not s <= self.sc.base:
                    raise SemanticError(f"rank set {set_repr(s)} is not a subset of the base")

    @property
    def base(self) -> frozenset:
        return self.sc.base

    @property
    def family(self) -> Family:
        return self.sc.family


@dataclass(frozen=True)
class MeasureAtom:
    """A measure PSC atom <X, F, rho_F>."""

    sc: SCAtom
    measure: Measure

    def __post_init__(self):
        for s in self.measure.mentioned():
            if s not in self.sc:
                raise SemanticError(f"measure weights {set_repr(s)}, which is not in the family")

    @property
    def base(self) -> frozenset:
        return self.sc.base

    @property
    def family(self) -> Family:
        return self.sc.family


Head = Union[SCAtom, PreorderAtom, MeasureAtom]
PSCAtom = Union[PreorderAtom, MeasureAtom]


def reduct(head: Head) -> SCAtom:
    """Drop the order or measure of a PSC atom; identity on SC atoms."""
    if isinstance(head, (PreorderAtom, MeasureAtom)):
        return head.sc
    return head


def is_psc(head: Head) -> bool:
    return isinstance(head, (PreorderAtom, MeasureAtom))


@dataclass(frozen=True)
class Rule:
    head: Head
    body: tuple = ()

    def __post_init__(self):
        body = tuple(self.body)
        for b in body:
            if not isinstance(b, SCAtom):
                raise SemanticError("rule bodies may only contain SC atoms")
        if not isinstance(self.head, (SCAtom, PreorderAtom, MeasureAtom)):
            raise SemanticError(f"bad rule head {self.head!r}")
        object.__setattr__(self, "body", body)

    def atoms(self) -> frozenset:
        out = set(reduct(self.head).base)
        for b in self.body:
            out |= b.base
        return frozenset(out)


PREORDERED = "preordered"
MEASURE = "measure"
PLAIN = "plain"


@dataclass(frozen=True, eq=False)
class Program:
    """A set of rules over a finite universe of atoms.

    Rule order is kept for deterministic iteration but ignored by equality.
    """

    rules: tuple
    universe: frozenset = field(default=frozenset())

    def __post_init__(self):
        rules = tuple(self.rules)
        object.__setattr__(self, "rules", rules)
        mentioned = set()
        for r in rules:
            if not isinstance(r, Rule):
                raise SemanticError(f"not a rule: {r!r}")
            mentioned |= r.atoms()
        universe = frozenset(self.universe) | frozenset(mentioned)
        for a in universe:
            check_atom(a)
        object.__setattr__(self, "universe", universe)
        kinds = {type(r.head) for r in rules if is_psc(r.head)}
        if len(kinds) > 1:
            raise SemanticError("program mixes pre-ordered and measure PSC atoms")

    @classmethod
    def build(cls, rules: Iterable[Rule], extra: Iterable[str] = ()) -> "Program":
        return cls(tuple(rules), frozenset(extra))

    @property
    def kind(self) -> str:
        for r in self.rules:
            if isinstance(r.head, PreorderAtom):
                return PREORDERED
            if isinstance(r.head, MeasureAtom):
                return MEASURE
        return PLAIN

    def reduct(self) -> "Program":
        return Program(tuple(Rule(reduct(r.head), r.body) for r in self.rules), self.universe)

    def psc_rules(self) -> tuple:
        return tuple(r for r in self.rules if is_psc(r.head))

    def is_simple(self) -> bool:
        """PSC heads occur only in bodiless rules."""
        return all(not r.body for r in self.psc_rules())

    def __eq__(self, other):
        if not isinstance(other, Program):
            return NotImplemented
        return self.universe == other.universe and frozenset(self.rules) == frozenset(other.rules)

    def __hash__(self):
        return hash((self.universe, frozenset(self.rules)))

    def __len__(self):
        return len(self.rules)


def is_model(m: frozenset, program: Program) -> bool:
    """M satisfies every rule of red(P)."""
    for r in program.rules:
        if all(satisfies_sc(m, b) for b in r.body) and not satisfies_sc(m, reduct(r.head)):
            return False
    return True


# --------------------------------------------------------------------------
# Normal logic programs


@dataclass(frozen=True)
class NormalRule:
    """``head :- pos..., not neg...``"""

    head: str
    pos: tuple = ()
    neg: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "pos", tuple(self.pos))
        object.__setattr__(self, "neg", tuple(self.neg))

    def atoms(self) -> frozenset:
        return frozenset((self.head, *self.pos, *self.neg))


def normal_atoms(rules: Iterable[NormalRule]) -> frozenset:
    out: set = set()
    for r in rules:
        out |= r.atoms()
    return frozenset(out)


def normal_rule_to_sc(r: NormalRule) -> Rule:
    body = [literal_to_sc(a) for a in r.pos] + [literal_to_sc(b, True) for b in r.neg]
    return Rule(literal_to_sc(r.head), tuple(body))


def normal_to_program(rules: Iterable[NormalRule], extra: Iterable[str] = ()) -> Program:
    rules = list(rules)
    return Program(tuple(normal_rule_to_sc(r) for r in rules), normal_atoms(rules) | frozenset(extra))
