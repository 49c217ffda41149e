"""General preference formulas over basic desires, and their compilation
into a single pre-ordered PSC atom.

A trajectory is represented by the set of basic desires it satisfies.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Union

from .core import ANY, Pairs, PreorderAtom, SCAtom, powerset, preorder_violations
from .errors import WidthExceededError

MAX_DESIRES = 12


@dataclass(frozen=True)
class Atomic:
    """``d1 <| d2 <| ... <| dn``; a single desire is a basic desire formula."""

    desires: tuple

    def __post_init__(self):
        object.__setattr__(self, "desires", tuple(self.desires))
        if not self.desires:
            raise ValueError("atomic preference needs at least one desire")

    @property
    def is_basic(self) -> bool:
        return len(self.desires) == 1


@dataclass(frozen=True)
class PAnd:
    left: "PrefFormula"
    right: "PrefFormula"


@dataclass(frozen=True)
class POr:
    left: "PrefFormula"
    right: "PrefFormula"


@dataclass(frozen=True)
class PNot:
    arg: "PrefFormula"


@dataclass(frozen=True)
class Lex:
    """``psi_1 <| ... <| psi_k`` over general formulas."""

    parts: tuple

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))
        if not self.parts:
            raise ValueError("lexicographic preference needs at least one part")


PrefFormula = Union[Atomic, PAnd, POr, PNot, Lex]


def basic(d: str) -> Atomic:
    return Atomic((d,))


def desires(psi: PrefFormula) -> frozenset:
    if isinstance(psi, Atomic):
        return frozenset(psi.desires)
    if isinstance(psi, (PAnd, POr)):
        return desires(psi.left) | desires(psi.right)
    if isinstance(psi, PNot):
        return desires(psi.arg)
    return frozenset().union(*(desires(p) for p in psi.parts))


def depth(psi: PrefFormula) -> int:
    if isinstance(psi, Atomic):
        return 0
    if isinstance(psi, (PAnd, POr)):
        return 1 + max(depth(psi.left), depth(psi.right))
    if isinstance(psi, PNot):
        return 1 + depth(psi.arg)
    return 1 + max(depth(p) for p in psi.parts)


def _basic_prec(d, alpha, beta):
    return d in alpha and d not in beta


def _basic_indist(d, alpha, beta):
    return (d in alpha) == (d in beta)


def pp_prec(psi: PrefFormula, alpha: frozenset, beta: frozenset) -> bool:
    """alpha is preferred to beta with respect to psi."""
    if isinstance(psi, Atomic):
        for d in psi.desires:
            if _basic_prec(d, alpha, beta):
                return True
            if not _basic_indist(d, alpha, beta):
                return False
        return False
    if isinstance(psi, PAnd):
        return pp_prec(psi.left, alpha, beta) and pp_prec(psi.right, alpha, beta)
    if isinstance(psi, POr):
        p1, p2 = pp_prec(psi.left, alpha, beta), pp_prec(psi.right, alpha, beta)
        i1, i2 = pp_indist(psi.left, alpha, beta), pp_indist(psi.right, alpha, beta)
        return (p1 and i2) or (i1 and p2) or (p1 and p2)
    if isinstance(psi, PNot):
        return pp_prec(psi.arg, beta, alpha)
    if isinstance(psi, Lex):
        for part in psi.parts:
            if pp_prec(part, alpha, beta):
                return True
            if not pp_indist(part, alpha, beta):
                return False
        return False
    raise TypeError(psi)


def pp_indist(psi: PrefFormula, alpha: frozenset, beta: frozenset) -> bool:
    """alpha and beta are indistinguishable with respect to psi."""
    if isinstance(psi, Atomic):
        return all(_basic_indist(d, alpha, beta) for d in psi.desires)
    if isinstance(psi, (PAnd, POr)):
        return pp_indist(psi.left, alpha, beta) and pp_indist(psi.right, alpha, beta)
    if isinstance(psi, PNot):
        return pp_indist(psi.arg, alpha, beta)
    if isinstance(psi, Lex):
        return all(pp_indist(p, alpha, beta) for p in psi.parts)
    raise TypeError(psi)


def compile_theorem3(psi: PrefFormula, max_desires: int = MAX_DESIRES) -> PreorderAtom:
    """The atom <X, P(X), <=> with A <= B iff A is preferred to or
    indistinguishable from B.  The relation is stored as given, unclosed."""
    x = desires(psi)
    if len(x) > max_desires:
        raise WidthExceededError(f"formula mentions {len(x)} desires, limit is {max_desires}")
    subsets = list(powerset(x))
    pairs = [(a, b) for a in subsets for b in subsets if pp_prec(psi, a, b) or pp_indist(psi, a, b)]
    return PreorderAtom(SCAtom(x, ANY), Pairs(tuple(pairs), closed=False))


@dataclass
class CompilationReport:
    """Outcome of checking one formula over all pairs of trajectories."""

    pairs: int = 0
    strict_agree: int = 0
    mutual_leq_agree: int = 0  # indistinguishable vs both <= directions
    neither_strict_agree: int = 0  # indistinguishable vs neither strict
    preorder_violations: int = 0
    strict_transitivity_violations: int = 0
    asymmetry_violations: int = 0
    exclusivity_violations: int = 0

    def merge(self, other: "CompilationReport") -> "CompilationReport":
        for k, v in vars(other).items():
            setattr(self, k, getattr(self, k) + v)
        return self


def check_compilation(psi: PrefFormula, atom: PreorderAtom | None = None) -> CompilationReport:
    # imported lazily: preference pulls in the engine
    from .preference import Verdict, compare_preordered_set

    atom = atom if atom is not None else compile_theorem3(psi)
    subsets = list(powerset(atom.base))
    rep = CompilationReport()
    strict = {}
    for a, b in itertools.product(subsets, subsets):
        rep.pairs += 1
        prec, indist = pp_prec(psi, a, b), pp_indist(psi, a, b)
        verdict = compare_preordered_set([atom], a, b)
        strict[a, b] = verdict is Verdict.FIRST_PREFERRED
        rep.strict_agree += strict[a, b] == prec
        rep.mutual_leq_agree += (verdict is Verdict.EQUIVALENT) == indist
        neither = verdict in (Verdict.EQUIVALENT, Verdict.INDISTINGUISHABLE)
        rep.neither_strict_agree += neither == indist
        rep.asymmetry_violations += prec and pp_prec(psi, b, a)
        rep.exclusivity_violations += prec and indist
    for a, b, c in itertools.product(subsets, repeat=3):
        if strict[a, b] and strict[b, c] and not strict[a, c]:
            rep.strict_transitivity_violations += 1
    rep.preorder_violations = len(preorder_violations(atom.order, subsets, limit=10**9))
    return rep


def trajectories(x: Iterable[str]) -> list[frozenset]:
    return list(powerset(x))
