"""Program generators: the vertex-cover encoding and random instances."""

from __future__ import annotations

import random
from typing import Iterable, Optional

from . import aso as aso_mod
from . import pp as pp_mod
from .core import (
    ANY,
    EVEN,
    Card,
    Chain,
    Extensional,
    Indicator,
    Linear,
    MeasureAtom,
    NormalRule,
    Pairs,
    PreorderAtom,
    Program,
    Rank,
    Rule,
    SCAtom,
    Weights,
    check_atom,
    literal_to_sc,
    powerset,
)
from .errors import PivotNotInGraphError, SemanticError


# --------------------------------------------------------------------------
# vertex cover


def read_edges(text: str) -> list[tuple[str, str]]:
    """One ``u v`` pair per line; ``%`` starts a comment."""
    edges = []
    seen = set()
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("%", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise SemanticError(f"line {lineno}: expected two vertices, got {line!r}")
        u, v = (check_atom(x) for x in parts)
        if u == v:
            raise SemanticError(f"line {lineno}: self-loop on {u}")
        key = frozenset((u, v))
        if key in seen:
            raise SemanticError(f"line {lineno}: duplicate edge {u} {v}")
        seen.add(key)
        edges.append((u, v))
    return edges


def vertex_cover_program(edges: Iterable[tuple[str, str]], k: int, pivot: str,
                         vertices: Iterable[str] = (), exactly_one: bool = False) -> Program:
    """Covers of size < k, preferring those that contain ``pivot``.

    Each edge {u, v} becomes a bodiless rule whose family admits {u}, {v}
    and, unless ``exactly_one`` is set, {u, v}.  A measure head over all
    vertices restricts the size to at most k - 1 and scores 0 when the
    pivot is in the cover, 1 otherwise.
    """
    if k < 1:
        raise SemanticError("K must be at least 1")
    edges = list(edges)
    verts = set(vertices)
    for u, v in edges:
        verts |= {u, v}
    if pivot not in verts:
        raise PivotNotInGraphError(f"pivot {pivot} is not a vertex of the graph")
    rules = []
    for u, v in edges:
        fam = [{u}, {v}] if exactly_one else [{u}, {v}, {u, v}]
        rules.append(Rule(SCAtom({u, v}, Extensional(frozenset(frozenset(s) for s in fam)))))
    head = MeasureAtom(SCAtom(frozenset(verts), Card(0, k - 1)), Indicator(pivot, 0, 1))
    rules.append(Rule(head))
    return Program(tuple(rules), frozenset(verts))


def brute_force_covers(edges: Iterable[tuple[str, str]], k: int, pivot: str,
                       vertices: Iterable[str] = ()) -> list[frozenset]:
    """Covers of size < k minimizing the pivot indicator, by enumeration."""
    edges = list(edges)
    verts = set(vertices)
    for u, v in edges:
        verts |= {u, v}
    covers = [s for s in powerset(verts)
              if len(s) < k and all(u in s or v in s for u, v in edges)]
    if not covers:
        return []
    best = min(0 if pivot in s else 1 for s in covers)
    return [s for s in covers if (0 if pivot in s else 1) == best]


# --------------------------------------------------------------------------
# random instances


def _names(n: int, prefix: str = "x") -> list[str]:
    return [f"{prefix}{i}" for i in range(1, n + 1)]


def random_normal_program(rng: random.Random, max_atoms: int = 8, max_rules: int = 12) -> tuple[list[NormalRule], list[str]]:
    atoms = _names(rng.randint(1, max_atoms), "p")
    rules = []
    for _ in range(rng.randint(0, max_rules)):
        head = rng.choice(atoms)
        pos = rng.sample(atoms, rng.randint(0, min(2, len(atoms))))
        neg = rng.sample(atoms, rng.randint(0, min(2, len(atoms))))
        rules.append(NormalRule(head, tuple(pos), tuple(neg)))
    return rules, atoms


def random_family(rng: random.Random, base: frozenset):
    roll = rng.random()
    if roll < 0.15:
        return ANY
    if roll < 0.3:
        return EVEN
    if roll < 0.5:
        lo = rng.randint(0, len(base))
        return Card(lo, rng.randint(lo, len(base)))
    subsets = list(powerset(base))
    return Extensional(frozenset(rng.sample(subsets, rng.randint(0, min(4, len(subsets))))))


def random_sc_atom(rng: random.Random, atoms: list[str], max_base: int = 3) -> SCAtom:
    if rng.random() < 0.4:
        return literal_to_sc(rng.choice(atoms), rng.random() < 0.4)
    base = frozenset(rng.sample(atoms, rng.randint(1, min(max_base, len(atoms)))))
    return SCAtom(base, random_family(rng, base))


def random_preorder(rng: random.Random, members: list[frozenset]):
    roll = rng.random()
    if roll < 0.35 and members:
        chain = rng.sample(members, rng.randint(1, len(members)))
        return Chain(tuple(chain))
    if roll < 0.7 and members:
        pairs = [(rng.choice(members), rng.choice(members)) for _ in range(rng.randint(0, 2 * len(members)))]
        return Pairs(tuple(pairs))
    return Rank(tuple((m, rng.randint(0, 3)) for m in members), default=rng.randint(0, 3))


def random_measure(rng: random.Random, members: list[frozenset], base: frozenset, allow_inf: bool = True):
    roll = rng.random()
    values = [-2, -1, 0, 1, 2, 3, 5]
    if roll < 0.4:
        sign = rng.choice([1, -1])
        def value():
            if allow_inf and rng.random() < 0.1:
                return sign * float("inf")
            return rng.choice(values)
        return Weights(tuple((m, value()) for m in members), default=rng.choice(values))
    if roll < 0.7 and base:
        return Indicator(rng.choice(sorted(base)), rng.choice(values), rng.choice(values))
    return Linear(tuple((a, rng.choice(values)) for a in sorted(base)), rng.choice(values))


def random_psc_atom(rng: random.Random, base: frozenset, measure: bool, max_members: int = 6):
    fam_members = list(powerset(base))
    members = rng.sample(fam_members, rng.randint(1, min(max_members, len(fam_members))))
    sc = SCAtom(base, Extensional(frozenset(members))) if rng.random() < 0.7 else SCAtom(base, ANY)
    dom = list(sc.members())
    if measure:
        return MeasureAtom(sc, random_measure(rng, dom, base))
    return PreorderAtom(sc, random_preorder(rng, dom))


def random_psc_program(rng: random.Random, max_atoms: int = 6, max_rules: int = 7,
                       kind: Optional[str] = None) -> Program:
    """Small programs mixing choice-like SC heads, normal rules and PSC heads."""
    atoms = _names(rng.randint(1, max_atoms), "a")
    kind = kind or rng.choice(["preordered", "measure"])
    rules = []
    for _ in range(rng.randint(1, max_rules)):
        roll = rng.random()
        body = tuple(random_sc_atom(rng, atoms) for _ in range(rng.randint(0, 2)))
        if roll < 0.3:
            base = frozenset(rng.sample(atoms, rng.randint(1, min(3, len(atoms)))))
            head = random_psc_atom(rng, base, kind == "measure")
            if rng.random() < 0.5:
                body = ()
        elif roll < 0.6:
            head = literal_to_sc(rng.choice(atoms))
        else:
            base = frozenset(rng.sample(atoms, rng.randint(1, min(3, len(atoms)))))
            head = SCAtom(base, random_family(rng, base))
        rules.append(Rule(head, body))
    return Program(tuple(rules), frozenset(atoms))


def random_bool_comb(rng: random.Random, atoms: list[str], depth: int = 2):
    if depth == 0 or rng.random() < 0.45:
        lit = aso_mod.Lit(rng.choice(atoms), rng.random() < 0.15)
        return aso_mod.Naf(lit) if rng.random() < 0.3 else lit
    parts = tuple(random_bool_comb(rng, atoms, depth - 1) for _ in range(rng.randint(2, 3)))
    return aso_mod.And(parts) if rng.random() < 0.5 else aso_mod.Or(parts)


def random_aso_program(rng: random.Random, max_atoms: int = 6, max_gen: int = 8,
                       max_pref: int = 4, max_options: int = 3, max_width: int = 4) -> aso_mod.AsoProgram:
    """Generating programs built around even loops, so that there are
    several answer sets for the preference rules to separate."""
    atoms = _names(rng.randint(1, max_atoms), "g")
    gen = []
    shuffled = rng.sample(atoms, len(atoms))
    for i in range(0, len(shuffled) - 1, 2):
        if len(gen) + 2 > max_gen or rng.random() < 0.1:
            break
        a, b = shuffled[i], shuffled[i + 1]
        gen += [NormalRule(a, (), (b,)), NormalRule(b, (), (a,))]
    for _ in range(rng.randint(0 if gen else 1, min(3, max_gen - len(gen)))):
        head = rng.choice(atoms)
        pos = rng.sample(atoms, rng.randint(0, min(1, len(atoms))))
        neg = rng.sample(atoms, rng.randint(0, min(2, len(atoms))))
        gen.append(NormalRule(head, tuple(pos), tuple(neg)))
    pref = []
    for _ in range(rng.randint(0, max_pref) if rng.random() < 0.2 else rng.randint(1, max_pref)):
        scope = rng.sample(atoms, rng.randint(1, min(max_width, len(atoms))))
        options = [random_bool_comb(rng, scope, depth=1) for _ in range(rng.randint(1, max_options))]
        body_pos, body_neg = [], []
        if rng.random() < 0.3:
            body_pos.append(aso_mod.Lit(rng.choice(scope)))
        if rng.random() < 0.2:
            body_neg.append(aso_mod.Lit(rng.choice(scope)))
        pref.append(aso_mod.AsoPrefRule(tuple(options), tuple(body_pos), tuple(body_neg)))
    return aso_mod.AsoProgram(tuple(gen), tuple(pref))


def random_pp_formula(rng: random.Random, max_desires: int = 4, max_depth: int = 3):
    desires = _names(rng.randint(1, max_desires), "d")

    def build(depth: int):
        if depth == 0 or rng.random() < 0.3:
            return pp_mod.Atomic(tuple(rng.sample(desires, rng.randint(1, min(3, len(desires))))))
        roll = rng.random()
        if roll < 0.25:
            return pp_mod.PAnd(build(depth - 1), build(depth - 1))
        if roll < 0.5:
            return pp_mod.POr(build(depth - 1), build(depth - 1))
        if roll < 0.7:
            return pp_mod.PNot(build(depth - 1))
        return pp_mod.Lex(tuple(build(depth - 1) for _ in range(rng.randint(2, 3))))

    return build(max_depth)
