"""Acceptance criteria, one test each; every test prints a PASS/FAIL line."""

import random
import time

import pytest

from psclp.aso import aso_optimal_models, translate
from psclp.core import ANY, MeasureAtom, PreorderAtom, SCAtom, normal_to_program, powerset, satisfies_closure
from psclp.engine import enumerate_stable
from psclp.errors import MixedInfinityError
from psclp.generate import (
    brute_force_covers,
    random_aso_program,
    random_family,
    random_measure,
    random_normal_program,
    random_pp_formula,
    random_preorder,
    random_psc_program,
    read_edges,
    vertex_cover_program,
)
from psclp.oracle import gl_stable_models
from psclp.pp import CompilationReport, check_compilation
from psclp.preference import (
    OrderMode,
    Verdict,
    compare_measure_set,
    compare_models,
    compare_preordered_set,
    default_mode,
    preferred_models,
)
from psclp.syntax import parse_aso, parse_pp, parse_psc, serialize

S = lambda *xs: frozenset(xs)  # noqa: E731


@pytest.fixture
def report(capsys):
    def emit(n: int, ok: bool, detail: str):
        with capsys.disabled():
            print(f"\nACCEPTANCE {n} {'PASS' if ok else 'FAIL'}: {detail}")

    return emit


def test_1_normal_programs_match_gl(report):
    rng = random.Random(1)
    start = time.perf_counter()
    mismatches = 0
    for _ in range(200):
        rules, atoms = random_normal_program(rng, max_atoms=8, max_rules=12)
        if enumerate_stable(normal_to_program(rules, atoms)) != gl_stable_models(rules, atoms):
            mismatches += 1
    elapsed = time.perf_counter() - start
    ok = mismatches == 0 and elapsed < 60
    report(1, ok, f"200 normal programs, {mismatches} mismatches, {elapsed:.2f}s (< 60s)")
    assert ok


def test_2_job_offers(report, fixture_text):
    p = parse_psc(fixture_text("job_offers.psc"))
    models = enumerate_stable(p)
    best = preferred_models(p, OrderMode.IC)
    ok = len(models) == 2 and best == [S("j1", "r", "cal")]
    report(2, ok, f"{len(models)} stable models, IC preferred {[sorted(m) for m in best]}")
    assert ok


def test_3_concerts(report, fixture_text):
    p = parse_psc(fixture_text("concerts.psc"))
    m1 = S("j2", "t", "ncal", "cm", "pt")
    m2 = S("j1", "r", "cal")
    ic = compare_models(p, m2, m1, OrderMode.IC)
    it = compare_models(p, m1, m2, OrderMode.IT)
    ok = ic is Verdict.FIRST_PREFERRED and it is Verdict.INDISTINGUISHABLE
    report(3, ok, f"M2 vs M1 under ic: {ic.value}; M1 vs M2 under it: {it.value}")
    assert ok


def test_4_commute(report, fixture_text):
    p = parse_psc(fixture_text("commute.psc"))
    tau = {"r": 0, "t": 500, "c": 1000}
    dist = {"d(0)": 0, "d(120)": 120, "d(700)": 700}
    models = enumerate_stable(p)
    hand = {m: sum(tau[a] for a in m if a in tau) + sum(dist[a] for a in m if a in dist) for m in models}
    expected = [m for m in models if hand[m] == min(hand.values())]
    got = preferred_models(p, OrderMode.W_IS)
    ok = got == expected and len(models) == 3
    report(4, ok, f"sums {sorted(hand.values())}, W_IS preferred {[sorted(m) for m in got]}")
    assert ok


def test_5_aso_translation(report):
    rng = random.Random(5)
    start = time.perf_counter()
    bad_shape = bad_bijection = bad_optimal = discriminating = 0
    for _ in range(100):
        prog = random_aso_program(rng, max_atoms=6, max_gen=8, max_pref=4, max_options=3, max_width=4)
        tr = translate(prog)
        models = enumerate_stable(tr.program)
        bad_shape += sum(m != tr.project(m) | tr.barred(tr.project(m)) for m in models)
        answer = gl_stable_models(prog.gen, prog.atoms())
        if sorted(map(sorted, (tr.project(m) for m in models))) != sorted(map(sorted, answer)):
            bad_bijection += 1
        optimal = aso_optimal_models(prog)
        discriminating += len(optimal) < len(answer)
        ic = {tr.project(m) for m in preferred_models(tr.program, OrderMode.IC)}
        it = {tr.project(m) for m in preferred_models(tr.program, OrderMode.IT)}
        bad_optimal += not (ic == it == set(optimal))
    elapsed = time.perf_counter() - start
    ok = not (bad_shape or bad_bijection or bad_optimal) and elapsed < 120
    report(5, ok, f"100 ASO instances ({discriminating} with a proper optimal subset): "
                  f"shape {bad_shape}, bijection {bad_bijection}, optimal {bad_optimal} failures, "
                  f"{elapsed:.2f}s (< 120s)")
    assert ok


def test_6_pp_compilation(report):
    rng = random.Random(6)
    total = CompilationReport()
    formulas_with_preorder_violations = 0
    for _ in range(100):
        rep = check_compilation(random_pp_formula(rng, max_desires=4, max_depth=3))
        formulas_with_preorder_violations += rep.preorder_violations > 0
        total.merge(rep)
    pct = lambda k: 100.0 * k / total.pairs  # noqa: E731
    ok = total.strict_agree == total.pairs and total.strict_transitivity_violations == 0
    report(6, ok, f"{total.pairs} pairs, strict agreement {pct(total.strict_agree):.2f}%; "
                  f"mutual-<= reading {pct(total.mutual_leq_agree):.2f}%, "
                  f"neither-strict reading {pct(total.neither_strict_agree):.2f}%; "
                  f"<= preorder violations {total.preorder_violations} "
                  f"in {formulas_with_preorder_violations} formulas; "
                  f"strict transitivity violations {total.strict_transitivity_violations}")
    assert ok


def test_7_vertex_cover(report, fixture_text):
    edges = read_edges(fixture_text("path4.edges"))
    got = preferred_models(vertex_cover_program(edges, 3, "b"), OrderMode.W_IS)
    expected = brute_force_covers(edges, 3, "b")
    ok = set(got) == set(expected) and len(got) == len(expected)
    report(7, ok, f"W_IS preferred {[sorted(m) for m in got]}, brute force {[sorted(m) for m in expected]}")
    assert ok


# -------------------------------------------------------------------------
# criterion 8: invariant suites

CASES = 1000


def _closure_monotone(rng):
    base = frozenset(rng.sample("abcdef", rng.randint(1, 4)))
    a = SCAtom(base, random_family(rng, base))
    m = frozenset(x for x in "abcdefg" if rng.random() < 0.5)
    bigger = m | frozenset(x for x in "abcdefg" if rng.random() < 0.5)
    return not satisfies_closure(m, a) or satisfies_closure(bigger, a)


def _atoms(rng):
    out = []
    for _ in range(rng.randint(1, 3)):
        base = frozenset(rng.sample("abcdef", rng.randint(1, 3)))
        out.append(PreorderAtom(SCAtom(base, ANY), random_preorder(rng, list(powerset(base)))))
    return out


def _models(rng, k=3):
    return [frozenset(x for x in "abcdef" if rng.random() < 0.5) for _ in range(k)]


def _strict_order(rng):
    t = _atoms(rng)
    m1, m2, m3 = _models(rng)
    first = Verdict.FIRST_PREFERRED
    if compare_preordered_set(t, m1, m1) is first:
        return False
    if compare_preordered_set(t, m1, m2) is first and compare_preordered_set(t, m2, m3) is first:
        return compare_preordered_set(t, m1, m3) is first
    return True


def _equivalence(rng):
    t = _atoms(rng)
    m1, m2, m3 = _models(rng)
    eq = lambda x, y: compare_preordered_set(t, x, y) is Verdict.EQUIVALENT  # noqa: E731
    if not eq(m1, m1):
        return False
    if eq(m1, m2) != eq(m2, m1):
        return False
    return not (eq(m1, m2) and eq(m2, m3)) or eq(m1, m3)


def _shift_invariance(rng):
    atoms = []
    for _ in range(rng.randint(1, 3)):
        base = frozenset(rng.sample("abcde", rng.randint(1, 3)))
        atoms.append(MeasureAtom(SCAtom(base, ANY), random_measure(rng, list(powerset(base)), base, allow_inf=False)))
    i = rng.randrange(len(atoms))
    c = rng.randint(-100, 100)
    shifted = list(atoms)
    shifted[i] = MeasureAtom(atoms[i].sc, atoms[i].measure.shifted(c))
    m1, m2 = _models(rng, 2)
    return compare_measure_set(atoms, m1, m2) is compare_measure_set(shifted, m1, m2)


def _mirror(rng):
    p = random_psc_program(rng, max_atoms=5, max_rules=6)
    mode = default_mode(p)
    try:
        models = enumerate_stable(p)
        return all(
            compare_models(p, b, a, mode) is compare_models(p, a, b, mode).mirror()
            for a in models for b in models
        )
    except MixedInfinityError:
        return True


def _round_trip(rng):
    p = random_psc_program(rng)
    text = serialize(p)
    if parse_psc(text) != p or serialize(parse_psc(text)) != text:
        return False
    prog = random_aso_program(rng)
    psi = random_pp_formula(rng)
    return parse_aso(serialize(prog)) == prog and parse_pp(serialize(psi)) == psi


SUITES = {
    "closure monotonicity": _closure_monotone,
    "strict transitivity and irreflexivity": _strict_order,
    "equivalence relation": _equivalence,
    "measure shift invariance": _shift_invariance,
    "mirror symmetry": _mirror,
    "round-trip parsing": _round_trip,
}


@pytest.mark.parametrize("name", list(SUITES))
def test_8_invariants(report, name):
    rng = random.Random(f"invariant-{name}")
    failures = sum(not SUITES[name](rng) for _ in range(CASES))
    report(8, failures == 0, f"{name}: {CASES} cases, {failures} failures")
    assert failures == 0
