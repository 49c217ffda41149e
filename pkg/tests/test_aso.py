import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from psclp.aso import (
    IRRELEVANT as I,
    And,
    AsoPrefRule,
    AsoProgram,
    Lit,
    Naf,
    Or,
    VectorOrder,
    aso_optimal_models,
    answer_sets,
    compare_vectors,
    degree_geq,
    degree_gt,
    order_by_conditions,
    project_unbarred,
    rule_order,
    satisfaction_degree,
    satisfies_bc,
    translate,
    translate_aso,
    vector_compare,
)
from psclp.core import NormalRule, PreorderAtom, powerset, preorder_violations
from psclp.engine import enumerate_stable
from psclp.errors import StrongNegationInGenError, WidthExceededError
from psclp.generate import random_aso_program
from psclp.oracle import gl_stable_models
from psclp.preference import OrderMode, preferred_models

S = lambda *xs: frozenset(xs)  # noqa: E731
a, b, c, d = Lit("a"), Lit("b"), Lit("c"), Lit("d")
EVEN_LOOP = (NormalRule("a", (), ("b",)), NormalRule("b", (), ("a",)))


class TestSatisfiesBc:
    def test_naf(self):
        assert satisfies_bc(S("a"), Naf(b))

    def test_contradiction(self):
        assert not satisfies_bc(S("a"), And((a, Naf(a))))

    def test_strong_negation_disjunction(self):
        assert satisfies_bc(S("a", "b"), Or((Lit("a", True), b)))

    def test_naf_only_on_literals(self):
        with pytest.raises(TypeError):
            Naf(And((a, b)))


class TestDegree:
    rule = AsoPrefRule((a, b), (c,))

    def test_body_unsatisfied(self):
        assert satisfaction_degree(S("a"), self.rule) == I

    def test_second_option(self):
        assert satisfaction_degree(S("b", "c"), self.rule) == 2

    def test_no_option(self):
        assert satisfaction_degree(S("c"), self.rule) == I

    def test_irrelevant_and_one(self):
        assert degree_geq(I, 1) and degree_geq(1, I)

    def test_irrelevant_beats_later(self):
        assert degree_geq(I, 3) and not degree_geq(3, I)
        assert degree_gt(I, 3)

    def test_lower_index_better(self):
        assert degree_geq(1, 2) and not degree_geq(2, 1)

    def test_reflexive(self):
        for x in (I, 1, 2, 5):
            assert degree_geq(x, x) and not degree_gt(x, x)


class TestVectors:
    def test_equal(self):
        assert compare_vectors((1, 2), (1, 2)) is VectorOrder.EQUAL

    def test_gt(self):
        assert compare_vectors((1, 1), (1, 2)) is VectorOrder.GT
        assert compare_vectors((1, 2), (1, 1)) is VectorOrder.LT

    def test_incomparable(self):
        assert compare_vectors((1, 2), (2, 1)) is VectorOrder.INCOMPARABLE

    def test_geq_without_gt(self):
        assert compare_vectors((I, 1), (1, I)) is VectorOrder.GEQ

    def test_vector_compare(self):
        pref = (AsoPrefRule((a, b)),)
        assert vector_compare(S("a"), S("b"), pref) is VectorOrder.GT


class TestOptimal:
    def test_empty_pref(self):
        assert aso_optimal_models(AsoProgram(EVEN_LOOP)) == [S("a"), S("b")]

    def test_one_rule(self):
        assert aso_optimal_models(AsoProgram(EVEN_LOOP, (AsoPrefRule((a, b)),))) == [S("a")]

    def test_no_answer_set(self):
        assert aso_optimal_models(AsoProgram((NormalRule("a", (), ("a",)),))) == []

    def test_strong_negation_in_gen(self):
        with pytest.raises(StrongNegationInGenError):
            AsoProgram((NormalRule("-a"),))


class TestTranslation:
    def test_rule_order(self):
        tr = translate(AsoProgram(EVEN_LOOP, (AsoPrefRule((a, b)),)))
        atom = tr.program.psc_rules()[0].head
        ba, bb = S(tr.bar["a"]), S(tr.bar["b"])
        assert atom.order.leq(ba, bb) and not atom.order.leq(bb, ba)

    def test_even_loop_models(self):
        tr = translate(AsoProgram(EVEN_LOOP, (AsoPrefRule((a, b)),)))
        assert enumerate_stable(tr.program) == [S("a", "bar_a"), S("b", "bar_b")]
        assert tr.program.is_simple()

    def test_fresh_names(self):
        gen = (NormalRule("bar_a"), NormalRule("inconsistent"), NormalRule("a"))
        tr = translate(AsoProgram(gen))
        assert tr.inconsistent not in tr.atoms
        assert not set(tr.bar.values()) & tr.atoms

    def test_width(self):
        wide = AsoPrefRule(tuple(Lit(f"x{i}") for i in range(5)))
        with pytest.raises(WidthExceededError):
            translate_aso(AsoProgram((), (wide,)), max_width=4)


class TestProject:
    def test_cases(self):
        at = S("a", "b")
        assert project_unbarred(S("a", "bar_a"), at) == S("a")
        assert project_unbarred(S("inconsistent"), at) == S()
        assert project_unbarred(S("b", "bar_b", "bar_a"), at) == S("b")


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_translation_models_are_barred_answer_sets(seed):
    prog = random_aso_program(random.Random(seed))
    tr = translate(prog)
    models = enumerate_stable(tr.program)
    for m in models:
        base = tr.project(m)
        assert m == base | tr.barred(base)
    gl = gl_stable_models(prog.gen, prog.atoms())
    assert sorted(map(sorted, (tr.project(m) for m in models))) == sorted(map(sorted, gl))


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_rule_orders_are_preorders_matching_conditions(seed):
    prog = random_aso_program(random.Random(seed))
    tr = translate(prog)
    for rule in prog.pref:
        atom = rule_order(rule, tr.bar)
        assert isinstance(atom, PreorderAtom)
        subsets = list(powerset(rule.atoms()))
        barred = [tr.barred(s) for s in subsets]
        assert preorder_violations(atom.order, barred) == []
        for x in subsets:
            for y in subsets:
                assert atom.order.leq(tr.barred(x), tr.barred(y)) == order_by_conditions(rule, x, y)


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_optimal_equals_projected_preferred(seed):
    prog = random_aso_program(random.Random(seed))
    tr = translate(prog)
    optimal = aso_optimal_models(prog)
    for mode in (OrderMode.IC, OrderMode.IT):
        projected = {tr.project(m) for m in preferred_models(tr.program, mode)}
        assert projected == set(optimal)
