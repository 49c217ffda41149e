import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from psclp.core import ANY, Card, Extensional, NormalRule, Program, Rule, SCAtom, is_model, literal_to_sc, normal_to_program, powerset
from psclp.engine import (
    HornProgram,
    HornRule,
    enumerate_stable,
    head_support,
    is_stable,
    least_model,
    nss_transform,
    tp_step,
)
from psclp.errors import CapExceededError
from psclp.generate import random_psc_program
from psclp.syntax import parse_psc

S = lambda *xs: frozenset(xs)  # noqa: E731

CHOICE = Program((Rule(SCAtom(S("j1", "j2"), Extensional(frozenset({S("j1"), S("j2")})))),))
ODD = normal_to_program([NormalRule("a", (), ("a",))])


class TestTpStep:
    def test_empty(self):
        assert tp_step(HornProgram(), S("a")) == S()

    def test_fact(self):
        assert tp_step(HornProgram((HornRule("a"),)), S()) == S("a")

    def test_body(self):
        h = HornProgram((HornRule("b", (literal_to_sc("a"),)),))
        assert tp_step(h, S("a")) == S("b")
        assert tp_step(h, S()) == S()


class TestLeastModel:
    def test_chain(self):
        h = HornProgram((HornRule("a"), HornRule("b", (literal_to_sc("a"),))))
        assert least_model(h) == S("a", "b")

    def test_unsupported(self):
        assert least_model(HornProgram((HornRule("a", (literal_to_sc("b"),)),))) == S()

    def test_card_closure(self):
        h = HornProgram((HornRule("p", (SCAtom(S("a", "b"), Card(1, 2)),)), HornRule("a")))
        assert least_model(h) == S("a", "p")


class TestNss:
    def test_survives(self):
        p = normal_to_program([NormalRule("a", (), ("b",))])
        h = nss_transform(p, S("a"))
        assert h == HornProgram((HornRule("a", (literal_to_sc("b", True),)),))
        assert least_model(h) == S("a")

    def test_deleted(self):
        p = normal_to_program([NormalRule("a", (), ("b",))])
        assert nss_transform(p, S("b")) == HornProgram()

    def test_choice(self):
        h = nss_transform(CHOICE, S("j1"))
        assert h == HornProgram((HornRule("j1"),))
        assert least_model(h) == S("j1")


class TestIsStable:
    def test_choice(self):
        assert is_stable(CHOICE, S("j1"))
        assert not is_stable(CHOICE, S("j1", "j2"))

    def test_empty_program(self):
        assert is_stable(Program(()), S())
        assert not is_stable(Program(()), S("a"))

    def test_odd_loop(self):
        assert not is_model(S(), ODD)
        assert not is_stable(ODD, S())
        assert not is_stable(ODD, S("a"))


class TestHeadSupport:
    def test_single_head(self):
        p = Program((Rule(SCAtom(S("a", "b"), ANY), (literal_to_sc("c"),)),))
        assert head_support(p) == S("a", "b")

    def test_empty(self):
        assert head_support(Program(())) == S()

    def test_job_offers(self, fixture_text):
        # the pref head contributes its whole base, c included
        p = parse_psc(fixture_text("job_offers.psc"))
        assert head_support(p) == S("j1", "j2", "r", "t", "c", "cal", "ncal")


class TestEnumerate:
    def test_job_offers(self, fixture_text):
        p = parse_psc(fixture_text("job_offers.psc"))
        assert enumerate_stable(p) == [S("cal", "j1", "r"), S("j2", "ncal", "t")]

    def test_odd_loop(self):
        assert enumerate_stable(ODD) == []

    def test_empty(self):
        assert enumerate_stable(Program(())) == [S()]

    def test_cap(self):
        p = Program((Rule(SCAtom(frozenset(f"x{i}" for i in range(5)), ANY)),))
        with pytest.raises(CapExceededError):
            enumerate_stable(p, cap=4)
        assert len(enumerate_stable(p, cap=4, force=True)) == 32

    def test_outside_support_absent(self):
        # b is only in a body, so it is never derived
        p = parse_psc("#universe z.\na :- not b.")
        assert enumerate_stable(p) == [S("a")]


@settings(max_examples=150, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_enumerated_models_agree_with_is_stable(seed):
    p = random_psc_program(random.Random(seed))
    support = head_support(p)
    models = enumerate_stable(p)
    assert models == enumerate_stable(p)  # deterministic
    expected = [m for m in powerset(support) if is_stable(p, m)]
    assert set(models) == set(expected)
    for m in models:
        assert m <= support and is_model(m, p)


@settings(max_examples=100, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_least_model_is_least_fixpoint(seed):
    rng = random.Random(seed)
    p = random_psc_program(rng, max_atoms=5)
    m = rng.choice(list(powerset(head_support(p))))
    h = nss_transform(p, m)
    lm = least_model(h)
    assert tp_step(h, lm) == lm
    universe = sorted(h.heads() | lm)
    for cand in powerset(universe):
        if tp_step(h, cand) == cand:
            assert lm <= cand
    # monotone operator
    for a in powerset(universe):
        for b in powerset(universe):
            if a <= b:
                assert tp_step(h, a) <= tp_step(h, b)
