"""Presentations, the rewriting engine and critical-pair analysis."""
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from hopfforge.axb import axb_q, axb_qn, laurent_hopf, universal_axb
from hopfforge.ncalg import (Element, NonTerminationError, Presentation,
                             PresentationMismatchError, check_local_confluence, critical_pairs,
                             extend_hom, hom_well_defined, make_rule, normal_form, random_word,
                             replay_trace, validate_measure)
from hopfforge.ncalg import MissingImageError
from hopfforge.scalar import QQ, QQ_q

q = QQ_q.q


def shipped():
    return {
        "A": universal_axb(QQ_q).base,
        "A_q": axb_q("q").base,
        "A_q2": axb_qn("q", 2).base,
        "A_q3": axb_qn("q", 3).base,
        "A_q4": axb_qn("q", 4).base,
        "laurent": laurent_hopf(QQ_q).base,
    }


SHIPPED = list(shipped())


def broken_system():
    free = Presentation.free_algebra(QQ, ["a", "b"])
    a, b = free.gens()
    rules = [make_rule((0, 1), {(1,): Fraction(1)}), make_rule((1, 0), {(0,): Fraction(1)})]
    return free.quotient([a * b - b, b * a - a], rules, name="broken")


# element arithmetic ------------------------------------------------------------

def test_cancellation_and_scaling():
    P = universal_axb().base
    a, b = P.gen("a"), P.gen("b")
    assert b + (-1) * b == P.zero()
    assert not (b - b).terms
    assert 2 * a + 3 * a == 5 * a
    assert (5 * a).coefficient((0,)) == 5


def test_free_sum_has_two_terms():
    free = Presentation.free_algebra(QQ, ["a", "b"])
    a, b = free.gens()
    assert len((a * b + b * a).terms) == 2


def test_presentation_mismatch():
    P, Q = universal_axb().base, axb_q(2).base
    with pytest.raises(PresentationMismatchError):
        P.gen("a") + Q.gen("a")
    with pytest.raises(PresentationMismatchError):
        P.gen("a") * Q.gen("a")


def test_products_in_shipped_algebras():
    A = universal_axb().base
    a, ainv, b = A.gens()
    assert a * ainv == 1 and ainv * a == 1
    assert a * b != b * a
    assert str(a * b) == "a*b"
    Aq = axb_q("q").base
    a, ainv, b = Aq.gens()
    assert b * a == (a * b).scale(q ** -1)


def test_normal_form_examples():
    A = universal_axb().base
    raw = Element(A, {(0, 1, 2): Fraction(1)})
    assert normal_form(raw) == A.gen("b")

    A2 = axb_qn("q", 2).base
    a, ainv, b = A2.gens()
    assert b * ainv == (ainv * ainv * b * a).scale(q)

    Aq = axb_q("q").base
    a, ainv, b = Aq.gens()
    assert a * a * b == Element(Aq, {(0, 0, 2): QQ_q.one})
    assert b * a * a == (a * a * b).scale(q ** -2)


def test_print_syntax_round_trips():
    free = Presentation.free_algebra(QQ_q, ["a", "b"])
    x = free.parse("3*a^2*b - q^-1*b*a")
    assert str(x) == "3*a^2*b - q^-1*b*a"
    assert free.parse(str(x)) == x
    assert str(free.one()) == "1"


def test_fuel_exhaustion_names_the_word():
    free = Presentation.free_algebra(QQ, ["a"])
    a = free.gen("a")
    P = free.quotient([a - a * a], [make_rule((0,), {(0, 0): Fraction(1)})])
    with pytest.raises(NonTerminationError) as exc:
        normal_form(Element(P, {(0,): Fraction(1)}), fuel=50)
    assert "a" in str(exc.value)


# critical pairs ------------------------------------------------------------------

def _pair_set(P, word):
    return [{str(cp.left), str(cp.right)} for cp in critical_pairs(P) if cp.word == word]


def test_unit_rules_overlap():
    A = universal_axb().base
    # a*ainv*a: both one-step reducts are a
    assert {"a"} in _pair_set(A, (0, 1, 0))
    pairs = critical_pairs(A)
    assert len(pairs) == 2


def test_q_rules_overlap():
    Aq = axb_q("q").base
    assert {"b", "q^-1*a*b*ainv"} in _pair_set(Aq, (2, 0, 1))


def test_single_rule_has_no_self_overlap():
    free = Presentation.free_algebra(QQ, ["a", "ainv"])
    a, ainv = free.gens()
    P = free.quotient([a * ainv - 1], [make_rule((0, 1), {(): Fraction(1)})])
    assert critical_pairs(P) == []


@pytest.mark.parametrize("name", SHIPPED)
def test_shipped_systems_are_confluent(name):
    P = shipped()[name]
    rep = check_local_confluence(P)
    assert rep.ok, rep.diagnostic
    assert P.confluence_status == "verified"
    assert validate_measure(P) == []


def test_broken_system_reports_its_pair():
    P = broken_system()
    rep = check_local_confluence(P)
    assert rep.status == "failed"
    assert P.confluence_status == "failed"
    nl, nr = rep.normal_forms
    assert nl != nr
    assert {str(nl), str(nr)} <= {"a", "b", "a^2", "b^2"}
    assert P.word_str(rep.failure.word) in ("a*b*a", "b*a*b")


# homomorphisms --------------------------------------------------------------------

def test_identity_hom():
    A = universal_axb().base
    ident = extend_hom(A, {g: A.gen(g) for g in A.generators})
    x = A.parse("2*a*b*ainv - b^2 + 3")
    assert ident(x) == x


def test_antipode_images_reverse_words():
    A = universal_axb().base
    a, ainv, b = A.gens()
    S = extend_hom(A, {"a": ainv, "ainv": a, "b": -(b * ainv)}, anti=True)
    assert S(a * b) == -(b * ainv * ainv)
    assert hom_well_defined(A, S) is None


def test_counit_images():
    A = universal_axb().base
    a, ainv, b = A.gens()
    eps = extend_hom(A, {"a": QQ.one, "ainv": QQ.one, "b": QQ.zero})
    assert eps(a * b) == 0
    assert eps(a * ainv) == 1
    assert hom_well_defined(A, eps) is None


def test_missing_image():
    A = universal_axb().base
    with pytest.raises(MissingImageError):
        extend_hom(A, {"a": A.gen("a")})


def test_non_reversing_antipode_violates_q_relation():
    Aq = axb_q("q").base
    a, ainv, b = Aq.gens()
    images = {"a": ainv, "ainv": a, "b": -(b * ainv)}
    assert hom_well_defined(Aq, extend_hom(Aq, images, anti=True)) is None
    v = hom_well_defined(Aq, extend_hom(Aq, images, anti=False))
    assert v is not None
    assert v.image == (b * ainv * ainv).scale(q - q ** -1)


def test_anti_map_sending_b_to_a_violates():
    Aq = axb_q("q").base
    a, ainv, b = Aq.gens()
    v = hom_well_defined(Aq, extend_hom(Aq, {"a": ainv, "ainv": a, "b": a}, anti=True))
    assert v is not None
    assert v.image == Aq.scalar(1 - q)


# properties over every shipped presentation ------------------------------------------

def _raw(P, rng, max_degree=6, terms=3):
    """An unreduced element: random words of the free algebra, kept as they are."""
    out = {}
    for _ in range(rng.randint(1, terms)):
        w = random_word(P, rng, max_degree)
        out[w] = out.get(w, 0) + rng.choice([1, -1, 2, -2])
    return Element(P, {w: P.field(c) for w, c in out.items() if c})


def _rand(P, rng, max_degree=6):
    return normal_form(_raw(P, rng, max_degree))


@pytest.mark.parametrize("name", SHIPPED)
@settings(max_examples=500)
@given(seed=st.integers(0, 2 ** 32))
def test_normal_form_strategy_independent(name, seed):
    P = shipped()[name]
    rng = random.Random(seed)
    x = _raw(P, rng)
    left = normal_form(x)
    assert normal_form(x, strategy="random", rng=rng) == left
    assert normal_form(left) == left
    assert all(P.is_reduced(w) for w in left.terms)


@pytest.mark.parametrize("name", SHIPPED)
@settings(max_examples=100)
@given(seed=st.integers(0, 2 ** 32))
def test_reduction_trace_replays(name, seed):
    P = shipped()[name]
    x = _raw(P, random.Random(seed))
    trace = []
    out = normal_form(x, trace=trace)
    assert out == normal_form(x)
    assert replay_trace(P, trace) == []


@pytest.mark.parametrize("name", SHIPPED)
@settings(max_examples=500)
@given(seed=st.integers(0, 2 ** 32))
def test_ring_axioms(name, seed):
    P = shipped()[name]
    rng = random.Random(seed)
    x, y, z = (_rand(P, rng, 4) for _ in range(3))
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert (x + y) * z == x * z + y * z
    assert P.one() * x == x == x * P.one()
