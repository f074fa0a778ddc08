"""The ax+b catalog: constructors, degenerate cases, identities and the lattice."""
import random

import pytest
from hypothesis import given, settings, strategies as st

from hopfforge.axb import (antipode_variant, axb_q, axb_qn, hopf_surjection, laurent_hopf,
                           normal_form_shape_ok, section4_identities, subgroup_morphism,
                           universal_axb)
from hopfforge.hopf import check_antipode, check_bialgebra, check_commutative
from hopfforge.ncalg import check_local_confluence, random_element
from hopfforge.scalar import GF, QQ, QQ_q

q = QQ_q.q


@pytest.mark.parametrize("F", [QQ, GF(5), QQ_q])
def test_universal_structure(F):
    inst = universal_axb(F)
    H = inst.hopf
    P = H.base
    assert P.generators == ("a", "ainv", "b")
    a, ainv, b = P.free.gens()
    assert [r.terms for r in P.relations] == [(a * ainv - 1).terms, (ainv * a - 1).terms]
    assert check_bialgebra(H).ok
    assert check_antipode(H).ok


@pytest.mark.parametrize("n", [1, 2, 3])
def test_quotients_carry_the_defining_relation(n):
    inst = axb_qn("q", n)
    P = inst.base
    a, ainv, b = P.gens()
    assert a ** n * b == (b * a ** n).scale(q)
    assert check_local_confluence(P).ok
    assert len(P.relations) == 3


@pytest.mark.parametrize("args", [("q", 0), (0, 1), (0, 3)])
def test_degenerate_cases_collapse_to_laurent(args):
    inst = axb_qn(*args)
    assert inst.degenerate == "k[a, a^-1]"
    assert inst.base.gen("b") == 0
    rep = check_commutative(inst.hopf, samples=100)
    assert rep.ok


def test_q_equal_one_n_zero_is_flagged():
    inst = axb_qn(1, 0)
    assert inst.degenerate.startswith("A_{1,0} = A")
    assert inst.hopf is universal_axb().hopf


def test_negative_n_normalizes():
    inst = axb_qn("q", -2)
    assert inst.n == 2 and inst.q == q ** -1
    assert inst.requested == (q, -2)
    a, ainv, b = inst.base.gens()
    # the requested relation a^-2 b - q b a^-2 holds
    assert ainv * ainv * b == (b * ainv * ainv).scale(q)


def test_laurent_is_commutative_and_cocommutative():
    L = laurent_hopf(QQ)
    assert check_commutative(L.hopf).ok
    assert not check_commutative(universal_axb().hopf, samples=5).ok


def test_q_one_is_commutative_but_not_cocommutative():
    rep = check_commutative(axb_q(1).hopf, samples=50)
    assert [c.status for c in rep.cases] == ["pass", "fail"]


@pytest.mark.parametrize("n", range(1, 9))
def test_identities_symbolic(n):
    rep = section4_identities("q", n)
    assert rep.ok, str(rep)


@pytest.mark.parametrize("F", [QQ, GF(5)])
@pytest.mark.parametrize("qn", [(2, 3), (3, 2)])
def test_identities_concrete(F, qn):
    rep = section4_identities(F(qn[0]), qn[1], F)
    assert rep.ok, str(rep)


def test_right_factor_variant_differs_in_universal_algebra():
    S_g, variant, image = antipode_variant("q", 2)
    assert S_g != variant
    assert not image


@pytest.mark.parametrize("n", [1, 2])
@pytest.mark.parametrize("m", [-2, -1, 2, 3])
def test_subgroup_morphisms(n, m):
    verdict = subgroup_morphism("q", n, m)
    assert verdict.ok, str(verdict.report)


def test_wrong_direction_fails():
    src, tgt = axb_q("q").hopf, axb_qn("q", 2).hopf
    verdict = hopf_surjection(src, tgt)
    assert not verdict.ok
    assert verdict.stage == "well-defined"
    a, ainv, b = tgt.base.gens()
    assert verdict.witness == a * b - (b * a).scale(q)
    assert verdict.witness


def test_relation_not_zero_in_bigger_quotient():
    P = axb_qn("q", 2).base
    a, ainv, b = P.gens()
    assert (a * b).terms == {(0, 2): QQ_q.one}


@pytest.mark.parametrize("n", [1, 2, 3, 4])
@settings(max_examples=100)
@given(seed=st.integers(0, 2 ** 32))
def test_normal_form_shape(n, seed):
    P = axb_qn("q", n).base
    rng = random.Random(seed)
    x = random_element(P, rng, 6) * random_element(P, rng, 6)
    assert all(normal_form_shape_ok(w, n) for w in x.terms)


def test_shape_predicate_rejects_long_runs():
    assert normal_form_shape_ok((1, 1, 2, 0), 2)
    assert not normal_form_shape_ok((2, 0, 0), 2)
    assert not normal_form_shape_ok((2, 1), 3)
