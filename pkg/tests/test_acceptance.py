"""Acceptance criteria: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` to see the summary lines.
"""
import random
import subprocess
import sys
import time
from fractions import Fraction
from pathlib import Path

from hopfforge.axb import (MEASURE, _quotient_rules, affine_character, axb_q, axb_qn,
                           axb_op_coaction, defining_relation, hopf_surjection, laurent_hopf,
                           section4_identities, subgroup_morphism, theorem1_inputs,
                           universal_axb, verify_theorem1)
from hopfforge.cli import confluence_report, oracle_agreement
from hopfforge.comodule import (check_filtration, check_left_coaction, check_right_coaction,
                                classify_to_universal)
from hopfforge.hopf import (MultiplicativeMatrix, antipode_square, char_convolve,
                            character_inverse, check_antipode, check_bialgebra,
                            check_commutative, counit_character, hopf_ideal_verify, opposite,
                            remark1_matrix_check, theorem1_verify)
from hopfforge.ncalg import Presentation, check_local_confluence, make_rule, validate_measure
from hopfforge.scalar import GF, QQ, QQ_q

ROOT = Path(__file__).resolve().parent.parent
q = QQ_q.q


class Criterion:
    """Times a block, prints one PASS/FAIL line, and asserts both outcome and budget."""

    def __init__(self, number: int, label: str, limit: float):
        self.number, self.label, self.limit = number, label, limit
        self.problems: list[str] = []

    def require(self, cond, what: str):
        if not cond:
            self.problems.append(what)

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.start
        if exc is not None:
            self.problems.append(f"{exc_type.__name__}: {exc}")
        if elapsed >= self.limit:
            self.problems.append(f"took {elapsed:.2f}s, limit {self.limit}s")
        verdict = "FAIL" if self.problems else "PASS"
        detail = f" [{'; '.join(self.problems)}]" if self.problems else ""
        print(f"\n{verdict} criterion {self.number}: {self.label} ({elapsed:.2f}s){detail}")
        if exc is None:
            assert not self.problems, self.problems
        return False


def test_criterion_01_bialgebra_and_antipode_suites():
    with Criterion(1, "bialgebra and antipode suites over Q, GF(5), Q(q)", 10) as c:
        for F in (QQ, GF(5), QQ_q):
            H = universal_axb(F).hopf
            for suite in (check_bialgebra, check_antipode):
                rep = suite(H, max_degree=6, samples=100, seed=42)
                c.require(rep.ok, f"{suite.__name__} over {F}")


def test_criterion_02_antipode_from_multiplicative_matrix():
    with Criterion(2, "antipode built from u, v; wrong v rejected at the inverse stage", 1) as c:
        U = universal_axb()
        verdict = verify_theorem1(U, samples=20)
        c.require(verdict.ok, "construction failed")
        if verdict.ok:
            S = verdict.value
            for g in U.base.generators:
                c.require(S.antipode(S.gen(g)) == U.hopf.antipode(U.hopf.gen(g)), f"S({g})")
        H, u, v, extra = theorem1_inputs(U)
        a, ainv, b = H.base.gens()
        wrong = MultiplicativeMatrix([[ainv, H.base.zero()], [b * ainv, H.base.one()]])
        bad = theorem1_verify(H, u, wrong, extra)
        c.require(not bad.ok and bad.stage == "inverse", f"stage {bad.stage}")
        c.require(bad.witness == 2 * (b * ainv), f"witness {bad.witness}")


def test_criterion_03_generator_identities():
    with Criterion(3, "coproduct/counit/antipode of the defining relation", 10) as c:
        for n in range(1, 9):
            c.require(section4_identities("q", n).ok, f"symbolic q, n = {n}")
        for F in (QQ, GF(5)):
            for qv, n in ((2, 3), (3, 2)):
                c.require(section4_identities(F(qv), n, F).ok, f"q = {qv}, n = {n} over {F}")


def test_criterion_04_hopf_ideal_grid():
    with Criterion(4, "Hopf ideals on n in {1,2,3} x q in {q, 2, -1}; b - 1 rejected", 30) as c:
        for qv in ("q", 2, -1):
            for n in (1, 2, 3):
                U = universal_axb(QQ_q if qv == "q" else QQ)
                F = U.field
                qs = q if qv == "q" else F(qv)
                g = defining_relation(U.base, qs, n)
                # the verdict includes both suites run on the quotient
                verdict = hopf_ideal_verify(U.hopf, [g], _quotient_rules(F, qs, n), MEASURE,
                                            samples=100)
                c.require(verdict.ok, f"q = {qv}, n = {n}: {verdict.stage}")
                c.require(any(r.suite == "hopf-ideal" and "antipode" in r.case
                              for r in verdict.report.cases), "quotient suites not run")
        H = universal_axb().hopf
        g = H.gen("b") - 1
        bad = hopf_ideal_verify(H, [g], list(H.base.rules))
        c.require(not bad.ok and bad.stage == "counit", f"b - 1 stage {bad.stage}")


def test_criterion_05_subgroup_lattice():
    with Criterion(5, "quotient maps A_{q,n} -> A_{q,mn}; reverse direction rejected", 10) as c:
        for n in (1, 2):
            for m in (-2, -1, 2, 3):
                c.require(subgroup_morphism("q", n, m).ok, f"n = {n}, m = {m}")
        wrong = hopf_surjection(axb_q("q").hopf, axb_qn("q", 2).hopf)
        c.require(not wrong.ok, "A_q -> A_{q,2} accepted")
        c.require(bool(wrong.witness), "witness is zero")


def test_criterion_06_coactions():
    with Criterion(6, "right coaction, filtration, left coaction of the opposite", 10) as c:
        U = universal_axb()
        c.require(check_right_coaction(U.coaction, max_degree=10, samples=100).ok, "right")
        c.require(check_filtration(U.coaction, n_max=10, samples=100).ok, "filtration")
        aop = axb_op_coaction(opposite(U.hopf))
        c.require(check_left_coaction(aop, max_degree=10, samples=100).ok, "left")


def test_criterion_07_classifier():
    with Criterion(7, "classifier recovers the quotient map from the universal algebra", 10) as c:
        U = universal_axb(QQ_q).base
        for inst in (universal_axb(QQ_q), axb_q("q"), axb_qn("q", 2), laurent_hopf(QQ_q)):
            H0 = inst.hopf
            verdict = classify_to_universal(H0, inst.coaction, H0.gen("ainv"), samples=50)
            c.require(verdict.ok, f"{H0.name}: {verdict.stage}")
            if verdict.ok:
                for g in U.generators:
                    c.require(verdict.value(U.gen(g)) == H0.gen(g), f"{H0.name}: image of {g}")


def test_criterion_08_transpose_and_square_of_antipode():
    with Criterion(8, "transposed matrix products and S^2", 1) as c:
        Aq = axb_q("q")
        r = remark1_matrix_check(Aq.hopf, Aq.u)
        c.require(r.ut_vt[0, 1] == Aq.base.gen("b").scale(1 - q), "off-diagonal entry")
        c.require(r.inequality_witnessed, "no inequality")
        classical = axb_q(1)
        r1 = remark1_matrix_check(classical.hopf, classical.u)
        c.require(r1.ut_vt_identity and r1.vt_ut_identity, "q = 1 not identity")
        A = universal_axb()
        a, ainv, b = A.base.gens()
        c.require(antipode_square(A.hopf, "b") == a * b * ainv, "S^2(b) in A")
        c.require(antipode_square(Aq.hopf, "b") == Aq.base.gen("b").scale(q), "S^2(b) in A_q")


def test_criterion_09_degenerate_cases():
    with Criterion(9, "A_{q,0} and A_{0} collapse to k[a, a^-1]", 5) as c:
        for inst in (axb_qn("q", 0), axb_q(0)):
            c.require(inst.degenerate == "k[a, a^-1]", f"flag {inst.degenerate}")
            c.require(inst.base.gen("b") == 0, "b survives")
            rep = check_commutative(inst.hopf, samples=100)
            c.require(rep.ok, "not commutative and cocommutative")


def test_criterion_10_oracle_agreement():
    with Criterion(10, "rewriting engine agrees with the crossed-product model", 30) as c:
        for qv, n in (("q", 1), ("q", 2), (2, 3)):
            inst = axb_qn(qv, n)
            rep = oracle_agreement(inst.base, inst.q, n, samples=200, max_degree=6, seed=42,
                                   label=f"{qv},{n}")
            c.require(rep.ok, f"({qv}, {n})")


def test_criterion_11_confluence():
    with Criterion(11, "shipped rewrite systems confluent and terminating; broken one flagged",
                   10) as c:
        systems = [universal_axb(QQ_q).base] + [axb_qn("q", n).base for n in (1, 2, 3, 4)]
        for P in systems:
            c.require(confluence_report(P).ok, f"{P.name}")
            c.require(validate_measure(P) == [], f"{P.name}: measure")
        free = Presentation.free_algebra(QQ, ["a", "b"])
        a, b = free.gens()
        rules = [make_rule((0, 1), {(1,): Fraction(1)}), make_rule((1, 0), {(0,): Fraction(1)})]
        broken = free.quotient([a * b - b, b * a - a], rules, name="broken")
        rep = check_local_confluence(broken)
        c.require(rep.status == "failed", "broken system reported confluent")
        c.require(rep.normal_forms[0] != rep.normal_forms[1], "no distinct normal forms")


def test_criterion_12_characters():
    with Criterion(12, "character convolution, counit identity, inverse via S", 5) as c:
        rng = random.Random(42)
        for F in (QQ, GF(5)):
            H = universal_axb(F).hopf
            eps = counit_character(H)
            for _ in range(100):
                a1, a2 = (F(rng.choice([i for i in range(-9, 10) if i % 5])) for _ in range(2))
                b1, b2 = F(rng.randint(-9, 9)), F(rng.randint(-9, 9))
                x, y = affine_character(H, a1, b1), affine_character(H, a2, b2)
                c.require(char_convolve(H, x, y) == affine_character(H, a1 * a2, b1 * a2 + b2),
                          f"product over {F}")
                c.require(char_convolve(H, eps, x) == x == char_convolve(H, x, eps),
                          f"counit over {F}")
                inv = character_inverse(H, x)
                c.require(char_convolve(H, x, inv) == eps == char_convolve(H, inv, x),
                          f"inverse over {F}")


def _check_bundled():
    return subprocess.run(
        [sys.executable, "-m", "hopfforge", "check", "axb.hopf", "--suite", "all",
         "--report", "json"], cwd=ROOT, capture_output=True, timeout=180)


def test_criterion_13_bundled_document():
    with Criterion(13, "bundled document passes every suite with byte-stable JSON", 180) as c:
        first = _check_bundled()
        c.require(first.returncode == 0, f"exit {first.returncode}: {first.stderr[-300:]!r}")
        second = _check_bundled()
        c.require(second.returncode == 0, f"exit {second.returncode}")
        c.require(first.stdout == second.stdout and first.stdout, "JSON output differs")
