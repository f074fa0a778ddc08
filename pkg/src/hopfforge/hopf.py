"""Bialgebra and Hopf structures on presentations, with exact axiom checkers.

Structure maps are given on generators and extended (anti-)multiplicatively.
Every checker verifies the identities exactly on generators and then on
seeded random elements; the generator pass is authoritative, the random
pass guards the extension code.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .ncalg import (DEFAULT_FUEL, Element, Hom, NonTerminationError, Presentation,
                    check_local_confluence, hom_well_defined, random_element,
                    relations_vanish, validate_measure)
from .report import FAIL, PASS, UNVERIFIED, Report
from .tensor import TensorElement, flip, map_leg, mul_legs, tensor, unit


class MissingAntipodeError(ValueError):
    pass


class HopfPresentation:
    """A presentation with Δ, ε and (optionally) S given on generators."""

    def __init__(self, base: Presentation, delta: Mapping[str, TensorElement],
                 counit: Mapping[str, object], antipode: Mapping[str, Element] | None = None,
                 op_product: bool = False, op_coproduct: bool = False, name: str | None = None):
        self.base = base
        self.field = base.field
        self.delta_images = {g: delta[g] for g in base.generators}
        self.counit_images = {g: base.field(counit[g]) for g in base.generators}
        self.antipode_images = None if antipode is None else {g: antipode[g] for g in base.generators}
        self.op_product = op_product
        self.op_coproduct = op_coproduct
        self.name = name or base.name
        self.legs = (base, base)
        self._delta = Hom(base, self.delta_images, one=unit(self.legs))
        self._counit = Hom(base, self.counit_images, one=base.field.one)
        self._antipode = (None if antipode is None
                          else Hom(base, self.antipode_images, anti=True, one=base.one()))

    def delta(self, x: Element) -> TensorElement:
        return self._delta(x)

    def counit(self, x: Element):
        return self._counit(x)

    def antipode(self, x: Element) -> Element:
        if self._antipode is None:
            raise MissingAntipodeError(f"{self.name or 'algebra'} carries no antipode")
        return self._antipode(x)

    @property
    def has_antipode(self) -> bool:
        return self._antipode is not None

    def gen(self, name: str) -> Element:
        return self.base.gen(name)

    def with_antipode(self, images: Mapping[str, Element]) -> "HopfPresentation":
        return HopfPresentation(self.base, self.delta_images, self.counit_images, images,
                                self.op_product, self.op_coproduct, self.name)

    def without_antipode(self) -> "HopfPresentation":
        return HopfPresentation(self.base, self.delta_images, self.counit_images, None,
                                self.op_product, self.op_coproduct, self.name)

    def structurally_equal(self, other: "HopfPresentation") -> bool:
        same_s = ((self.antipode_images is None) == (other.antipode_images is None)
                  and (self.antipode_images is None
                       or all(self.antipode_images[g].terms == other.antipode_images[g].terms
                              for g in self.base.generators)))
        return (self.base.structurally_equal(other.base)
                and all(self.delta_images[g].terms == other.delta_images[g].terms
                        for g in self.base.generators)
                and self.counit_images == other.counit_images
                and same_s
                and (self.op_product, self.op_coproduct) == (other.op_product, other.op_coproduct))


@dataclass
class Verdict:
    """Outcome of a staged verification; ``value`` holds what was built."""

    ok: bool
    stage: str | None = None
    witness: object = None
    value: object = None
    report: Report = field(default_factory=Report)

    def __bool__(self):
        return self.ok


def _fmt(x, lhs=None, rhs=None) -> str:
    if lhs is None:
        return str(x)
    return f"x = {x}: {lhs} != {rhs}"


class _Cases:
    """Collects timed pass/fail cases into a report."""

    def __init__(self, suite: str, report: Report | None = None):
        self.suite = suite
        self.report = report if report is not None else Report()
        self.t0 = time.perf_counter()

    def add(self, case: str, ok: bool, witness=None, status=None):
        t = time.perf_counter()
        self.report.add(self.suite, case, ok, None if ok else witness, t - self.t0, status)
        self.t0 = t


def _samples(alg: Presentation, max_degree: int, samples: int, seed: int, salt: str):
    rng = random.Random(f"{seed}:{salt}")
    return [random_element(alg, rng, max_degree) for _ in range(samples)]


def _first_failure(xs, test):
    for x in xs:
        bad = test(x)
        if bad is not None:
            return bad
    return None


# --------------------------------------------------------------------------
# bialgebra axioms
# --------------------------------------------------------------------------

def coassociativity_failure(H: HopfPresentation, x: Element):
    t = H.delta(x)
    lhs = map_leg(t, 0, H.delta)
    rhs = map_leg(t, 1, H.delta)
    return None if lhs == rhs else _fmt(x, lhs, rhs)


def counit_failure(H: HopfPresentation, x: Element):
    t = H.delta(x)
    left = map_leg(t, 0, H.counit).to_element()
    if left != x:
        return _fmt(x, f"(eps (x) id)Delta(x) = {left}", x)
    right = map_leg(t, 1, H.counit).to_element()
    if right != x:
        return _fmt(x, f"(id (x) eps)Delta(x) = {right}", x)
    return None


def check_bialgebra(H: HopfPresentation, max_degree: int = 6, samples: int = 100,
                    seed: int = 42, suite: str = "bialgebra") -> Report:
    c = _Cases(suite)
    base = H.base
    v = hom_well_defined(base, H._delta)
    c.add("delta-well-defined", v is None, v)
    v = hom_well_defined(base, H._counit)
    c.add("counit-well-defined", v is None, v)
    for g in base.generators:
        x = base.gen(g)
        bad = coassociativity_failure(H, x)
        c.add(f"coassociativity[{g}]", bad is None, bad)
        bad = counit_failure(H, x)
        c.add(f"counit-law[{g}]", bad is None, bad)
    if samples:
        xs = _samples(base, max_degree, samples, seed, "bialgebra")
        bad = _first_failure(xs, lambda x: coassociativity_failure(H, x))
        c.add("coassociativity-random", bad is None, bad)
        bad = _first_failure(xs, lambda x: counit_failure(H, x))
        c.add("counit-law-random", bad is None, bad)
        ys = _samples(base, max_degree, samples, seed, "bialgebra-pairs")

        def mult(pair):
            x, y = pair
            lhs, rhs = H.delta(x * y), H.delta(x) * H.delta(y)
            if lhs != rhs:
                return f"x = {x}, y = {y}: Delta(xy) = {lhs} != {rhs}"
            if H.counit(x * y) != H.counit(x) * H.counit(y):
                return f"x = {x}, y = {y}: counit not multiplicative"
            return None
        bad = _first_failure(zip(xs, ys), mult)
        c.add("multiplicative-random", bad is None, bad)
    return c.report


# --------------------------------------------------------------------------
# antipode axiom
# --------------------------------------------------------------------------

def antipode_failure(H: HopfPresentation, x: Element):
    t = H.delta(x)
    expected = H.base.scalar(H.counit(x))
    left = mul_legs(map_leg(t, 0, H.antipode))
    if left != expected:
        return _fmt(x, f"m(S (x) id)Delta(x) = {left}", expected)
    right = mul_legs(map_leg(t, 1, H.antipode))
    if right != expected:
        return _fmt(x, f"m(id (x) S)Delta(x) = {right}", expected)
    return None


def check_antipode(H: HopfPresentation, max_degree: int = 6, samples: int = 100,
                   seed: int = 42, suite: str = "antipode") -> Report:
    if not H.has_antipode:
        raise MissingAntipodeError("check_antipode needs antipode images")
    c = _Cases(suite)
    base = H.base
    v = hom_well_defined(base, H._antipode)
    c.add("antipode-well-defined", v is None, v)
    for g in base.generators:
        bad = antipode_failure(H, base.gen(g))
        c.add(f"antipode-law[{g}]", bad is None, bad)
    if samples:
        xs = _samples(base, max_degree, samples, seed, "antipode")
        bad = _first_failure(xs, lambda x: antipode_failure(H, x))
        c.add("antipode-law-random", bad is None, bad)
        ys = _samples(base, max_degree, samples, seed, "antipode-pairs")

        def anti(pair):
            x, y = pair
            lhs, rhs = H.antipode(x * y), H.antipode(y) * H.antipode(x)
            return None if lhs == rhs else f"x = {x}, y = {y}: S(xy) = {lhs} != S(y)S(x) = {rhs}"
        bad = _first_failure(zip(xs, ys), anti)
        c.add("anti-multiplicative-random", bad is None, bad)
    return c.report


# --------------------------------------------------------------------------
# multiplicative matrices and Theorem 1
# --------------------------------------------------------------------------

class MultiplicativeMatrix:
    def __init__(self, entries: Sequence[Sequence[Element]]):
        self.entries = [list(row) for row in entries]
        self.n = len(self.entries)
        if any(len(row) != self.n for row in self.entries):
            raise ValueError("matrix must be square")

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    @property
    def alg(self) -> Presentation:
        return self.entries[0][0].alg

    def transpose(self) -> "MultiplicativeMatrix":
        return MultiplicativeMatrix([[self.entries[j][i] for j in range(self.n)]
                                     for i in range(self.n)])

    def map(self, f) -> "MultiplicativeMatrix":
        return MultiplicativeMatrix([[f(x) for x in row] for row in self.entries])

    def __matmul__(self, other: "MultiplicativeMatrix") -> "MultiplicativeMatrix":
        n = self.n
        alg = self.alg
        return MultiplicativeMatrix([[sum((self.entries[i][k] * other.entries[k][j]
                                           for k in range(n)), alg.zero())
                                      for j in range(n)] for i in range(n)])

    def identity_defect(self):
        """First (i, j, entry - delta_ij) that is nonzero, or None."""
        for i in range(self.n):
            for j in range(self.n):
                d = self.entries[i][j] - (1 if i == j else 0)
                if d:
                    return i, j, d
        return None

    def is_identity(self) -> bool:
        return self.identity_defect() is None

    def __eq__(self, other):
        return isinstance(other, MultiplicativeMatrix) and self.entries == other.entries

    def __str__(self):
        return "[" + "; ".join(", ".join(str(x) for x in row) for row in self.entries) + "]"


def is_multiplicative(H: HopfPresentation, u: MultiplicativeMatrix):
    """First entry (i, j, reason) breaking Δ(u_ij) = Σ u_ik ⊗ u_kj or ε(u_ij) = δ_ij."""
    n = u.n
    for i in range(n):
        for j in range(n):
            lhs = H.delta(u[i, j])
            rhs = sum((tensor(u[i, k], u[k, j]) for k in range(n)), TensorElement(H.legs, {}))
            if lhs != rhs:
                return i, j, f"Delta(u[{i + 1},{j + 1}]) = {lhs} != {rhs}"
            if H.counit(u[i, j]) != (1 if i == j else 0):
                return i, j, f"eps(u[{i + 1},{j + 1}]) = {H.counit(u[i, j])}"
    return None


def theorem1_verify(H: HopfPresentation, u: MultiplicativeMatrix, v: MultiplicativeMatrix,
                    extra_antipode: Mapping[str, Element] | None = None,
                    max_degree: int = 6, samples: int = 100, seed: int = 42) -> Verdict:
    """Build the antipode S(u) := v of a bialgebra generated by a multiplicative matrix.

    Stages: (1) u is multiplicative; (2) uv = vu = 1 in M_n(A); (3) the anti-map
    S defined on generators from u -> v (plus ``extra_antipode``) respects the
    relations and reproduces v on every entry; (4) the antipode axiom holds.
    """
    base = H.base
    c = _Cases("theorem1")
    bad = is_multiplicative(H, u)
    c.add("multiplicative", bad is None, bad and bad[2])
    if bad is not None:
        return Verdict(False, "multiplicative", bad[2], report=c.report)

    for name, prod in (("u*v", u @ v), ("v*u", v @ u)):
        d = prod.identity_defect()
        c.add(f"inverse[{name}]", d is None, d and f"({name})[{d[0] + 1},{d[1] + 1}] - delta = {d[2]}")
        if d is not None:
            return Verdict(False, "inverse", d[2], report=c.report)

    images: dict = dict(extra_antipode or {})
    for i in range(u.n):
        for j in range(u.n):
            x = u[i, j]
            if len(x.terms) == 1:
                (w, coef), = x.terms.items()
                if len(w) == 1 and coef == 1:
                    g = base.generators[w[0]]
                    if g in images and images[g] != v[i, j]:
                        c.add("opposite-relations", False, f"conflicting images for {g}")
                        return Verdict(False, "opposite-relations", g, report=c.report)
                    images[g] = v[i, j]
    missing = [g for g in base.generators if g not in images]
    if missing:
        c.add("opposite-relations", False, f"no antipode image for {', '.join(missing)}")
        return Verdict(False, "opposite-relations", missing, report=c.report)
    S = Hom(base, images, anti=True, one=base.one())
    viol = hom_well_defined(base, S)
    if viol is None:
        for i in range(u.n):
            for j in range(u.n):
                if S(u[i, j]) != v[i, j]:
                    viol = f"S(u[{i + 1},{j + 1}]) = {S(u[i, j])} != {v[i, j]}"
                    break
            if viol is not None:
                break
    c.add("opposite-relations", viol is None, viol)
    if viol is not None:
        w = viol.image if hasattr(viol, "image") else viol
        return Verdict(False, "opposite-relations", w, report=c.report)

    hopf = H.with_antipode(images)
    rep = check_antipode(hopf, max_degree, samples, seed, suite="theorem1")
    c.report.extend(rep)
    if not rep.ok:
        f = rep.failures()[0]
        return Verdict(False, "antipode", f.witness, report=c.report)
    return Verdict(True, value=hopf, report=c.report)


# --------------------------------------------------------------------------
# Hopf ideals
# --------------------------------------------------------------------------

def quotient_hopf(H: HopfPresentation, Q: Presentation, name: str | None = None):
    """Push the structure maps of H through the generator-identity map H.base -> Q."""
    pi = Hom(H.base, {g: Q.gen(g) for g in H.base.generators}, one=Q.one())
    delta = {g: map_leg(map_leg(H.delta_images[g], 0, pi), 1, pi) for g in Q.generators}
    anti = None
    if H.has_antipode:
        anti = {g: pi(H.antipode_images[g]) for g in Q.generators}
    return HopfPresentation(Q, delta, H.counit_images, anti, H.op_product, H.op_coproduct,
                            name or Q.name), pi


def hopf_ideal_verify(H: HopfPresentation, ideal: Sequence[Element], rules=None, measure=None,
                      name: str | None = None, max_degree: int = 6, samples: int = 100,
                      seed: int = 42, fuel: int = DEFAULT_FUEL) -> Verdict:
    """Check that ``ideal`` generates a Hopf ideal and build the quotient.

    ``rules`` is the complete rewrite system of the quotient; it must make
    every relation vanish and be locally confluent before the coproduct test
    (π⊗π)Δ(g) = 0 is meaningful.
    """
    c = _Cases("hopf-ideal")
    for g in ideal:
        e = H.counit(g)
        c.add(f"counit[{g}]", not e, f"eps({g}) = {e}")
        if e:
            return Verdict(False, "counit", g, report=c.report)
    if rules is None:
        c.add("quotient-rules", False, "no rewrite system supplied for the quotient")
        return Verdict(False, "quotient-rules", None, report=c.report)

    Q = H.base.quotient(ideal, rules, measure, name)
    bad_rules = validate_measure(Q) if measure is not None else []
    c.add("termination-measure", not bad_rules,
          bad_rules and f"measure does not drop on {Q.word_str(bad_rules[0].lhs)}")
    leftover = relations_vanish(Q, fuel)
    c.add("relations-vanish", not leftover, leftover and f"{leftover[0]} does not reduce to 0")
    try:
        conf = check_local_confluence(Q, fuel)
    except NonTerminationError as exc:
        c.add("confluence", False, str(exc), status=UNVERIFIED)
        return Verdict(False, "confluence", str(exc), report=c.report)
    c.add("confluence", conf.ok, conf.diagnostic,
          status=None if conf.status != "unverified" else UNVERIFIED)
    if bad_rules or leftover or not conf.ok:
        return Verdict(False, "quotient-rules", conf.diagnostic or leftover or bad_rules,
                       report=c.report)

    pi = Hom(H.base, {g: Q.gen(g) for g in H.base.generators}, one=Q.one())
    for g in ideal:
        img = map_leg(map_leg(H.delta(g), 0, pi), 1, pi)
        c.add(f"coproduct[{g}]", not img, f"(pi (x) pi)Delta({g}) = {img}")
        if img:
            return Verdict(False, "coproduct", g, report=c.report)
    if H.has_antipode:
        for g in ideal:
            img = pi(H.antipode(g))
            c.add(f"antipode[{g}]", not img, f"pi(S({g})) = {img}")
            if img:
                return Verdict(False, "antipode", g, report=c.report)

    quotient, _ = quotient_hopf(H, Q, name)
    rep = check_bialgebra(quotient, max_degree, samples, seed, suite="hopf-ideal")
    if quotient.has_antipode:
        rep.extend(check_antipode(quotient, max_degree, samples, seed, suite="hopf-ideal"))
    c.report.extend(rep)
    if not rep.ok:
        return Verdict(False, "quotient-suites", rep.failures()[0].witness, quotient, c.report)
    return Verdict(True, value=quotient, report=c.report)


# --------------------------------------------------------------------------
# opposite structures
# --------------------------------------------------------------------------

def opposite(H: HopfPresentation, op_product: bool = True, op_coproduct: bool = True,
             name: str | None = None) -> HopfPresentation:
    """Opposite product (word reversal everywhere) and/or opposite coproduct (flip)."""
    base = H.base.opposite(name) if op_product else H.base
    delta = {}
    for g in base.generators:
        t = H.delta_images[g]
        if op_product:
            t = TensorElement((base, base), {tuple(w[::-1] for w in ws): c
                                             for ws, c in t.terms.items()})
        else:
            t = TensorElement((base, base), dict(t.terms))
        if op_coproduct:
            t = flip(t)
        delta[g] = t
    anti = None
    if H.has_antipode:
        anti = {g: (base.element({w[::-1]: c for w, c in s.terms.items()}) if op_product
                    else s) for g, s in H.antipode_images.items()}
    return HopfPresentation(base, delta, H.counit_images, anti,
                            H.op_product ^ op_product, H.op_coproduct ^ op_coproduct,
                            name or H.name)


# --------------------------------------------------------------------------
# characters
# --------------------------------------------------------------------------

class IllDefinedCharacterError(ValueError):
    pass


@dataclass(frozen=True)
class Character:
    """An algebra map to the ground field, given on generators."""

    values: tuple  # ((generator, scalar), ...)

    @classmethod
    def of(cls, H: HopfPresentation, values: Mapping[str, object]) -> "Character":
        return cls(tuple((g, H.field(values[g])) for g in H.base.generators))

    def as_dict(self) -> dict:
        return dict(self.values)

    def __getitem__(self, g):
        return self.as_dict()[g]

    def hom(self, H: HopfPresentation) -> Hom:
        return Hom(H.base, self.as_dict(), one=H.field.one)

    def __call__(self, H: HopfPresentation, x: Element):
        return self.hom(H)(x)

    def well_defined(self, H: HopfPresentation) -> bool:
        return hom_well_defined(H.base, self.hom(H)) is None


def counit_character(H: HopfPresentation) -> Character:
    return Character.of(H, H.counit_images)


def char_convolve(H: HopfPresentation, chi1: Character, chi2: Character) -> Character:
    """(χ1 * χ2)(g) = (χ1 ⊗ χ2)(Δ(g)) on each generator."""
    for chi in (chi1, chi2):
        if not chi.well_defined(H):
            raise IllDefinedCharacterError(f"{chi} does not respect the relations")
    h1, h2 = chi1.hom(H), chi2.hom(H)
    out = {}
    for g in H.base.generators:
        s = H.field.zero
        for (w1, w2), c in H.delta_images[g].terms.items():
            s = s + c * h1.on_word(w1) * h2.on_word(w2)
        out[g] = s
    return Character.of(H, out)


def character_inverse(H: HopfPresentation, chi: Character) -> Character:
    """χ ∘ S, the convolution inverse."""
    h = chi.hom(H)
    return Character.of(H, {g: h(H.antipode(H.base.gen(g))) for g in H.base.generators})


# --------------------------------------------------------------------------
# S² and the transpose/inverse discrepancy
# --------------------------------------------------------------------------

def antipode_square(H: HopfPresentation, g: str) -> Element:
    return H.antipode(H.antipode(H.base.gen(g)))


@dataclass
class Remark1Result:
    ut_vt: MultiplicativeMatrix
    vt_ut: MultiplicativeMatrix
    ut_vt_identity: bool
    vt_ut_identity: bool
    transpose_commutes: bool
    report: Report

    @property
    def inequality_witnessed(self) -> bool:
        return not (self.ut_vt_identity and self.vt_ut_identity)


def remark1_matrix_check(H: HopfPresentation, u: MultiplicativeMatrix,
                         v: MultiplicativeMatrix | None = None) -> Remark1Result:
    """Compare (u^t)^-1 candidates: is S(u)^t an inverse of u^t?

    Also certifies S(u^t) = S(u)^t entrywise and uv = vu = 1.
    """
    c = _Cases("remark1")
    Su = u.map(H.antipode)
    if v is None:
        v = Su
    d = (u @ v).identity_defect() or (v @ u).identity_defect()
    c.add("S(u)-inverts-u", d is None and v == Su, d and d[2])
    ut, vt = u.transpose(), v.transpose()
    transpose_ok = ut.map(H.antipode) == Su.transpose()
    c.add("S(u^t)=S(u)^t", transpose_ok, "entrywise mismatch")
    left, right = ut @ vt, vt @ ut
    dl, dr = left.identity_defect(), right.identity_defect()
    # not a failure either way: the report records which case occurs
    c.add("u^t*S(u)^t", True, None)
    c.report.cases[-1].witness = ("identity" if dl is None
                                  else f"entry[{dl[0] + 1},{dl[1] + 1}] = {left[dl[0], dl[1]] }")
    c.add("S(u)^t*u^t", True, None)
    c.report.cases[-1].witness = ("identity" if dr is None
                                  else f"entry[{dr[0] + 1},{dr[1] + 1}] = {right[dr[0], dr[1]]}")
    return Remark1Result(left, right, dl is None, dr is None, transpose_ok, c.report)


# --------------------------------------------------------------------------
# commutativity probes
# --------------------------------------------------------------------------

def commutativity_failure(alg: Presentation, pairs) -> str | None:
    for x, y in pairs:
        if x * y != y * x:
            return f"x = {x}, y = {y}: xy - yx = {x * y - y * x}"
    return None


def cocommutativity_failure(H: HopfPresentation, xs) -> str | None:
    for x in xs:
        t = H.delta(x)
        if flip(t) != t:
            return f"x = {x}: Delta(x) = {t}, flipped {flip(t)}"
    return None


def check_commutative(H: HopfPresentation, samples: int = 100, max_degree: int = 6,
                      seed: int = 42, suite: str = "degenerate") -> Report:
    c = _Cases(suite)
    xs = _samples(H.base, max_degree, samples, seed, "comm-x")
    ys = _samples(H.base, max_degree, samples, seed, "comm-y")
    bad = commutativity_failure(H.base, [(H.base.gen(g), H.base.gen(h))
                                         for g in H.base.generators for h in H.base.generators])
    bad = bad or commutativity_failure(H.base, zip(xs, ys))
    c.add("commutative", bad is None, bad)
    bad = cocommutativity_failure(H, [H.base.gen(g) for g in H.base.generators] + xs)
    c.add("cocommutative", bad is None, bad)
    return c.report


__all__ = [
    "HopfPresentation", "MultiplicativeMatrix", "Verdict", "Character", "Remark1Result",
    "check_bialgebra", "check_antipode", "theorem1_verify", "hopf_ideal_verify", "opposite",
    "char_convolve", "character_inverse", "counit_character", "antipode_square",
    "remark1_matrix_check", "is_multiplicative", "quotient_hopf", "check_commutative",
    "PASS", "FAIL",
]
