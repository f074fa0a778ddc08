"""Coactions of Hopf algebras on comodule algebras such as k[x].

A right coaction is an algebra map B -> B ⊗ A, a left one B -> A ⊗ B; both are
given on the generators of B and extended multiplicatively.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Mapping

from .hopf import HopfPresentation, Verdict, _Cases, _first_failure
from .ncalg import Element, Hom, Presentation, hom_well_defined, random_element
from .report import Report
from .scalar import Field
from .tensor import TensorElement, map_leg, unit


@dataclass
class ComoduleAlgebra:
    presentation: Presentation
    degree: Callable = len  # degree of a word; additive under concatenation

    def element_degree(self, p: Element) -> int:
        return max((self.degree(w) for w in p.terms), default=-1)


def polynomial_algebra(field: Field, var: str = "x") -> ComoduleAlgebra:
    """k[x]: the free algebra on one generator, which is already commutative."""
    return _polynomial_algebra(field, var)


@lru_cache(maxsize=None)
def _polynomial_algebra(field: Field, var: str) -> ComoduleAlgebra:
    return ComoduleAlgebra(Presentation.free_algebra(field, [var], name=f"k[{var}]"))


class CoactionSpec:
    def __init__(self, hopf: HopfPresentation, comodule: ComoduleAlgebra, side: str,
                 images: Mapping[str, TensorElement], name: str = "alpha"):
        if side not in ("right", "left"):
            raise ValueError(f"side must be 'right' or 'left', not {side!r}")
        self.hopf = hopf
        self.comodule = comodule
        self.side = side
        self.name = name
        B = comodule.presentation
        self.legs = (B, hopf.base) if side == "right" else (hopf.base, B)
        self.images = {g: images[g] for g in B.generators}
        for g, t in self.images.items():
            if len(t.legs) != 2 or any(p is not q for p, q in zip(t.legs, self.legs)):
                raise ValueError(f"image of {g} does not live in the expected tensor product")
        self._hom = Hom(B, self.images, one=unit(self.legs))

    @property
    def B(self) -> Presentation:
        return self.comodule.presentation

    @property
    def b_leg(self) -> int:
        return 0 if self.side == "right" else 1

    def __call__(self, p: Element) -> TensorElement:
        return self._hom(p)


def coact(c: CoactionSpec, p: Element) -> TensorElement:
    return c(p)


def _samples(c: CoactionSpec, max_degree, samples, seed, salt):
    rng = random.Random(f"{seed}:{salt}")
    return [random_element(c.B, rng, max_degree) for _ in range(samples)]


def _composites(c: CoactionSpec, p: Element):
    """The two coassociativity composites and the counit leg of α(p)."""
    H = c.hopf
    t = c(p)
    if c.side == "right":
        return map_leg(t, 1, H.delta), map_leg(t, 0, c), map_leg(t, 1, H.counit).to_element()
    return map_leg(t, 0, H.delta), map_leg(t, 1, c), map_leg(t, 0, H.counit).to_element()


def _axiom_failures(c: CoactionSpec, p: Element):
    lhs, rhs, counit = _composites(c, p)
    coassoc = None if lhs == rhs else f"p = {p}: {lhs} != {rhs}"
    counit_bad = None if counit == p else f"p = {p}: counit leg gives {counit}"
    return coassoc, counit_bad


class _Defects:
    """Per-word defects of the coaction axioms, summed linearly over a sample.

    Both composites and the counit leg are linear in p, so the defect of p is
    the coefficient-weighted sum of the defects of its words.  A degree-D
    sample then costs one evaluation per distinct word rather than one
    evaluation of a 3^D-term tensor per sample.
    """

    def __init__(self, c: CoactionSpec):
        self.c = c
        self.cache: dict = {}

    def _word(self, w):
        hit = self.cache.get(w)
        if hit is None:
            x = Element(self.c.B, {w: self.c.B.field.one})
            lhs, rhs, counit = _composites(self.c, x)
            hit = self.cache[w] = (lhs - rhs, counit - x)
        return hit

    def failures(self, p: Element):
        coassoc, counit = None, self.c.B.zero()
        for w, k in p.terms.items():
            d1, d2 = self._word(w)
            coassoc = d1.scale(k) if coassoc is None else coassoc + d1.scale(k)
            counit = counit + d2.scale(k)
        return (f"p = {p}: composites differ by {coassoc}" if coassoc else None,
                f"p = {p}: counit leg gives {counit + p}" if counit else None)


def _check_coaction(c: CoactionSpec, max_degree, samples, seed, suite) -> Report:
    cases = _Cases(suite)
    v = hom_well_defined(c.B, c._hom)
    cases.add("well-defined", v is None, v)
    for g in c.B.generators:
        coassoc, counit_bad = _axiom_failures(c, c.B.gen(g))
        cases.add(f"coassociativity[{g}]", coassoc is None, coassoc)
        cases.add(f"counit-law[{g}]", counit_bad is None, counit_bad)
    if samples:
        ps = _samples(c, max_degree, samples, seed, "coaction")
        defects = _Defects(c)
        found = [defects.failures(p) for p in ps]
        bad = next((f[0] for f in found if f[0] is not None), None)
        cases.add("coassociativity-random", bad is None, bad)
        bad = next((f[1] for f in found if f[1] is not None), None)
        cases.add("counit-law-random", bad is None, bad)
        # pairs are drawn at half the degree cap so that products stay within it
        half = max(1, max_degree // 2)
        ps2 = _samples(c, half, samples, seed, "coaction-left")
        qs = _samples(c, half, samples, seed, "coaction-pairs")

        def mult(pair):
            p, q = pair
            lhs, rhs = c(p * q), c(p) * c(q)
            return None if lhs == rhs else f"p = {p}, q = {q}: alpha(pq) = {lhs} != {rhs}"
        bad = _first_failure(zip(ps2, qs), mult)
        cases.add("multiplicative-random", bad is None, bad)
    return cases.report


def check_right_coaction(c: CoactionSpec, max_degree: int = 6, samples: int = 100,
                         seed: int = 42, suite: str = "coaction") -> Report:
    """(1⊗Δ)α = (α⊗1)α and (id⊗ε)α = id, plus multiplicativity on samples."""
    if c.side != "right":
        raise ValueError("check_right_coaction needs a right coaction")
    return _check_coaction(c, max_degree, samples, seed, suite)


def check_left_coaction(c: CoactionSpec, max_degree: int = 6, samples: int = 100,
                        seed: int = 42, suite: str = "coaction") -> Report:
    """(Δ⊗id)α = (id⊗α)α and (ε⊗id)α = id, plus multiplicativity on samples."""
    if c.side != "left":
        raise ValueError("check_left_coaction needs a left coaction")
    return _check_coaction(c, max_degree, samples, seed, suite)


def filtration_failure(c: CoactionSpec, p: Element):
    """First term of α(p) whose B-leg degree exceeds deg p."""
    n = c.comodule.element_degree(p)
    for ws, coef in c(p).items():
        w = ws[c.b_leg]
        if c.comodule.degree(w) > n:
            return f"p = {p}: term {coef} at B-word {c.B.word_str(w)} has degree {len(w)} > {n}"
    return None


def check_filtration(c: CoactionSpec, n_max: int = 10, samples: int = 100, seed: int = 42,
                     suite: str = "filtration") -> Report:
    """Every α(p) with deg p <= n stays in B_n ⊗ A, for n <= n_max."""
    cases = _Cases(suite)
    B = c.B
    if len(B.generators) == 1:
        powers = [B.gen(B.generators[0]) ** k for k in range(n_max + 1)]
        bad = _first_failure(powers, lambda p: filtration_failure(c, p))
        cases.add("powers", bad is None, bad)
    else:
        bad = _first_failure([B.gen(g) for g in B.generators], lambda p: filtration_failure(c, p))
        cases.add("generators", bad is None, bad)
    if samples:
        ps = _samples(c, n_max, samples, seed, "filtration")
        bad = _first_failure(ps, lambda p: filtration_failure(c, p))
        cases.add("random", bad is None, bad)
    return cases.report


# --------------------------------------------------------------------------
# the universal property, one instance at a time
# --------------------------------------------------------------------------

def classify_to_universal(H0: HopfPresentation, alpha0: CoactionSpec,
                          ainv0: Element | None = None, samples: int = 50,
                          max_degree: int = 6, seed: int = 42) -> Verdict:
    """Build the morphism from the universal ax+b algebra to H0 that induces ``alpha0``.

    ``value`` of a successful verdict is the homomorphism π: 𝒜 -> H0 with
    α0 = (id ⊗ π) α.
    """
    from .axb import universal_axb, axb_coaction

    c = _Cases("classify")
    B = alpha0.B
    x = B.gen(B.generators[0])
    img = alpha0(x)
    a0, b0 = {}, {}
    stray = None
    for (wb, wa), coef in img.terms.items():
        if wb == (0,):
            a0[wa] = coef
        elif wb == ():
            b0[wa] = coef
        else:
            stray = (wb, wa, coef)
    if len(B.generators) != 1 or alpha0.side != "right" or stray is not None:
        w = stray and f"term {stray[2]} at {B.word_str(stray[0])}"
        c.add("shape", False, w or "not a right coaction on one generator")
        return Verdict(False, "shape", w, report=c.report)
    A0 = H0.base
    a0 = Element(A0, a0)
    b0 = Element(A0, b0)
    c.add("shape", True)

    if ainv0 is None:
        if not H0.has_antipode:
            c.add("invertible", False, "no candidate inverse for a0")
            return Verdict(False, "invertible", a0, report=c.report)
        ainv0 = H0.antipode(a0)
    ok = a0 * ainv0 == 1 and ainv0 * a0 == 1
    c.add("invertible", ok, f"a0 = {a0}, candidate inverse {ainv0}")
    if not ok:
        return Verdict(False, "invertible", a0 * ainv0 - 1, report=c.report)

    U = universal_axb(H0.field).hopf
    A = U.base
    pi = Hom(A, {"a": a0, "ainv": ainv0, "b": b0}, one=A0.one())
    v = hom_well_defined(A, pi)
    c.add("well-defined", v is None, v)
    if v is not None:
        return Verdict(False, "well-defined", v, report=c.report)

    for g in A.generators:
        lhs = map_leg(map_leg(U.delta(A.gen(g)), 0, pi), 1, pi)
        rhs = H0.delta(pi(A.gen(g)))
        ok = lhs == rhs and H0.counit(pi(A.gen(g))) == U.counit(A.gen(g))
        c.add(f"bialgebra-morphism[{g}]", ok, f"{lhs} != {rhs}")
        if not ok:
            return Verdict(False, "bialgebra-morphism", lhs - rhs, report=c.report)

    if H0.has_antipode:
        ok_a = H0.antipode(a0) == ainv0
        c.add("antipode[a0]", ok_a, f"S0(a0) = {H0.antipode(a0)} != {ainv0}")
        expected_b = -(b0 * ainv0)
        ok_b = H0.antipode(b0) == expected_b
        c.add("antipode[b0]", ok_b, f"S0(b0) = {H0.antipode(b0)} != {expected_b}")
        if not (ok_a and ok_b):
            return Verdict(False, "antipode", H0.antipode(b0) - expected_b, report=c.report)

    alpha = axb_coaction(U, alpha0.comodule)
    rng = random.Random(f"{seed}:classify")
    ps = [x] + [random_element(B, rng, max_degree) for _ in range(samples)]

    def intertwines(p):
        lhs = alpha0(p)
        rhs = map_leg(alpha(p), 1, pi)
        return None if lhs == rhs else f"p = {p}: {lhs} != {rhs}"
    bad = _first_failure(ps, intertwines)
    c.add("intertwining", bad is None, bad)
    if bad is not None:
        return Verdict(False, "intertwining", bad, report=c.report)
    return Verdict(True, value=pi, report=c.report)
