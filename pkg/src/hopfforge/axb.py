"""Built-in catalog: the universal quantum ax+b group and its quotients.

Generators are ``a``, ``ainv`` and ``b`` (indices 0, 1, 2).  The quotients
𝒜_{q,n} by the ideal generated by aⁿb - q·baⁿ are oriented so that powers of
``a`` move left past ``b``:

    b·aⁿ   -> q⁻¹·aⁿ·b
    b·ainv -> q·ainvⁿ·b·aⁿ⁻¹

which leaves the normal forms a^j0·b·a^j1···b·a^jm with 0 <= j1..jm < n.
Every rule carries a certificate expressing lhs - rhs through the relations.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .comodule import ComoduleAlgebra, CoactionSpec, polynomial_algebra
from .hopf import (HopfPresentation, MultiplicativeMatrix, Verdict, _Cases,
                   hopf_ideal_verify, theorem1_verify)
from .ncalg import (AxbMeasure, Certificate, Element, Hom, Presentation, hom_well_defined,
                    make_rule)
from .report import Report
from .scalar import QQ, QQ_q, Field, field_of
from .tensor import map_leg, tensor

A, AINV, B = 0, 1, 2
GENERATORS = ("a", "ainv", "b")
MEASURE = AxbMeasure(A, AINV, B)


def apow(k: int) -> tuple:
    """The word for a^k (ainv^|k| when k < 0)."""
    return (A,) * k if k >= 0 else (AINV,) * (-k)


def resolve_q(q, field: Field | None = None):
    """Return (field, q as a scalar).  ``"q"`` selects the generic parameter in Q(q)."""
    if isinstance(q, str):
        if q != "q":
            raise ValueError(f"unknown parameter {q!r}")
        return QQ_q, QQ_q.q
    if field is None:
        field = field_of(q) if not isinstance(q, int) else QQ
    return field, field(q)


@dataclass
class AxbInstance:
    hopf: HopfPresentation
    q: object
    n: int | None
    coaction: CoactionSpec
    u: MultiplicativeMatrix
    v: MultiplicativeMatrix
    degenerate: str | None = None
    requested: tuple = ()
    ideal: tuple = ()
    report: Report = field(default_factory=Report)

    @property
    def base(self) -> Presentation:
        return self.hopf.base

    @property
    def field(self) -> Field:
        return self.hopf.field


def axb_coaction(H: HopfPresentation, comodule: ComoduleAlgebra | None = None,
                 name: str = "alpha") -> CoactionSpec:
    """α(x) = x ⊗ a + 1 ⊗ b."""
    K = comodule or polynomial_algebra(H.field)
    P = K.presentation
    x = P.gen(P.generators[0])
    img = tensor(x, H.gen("a")) + tensor(P.one(), H.gen("b"))
    return CoactionSpec(H, K, "right", {P.generators[0]: img}, name)


def axb_op_coaction(Hop: HopfPresentation, comodule: ComoduleAlgebra | None = None,
                    name: str = "alphaop") -> CoactionSpec:
    """α^op(x) = a ⊗ x + b ⊗ 1, a left coaction."""
    K = comodule or polynomial_algebra(Hop.field)
    P = K.presentation
    x = P.gen(P.generators[0])
    img = tensor(Hop.gen("a"), x) + tensor(Hop.gen("b"), P.one())
    return CoactionSpec(Hop, K, "left", {P.generators[0]: img}, name)


def _matrices(H: HopfPresentation):
    P = H.base
    a, ainv, b = P.gens()
    u = MultiplicativeMatrix([[a, P.zero()], [b, P.one()]])
    v = MultiplicativeMatrix([[ainv, P.zero()], [-(b * ainv), P.one()]])
    return u, v


def _unit_rules(one):
    return [
        make_rule((A, AINV), {(): one}, Certificate(((one, (), 0, ()),))),
        make_rule((AINV, A), {(): one}, Certificate(((one, (), 1, ()),))),
    ]


def universal_axb(field: Field = QQ) -> AxbInstance:
    """𝒜: a, ainv, b with a·ainv = 1 = ainv·a and nothing else."""
    return _universal_axb(field)


@lru_cache(maxsize=None)
def _universal_axb(field: Field) -> AxbInstance:
    one = field.one
    free = Presentation.free_algebra(field, GENERATORS, name="A")
    a, ainv, b = free.gens()
    P = free.quotient([a * ainv - 1, ainv * a - 1], _unit_rules(one), MEASURE, name="A")
    a, ainv, b = P.gens()
    H = HopfPresentation(
        P,
        delta={"a": tensor(a, a), "ainv": tensor(ainv, ainv),
               "b": tensor(b, a) + tensor(P.one(), b)},
        counit={"a": 1, "ainv": 1, "b": 0},
        antipode={"a": ainv, "ainv": a, "b": -(b * ainv)},
        name="axb-universal",
    )
    u, v = _matrices(H)
    return AxbInstance(H, None, None, axb_coaction(H), u, v)


def _quotient_rules(field: Field, q, n: int):
    """Rewrite system of 𝒜_{q,n} for q != 0, n >= 1; relation 2 is aⁿb - q·baⁿ."""
    one = field.one
    qi = q ** -1
    rules = _unit_rules(one)
    an = apow(n)
    rules.append(make_rule((B,) + an, {an + (B,): qi},
                           Certificate(((-qi, (), 2, ()),))))
    target = apow(-n) + (B,) + apow(n - 1)
    cert = [(one, apow(-n), 2, (AINV,))]
    cert += [(-one, apow(-j), 1, apow(j) + (B, AINV)) for j in range(n)]
    cert.append((q, target, 0, ()))
    rules.append(make_rule((B, AINV), {target: q}, Certificate(tuple(cert))))
    return rules


def _laurent_rules(field: Field, q, n: int):
    """Rules a·ainv -> 1, ainv·a -> 1, b -> 0; the certificate depends on how
    the ideal forces b = 0."""
    one = field.one
    rules = _unit_rules(one)
    if n == 0:
        # relation is (1 - q)·b
        cert = ((1 / (one - q), (), 2, ()),)
    elif n > 0:
        # relation is aⁿb (q = 0): b = ainvⁿ·(aⁿb) - Σ ainv^j (ainv·a - 1) a^j b
        cert = ((one, apow(-n), 2, ()),) + tuple((-one, apow(-j), 1, apow(j) + (B,))
                                                 for j in range(n))
    else:
        k = -n
        cert = ((one, apow(k), 2, ()),) + tuple((-one, apow(j), 0, apow(-j) + (B,))
                                                for j in range(k))
    rules.append(make_rule((B,), {}, Certificate(cert)))
    return rules


def defining_relation(P: Presentation, q, n: int) -> Element:
    """aⁿ·b - q·b·aⁿ in P (negative n uses ainv)."""
    return P.word(apow(n) + (B,)) - P.word((B,) + apow(n)).scale(q)


def _build(field: Field, q, n: int, rules, name: str, degenerate=None, requested=()):
    U = universal_axb(field)
    g = defining_relation(U.base, q, n)
    verdict = hopf_ideal_verify(U.hopf, [g], rules, MEASURE, name=name, samples=0)
    if not verdict.ok:
        raise RuntimeError(f"catalog construction of {name} failed at {verdict.stage}: "
                           f"{verdict.witness}")
    H = verdict.value
    u, v = _matrices(H)
    return AxbInstance(H, q, n, axb_coaction(H), u, v, degenerate, requested, (g,),
                       verdict.report)


@lru_cache(maxsize=None)
def _axb_qn(field: Field, q, n: int) -> AxbInstance:
    requested = (q, n)
    if n == 0 and q == 1:
        inst = universal_axb(field)
        return AxbInstance(inst.hopf, q, n, inst.coaction, inst.u, inst.v,
                           "A_{1,0} = A (relation vanishes)", requested)
    if n == 0 or not q:
        return _build(field, q, n, _laurent_rules(field, q, n), "laurent",
                      "k[a, a^-1]", requested)
    if n < 0:
        inst = _axb_qn(field, q ** -1, -n)
        return AxbInstance(inst.hopf, inst.q, inst.n, inst.coaction, inst.u, inst.v,
                           f"normalized from n = {n}", requested, inst.ideal, inst.report)
    name = "axb-q" if n == 1 else f"axb-q{n}"
    return _build(field, q, n, _quotient_rules(field, q, n), name, None, requested)


def axb_qn(q, n: int, field: Field | None = None) -> AxbInstance:
    """𝒜_{q,n}.  n < 0 is normalized to 𝒜_{q⁻¹,-n}; n = 0 or q = 0 give k[a, a⁻¹]."""
    field, q = resolve_q(q, field)
    return _axb_qn(field, q, n)


def axb_q(q, field: Field | None = None) -> AxbInstance:
    return axb_qn(q, 1, field)


def laurent_hopf(field: Field = QQ) -> AxbInstance:
    """k[a, a⁻¹] as the quotient of 𝒜 by the Hopf ideal generated by b."""
    return _laurent_hopf(field)


@lru_cache(maxsize=None)
def _laurent_hopf(field: Field) -> AxbInstance:
    U = universal_axb(field)
    one = field.one
    rules = _unit_rules(one) + [make_rule((B,), {}, Certificate(((one, (), 2, ()),)))]
    b = U.base.gen("b")
    verdict = hopf_ideal_verify(U.hopf, [b], rules, MEASURE, name="laurent", samples=0)
    if not verdict.ok:
        raise RuntimeError(f"laurent construction failed: {verdict.stage}")
    H = verdict.value
    u, v = _matrices(H)
    return AxbInstance(H, None, None, axb_coaction(H), u, v, "k[a, a^-1]", (), (b,),
                       verdict.report)


def theorem1_inputs(inst: AxbInstance):
    """(bialgebra, u, v, extra) for the antipode-existence check.

    ``ainv`` is not an entry of u, so its image is supplied: S must invert
    S(a) = ainv, which forces S(ainv) = a.
    """
    return inst.hopf.without_antipode(), inst.u, inst.v, {"ainv": inst.base.gen("a")}


# --------------------------------------------------------------------------
# identities in the universal algebra
# --------------------------------------------------------------------------

def verify_theorem1(inst: AxbInstance, max_degree: int = 6, samples: int = 100,
                    seed: int = 42) -> Verdict:
    H, u, v, extra = theorem1_inputs(inst)
    return theorem1_verify(H, u, v, extra, max_degree, samples, seed)


def section4_identities(q, n: int, field: Field | None = None) -> Report:
    """Coproduct, counit and antipode of g = aⁿb - q·baⁿ, computed in 𝒜.

    Checks Δ(g) = g⊗aⁿ⁺¹ + aⁿ⊗g, ε(g) = 0 and S(g) = a⁻ⁿ(-aⁿb + q·baⁿ)a⁻ⁿ⁻¹
    as equalities of normal forms, then that S(g) vanishes in 𝒜_{q,n}.
    """
    if n < 1:
        raise ValueError("section4_identities needs n >= 1")
    field, q = resolve_q(q, field)
    U = universal_axb(field).hopf
    P = U.base
    c = _Cases("section4")
    g = defining_relation(P, q, n)
    tag = f"n={n},q={q}"

    lhs = U.delta(g)
    rhs = tensor(g, P.word(apow(n + 1))) + tensor(P.word(apow(n)), g)
    c.add(f"coproduct[{tag}]", lhs == rhs, f"{lhs} != {rhs}")

    e = U.counit(g)
    c.add(f"counit[{tag}]", not e, f"eps(g) = {e}")

    s = U.antipode(g)
    expected = P.word(apow(-n)) * (-g) * P.word(apow(-n - 1))
    c.add(f"antipode[{tag}]", s == expected, f"S(g) = {s} != {expected}")

    Q = axb_qn(q, n, field).base
    pi = Hom(P, {x: Q.gen(x) for x in GENERATORS}, one=Q.one())
    img = pi(s)
    c.add(f"antipode-in-ideal[{tag}]", not img, f"pi(S(g)) = {img}")

    # the variant with right factor a^(n-1) differs from S(g) in A but not in the quotient
    variant = P.word(apow(-n)) * (-g) * P.word(apow(n - 1))
    img = pi(variant)
    c.add(f"right-factor-variant-in-ideal[{tag}]", not img, f"pi(variant) = {img}")
    return c.report


def antipode_variant(q, n: int, field: Field | None = None):
    """a⁻ⁿ(-aⁿb + q·baⁿ)aⁿ⁻¹ next to S(g) in 𝒜, and its image in 𝒜_{q,n}."""
    field, q = resolve_q(q, field)
    U = universal_axb(field).hopf
    P = U.base
    g = defining_relation(P, q, n)
    variant = P.word(apow(-n)) * (-g) * P.word(apow(n - 1))
    Q = axb_qn(q, n, field).base
    pi = Hom(P, {x: Q.gen(x) for x in GENERATORS}, one=Q.one())
    return U.antipode(g), variant, pi(variant)


# --------------------------------------------------------------------------
# morphisms between members of the family
# --------------------------------------------------------------------------

def hopf_surjection(src: HopfPresentation, tgt: HopfPresentation, suite: str = "lattice",
                    tag: str = "") -> Verdict:
    """The generator-identity map src -> tgt: well defined and a Hopf map on generators."""
    c = _Cases(suite)
    pi = Hom(src.base, {x: tgt.base.gen(x) for x in src.base.generators}, one=tgt.base.one())
    v = hom_well_defined(src.base, pi)
    c.add(f"well-defined{tag}", v is None, v)
    if v is not None:
        return Verdict(False, "well-defined", v.image, report=c.report)
    for x in src.base.generators:
        gx = src.base.gen(x)
        lhs = map_leg(map_leg(src.delta(gx), 0, pi), 1, pi)
        rhs = tgt.delta(pi(gx))
        ok = (lhs == rhs and src.counit(gx) == tgt.counit(pi(gx))
              and (not src.has_antipode or pi(src.antipode(gx)) == tgt.antipode(pi(gx))))
        c.add(f"hopf-morphism[{x}]{tag}", ok, f"{lhs} vs {rhs}")
        if not ok:
            return Verdict(False, "hopf-morphism", x, report=c.report)
    return Verdict(True, value=pi, report=c.report)


def subgroup_morphism(q, n: int, m: int, field: Field | None = None) -> Verdict:
    """a^{mn}b - q^m·ba^{mn} vanishes in 𝒜_{q,n}, so 𝒜_{q^m,mn} maps onto 𝒜_{q,n}."""
    if m == 0 or n < 1:
        raise ValueError("subgroup_morphism needs m != 0 and n >= 1")
    field, q = resolve_q(q, field)
    tgt = axb_qn(q, n, field)
    tag = f"[n={n},m={m}]"
    c = _Cases("lattice")
    w = defining_relation(tgt.base, q ** m, m * n)
    c.add(f"relation-vanishes{tag}", not w, w)
    if w:
        return Verdict(False, "relation", w, report=c.report)
    src = axb_qn(q ** m, m * n, field)
    verdict = hopf_surjection(src.hopf, tgt.hopf, tag=tag)
    c.report.extend(verdict.report)
    verdict.report = c.report
    return verdict


# --------------------------------------------------------------------------
# normal-form shape
# --------------------------------------------------------------------------

def normal_form_shape_ok(w: tuple, n: int) -> bool:
    """w = a^j0 · b a^j1 ··· b a^jm with 0 <= j1..jm < n (j0 any integer)."""
    i = 0
    if w[:1] == (AINV,):
        while i < len(w) and w[i] == AINV:
            i += 1
    else:
        while i < len(w) and w[i] == A:
            i += 1
    while i < len(w):
        if w[i] != B:
            return False
        i += 1
        j = 0
        while i < len(w) and w[i] == A:
            i += 1
            j += 1
        if j >= n:
            return False
    return True


def affine_character(H: HopfPresentation, alpha, beta):
    """The k-point x -> alpha·x + beta of 𝒜 (alpha != 0)."""
    from .hopf import Character
    alpha = H.field(alpha)
    return Character.of(H, {"a": alpha, "ainv": 1 / alpha if not hasattr(alpha, "inverse")
                            else alpha.inverse(), "b": beta})


CATALOG = ("axb-universal", "axb-q", "axb-qn", "laurent")
