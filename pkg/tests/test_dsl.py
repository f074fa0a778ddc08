"""The .hopf language: parsing, validation, printing and evaluation."""
import pytest
from hypothesis import given, settings, strategies as st

from hopfforge.axb import universal_axb
from hopfforge.documents import bundled_document, bundled_text
from hopfforge.dsl import (OPTION_KEYS, SUITES, AlgebraBlock, AxbMarker, Bin, CheckDirective,
                           CoactionBlock, FieldDecl, HopfBlock, IdealBlock, MeasureDecl, Neg,
                           Num, OppositeDecl, ParseError, Pow, Rel, RuleDecl, SpecDocument, Sym,
                           Tensor, _Parser, build, parse_element, parse_expr, parse_spec,
                           parse_tensor, print_expr, print_spec)
from hopfforge.scalar import QQ, QQ_q

HEADER = "field rational;\nalgebra A { gens a, ainv, b; }\n"


def _uncommented(text):
    return "\n".join(l for l in text.splitlines() if not l.startswith("#")) + "\n"


def test_bundled_document_round_trips():
    text = bundled_text()
    assert text == bundled_document()
    doc = parse_spec(text)
    printed = print_spec(doc)
    assert printed == _uncommented(text)
    assert parse_spec(printed) == doc


def test_delta_line_is_the_coproduct_of_b():
    e = parse_expr("b (x) a + 1 (x) b")
    assert e == Bin("+", Tensor((Sym("b"), Sym("a"))), Tensor((Num(1), Sym("b"))))
    U = universal_axb().hopf
    assert parse_tensor("b (x) a + 1 (x) b", U.legs) == U.delta(U.gen("b"))


def test_duplicate_generator_position():
    with pytest.raises(ParseError) as exc:
        parse_spec("field rational;\nalgebra A {\n  gens a, a;\n}\n")
    assert (exc.value.line, exc.value.column) == (3, 11)
    assert "duplicate generator 'a'" in str(exc.value)


def test_unknown_identifier_position():
    with pytest.raises(ParseError) as exc:
        parse_spec(HEADER + "hopf H on A {\n  delta a = a (x) c;\n}\n")
    assert "unknown identifier 'c'" in exc.value.message
    assert exc.value.line == 4


def test_non_prime_modulus():
    with pytest.raises(ParseError) as exc:
        parse_spec("field gf 6;")
    assert "not prime" in exc.value.message


def test_expected_tokens_reported():
    with pytest.raises(ParseError) as exc:
        parse_spec("field rational;\nalgebra A { gens a b; }")
    assert exc.value.expected == ("';'",)
    assert (exc.value.line, exc.value.column) == (2, 20)


@pytest.mark.parametrize("text, message", [
    ("algebra A { gens a; }", "no field declaration"),
    ("field rational; field ratfunc;", "second field declaration"),
    ("field rational; algebra A { gens a; } algebra A { gens b; }", "defined twice"),
    (HEADER + "hopf H on B { }", "unknown algebra 'B'"),
    (HEADER + "hopf H on A { delta a = a (x) a (x) a; }", "3 legs where 2"),
    (HEADER + "hopf H on A { delta a = a (x) a; delta ainv = ainv (x) ainv; "
              "delta b = b (x) 1; counit a = 1; counit ainv = 1; }", "no counit image for 'b'"),
    ("field ratfunc; algebra A { gens q; }", "reserved"),
    ("field rational; algebra A { gens a; rel [1]; }", "outside a rule certificate"),
    ("field rational; check nonsense;", "unknown suite"),
    ("field rational; check all with speed = 3;", "unknown option"),
])
def test_validation_errors(text, message):
    with pytest.raises(ParseError, match=message):
        parse_spec(text)


def test_scalars_and_inverse_powers():
    P = universal_axb(QQ_q).base
    x = parse_element("q^-1*a^-2*b + 3/2", P)
    a, ainv, b = P.gens()
    assert x == (ainv * ainv * b).scale(QQ_q.q ** -1) + QQ_q(3) / 2
    assert parse_element("(q^2 - 1)/(q - 1)", P) == P.scalar(QQ_q.q + 1)


def test_division_by_element_rejected():
    P = universal_axb().base
    with pytest.raises(ParseError, match="non-scalar"):
        parse_element("a/b", P)


def test_build_keeps_structure():
    model = build(parse_spec(bundled_text()))
    assert set(model.hopfs) == {"H", "Hop", "Aq", "Aq2", "A23", "Laurent"}
    assert all(e.hopf is not None for e in model.hopfs.values())
    H = model.hopfs["H"].hopf
    U = universal_axb(QQ_q).hopf
    assert H.structurally_equal(U)


def test_field_override():
    from hopfforge.documents import render_builtin
    doc = parse_spec(render_builtin("axb-universal", QQ_q))
    model = build(doc, QQ)
    assert model.field is QQ
    assert model.hopfs["H"].hopf.structurally_equal(universal_axb(QQ).hopf)
    with pytest.raises(ParseError, match="unknown identifier 'q'"):
        build(parse_spec(bundled_text()), QQ)


# random ASTs ------------------------------------------------------------------------

NAMES = ("a", "b", "x", "ainv", "g2")
names = st.sampled_from(NAMES)
atoms = st.one_of(st.builds(Num, st.integers(0, 20)), st.builds(Sym, names))


def _extend(children):
    return st.one_of(
        st.builds(Neg, children),
        st.builds(Pow, children, st.integers(-3, 4)),
        st.builds(Bin, st.sampled_from("+-*/"), children, children),
    )


scalar_exprs = st.recursive(atoms, _extend, max_leaves=8)
exprs = st.one_of(
    scalar_exprs,
    st.builds(lambda fs: Tensor(tuple(fs)), st.lists(scalar_exprs, min_size=2, max_size=3)),
    st.builds(lambda l, r: Bin("+", Tensor(l), Tensor(r)),
              st.tuples(scalar_exprs, scalar_exprs), st.tuples(scalar_exprs, scalar_exprs)),
)


@settings(max_examples=500)
@given(exprs)
def test_expression_round_trip(e):
    assert parse_expr(print_expr(e)) == e


block_names = st.sampled_from(("A", "H", "K", "alpha", "I1"))
gens = st.lists(names, min_size=1, max_size=3, unique=True).map(tuple)
measures = st.one_of(
    st.none(),
    st.builds(MeasureDecl, st.just("axb"), st.tuples(names, names, names),
              st.sampled_from([None, "mirrored"])),
    st.builds(MeasureDecl, st.just("deglex"), st.just(()), st.sampled_from([None, "reversed"])),
)
certs = st.one_of(st.none(), st.builds(lambda k, e: Bin("*", e, Rel(k)),
                                       st.integers(1, 4), scalar_exprs))
rules = st.builds(RuleDecl, scalar_exprs, scalar_exprs, certs)
images = st.lists(st.tuples(names, exprs), max_size=3, unique_by=lambda t: t[0]).map(tuple)
def markers(plain):
    return st.one_of(
        st.none(),
        st.just(AxbMarker(plain)),
        st.builds(lambda qe, n: AxbMarker("family", qe, n), scalar_exprs, st.integers(-3, 5)),
    )

square = st.integers(1, 2).flatmap(
    lambda k: st.lists(st.lists(scalar_exprs, min_size=k, max_size=k).map(tuple),
                       min_size=k, max_size=k).map(tuple))
statements = st.one_of(
    st.builds(FieldDecl, st.sampled_from(["rational", "ratfunc"])),
    st.builds(FieldDecl, st.just("gf"), st.sampled_from([2, 5, 7, 101])),
    st.builds(AlgebraBlock, block_names, gens, st.lists(scalar_exprs, max_size=2).map(tuple),
              st.lists(rules, max_size=2).map(tuple), measures),
    st.builds(HopfBlock, block_names, block_names, images, images, images,
              st.one_of(st.none(), square.flatmap(
                  lambda u: st.tuples(st.just(u), st.just(u)))), markers("universal")),
    st.builds(OppositeDecl, block_names, block_names,
              *st.sampled_from([(True, True), (True, False), (False, True)]).map(
                  lambda pc: (st.just(pc[0]), st.just(pc[1])))._base if False else
              (st.just(True), st.just(True))),
    st.builds(IdealBlock, block_names, block_names, st.lists(scalar_exprs, max_size=2).map(tuple),
              st.lists(rules, max_size=2).map(tuple), measures, markers("laurent")),
    st.builds(CoactionBlock, block_names, block_names, block_names,
              st.sampled_from(["right", "left"]), images),
    st.builds(CheckDirective,
              st.lists(st.sampled_from(("all",) + SUITES), min_size=1, max_size=3).map(tuple),
              st.lists(st.tuples(st.sampled_from(OPTION_KEYS), st.integers(0, 500)),
                       max_size=2).map(tuple)),
)


@settings(max_examples=300)
@given(st.lists(statements, min_size=1, max_size=5))
def test_document_round_trip(stmts):
    doc = SpecDocument(tuple(stmts))
    text = print_spec(doc)
    again = _Parser(text).document()
    assert again == doc
    assert print_spec(again) == text
