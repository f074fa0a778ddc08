"""The ``.hopf`` presentation language: tokenizer, parser, printer and builder.

A document is a sequence of statements::

    field ratfunc;                      # or: field rational;  field gf 5;
    algebra A {
      gens a, ainv, b;
      rel a*ainv - 1;
      rule a*ainv -> 1 by [1];          # certificate: lhs - rhs in terms of rel [i]
      measure axb(a, ainv, b);          # or: deglex;  axb(...) mirrored;  deglex reversed;
    }
    hopf H on A {
      delta b = b (x) a + 1 (x) b;
      counit b = 0;
      antipode b = -b*ainv;
      matrix [a, 0; b, 1] inverse [ainv, 0; -b*ainv, 1];
      axb universal;
    }
    hopf Hop = opposite H;              # optional qualifier: product | coproduct
    ideal Aq of H { gen a*b - q*b*a; rule b*a -> q^-1*a*b by -q^-1*[3]; axb q = q, n = 1; }
    coaction alpha on kx { hopf H; side right; alpha x = x (x) a + 1 (x) b; }
    check all with samples = 100, seed = 42;

``(x)`` is always the tensor separator; ``#`` starts a comment.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Mapping

from .hopf import HopfPresentation, MultiplicativeMatrix, hopf_ideal_verify, opposite
from .comodule import CoactionSpec, ComoduleAlgebra
from .ncalg import (AxbMeasure, Certificate, DegLex, DegLexOpposite, Element, Hom,
                    Presentation, make_rule)
from .scalar import QQ, QQ_q, GF, Field, is_prime
from .tensor import TensorElement, tensor

SUITES = ("bialgebra", "antipode", "theorem1", "hopf-ideal", "coaction", "filtration",
          "section4", "lattice", "oracle", "remark1", "confluence", "universality",
          "degenerate")
OPTION_KEYS = ("samples", "max_degree", "seed", "fuel", "n_max")


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0, expected=()):
        self.message = message
        self.line, self.column = line, column
        self.expected = tuple(expected)
        where = f"line {line}, column {column}: " if line else ""
        tail = f" (expected {', '.join(self.expected)})" if self.expected else ""
        super().__init__(where + message + tail)


class BuildError(ValueError):
    pass


# --------------------------------------------------------------------------
# tokens
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Token:
    kind: str  # NUM, IDENT, TENSOR, ARROW, OP, EOF
    text: str
    line: int
    col: int


_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r]+) | (?P<nl>\n) | (?P<comment>\#[^\n]*)
  | (?P<TENSOR>\(x\)) | (?P<ARROW>->) | (?P<NUM>\d+)
  | (?P<IDENT>[A-Za-z_][A-Za-z0-9_]*) | (?P<OP>[-+*/^()\[\]{};,=:])
""", re.VERBOSE)


def tokenize(text: str) -> list[Token]:
    out, line, start, pos = [], 1, 0, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            start = m.end()
        elif kind not in ("ws", "comment"):
            out.append(Token(kind, m.group(), line, pos - start + 1))
        pos = m.end()
    out.append(Token("EOF", "", line, pos - start + 1))
    return out


# --------------------------------------------------------------------------
# expression AST
# --------------------------------------------------------------------------

def _pos():
    return field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Num:
    value: int
    pos: tuple = _pos()


@dataclass(frozen=True)
class Sym:
    name: str
    pos: tuple = _pos()


@dataclass(frozen=True)
class Rel:
    """``[i]``: the i-th relation (1-based), only inside a rule certificate."""
    index: int
    pos: tuple = _pos()


@dataclass(frozen=True)
class Neg:
    arg: object
    pos: tuple = _pos()


@dataclass(frozen=True)
class Pow:
    base: object
    exp: int
    pos: tuple = _pos()


@dataclass(frozen=True)
class Bin:
    op: str  # + - * /
    left: object
    right: object
    pos: tuple = _pos()


@dataclass(frozen=True)
class Tensor:
    factors: tuple
    pos: tuple = _pos()


_PREC = {"+": 1, "-": 1, "*": 3, "/": 3}


def _prec(e) -> int:
    if isinstance(e, Bin):
        return _PREC[e.op]
    if isinstance(e, Neg):
        return 1
    if isinstance(e, Tensor):
        return 2
    if isinstance(e, Pow):
        return 4
    return 5


def print_expr(e, need: int = 0) -> str:
    if isinstance(e, Num):
        s = str(e.value)
    elif isinstance(e, Sym):
        s = e.name
    elif isinstance(e, Rel):
        s = f"[{e.index}]"
    elif isinstance(e, Neg):
        s = "-" + print_expr(e.arg, 2)
    elif isinstance(e, Pow):
        s = f"{print_expr(e.base, 5)}^{e.exp}"
    elif isinstance(e, Tensor):
        s = " (x) ".join(print_expr(f, 3) for f in e.factors)
    elif isinstance(e, Bin):
        p = _PREC[e.op]
        sep = f" {e.op} " if p == 1 else e.op
        s = print_expr(e.left, p) + sep + print_expr(e.right, p + 1)
    else:
        raise TypeError(f"not an expression node: {e!r}")
    return f"({s})" if _prec(e) < need else s


def expr_symbols(e):
    """All Sym nodes of an expression, left to right."""
    if isinstance(e, Sym):
        yield e
    elif isinstance(e, Neg):
        yield from expr_symbols(e.arg)
    elif isinstance(e, Pow):
        yield from expr_symbols(e.base)
    elif isinstance(e, Bin):
        yield from expr_symbols(e.left)
        yield from expr_symbols(e.right)
    elif isinstance(e, Tensor):
        for f in e.factors:
            yield from expr_symbols(f)


def expr_rels(e):
    if isinstance(e, Rel):
        yield e
    elif isinstance(e, Neg):
        yield from expr_rels(e.arg)
    elif isinstance(e, Pow):
        yield from expr_rels(e.base)
    elif isinstance(e, Bin):
        yield from expr_rels(e.left)
        yield from expr_rels(e.right)
    elif isinstance(e, Tensor):
        for f in e.factors:
            yield from expr_rels(f)


# --------------------------------------------------------------------------
# statement AST
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class FieldDecl:
    kind: str  # rational | ratfunc | gf
    p: int | None = None
    pos: tuple = _pos()


@dataclass(frozen=True)
class MeasureDecl:
    kind: str  # axb | deglex
    args: tuple = ()
    modifier: str | None = None  # mirrored (axb) | reversed (deglex)
    pos: tuple = _pos()


@dataclass(frozen=True)
class RuleDecl:
    lhs: object
    rhs: object
    certificate: object = None
    pos: tuple = _pos()


@dataclass(frozen=True)
class AlgebraBlock:
    name: str
    gens: tuple
    rels: tuple = ()
    rules: tuple = ()
    measure: MeasureDecl | None = None
    pos: tuple = _pos()


@dataclass(frozen=True)
class AxbMarker:
    kind: str  # universal | laurent | family
    q: object = None
    n: int | None = None
    pos: tuple = _pos()


@dataclass(frozen=True)
class HopfBlock:
    name: str
    algebra: str
    delta: tuple = ()  # ((gen, expr), ...)
    counit: tuple = ()
    antipode: tuple = ()
    matrix: tuple | None = None  # (rows of u, rows of v)
    axb: AxbMarker | None = None
    pos: tuple = _pos()


@dataclass(frozen=True)
class OppositeDecl:
    name: str
    of: str
    product: bool = True
    coproduct: bool = True
    pos: tuple = _pos()


@dataclass(frozen=True)
class IdealBlock:
    name: str
    of: str
    gens: tuple = ()
    rules: tuple = ()
    measure: MeasureDecl | None = None
    axb: AxbMarker | None = None
    pos: tuple = _pos()


@dataclass(frozen=True)
class CoactionBlock:
    name: str
    algebra: str
    hopf: str
    side: str
    images: tuple = ()  # ((gen, expr), ...)
    pos: tuple = _pos()


@dataclass(frozen=True)
class CheckDirective:
    suites: tuple
    options: tuple = ()  # ((key, int), ...)
    pos: tuple = _pos()


@dataclass(frozen=True)
class SpecDocument:
    statements: tuple

    @property
    def field_decl(self) -> FieldDecl:
        return next(s for s in self.statements if isinstance(s, FieldDecl))

    def blocks(self, kind) -> list:
        return [s for s in self.statements if isinstance(s, kind)]

    def named(self) -> dict:
        return {s.name: s for s in self.statements if hasattr(s, "name")}


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------

class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    # token helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def at(self, *texts) -> bool:
        t = self.tok
        return t.kind in ("OP", "ARROW", "TENSOR", "IDENT") and t.text in texts

    def error(self, msg, expected=(), tok=None):
        t = tok or self.tok
        raise ParseError(msg, t.line, t.col, expected)

    def next(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def expect(self, text: str) -> Token:
        if not self.at(text):
            found = self.tok.text or "end of input"
            self.error(f"unexpected {found!r}", (repr(text),))
        return self.next()

    def ident(self, what="identifier") -> Token:
        if self.tok.kind != "IDENT":
            found = self.tok.text or "end of input"
            self.error(f"unexpected {found!r}", (what,))
        return self.next()

    def number(self) -> int:
        if self.tok.kind != "NUM":
            found = self.tok.text or "end of input"
            self.error(f"unexpected {found!r}", ("integer",))
        return int(self.next().text)

    def keyword(self, *words) -> str:
        if self.tok.kind != "IDENT" or self.tok.text not in words:
            found = self.tok.text or "end of input"
            self.error(f"unexpected {found!r}", words)
        return self.next().text

    @staticmethod
    def where(t: Token) -> tuple:
        return (t.line, t.col)

    # expressions
    def expr(self):
        t = self.tok
        if self.at("-"):
            self.next()
            e = Neg(self.tterm(), pos=self.where(t))
        else:
            e = self.tterm()
        while self.at("+", "-"):
            op = self.next()
            e = Bin(op.text, e, self.tterm(), pos=self.where(op))
        return e

    def tterm(self):
        t = self.tok
        fs = [self.term()]
        while self.tok.kind == "TENSOR":
            self.next()
            fs.append(self.term())
        return fs[0] if len(fs) == 1 else Tensor(tuple(fs), pos=self.where(t))

    def term(self):
        e = self.factor()
        while self.at("*", "/"):
            op = self.next()
            e = Bin(op.text, e, self.factor(), pos=self.where(op))
        return e

    def factor(self):
        e = self.atom()
        if self.at("^"):
            t = self.next()
            sign = 1
            if self.at("-"):
                self.next()
                sign = -1
            e = Pow(e, sign * self.number(), pos=self.where(t))
        return e

    def atom(self):
        t = self.tok
        if t.kind == "NUM":
            self.next()
            return Num(int(t.text), pos=self.where(t))
        if t.kind == "IDENT":
            self.next()
            return Sym(t.text, pos=self.where(t))
        if self.at("["):
            self.next()
            k = self.number()
            self.expect("]")
            return Rel(k, pos=self.where(t))
        if self.at("("):
            self.next()
            e = self.expr()
            self.expect(")")
            return e
        found = t.text or "end of input"
        self.error(f"unexpected {found!r}", ("integer", "identifier", "'('", "'['"))

    # statements
    def document(self) -> SpecDocument:
        stmts = []
        while self.tok.kind != "EOF":
            stmts.append(self.statement())
        return SpecDocument(tuple(stmts))

    def statement(self):
        t = self.tok
        kw = self.keyword("field", "algebra", "hopf", "ideal", "coaction", "check")
        return getattr(self, f"st_{kw}")(t)

    def st_field(self, t):
        kind = self.keyword("rational", "ratfunc", "gf")
        p = None
        if kind == "gf":
            pt = self.tok
            p = self.number()
            if not is_prime(p):
                self.error(f"modulus {p} is not prime", tok=pt)
        self.expect(";")
        return FieldDecl(kind, p, pos=self.where(t))

    def measure(self, t):
        kind = self.keyword("axb", "deglex")
        args, mod = (), None
        if kind == "axb":
            self.expect("(")
            names = [self.ident("generator").text]
            for _ in range(2):
                self.expect(",")
                names.append(self.ident("generator").text)
            self.expect(")")
            args = tuple(names)
            if self.at("mirrored"):
                mod = self.next().text
        elif self.at("reversed"):
            mod = self.next().text
        self.expect(";")
        return MeasureDecl(kind, args, mod, pos=self.where(t))

    def rule(self, t):
        lhs = self.expr()
        self.expect("->")
        rhs = self.expr()
        cert = None
        if self.at("by"):
            self.next()
            cert = self.expr()
        self.expect(";")
        return RuleDecl(lhs, rhs, cert, pos=self.where(t))

    def st_algebra(self, t):
        name = self.ident("algebra name").text
        self.expect("{")
        gens, rels, rules, measure = None, [], [], None
        while not self.at("}"):
            it = self.tok
            kw = self.keyword("gens", "rel", "rule", "measure")
            if kw == "gens":
                if gens is not None:
                    self.error("second gens declaration", tok=it)
                names = [self.ident("generator")]
                while self.at(","):
                    self.next()
                    names.append(self.ident("generator"))
                seen = set()
                for nt in names:
                    if nt.text in seen:
                        raise ParseError(f"duplicate generator {nt.text!r}", nt.line, nt.col)
                    seen.add(nt.text)
                gens = tuple(nt.text for nt in names)
                self.expect(";")
            elif kw == "rel":
                rels.append(self.expr())
                self.expect(";")
            elif kw == "rule":
                rules.append(self.rule(it))
            else:
                measure = self.measure(it)
        self.expect("}")
        if gens is None:
            self.error(f"algebra {name} declares no generators", ("gens",), tok=t)
        return AlgebraBlock(name, gens, tuple(rels), tuple(rules), measure, pos=self.where(t))

    def axb_marker(self, t, allowed):
        kind = self.keyword(*allowed)
        if kind in ("universal", "laurent"):
            self.expect(";")
            return AxbMarker(kind, pos=self.where(t))
        self.expect("=")
        qexpr = self.expr()
        self.expect(",")
        self.keyword("n")
        self.expect("=")
        sign = 1
        if self.at("-"):
            self.next()
            sign = -1
        n = sign * self.number()
        self.expect(";")
        return AxbMarker("family", qexpr, n, pos=self.where(t))

    def matrix(self):
        self.expect("[")
        rows, row = [], [self.expr()]
        while not self.at("]"):
            if self.at(","):
                self.next()
                row.append(self.expr())
            else:
                self.expect(";")
                rows.append(tuple(row))
                row = [self.expr()]
        self.expect("]")
        rows.append(tuple(row))
        if any(len(r) != len(rows) for r in rows):
            self.error("matrix must be square")
        return tuple(rows)

    def st_hopf(self, t):
        name = self.ident("hopf name").text
        if self.at("="):
            self.next()
            self.keyword("opposite")
            of = self.ident("hopf name").text
            product = coproduct = True
            if self.at("product"):
                self.next()
                coproduct = False
            elif self.at("coproduct"):
                self.next()
                product = False
            self.expect(";")
            return OppositeDecl(name, of, product, coproduct, pos=self.where(t))
        self.keyword("on")
        alg = self.ident("algebra name").text
        self.expect("{")
        maps = {"delta": [], "counit": [], "antipode": []}
        matrix, marker = None, None
        while not self.at("}"):
            it = self.tok
            kw = self.keyword("delta", "counit", "antipode", "matrix", "axb")
            if kw in maps:
                g = self.ident("generator")
                if any(x == g.text for x, _ in maps[kw]):
                    raise ParseError(f"second {kw} image for {g.text!r}", g.line, g.col)
                self.expect("=")
                maps[kw].append((g.text, self.expr()))
                self.expect(";")
            elif kw == "matrix":
                u = self.matrix()
                self.keyword("inverse")
                v = self.matrix()
                if len(u) != len(v):
                    self.error("matrix and inverse differ in size", tok=it)
                self.expect(";")
                matrix = (u, v)
            else:
                marker = self.axb_marker(it, ("universal", "q"))
        self.expect("}")
        return HopfBlock(name, alg, tuple(maps["delta"]), tuple(maps["counit"]),
                         tuple(maps["antipode"]), matrix, marker, pos=self.where(t))

    def st_ideal(self, t):
        name = self.ident("ideal name").text
        self.keyword("of")
        of = self.ident("hopf name").text
        self.expect("{")
        gens, rules, measure, marker = [], [], None, None
        while not self.at("}"):
            it = self.tok
            kw = self.keyword("gen", "rule", "measure", "axb")
            if kw == "gen":
                gens.append(self.expr())
                self.expect(";")
            elif kw == "rule":
                rules.append(self.rule(it))
            elif kw == "measure":
                measure = self.measure(it)
            else:
                marker = self.axb_marker(it, ("laurent", "q"))
        self.expect("}")
        return IdealBlock(name, of, tuple(gens), tuple(rules), measure, marker,
                          pos=self.where(t))

    def st_coaction(self, t):
        nt = self.ident("coaction name")
        name = nt.text
        self.keyword("on")
        alg = self.ident("algebra name").text
        self.expect("{")
        hopf, side, images = None, None, []
        while not self.at("}"):
            it = self.tok
            if self.at("hopf"):
                self.next()
                hopf = self.ident("hopf name").text
                self.expect(";")
            elif self.at("side"):
                self.next()
                side = self.keyword("right", "left")
                self.expect(";")
            elif self.at(name):
                self.next()
                g = self.ident("generator").text
                self.expect("=")
                images.append((g, self.expr()))
                self.expect(";")
            else:
                self.error(f"unexpected {it.text!r}", ("hopf", "side", name))
        self.expect("}")
        if hopf is None:
            self.error(f"coaction {name} names no hopf algebra", ("hopf",), tok=nt)
        return CoactionBlock(name, alg, hopf, side or "right", tuple(images),
                             pos=self.where(t))

    def suite_name(self) -> str:
        parts = [self.ident("suite").text]
        while self.at("-"):
            self.next()
            parts.append(self.ident("suite").text)
        return "-".join(parts)

    def st_check(self, t):
        suites = []
        st = self.tok
        suites.append(self.suite_name())
        while self.at(","):
            self.next()
            st = self.tok
            suites.append(self.suite_name())
        for s in suites:
            if s != "all" and s not in SUITES:
                raise ParseError(f"unknown suite {s!r}", st.line, st.col, ("all",) + SUITES)
        options = []
        if self.at("with"):
            self.next()
            while True:
                kt = self.tok
                key = self.ident("option").text
                if key not in OPTION_KEYS:
                    raise ParseError(f"unknown option {key!r}", kt.line, kt.col, OPTION_KEYS)
                self.expect("=")
                options.append((key, self.number()))
                if not self.at(","):
                    break
                self.next()
        self.expect(";")
        return CheckDirective(tuple(suites), tuple(options), pos=self.where(t))


def parse_expr(text: str):
    p = _Parser(text)
    e = p.expr()
    if p.tok.kind != "EOF":
        p.error(f"unexpected {p.tok.text!r}", ("end of input",))
    return e


def parse_spec(text: str) -> SpecDocument:
    """Parse and validate a document; all names must resolve."""
    doc = _Parser(text).document()
    validate(doc)
    return doc


# --------------------------------------------------------------------------
# validation
# --------------------------------------------------------------------------

def _fail(msg, node):
    line, col = node.pos or (0, 0)
    raise ParseError(msg, line, col)


def _check_syms(e, allowed: set, has_q: bool, rels_ok: bool = False):
    for s in expr_symbols(e):
        if s.name not in allowed and not (has_q and s.name == "q"):
            _fail(f"unknown identifier {s.name!r}", s)
    if not rels_ok:
        for r in expr_rels(e):
            _fail("relation reference outside a rule certificate", r)


def _tensor_terms(e):
    """The additive tensor terms of an expression (through + - and unary minus)."""
    if isinstance(e, Bin) and e.op in "+-":
        yield from _tensor_terms(e.left)
        yield from _tensor_terms(e.right)
    elif isinstance(e, Neg):
        yield from _tensor_terms(e.arg)
    else:
        yield e


def _check_tensor(e, leg_gens: list, has_q: bool):
    for t in _tensor_terms(e):
        if isinstance(t, Tensor):
            if len(t.factors) != len(leg_gens):
                _fail(f"tensor with {len(t.factors)} legs where {len(leg_gens)} are expected", t)
            for f, gens in zip(t.factors, leg_gens):
                _check_syms(f, gens, has_q)
        else:
            _check_syms(t, set().union(*leg_gens), has_q)


def validate(doc: SpecDocument) -> None:
    fields = doc.blocks(FieldDecl)
    if not fields:
        raise ParseError("document has no field declaration", 1, 1, ("field",))
    if len(fields) > 1:
        _fail("second field declaration", fields[1])
    has_q = fields[0].kind == "ratfunc"
    algebras: dict = {}
    hopfs: dict = {}  # name -> generator set
    names: set = set()
    for s in doc.statements:
        if isinstance(s, (FieldDecl, CheckDirective)):
            continue
        if s.name in names:
            _fail(f"name {s.name!r} defined twice", s)
        names.add(s.name)
        if isinstance(s, AlgebraBlock):
            if has_q and "q" in s.gens:
                _fail("generator name 'q' is reserved for the field parameter", s)
            gens = set(s.gens)
            for r in s.rels:
                _check_syms(r, gens, has_q)
            for r in s.rules:
                _check_syms(r.lhs, gens, has_q)
                _check_syms(r.rhs, gens, has_q)
                if r.certificate is not None:
                    _check_syms(r.certificate, gens, has_q, rels_ok=True)
            _check_measure(s.measure, gens)
            algebras[s.name] = s.gens
        elif isinstance(s, HopfBlock):
            if s.algebra not in algebras:
                _fail(f"unknown algebra {s.algebra!r}", s)
            gl = algebras[s.algebra]
            gens = set(gl)
            for kind, items in (("delta", s.delta), ("counit", s.counit),
                                ("antipode", s.antipode)):
                for g, e in items:
                    if g not in gens:
                        _fail(f"{kind} image for unknown generator {g!r}", e)
                    if kind == "delta":
                        _check_tensor(e, [gens, gens], has_q)
                    else:
                        _check_syms(e, gens, has_q)
            for kind, items in (("delta", s.delta), ("counit", s.counit)):
                missing = [g for g in gl if g not in dict(items)]
                if missing:
                    _fail(f"hopf {s.name}: no {kind} image for {missing[0]!r}", s)
            if s.matrix is not None:
                for rows in s.matrix:
                    for row in rows:
                        for e in row:
                            _check_syms(e, gens, has_q)
            _check_marker(s.axb, has_q)
            hopfs[s.name] = gl
        elif isinstance(s, OppositeDecl):
            if s.of not in hopfs:
                _fail(f"unknown hopf algebra {s.of!r}", s)
            hopfs[s.name] = hopfs[s.of]
        elif isinstance(s, IdealBlock):
            if s.of not in hopfs:
                _fail(f"unknown hopf algebra {s.of!r}", s)
            gens = set(hopfs[s.of])
            for e in s.gens:
                _check_syms(e, gens, has_q)
            for r in s.rules:
                _check_syms(r.lhs, gens, has_q)
                _check_syms(r.rhs, gens, has_q)
                if r.certificate is not None:
                    _check_syms(r.certificate, gens, has_q, rels_ok=True)
            _check_measure(s.measure, gens)
            _check_marker(s.axb, has_q)
            hopfs[s.name] = hopfs[s.of]
        elif isinstance(s, CoactionBlock):
            if s.algebra not in algebras:
                _fail(f"unknown algebra {s.algebra!r}", s)
            if s.hopf not in hopfs:
                _fail(f"unknown hopf algebra {s.hopf!r}", s)
            bg, ag = set(algebras[s.algebra]), set(hopfs[s.hopf])
            legs = [bg, ag] if s.side == "right" else [ag, bg]
            for g, e in s.images:
                if g not in bg:
                    _fail(f"coaction image for unknown generator {g!r}", e)
                _check_tensor(e, legs, has_q)
            missing = [g for g in algebras[s.algebra] if g not in dict(s.images)]
            if missing:
                _fail(f"coaction {s.name}: no image for {missing[0]!r}", s)


def _check_measure(m, gens):
    if m is not None and m.kind == "axb":
        for g in m.args:
            if g not in gens:
                _fail(f"unknown generator {g!r} in measure", m)


def _check_marker(m, has_q):
    if m is not None and m.kind == "family":
        _check_syms(m.q, set(), has_q)


# --------------------------------------------------------------------------
# printer
# --------------------------------------------------------------------------

def _print_measure(m: MeasureDecl) -> str:
    if m.kind == "axb":
        s = f"axb({', '.join(m.args)})"
    else:
        s = "deglex"
    return f"{s} {m.modifier}" if m.modifier else s


def _print_rule(r: RuleDecl) -> str:
    s = f"rule {print_expr(r.lhs)} -> {print_expr(r.rhs)}"
    if r.certificate is not None:
        s += f" by {print_expr(r.certificate)}"
    return s + ";"


def _print_marker(m: AxbMarker) -> str:
    if m.kind == "family":
        return f"axb q = {print_expr(m.q)}, n = {m.n};"
    return f"axb {m.kind};"


def _print_matrix(rows) -> str:
    return "[" + "; ".join(", ".join(print_expr(e) for e in row) for row in rows) + "]"


def print_statement(s) -> str:
    if isinstance(s, FieldDecl):
        return f"field {s.kind} {s.p};" if s.kind == "gf" else f"field {s.kind};"
    if isinstance(s, AlgebraBlock):
        lines = [f"algebra {s.name} {{", f"  gens {', '.join(s.gens)};"]
        lines += [f"  rel {print_expr(r)};" for r in s.rels]
        lines += ["  " + _print_rule(r) for r in s.rules]
        if s.measure:
            lines.append(f"  measure {_print_measure(s.measure)};")
        return "\n".join(lines + ["}"])
    if isinstance(s, HopfBlock):
        lines = [f"hopf {s.name} on {s.algebra} {{"]
        for kind, items in (("delta", s.delta), ("counit", s.counit), ("antipode", s.antipode)):
            lines += [f"  {kind} {g} = {print_expr(e)};" for g, e in items]
        if s.matrix:
            lines.append(f"  matrix {_print_matrix(s.matrix[0])} inverse {_print_matrix(s.matrix[1])};")
        if s.axb:
            lines.append("  " + _print_marker(s.axb))
        return "\n".join(lines + ["}"])
    if isinstance(s, OppositeDecl):
        qual = "" if s.product and s.coproduct else (" product" if s.product else " coproduct")
        return f"hopf {s.name} = opposite {s.of}{qual};"
    if isinstance(s, IdealBlock):
        lines = [f"ideal {s.name} of {s.of} {{"]
        lines += [f"  gen {print_expr(e)};" for e in s.gens]
        lines += ["  " + _print_rule(r) for r in s.rules]
        if s.measure:
            lines.append(f"  measure {_print_measure(s.measure)};")
        if s.axb:
            lines.append("  " + _print_marker(s.axb))
        return "\n".join(lines + ["}"])
    if isinstance(s, CoactionBlock):
        lines = [f"coaction {s.name} on {s.algebra} {{", f"  hopf {s.hopf};", f"  side {s.side};"]
        lines += [f"  {s.name} {g} = {print_expr(e)};" for g, e in s.images]
        return "\n".join(lines + ["}"])
    if isinstance(s, CheckDirective):
        opts = ""
        if s.options:
            opts = " with " + ", ".join(f"{k} = {v}" for k, v in s.options)
        return f"check {', '.join(s.suites)}{opts};"
    raise TypeError(f"not a statement: {s!r}")


def print_spec(doc: SpecDocument) -> str:
    return "\n\n".join(print_statement(s) for s in doc.statements) + "\n"


# --------------------------------------------------------------------------
# evaluation
# --------------------------------------------------------------------------

def _inverse_name(g: str, gens) -> str | None:
    if g + "inv" in gens:
        return g + "inv"
    if g.endswith("inv") and g[:-3] in gens:
        return g[:-3]
    return None


def eval_expr(e, P: Presentation, rels: Mapping[int, str] | None = None):
    """Evaluate an expression in P; returns a scalar or an Element.

    ``g^-k`` means ``ginv^k`` when the generator ``ginv`` exists.  ``rels``
    maps relation indices to pseudo-generator names (certificate evaluation).
    """
    F = P.field
    if isinstance(e, Num):
        return F(e.value)
    if isinstance(e, Sym):
        if e.name in P.index:
            return P.gen(e.name)
        if e.name == "q" and F.has_q:
            return F.q
        _fail(f"unknown identifier {e.name!r}", e)
    if isinstance(e, Rel):
        if rels is None or e.index not in rels:
            _fail(f"no relation [{e.index}]", e)
        return P.gen(rels[e.index])
    if isinstance(e, Neg):
        return -eval_expr(e.arg, P, rels)
    if isinstance(e, Pow):
        base = eval_expr(e.base, P, rels)
        if not isinstance(base, Element):
            if not base and e.exp < 0:
                _fail("zero to a negative power", e)
            return base ** e.exp
        if e.exp >= 0:
            return base ** e.exp
        if isinstance(e.base, Sym) and e.base.name in P.index:
            inv = _inverse_name(e.base.name, P.generators)
            if inv is not None:
                return P.gen(inv) ** (-e.exp)
        _fail(f"negative power of {print_expr(e.base)} has no inverse generator", e)
    if isinstance(e, Bin):
        x = eval_expr(e.left, P, rels)
        y = eval_expr(e.right, P, rels)
        if e.op == "+":
            return x + y
        if e.op == "-":
            return x - y
        if e.op == "*":
            return x * y
        if isinstance(y, Element):
            if not y.is_scalar():
                _fail("division by a non-scalar element", e)
            y = y.scalar_value()
        if not y:
            _fail("division by zero", e)
        return x * (F.one / y)
    if isinstance(e, Tensor):
        _fail("tensor where an element is expected", e)
    raise TypeError(f"not an expression node: {e!r}")


def as_element(v, P: Presentation) -> Element:
    return v if isinstance(v, Element) else P.scalar(v)


def eval_element(e, P: Presentation) -> Element:
    return as_element(eval_expr(e, P), P)


def eval_scalar(e, F: Field):
    P = Presentation.free_algebra(F, ())
    v = eval_expr(e, P)
    if isinstance(v, Element):
        v = v.scalar_value()
    return v


def eval_tensor(e, legs: tuple) -> TensorElement:
    if isinstance(e, Bin) and e.op in "+-":
        x, y = eval_tensor(e.left, legs), eval_tensor(e.right, legs)
        return x + y if e.op == "+" else x - y
    if isinstance(e, Neg):
        return -eval_tensor(e.arg, legs)
    if isinstance(e, Tensor):
        if len(e.factors) != len(legs):
            _fail(f"tensor with {len(e.factors)} legs where {len(legs)} are expected", e)
        return tensor(*(eval_element(f, P) for f, P in zip(e.factors, legs)))
    # a scalar such as 0 or 2*q
    v = eval_scalar(e, legs[0].field)
    return TensorElement(legs, {tuple(() for _ in legs): v} if v else {})


def parse_element(text: str, P: Presentation) -> Element:
    return eval_element(parse_expr(text), P)


def parse_tensor(text: str, legs) -> TensorElement:
    return eval_tensor(parse_expr(text), tuple(legs))


# --------------------------------------------------------------------------
# building
# --------------------------------------------------------------------------

def field_of_decl(d: FieldDecl) -> Field:
    if d.kind == "rational":
        return QQ
    if d.kind == "ratfunc":
        return QQ_q
    return GF(d.p)


def _measure(m: MeasureDecl | None, gens):
    if m is None:
        return None
    if m.kind == "deglex":
        return DegLexOpposite() if m.modifier == "reversed" else DegLex()
    a, ainv, b = (gens.index(g) for g in m.args)
    return AxbMeasure(a, ainv, b, m.modifier == "mirrored")


def _word_of(e, free: Presentation, what: str):
    x = eval_element(e, free)
    if len(x.terms) != 1:
        _fail(f"{what} must be a single word", e)
    (w, c), = x.terms.items()
    if c != 1 or not w:
        _fail(f"{what} must be a nonempty word with coefficient 1", e)
    return w


def build_certificate(e, free: Presentation, n_rels: int) -> Certificate:
    names = {i: f"[{i}]" for i in range(1, n_rels + 1)}
    ext = Presentation.free_algebra(free.field, free.generators + tuple(names.values()))
    x = as_element(eval_expr(e, ext, names), ext)
    k = len(free.generators)
    terms = []
    for w, c in x.items():
        marks = [i for i, g in enumerate(w) if g >= k]
        if len(marks) != 1:
            _fail("every certificate term needs exactly one relation reference", e)
        i = marks[0]
        terms.append((c, w[:i], w[i] - k, w[i + 1:]))
    return Certificate(tuple(terms))


def build_rule(r: RuleDecl, free: Presentation, relations):
    lhs = _word_of(r.lhs, free, "rule left-hand side")
    rhs = eval_element(r.rhs, free)
    if r.certificate is not None:
        cert = build_certificate(r.certificate, free, len(relations))
    else:
        cert = _scalar_certificate(free, lhs, rhs, relations)
    return make_rule(lhs, rhs.terms, cert)


def _scalar_certificate(free, lhs, rhs, relations):
    """lhs - rhs = c * relation, when that is the case."""
    diff = free.word(lhs) - rhs
    for i, rel in enumerate(relations):
        c = rel.terms.get(lhs)
        if c and diff == rel.scale(free.field.one / c):
            return Certificate(((free.field.one / c, (), i, ()),))
    return None


@dataclass
class HopfEntry:
    name: str
    hopf: HopfPresentation | None
    matrix: tuple | None = None  # (u, v)
    declared_antipode: dict = field(default_factory=dict)
    axb: AxbMarker | None = None
    q: object = None
    origin: str = "block"
    failure: str | None = None


@dataclass
class IdealEntry:
    name: str
    parent: HopfEntry
    gens: list
    rules: list
    measure: object
    entry: HopfEntry


@dataclass
class Model:
    doc: SpecDocument
    field: Field
    algebras: dict
    hopfs: dict
    ideals: dict
    coactions: dict
    checks: list


def build(doc: SpecDocument, field_override: Field | None = None) -> Model:
    """Evaluate a validated document into presentations, Hopf structures and coactions."""
    F = field_override or field_of_decl(doc.field_decl)
    m = Model(doc, F, {}, {}, {}, {}, [])
    for s in doc.statements:
        if isinstance(s, AlgebraBlock):
            m.algebras[s.name] = _build_algebra(s, F)
        elif isinstance(s, HopfBlock):
            m.hopfs[s.name] = _build_hopf(s, m.algebras[s.algebra])
        elif isinstance(s, OppositeDecl):
            parent = m.hopfs[s.of]
            if parent.hopf is None:
                raise BuildError(f"opposite of {s.of}, which could not be built")
            H = opposite(parent.hopf, s.product, s.coproduct, name=s.name)
            m.hopfs[s.name] = HopfEntry(s.name, H, origin="opposite")
        elif isinstance(s, IdealBlock):
            ie = _build_ideal(s, m.hopfs[s.of])
            m.ideals[s.name] = ie
            m.hopfs[s.name] = ie.entry
        elif isinstance(s, CoactionBlock):
            he = m.hopfs[s.hopf]
            if he.hopf is None:
                raise BuildError(f"coaction {s.name} over {s.hopf}, which could not be built")
            B = m.algebras[s.algebra]
            legs = (B, he.hopf.base) if s.side == "right" else (he.hopf.base, B)
            images = {g: eval_tensor(e, legs) for g, e in s.images}
            m.coactions[s.name] = CoactionSpec(he.hopf, ComoduleAlgebra(B), s.side, images, s.name)
        elif isinstance(s, CheckDirective):
            m.checks.append(s)
    return m


def _build_algebra(s: AlgebraBlock, F: Field) -> Presentation:
    free = Presentation.free_algebra(F, s.gens, name=s.name)
    if not s.rels and not s.rules:
        return free
    rels = [eval_element(r, free) for r in s.rels]
    rules = [build_rule(r, free, rels) for r in s.rules]
    return free.quotient(rels, rules, _measure(s.measure, s.gens), name=s.name)


def _build_hopf(s: HopfBlock, P: Presentation) -> HopfEntry:
    legs = (P, P)
    delta = {g: eval_tensor(e, legs) for g, e in s.delta}
    counit = {g: eval_scalar(e, P.field) for g, e in s.counit}
    anti = {g: eval_element(e, P) for g, e in s.antipode}
    full = len(anti) == len(P.generators)
    H = HopfPresentation(P, delta, counit, anti if full else None, name=s.name)
    matrix = None
    if s.matrix is not None:
        u, v = (MultiplicativeMatrix([[eval_element(e, P) for e in row] for row in rows])
                for rows in s.matrix)
        matrix = (u, v)
    q = None
    if s.axb is not None and s.axb.kind == "family":
        q = eval_scalar(s.axb.q, P.field)
    return HopfEntry(s.name, H, matrix, anti, s.axb, q)


def _build_ideal(s: IdealBlock, parent: HopfEntry) -> IdealEntry:
    if parent.hopf is None:
        raise BuildError(f"ideal {s.name} of {parent.name}, which could not be built")
    H = parent.hopf
    P = H.base
    gens = [eval_element(e, P) for e in s.gens]
    relations = list(P.relations) + [Element(P.free, g.terms) for g in gens]
    rules = list(P.rules) + [build_rule(r, P.free, relations) for r in s.rules]
    measure = _measure(s.measure, P.generators) if s.measure else P.measure
    verdict = hopf_ideal_verify(H, gens, rules, measure, name=s.name, samples=0)
    q = eval_scalar(s.axb.q, P.field) if s.axb is not None and s.axb.kind == "family" else None
    entry = HopfEntry(s.name, verdict.value if verdict.ok else None, axb=s.axb, q=q,
                      origin="ideal", failure=None if verdict.ok else verdict.stage)
    if verdict.ok and parent.matrix is not None:
        Q = verdict.value.base
        pi = Hom(P, {g: Q.gen(g) for g in P.generators}, one=Q.one())
        entry.matrix = tuple(mat.map(pi) for mat in parent.matrix)
        entry.declared_antipode = {g: pi(x) for g, x in parent.declared_antipode.items()}
    return IdealEntry(s.name, parent, gens, rules, measure, entry)
