"""Free noncommutative algebras, presentations and string rewriting.

Words are tuples of generator indices; an :class:`Element` is a dict from
words to nonzero scalars, kept in normal form with respect to the rewrite
rules of its :class:`Presentation`.  Rewriting is plain leftmost reduction;
whether the result is *the* normal form depends on confluence, which
:func:`check_local_confluence` certifies by joining every critical pair.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

from .scalar import Field, Fraction, RatFunc, Residue

Word = tuple

DEFAULT_FUEL = 10 ** 6


class PresentationMismatchError(ValueError):
    pass


class NonTerminationError(RuntimeError):
    """Raised when reduction runs out of fuel; carries the offending word."""

    def __init__(self, word, steps):
        super().__init__(f"no normal form after {steps} rewrite steps (at word {word!r})")
        self.word = word
        self.steps = steps


class MissingImageError(KeyError):
    pass


def print_key(w: Word):
    """Printing order: longer words first, then lexicographic."""
    return (-len(w), w)


def word_key(w: Word):
    return (len(w), w)


def runs(w: Word) -> list[tuple[int, int]]:
    """Run-length view of a word: [(generator index, exponent), ...]."""
    return [(g, len(list(grp))) for g, grp in itertools.groupby(w)]


# --------------------------------------------------------------------------
# termination measures
# --------------------------------------------------------------------------

class DegLex:
    """Length first, then lexicographic by generator index."""

    name = "deglex"

    def key(self, w: Word):
        return (len(w), w)

    def opposite(self):
        return DegLexOpposite()

    def describe(self, gens) -> str:
        return "deglex"


class DegLexOpposite(DegLex):
    name = "deglex-rev"

    def key(self, w: Word):
        return (len(w), w[::-1])

    def opposite(self):
        return DegLex()


class AxbMeasure:
    """Well-order for rule systems that push powers of ``a`` leftwards past ``b``.

    The key of a word is (number of b's, profile, length) where the profile
    lists, for each b from the rightmost one leftwards, the pair (number of
    ainv to its right, number of a to its right).  Rewriting inside any context
    changes the profile first at the rewritten b (or only the length, for unit
    rules with no b to their left), so keys drop in every context.
    """

    name = "axb"

    def __init__(self, a: int, ainv: int, b: int, mirrored: bool = False):
        self.a, self.ainv, self.b = a, ainv, b
        self.mirrored = mirrored

    def key(self, w: Word):
        if self.mirrored:
            w = w[::-1]
        a, ainv, b = self.a, self.ainv, self.b
        prof = []
        na = ni = 0
        for g in reversed(w):
            if g == a:
                na += 1
            elif g == ainv:
                ni += 1
            elif g == b:
                prof.append((ni, na))
        return (len(prof), tuple(prof), len(w))

    def opposite(self):
        return AxbMeasure(self.a, self.ainv, self.b, not self.mirrored)

    def describe(self, gens) -> str:
        s = f"axb({gens[self.a]}, {gens[self.ainv]}, {gens[self.b]})"
        return s + " mirrored" if self.mirrored else s

    def __eq__(self, other):
        return (isinstance(other, AxbMeasure)
                and (self.a, self.ainv, self.b, self.mirrored)
                == (other.a, other.ainv, other.b, other.mirrored))

    def __hash__(self):
        return hash((self.a, self.ainv, self.b, self.mirrored))


# --------------------------------------------------------------------------
# rules
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Certificate:
    """lhs - rhs = sum(c * left * relations[i] * right) in the free algebra."""

    terms: tuple  # of (coef, left word, relation index, right word)


@dataclass(frozen=True)
class Rule:
    lhs: Word
    rhs: tuple  # sorted ((word, coef), ...)
    certificate: Certificate | None = None

    @property
    def rhs_terms(self) -> dict:
        return dict(self.rhs)


def make_rule(lhs: Word, rhs: Mapping, certificate=None) -> Rule:
    if not lhs:
        raise ValueError("rule with empty left-hand side")
    items = tuple(sorted(((w, c) for w, c in rhs.items() if c), key=lambda t: word_key(t[0])))
    return Rule(tuple(lhs), items, certificate)


# --------------------------------------------------------------------------
# presentations and elements
# --------------------------------------------------------------------------

class Presentation:
    """Generators, defining relations and an oriented rewrite system.

    A presentation with no relations is the free algebra; ``self.free`` always
    points at the free algebra on the same generators.
    """

    def __init__(self, field: Field, generators: Sequence[str], relations=(),
                 rules=(), measure=None, name: str | None = None, free=None):
        gens = tuple(generators)
        if len(set(gens)) != len(gens):
            dup = next(g for g in gens if gens.count(g) > 1)
            raise ValueError(f"duplicate generator {dup!r}")
        if field.has_q and "q" in gens:
            raise ValueError("generator name 'q' is reserved for the field parameter")
        self.field = field
        self.generators = gens
        self.index = {g: i for i, g in enumerate(gens)}
        self.name = name
        self.free = self if free is None else free
        self.relations = tuple(relations)
        self.rules = tuple(rules)
        self.measure = measure
        self.confluence_status = "unverified"
        self.confluence_certificate = None
        self._first = {}
        for r in self.rules:
            self._first.setdefault(r.lhs[0], []).append(r)
        self._cache: dict = {}
        self.fuel = DEFAULT_FUEL
        self._zero = field.zero
        self._one = field.one

    # construction ---------------------------------------------------------
    @classmethod
    def free_algebra(cls, field: Field, generators: Sequence[str], name=None):
        return cls(field, generators, name=name)

    def quotient(self, relations: Iterable["Element"], rules: Iterable[Rule],
                 measure=None, name=None) -> "Presentation":
        """Add ``relations`` to the defining ones; ``rules`` is the full new rule set."""
        rels = list(self.relations)
        for r in relations:
            if r.alg.generators != self.generators:
                raise PresentationMismatchError("relation over different generators")
            rels.append(Element(self.free, r.terms))
        out = Presentation(self.field, self.generators, rels, rules, measure, name, self.free)
        out.fuel = self.fuel
        return out

    def opposite(self, name=None) -> "Presentation":
        """Same generators with every word reversed (the opposite algebra)."""
        free = Presentation(self.field, self.generators, name=self.free.name)
        if self.free is self:
            return free
        rels = [Element(free, {w[::-1]: c for w, c in r.terms.items()}) for r in self.relations]
        rules = []
        for r in self.rules:
            cert = None
            if r.certificate is not None:
                cert = Certificate(tuple((c, rt[::-1], i, lt[::-1])
                                         for c, lt, i, rt in r.certificate.terms))
            rules.append(make_rule(r.lhs[::-1], {w[::-1]: c for w, c in r.rhs}, cert))
        measure = self.measure.opposite() if self.measure is not None else None
        out = Presentation(self.field, self.generators, rels, rules, measure,
                           name if name is not None else self.name, free)
        out.fuel = self.fuel
        return out

    def structurally_equal(self, other: "Presentation") -> bool:
        return (self.field is other.field
                and self.generators == other.generators
                and [r.terms for r in self.relations] == [r.terms for r in other.relations]
                and self.rules == other.rules)

    # elements -------------------------------------------------------------
    def gen(self, name: str) -> "Element":
        return Element(self, self.reduce_word((self.index[name],)))

    def gens(self) -> list["Element"]:
        return [self.gen(g) for g in self.generators]

    def one(self) -> "Element":
        return Element(self, {(): self._one})

    def zero(self) -> "Element":
        return Element(self, {})

    def scalar(self, c) -> "Element":
        c = self.field(c)
        return Element(self, {(): c} if c else {})

    def word(self, w: Word) -> "Element":
        return Element(self, self.reduce_word(tuple(w)))

    def element(self, terms: Mapping) -> "Element":
        """Reduce an arbitrary word -> coefficient mapping."""
        out: dict = {}
        for w, c in terms.items():
            c = self.field(c)
            if c:
                _accumulate(out, self.reduce_word(tuple(w)), c)
        return Element(self, out)

    def parse(self, text: str) -> "Element":
        from .dsl import parse_element
        return parse_element(text, self)

    def word_str(self, w: Word) -> str:
        if not w:
            return "1"
        return "*".join(self.generators[g] if e == 1 else f"{self.generators[g]}^{e}"
                        for g, e in runs(w))

    # reduction --------------------------------------------------------------
    def match(self, w: Word):
        """Leftmost rule occurrence in ``w`` as (position, rule), or None."""
        first = self._first
        for i, g in enumerate(w):
            for r in first.get(g, ()):
                n = len(r.lhs)
                if w[i:i + n] == r.lhs:
                    return i, r
        return None

    def matches(self, w: Word) -> list:
        out = []
        for i, g in enumerate(w):
            for r in self._first.get(g, ()):
                n = len(r.lhs)
                if w[i:i + n] == r.lhs:
                    out.append((i, r))
        return out

    def is_reduced(self, w: Word) -> bool:
        return self.match(w) is None

    def reduce_word(self, w: Word, fuel: int | None = None) -> dict:
        """Normal form of a single word as a term dict (cached, leftmost strategy)."""
        fuel = self.fuel if fuel is None else fuel
        if not self.rules:
            return {w: self._one}
        hit = self._cache.get(w)
        if hit is not None:
            return hit
        result: dict = {}
        pending = {w: self._one}
        steps = 0
        while pending:
            u, c = pending.popitem()
            hit = self._cache.get(u)
            if hit is not None:
                _accumulate(result, hit, c)
                continue
            m = self.match(u)
            if m is None:
                _add(result, u, c)
                continue
            steps += 1
            if steps > fuel:
                raise NonTerminationError(u, steps - 1)
            i, r = m
            pre, post = u[:i], u[i + len(r.lhs):]
            for v, d in r.rhs:
                _add(pending, pre + v + post, c * d)
        self._cache[w] = result
        return result


class Element:
    """Linear combination of normal-form words of a presentation."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg: Presentation, terms: dict):
        self.alg = alg
        self.terms = terms

    def _check(self, y: "Element"):
        if y.alg is not self.alg:
            raise PresentationMismatchError(
                f"elements of {self.alg.name or 'algebra'} and {y.alg.name or 'algebra'}")

    def _coerce(self, y):
        if isinstance(y, Element):
            self._check(y)
            return y
        if isinstance(y, (int, Fraction, Residue, RatFunc)):
            return self.alg.scalar(y)
        return NotImplemented

    def __add__(self, y):
        y = self._coerce(y)
        if y is NotImplemented:
            return y
        out = dict(self.terms)
        _accumulate(out, y.terms, self.alg._one)
        return Element(self.alg, out)

    __radd__ = __add__

    def __neg__(self):
        return Element(self.alg, {w: -c for w, c in self.terms.items()})

    def __sub__(self, y):
        y = self._coerce(y)
        if y is NotImplemented:
            return y
        return self + (-y)

    def __rsub__(self, y):
        return (-self) + y

    def scale(self, c) -> "Element":
        c = self.alg.field(c)
        if not c:
            return self.alg.zero()
        return Element(self.alg, {w: c * d for w, d in self.terms.items()})

    def __mul__(self, y):
        if isinstance(y, Element):
            self._check(y)
            alg = self.alg
            out: dict = {}
            if not alg.rules:
                for w, c in self.terms.items():
                    for v, d in y.terms.items():
                        _add(out, w + v, c * d)
            else:
                for w, c in self.terms.items():
                    for v, d in y.terms.items():
                        _accumulate(out, alg.reduce_word(w + v), c * d)
            return Element(alg, out)
        if isinstance(y, (int, Fraction, Residue, RatFunc)):
            return self.scale(y)
        return NotImplemented

    def __rmul__(self, c):
        if isinstance(c, (int, Fraction, Residue, RatFunc)):
            return self.scale(c)
        return NotImplemented

    def __pow__(self, m: int):
        if m < 0:
            raise ValueError("negative powers of algebra elements are not defined")
        out = self.alg.one()
        for _ in range(m):
            out = out * self
        return out

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, y):
        if isinstance(y, Element):
            return self.alg is y.alg and self.terms == y.terms
        if isinstance(y, (int, Fraction, Residue, RatFunc)):
            return self.terms == self.alg.scalar(y).terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def items(self):
        """Terms in deterministic (length, lex) order."""
        return sorted(self.terms.items(), key=lambda t: word_key(t[0]))

    def words(self):
        return [w for w, _ in self.items()]

    def coefficient(self, w: Word):
        return self.terms.get(tuple(w), self.alg._zero)

    def degree(self) -> int:
        return max((len(w) for w in self.terms), default=-1)

    def is_scalar(self) -> bool:
        return all(not w for w in self.terms)

    def scalar_value(self):
        if not self.is_scalar():
            raise ValueError(f"{self} is not a scalar")
        return self.terms.get((), self.alg._zero)

    def reversed(self, alg: Presentation | None = None) -> "Element":
        """Word reversal, landing in ``alg`` (default: the same presentation)."""
        alg = alg or self.alg
        return alg.element({w[::-1]: c for w, c in self.terms.items()})

    def __str__(self):
        return format_terms(sorted(self.terms.items(), key=lambda t: print_key(t[0])),
                            self.alg.word_str)

    def __repr__(self):
        return f"Element({self})"


def _add(d: dict, w, c):
    v = d.get(w)
    if v is None:
        if c:
            d[w] = c
    else:
        v = v + c
        if v:
            d[w] = v
        else:
            del d[w]


def _accumulate(d: dict, terms: Mapping, c):
    for w, v in terms.items():
        _add(d, w, c * v)


def _negative(c) -> bool:
    if isinstance(c, Fraction):
        return c < 0
    if isinstance(c, RatFunc) and c.is_monomial():
        return c.num[-1] / c.den[-1] < 0
    return False


def format_terms(items, word_str: Callable) -> str:
    """Shared printer for elements and tensors: ``3*a^2*b - q^-1*b*a``."""
    if not items:
        return "0"
    parts = []
    for i, (w, c) in enumerate(items):
        neg = _negative(c)
        mag = -c if neg else c
        ws = word_str(w)
        if mag == 1:
            body = ws
        elif ws == "1":
            body = str(mag)
        else:
            body = f"{mag}*{ws}"
        if i == 0:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append((" - " if neg else " + ") + body)
    return "".join(parts)


# --------------------------------------------------------------------------
# normal forms
# --------------------------------------------------------------------------

@dataclass
class Step:
    word: Word
    position: int
    rule: Rule


def normal_form(x: Element, fuel: int | None = None, *, strategy: str = "leftmost",
                rng: random.Random | None = None, trace: list | None = None) -> Element:
    """Reduce ``x`` until no rule applies.

    ``strategy`` is ``"leftmost"`` or ``"random"`` (uniform choice among all
    redexes, using ``rng``).  With ``trace`` given, every rewrite step is
    appended to it as a :class:`Step`; the word cache is bypassed then.
    """
    alg = x.alg
    fuel = alg.fuel if fuel is None else fuel
    if strategy == "leftmost" and trace is None:
        out: dict = {}
        for w, c in x.terms.items():
            _accumulate(out, alg.reduce_word(w, fuel), c)
        return Element(alg, out)
    if strategy == "random" and rng is None:
        raise ValueError("random strategy needs an explicit rng")
    result: dict = {}
    pending = dict(x.terms)
    steps = 0
    while pending:
        if strategy == "random":
            u = rng.choice(sorted(pending, key=word_key))
            c = pending.pop(u)
        else:
            u, c = pending.popitem()
        if strategy == "random":
            ms = alg.matches(u)
            m = rng.choice(ms) if ms else None
        else:
            m = alg.match(u)
        if m is None:
            _add(result, u, c)
            continue
        steps += 1
        if steps > fuel:
            raise NonTerminationError(u, steps - 1)
        i, r = m
        if trace is not None:
            trace.append(Step(u, i, r))
        pre, post = u[:i], u[i + len(r.lhs):]
        for v, d in r.rhs:
            _add(pending, pre + v + post, c * d)
    return Element(alg, result)


def replay_trace(alg: Presentation, trace: Sequence[Step]) -> list[str]:
    """Validate a reduction trace; return a list of problems (empty if sound).

    Each step must rewrite an actual occurrence of the rule's lhs, the rule's
    certificate must expand to lhs - rhs in the free algebra, and the attached
    termination measure must drop from the word to every rewritten word.
    """
    problems = []
    verified = {}
    for k, s in enumerate(trace):
        r = s.rule
        if s.word[s.position:s.position + len(r.lhs)] != r.lhs:
            problems.append(f"step {k}: lhs not found at position {s.position}")
        if r not in verified:
            verified[r] = certificate_holds(alg, r)
        if not verified[r]:
            problems.append(f"step {k}: rule {alg.word_str(r.lhs)} has no valid certificate")
        if alg.measure is not None:
            key = alg.measure.key(s.word)
            pre, post = s.word[:s.position], s.word[s.position + len(r.lhs):]
            for v, _ in r.rhs:
                if not alg.measure.key(pre + v + post) < key:
                    problems.append(f"step {k}: measure does not decrease")
    return problems


def certificate_holds(alg: Presentation, rule: Rule) -> bool:
    if rule.certificate is None:
        return False
    diff: dict = {rule.lhs: alg._one}
    for w, c in rule.rhs:
        _add(diff, w, -c)
    for c, left, i, right in rule.certificate.terms:
        rel = alg.relations[i]
        for w, d in rel.terms.items():
            _add(diff, left + w + right, -c * d)
    return not diff


def validate_measure(alg: Presentation) -> list[Rule]:
    """Rules whose lhs does not strictly dominate every rhs word."""
    if alg.measure is None:
        return list(alg.rules)
    key = alg.measure.key
    return [r for r in alg.rules if not all(key(w) < key(r.lhs) for w, _ in r.rhs)]


def relations_vanish(alg: Presentation, fuel: int | None = None) -> list[Element]:
    """Defining relations that do not reduce to zero under the rules."""
    bad = []
    for rel in alg.relations:
        if alg.element(rel.terms):
            bad.append(rel)
    return bad


# --------------------------------------------------------------------------
# critical pairs and local confluence
# --------------------------------------------------------------------------

@dataclass
class CriticalPair:
    word: Word
    left: Element
    right: Element
    rules: tuple  # (rule applied at the left, rule applied at the right)


def _unreduced(alg: Presentation, terms: dict) -> Element:
    return Element(alg, {w: c for w, c in terms.items() if c})


def critical_pairs(alg: Presentation) -> list[CriticalPair]:
    """Every overlap and inclusion ambiguity between rule left-hand sides.

    Both one-step reducts are returned unreduced.
    """
    out = []
    rules = alg.rules
    for r1, r2 in itertools.product(rules, repeat=2):
        l1, l2 = r1.lhs, r2.lhs
        # overlaps: a proper suffix of l1 equals a proper prefix of l2
        for k in range(1, min(len(l1), len(l2))):
            if l1[-k:] == l2[:k]:
                w = l1 + l2[k:]
                left = {}
                for v, c in r1.rhs:
                    _add(left, v + l2[k:], c)
                right = {}
                for v, c in r2.rhs:
                    _add(right, l1[:-k] + v, c)
                out.append(CriticalPair(w, _unreduced(alg, left), _unreduced(alg, right), (r1, r2)))
        # inclusions: l2 sits strictly inside l1
        if r1 is not r2 and len(l2) <= len(l1):
            for i in range(len(l1) - len(l2) + 1):
                if l1[i:i + len(l2)] == l2:
                    left = dict(r1.rhs_terms)
                    right = {}
                    for v, c in r2.rhs:
                        _add(right, l1[:i] + v + l1[i + len(l2):], c)
                    out.append(CriticalPair(l1, _unreduced(alg, left), _unreduced(alg, right), (r1, r2)))
    return out


@dataclass
class ConfluenceReport:
    status: str  # verified | failed | unverified
    pairs: int = 0
    certificate: list = field(default_factory=list)  # (overlap word, joined normal form)
    failure: CriticalPair | None = None
    normal_forms: tuple | None = None
    diagnostic: str = ""

    @property
    def ok(self) -> bool:
        return self.status == "verified"


def check_local_confluence(alg: Presentation, fuel: int | None = None) -> ConfluenceReport:
    """Join every critical pair; updates ``alg.confluence_status``."""
    pairs = critical_pairs(alg)
    report = ConfluenceReport("verified", len(pairs))
    for cp in pairs:
        try:
            nl = normal_form(cp.left, fuel)
            nr = normal_form(cp.right, fuel)
        except NonTerminationError as exc:
            report.status = "unverified"
            report.failure = cp
            report.diagnostic = str(exc)
            break
        if nl != nr:
            report.status = "failed"
            report.failure = cp
            report.normal_forms = (nl, nr)
            report.diagnostic = (f"overlap {alg.word_str(cp.word)}: {nl} != {nr}")
            break
        report.certificate.append((cp.word, nl))
    alg.confluence_status = report.status
    alg.confluence_certificate = report if report.ok else None
    return report


# --------------------------------------------------------------------------
# homomorphisms
# --------------------------------------------------------------------------

class Hom:
    """Multiplicative (or anti-multiplicative) linear extension of generator images.

    Images may be :class:`Element`, tensor elements, or bare scalars.  Words
    are mapped through a prefix cache, so repeated application is cheap.
    """

    def __init__(self, source: Presentation, images: Mapping[str, object],
                 anti: bool = False, one=None):
        missing = [g for g in source.generators if g not in images]
        if missing:
            raise MissingImageError(f"no image for generator(s) {', '.join(missing)}")
        self.source = source
        self.images = dict(images)
        self.anti = anti
        self._gen = [self.images[g] for g in source.generators]
        if one is None:
            sample = self._gen[0] if self._gen else source.field.one
            one = _unit_like(sample, source.field)
        self.one = one
        self._cache = {(): one}

    def on_word(self, w: Word):
        hit = self._cache.get(w)
        if hit is not None:
            return hit
        head = self.on_word(w[:-1]) if len(w) < 400 else self._iter_word(w[:-1])
        g = self._gen[w[-1]]
        val = g * head if self.anti else head * g
        self._cache[w] = val
        return val

    def _iter_word(self, w: Word):
        val = self.one
        for i in range(len(w)):
            g = self._gen[w[i]]
            val = g * val if self.anti else val * g
        return val

    def apply_terms(self, terms: Mapping):
        out = None
        for w, c in terms.items():
            v = self.on_word(w)
            v = c * v
            out = v if out is None else out + v
        if out is None:
            return self.one * 0 if not isinstance(self.one, Element) else self.one.alg.zero()
        return out

    def __call__(self, x: Element):
        if x.alg.generators != self.source.generators:
            raise PresentationMismatchError("element not over the source generators")
        return self.apply_terms(x.terms)


def _unit_like(sample, field):
    if isinstance(sample, Element):
        return sample.alg.one()
    unit = getattr(sample, "unit", None)
    if callable(unit):
        return unit()
    return field.one


def extend_hom(source: Presentation, images: Mapping[str, object], anti: bool = False,
               one=None) -> Hom:
    return Hom(source, images, anti, one)


@dataclass
class Violation:
    relation: Element
    image: object

    def __str__(self):
        return f"{self.relation} -> {self.image}"


def _is_zero(v) -> bool:
    return not v


def hom_well_defined(source: Presentation, h: Hom) -> Violation | None:
    """First defining relation whose image is nonzero, or None if ``h`` descends.

    For anti maps this is exactly the opposite-relations condition.
    """
    for rel in source.relations:
        img = h.apply_terms(rel.terms)
        if not _is_zero(img):
            return Violation(rel, img)
    return None


# --------------------------------------------------------------------------
# random sampling
# --------------------------------------------------------------------------

def coefficient_pool(field: Field) -> list:
    pool = [field(1), field(-1), field(2), field(-2)]
    if field.has_q:
        pool += [field.q, field.q ** -1]
    return pool


def random_word(alg: Presentation, rng: random.Random, max_degree: int) -> Word:
    n = rng.randint(0, max_degree)
    return tuple(rng.randrange(len(alg.generators)) for _ in range(n))


def random_element(alg: Presentation, rng: random.Random, max_degree: int = 6,
                   max_terms: int = 3) -> Element:
    """Random element: uniform word lengths in [0, D], coefficients from a small pool."""
    pool = coefficient_pool(alg.field)
    terms: dict = {}
    for _ in range(rng.randint(1, max_terms)):
        _add(terms, random_word(alg, rng, max_degree), rng.choice(pool))
    return alg.element(terms)
