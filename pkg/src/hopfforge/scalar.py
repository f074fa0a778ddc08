"""Exact ground fields: the rationals, prime fields GF(p), and Q(q).

Rationals are plain :class:`fractions.Fraction` values.  Residues mod p and
rational functions in the central parameter ``q`` get small immutable value
classes that refuse to mix with other fields.  Python ints are accepted
everywhere as images of the prime subring.
"""
from __future__ import annotations

import random
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Union


class FieldMismatchError(TypeError):
    """Operands live in different fields."""


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


# --------------------------------------------------------------------------
# GF(p)
# --------------------------------------------------------------------------

class Residue:
    """An element of GF(p), stored as its representative in ``range(p)``."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.v = v % p
        self.p = p

    def _other(self, y) -> int:
        if isinstance(y, Residue):
            if y.p != self.p:
                raise FieldMismatchError(f"GF({self.p}) vs GF({y.p})")
            return y.v
        if isinstance(y, int):
            return y
        raise FieldMismatchError(f"GF({self.p}) vs {type(y).__name__}")

    def __add__(self, y):
        return Residue(self.v + self._other(y), self.p)

    __radd__ = __add__

    def __sub__(self, y):
        return Residue(self.v - self._other(y), self.p)

    def __rsub__(self, y):
        return Residue(self._other(y) - self.v, self.p)

    def __mul__(self, y):
        return Residue(self.v * self._other(y), self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return Residue(-self.v, self.p)

    def __pos__(self):
        return self

    def inverse(self) -> "Residue":
        if self.v == 0:
            raise ZeroDivisionError(f"inverse of 0 in GF({self.p})")
        return Residue(pow(self.v, -1, self.p), self.p)

    def __truediv__(self, y):
        return self * Residue(self._other(y), self.p).inverse()

    def __rtruediv__(self, y):
        return Residue(self._other(y), self.p) * self.inverse()

    def __pow__(self, m: int):
        if m < 0:
            return self.inverse() ** -m
        return Residue(pow(self.v, m, self.p), self.p)

    def __bool__(self):
        return self.v != 0

    def __eq__(self, y):
        if isinstance(y, Residue):
            return self.p == y.p and self.v == y.v
        if isinstance(y, int):
            return (self.v - y) % self.p == 0
        return NotImplemented

    def __hash__(self):
        return hash(("GF", self.p, self.v))

    def __repr__(self):
        return f"Residue({self.v}, {self.p})"

    def __str__(self):
        return str(self.v)


# --------------------------------------------------------------------------
# Q(q): dense univariate polynomials as tuples of Fractions, low degree first
# --------------------------------------------------------------------------

Poly = tuple

_ONE = (Fraction(1),)


def _trim(c: list) -> Poly:
    while c and not c[-1]:
        c.pop()
    return tuple(c)


def _padd(x: Poly, y: Poly) -> Poly:
    if len(x) < len(y):
        x, y = y, x
    c = list(x)
    for i, v in enumerate(y):
        c[i] += v
    return _trim(c)


def _pneg(x: Poly) -> Poly:
    return tuple(-v for v in x)


def _pmul(x: Poly, y: Poly) -> Poly:
    if not x or not y:
        return ()
    c = [Fraction(0)] * (len(x) + len(y) - 1)
    for i, u in enumerate(x):
        if u:
            for j, v in enumerate(y):
                c[i + j] += u * v
    return _trim(c)


def _pscale(x: Poly, s: Fraction) -> Poly:
    if not s:
        return ()
    return tuple(v * s for v in x)


def _pdivmod(x: Poly, y: Poly) -> tuple[Poly, Poly]:
    if not y:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(x)
    dy = len(y) - 1
    lead = y[-1]
    if len(r) <= dy:
        return (), tuple(r)
    quo = [Fraction(0)] * (len(r) - dy)
    for k in range(len(r) - 1, dy - 1, -1):
        c = r[k]
        if c:
            c = c / lead
            quo[k - dy] = c
            for j, v in enumerate(y):
                r[k - dy + j] -= c * v
    return _trim(quo), _trim(r[:dy])


def _order(x: Poly) -> int:
    for i, v in enumerate(x):
        if v:
            return i
    raise ValueError("order of zero polynomial")


def _is_monomial(x: Poly) -> bool:
    return sum(1 for v in x if v) == 1


def _content(x: Poly) -> Fraction:
    num = 0
    den = 1
    for v in x:
        if v:
            num = gcd(num, v.numerator)
            den = den * v.denominator // gcd(den, v.denominator)
    return Fraction(num, den)


def _primitive(x: Poly) -> Poly:
    c = _content(x)
    if x[-1] < 0:
        c = -c
    return tuple(v / c for v in x)


def poly_gcd(x: Poly, y: Poly) -> Poly:
    """Monic gcd over Q; primitive parts keep the Euclidean remainders small."""
    if not x:
        return _pscale(y, 1 / y[-1]) if y else ()
    if not y:
        return _pscale(x, 1 / x[-1])
    if _is_monomial(x) or _is_monomial(y):
        k = min(_order(x), _order(y))
        return (Fraction(0),) * k + _ONE
    a, b = _primitive(x), _primitive(y)
    while b:
        _, r = _pdivmod(a, b)
        a, b = b, (_primitive(r) if r else ())
    return _pscale(a, 1 / a[-1])


class RatFunc:
    """Reduced fraction num/den of polynomials in q; den is monic."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: Poly, den: Poly = _ONE, *, reduced: bool = False):
        if not den:
            raise ZeroDivisionError("rational function with zero denominator")
        if not reduced:
            num, den = _canonical(num, den)
        self.num = num
        self.den = den
        self._hash = None

    @classmethod
    def const(cls, c) -> "RatFunc":
        c = Fraction(c)
        return cls((c,) if c else (), _ONE, reduced=True)

    @classmethod
    def monomial(cls, c, k: int) -> "RatFunc":
        """c * q^k for any integer k."""
        c = Fraction(c)
        if not c:
            return ZERO_Q
        if k >= 0:
            return cls((Fraction(0),) * k + (c,), _ONE, reduced=True)
        return cls((c,), (Fraction(0),) * (-k) + _ONE, reduced=True)

    def _other(self, y) -> "RatFunc":
        if isinstance(y, RatFunc):
            return y
        if isinstance(y, int):
            return RatFunc.const(y)
        raise FieldMismatchError(f"Q(q) vs {type(y).__name__}")

    def __add__(self, y):
        y = self._other(y)
        if not y.num:
            return self
        if not self.num:
            return y
        if self.den == y.den:
            return RatFunc(_padd(self.num, y.num), self.den)
        num = _padd(_pmul(self.num, y.den), _pmul(y.num, self.den))
        return RatFunc(num, _pmul(self.den, y.den))

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(_pneg(self.num), self.den, reduced=True)

    def __pos__(self):
        return self

    def __sub__(self, y):
        return self + (-self._other(y))

    def __rsub__(self, y):
        return self._other(y) + (-self)

    def __mul__(self, y):
        y = self._other(y)
        if not self.num or not y.num:
            return ZERO_Q
        if self.den == _ONE and y.den == _ONE:
            return RatFunc(_pmul(self.num, y.num), _ONE, reduced=True)
        return RatFunc(_pmul(self.num, y.num), _pmul(self.den, y.den))

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if not self.num:
            raise ZeroDivisionError("inverse of 0 in Q(q)")
        return RatFunc(self.den, self.num)

    def __truediv__(self, y):
        return self * self._other(y).inverse()

    def __rtruediv__(self, y):
        return self._other(y) * self.inverse()

    def __pow__(self, m: int):
        if m < 0:
            return self.inverse() ** -m
        out = ONE_Q
        base = self
        while m:
            if m & 1:
                out = out * base
            base = base * base
            m >>= 1
        return out

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, y):
        if isinstance(y, int):
            y = RatFunc.const(y)
        if isinstance(y, RatFunc):
            return self.num == y.num and self.den == y.den
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __repr__(self):
        return f"RatFunc({self})"

    def is_monomial(self) -> bool:
        return _is_monomial(self.num) and _is_monomial(self.den)

    def __str__(self):
        if not self.num:
            return "0"
        if self.is_monomial():
            k = _order(self.num) - _order(self.den)
            c = self.num[-1] / self.den[-1]
            return _fmt_monomial(c, k)
        top = _fmt_poly(self.num)
        if self.den == _ONE:
            return top
        return f"{top}/{_fmt_poly(self.den)}"


def _canonical(num: Poly, den: Poly) -> tuple[Poly, Poly]:
    num = _trim(list(num))
    den = _trim(list(den))
    if not den:
        raise ZeroDivisionError("rational function with zero denominator")
    if not num:
        return (), _ONE
    g = poly_gcd(num, den)
    if len(g) > 1:
        num = _pdivmod(num, g)[0]
        den = _pdivmod(den, g)[0]
    lead = den[-1]
    if lead != 1:
        num = _pscale(num, 1 / lead)
        den = _pscale(den, 1 / lead)
    return num, den


def _fmt_monomial(c: Fraction, k: int) -> str:
    if k == 0:
        return str(c)
    qk = "q" if k == 1 else f"q^{k}"
    if c == 1:
        return qk
    if c == -1:
        return f"-{qk}"
    return f"{c}*{qk}"


def _fmt_poly(x: Poly) -> str:
    terms = [(k, v) for k, v in enumerate(x) if v]
    if len(terms) == 1:
        return _fmt_monomial(terms[0][1], terms[0][0])
    out = ""
    for k, v in terms:
        s = _fmt_monomial(abs(v), k)
        if not out:
            out = ("-" if v < 0 else "") + s
        else:
            out += (" - " if v < 0 else " + ") + s
    return f"({out})"


ZERO_Q = RatFunc((), _ONE, reduced=True)

def _defer_foreign(cls):
    """Let algebra elements handle ``scalar * element`` via their reflected operators."""
    for name in ("__add__", "__radd__", "__sub__", "__rsub__", "__mul__", "__rmul__",
                 "__truediv__", "__rtruediv__"):
        fn = cls.__dict__.get(name)
        if fn is None:
            continue

        def wrapped(self, y, _fn=fn):
            if not isinstance(y, (int, Fraction, Residue, RatFunc)):
                return NotImplemented
            return _fn(self, y)
        wrapped.__name__ = name
        setattr(cls, name, wrapped)
    return cls


_defer_foreign(Residue)
_defer_foreign(RatFunc)

ONE_Q = RatFunc(_ONE, _ONE, reduced=True)


# --------------------------------------------------------------------------
# Field descriptors
# --------------------------------------------------------------------------

Scalar = Union[Fraction, Residue, RatFunc]


class Field:
    """Descriptor for one of the supported ground fields."""

    kind: str = ""
    characteristic: int = 0
    has_q: bool = False

    def __call__(self, x) -> Scalar:
        raise NotImplementedError

    @property
    def zero(self) -> Scalar:
        return self(0)

    @property
    def one(self) -> Scalar:
        return self(1)

    def contains(self, x) -> bool:
        raise NotImplementedError

    def random(self, rng: random.Random) -> Scalar:
        raise NotImplementedError

    def __repr__(self):
        return self.name

    @property
    def name(self) -> str:
        return self.kind


class Rationals(Field):
    kind = "rational"

    def __call__(self, x) -> Fraction:
        if isinstance(x, (Residue, RatFunc)):
            raise FieldMismatchError(f"cannot coerce {x!r} into Q")
        return Fraction(x)

    def contains(self, x) -> bool:
        return isinstance(x, Fraction)

    def random(self, rng):
        return Fraction(rng.randint(-9, 9), rng.randint(1, 5))


class PrimeField(Field):
    kind = "prime_field"

    def __init__(self, p: int):
        if not is_prime(p):
            raise ValueError(f"GF({p}): modulus is not prime")
        self.p = p
        self.characteristic = p

    def __call__(self, x) -> Residue:
        if isinstance(x, Residue):
            if x.p != self.p:
                raise FieldMismatchError(f"GF({x.p}) element in GF({self.p})")
            return x
        if isinstance(x, Fraction):
            return Residue(x.numerator, self.p) / Residue(x.denominator, self.p)
        if isinstance(x, int):
            return Residue(x, self.p)
        raise FieldMismatchError(f"cannot coerce {x!r} into GF({self.p})")

    def contains(self, x) -> bool:
        return isinstance(x, Residue) and x.p == self.p

    def random(self, rng):
        return Residue(rng.randrange(self.p), self.p)

    @property
    def name(self) -> str:
        return f"gf:{self.p}"


class RationalFunctions(Field):
    """Q(q), the fraction field of Q[q]."""

    kind = "rational_functions_in_q"
    has_q = True

    def __call__(self, x) -> RatFunc:
        if isinstance(x, RatFunc):
            return x
        if isinstance(x, (int, Fraction)):
            return RatFunc.const(x)
        raise FieldMismatchError(f"cannot coerce {x!r} into Q(q)")

    @property
    def q(self) -> RatFunc:
        return RatFunc.monomial(1, 1)

    def contains(self, x) -> bool:
        return isinstance(x, RatFunc)

    def random(self, rng):
        num = tuple(Fraction(rng.randint(-3, 3)) for _ in range(rng.randint(1, 3)))
        den = tuple(Fraction(rng.randint(-3, 3)) for _ in range(rng.randint(0, 2))) + (Fraction(1),)
        return RatFunc(num, den)

    @property
    def name(self) -> str:
        return "ratfunc"


QQ = Rationals()
QQ_q = RationalFunctions()


@lru_cache(maxsize=None)
def GF(p: int) -> PrimeField:
    return PrimeField(p)


def field_from_name(name: str) -> Field:
    """Parse ``rational``, ``ratfunc`` or ``gf:P``."""
    if name == "rational":
        return QQ
    if name == "ratfunc":
        return QQ_q
    if name.startswith("gf:"):
        return GF(int(name[3:]))
    raise ValueError(f"unknown field {name!r}")


def field_of(x) -> Field:
    if isinstance(x, Fraction):
        return QQ
    if isinstance(x, Residue):
        return GF(x.p)
    if isinstance(x, RatFunc):
        return QQ_q
    raise FieldMismatchError(f"{x!r} is not a field element")


def _same(x, y) -> None:
    fx, fy = field_of(x), field_of(y)
    if fx is not fy:
        raise FieldMismatchError(f"{fx.name} vs {fy.name}")


def field_add(x: Scalar, y: Scalar) -> Scalar:
    _same(x, y)
    return x + y


def field_mul(x: Scalar, y: Scalar) -> Scalar:
    _same(x, y)
    return x * y


def field_neg(x: Scalar) -> Scalar:
    field_of(x)
    return -x


def field_inv(x: Scalar) -> Scalar:
    field_of(x)
    if not x:
        raise ZeroDivisionError("inverse of zero")
    if isinstance(x, Fraction):
        return 1 / x
    return x.inverse()


def scalar_pow(x: Scalar, m: int) -> Scalar:
    field_of(x)
    if m < 0 and not x:
        raise ZeroDivisionError("zero to a negative power")
    return x ** m


def format_scalar(c: Scalar) -> str:
    return str(c)
