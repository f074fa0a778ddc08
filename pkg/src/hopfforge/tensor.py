"""Tensor products of presented algebras over a common field.

A :class:`TensorElement` is a dict from tuples of leg words to scalars.
Legs are always flat: mapping a leg into a tensor product splices the new
legs in place, left to right.
"""
from __future__ import annotations

import itertools
from typing import Callable

from .ncalg import (Element, Presentation, PresentationMismatchError, _add, _negative, print_key,
                    word_key)
from .scalar import Fraction, RatFunc, Residue

_SCALARS = (int, Fraction, Residue, RatFunc)


class LegError(IndexError):
    pass


class TensorElement:
    __slots__ = ("legs", "terms")

    def __init__(self, legs: tuple, terms: dict):
        self.legs = tuple(legs)
        self.terms = terms

    @property
    def field(self):
        return self.legs[0].field

    def _one(self):
        return self.legs[0]._one if self.legs else 1

    def unit(self) -> "TensorElement":
        return unit(self.legs)

    def _check(self, y: "TensorElement"):
        if len(y.legs) != len(self.legs) or any(a is not b for a, b in zip(self.legs, y.legs)):
            raise PresentationMismatchError("tensor legs do not match")

    def __add__(self, y):
        if isinstance(y, _SCALARS):
            y = self.unit().scale(y)
        if not isinstance(y, TensorElement):
            return NotImplemented
        self._check(y)
        out = dict(self.terms)
        for k, c in y.terms.items():
            _add(out, k, c)
        return TensorElement(self.legs, out)

    __radd__ = __add__

    def __neg__(self):
        return TensorElement(self.legs, {k: -c for k, c in self.terms.items()})

    def __sub__(self, y):
        if isinstance(y, _SCALARS):
            y = self.unit().scale(y)
        return self + (-y)

    def __rsub__(self, y):
        return (-self) + y

    def scale(self, c) -> "TensorElement":
        if not c:
            return TensorElement(self.legs, {})
        return TensorElement(self.legs, {k: c * d for k, d in self.terms.items()})

    def __mul__(self, y):
        if isinstance(y, _SCALARS):
            return self.scale(y)
        if not isinstance(y, TensorElement):
            return NotImplemented
        return tensor_mul(self, y)

    def __rmul__(self, c):
        if isinstance(c, _SCALARS):
            return self.scale(c)
        return NotImplemented

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, y):
        if isinstance(y, TensorElement):
            return (len(self.legs) == len(y.legs)
                    and all(a is b for a, b in zip(self.legs, y.legs))
                    and self.terms == y.terms)
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def items(self):
        return sorted(self.terms.items(), key=lambda t: tuple(word_key(w) for w in t[0]))

    def to_element(self) -> Element:
        if len(self.legs) != 1:
            raise LegError(f"expected one leg, have {len(self.legs)}")
        return Element(self.legs[0], {k[0]: c for k, c in self.terms.items()})

    def to_scalar(self):
        if self.legs:
            raise LegError(f"expected no legs, have {len(self.legs)}")
        return self.terms.get((), 0)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        ordered = sorted(self.terms.items(), key=lambda t: tuple(print_key(w) for w in t[0]))
        for i, (ws, c) in enumerate(ordered):
            neg = _negative(c)
            mag = -c if neg else c
            legs = [p.word_str(w) for p, w in zip(self.legs, ws)]
            if mag != 1:
                legs[0] = str(mag) if legs[0] == "1" else f"{mag}*{legs[0]}"
            body = " (x) ".join(legs)
            if i == 0:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append((" - " if neg else " + ") + body)
        return "".join(parts)

    def __repr__(self):
        return f"TensorElement({self})"


def unit(legs) -> TensorElement:
    legs = tuple(legs)
    one = legs[0]._one if legs else 1
    return TensorElement(legs, {tuple(() for _ in legs): one})


def zero(legs) -> TensorElement:
    return TensorElement(tuple(legs), {})


def tensor(*factors) -> TensorElement:
    """Pure tensor of elements (tensor factors are flattened in place)."""
    legs: list = []
    terms = {(): 1}
    for f in factors:
        if isinstance(f, Element):
            legs.append(f.alg)
            new = {}
            for k, c in terms.items():
                for w, d in f.terms.items():
                    _add(new, k + (w,), c * d)
        elif isinstance(f, TensorElement):
            legs.extend(f.legs)
            new = {}
            for k, c in terms.items():
                for ws, d in f.terms.items():
                    _add(new, k + ws, c * d)
        else:
            raise TypeError(f"cannot tensor {type(f).__name__}")
        terms = new
    return TensorElement(tuple(legs), terms)


def _leg_product(p: Presentation, w, v) -> dict:
    if not p.rules:
        return {w + v: p._one}
    return p.reduce_word(w + v)


def tensor_mul(x: TensorElement, y: TensorElement) -> TensorElement:
    """Componentwise product (w1 (x) w2)(v1 (x) v2) = w1v1 (x) w2v2, bilinear."""
    x._check(y)
    legs = x.legs
    out: dict = {}
    for ws, c in x.terms.items():
        for vs, d in y.terms.items():
            parts = [_leg_product(p, w, v).items() for p, w, v in zip(legs, ws, vs)]
            for combo in itertools.product(*parts):
                coef = c * d
                for _, e in combo:
                    coef = coef * e
                _add(out, tuple(w for w, _ in combo), coef)
    return TensorElement(legs, out)


def map_leg(x: TensorElement, leg: int, f: Callable) -> TensorElement:
    """Apply a linear map to one leg (0-based) of every term and flatten.

    ``f`` takes an :class:`Element` of that leg and returns an Element, a
    TensorElement or a scalar; scalar images remove the leg.
    """
    if not 0 <= leg < len(x.legs):
        raise LegError(f"leg {leg} out of range for {len(x.legs)} legs")
    src = x.legs[leg]
    one = src._one
    images = {}
    for ws in x.terms:
        w = ws[leg]
        if w not in images:
            images[w] = f(Element(src, {w: one}))
    shape = None
    for img in images.values():
        if isinstance(img, (Element, TensorElement)):
            shape = img
            break
    if shape is None and not x.terms:
        shape = f(Element(src, {(): one}))
        if not isinstance(shape, (Element, TensorElement)):
            shape = None
    if shape is None:
        new_legs = x.legs[:leg] + x.legs[leg + 1:]
    elif isinstance(shape, Element):
        new_legs = x.legs[:leg] + (shape.alg,) + x.legs[leg + 1:]
    else:
        new_legs = x.legs[:leg] + shape.legs + x.legs[leg + 1:]
    out: dict = {}
    for ws, c in x.terms.items():
        img = images[ws[leg]]
        pre, post = ws[:leg], ws[leg + 1:]
        if isinstance(img, Element):
            for u, d in img.terms.items():
                _add(out, pre + (u,) + post, c * d)
        elif isinstance(img, TensorElement):
            for us, d in img.terms.items():
                _add(out, pre + us + post, c * d)
        elif img:
            _add(out, pre + post, c * img)
    return TensorElement(new_legs, out)


def flip(x: TensorElement) -> TensorElement:
    if len(x.legs) != 2:
        raise LegError("flip needs exactly two legs")
    return TensorElement((x.legs[1], x.legs[0]), {(w, v): c for (v, w), c in x.terms.items()})


def mul_legs(x: TensorElement) -> Element:
    """The multiplication map m: A (x) A -> A."""
    if len(x.legs) != 2 or x.legs[0] is not x.legs[1]:
        raise LegError("mul_legs needs two legs over the same presentation")
    p = x.legs[0]
    out: dict = {}
    for (w, v), c in x.terms.items():
        for u, d in _leg_product(p, w, v).items():
            _add(out, u, c * d)
    return Element(p, out)


def map_legs(x: TensorElement, fs) -> TensorElement:
    """Apply one map per leg, right to left so leg indices stay valid."""
    for i in range(len(fs) - 1, -1, -1):
        if fs[i] is not None:
            x = map_leg(x, i, fs[i])
    return x
