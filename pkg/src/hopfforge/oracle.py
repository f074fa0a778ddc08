"""Crossed-product model of 𝒜_{q,n}, independent of the rewriting engine.

Put b_i = aⁱ·b·a⁻ⁱ for i in Z.  Then

* a^t·b_j = b_{j+t}·a^t, since a^t·(a^j b a^-j) = a^(j+t) b a^-(j+t) · a^t;
* conjugating aⁿb = q·baⁿ by a^i gives a^(i+n) b a^-i = q·a^i b a^(n-i),
  i.e. b_{i+n} = q·b_i, so b_j = q^⌊j/n⌋·b_{j mod n}.

Every word therefore equals a scalar times b_{i1}···b_{im}·a^t with
0 <= i_k < n, written (I; t), and

    (I; t)·(J; s) = q^(Σ ⌊(j+t)/n⌋) · (I ++ ((J + t) mod n); t + s).

The words (I; t) correspond bijectively to the normal forms
a^{i1}·b·a^{i2-i1}··· of 𝒜_{q,n} after regrouping, so equality in this
model is equality in 𝒜_{q,n}.
"""
from __future__ import annotations

from typing import Mapping

from .ncalg import Element, Presentation

CrossedWord = tuple  # (indices: tuple[int, ...], shift: int)
UNIT: CrossedWord = ((), 0)


def _add(d: dict, k, c):
    v = d.get(k)
    v = c if v is None else v + c
    if v:
        d[k] = v
    else:
        d.pop(k, None)


def crossed_word_mul(x: CrossedWord, y: CrossedWord, q, n: int):
    """(coefficient, word) of the product of two crossed words."""
    (I, t), (J, s) = x, y
    e = sum((j + t) // n for j in J)
    return q ** e, (I + tuple((j + t) % n for j in J), t + s)


def oracle_mul(u: Mapping, v: Mapping, q, n: int) -> dict:
    if n < 1:
        raise ValueError("the crossed-product model needs n >= 1")
    out: dict = {}
    for x, c in u.items():
        for y, d in v.items():
            e, w = crossed_word_mul(x, y, q, n)
            _add(out, w, c * d * e)
    return out


def generator_images(names) -> list:
    table = {"a": ((), 1), "ainv": ((), -1), "b": ((0,), 0)}
    try:
        return [table[g] for g in names]
    except KeyError as exc:
        raise ValueError(f"no crossed-product image for generator {exc.args[0]}") from None


def oracle_from_element(x: Element, q, n: int) -> dict:
    """Image of an element of any presentation on generators a, ainv, b."""
    if n < 1:
        raise ValueError("the crossed-product model needs n >= 1")
    images = generator_images(x.alg.generators)
    out: dict = {}
    for w, c in x.terms.items():
        coef, cw = x.alg.field.one, UNIT
        for i in w:
            e, cw = crossed_word_mul(cw, images[i], q, n)
            coef = coef * e
        _add(out, cw, c * coef)
    return out


def oracle_equal(x: Element, y: Element, q, n: int) -> bool:
    return oracle_from_element(x - y, q, n) == {}


def oracle_decode(comb: Mapping, P: Presentation) -> Element:
    """An element of P whose raw words realise ``comb``: b_i ↦ aⁱ·b·a⁻ⁱ, then a^t."""
    a, ainv, b = (P.generators.index(g) for g in ("a", "ainv", "b"))

    def apow(k):
        return (a,) * k if k >= 0 else (ainv,) * (-k)

    out = P.zero()
    for (I, t), c in comb.items():
        w: tuple = ()
        for i in I:
            w += apow(i) + (b,) + apow(-i)
        out = out + P.word(w + apow(t)).scale(c)
    return out
