"""Render catalog instances as ``.hopf`` documents.

The bundled ``axb.hopf`` and the ``builtin`` command both go through these
renderers, so every catalog rule system reaches the checker as text.
"""
from __future__ import annotations

from importlib import resources

from . import axb
from .ncalg import Presentation, Rule, format_terms
from .scalar import Field, QQ_q

BUNDLED = ("axb.hopf",)


def bundled_text(name: str = "axb.hopf") -> str:
    return resources.files("hopfforge").joinpath("data", name).read_text(encoding="utf-8")


def field_line(F: Field) -> str:
    if F.has_q:
        return "field ratfunc;"
    if F.characteristic:
        return f"field gf {F.characteristic};"
    return "field rational;"


def rule_line(P: Presentation, r: Rule) -> str:
    rhs = format_terms(sorted(r.rhs, key=lambda t: (len(t[0]), t[0])), P.word_str)
    s = f"rule {P.word_str(r.lhs)} -> {rhs}"
    if r.certificate is not None:
        items = []
        for c, left, i, right in r.certificate.terms:
            parts = [P.word_str(left)] if left else []
            parts.append(f"[{i + 1}]")
            if right:
                parts.append(P.word_str(right))
            items.append(("*".join(parts), c))
        s += " by " + format_terms(items, lambda body: body)
    return s + ";"


def _universal_blocks(inst: axb.AxbInstance) -> list[str]:
    P = inst.base
    H = inst.hopf
    alg = ["algebra A {", f"  gens {', '.join(P.generators)};"]
    alg += [f"  rel {rel};" for rel in P.relations]
    alg += [f"  {rule_line(P, r)}" for r in P.rules]
    alg += ["  measure axb(a, ainv, b);", "}"]
    hopf = ["hopf H on A {"]
    hopf += [f"  delta {g} = {H.delta_images[g]};" for g in P.generators]
    hopf += [f"  counit {g} = {H.counit_images[g]};" for g in P.generators]
    hopf += [f"  antipode {g} = {H.antipode_images[g]};" for g in P.generators]
    u, v = inst.u, inst.v
    hopf.append(f"  matrix {_matrix(u)} inverse {_matrix(v)};")
    hopf += ["  axb universal;", "}"]
    return ["\n".join(alg), "\n".join(hopf)]


def _matrix(m) -> str:
    return "[" + "; ".join(", ".join(str(m[i, j]) for j in range(m.n))
                           for i in range(m.n)) + "]"


def _coaction_blocks(with_opposite: bool) -> list[str]:
    out = ["algebra kx {\n  gens x;\n}",
           "coaction alpha on kx {\n  hopf H;\n  side right;\n  alpha x = x (x) a + 1 (x) b;\n}"]
    if with_opposite:
        out.append("coaction alphaop on kx {\n  hopf Hop;\n  side left;\n"
                   "  alphaop x = a (x) x + b (x) 1;\n}")
    return out


def _ideal_block(name: str, inst: axb.AxbInstance, marker: str) -> str:
    P = inst.base
    inherited = len(axb.universal_axb(inst.field).base.rules)
    lines = [f"ideal {name} of H {{"]
    lines += [f"  gen {g};" for g in inst.ideal]
    lines += [f"  {rule_line(P, r)}" for r in P.rules[inherited:]]
    lines += [f"  {marker}", "}"]
    return "\n".join(lines)


def _family_marker(inst: axb.AxbInstance) -> str:
    if inst.q is None:
        return "axb laurent;"
    return f"axb q = {inst.q}, n = {inst.n};"


def render_document(F: Field, ideals=(), opposite: bool = True, coactions: bool = True,
                    check: str = "all") -> str:
    """A document with the universal algebra over F and the given quotients.

    ``ideals`` is a sequence of (name, AxbInstance) pairs built over F.
    """
    U = axb.universal_axb(F)
    blocks = [field_line(F)] + _universal_blocks(U)
    if opposite:
        blocks.append("hopf Hop = opposite H;")
    if coactions:
        blocks += _coaction_blocks(opposite)
    for name, inst in ideals:
        blocks.append(_ideal_block(name, inst, _family_marker(inst)))
    if check:
        blocks.append(f"check {check};")
    return "\n\n".join(blocks) + "\n"


def bundled_document() -> str:
    """The shipped ``axb.hopf``: 𝒜, 𝒜^op, both coactions on k[x], and four quotients."""
    F = QQ_q
    ideals = [("Aq", axb.axb_qn("q", 1)), ("Aq2", axb.axb_qn("q", 2)),
              ("A23", axb.axb_qn(F(2), 3, F)), ("Laurent", axb.laurent_hopf(F))]
    header = ("# The universal quantum ax+b group over Q(q), its opposite, the\n"
              "# coactions on k[x], and the quotients A_q, A_{q,2}, A_{2,3}, k[a, a^-1].\n")
    return header + render_document(F, ideals)


def render_builtin(name: str, F: Field, q=None, n: int = 1) -> str:
    """Document for one catalog entry (``axb-universal``, ``axb-q``, ``axb-qn``, ``laurent``)."""
    if name == "axb-universal":
        return render_document(F)
    if name == "laurent":
        return render_document(F, [("Laurent", axb.laurent_hopf(F))], coactions=False,
                               opposite=False)
    if name == "axb-q":
        n = 1
    elif name != "axb-qn":
        raise ValueError(f"unknown catalog entry {name!r}")
    inst = axb.axb_qn(q, n, F)
    if inst.degenerate and inst.q == 1 and inst.n == 0:
        return render_document(F, coactions=False, opposite=False)
    label = "Aq" if inst.n == 1 else "Aqn"
    return render_document(F, [(label, inst)], coactions=False, opposite=False)
