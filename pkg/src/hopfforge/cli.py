"""Command line: run check suites on ``.hopf`` documents or catalog entries.

    hopfforge check FILE [--suite S]... [--max-degree D] [--samples N] [--seed K]
                         [--fuel F] [--field rational|gf:P|ratfunc] [--report text|json]
    hopfforge builtin NAME [--q EXPR] [--n N] [same options] [--print]

Exit status: 0 all pass, 1 a case failed, 2 input error, 3 unverified cases only.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass
from pathlib import Path

from . import axb
from .comodule import (check_filtration, check_left_coaction, check_right_coaction,
                       classify_to_universal)
from .documents import BUNDLED, bundled_text, render_builtin
from .dsl import (SUITES, BuildError, Model, ParseError, build, eval_scalar,
                  parse_expr, parse_spec)
from .hopf import (check_antipode, check_bialgebra, check_commutative, remark1_matrix_check,
                   theorem1_verify)
from .ncalg import (DEFAULT_FUEL, NonTerminationError, certificate_holds,
                    check_local_confluence, random_element, relations_vanish, validate_measure)
from .oracle import oracle_decode, oracle_equal, oracle_from_element
from .report import FAIL, PASS, UNVERIFIED, Report
from .scalar import QQ, QQ_q, field_from_name

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_UNVERIFIED = 0, 1, 2, 3


@dataclass
class Options:
    max_degree: int = 6
    samples: int = 100
    seed: int = 42
    fuel: int = DEFAULT_FUEL
    n_max: int = 10


class InapplicableSuite(ValueError):
    pass


# --------------------------------------------------------------------------
# suites
# --------------------------------------------------------------------------

def _tag(rep: Report, label: str, out: Report) -> None:
    for c in rep.cases:
        c.case = f"{label}:{c.case}"
        out.cases.append(c)


def _guard(out: Report, suite: str, label: str, fn) -> None:
    """Run one check; reduction that runs out of fuel becomes an unverified case."""
    try:
        rep = fn()
    except NonTerminationError as exc:
        out.add(suite, f"{label}:fuel", False, str(exc), status=UNVERIFIED)
        return
    if rep is not None:
        _tag(rep, label, out)


def _hopfs(m: Model):
    return [(k, e) for k, e in m.hopfs.items() if e.hopf is not None]


def _markers(m: Model, kind: str):
    return [(k, e) for k, e in _hopfs(m) if e.axb is not None and e.axb.kind == kind]


def _suite_bialgebra(m, o, out):
    for name, e in _hopfs(m):
        _guard(out, "bialgebra", name,
               lambda: check_bialgebra(e.hopf, o.max_degree, o.samples, o.seed))


def _suite_antipode(m, o, out):
    for name, e in _hopfs(m):
        if e.hopf.has_antipode:
            _guard(out, "antipode", name,
                   lambda: check_antipode(e.hopf, o.max_degree, o.samples, o.seed))


def _suite_theorem1(m, o, out):
    for name, e in _hopfs(m):
        if e.matrix is None:
            continue

        def run(e=e):
            u, v = e.matrix
            verdict = theorem1_verify(e.hopf.without_antipode(), u, v, e.declared_antipode,
                                      o.max_degree, o.samples, o.seed)
            rep = verdict.report
            if verdict.ok and e.hopf.has_antipode:
                same = all(verdict.value.antipode_images[g] == e.hopf.antipode_images[g]
                           for g in e.hopf.base.generators)
                rep.add("theorem1", "matches-declared-antipode", same,
                        "constructed S differs from the declared antipode")
            return rep
        _guard(out, "theorem1", name, run)


def _suite_hopf_ideal(m, o, out):
    from .hopf import hopf_ideal_verify
    for name, ie in m.ideals.items():
        _guard(out, "hopf-ideal", name,
               lambda: hopf_ideal_verify(ie.parent.hopf, ie.gens, ie.rules, ie.measure, name,
                                         o.max_degree, o.samples, o.seed, o.fuel).report)


def _suite_coaction(m, o, out):
    for name, c in m.coactions.items():
        check = check_right_coaction if c.side == "right" else check_left_coaction
        _guard(out, "coaction", name, lambda: check(c, o.max_degree, o.samples, o.seed))


def _suite_filtration(m, o, out):
    for name, c in m.coactions.items():
        if c.side == "right" and len(c.B.generators) == 1:
            _guard(out, "filtration", name,
                   lambda: check_filtration(c, o.n_max, o.samples, o.seed))


def _suite_universality(m, o, out):
    for name, c in m.coactions.items():
        if c.side != "right" or len(c.B.generators) != 1 or not c.hopf.has_antipode:
            continue
        if not {"a", "ainv", "b"} <= set(c.hopf.base.generators):
            continue

        def run(c=c):
            ainv0 = c.hopf.base.gen("ainv")
            v = classify_to_universal(c.hopf, c, ainv0, min(o.samples, 50), o.max_degree, o.seed)
            for case in v.report.cases:
                case.suite = "universality"
            return v.report
        _guard(out, "universality", name, run)


def _same_structure(H1, H2) -> str | None:
    """None when two Hopf presentations agree term by term (certificates aside)."""
    P1, P2 = H1.base, H2.base
    if P1.generators != P2.generators:
        return "generators differ"
    if [r.terms for r in P1.relations] != [r.terms for r in P2.relations]:
        return "relations differ"
    if [(r.lhs, r.rhs) for r in P1.rules] != [(r.lhs, r.rhs) for r in P2.rules]:
        return "rewrite rules differ"
    for g in P1.generators:
        if H1.delta_images[g].terms != H2.delta_images[g].terms:
            return f"Delta({g}) differs"
        if H1.counit_images[g] != H2.counit_images[g]:
            return f"eps({g}) differs"
        if H1.has_antipode != H2.has_antipode or (
                H1.has_antipode and H1.antipode_images[g].terms != H2.antipode_images[g].terms):
            return f"S({g}) differs"
    return None


def _concrete_grid(F):
    return [(2, 3), (3, 2)]


def _suite_section4(m, o, out):
    for name, e in _markers(m, "universal"):
        def run(e=e):
            F = m.field
            rep = Report()
            diff = _same_structure(e.hopf, axb.universal_axb(F).hopf)
            rep.add("section4", "catalog-match", diff is None, diff)
            grid = [("q", n) for n in range(1, 9)] if F.has_q else []
            grid += _concrete_grid(F)
            for q, n in grid:
                rep.extend(axb.section4_identities(q, n, F))
            return rep
        _guard(out, "section4", name, run)


def _suite_lattice(m, o, out):
    for name, e in _markers(m, "universal"):
        def run():
            F = m.field
            q = "q" if F.has_q else 2
            rep = Report()
            for n in (1, 2):
                for k in (-2, -1, 2, 3):
                    rep.extend(axb.subgroup_morphism(q, n, k, F).report)
            wrong = axb.hopf_surjection(axb.axb_q(q, F).hopf, axb.axb_qn(q, 2, F).hopf)
            rep.add("lattice", "reverse-direction-rejected", not wrong.ok,
                    "A_{q,1} -> A_{q,2} was accepted")
            return rep
        _guard(out, "lattice", name, run)


def oracle_agreement(P, q, n: int, samples: int, max_degree: int, seed, label: str = ""):
    """Compare engine equality with the crossed-product model on random products.

    Every third comparison is against an element built from the model's image
    (equal), every third against that element plus b (unequal), and the rest
    against an independent random product.
    """
    rng = random.Random(f"{seed}:oracle:{label}")
    b = P.gen("b")
    disagreements, shape_bad = [], None
    for i in range(samples):
        x, y = random_element(P, rng, max_degree), random_element(P, rng, max_degree)
        xy = x * y
        if i % 3 == 0:
            z = oracle_decode(oracle_from_element(xy, q, n), P)
        elif i % 3 == 1:
            z = oracle_decode(oracle_from_element(xy, q, n), P) + b
        else:
            z = random_element(P, rng, max_degree) * random_element(P, rng, max_degree)
        if (xy == z) != oracle_equal(xy, z, q, n):
            disagreements.append(f"x*y = {xy}, z = {z}")
        if shape_bad is None:
            bad = [w for w in xy.terms if not axb.normal_form_shape_ok(w, n)]
            if bad:
                shape_bad = P.word_str(bad[0])
    rep = Report()
    rep.add("oracle", "agreement", not disagreements,
            disagreements and f"{len(disagreements)} disagreements; first: {disagreements[0]}")
    rep.add("oracle", "normal-form-shape", shape_bad is None, shape_bad)
    return rep


def _suite_oracle(m, o, out):
    for name, e in _markers(m, "family"):
        n, q = e.axb.n, e.q
        if n < 1 or not q:
            continue

        def run(e=e, n=n, q=q, name=name):
            rep = Report()
            cat = axb.axb_qn(q, n, m.field)
            diff = _same_structure(e.hopf, cat.hopf)
            rep.add("oracle", "catalog-match", diff is None, diff)
            rep.extend(oracle_agreement(e.hopf.base, q, n, o.samples, o.max_degree, o.seed, name))
            return rep
        _guard(out, "oracle", name, run)


def _suite_remark1(m, o, out):
    for name, e in _hopfs(m):
        if e.matrix is not None and e.hopf.has_antipode:
            _guard(out, "remark1", name, lambda: remark1_matrix_check(e.hopf, e.matrix[0]).report)


def _confluence_targets(m: Model):
    seen, out = set(), []
    for name, P in m.algebras.items():
        if P.rules and id(P) not in seen:
            seen.add(id(P))
            out.append((name, P))
    for name, e in _hopfs(m):
        P = e.hopf.base
        if P.rules and id(P) not in seen:
            seen.add(id(P))
            out.append((name, P))
    return out


def confluence_report(P) -> Report:
    rep = Report()
    if P.measure is None:
        rep.add("confluence", "termination-measure", False,
                "no termination measure declared; termination only bounded by fuel",
                status=UNVERIFIED)
    else:
        bad = validate_measure(P)
        rep.add("confluence", "termination-measure", not bad,
                bad and f"measure does not drop on {P.word_str(bad[0].lhs)}")
    missing = [r for r in P.rules if r.certificate is None]
    wrong = [r for r in P.rules if r.certificate is not None and not certificate_holds(P, r)]
    if wrong:
        rep.add("confluence", "rule-certificates", False,
                f"certificate of {P.word_str(wrong[0].lhs)} does not expand to lhs - rhs")
    elif missing:
        rep.add("confluence", "rule-certificates", False,
                f"rule {P.word_str(missing[0].lhs)} has no certificate", status=UNVERIFIED)
    else:
        rep.add("confluence", "rule-certificates", True)
    left = relations_vanish(P)
    rep.add("confluence", "relations-vanish", not left, left and f"{left[0]} does not reduce to 0")
    conf = check_local_confluence(P)
    rep.add("confluence", "local-confluence", conf.ok, conf.diagnostic,
            status=UNVERIFIED if conf.status == "unverified" else None)
    return rep


def _suite_confluence(m, o, out):
    for name, P in _confluence_targets(m):
        _guard(out, "confluence", name, lambda: confluence_report(P))


def _suite_degenerate(m, o, out):
    for name, e in _hopfs(m):
        mk = e.axb
        if mk is None or not (mk.kind == "laurent" or (mk.kind == "family" and (not e.q or mk.n == 0))):
            continue
        _guard(out, "degenerate", name,
               lambda: check_commutative(e.hopf, o.samples, o.max_degree, o.seed))


_RUNNERS = {
    "bialgebra": _suite_bialgebra, "antipode": _suite_antipode, "theorem1": _suite_theorem1,
    "hopf-ideal": _suite_hopf_ideal, "coaction": _suite_coaction,
    "filtration": _suite_filtration, "section4": _suite_section4, "lattice": _suite_lattice,
    "oracle": _suite_oracle, "remark1": _suite_remark1, "confluence": _suite_confluence,
    "universality": _suite_universality, "degenerate": _suite_degenerate,
}
assert tuple(_RUNNERS) == SUITES


def run_checks(model: Model, suites=("all",), options: Options | None = None,
               strict: bool = False) -> Report:
    """Run the requested suites in declaration order.

    With ``strict``, a suite that was named explicitly but has nothing to
    check raises :class:`InapplicableSuite`.
    """
    o = options or Options()
    out = Report(seed=o.seed, fuel=o.fuel, field=model.field.name)
    wanted = SUITES if "all" in suites else tuple(dict.fromkeys(suites))
    for s in wanted:
        before = len(out.cases)
        _RUNNERS[s](model, o, out)
        if strict and "all" not in suites and len(out.cases) == before:
            raise InapplicableSuite(f"suite {s!r} has nothing to check in this document")
    return out


# --------------------------------------------------------------------------
# report formatting
# --------------------------------------------------------------------------

def format_report(r: Report, mode: str = "text", timings: bool = False) -> str:
    """``text``: aligned columns and a summary line.  ``json``: the versioned schema.

    Durations are only emitted with ``timings`` so that reports stay byte-stable.
    """
    if mode == "json":
        cases = [{"suite": c.suite, "id": c.case, "status": c.status, "witness": c.witness,
                  "duration_ms": round(c.duration * 1000, 3) if timings else None}
                 for c in r.cases]
        return json.dumps({"version": 1, "seed": r.seed, "cases": cases},
                          separators=(",", ":")) + "\n"
    if mode != "text":
        raise ValueError(f"unknown report mode {mode!r}")
    w_suite = max((len(c.suite) for c in r.cases), default=5)
    w_case = max((len(c.case) for c in r.cases), default=4)
    lines = []
    for c in r.cases:
        line = f"{c.suite:<{w_suite}}  {c.case:<{w_case}}  {c.status:<10}"
        if timings:
            line += f"  {c.duration * 1000:9.2f} ms"
        if c.witness:
            line += f"  {c.witness}"
        lines.append(line.rstrip())
    n = r.counts()
    lines.append(f"{n[PASS]} passed, {n[FAIL]} failed, {n[UNVERIFIED]} unverified"
                 f" (seed {r.seed}, field {r.field})")
    return "\n".join(lines) + "\n"


def exit_code(r: Report) -> int:
    worst = r.worst
    if worst == FAIL:
        return EXIT_FAIL
    if worst == UNVERIFIED:
        return EXIT_UNVERIFIED
    return EXIT_OK


# --------------------------------------------------------------------------
# entry point
# --------------------------------------------------------------------------

def _common(p: argparse.ArgumentParser):
    p.add_argument("--suite", action="append", choices=("all",) + SUITES,
                   help="suite to run (repeatable; default: the document's check directives)")
    p.add_argument("--max-degree", type=int, default=None)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--fuel", type=int, default=None)
    p.add_argument("--n-max", type=int, default=None, help="filtration depth (default 10)")
    p.add_argument("--field", default=None, help="rational | gf:P | ratfunc")
    p.add_argument("--report", choices=("text", "json"), default="text")
    p.add_argument("--timings", action="store_true", help="include durations in the report")


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hopfforge", description="Run check suites on .hopf documents or catalog entries.")
    sub = p.add_subparsers(dest="command", required=True)
    c = sub.add_parser("check", help="check a .hopf document")
    c.add_argument("file")
    _common(c)
    for name, text in (("builtin", "check a catalog entry"), ("run", "alias of builtin")):
        b = sub.add_parser(name, help=text)
        b.add_argument("name", choices=axb.CATALOG)
        b.add_argument("--q", default=None, help="parameter q: 'q' (generic) or a field element")
        b.add_argument("--n", type=int, default=1)
        b.add_argument("--print", action="store_true", help="print the document and exit")
        _common(b)
    return p


def _options(args, model: Model) -> tuple[tuple, Options]:
    o = Options()
    suites = ("all",)
    for d in model.checks:
        suites = d.suites
        for k, v in d.options:
            setattr(o, k, v)
    for k in ("max_degree", "samples", "seed", "fuel", "n_max"):
        v = getattr(args, k)
        if v is not None:
            setattr(o, k, v)
    if args.suite:
        suites = tuple(args.suite)
    return suites, o


def _read_document(path: str) -> str:
    p = Path(path)
    if p.exists():
        return p.read_text(encoding="utf-8")
    if p.name in BUNDLED and len(p.parts) == 1:
        return bundled_text(p.name)
    raise FileNotFoundError(f"no such file: {path}")


def _builtin_text(args) -> str:
    q_text = args.q
    if args.field is not None:
        F = field_from_name(args.field)
    elif args.name == "laurent" or (q_text is not None and "q" not in q_text):
        F = QQ
    else:
        F = QQ_q
    q = None
    if args.name in ("axb-q", "axb-qn"):
        q = eval_scalar(parse_expr(q_text or "q"), F)
    return render_builtin(args.name, F, q, args.n)


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        if args.command == "check":
            text = _read_document(args.file)
        else:
            text = _builtin_text(args)
            if args.print:
                sys.stdout.write(text)
                return EXIT_OK
        doc = parse_spec(text)
        field = field_from_name(args.field) if args.field else None
        model = build(doc, field)
        suites, o = _options(args, model)
        for P in {id(P): P for P in _all_presentations(model)}.values():
            P.fuel = o.fuel
        report = run_checks(model, suites, o, strict=bool(args.suite))
    except (ParseError, BuildError, InapplicableSuite, FileNotFoundError, ValueError,
            ZeroDivisionError, TypeError) as exc:
        print(f"hopfforge: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    sys.stdout.write(format_report(report, args.report, args.timings))
    return exit_code(report)


def _all_presentations(m: Model):
    yield from m.algebras.values()
    for e in m.hopfs.values():
        if e.hopf is not None:
            yield e.hopf.base


if __name__ == "__main__":
    sys.exit(main())
