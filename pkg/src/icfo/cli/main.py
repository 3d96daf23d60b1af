"""
icfo: one command line over the JSON artifact formats.

Every subcommand fills a Report; the report body (no timings) goes to stdout
and, with --out, the full document goes to a file. Exit codes: 0 pass,
1 fail, 2 bad input, 3 inconclusive.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Sequence

import numpy as np

from icfo.cli.report import EXIT_INPUT_ERROR, Report
from icfo.config.settings import get_settings
from icfo.corpus.random import random_morphisms
from icfo.corpus.runner import run_corpus
from icfo.data.io import (
    dump_certificate,
    dump_morphism,
    dump_simplex,
    dump_simplicial_set,
    dump_witness,
    load_any,
    load_simplex,
    load_witness,
    read_json,
    write_json,
)
from icfo.data.schemas import SchemaError
from icfo.extension.certificate import ExtensionCertificate, verify_certificate
from icfo.extension.prism import boundary_prism_cert, horn_prism_cert
from icfo.fibrant.agreement import criteria_agree, hypercover_after_factorization
from icfo.fibrant.factorization import factorize
from icfo.fibrant.path_object import path_object, path_object_oracle
from icfo.fibrant.spans import NotAWeakEquivalence, acyclic_span, round_span
from icfo.fibrant.weq import WeqCoverReport, is_weak_equivalence, weq_cover_certificate
from icfo.homotopy.groups import pi0, pi_n
from icfo.homotopy.truncation import truncate
from icfo.integration.abelian import (
    IncompatibleFaces,
    InfeasibleFilling,
    check_homotopy_witness,
    edge_period,
    fill_horn_abelian,
    find_homotopy_witness,
    period_defect,
)
from icfo.integration.forms import DegreeCapExceeded
from icfo.integration.simplices import (
    IntegrationSimplex,
    identity_violations,
    integrate_morphism,
    simplex_degeneracy,
    simplex_face,
    validate_simplex,
)
from icfo.kan.checks import (
    KanConditionError,
    check_hypercover,
    check_kan,
    check_kan_all,
    is_n_groupoid,
)
from icfo.kan.pullback import pullback_along_fibration
from icfo.linfty.algebra import JacobiError, LieNAlgebra, check_jacobi
from icfo.linfty.ce import ce_algebra, check_d_squared
from icfo.linfty.homology import h0_lie_algebra, homology, is_quasi_iso
from icfo.linfty.morphisms import LInftyMorphism, MorphismError, check_morphism
from icfo.linfty.tower import tower, tower_morphism
from icfo.simplicial.constructions import restrict_cap
from icfo.simplicial.core import (
    CapError,
    SimplicialIdentityError,
    SimplicialMorphism,
    SimplicialSet,
    terminal_map,
    truncate_cap,
)
from icfo.simplicial.hom import EnumerationLimit

logger = logging.getLogger(__name__)


class InputError(ValueError):
    """A command-line argument or input file does not fit the subcommand."""


# input helpers

def _load(report: Report, path: str, *kinds: str) -> Any:
    report.add_input(path)
    kind, obj = load_any(read_json(path))
    if kinds and kind not in kinds:
        raise InputError(f"{path}: expected {' or '.join(kinds)}, got {kind}")
    return obj


def _as_map(obj: SimplicialSet | SimplicialMorphism) -> SimplicialMorphism:
    return terminal_map(obj) if isinstance(obj, SimplicialSet) else obj


def _fit_map(f: SimplicialMorphism, cap: int | None) -> SimplicialMorphism:
    if cap is None or cap >= f.cap:
        return f
    return restrict_cap(f, cap)


def _fit_set(X: SimplicialSet, cap: int | None) -> SimplicialSet:
    if cap is None or cap >= X.cap:
        return X
    return truncate_cap(X, cap)


def _emit(args: argparse.Namespace, payload: dict) -> None:
    if getattr(args, "emit", None):
        write_json(payload, args.emit)


def _sizes(X: SimplicialSet) -> list[int]:
    return list(X.sizes)


def _summary(kind: str, obj: Any) -> dict:
    if isinstance(obj, SimplicialSet):
        return {"cap": obj.cap, "levels": _sizes(obj)}
    if isinstance(obj, SimplicialMorphism):
        return {"source": _sizes(obj.source), "target": _sizes(obj.target)}
    if isinstance(obj, ExtensionCertificate):
        return {"steps": len(obj), "base": _sizes(obj.base), "target": _sizes(obj.target)}
    if isinstance(obj, LieNAlgebra):
        return {"n": obj.n, "dims": list(obj.dims)}
    if isinstance(obj, LInftyMorphism):
        return {"source": list(obj.source.dims), "target": list(obj.target.dims), "arities": sorted(obj.taylor)}
    if isinstance(obj, IntegrationSimplex):
        return {"m": obj.m, "degcap": obj.degcap, "algebra": obj.algebra.name}
    return {"kind": kind}


# simplicial subcommands

def cmd_validate(args: argparse.Namespace, report: Report) -> None:
    report.add_input(args.path)
    try:
        kind, obj = load_any(read_json(args.path), strict=args.strict)
    except SchemaError as e:
        report.fail({"pointer": e.pointer or "<root>", "message": e.message}, reason="schema violation")
        return
    except SimplicialIdentityError as e:
        for v in e.violations[:20]:
            report.fail({"identity": v.identity, "level": v.level, "simplex": v.simplex, "lhs": v.lhs, "rhs": v.rhs})
        report.reason = f"{len(e.violations)} simplicial identity violation(s)"
        return
    except ValueError as e:
        report.fail({"message": str(e)}, reason="malformed artifact")
        return
    report.details = {"kind": kind, **_summary(kind, obj)}


def cmd_cert(args: argparse.Namespace, report: Report) -> None:
    if args.prism:
        if args.n is None or args.j is None:
            raise InputError("--prism needs --n and --j")
        build = boundary_prism_cert if args.prism == "boundary" else horn_prism_cert
        with report.phase("build"):
            cert = build(args.n, args.j).certificate
    else:
        if not args.path:
            raise InputError("cert needs a certificate file or --prism")
        cert = _load(report, args.path, "certificate")
    with report.phase("replay"):
        result = verify_certificate(cert)
    report.details = {
        "name": cert.name,
        "steps": len(cert),
        "replayed": result.steps_replayed,
        "target": _sizes(cert.target),
    }
    if args.prism:
        top = cert.target.nondegenerate(args.n + 1)
        report.details["top_cells"] = int(len(top))
    report.require(result.ok, {"step": result.failed_step, "reason": result.reason, **result.witness}, reason=result.reason)
    _emit(args, dump_certificate(cert))


def cmd_kan(args: argparse.Namespace, report: Report) -> None:
    f = _fit_map(_as_map(_load(report, args.path, "morphism", "simplicial_set")), args.cap)
    D = f.cap
    max_cells = get_settings().max_cells
    with report.phase("kan"):
        if args.m is not None:
            results = [check_kan(f, args.m, args.j or 0, max_cells=max_cells)]
        else:
            results = list(check_kan_all(f, D, max_cells=max_cells).results)
    report.details = {"results": [{"m": r.m, "j": r.j, "verdict": r.verdict, "squares": r.n_squares} for r in results]}
    for r in results:
        if not r.is_cover:
            report.fail({"condition": f"Kan({r.m},{r.j})", **(r.witness or {})})


def cmd_ngpd(args: argparse.Namespace, report: Report) -> None:
    X = _fit_set(_load(report, args.path, "simplicial_set"), args.cap)
    with report.phase("ngpd"):
        result = is_n_groupoid(X, args.n, X.cap, max_cells=get_settings().max_cells)
    report.details = {
        "n": args.n,
        "D": X.cap,
        "results": [{"m": r.m, "j": r.j, "verdict": r.verdict} for r in result.results],
    }
    if result.failure is not None:
        bad = result.failure
        needed = "Kan" if bad.m <= args.n else "Kan!"
        report.fail({"condition": f"{needed}({bad.m},{bad.j})", "verdict": bad.verdict, **(bad.witness or {})})


def cmd_hypercover(args: argparse.Namespace, report: Report) -> None:
    f = _fit_map(_as_map(_load(report, args.path, "morphism", "simplicial_set")), args.cap)
    with report.phase("hypercover"):
        result = check_hypercover(f, f.cap, max_cells=get_settings().max_cells)
    report.details = {
        "levels": [
            {"m": lv.m, "surjective": lv.surjective, "squares": lv.n_squares, "hit": lv.n_hit} for lv in result.levels
        ]
    }
    bad = result.first_failure
    if bad is not None:
        report.fail({"condition": f"Acyc({bad.m})", **(bad.witness or {})})


def cmd_pullback(args: argparse.Namespace, report: Report) -> None:
    f = _fit_map(_load(report, args.fibration, "morphism"), args.cap)
    g = _fit_map(_load(report, args.map, "morphism"), args.cap)
    D = min(f.cap, g.cap)
    with report.phase("pullback"):
        fp = pullback_along_fibration(f, g, D, max_cells=get_settings().max_cells)
    report.details = {"levels": _sizes(fp.obj)}
    _emit(args, dump_simplicial_set(fp.obj))


def cmd_pathobj(args: argparse.Namespace, report: Report) -> None:
    X = _fit_set(_load(report, args.path, "simplicial_set"), args.cap)
    D = X.cap - 1
    max_cells = get_settings().max_cells
    with report.phase("path_object"):
        P = path_object(X, D, check=True, max_cells=max_cells)
    report.details = {"D": D, "levels": _sizes(P.obj)}
    if args.oracle:
        with report.phase("oracle"):
            cmp = path_object_oracle(X, min(D, args.oracle_cap or D), path=P, max_cells=max_cells)
        report.details["oracle"] = [{"maps": a, "tuples": b} for a, b in cmp.levels]
        if not cmp.agrees:
            a, b = cmp.levels[cmp.first_mismatch]
            report.fail({"level": cmp.first_mismatch, "maps": a, "tuples": b}, reason="path object differs from oracle")
    _emit(args, dump_simplicial_set(P.obj))


def cmd_factorize(args: argparse.Namespace, report: Report) -> None:
    f = _fit_map(_load(report, args.path, "morphism"), args.cap)
    D = f.cap - 1
    max_cells = get_settings().max_cells
    with report.phase("factorize"):
        F = factorize(f, D, max_cells=max_cells)
    composite = F.p.compose(F.i)
    exact = all(np.array_equal(a, b) for a, b in zip(composite.components, F.f.components))
    report.details = {"D": D, "M": _sizes(F.M), "exact": exact}
    report.require(exact, {"reason": "p o i differs from f"})
    if args.check:
        with report.phase("check"):
            kan = check_kan_all(F.p, D, max_cells=max_cells)
            acyc = check_hypercover(F.to_source, D, max_cells=max_cells)
        report.details["p_kan"] = kan.ok
        report.details["pr1_hypercover"] = acyc.ok
        if not kan.ok:
            bad = kan.first_failure
            report.fail({"map": "p", "condition": f"Kan({bad.m},{bad.j})"})
        if not acyc.ok:
            report.fail({"map": "pr1", "condition": f"Acyc({acyc.first_failure.m})"})
    _emit(args, dump_morphism(F.p))


def cmd_weq(args: argparse.Namespace, report: Report) -> None:
    f = _fit_map(_load(report, args.path, "morphism"), args.cap)
    max_cells = get_settings().max_cells
    D = f.cap - 1
    verdicts: dict[str, str] = {}
    with report.phase(args.criterion):
        if args.criterion == "stalkwise":
            r = is_weak_equivalence(f, f.cap, n=args.n, max_cells=max_cells)
            verdicts["stalkwise"] = r.verdict
            report.details["checks"] = list(r.checks)
            if r.verdict == "fail":
                report.fail({"criterion": "stalkwise", "reason": r.reason})
            elif r.verdict == "inconclusive":
                report.inconclusive(r.reason)
        elif args.criterion == "covers":
            r = weq_cover_certificate(f, D, max_cells=max_cells)
            verdicts["covers"] = r.verdict
            _cover_witnesses(report, r)
        elif args.criterion == "hypercover":
            r = hypercover_after_factorization(f, D, max_cells=max_cells)
            verdicts["hypercover"] = "pass" if r.ok else "fail"
            if not r.ok:
                report.fail({"criterion": "hypercover", "condition": f"Acyc({r.first_failure.m})"})
        else:
            r = criteria_agree(f, D, max_cells=max_cells)
            verdicts = dict(r.verdicts())
            report.details["agree"] = r.agree
            if r.verdict == "inconclusive":
                reasons = [
                    r.stalkwise.reason if r.stalkwise else "",
                    r.covers.reason if r.covers else "",
                    r.hypercover_reason,
                ]
                report.inconclusive(next((x for x in reasons if x), "criterion inconclusive"))
            elif not r.agree:
                report.fail({"disagreement": verdicts}, reason="criteria disagree")
            elif r.verdict == "fail":
                if r.stalkwise is not None and r.stalkwise.reason:
                    report.fail({"criterion": "stalkwise", "reason": r.stalkwise.reason})
                if r.covers is not None:
                    _cover_witnesses(report, r.covers)
    report.details.update({"D": D, "verdicts": verdicts})


def _cover_witnesses(report: Report, r: WeqCoverReport) -> None:
    if r.verdict == "inconclusive":
        report.inconclusive(r.reason)
        return
    for crit in (r.first_step, r.w_eq):
        bad = crit.first_failure
        if bad is not None:
            report.fail({"criterion": crit.name, "level": bad.m, **(bad.witness or {})})


def cmd_span(args: argparse.Namespace, report: Report) -> None:
    f = _fit_map(_load(report, args.path, "morphism"), args.cap)
    D = f.cap - 1
    with report.phase("span"):
        span = acyclic_span(f, D, max_cells=get_settings().max_cells)
    report.details = {
        "D": D,
        "Z": _sizes(span.obj),
        "left_hypercover": span.left_report.ok,
        "right_hypercover": span.right_report.ok,
    }
    for leg, r in (("left", span.left_report), ("right", span.right_report)):
        if not r.ok:
            report.fail({"leg": leg, "condition": f"Acyc({r.first_failure.m})"})
    _emit(args, dump_simplicial_set(span.obj))


def cmd_round(args: argparse.Namespace, report: Report) -> None:
    w = _fit_map(_load(report, args.weq, "morphism"), args.cap)
    g = _fit_map(_load(report, args.map, "morphism"), args.cap)
    D = min(w.cap, g.cap) - 1
    with report.phase("round"):
        span = round_span(w, g, D, max_cells=get_settings().max_cells)
    report.details = {
        "D": D,
        "C'": _sizes(span.obj),
        "left_hypercover": span.left_report.ok,
        "unit_weq": span.unit_report.verdict,
    }
    if not span.left_report.ok:
        report.fail({"leg": "left", "condition": f"Acyc({span.left_report.first_failure.m})"})
    if span.unit_report.verdict == "inconclusive":
        report.inconclusive(span.unit_report.reason)
    _emit(args, dump_simplicial_set(span.obj))


def cmd_pi(args: argparse.Namespace, report: Report) -> None:
    X = _fit_set(_load(report, args.path, "simplicial_set"), args.cap)
    if args.n == 0:
        comps = pi0(X)
        report.details = {"n": 0, "components": len(comps), "class_of": list(comps.class_of)}
        return
    with report.phase("pi"):
        G = pi_n(X, args.basepoint, args.n, max_cells=get_settings().max_cells)
    report.details = {
        "n": args.n,
        "basepoint": args.basepoint,
        "order": G.order,
        "table": [list(row) for row in G.table],
        "classes": [list(c) for c in G.classes],
    }


def cmd_truncate(args: argparse.Namespace, report: Report) -> None:
    X = _load(report, args.path, "simplicial_set")
    D = args.cap if args.cap is not None else X.cap - 1
    with report.phase("truncate"):
        q = truncate(X, args.n, D, max_cells=get_settings().max_cells)
    report.details = {"n": args.n, "source": _sizes(q.source), "levels": _sizes(q.target)}
    _emit(args, dump_simplicial_set(q.target))


# L-infinity subcommands

def cmd_linfty(args: argparse.Namespace, report: Report) -> None:
    obj = _load(report, args.path, "lie_algebra", "linfty_morphism")
    action = args.action
    if isinstance(obj, LInftyMorphism):
        if action == "check":
            r = check_morphism(obj)
            report.require(r.ok, {"generator": obj.target.label(r.generator)} if not r.ok else None)
        elif action == "quasi":
            r = is_quasi_iso(obj)
            report.details = {"source_homology": list(r.source_dims), "target_homology": list(r.target_dims)}
            report.require(r.ok, {"degree": r.failed_degree})
        elif action == "tower":
            T = tower_morphism(obj)
            report.details = {"stages": T.source.labels(), "squares": list(T.squares)}
            for i, ok in enumerate(T.squares):
                report.require(ok, {"square": i, "between": T.source.labels()[i : i + 2]})
        else:
            raise InputError(f"linfty {action} expects a Lie n-algebra")
        return

    L = obj
    if action == "check":
        jac = check_jacobi(L)
        ce = ce_algebra(L)
        sq = check_d_squared(ce)
        report.details = {"jacobi": jac.ok, "d_squared_zero": sq.ok}
        report.require(jac.ok, jac.describe(L))
        if not sq.ok:
            report.fail({"generator": L.label(sq.generator), "d_squared": ce.describe(sq.value)})
        if jac.ok != sq.ok:
            report.fail({"disagreement": {"jacobi": jac.ok, "d_squared_zero": sq.ok}})
    elif action == "ce":
        ce = ce_algebra(L)
        report.details = {
            "degrees": {L.label(g): ce.degrees[g] for g in range(ce.n_generators)},
            "differential": {L.label(g): ce.describe(ce.d_generator(g)) for g in range(ce.n_generators)},
        }
    elif action == "hom":
        H = homology(L)
        report.details = {"dims": list(H.dims)}
        if L.dims[0]:
            H0 = h0_lie_algebra(L, H)
            report.details["h0_dims"] = list(H0.dims)
    elif action == "tower":
        T = tower(L)
        report.details = {"stages": [{"label": s.label, "dims": list(s.algebra.dims)} for s in T.stages]}
    else:
        raise InputError(f"linfty {action} expects an L-infinity morphism")


# integration subcommands

def cmd_int(args: argparse.Namespace, report: Report) -> None:
    degcap = args.degcap if args.degcap is not None else get_settings().default_degcap
    action = args.action
    if action == "validate":
        sigma = _load(report, args.paths[0], "simplex")
        r = validate_simplex(sigma)
        report.details = {"m": sigma.m, "degcap": sigma.degcap}
        report.require(r.ok, r.describe(sigma.algebra))
        if args.identities:
            for what in identity_violations(sigma):
                report.fail({"identity": what})
    elif action in ("face", "degeneracy"):
        sigma = _load(report, args.paths[0], "simplex")
        op = simplex_face if action == "face" else simplex_degeneracy
        out = op(sigma, args.i)
        r = validate_simplex(out)
        report.details = {"m": out.m}
        report.require(r.ok, r.describe(out.algebra))
        _emit(args, dump_simplex(out))
    elif action == "map":
        if len(args.paths) != 2:
            raise InputError("int map needs an L-infinity morphism and a simplex")
        phi = _load(report, args.paths[0], "linfty_morphism")
        report.add_input(args.paths[1])
        sigma = load_simplex(read_json(args.paths[1]), algebra=phi.source)
        out = integrate_morphism(phi, sigma, degcap=degcap, check=True)
        r = validate_simplex(out)
        report.details = {"m": out.m, "target": phi.target.name}
        report.require(r.ok, r.describe(out.algebra))
        _emit(args, dump_simplex(out))
    elif action == "fill":
        L = _load(report, args.paths[0], "lie_algebra")
        faces = {}
        for item in args.face or []:
            i, _, path = item.partition("=")
            report.add_input(path)
            faces[int(i)] = load_simplex(read_json(path), algebra=L)
        with report.phase("fill"):
            out = fill_horn_abelian(L, args.m, args.j, faces, degcap=degcap)
        report.details = {"m": out.m, "degcap": out.degcap}
        if out.m == 2 and L.dims[0]:
            report.details["periods"] = [[str(p) for p in edge_period(simplex_face(out, i))] for i in range(3)]
        _emit(args, dump_simplex(out))
    elif action == "period":
        sigma = _load(report, args.paths[0], "simplex")
        if sigma.m == 1:
            report.details = {"period": [str(p) for p in edge_period(sigma)]}
        else:
            defect = period_defect(sigma)
            report.details = {"defect": [str(p) for p in defect]}
            report.require(not any(defect), {"defect": [str(p) for p in defect]})
    elif action == "witness":
        if len(args.paths) != 2:
            raise InputError("int witness needs two simplices")
        s1 = _load(report, args.paths[0], "simplex")
        report.add_input(args.paths[1])
        s2 = load_simplex(read_json(args.paths[1]), algebra=s1.algebra)
        if args.witness:
            report.add_input(args.witness)
            w = load_witness(read_json(args.witness), algebra=s1.algebra)
        else:
            with report.phase("search"):
                w = find_homotopy_witness(s1, s2, args.n, degcap=degcap)
            if w is None:
                report.inconclusive(f"no prism witness with polynomial degree <= {2 * (degcap + 1)}")
                return
        r = check_homotopy_witness(s1, s2, w, args.n)
        report.details = {"n": args.n, "degcap": w.degcap}
        report.require(r.ok, {"failure": r.failure})
        _emit(args, dump_witness(w))


# corpus

def cmd_corpus(args: argparse.Namespace, report: Report) -> None:
    settings = get_settings()
    out = Path(args.out_dir or settings.corpus_dir)
    cap = args.cap if args.cap is not None else 3
    with report.phase("corpus"):
        run = run_corpus(out, cap=cap, max_cells=settings.max_cells)
    summary = run.summary
    report.details = {
        "cap": cap,
        "checks": int(len(summary)),
        "verdicts": {k: int(v) for k, v in summary["verdict"].value_counts().sort_index().items()},
    }
    for m in run.mismatches:
        report.fail(m, reason="corpus verdict differs from expectation")

    if args.random:
        disagreements = undecided = 0
        with report.phase("random"):
            for sample in random_morphisms(args.random, seed=args.seed, cap=cap, two_groupoids=args.two_groupoids):
                D = sample.morphism.cap - 1
                r = criteria_agree(sample.morphism, D, max_cells=settings.max_cells)
                if not r.conclusive:
                    undecided += 1
                    report.fail({"morphism": sample.name, "verdicts": r.verdicts()}, reason="criterion inconclusive")
                elif not r.agree:
                    disagreements += 1
                    report.fail({"morphism": sample.name, "verdicts": r.verdicts()}, reason="criteria disagree")
        report.details["random"] = {
            "count": args.random,
            "seed": args.seed,
            "disagreements": disagreements,
            "inconclusive": undecided,
        }


COMMANDS: dict[str, Callable[[argparse.Namespace, Report], None]] = {
    "validate": cmd_validate,
    "cert": cmd_cert,
    "kan": cmd_kan,
    "ngpd": cmd_ngpd,
    "hypercover": cmd_hypercover,
    "pullback": cmd_pullback,
    "pathobj": cmd_pathobj,
    "factorize": cmd_factorize,
    "weq": cmd_weq,
    "span": cmd_span,
    "round": cmd_round,
    "pi": cmd_pi,
    "truncate": cmd_truncate,
    "linfty": cmd_linfty,
    "int": cmd_int,
    "corpus": cmd_corpus,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cap", type=int, default=None, help="Highest simplicial level to use")
    common.add_argument("--out", default="", help="Write the full report (with timings) here")
    common.add_argument("--emit", default="", help="Write the constructed object here as JSON")

    ap = argparse.ArgumentParser(prog="icfo", description="Exact checks for higher groupoids and Lie n-algebras")
    sub = ap.add_subparsers(dest="cmd", required=True)

    v = sub.add_parser("validate", parents=[common], help="Validate any artifact file")
    v.add_argument("path")
    v.add_argument("--strict", action="store_true", help="Reject unknown keys")

    c = sub.add_parser("cert", parents=[common], help="Replay an extension certificate")
    c.add_argument("path", nargs="?", default="")
    c.add_argument("--prism", choices=["boundary", "horn"], default="")
    c.add_argument("--n", type=int, default=None)
    c.add_argument("--j", type=int, default=None)

    k = sub.add_parser("kan", parents=[common], help="Kan conditions of a map (or of X -> *)")
    k.add_argument("path")
    k.add_argument("--m", type=int, default=None)
    k.add_argument("--j", type=int, default=None)

    g = sub.add_parser("ngpd", parents=[common], help="Is X an n-groupoid up to the cap")
    g.add_argument("path")
    g.add_argument("--n", type=int, required=True)

    h = sub.add_parser("hypercover", parents=[common], help="Acyclic fibration test")
    h.add_argument("path")

    p = sub.add_parser("pullback", parents=[common], help="Pull a Kan fibration back along a map")
    p.add_argument("fibration")
    p.add_argument("map")

    po = sub.add_parser("pathobj", parents=[common], help="Path object of a Kan complex")
    po.add_argument("path")
    po.add_argument("--oracle", action="store_true", help="Compare with Hom(Delta[n] x Delta[1], X)")
    po.add_argument("--oracle-cap", type=int, default=None)

    f = sub.add_parser("factorize", parents=[common], help="f = p o i through X x_Y Y^{Delta[1]}")
    f.add_argument("path")
    f.add_argument("--check", action="store_true", help="Also test p for Kan and pr1 for acyclicity")

    w = sub.add_parser("weq", parents=[common], help="Weak equivalence criteria")
    w.add_argument("path")
    w.add_argument("--criterion", choices=["stalkwise", "covers", "hypercover", "all"], default="all")
    w.add_argument("--n", type=int, default=None)

    s = sub.add_parser("span", parents=[common], help="Span of hypercovers for a weak equivalence")
    s.add_argument("path")

    r = sub.add_parser("round", parents=[common], help="Round a span X <-w- C -g-> Y")
    r.add_argument("weq")
    r.add_argument("map")

    pi = sub.add_parser("pi", parents=[common], help="Homotopy groups")
    pi.add_argument("path")
    pi.add_argument("--n", type=int, default=1)
    pi.add_argument("--basepoint", type=int, default=0)

    t = sub.add_parser("truncate", parents=[common], help="Quotient X -> tau<=n X")
    t.add_argument("path")
    t.add_argument("--n", type=int, required=True)

    li = sub.add_parser("linfty", parents=[common], help="Lie n-algebras and L-infinity morphisms")
    li.add_argument("action", choices=["check", "ce", "hom", "quasi", "tower"])
    li.add_argument("path")

    it = sub.add_parser("int", parents=[common], help="Integration simplices")
    it.add_argument("action", choices=["validate", "face", "degeneracy", "map", "fill", "period", "witness"])
    it.add_argument("paths", nargs="+")
    it.add_argument("--degcap", type=int, default=None)
    it.add_argument("--i", type=int, default=0)
    it.add_argument("--m", type=int, default=2)
    it.add_argument("--j", type=int, default=1)
    it.add_argument("--n", type=int, default=1)
    it.add_argument("--face", action="append", help="i=PATH, one per horn face")
    it.add_argument("--witness", default="")
    it.add_argument("--identities", action="store_true", help="Also check simplicial identities")

    co = sub.add_parser("corpus", parents=[common], help="Regenerate and re-verify the bundled corpus")
    co.add_argument("--out-dir", default="")
    co.add_argument("--random", type=int, default=0, help="Also test N seeded random morphisms")
    co.add_argument("--seed", type=int, default=0)
    co.add_argument("--two-groupoids", action="store_true")
    return ap


def run(argv: Sequence[str] | None = None) -> tuple[int, Report | None]:
    args = build_parser().parse_args(argv)
    report = Report(args.cmd)
    try:
        COMMANDS[args.cmd](args, report)
    except (SchemaError, SimplicialIdentityError, InputError, FileNotFoundError) as e:
        print(f"icfo {args.cmd}: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR, None
    except (CapError, EnumerationLimit, DegreeCapExceeded, InfeasibleFilling) as e:
        report.inconclusive(str(e))
    except (KanConditionError, NotAWeakEquivalence, IncompatibleFaces, MorphismError, JacobiError) as e:
        report.fail({"error": type(e).__name__, "message": str(e)}, reason=str(e))
    report.check()
    logger.info("%s: %s %s", args.cmd, report.verdict, report.reason)
    print(report.render())
    if args.out:
        report.write(args.out)
    return report.exit_code, report


def main(argv: Sequence[str] | None = None) -> int:
    settings = get_settings()
    logging.basicConfig(
        level=getattr(logging, settings.log_level),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    code, _ = run(argv)
    return code


if __name__ == "__main__":
    sys.exit(main())
