"""Command-line front end: validate, compose, coherence, morita, rep-check, suite."""
from __future__ import annotations

import argparse
import itertools
import json
import math
import sys
from pathlib import Path

from . import bicat
from .algebra import RingCalculus, search_bimodule_iso, tensor_over
from .config import SearchConfig
from .errors import AxiomViolation, MoritaError, NotCertified, ParseError
from .groupoid import (Bibundle, check_biprincipal, check_left_principal, find_bibundle_iso,
                       hs_tensor)
from .groupoid_bicat import GroupoidCalculus
from .groupoid_morita import induced_action_report, morita_decide
from .multimatrix import CstarCalculus, certify_equivalence_cstar, interior_tensor
from .report import Report
from .rings import certify_equivalence, induced_functor_report
from .serialize import build, document_for, load_document, load_workspace, save_document

CALCULI = ("rings", "cstar", "groupoids")
CELL_KIND = {"rings": "bimodule", "cstar": "correspondence", "groupoids": "bibundle"}


def _config(args) -> SearchConfig:
    return SearchConfig(seed=args.seed)


def _expect(doc, kind):
    if doc.kind != kind:
        raise MoritaError(f"{doc.name}: expected a {kind} document, got {doc.kind}")


def _axiom_witness(exc: AxiomViolation) -> dict:
    return {"axiom": exc.axiom, "witness": list(exc.witness) if isinstance(exc.witness, tuple)
            else exc.witness}


# -- validate ----------------------------------------------------------------------------

def _expand(paths) -> list[Path]:
    out = []
    for p in map(Path, paths):
        out.extend(sorted(p.glob("*.json")) if p.is_dir() else [p])
    return out


def cmd_validate(args, report: Report) -> None:
    for path in _expand(args.files):
        try:
            doc = load_document(path)
        except ParseError as exc:
            report.add(str(path), "fail", {"parse_error": str(exc), "line": exc.line,
                                           "col": exc.col})
            continue
        try:
            build(doc)
        except AxiomViolation as exc:
            report.add(doc.name, "fail", _axiom_witness(exc), kind=doc.kind)
        except (ParseError, ValueError) as exc:
            report.add(doc.name, "fail", {"error": str(exc)}, kind=doc.kind)
        else:
            report.add(doc.name, "pass", kind=doc.kind)


# -- compose -----------------------------------------------------------------------------

def cmd_compose(args, report: Report) -> None:
    lhs_doc, rhs_doc = load_document(args.lhs), load_document(args.rhs)
    kind = CELL_KIND[args.calculus]
    _expect(lhs_doc, kind)
    _expect(rhs_doc, kind)
    m, n = build(lhs_doc), build(rhs_doc)
    name = args.name or f"{lhs_doc.name}*{rhs_doc.name}"
    if args.calculus == "rings":
        calc = RingCalculus(_config(args))
        out = tensor_over(m, n).bimodule
        report.add("compose", "pass", {"dims": [m.dim, n.dim, out.dim]})
        lam = bicat.check_unitors_invertible(calc, out)
        report.check("unitors-invertible", lam.holds, lam.witness)
    elif args.calculus == "cstar":
        out = interior_tensor(m, n)
        report.add("compose", "pass", {"mult": out.mult.tolist(), "note": "strict"})
    else:
        t = hs_tensor(m, n)
        out = t.bibundle
        report.add("compose", "pass", {"sizes": [m.size, n.size, out.size],
                                       "pullback": len(t.projection)})
        calc = GroupoidCalculus()
        lam = bicat.check_unitors_invertible(calc, out) if check_left_principal(out).holds \
            else bicat.CoherenceReport("invertibility", True)
        report.check("unitors-invertible", lam.holds, lam.witness)
    doc = document_for(out, name)
    report.data["output"] = {"name": name, "kind": doc.kind, "digest": doc.digest()}
    if args.out:
        save_document(doc, args.out)


# -- coherence ---------------------------------------------------------------------------

def _calculus(name, config):
    return {"rings": lambda: RingCalculus(config), "cstar": CstarCalculus,
            "groupoids": GroupoidCalculus}[name]()


def _composable(calc, a, b) -> bool:
    return calc.same_object(calc.objects(a)[1], calc.objects(b)[0])


def cmd_coherence(args, report: Report) -> None:
    config = _config(args)
    calc = _calculus(args.calculus, config)
    kind = CELL_KIND[args.calculus]
    docs = [d for d in load_workspace(args.files) if d.kind == kind]
    if not docs:
        report.add("cells", "fail", {"error": f"no {kind} documents among the inputs"})
        return
    cells = [build(d) for d in docs]
    cap = max(2, min(args.cap if args.cap is not None else 4, 4))
    # in the groupoid calculus a composite needs every factor but the last left principal
    regular = [args.calculus != "groupoids" or check_left_principal(c).holds for c in cells]

    size = {"rings": lambda c: c.dim, "groupoids": lambda c: c.size,
            "cstar": lambda c: int(c.mult.sum())}[args.calculus]
    max_size = args.max_size if args.max_size is not None else \
        (16 if args.calculus == "rings" else None)

    def tuples(length):
        for idx in itertools.product(range(len(cells)), repeat=length):
            seq = [cells[i] for i in idx]
            if not (all(_composable(calc, a, b) for a, b in zip(seq, seq[1:]))
                    and all(regular[i] for i in idx[:-1])):
                continue
            if max_size is not None and math.prod(size(c) for c in seq) > max_size:
                continue
            yield idx, seq

    def run(law, length, fn):
        total = failed = skipped = 0
        witness = None
        for idx, seq in tuples(length):
            try:
                res = fn(calc, *seq)
            except MoritaError:
                # a composite is undefined in this calculus (degenerate or irregular)
                skipped += 1
                continue
            total += 1
            if not res.holds:
                failed += 1
                witness = witness or {"tuple": [docs[i].name for i in idx], "detail": res.witness}
        extra = {"tuples": total, "skipped": skipped}
        if args.calculus == "cstar":
            extra["strict"] = True
        report.check(law, failed == 0, witness, **extra)

    run("triangle", 2, bicat.check_triangle)
    run("left-unit", 2, bicat.check_left_unit)
    run("right-unit", 2, bicat.check_right_unit)
    if cap >= 4:
        run("pentagon", 4, bicat.check_pentagon)
    report.data["cells"] = len(cells)
    report.data["max_size"] = max_size


# -- morita ------------------------------------------------------------------------------

def cmd_morita(args, report: Report) -> None:
    config = _config(args)
    docs = [load_document(f) for f in args.files]
    report.data["instances"] = [{"name": d.name, "digest": d.digest()} for d in docs]
    if args.calculus == "rings":
        _expect(docs[0], "bimodule")
        cert = certify_equivalence(build(docs[0]), config)
        for s in cert.stages:
            report.add(s.name, s.outcome, s.witness, **({"proven": s.proven}
                                                       if s.outcome == "fail" else {}))
        report.data["certificate"] = cert.to_dict()
    elif args.calculus == "cstar":
        _expect(docs[0], "correspondence")
        cert = certify_equivalence_cstar(build(docs[0]))
        report.check("full", cert.full)
        report.check("compacts-iso", cert.compacts, {"k_vector": cert.k_vector})
        for name, ok in cert.round_trips.items():
            report.check(f"round-trip-{name}", ok)
        report.data["certificate"] = cert.to_dict()
    else:
        objs = [build(d) for d in docs]
        if len(objs) == 1 and isinstance(objs[0], Bibundle):
            rep = check_biprincipal(objs[0], cross_check=True)
            report.check("left-principal", rep.left.holds, rep.left.witness)
            report.check("right-principal", rep.right.holds, rep.right.witness)
            report.check("opposite-is-inverse", bool(rep.cross_check) == rep.holds,
                         rep.cross_check)
            report.data["certificate"] = rep.to_dict()
        elif len(objs) == 2 and all(d.kind == "groupoid" for d in docs):
            v = morita_decide(objs[0], objs[1], config)
            outcome = {"equivalent": "pass", "not-equivalent": "fail"}.get(v.status, "unknown")
            report.add("morita-decide", outcome, v.obstruction)
            if v.certificate is not None:
                bp = check_biprincipal(v.certificate)
                report.check("certificate-biprincipal", bp.holds)
                cdoc = document_for(v.certificate, f"{docs[0].name}~{docs[1].name}")
                report.data["certificate_digest"] = cdoc.digest()
                if args.out_certificate:
                    save_document(cdoc, args.out_certificate)
            report.data["verdict"] = v.to_dict()
        else:
            raise MoritaError("groupoids: pass two groupoid files or one bibundle file")


# -- rep-check ---------------------------------------------------------------------------

def _check_certificate(args, doc) -> None:
    if not args.certificate:
        return
    cert = json.loads(Path(args.certificate).read_text(encoding="utf-8"))
    digests = [i.get("digest") for i in cert.get("data", {}).get("instances", [])]
    if cert.get("status") != "pass" or doc.digest() not in digests:
        raise NotCertified("certificate report does not certify this instance")


def cmd_rep_check(args, report: Report) -> None:
    config = _config(args)
    doc = load_document(args.file)
    _check_certificate(args, doc)
    cap = args.cap if args.cap is not None else (2 if args.calculus == "rings" else 4)
    if args.calculus == "rings":
        _expect(doc, "bimodule")
        m = build(doc)
        cfg = config.with_(algebra_dim_cap=max(config.algebra_dim_cap, 9),
                           module_dim_cap=max(config.module_dim_cap, cap))
        rep = induced_functor_report(m, cap, cfg)
        report.check("hom-dimensions-preserved", rep.hom_preserved)
        report.check("distinct-classes-stay-distinct", rep.injective)
        report.check("round-trips", all(rep.round_trips),
                     [sum(rep.round_trips), len(rep.round_trips)])
        report.data["functor"] = rep.to_dict()
    else:
        _expect(doc, "bibundle")
        rep = induced_action_report(build(doc), cap)
        report.check("equivariant-map-counts-preserved", rep.counts_preserved)
        report.check("distinct-classes-stay-distinct", rep.injective)
        report.check("round-trips", all(rep.round_trips),
                     [sum(rep.round_trips), len(rep.round_trips)])
        report.data["transport"] = rep.to_dict()


# -- acceptance suites -------------------------------------------------------------------

def cmd_suite(args, report: Report) -> None:
    from .suites import SUITES, determinism_suite
    names = list(SUITES) + ["determinism"] if args.name == "all" else [args.name]
    config = _config(args)
    unknown = [n for n in names if n not in SUITES and n != "determinism"]
    if unknown:
        report.add("unknown-suite", "fail",
                   {"name": unknown[0], "choices": sorted(SUITES) + ["all", "determinism"]})
        return
    for name in names:
        sub = determinism_suite(config) if name == "determinism" else SUITES[name](config)
        report.add(name, sub.status, None, stages=sub.stages)


# -- plumbing ----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for randomized search")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--report", help="also write the report to this path")

    parser = argparse.ArgumentParser(prog="morita", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="validate instance documents")
    p.add_argument("files", nargs="+", help="instance files or directories of *.json")
    p.add_argument("--out", dest="report", help="write the report here")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("compose", parents=[common], help="horizontal composition")
    p.add_argument("calculus", choices=CALCULI)
    p.add_argument("lhs")
    p.add_argument("rhs")
    p.add_argument("--out", help="write the composed instance here")
    p.add_argument("--name", help="name of the composed instance")
    p.set_defaults(func=cmd_compose)

    p = sub.add_parser("coherence", parents=[common], help="coherence laws over instances")
    p.add_argument("calculus", choices=CALCULI)
    p.add_argument("files", nargs="+", help="instance files or workspace directories")
    p.add_argument("--cap", type=int, help="longest tuple to check (2..4, default 4)")
    p.add_argument("--max-size", type=int,
                   help="skip tuples whose product of sizes exceeds this (rings default 16)")
    p.add_argument("--out", dest="report", help="write the report here")
    p.set_defaults(func=cmd_coherence)

    p = sub.add_parser("morita", parents=[common], help="certify or refute an equivalence")
    p.add_argument("calculus", choices=CALCULI)
    p.add_argument("files", nargs="+")
    p.add_argument("--out", dest="out_certificate",
                   help="groupoids: write the certificate bibundle here")
    p.set_defaults(func=cmd_morita)

    p = sub.add_parser("rep-check", parents=[common], help="induced functor on representations")
    p.add_argument("calculus", choices=("rings", "groupoids"))
    p.add_argument("file")
    p.add_argument("--certificate", help="a passing morita report for this instance")
    p.add_argument("--cap", type=int, help="module dimension / action size cap")
    p.add_argument("--out", dest="report", help="write the report here")
    p.set_defaults(func=cmd_rep_check)

    p = sub.add_parser("suite", parents=[common], help="run an acceptance suite")
    p.add_argument("name", help="suite name or 'all'")
    p.add_argument("--out", dest="report", help="write the report here")
    p.set_defaults(func=cmd_suite)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    report = Report(args.command, determinism_seed=args.seed)
    try:
        args.func(args, report)
    except ParseError as exc:
        report.add("parse", "fail", {"error": str(exc), "line": exc.line, "col": exc.col})
    except AxiomViolation as exc:
        report.add("validate", "fail", _axiom_witness(exc))
    except MoritaError as exc:
        report.add(type(exc).__name__, "fail", {"error": str(exc)})
    if not report.stages:
        report.add("nothing-to-do", "fail")
    report.finish()
    text = report.to_json() if args.format == "json" else report.to_text()
    sys.stdout.write(text)
    if args.report:
        Path(args.report).write_text(report.to_json(), encoding="utf-8")
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
