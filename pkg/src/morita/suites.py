"""Acceptance suites.  Each returns a Report whose JSON is byte-stable across runs."""
from __future__ import annotations

from collections import Counter
from typing import Callable

import numpy as np

from . import bicat
from .algebra import BimoduleMap, RingCalculus, hom_basis
from .config import DEFAULT, SearchConfig
from .corpus import (bibundle_pool, column_module, composable_tuples, groupoid_corpus,
                     left_principal, multimatrix_algebra, multimatrix_corpus,
                     multiplicity_sweep, multiplicity_sweep_arrays, refutation_pair, ring_bimodule_corpus,
                     ring_coherence_pool)
from .errors import DegenerateResult
from .groupoid import (bibundle_maps, check_biprincipal, group_groupoid, pair_groupoid,
                       point_groupoid)
from .groupoid_bicat import BibundleMap, GroupoidCalculus
from .groupoid_morita import induced_action_report, morita_decide, search_biprincipal_bibundle
from .groups import cyclic_group, direct_product
from .multimatrix import (CstarCalculus, MultiplicityBimodule, certify_equivalence_cstar,
                          interior_tensor, is_permutation, unit_correspondence)
from .report import Report
from .rings import (certify_equivalence, induced_functor_report, search_equivalence,
                    verify_via_bicategory)

# the functor suite enumerates modules over M_3(F_p), which has dimension 9
FUNCTOR_CONFIG_DIM_CAP = 9


def _law_stage(report: Report, label: str, law: str, results) -> None:
    """Fold a stream of CoherenceReports into one stage: counts plus the first failure."""
    total = failed = 0
    first = None
    for r in results:
        total += 1
        if not r.holds:
            failed += 1
            first = first or r.witness
    report.check(f"{label}:{law}", failed == 0 and total > 0, first, tuples=total, failed=failed)


# -- 1. coherence ---------------------------------------------------------------------------

def _ring_coherence(report: Report, p: int, config: SearchConfig) -> None:
    calc = RingCalculus(config)
    pool = ring_coherence_pool(p)
    same = lambda a, b: a.right_algebra == b.left_algebra
    quads = composable_tuples(pool, 4, same, max_total_dim=16)
    pairs = composable_tuples(pool, 2, same)
    triples = composable_tuples(pool, 3, same, max_total_dim=8)
    label = f"rings/F{p}"
    _law_stage(report, label, "pentagon", (bicat.check_pentagon(calc, *q) for q in quads))
    _law_stage(report, label, "triangle", (bicat.check_triangle(calc, *q) for q in pairs))
    _law_stage(report, label, "left-unit", (bicat.check_left_unit(calc, *q) for q in pairs))
    _law_stage(report, label, "right-unit", (bicat.check_right_unit(calc, *q) for q in pairs))

    def endo(m):
        # the last endomorphism basis vector: a deterministic non-identity 2-cell when one exists
        basis = hom_basis(m, m)
        return BimoduleMap(m, m, basis[-1])

    _law_stage(report, label, "associator-naturality",
               (bicat.check_associator_naturality(calc, *(endo(c) for c in t)) for t in triples))


def _cstar_nondegenerate(seq) -> bool:
    try:
        acc = seq[0]
        for e in seq[1:]:
            acc = interior_tensor(acc, e)
    except DegenerateResult:
        return False
    return True


def _cstar_coherence(report: Report) -> None:
    calc = CstarCalculus()
    pool = multimatrix_corpus() + [unit_correspondence(multimatrix_algebra(k)) for k in (1, 2, 3)]
    same = lambda a, b: a.right == b.left
    quads = [q for q in composable_tuples(pool, 4, same) if _cstar_nondegenerate_all(q)]
    _law_stage(report, "cstar", "pentagon", (bicat.check_pentagon(calc, *q) for q in quads))

    def pairs():
        # the whole sweep against units, then every composable corpus pair
        for e in multiplicity_sweep():
            yield e, unit_correspondence(e.right)
        for e, f in composable_tuples(pool, 2, same):
            if _cstar_nondegenerate([e, f]):
                yield e, f

    _law_stage(report, "cstar", "triangle", (bicat.check_triangle(calc, e, f) for e, f in pairs()))
    report.data.setdefault("notes", []).append(
        "multimatrix associators and unitors are identities; coherence is strict")


def _cstar_nondegenerate_all(seq) -> bool:
    # every sub-bracketing used by the pentagon must be defined
    n = len(seq)
    return all(_cstar_nondegenerate(seq[i:j]) for i in range(n) for j in range(i + 1, n + 1))


def _groupoid_coherence(report: Report) -> None:
    calc = GroupoidCalculus()
    pool = bibundle_pool(max_carrier=12)
    same = lambda a, b: a.H == b.G
    lp = {id(b): left_principal(b) for b in pool}
    quads = [q for q in composable_tuples(pool, 4, same) if all(lp[id(b)] for b in q[:3])]
    pairs = [q for q in composable_tuples(pool, 2, same) if lp[id(q[0])]]
    triples = [q for q in composable_tuples(pool, 3, same) if all(lp[id(b)] for b in q[:2])]
    _law_stage(report, "groupoids", "pentagon", (bicat.check_pentagon(calc, *q) for q in quads))
    _law_stage(report, "groupoids", "triangle", (bicat.check_triangle(calc, *q) for q in pairs))
    _law_stage(report, "groupoids", "left-unit", (bicat.check_left_unit(calc, *q) for q in pairs))
    # (mn)1 needs the composite, hence n as well, to be left principal
    _law_stage(report, "groupoids", "right-unit",
               (bicat.check_right_unit(calc, *q) for q in pairs if lp[id(q[1])]))

    def auto(b):
        maps = list(bibundle_maps(b, b, bijective=True))
        return BibundleMap(b, b, maps[-1])

    _law_stage(report, "groupoids", "associator-naturality",
               (bicat.check_associator_naturality(calc, *(auto(b) for b in t)) for t in triples))
    report.data["groupoid_max_carrier"] = max(b.size for b in pool)


def coherence_suite(config: SearchConfig = DEFAULT) -> Report:
    report = Report("suite:coherence", determinism_seed=config.seed)
    for p in (2, 3):
        _ring_coherence(report, p, config)
    _cstar_coherence(report)
    _groupoid_coherence(report)
    ring_tuples = sum(s.get("tuples", 0) for s in report.stages
                      if s["name"].startswith("rings/") and s["name"].endswith(("pentagon",
                                                                                "triangle")))
    report.check("rings:tuple-count>=50", ring_tuples >= 50, ring_tuples)
    return report.finish()


# -- 2. ring flagship -----------------------------------------------------------------------

def ring_flagship_suite(config: SearchConfig = DEFAULT) -> Report:
    report = Report("suite:ring-flagship", determinism_seed=config.seed)
    for n in (2, 3):
        for p in (2, 3):
            cert = certify_equivalence(column_module(n, p), config)
            d = cert.to_dict()
            summary = {"stages": [s["outcome"] for s in d["stages"]]}
            if cert.certified:
                summary.update(generators=[cert.fgp_left.generator_count,
                                           cert.fgp_right.generator_count],
                               end_dim=int(cert.end_iso.map.shape[0]),
                               round_trip_R=d["round_trip_R"], round_trip_S=d["round_trip_S"])
            report.check(f"col{n}(F{p})", cert.certified, summary)
    return report.finish()


# -- 3. ring refutation ---------------------------------------------------------------------

def ring_refutation_suite(config: SearchConfig = DEFAULT, cap: int = 2) -> Report:
    report = Report("suite:ring-refutation", determinism_seed=config.seed)
    r, s = refutation_pair(2)
    res = search_equivalence(r, s, cap, config)
    report.check("no-equivalence-within-cap",
                 res.status != "equivalent" and res.all_refutations_proven, res.to_dict())
    report.check("reports-unknown-beyond-cap", res.status == "unknown", res.status)
    return report.finish()


# -- 4. ring oracle ---------------------------------------------------------------------------

def ring_oracle_suite(config: SearchConfig = DEFAULT) -> Report:
    report = Report("suite:ring-oracle", determinism_seed=config.seed)
    tally = Counter()
    for case in ring_bimodule_corpus():
        m = case.bimodule
        cert = certify_equivalence(m, config)
        via = verify_via_bicategory(m, config)
        agree = cert.certified == via.certified
        fs = cert.failed_stage
        if cert.certified and via.certified:
            tally["equivalences"] += 1
        elif agree and fs.proven and via.proven:
            tally["proven_non_equivalences"] += 1
        report.check(m.name, agree and cert.certified == case.expected,
                     {"certify": cert.certified, "bicategory": via.certified,
                      "failed_stage": fs.name if fs else None})
    tally["bimodules"] = sum(1 for s in report.stages)
    report.data["tally"] = dict(tally)
    report.check("corpus>=30", tally["bimodules"] >= 30, tally["bimodules"])
    report.check("equivalences>=5", tally["equivalences"] >= 5, tally["equivalences"])
    report.check("proven-non-equivalences>=5", tally["proven_non_equivalences"] >= 5,
                 tally["proven_non_equivalences"])
    return report.finish()


# -- 5. representation functors -------------------------------------------------------------

def rep_functor_suite(config: SearchConfig = DEFAULT, cap: int = 3) -> Report:
    report = Report("suite:rep-functor", determinism_seed=config.seed)
    cfg = config.with_(algebra_dim_cap=max(config.algebra_dim_cap, FUNCTOR_CONFIG_DIM_CAP),
                       module_dim_cap=max(config.module_dim_cap, cap))
    total = ok = 0
    for case in ring_bimodule_corpus():
        cert = certify_equivalence(case.bimodule, cfg)
        if not cert.certified:
            continue
        rep = induced_functor_report(case.bimodule, cap, cfg, certificate=cert)
        total += len(rep.round_trips)
        ok += sum(rep.round_trips)
        report.check(case.bimodule.name, rep.passed,
                     {"modules": len(rep.image_dims), "hom_preserved": rep.hom_preserved,
                      "round_trips": sum(rep.round_trips)})
    report.check("round-trips-100%", total > 0 and ok == total, [ok, total])
    pt = point_groupoid()
    for n in (2, 3):
        cert = morita_decide(pair_groupoid(n), pt).certificate
        rep = induced_action_report(cert, 4)
        report.check(f"actions/P{n}<-pt", rep.passed,
                     {"actions": len(rep.sizes), "counts_preserved": rep.counts_preserved})
    return report.finish()


# -- 6. C* calculus -------------------------------------------------------------------------

def _rows_live(stack) -> np.ndarray:
    return stack.any(axis=2).all(axis=1)


def cstar_suite(config: SearchConfig = DEFAULT) -> Report:
    report = Report("suite:cstar", determinism_seed=config.seed)
    pool = multimatrix_corpus() + [unit_correspondence(multimatrix_algebra(k)) for k in (1, 2, 3)]
    swept = certified = mismatches = 0
    first_bad = None
    unital = assoc = 0
    assoc_bad = unit_bad = None
    for a, b, stack in multiplicity_sweep_arrays():
        one_l, one_r = unit_correspondence(a), unit_correspondence(b)
        for E in stack:
            e = MultiplicityBimodule(a, b, E)
            swept += 1
            ok = certify_equivalence_cstar(e).certified
            certified += ok
            if ok != is_permutation(E):
                mismatches += 1
                first_bad = first_bad or E.tolist()
            unital += 1
            if interior_tensor(one_l, e) != e or interior_tensor(e, one_r) != e:
                unit_bad = unit_bad or E.tolist()
        # associativity against every composable corpus pair, batched over the stack
        for f in pool:
            if f.right != a:
                continue
            for g in pool:
                if g.left != b:
                    continue
                fe, eg = f.mult @ stack, stack @ g.mult
                lhs, rhs = fe @ g.mult, f.mult @ eg
                live = _rows_live(fe) & _rows_live(eg) & _rows_live(lhs)
                assoc += int(live.sum())
                bad = live & (lhs != rhs).any(axis=(1, 2))
                if bad.any() and assoc_bad is None:
                    assoc_bad = [f.mult.tolist(), stack[np.argmax(bad)].tolist(), g.mult.tolist()]
    report.check("certified-iff-permutation", mismatches == 0, first_bad, swept=swept,
                 certified=certified)
    report.check("strict-unitality", unit_bad is None, unit_bad, checked=unital)
    report.check("strict-associativity", assoc_bad is None and assoc > 0, assoc_bad,
                 checked=assoc)
    return report.finish()


# -- 7. groupoid flagship -------------------------------------------------------------------

def groupoid_flagship_suite(config: SearchConfig = DEFAULT) -> Report:
    report = Report("suite:groupoid-flagship", determinism_seed=config.seed)
    pt = point_groupoid()
    for n in (2, 3, 4):
        v = morita_decide(pair_groupoid(n), pt, config)
        ok = v.equivalent and v.certificate is not None
        bp = check_biprincipal(v.certificate, cross_check=True) if ok else None
        report.check(f"P{n}~pt", ok and bp.holds and bp.cross_check,
                     {"status": v.status,
                      "carrier": v.certificate.size if ok else None,
                      "biprincipal": bp.holds if bp else None,
                      "opposite_is_inverse": bp.cross_check if bp else None})
    z4 = group_groupoid(cyclic_group(4), "Z4")
    k4 = group_groupoid(direct_product(cyclic_group(2), cyclic_group(2)), "Z2xZ2")
    v = morita_decide(z4, k4, config)
    report.check("Z4!~Z2xZ2", v.status == "not-equivalent" and v.obstruction is not None
                 and v.obstruction["kind"] == "isotropy", v.to_dict())
    return report.finish()


# -- 8. groupoid oracle ---------------------------------------------------------------------

def groupoid_oracle_suite(config: SearchConfig = DEFAULT) -> Report:
    report = Report("suite:groupoid-oracle", determinism_seed=config.seed)
    corpus = groupoid_corpus()
    agree = 0
    for g in corpus:
        for h in corpus:
            v = morita_decide(g, h, config)
            o = search_biprincipal_bibundle(g, h, config.carrier_cap)
            same = v.equivalent == (o.found is not None)
            agree += same
            report.check(f"{g.name}|{h.name}", same,
                         {"decide": v.status, "oracle": o.status, "examined": o.examined})
    report.check("all-pairs-agree", agree == len(corpus) ** 2, [agree, len(corpus) ** 2])
    return report.finish()


SUITES: dict[str, Callable[[SearchConfig], Report]] = {
    "coherence": coherence_suite,
    "ring-flagship": ring_flagship_suite,
    "ring-refutation": ring_refutation_suite,
    "ring-oracle": ring_oracle_suite,
    "rep-functor": rep_functor_suite,
    "cstar": cstar_suite,
    "groupoid-flagship": groupoid_flagship_suite,
    "groupoid-oracle": groupoid_oracle_suite,
}


# -- 9. determinism -------------------------------------------------------------------------

def determinism_suite(config: SearchConfig = DEFAULT, names=None) -> Report:
    report = Report("suite:determinism", determinism_seed=config.seed)
    for name in names or SUITES:
        first = SUITES[name](config).to_json()
        second = SUITES[name](config).to_json()
        report.check(name, first == second, {"bytes": len(first)})
    return report.finish()
