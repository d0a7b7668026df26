from __future__ import annotations

import numpy as np
import pytest

from morita.algebra import (Bimodule, direct_sum, matrix_algebra, opposite_algebra, scalars,
                            search_bimodule_iso, split_semisimple, unit_bimodule)
from morita.corpus import (column_module, refutation_pair, ring_algebras, ring_bimodule_corpus,
                           row_module)
from morita.errors import NotCertified
from morita.rings import (ProjectivityCertificate, ProjectivityRefutation, certify_equivalence,
                          check_fgp, end_iso_certificate, end_ring, induced_functor_report,
                          inverse_candidate, search_equivalence,
                          verify_via_bicategory)


def dual_basis_holds(m: Bimodule, cert: ProjectivityCertificate) -> bool:
    """sum_i x_i . phi_i(v) = v for every basis vector v, with each phi_i A-linear."""
    if cert.side == "right":
        alg, acts = m.right_algebra, m.R
    else:
        alg, acts = opposite_algebra(m.left_algebra), m.L
    p, d = m.p, m.dim
    for x, phi in cert.dual_basis:
        for b in range(alg.dim):
            if not np.array_equal(phi @ acts[b] % p, alg.right_mult_stack[b] @ phi % p):
                return False
    for j in range(d):
        total = np.zeros(d, dtype=np.int64)
        for x, phi in cert.dual_basis:
            for c in range(alg.dim):
                total += phi[c, j] * (acts[c] @ x)
        if not np.array_equal(total % p, np.eye(d, dtype=np.int64)[j]):
            return False
    return True


def scalar_square(p=2):
    k = scalars(p)
    eye = np.eye(2, dtype=np.int64)[None]
    return Bimodule(k, k, 2, eye, eye)


# -- endomorphism rings ---------------------------------------------------------------

def test_end_of_regular_module_is_the_algebra():
    s = ring_algebras(3)["T2(F3)"]
    end = end_ring(unit_bimodule(s))
    assert end.algebra.dim == s.dim and end_iso_certificate(unit_bimodule(s)) is not None


def test_end_of_column_module_is_m2():
    end = end_ring(column_module(2, 2))
    assert end.algebra.dim == 4 and end.canonical_rank() == 4
    assert end_iso_certificate(column_module(2, 2)) is not None


def test_scalar_left_action_not_surjective_onto_end():
    end = end_ring(scalar_square())
    assert end.algebra.dim == 4 and end.canonical_rank() == 1
    assert end_iso_certificate(scalar_square()) is None


# -- projectivity ---------------------------------------------------------------------

def test_regular_module_one_generator():
    s = ring_algebras(2)["F2[x]/x2"]
    cert = check_fgp(unit_bimodule(s), "right")
    assert isinstance(cert, ProjectivityCertificate) and cert.generator_count == 1
    assert dual_basis_holds(unit_bimodule(s), cert)


def test_simple_module_over_dual_numbers_not_projective():
    s = ring_algebras(2)["F2[x]/x2"]
    k = scalars(2)
    # F_2 with x acting by zero, as an (F_2, F_2[x]/x^2)-bimodule
    m = Bimodule(k, s, 1, [[[1]]], np.array([1, 0]).reshape(2, 1, 1))
    assert isinstance(check_fgp(m, "right"), ProjectivityRefutation)


def test_free_rank_two_two_generators():
    cert = check_fgp(scalar_square(), "right")
    assert cert.generator_count == 2 and dual_basis_holds(scalar_square(), cert)


@pytest.mark.parametrize("case", ring_bimodule_corpus(), ids=lambda c: c.bimodule.name)
def test_fgp_certificates_verify_independently(case):
    m = case.bimodule
    for side in ("left", "right"):
        res = check_fgp(m, side)
        if isinstance(res, ProjectivityCertificate):
            assert dual_basis_holds(m, res)


# -- inverse candidate ---------------------------------------------------------------

def test_inverse_of_unit_is_unit():
    s = ring_algebras(3)["F3xF3"]
    inv = inverse_candidate(unit_bimodule(s))
    assert search_bimodule_iso(inv, unit_bimodule(s)).found


def test_inverse_of_column_is_row():
    inv = inverse_candidate(column_module(2, 2))
    assert inv.dim == 2 and search_bimodule_iso(inv, row_module(2, 2)).found


def test_inverse_of_zero_is_zero():
    k = scalars(2)
    zero = Bimodule(k, k, 0, np.zeros((1, 0, 0)), np.zeros((1, 0, 0)))
    assert inverse_candidate(zero).dim == 0


# -- certification --------------------------------------------------------------------

def test_unit_certifies():
    for a in ring_algebras(2).values():
        assert certify_equivalence(unit_bimodule(a)).certified


@pytest.mark.parametrize("n,p", [(2, 2), (2, 3), (3, 2), (3, 3)])
def test_column_module_certifies(n, p):
    cert = certify_equivalence(column_module(n, p))
    assert cert.certified
    assert cert.fgp_left.generator_count == 1 and cert.fgp_right.generator_count == n
    assert cert.iso_R.is_invertible() and cert.iso_S.is_invertible()
    assert cert.iso_R.array.shape == (n * n, n * n) and cert.iso_S.array.shape == (1, 1)


def test_rank_one_projections_fail_at_end_stage():
    r = split_semisimple(2, 2)
    L = np.array([[[1, 0], [0, 0]], [[0, 0], [0, 1]]])
    m = Bimodule(r, scalars(2), 2, L, np.eye(2, dtype=np.int64)[None])
    cert = certify_equivalence(m)
    assert not cert.certified and cert.failed_stage.name == "end-iso"
    assert [s.outcome for s in cert.stages] == ["pass", "pass", "fail", "skipped", "skipped",
                                                "skipped"]


def test_certificate_serializes():
    d = certify_equivalence(column_module(2, 2)).to_dict()
    assert d["certified"] and len(d["round_trip_R"]) == 4


@pytest.mark.parametrize("case", ring_bimodule_corpus(), ids=lambda c: c.bimodule.name)
def test_corpus_expectations_and_bicategory_agree(case):
    cert = certify_equivalence(case.bimodule)
    assert cert.certified == case.expected == verify_via_bicategory(case.bimodule).certified


# -- search ---------------------------------------------------------------------------

def test_refutation_search_frozen():
    r, s = refutation_pair(2)
    res = search_equivalence(r, s, 2)
    assert res.status == "unknown" and res.examined == 6 and res.all_refutations_proven
    assert res.to_dict()["absent_within_cap"] == "proven"


def test_search_finds_m2_equivalence():
    res = search_equivalence(matrix_algebra(2, 2), scalars(2), 2)
    assert res.status == "equivalent" and res.witness.dim == 2


# -- induced functor ------------------------------------------------------------------

def test_functor_of_unit_is_trivial():
    rep = induced_functor_report(unit_bimodule(scalars(3)), 2)
    assert rep.passed and all(a == b for a, b in rep.image_dims)


def test_column_functor_dimensions_and_homs():
    rep = induced_functor_report(column_module(2, 2), 2)
    assert rep.image_dims == [(0, 0), (1, 2), (2, 4)]
    assert rep.hom_preserved and all(rep.round_trips)


def test_functor_separates_classes():
    s = ring_algebras(2)["F2xF2"]
    rep = induced_functor_report(unit_bimodule(s), 1)
    # two non-isomorphic one-dimensional modules stay distinct
    assert sum(1 for a, _ in rep.image_dims if a == 1) == 2 and rep.injective


def test_functor_needs_certificate():
    with pytest.raises(NotCertified):
        induced_functor_report(direct_sum(column_module(2, 2), column_module(2, 2)), 1)
