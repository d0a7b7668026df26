from __future__ import annotations

import itertools

import pytest

from morita.config import SearchConfig
from morita.corpus import extra_groupoids, groupoid_corpus
from morita.errors import NotCertified
from morita.groupoid import (GroupoidAction, check_biprincipal, disjoint_union, group_groupoid,
                             pair_groupoid, point_groupoid, trivial_right, unit_bibundle)
from morita.groupoid_morita import (component_data, induced_action_report, morita_decide,
                                    search_biprincipal_bibundle)
from morita.groups import cyclic_group, direct_product, symmetric_group

import oracles

PT = point_groupoid()
ALL = groupoid_corpus() + extra_groupoids()
PAIRS = [(g, h) for g, h in itertools.product(groupoid_corpus(), repeat=2)]


def by_name(name):
    return next(g for g in ALL if g.name == name)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_pair_groupoid_equivalent_to_point(n):
    v = morita_decide(pair_groupoid(n), PT)
    assert v.equivalent and v.certificate.size == n
    assert check_biprincipal(v.certificate).holds


def test_z2_not_equivalent_to_point():
    v = morita_decide(by_name("Z2"), PT)
    assert v.status == "not-equivalent" and v.certificate is None
    assert v.obstruction["kind"] == "isotropy"
    assert v.obstruction["isotropy_left"][0][0] == 2 and v.obstruction["isotropy_right"][0][0] == 1


def test_z4_not_equivalent_to_klein():
    v = morita_decide(by_name("Z4"), by_name("Z2xZ2"))
    assert v.status == "not-equivalent" and v.obstruction["kind"] == "isotropy"
    assert not oracles.group_isomorphic(cyclic_group(4).table,
                                        direct_product(cyclic_group(2), cyclic_group(2)).table)


def test_component_count_obstruction():
    v = morita_decide(by_name("D2"), PT)
    assert v.obstruction["kind"] == "component-count" and v.obstruction["components"] == [2, 1]


def test_large_isotropy_is_unknown():
    s4 = group_groupoid(symmetric_group(4), "S4")
    v = morita_decide(s4, s4, SearchConfig(group_order_cap=12))
    assert v.status == "unknown" and "24" in v.reason and v.certificate is None


def test_verdict_has_exactly_one_of_certificate_or_obstruction():
    for g, h in PAIRS:
        v = morita_decide(g, h)
        assert (v.certificate is not None) == v.equivalent == (v.obstruction is None)


@pytest.mark.parametrize("pair", PAIRS, ids=lambda p: f"{p[0].name}-{p[1].name}")
def test_decision_matches_exhaustive_bibundle_search(pair):
    g, h = pair
    v = morita_decide(g, h)
    found = search_biprincipal_bibundle(g, h, carrier_cap=6).found
    assert v.equivalent == (found is not None) == oracles.groupoids_equivalent(g, h)
    if found is not None:
        assert check_biprincipal(found).holds


def test_extra_groupoids_against_invariant_oracle():
    for g, h in itertools.product(ALL, repeat=2):
        assert morita_decide(g, h).equivalent == oracles.groupoids_equivalent(g, h)


def test_disjoint_union_rebuilds_z2_plus_point():
    z2pt = disjoint_union(group_groupoid(cyclic_group(2)), PT)
    v = morita_decide(z2pt, by_name("Z2+pt"))
    assert v.equivalent and len(v.matching) == 2


def test_oracle_reports_examined_count_and_cap():
    res = search_biprincipal_bibundle(by_name("Z2"), PT, carrier_cap=4)
    assert res.found is None and res.status == "none-within-cap" and res.carrier_cap == 4


def test_components_and_isotropy_agree_with_brute_force():
    for g in ALL:
        data = component_data(g)
        assert [c.objects for c in data] == oracles.groupoid_components(g)
        for c in data:
            assert oracles.group_isomorphic(c.group.table, oracles.isotropy_table(g, c.rep))


# -- transporting actions -----------------------------------------------------------------

def test_actions_transport_along_certificate():
    rep = induced_action_report(morita_decide(pair_groupoid(2), PT).certificate, 4)
    assert rep.passed and len(rep.sizes) == 4
    assert rep.sizes == [(1, 2), (2, 4), (3, 6), (4, 8)]


def test_actions_transport_along_unit():
    rep = induced_action_report(unit_bibundle(by_name("Z2xZ2")), 2)
    assert rep.passed and all(a == b for a, b in rep.sizes)


def test_transport_between_disconnected_groupoids():
    assert morita_decide(by_name("P2+pt"), by_name("Z2+pt")).certificate is None
    cert = morita_decide(disjoint_union(pair_groupoid(2), PT), disjoint_union(PT, PT)).certificate
    rep = induced_action_report(cert, 3)
    assert rep.passed and rep.counts_preserved and rep.injective


def test_transport_needs_biprincipal_bundle():
    regular = GroupoidAction(by_name("Z2"), ["e", "a"], [0, 0], [[0, 1], [1, 0]], "left")
    with pytest.raises(NotCertified):
        induced_action_report(trivial_right(regular), 2)
