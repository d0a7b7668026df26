from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from morita.corpus import bibundle_pool, groupoid_corpus, left_principal
from morita.errors import AxiomViolation, GroupoidMismatch, NotAFunctor, NotRegular
from morita.groupoid import (UNDEF, Bibundle, FiniteGroupoid, GroupoidAction, GroupoidFunctor,
                             action_groupoid, check_biprincipal, check_left_principal,
                             check_right_principal, count_equivariant_maps, find_action_iso,
                             find_bibundle_iso, functor_to_bibundle, group_groupoid, hs_tensor,
                             induce_action, is_s_connected, make_bibundle, opposite_bibundle,
                             pair_groupoid, point_groupoid, trivial_right, unit_bibundle)
from morita.groupoid_morita import action_corpus, enumerate_actions, morita_decide
from morita.groups import cyclic_group

import oracles

PT = point_groupoid()
P2 = pair_groupoid(2)
Z2 = group_groupoid(cyclic_group(2), "Z2")
POOL = bibundle_pool()


def two_points():
    """The classic P2 -> {0, 1} <- pt bibundle."""
    return functor_to_bibundle(GroupoidFunctor(P2, PT, [0, 0], [0, 0, 0, 0]))


def relabel(b: Bibundle, perm) -> Bibundle:
    """The same bibundle with carrier point m renamed to perm[m]."""
    n = b.size
    inv = [0] * n
    for m, v in enumerate(perm):
        inv[v] = m

    def move(table):
        out = np.full_like(table, UNDEF)
        for x, m in itertools.product(range(table.shape[0]), range(n)):
            if table[x, m] != UNDEF:
                out[x, perm[m]] = perm[table[x, m]]
        return out

    return make_bibundle(b.G, b.H, [b.carrier[inv[k]] for k in range(n)],
                         [b.tau[inv[k]] for k in range(n)], [b.sigma[inv[k]] for k in range(n)],
                         move(b.left.table), move(b.right.table))


def brute_groupoid_axioms(g: FiniteGroupoid) -> bool:
    n = g.n_arrows
    for x, y in itertools.product(range(n), repeat=2):
        if (g.s[x] == g.t[y]) != (g.comp[x, y] != UNDEF):
            return False
    for x, y, z in itertools.product(range(n), repeat=3):
        if g.s[x] == g.t[y] and g.s[y] == g.t[z]:
            if g.comp[g.comp[x, y], z] != g.comp[x, g.comp[y, z]]:
                return False
    return all(g.comp[x, g.inv[x]] == g.unit[g.t[x]] and g.comp[g.inv[x], x] == g.unit[g.s[x]]
               for x in range(n))


def composable_pairs():
    return [(m, n) for m in POOL for n in POOL if m.H == n.G and left_principal(m)]


# -- validation -----------------------------------------------------------------------

def test_trivial_and_pair_groupoids_valid():
    assert PT.n_arrows == 1 and brute_groupoid_axioms(PT)
    assert P2.n_arrows == 4 and brute_groupoid_axioms(P2)
    assert [(P2.s[x], P2.t[x]) for x in range(4)] == [(0, 0), (1, 0), (0, 1), (1, 1)]


def test_corpus_groupoids_pass_brute_axioms():
    for g in groupoid_corpus():
        assert brute_groupoid_axioms(g)


def test_bad_inverse_rejected():
    # Z2 with the generator claimed to be inverse to the identity
    with pytest.raises(AxiomViolation) as err:
        FiniteGroupoid(["*"], ["e", "a"], [0, 0], [0, 0], [[0, 1], [1, 0]], [1, 0], [0])
    assert err.value.axiom == "inverse-law"


def test_action_landing_in_wrong_fibre_rejected():
    # arrow "1<0" must send the point over 0 to a point over 1
    table = [[0, UNDEF], [UNDEF, 0], [0, UNDEF], [UNDEF, 1]]
    with pytest.raises(AxiomViolation) as err:
        GroupoidAction(P2, ["a", "b"], [0, 1], table, "left")
    assert err.value.axiom == "action-base"


def test_functor_checked():
    with pytest.raises(NotAFunctor):
        GroupoidFunctor(Z2, PT, [0], [0])


def test_action_groupoid_components():
    # Z4 acting on two points through Z4 -> Z2: one component with isotropy Z2
    g = action_groupoid(cyclic_group(4), 2, lambda a, i: (i + a) % 2)
    assert brute_groupoid_axioms(g) and len(g.components()) == 1
    assert g.isotropy(0)[1].order == 2


# -- units, functors and opposites ------------------------------------------------------

def test_unit_bibundle_sizes():
    assert unit_bibundle(PT).size == 1 and unit_bibundle(Z2).size == 2
    u = unit_bibundle(P2)
    assert u.size == 4 and check_biprincipal(u).holds


def test_identity_functor_bundle_is_unit():
    for g in groupoid_corpus():
        ident = GroupoidFunctor(g, g, range(g.n_objects), range(g.n_arrows))
        assert find_bibundle_iso(functor_to_bibundle(ident), unit_bibundle(g)) is not None


def test_constant_functor_bundle_has_one_point():
    assert functor_to_bibundle(GroupoidFunctor(Z2, PT, [0], [0, 0])).size == 1


def test_inclusion_of_point_into_pair_groupoid():
    b = functor_to_bibundle(GroupoidFunctor(PT, P2, [0], [0]))
    assert b.size == 2 and check_left_principal(b).holds and check_right_principal(b).holds


def test_opposite_involution_and_unit():
    for b in POOL:
        bb = opposite_bibundle(opposite_bibundle(b))
        assert np.array_equal(bb.left.table, b.left.table)
        assert np.array_equal(bb.right.table, b.right.table)
    for g in groupoid_corpus():
        assert find_bibundle_iso(opposite_bibundle(unit_bibundle(g)), unit_bibundle(g)) is not None


def test_opposite_of_two_points_swaps_sides():
    m = two_points()
    op = opposite_bibundle(m)
    assert op.G == PT and op.H == P2 and op.tau == m.sigma and op.sigma == m.tau


# -- principality ----------------------------------------------------------------------

def test_two_points_is_biprincipal():
    rep = check_biprincipal(two_points(), cross_check=True)
    assert rep.holds and rep.consistent


def test_free_non_transitive_fibre_fails():
    # the point groupoid on three points over a single object: free, three orbits in one fibre
    left = GroupoidAction(PT, "abc", [0, 0, 0], [[0, 1, 2]], "left")
    right = GroupoidAction(PT, "abc", [0, 0, 0], [[0, 1, 2]], "right")
    rep = check_left_principal(Bibundle(left, right))
    assert not rep.holds and rep.free and rep.surjective and not rep.transitive
    assert rep.witness[0] == "not-transitive"


def test_missing_object_reported_as_not_surjective():
    two = FiniteGroupoid(["0", "1"], ["1_0", "1_1"], [0, 1], [0, 1], [[0, UNDEF], [UNDEF, 1]],
                         [0, 1], [0, 1])
    left = GroupoidAction(PT, "a", [0], [[0]], "left")
    right = GroupoidAction(two, "a", [0], [[0], [UNDEF]], "right")
    rep = check_left_principal(Bibundle(left, right))
    assert not rep.surjective and rep.witness == ("not-surjective", "1")


def test_regular_z2_over_point_fails_right_principality():
    regular = GroupoidAction(Z2, ["e", "a"], [0, 0], [[0, 1], [1, 0]], "left")
    b = trivial_right(regular)
    assert check_left_principal(b).holds
    rep = check_right_principal(b)
    assert not rep.holds and not rep.transitive


@pytest.mark.parametrize("b", POOL, ids=lambda b: b.name or f"{b.G.name}-{b.H.name}-{b.size}")
def test_biprincipal_iff_opposite_is_inverse(b):
    assert check_biprincipal(b, cross_check=True).consistent


def test_s_connected_predicate():
    assert is_s_connected(PT) and not is_s_connected(P2) and not is_s_connected(Z2)


# -- Hilsum-Skandalis composition -------------------------------------------------------

def test_opposite_then_two_points_is_single_orbit():
    m = two_points()
    t = hs_tensor(opposite_bibundle(m), m)
    pairs = sum(len(o) for o in t.orbits)
    assert pairs == 2 and len(t.orbits) == 1 == oracles.hs_orbit_count(opposite_bibundle(m), m)
    assert find_bibundle_iso(t.bibundle, unit_bibundle(PT)) is not None


def test_two_points_then_opposite_is_pair_groupoid():
    m = two_points()
    t = hs_tensor(m, opposite_bibundle(m))
    assert len(t.orbits) == 4 and all(len(o) == 1 for o in t.orbits)
    assert find_bibundle_iso(t.bibundle, unit_bibundle(P2)) is not None


def test_left_unit_tensor_is_isomorphic():
    for b in POOL:
        assert find_bibundle_iso(hs_tensor(unit_bibundle(b.G), b).bibundle, b) is not None


def test_tensor_requires_matching_middle_groupoid():
    with pytest.raises(GroupoidMismatch):
        hs_tensor(two_points(), two_points())


def test_tensor_requires_left_principal_left_factor():
    regular = trivial_right(GroupoidAction(Z2, ["e", "a"], [0, 0], [[0, 1], [1, 0]], "left"))
    bad = opposite_bibundle(regular)
    assert not left_principal(bad)
    with pytest.raises(NotRegular):
        hs_tensor(bad, regular)


@pytest.mark.parametrize("pair", composable_pairs(),
                         ids=lambda p: f"{p[0].G.name}-{p[0].H.name}-{p[1].H.name}")
def test_orbit_counts_match_brute_force(pair):
    m, n = pair
    t = hs_tensor(m, n)
    assert t.bibundle.size == oracles.hs_orbit_count(m, n)
    assert sorted(t.projection) == sorted(
        (x, y) for x in range(m.size) for y in range(n.size) if m.sigma[x] == n.tau[y])


def test_tensor_of_biprincipal_is_biprincipal():
    bi = [b for b in POOL if check_biprincipal(b).holds]
    checked = 0
    for m, n in itertools.product(bi, repeat=2):
        if m.H == n.G:
            assert check_biprincipal(hs_tensor(m, n).bibundle).holds
            checked += 1
    assert checked >= 10


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(composable_pairs()), st.randoms(use_true_random=False))
def test_tensor_independent_of_point_order(pair, rnd):
    m, n = pair
    pm, pn = list(range(m.size)), list(range(n.size))
    rnd.shuffle(pm)
    rnd.shuffle(pn)
    a = hs_tensor(m, n).bibundle
    b = hs_tensor(relabel(m, pm), relabel(n, pn)).bibundle
    assert find_bibundle_iso(a, b) is not None


# -- actions ---------------------------------------------------------------------------

def test_induce_along_unit_is_identity():
    for g in groupoid_corpus():
        for a in action_corpus(g, 2):
            assert find_action_iso(induce_action(unit_bibundle(g), a), a) is not None


def test_induce_point_action_up_to_pair_groupoid():
    one = GroupoidAction(PT, ["*"], [0], [[0]], "left")
    a = induce_action(two_points(), one)
    assert a.groupoid == P2 and a.size == 2 and sorted(a.base) == [0, 1]


def test_induce_checks_groupoid():
    with pytest.raises(GroupoidMismatch):
        induce_action(two_points(), GroupoidAction(Z2, ["e"], [0], [[0], [0]], "left"))


def test_induction_preserves_equivariant_map_counts():
    # Z4 acting on two points through Z4 -> Z2 is equivalent to its isotropy Z2
    g = action_groupoid(cyclic_group(4), 2, lambda a, i: (i + a) % 2, name="Z4/2")
    m = morita_decide(g, Z2).certificate
    acts = action_corpus(Z2, 2)
    assert len(acts) == 3
    for a, b in itertools.product(acts, repeat=2):
        before = oracles.equivariant_map_count(a, b)
        after = oracles.equivariant_map_count(induce_action(m, a), induce_action(m, b))
        assert before == after == count_equivariant_maps(a, b)


@pytest.mark.parametrize("g", groupoid_corpus(), ids=lambda g: g.name)
def test_equivariant_map_counts_match_brute_force(g):
    acts = action_corpus(g, 3)
    for a, b in itertools.product(acts, repeat=2):
        assert count_equivariant_maps(a, b) == oracles.equivariant_map_count(a, b)


# Actions of each one-object groupoid on n = 1, 2, 3, 4 points, up to isomorphism.
# Derived with oracles.group_action_class_count for n <= 3 and frozen.
ACTION_COUNTS = {"pt": [1, 1, 1, 1], "Z2": [1, 2, 2, 3], "Z3": [1, 1, 2, 2],
                 "Z4": [1, 2, 2, 4], "Z2xZ2": [1, 4, 4, 11]}


@pytest.mark.parametrize("name", sorted(ACTION_COUNTS))
def test_action_class_counts_frozen(name):
    g = next(h for h in groupoid_corpus() if h.name == name)
    assert [len(enumerate_actions(g, n)) for n in range(1, 5)] == ACTION_COUNTS[name]
    if g.n_arrows <= 3:
        assert [oracles.group_action_class_count(g.comp, n) for n in (1, 2, 3)] \
            == ACTION_COUNTS[name][:3]


def test_action_counts_on_disconnected_groupoids():
    # actions of P2 need matching fibres; the discrete groupoid splits points freely
    p2 = next(h for h in groupoid_corpus() if h.name == "P2")
    d2 = next(h for h in groupoid_corpus() if h.name == "D2")
    assert [len(enumerate_actions(p2, n)) for n in range(1, 5)] == [0, 1, 0, 1]
    assert [len(enumerate_actions(d2, n)) for n in range(1, 5)] == [2, 3, 4, 5]
