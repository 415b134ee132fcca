"""Axiom checking, support derivation, and chamber identification."""

import pytest

from bandwalk import algebra, constructions, core
from bandwalk.errors import MalformedInputError, SizeGuardError


def test_free_band_passes_every_axiom():
    sg = constructions.free_lrb(3)
    rep = core.verify_lrb(sg)
    assert rep.ok
    assert rep.identity_ok and rep.idempotent_ok and rep.deletion_ok
    assert rep.associative_ok and rep.assoc_mode == "exhaustive"
    assert rep.witness is None


def test_idempotence_violation_is_reported_with_witness():
    # b*b = a breaks x^2 = x
    sg = core.Semigroup("broken", ["e", "a", "b"], 0,
                        table=[[0, 1, 2], [1, 1, 2], [2, 2, 1]])
    rep = core.verify_lrb(sg)
    assert not rep.ok
    assert not rep.idempotent_ok
    assert rep.witness is not None


def test_deletion_violation_is_reported():
    # the opposite of a free band is right regular: xyx = yx, not xy
    sg = constructions.free_lrb(2)
    t = sg.tabulate()
    opp = [[t[j][i] for j in range(sg.size)] for i in range(sg.size)]
    rep = core.verify_lrb(core.Semigroup("opp", list(sg.keys), sg.identity,
                                         table=opp))
    assert not rep.ok
    assert not rep.deletion_ok


def test_missing_identity_is_reported():
    sg = constructions.free_lrb(2)
    t = sg.tabulate()
    rep = core.verify_lrb(core.Semigroup("shifted", list(sg.keys), 1,
                                         table=t))
    assert not rep.ok
    assert not rep.identity_ok


def test_semigroup_handle_validation():
    with pytest.raises(MalformedInputError):
        core.Semigroup("dup", ["a", "a"], 0, table=[[0, 1], [1, 1]])
    with pytest.raises(MalformedInputError):
        core.Semigroup("noop", ["a"], 0)
    with pytest.raises(MalformedInputError):
        core.Semigroup.from_json_dict({"elements": ["a"], "identity": 0,
                                       "table": [[3]]})


def test_json_round_trip_preserves_the_table():
    sg = constructions.free_lrb_bar(3)
    back = core.Semigroup.from_json_dict(sg.to_json_dict())
    assert back.keys == sg.keys
    assert back.table == sg.tabulate()
    assert core.verify_lrb(back).ok


def test_support_map_is_a_join_homomorphism():
    sg = constructions.free_lrb(3)
    st = core.derive_support(sg)
    for a in range(sg.size):
        for b in range(sg.size):
            ab = sg.product(a, b)
            assert st.supp[ab] == st.join[st.supp[a]][st.supp[b]]


def test_support_fibre_of_the_bottom_is_the_identity():
    sg = constructions.ordered_partitions(3)
    st = core.derive_support(sg)
    fibre = [x for x in range(sg.size) if st.supp[x] == st.bottom]
    assert fibre == [sg.identity]


def test_chambers_absorb_every_right_factor():
    # c is a chamber iff cx = c for every x, iff supp c is the top flat
    sg = constructions.free_lrb_bar(3)
    st = core.derive_support(sg)
    chambers = set(st.chambers)
    for c in range(sg.size):
        absorbing = all(sg.product(c, x) == c for x in range(sg.size))
        assert absorbing == (c in chambers)
        assert (st.supp[c] == st.top) == (c in chambers)


def test_expected_lattice_is_matched_on_the_free_band():
    sg = constructions.free_lrb(3)
    st = core.derive_support(sg)
    labels = core.check_expected_lattice(st)
    assert labels is not None
    assert len(labels) == 8


def test_moebius_values_on_the_boolean_support_lattice():
    # mu(bottom, X) = (-1)^|X| on the cube of subsets
    sg = constructions.free_lrb(3)
    st = core.derive_support(sg)
    labels = core.check_expected_lattice(st)
    for x in range(st.n_flats):
        size = labels[x].count(",") + 1 if labels[x] != "{}" else 0
        assert st.moebius(st.bottom, x) == (-1) ** size
    total = sum(st.moebius(st.bottom, x) for x in range(st.n_flats))
    assert total == 0


def test_coatoms_of_the_free_band_lattice():
    sg = constructions.free_lrb(3)
    st = core.derive_support(sg)
    coatoms = st.coatoms()
    assert len(coatoms) == 3
    for h in coatoms:
        assert st.leq[h][st.top] and h != st.top


def test_sub_semigroup_is_again_a_band():
    sg = constructions.free_lrb(3)
    sub = core.sub_semigroup(sg, sg.generators[0])
    assert sub.size == 5
    assert core.verify_lrb(sub).ok


def test_element_cap_guard_fires():
    from dataclasses import replace
    from bandwalk.guards import DEFAULT_GUARDS
    small = replace(DEFAULT_GUARDS, elements_cap=5)
    with pytest.raises(SizeGuardError):
        constructions.free_lrb(3, guards=small)


def test_lattice_idempotents_are_orthogonal_and_resolve_the_identity():
    sg = constructions.free_lrb(3)
    st = core.derive_support(sg)
    li = algebra.lattice_idempotents(st)
    assert len(li) == st.n_flats
    acc = {}
    for e in li:
        acc = algebra.alg_add(acc, e)
    assert acc == {st.bottom: 1}
    for a in range(st.n_flats):
        for b in range(st.n_flats):
            want = li[a] if a == b else {}
            got = algebra.lattice_multiply(st, li[a], li[b])
            assert algebra.alg_equal(got, want)
