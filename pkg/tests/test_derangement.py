"""Generalized derangement numbers and their identities on lattices."""

from fractions import Fraction

import pytest

from bandwalk import derangement as der
from bandwalk import constructions, core, matroid
from bandwalk.errors import MalformedInputError, PreconditionError


K4 = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]


def test_boolean_lattices_give_the_classical_numbers():
    # includes the empty lattice, whose single element deranges trivially
    want = [1, 0, 1, 2, 9, 44]
    got = [der.derangement_number(der.boolean_lattice(n))
           for n in range(6)]
    assert got == want


def test_upper_derangements_on_the_cube():
    p = der.boolean_lattice(3)
    ups = der.upper_derangements(p)
    for x in range(p.size):
        size = p.rank[x]
        assert ups[x] == [1, 0, 1, 2][3 - size]
    assert sum(ups) == der.maximal_chain_count(p) == 6


def test_partition_lattices():
    want = {1: (1, 1, 1), 2: (2, 0, 1), 3: (5, 2, 3),
            4: (15, 5, 18), 5: (52, 79, 180)}
    for n, (size, d, chains) in want.items():
        p = der.partition_lattice(n)
        assert p.size == size
        assert der.derangement_number(p) == d
        assert der.maximal_chain_count(p) == chains


def test_subspace_lattices_give_q_derangements():
    for n, q in ((1, 2), (2, 2), (2, 3), (3, 2), (3, 3)):
        p = der.subspace_lattice(n, q)
        assert der.derangement_number(p) == \
            der.poly_eval(der.q_derangement(n), q)
    assert der.derangement_number(der.subspace_lattice(2, 2)) == 2
    assert der.maximal_chain_count(der.subspace_lattice(2, 2)) == 3


def test_contraction_lattices():
    triangle = der.contraction_lattice([(0, 1), (1, 2), (0, 2)])
    assert triangle.size == 5
    assert der.derangement_number(triangle) == 2
    # contracting the complete graph walks down the partition lattice
    k4 = der.contraction_lattice(K4)
    assert k4.size == 15
    assert der.derangement_number(k4) == 5
    path = der.contraction_lattice([(0, 1), (1, 2)])
    assert der.derangement_number(path) == \
        der.derangement_number(der.boolean_lattice(2)) == 1


def test_chain_products():
    assert der.derangement_number(der.chain_product([1, 1])) == 1
    assert der.derangement_number(der.chain_product([2, 2])) == 2
    assert der.derangement_number(der.chain_product([5])) == 0


def test_interval_extraction():
    p = der.boolean_lattice(4)
    sub = der.interval(p, p.index_of("{1}"), p.top)
    assert sub.size == 8
    assert der.derangement_number(sub) == 2
    with pytest.raises(PreconditionError):
        der.interval(p, p.index_of("{1}"), p.index_of("{2,3}"))


def test_matroid_flats_lattice_matches_direct_counts():
    m = matroid.Matroid.from_graph(K4)
    p = der.matroid_flats_lattice(m)
    assert p.size == 15
    assert der.derangement_number(p) == 5
    u24 = der.matroid_flats_lattice(matroid.Matroid.uniform(2, 4))
    assert u24.size == 6
    assert der.derangement_number(u24) == 3


def test_stanley_even_gap_identity():
    for p in (der.boolean_lattice(3), der.boolean_lattice(4),
              der.partition_lattice(4), der.subspace_lattice(2, 3),
              der.matroid_flats_lattice(matroid.Matroid.from_graph(K4))):
        d, total, ok = der.stanley_identity_check(p)
        assert ok, f"{p.name}: d={d} but h-sum={total}"
    d, total, ok = der.stanley_identity_check(der.boolean_lattice(3))
    assert (d, total) == (2, 2)


def test_rank_threaded_profile():
    p = der.boolean_lattice(4)
    rows = der.mahajan_profile(p)
    assert [r.r for r in rows] == [0, 1, 2, 3, 4]
    assert all(r.ok for r in rows)
    assert rows[-1].d_sum == 1
    assert rows[-2].d_sum == 0
    assert rows[0].d_sum == der.derangement_number(p)
    assert sum(r.d_sum for r in rows) == der.maximal_chain_count(p)


def test_top_h_entry_is_the_moebius_value():
    # h at the full rank set equals |mu(bottom, top)|
    for p in (der.boolean_lattice(3), der.partition_lattice(4),
              der.subspace_lattice(2, 2)):
        fv = der.flag_vectors(p)
        full = tuple(range(1, p.n))
        from bandwalk import posets
        mu = posets.moebius_table(p.leq)
        assert fv.h[full] == (-1) ** p.n * mu[(p.bottom, p.top)]


def test_q_polynomial_literals():
    assert der.q_int(3) == [1, 1, 1]
    assert der.q_factorial(3) == [1, 2, 2, 1]
    assert der.q_binomial(4, 2) == [1, 1, 2, 1, 1]
    assert der.q_derangement(2) == [0, 1]
    assert der.q_derangement(3) == [0, 1, 1]
    assert der.q_derangement(4) == [0, 1, 2, 2, 2, 1, 1]


def test_q_derangements_specialize_and_match_the_statistic():
    for n in range(7):
        dq = der.q_derangement(n)
        assert der.poly_eval(dq, 1) == \
            der.derangement_number(der.boolean_lattice(n))
        if n <= 5:
            assert dq == der.wachs_polynomial(n)


def test_desarrangements_are_counted_by_derangement_numbers():
    for n in range(1, 6):
        pool = der.desarrangements(n)
        assert len(pool) == der.poly_eval(der.q_derangement(n), 1)
        assert len(set(pool)) == len(pool)
        for w in pool:
            assert sorted(w) == list(range(1, n + 1))


def test_inversion_count():
    assert der.inversion_count((1, 2, 3)) == 0
    assert der.inversion_count((3, 2, 1)) == 3
    assert der.inversion_count((2, 4, 1, 3)) == 3


def test_poly_helpers():
    a, b = [1, 2], [0, 1, 1]
    assert der.poly_add(a, b) == [1, 3, 1]
    assert der.poly_sub(b, a) == [-1, -1, 1]
    assert der.poly_mul(a, b) == [0, 1, 3, 2]
    assert der.poly_trim([1, 0, 0]) == [1]
    assert der.poly_eval([1, 2, 3], Fraction(1, 2)) == Fraction(11, 4)


def test_support_lattice_export_and_intervals():
    sg = constructions.free_lrb(3)
    st = core.derive_support(sg)
    p = der.from_support_structure(st)
    assert p.size == 8
    assert der.derangement_number(p) == 2
    top_interval = der.interval(p, p.bottom, p.top)
    assert top_interval.size == 8


def test_poset_json_round_trip():
    from bandwalk import serialize
    p = der.boolean_lattice(2)
    obj = serialize.poset_dict(p)
    back = der.poset_from_json(obj)
    assert back.size == p.size
    assert der.derangement_number(back) == der.derangement_number(p)


def test_poset_json_rejects_garbage():
    with pytest.raises(MalformedInputError):
        der.poset_from_json({"elements": ["a"]})
    with pytest.raises(MalformedInputError):
        der.poset_from_json({"elements": ["a", "b"], "covers": []})


def test_graded_poset_needs_bounds():
    leq = [[True, False], [False, True]]
    with pytest.raises(MalformedInputError):
        der.graded_poset("antichain", ["a", "b"], leq)
