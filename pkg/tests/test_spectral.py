"""Transition matrices, eigenvalue bookkeeping, and certificates."""

from fractions import Fraction

import pytest

from bandwalk import constructions, core, spectral
from bandwalk.errors import (FalsificationError, MalformedInputError,
                             PreconditionError)


F = Fraction


def _f3():
    sg = constructions.free_lrb(3)
    return sg, core.derive_support(sg)


def test_weight_vector_validation():
    sg, _ = _f3()
    with pytest.raises(PreconditionError):
        spectral.WeightVector(sg, {sg.generators[0]: F(1, 2)})
    with pytest.raises(PreconditionError):
        spectral.WeightVector(sg, {sg.generators[0]: F(3, 2),
                                   sg.generators[1]: F(-1, 2)})
    with pytest.raises(MalformedInputError):
        spectral.WeightVector(sg, {10 ** 6: F(1)})
    with pytest.raises(MalformedInputError):
        spectral.WeightVector.from_keys(sg, {"zzz": "1/1"})
    w = spectral.WeightVector(sg, {sg.generators[0]: F(1, 2)},
                              require_probability=False)
    assert not w.is_probability and w.total == F(1, 2)


def test_uniform_and_seeded_weight_factories():
    sg, _ = _f3()
    u = spectral.uniform_on_generators(sg)
    assert u.is_probability
    assert u.support_ids() == sorted(sg.generators)
    s1 = spectral.seeded_generator_weights(sg, 5)
    s2 = spectral.seeded_generator_weights(sg, 5)
    assert s1.coeffs == s2.coeffs
    assert s1.is_probability


def test_transition_matrix_rows_are_stochastic():
    sg, st = _f3()
    P = spectral.transition_matrix(st, spectral.uniform_on_generators(sg))
    assert P.size == 6
    assert P.row_sums() == [F(1)] * 6


def _records_by_subset_label(sg, st, spec):
    pretty = core.check_expected_lattice(st)
    return {pretty[r.flat]: r for r in spec.records}


def test_uniform_free_band_spectrum():
    # lambda_X = |X| / 3 with multiplicities 1, 0, 1, 2 down the ranks
    sg, st = _f3()
    spec = spectral.spectrum(st, spectral.uniform_on_generators(sg))
    assert spec.n_chambers == 6
    assert spec.eigenvalues() == {F(1): 1, F(1, 3): 3, F(0): 2}
    by_label = _records_by_subset_label(sg, st, spec)
    assert by_label["{1,2,3}"].multiplicity == 1
    assert by_label["{1,2}"].multiplicity == 0
    assert by_label["{1}"].multiplicity == 1
    assert by_label["{}"].multiplicity == 2
    assert sum(r.multiplicity for r in spec.records) == 6


def test_chambers_above_counts():
    sg, st = _f3()
    spec = spectral.spectrum(st, spectral.uniform_on_generators(sg))
    by_label = _records_by_subset_label(sg, st, spec)
    assert by_label["{}"].chambers_above == 6
    assert by_label["{1}"].chambers_above == 2
    assert by_label["{1,2,3}"].chambers_above == 1


def test_diagonalizability_certificate_passes():
    sg, st = _f3()
    w = spectral.uniform_on_generators(sg)
    P = spectral.transition_matrix(st, w)
    cert = spectral.verify_diagonalizable(P, spectral.spectrum(st, w))
    assert cert.ok
    assert cert.total_observed == cert.total_expected == 6
    assert all(expected == observed for _, expected, observed in cert.entries)


def test_certificate_rejects_a_mismatched_spectrum():
    # eigenvalue data of one walk against the matrix of another
    sg, st = _f3()
    uni = spectral.uniform_on_generators(sg)
    skew = spectral.WeightVector(sg, {sg.generators[0]: F(1, 2),
                                      sg.generators[1]: F(1, 3),
                                      sg.generators[2]: F(1, 6)})
    P = spectral.transition_matrix(st, skew)
    spec = spectral.spectrum(st, uni)
    with pytest.raises(FalsificationError):
        spectral.verify_diagonalizable(P, spec, strict=True)
    cert = spectral.verify_diagonalizable(P, spec, strict=False)
    assert not cert.ok


def test_generic_weights_are_detected():
    sg, st = _f3()
    k = len(sg.generators)
    den = 2 ** k - 1
    w = spectral.WeightVector(
        sg, {g: F(2 ** i, den) for i, g in enumerate(sg.generators)})
    spec = spectral.spectrum(st, w)
    assert spec.is_generic
    assert len(spec.eigenvalues()) == len(
        [r for r in spec.records if r.multiplicity])


def test_remove_holding_probability():
    sg, st = _f3()
    P = spectral.transition_matrix(st, spectral.uniform_on_generators(sg))
    Q = spectral.remove_holding_probability(P, F(1, 3))
    assert Q.row_sums() == [F(1)] * 6
    assert all(Q.rows[i][i] == 0 for i in range(6))
    with pytest.raises(PreconditionError):
        spectral.remove_holding_probability(P, F(1))


def test_matrix_permutation_match():
    sg, st = _f3()
    P = spectral.transition_matrix(st, spectral.uniform_on_generators(sg))
    perm = list(reversed(range(P.size)))
    shuffled = [[P.rows[i][j] for j in perm] for i in perm]
    assert spectral.matrix_permutation_match(P.rows, shuffled)
    skew = spectral.seeded_generator_weights(sg, 1)
    R = spectral.transition_matrix(st, skew)
    assert not spectral.matrix_permutation_match(P.rows, R.rows)


def test_character_sums_weights_below_a_flat():
    sg, st = _f3()
    w = spectral.seeded_generator_weights(sg, 2)
    for flat in range(st.n_flats):
        lam = spectral.character(st, flat, dict(w.items()))
        manual = sum(v for x, v in w.items() if st.leq[st.supp[x]][flat])
        assert lam == manual
