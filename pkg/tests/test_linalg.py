"""Exact elimination, kernels, and characteristic polynomials."""

from fractions import Fraction

from bandwalk import linalg


F = Fraction


def test_rank_of_designed_matrices():
    assert linalg.rank([[F(1), F(2)], [F(2), F(4)]]) == 1
    assert linalg.rank([[F(1, 3), F(0)], [F(0), F(5, 7)]]) == 2
    assert linalg.rank([[F(0), F(0)], [F(0), F(0)]]) == 0
    # outer product has rank one regardless of size
    u = [F(1), F(-2), F(3), F(5, 2)]
    v = [F(7), F(1, 3), F(-1)]
    m = [[a * b for b in v] for a in u]
    assert linalg.rank(m) == 1


def test_rank_plus_nullity_is_width():
    m = [[F(1), F(2), F(3)],
         [F(2), F(4), F(6)],
         [F(1), F(0), F(1)]]
    assert linalg.rank(m) + linalg.nullity(m) == 3


def test_kernel_vectors_actually_annihilate():
    m = [[F(1), F(2), F(3)],
         [F(4), F(5), F(6)]]
    basis = linalg.kernel_basis(m)
    assert len(basis) == linalg.nullity(m) == 1
    for v in basis:
        for row in m:
            assert sum(a * b for a, b in zip(row, v)) == 0


def test_identity_and_subtraction_helpers():
    eye = linalg.identity_matrix(3)
    assert eye[0][0] == 1 and eye[0][1] == 0
    m = [[F(2), F(1)], [F(1), F(2)]]
    shifted = linalg.mat_sub_scaled_identity(m, F(2))
    assert shifted[0][0] == 0 and shifted[1][1] == 0
    assert shifted[0][1] == 1


def test_mat_mul_and_vec_products():
    a = [[F(1), F(2)], [F(3), F(4)]]
    b = [[F(0), F(1)], [F(1), F(0)]]
    assert linalg.mat_mul(a, b) == [[F(2), F(1)], [F(4), F(3)]]
    assert linalg.mat_vec(a, [F(1), F(1)]) == [F(3), F(7)]
    assert linalg.vec_mat([F(1), F(1)], a) == [F(4), F(6)]


def test_charpoly_of_small_matrices():
    # x^2 - 4x + 3 for [[2,1],[1,2]]
    m = [[F(2), F(1)], [F(1), F(2)]]
    assert linalg.charpoly(m) == [F(3), F(-4), F(1)]
    eye = linalg.identity_matrix(3)
    # (x - 1)^3
    assert linalg.charpoly(eye) == [F(-1), F(3), F(-3), F(1)]


def test_charpoly_root_multiplicities():
    m = [[F(2), F(1)], [F(1), F(2)]]
    p = linalg.charpoly(m)
    assert linalg.root_multiplicity(p, F(1)) == 1
    assert linalg.root_multiplicity(p, F(3)) == 1
    assert linalg.root_multiplicity(p, F(2)) == 0
    p3 = linalg.charpoly(linalg.identity_matrix(3))
    assert linalg.root_multiplicity(p3, F(1)) == 3


def test_poly_eval():
    p = [F(3), F(-4), F(1)]
    assert linalg.poly_eval(p, F(1)) == 0
    assert linalg.poly_eval(p, F(0)) == 3
    assert linalg.poly_eval(p, F(1, 2)) == F(5, 4)


def test_echelon_pivots_are_consistent_with_rank():
    m = [[F(0), F(1), F(2)],
         [F(0), F(2), F(4)],
         [F(1), F(1), F(1)]]
    ech = linalg.echelon_int_rows(linalg.int_rows(m))
    assert len(ech) == linalg.rank(m) == 2
    cols = [c for c, _ in ech]
    assert cols == sorted(cols)


def test_int_rows_scaling_preserves_rank():
    m = [[F(1, 2), F(1, 3)], [F(1, 5), F(1, 7)]]
    scaled = linalg.int_rows(m)
    assert all(isinstance(v, int) for row in scaled for v in row)
    assert linalg.rank_int_rows(scaled) == linalg.rank(m) == 2
