"""Matrix types, factorization, inversion, Schur complements, edge sets."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from ggmsep import (
    CovarianceMatrix,
    DimensionMismatch,
    EdgeSet,
    EmptyIndexSet,
    InvalidParameters,
    NotPositiveDefinite,
    OmegaF,
    OmegaInf,
    PrecisionMatrix,
    class_membership,
    edge_set_of,
    factorize,
    invert,
    random_sparse_precision,
    schur_complement,
)

COUNTEREXAMPLE_D2 = [[2.0, 1.0, -1.0], [1.0, 2.0, -1.0], [-1.0, -1.0, 1.0]]


class TestMatrixTypes:
    def test_precision_requires_pd(self):
        with pytest.raises(NotPositiveDefinite):
            PrecisionMatrix([[1.0, 2.0], [2.0, 1.0]])

    def test_precision_rejects_asymmetric(self):
        with pytest.raises(ValueError, match="symmetric"):
            PrecisionMatrix([[1.0, 0.5], [0.2, 1.0]])

    def test_rejects_order_one(self):
        with pytest.raises(ValueError, match="order"):
            PrecisionMatrix([[2.0]])

    def test_rejects_non_square(self):
        with pytest.raises(ValueError, match="square"):
            CovarianceMatrix([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError, match="finite"):
            CovarianceMatrix([[1.0, 0.0], [0.0, math.nan]])

    def test_entries_exactly_symmetric_after_construction(self):
        # tiny asymmetry below tolerance is averaged away bit-for-bit
        arr = np.array([[2.0, 0.3 + 1e-12], [0.3, 2.0]])
        theta = PrecisionMatrix(arr)
        assert np.array_equal(theta.matrix, theta.matrix.T)

    def test_array_is_read_only(self):
        theta = PrecisionMatrix(np.eye(2))
        with pytest.raises(ValueError):
            theta.matrix[0, 0] = 5.0

    def test_covariance_accepts_psd_singular(self):
        # rank-one second-moment matrix from a single observation
        x = np.array([1.0, 2.0, -1.0])
        CovarianceMatrix(np.outer(x, x))

    def test_order_property(self):
        assert PrecisionMatrix(np.eye(4)).p == 4


class TestFactorize:
    def test_identity(self):
        fact = factorize(PrecisionMatrix(np.eye(3)))
        assert_allclose(fact.factor, np.eye(3))
        assert fact.log_determinant == 0.0

    def test_diagonal(self):
        fact = factorize(PrecisionMatrix(np.diag([2.0, 2.0])))
        assert_allclose(fact.log_determinant, 2 * math.log(2), rtol=1e-15)

    def test_two_by_two(self):
        # det [[2,1],[1,2]] = 3 by cofactor expansion
        fact = factorize(PrecisionMatrix([[2.0, 1.0], [1.0, 2.0]]))
        assert_allclose(fact.log_determinant, math.log(3.0), rtol=1e-15)

    def test_reconstruction_and_logdet_consistency(self):
        rng = np.random.default_rng(11)
        for p in (3, 10, 50):
            theta = random_sparse_precision(p, rng)
            fact = factorize(theta)
            recon = fact.factor @ fact.factor.T
            assert np.max(np.abs(recon - theta.matrix)) <= 1e-12 * np.max(np.abs(theta.matrix))
            assert_allclose(
                fact.log_determinant,
                2.0 * np.sum(np.log(np.diag(fact.factor))),
                rtol=1e-15,
            )

    def test_not_pd_from_covariance(self):
        x = np.array([1.0, 2.0])
        with pytest.raises(NotPositiveDefinite):
            factorize(CovarianceMatrix(np.outer(x, x)))


class TestInvert:
    def test_identity(self):
        assert_allclose(invert(PrecisionMatrix(np.eye(3))).matrix, np.eye(3))

    def test_diagonal_reciprocals(self):
        cov = invert(PrecisionMatrix(np.diag([2.0, 4.0])))
        assert_allclose(cov.matrix, np.diag([0.5, 0.25]), rtol=1e-14)

    def test_two_by_two_formula(self):
        cov = invert(PrecisionMatrix([[1.0, -0.5], [-0.5, 1.0]]))
        assert_allclose(cov.matrix, (4.0 / 3.0) * np.array([[1.0, 0.5], [0.5, 1.0]]), rtol=1e-13)

    def test_kind_flips(self):
        theta = PrecisionMatrix(np.eye(2))
        cov = invert(theta)
        assert isinstance(cov, CovarianceMatrix)
        assert isinstance(invert(cov), PrecisionMatrix)

    def test_roundtrip_identity_p50(self):
        theta = random_sparse_precision(50, np.random.default_rng(3))
        cov = invert(theta)
        assert np.max(np.abs(theta.matrix @ cov.matrix - np.eye(50))) < 1e-10

    @settings(max_examples=40, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), p=st.integers(2, 50))
    def test_involution_and_logdet_negation(self, seed, p):
        theta = random_sparse_precision(p, np.random.default_rng(seed))
        cov = invert(theta)
        back = invert(cov)
        scale = np.max(np.abs(theta.matrix))
        assert np.max(np.abs(back.matrix - theta.matrix)) < 1e-9 * scale
        assert abs(factorize(cov).log_determinant + factorize(theta).log_determinant) < 1e-9


class TestSchurComplement:
    def test_block_diagonal_keeps_block(self):
        a = np.array([[2.0, 0.5], [0.5, 1.0]])
        b = np.array([[3.0, -1.0], [-1.0, 2.0]])
        m = np.block([[a, np.zeros((2, 2))], [np.zeros((2, 2)), b]])
        assert_allclose(schur_complement(m, [0, 1]), a, rtol=1e-15)

    def test_scalar_case(self):
        out = schur_complement(CovarianceMatrix([[2.0, 1.0], [1.0, 2.0]]), [0])
        assert_allclose(out, [[1.5]], rtol=1e-15)

    def test_determinant_identity_random(self):
        # oracle: plain determinants of the full matrix and the complement block
        rng = np.random.default_rng(5)
        for _ in range(20):
            m = random_sparse_precision(5, rng).matrix
            keep = [0, 2]
            comp = [1, 3, 4]
            s = schur_complement(m, keep)
            lhs = np.linalg.det(s)
            rhs = np.linalg.det(m) / np.linalg.det(m[np.ix_(comp, comp)])
            assert_allclose(lhs, rhs, rtol=1e-10)

    def test_result_is_spd(self):
        theta = random_sparse_precision(6, np.random.default_rng(8))
        s = schur_complement(invert(theta), [1, 3, 4])
        assert np.array_equal(s, s.T)
        np.linalg.cholesky(s)

    def test_empty_keep(self):
        with pytest.raises(EmptyIndexSet):
            schur_complement(np.eye(3), [])

    def test_full_keep(self):
        with pytest.raises(EmptyIndexSet):
            schur_complement(np.eye(3), [0, 1, 2])

    def test_non_pd_complement(self):
        m = np.array([[1.0, 0.0], [0.0, -1.0]])
        with pytest.raises(NotPositiveDefinite):
            schur_complement(m, [0])


class TestEdgeSet:
    def test_rejects_self_loop(self):
        with pytest.raises(ValueError, match="self-loop"):
            EdgeSet(3, [(1, 1)])

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError, match="range"):
            EdgeSet(3, [(0, 3)])

    def test_normalizes_and_dedupes(self):
        e = EdgeSet(4, [(2, 0), (0, 2), [1, 3]])
        assert sorted(e) == [(0, 2), (1, 3)]
        assert (2, 0) in e and (0, 2) in e
        assert (0, 1) not in e

    def test_complete_and_without(self):
        e = EdgeSet.complete(4)
        assert len(e) == 6
        assert len(e.without((0, 1), (3, 2))) == 4

    def test_difference_and_subset(self):
        a = EdgeSet(3, [(0, 1), (1, 2)])
        b = EdgeSet(3, [(1, 2)])
        assert a.difference(b) == frozenset({(0, 1)})
        assert b.is_subset_of(a)
        with pytest.raises(DimensionMismatch):
            a.difference(EdgeSet(4, [(0, 1)]))

    def test_equality_and_hash(self):
        assert EdgeSet(3, [(0, 1)]) == EdgeSet(3, [(1, 0)])
        assert hash(EdgeSet(3, [(0, 1)])) == hash(EdgeSet(3, [(1, 0)]))
        assert EdgeSet(3, [(0, 1)]) != EdgeSet(4, [(0, 1)])


class TestEdgeSetOf:
    def test_diagonal_matrix_has_no_edges(self):
        assert len(edge_set_of(PrecisionMatrix(np.diag([1.0, 2.0, 3.0])))) == 0

    def test_dense_three_by_three(self):
        e = edge_set_of(PrecisionMatrix(COUNTEREXAMPLE_D2))
        assert sorted(e) == [(0, 1), (0, 2), (1, 2)]

    def test_sub_tolerance_entry_dropped(self):
        theta = PrecisionMatrix([[2.0, 1e-15, 0.0], [1e-15, 2.0, 1.0], [0.0, 1.0, 2.0]])
        assert sorted(edge_set_of(theta, zero_tol=1e-12)) == [(1, 2)]

    @settings(max_examples=30, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), p=st.integers(2, 12))
    def test_roundtrip_from_edge_set(self, seed, p):
        rng = np.random.default_rng(seed)
        theta = random_sparse_precision(p, rng)
        edges = edge_set_of(theta, zero_tol=0.0)
        # rebuild a matrix supported on exactly these edges
        arr = np.zeros((p, p))
        for i, j in edges:
            arr[i, j] = arr[j, i] = 0.5
        arr[np.diag_indices(p)] = np.sum(np.abs(arr), axis=1) + 1.0
        assert edge_set_of(PrecisionMatrix(arr), zero_tol=0.0) == edges


class TestClassMembership:
    def test_identity_on_frobenius_boundary(self):
        for p in (2, 5, 9):
            theta = PrecisionMatrix(np.eye(p))
            assert class_membership(theta, OmegaF(math.sqrt(p)))
            assert not class_membership(theta, OmegaF(math.sqrt(p) * 0.999))

    def test_entrywise_class(self):
        theta = PrecisionMatrix([[2.0, 1.0], [1.0, 2.0]])
        assert class_membership(theta, OmegaInf(alpha=1.0, h=2.0))
        assert not class_membership(theta, OmegaInf(alpha=1.5, h=2.0))

    def test_counterexample_matrix_in_class(self):
        theta = PrecisionMatrix(COUNTEREXAMPLE_D2)
        assert class_membership(theta, OmegaInf(alpha=1.0, h=2.0))

    def test_diagonal_above_h_excluded(self):
        theta = PrecisionMatrix(np.diag([1.0, 3.0]))
        assert not class_membership(theta, OmegaInf(alpha=0.5, h=2.0))

    def test_spec_validation(self):
        with pytest.raises(InvalidParameters):
            OmegaInf(alpha=2.0, h=1.0)
        with pytest.raises(InvalidParameters):
            OmegaInf(alpha=-1.0, h=1.0)
        with pytest.raises(InvalidParameters):
            OmegaF(gamma=0.0)
