# This file is part of opineq and is released under the
# BSD 3-Clause license.
# See LICENSE in the root of the repository for full licensing details.
import unittest

import numpy as np
import scipy.linalg
from hypothesis import given, seed, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from opineq.catalog import resolve
from opineq.errors import (ArgumentOutOfRange, DimMismatch, DomainViolation,
                           NonSymmetric, NotCommuting, NotPositiveDefinite)
from opineq.spectral import (HermMatrix, Relation, Tolerance, apply_fn,
                             commutator_norm, eig_sym, inverse, is_pd,
                             loewner_cmp, loewner_margin, mat_exp, mat_log,
                             mat_pow, matrix_from_json, matrix_to_json,
                             require_commuting)
import common

SPD_3 = [[4.0, 1.0, 0.5],
         [1.0, 3.0, 0.2],
         [0.5, 0.2, 2.0]]


class TestHermMatrix(unittest.TestCase):
    """Test opineq.spectral.HermMatrix"""

    def test_rejects_non_square(self):
        self.assertRaises(NonSymmetric, HermMatrix, [[1.0, 2.0]])

    def test_rejects_asymmetric(self):
        self.assertRaises(NonSymmetric, HermMatrix, [[1.0, 2.0], [0.0, 1.0]])

    def test_rejects_nan(self):
        self.assertRaises(ArgumentOutOfRange, HermMatrix,
                          [[np.nan, 0.0], [0.0, 1.0]])

    def test_entries_read_only(self):
        a = HermMatrix(SPD_3)
        with self.assertRaises(ValueError):
            a.entries[0, 0] = 1.0

    def test_arithmetic(self):
        a = HermMatrix.diag([1.0, 2.0])
        b = HermMatrix.identity(2)
        np.testing.assert_array_equal((2 * a - b).entries,
                                      np.diag([1.0, 3.0]))
        np.testing.assert_array_equal((a / 2).entries, np.diag([0.5, 1.0]))

    def test_dim_mismatch(self):
        with self.assertRaises(DimMismatch):
            HermMatrix.identity(2) + HermMatrix.identity(3)

    def test_quadratic_form(self):
        a = HermMatrix(SPD_3)
        x = np.array([1.0, -1.0, 2.0])
        self.assertAlmostEqual(a.quadratic_form(x),
                               float(x @ np.array(SPD_3) @ x))


class TestEigSym(unittest.TestCase):
    """Test opineq.spectral.eig_sym()"""

    def test_diagonal_sorted(self):
        spectrum = eig_sym(HermMatrix.diag([2.0, 3.0, 1.0]))
        np.testing.assert_array_equal(spectrum.eigenvalues, [3.0, 2.0, 1.0])

    def test_against_scipy(self):
        expected = scipy.linalg.eigh(np.array(SPD_3), eigvals_only=True)
        np.testing.assert_allclose(eig_sym(SPD_3).eigenvalues,
                                   expected[::-1], rtol=1e-12)

    def test_reconstruction(self):
        values, vectors = eig_sym(SPD_3)
        np.testing.assert_allclose((vectors * values) @ vectors.T, SPD_3,
                                   atol=1e-12)
        np.testing.assert_allclose(vectors.T @ vectors, np.eye(3),
                                   atol=1e-12)

    def test_one_by_one(self):
        self.assertEqual(eig_sym([[5.0]]).eigenvalues.tolist(), [5.0])

    @seed(20)
    @settings(deadline=None, max_examples=50)
    @given(arrays(np.float64, (4, 4),
                  elements=st.floats(min_value=-10.0, max_value=10.0)))
    def test_eigenvalues_match_numpy(self, arr):
        sym = 0.5 * (arr + arr.T)
        expected = np.sort(np.linalg.eigvalsh(sym))[::-1]
        np.testing.assert_allclose(eig_sym(sym).eigenvalues, expected,
                                   atol=1e-10)


class TestFunctionalCalculus(unittest.TestCase):
    """Test opineq.spectral.apply_fn() and the matrix functions"""

    def test_sqrt(self):
        root = apply_fn(HermMatrix(SPD_3), resolve('sqrt'))
        np.testing.assert_allclose(root.entries,
                                   scipy.linalg.sqrtm(np.array(SPD_3)),
                                   rtol=1e-10)

    def test_log_exp(self):
        a = HermMatrix(SPD_3)
        np.testing.assert_allclose(mat_log(a).entries,
                                   scipy.linalg.logm(np.array(SPD_3)),
                                   atol=1e-10)
        np.testing.assert_allclose(mat_exp(mat_log(a)).entries, SPD_3,
                                   atol=1e-10)

    def test_inverse(self):
        np.testing.assert_allclose(inverse(HermMatrix(SPD_3)).entries,
                                   np.linalg.inv(np.array(SPD_3)),
                                   atol=1e-12)

    def test_domain_violation(self):
        with self.assertRaises(DomainViolation) as ctx:
            apply_fn(HermMatrix.diag([0.5, 2.0]), resolve('one_minus_t'))
        self.assertEqual(ctx.exception.offending, [2.0])

    def test_integer_power_of_indefinite(self):
        squared = mat_pow(HermMatrix.diag([-1.0, 2.0]), 2)
        np.testing.assert_allclose(squared.entries, np.diag([1.0, 4.0]))

    def test_fractional_power_needs_pd(self):
        self.assertRaises(NotPositiveDefinite, mat_pow,
                          HermMatrix.diag([-1.0, 2.0]), 0.5)

    def test_is_pd(self):
        self.assertTrue(is_pd(SPD_3))
        self.assertFalse(is_pd(HermMatrix.diag([1.0, 0.0])))


class TestLoewner(unittest.TestCase):
    """Test opineq.spectral.loewner_cmp()"""

    def test_le(self):
        a = HermMatrix(SPD_3)
        self.assertEqual(loewner_cmp(a, 2 * a).relation, Relation.LE)
        self.assertGreater(loewner_margin(a, 2 * a), 0)

    def test_eq(self):
        a = HermMatrix(SPD_3)
        result = loewner_cmp(a, a)
        self.assertEqual(result.relation, Relation.EQ)
        self.assertTrue(result.le and result.ge)

    def test_incomparable(self):
        result = loewner_cmp(HermMatrix.diag([1.0, 2.0]),
                             HermMatrix.diag([2.0, 1.0]))
        self.assertEqual(result.relation, Relation.INCOMPARABLE)
        self.assertAlmostEqual(result.margin, -0.5)

    def test_squares_not_ordered(self):
        a, b = common._olson_fail_pair()
        self.assertTrue(loewner_cmp(a, b).le)
        self.assertFalse(loewner_cmp(mat_pow(a, 2), mat_pow(b, 2)).le)

    def test_tolerance_absorbs_rounding(self):
        a = HermMatrix.diag([1.0, 1.0])
        b = HermMatrix.diag([1.0 - 1e-12, 1.0])
        self.assertTrue(loewner_cmp(a, b).le)
        self.assertFalse(loewner_cmp(a, b, Tolerance(0.0, 0.0)).le)

    def test_slack_scales_with_operand_norm(self):
        a = HermMatrix.diag([1e6, 1e6])
        b = HermMatrix.diag([1e6 + 1e-5, 1e6])
        result = loewner_cmp(a, b)
        self.assertEqual(result.relation, Relation.EQ)
        self.assertAlmostEqual(result.margin, 0.0, places=12)
        small = loewner_cmp(HermMatrix.diag([1.0, 1.0]),
                            HermMatrix.diag([1.0 + 1e-5, 1.0]))
        self.assertEqual(small.relation, Relation.LE)

    def test_negative_tolerance(self):
        self.assertRaises(ArgumentOutOfRange, Tolerance, -1.0, 0.0)


class TestCommuting(unittest.TestCase):

    def test_commuting_pair(self):
        a, b = common._commuting_pair([1.0, 2.0, 3.0], [3.0, 0.5, 1.0])
        self.assertLess(commutator_norm(a, b), 1e-12)
        require_commuting(a, b)

    def test_not_commuting(self):
        a, b = common._olson_fail_pair()
        self.assertRaises(NotCommuting, require_commuting, mat_pow(a, 2),
                          HermMatrix.diag([1.0, 2.0]))


class TestMatrixJson(unittest.TestCase):

    def test_round_trip_exact(self):
        a = HermMatrix(np.array(SPD_3) / 3.0)
        again = matrix_from_json(matrix_to_json(a))
        np.testing.assert_array_equal(again.entries, a.entries)

    def test_dim_checked(self):
        self.assertRaises(DimMismatch, matrix_from_json,
                          {'dim': 3, 'entries': [[1.0]]})


if __name__ == '__main__':
    unittest.main()
