# This file is part of opineq and is released under the
# BSD 3-Clause license.
# See LICENSE in the root of the repository for full licensing details.
import unittest

import numpy as np

from opineq.errors import (ArgumentOutOfRange, EmptyGrid, IndexOutOfRange,
                           LengthMismatch)
from opineq.generators import gen_pd
from opineq.majorization import (EigVector, bottomk_prod,
                                 log_majorization_gap, majorize, olson_leq,
                                 prefix_sums, topk_prod, weak_majorize)
from opineq.spectral import HermMatrix
import common


class TestEigVector(unittest.TestCase):

    def test_requires_non_increasing(self):
        self.assertRaises(ArgumentOutOfRange, EigVector, [1.0, 2.0])

    def test_sorted(self):
        self.assertEqual(EigVector.sorted([1.0, 3.0, 2.0]).values.tolist(),
                         [3.0, 2.0, 1.0])

    def test_of_matrix(self):
        self.assertEqual(
            EigVector.of(HermMatrix.diag([1.0, 5.0])).values.tolist(),
            [5.0, 1.0])


class TestWeakMajorize(unittest.TestCase):
    """Test opineq.majorization.weak_majorize() and majorize()"""

    def test_holds(self):
        result = weak_majorize([3.0, 1.0], [4.0, 1.0])
        self.assertTrue(result.holds)
        self.assertEqual(result.worst_k, 1)
        np.testing.assert_array_equal(result.margins, [1.0, 1.0])

    def test_fails_at_k(self):
        result = weak_majorize([3.0, 2.0], [4.0, 0.0])
        self.assertFalse(result.holds)
        self.assertEqual(result.worst_k, 2)
        self.assertEqual(result.margin, -1.0)

    def test_length_mismatch(self):
        self.assertRaises(LengthMismatch, weak_majorize, [1.0], [2.0, 1.0])

    def test_majorize(self):
        self.assertTrue(majorize([2.0, 2.0], [3.0, 1.0]))
        self.assertFalse(majorize([2.0, 1.0], [3.0, 1.0]))

    def test_prefix_sums(self):
        np.testing.assert_array_equal(prefix_sums([3.0, 2.0, 1.0]),
                                      [3.0, 5.0, 6.0])


class TestEigenProducts(unittest.TestCase):

    def test_topk_bottomk(self):
        a = HermMatrix.diag([1.0, 2.0, 3.0])
        self.assertAlmostEqual(topk_prod(a, 2), 6.0)
        self.assertAlmostEqual(bottomk_prod(a, 2), 2.0)
        self.assertAlmostEqual(topk_prod(a, 3), bottomk_prod(a, 3))

    def test_k_out_of_range(self):
        a = HermMatrix.identity(2)
        self.assertRaises(IndexOutOfRange, topk_prod, a, 0)
        self.assertRaises(IndexOutOfRange, bottomk_prod, a, 3)


class TestOlson(unittest.TestCase):
    """Test opineq.majorization.olson_leq()"""

    def test_loewner_but_not_olson(self):
        a, b = common._olson_fail_pair()
        result = olson_leq(a, b, (1.0, 2.0))
        self.assertFalse(result.holds)
        self.assertEqual(result.failing_r, 2.0)
        self.assertGreaterEqual(result.margins[0], 0.0)

    def test_scalar_multiple(self):
        a = gen_pd(3, seed=4)
        result = olson_leq(a, 2.0 * a)
        self.assertTrue(result.holds)
        self.assertIsNone(result.failing_r)

    def test_bad_grid(self):
        a = HermMatrix.identity(2)
        self.assertRaises(EmptyGrid, olson_leq, a, a, ())
        self.assertRaises(ArgumentOutOfRange, olson_leq, a, a, (0.5,))


class TestLogMajorization(unittest.TestCase):

    def test_gap_nonnegative_and_trace_equal(self):
        a = gen_pd(4, (0.2, 5.0), seed=5)
        b = gen_pd(4, (0.2, 5.0), seed=6)
        gaps = log_majorization_gap(a, b, 0.3)
        self.assertTrue(np.all(gaps[:-1] >= -1e-10))
        self.assertAlmostEqual(gaps[-1], 0.0, places=10)


if __name__ == '__main__':
    unittest.main()
