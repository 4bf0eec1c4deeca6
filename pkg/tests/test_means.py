# This file is part of opineq and is released under the
# BSD 3-Clause license.
# See LICENSE in the root of the repository for full licensing details.
import math
import unittest

import numpy as np
from hypothesis import given, seed, settings
from hypothesis import strategies as st

from opineq.errors import ArgumentOutOfRange, NonPositiveArgument
from opineq.generators import gen_pd
from opineq.means import (ConstantBundle, arith_mean, check_weight, geo_mean,
                          harm_mean, kantorovich, mu, mu_alt, mu_combined,
                          specht)
from opineq.spectral import HermMatrix, loewner_cmp, mat_pow
import common


class TestWeight(unittest.TestCase):

    def test_bounds(self):
        self.assertEqual(check_weight(0), 0.0)
        self.assertEqual(check_weight(1), 1.0)
        self.assertRaises(ArgumentOutOfRange, check_weight, 1.5)
        self.assertRaises(ArgumentOutOfRange, check_weight, -0.1)


class TestMeans(unittest.TestCase):
    """Test opineq.means.arith_mean(), harm_mean() and geo_mean()"""

    def setUp(self):
        self.a = gen_pd(3, (0.2, 5.0), seed=1)
        self.b = gen_pd(3, (0.2, 5.0), seed=2)

    def test_endpoints(self):
        for mean in (arith_mean, harm_mean, geo_mean):
            self.assertIs(mean(self.a, self.b, 0.0), self.a)
            self.assertIs(mean(self.a, self.b, 1.0), self.b)

    def test_geo_mean_identity_pair(self):
        eye = HermMatrix.identity(3)
        np.testing.assert_allclose(geo_mean(eye, self.b, 0.5).entries,
                                   mat_pow(self.b, 0.5).entries, atol=1e-12)

    def test_geo_mean_commuting(self):
        a, b = common._commuting_pair([1.0, 4.0, 9.0], [4.0, 1.0, 1.0])
        expected, _ = common._commuting_pair([2.0, 2.0, 3.0],
                                             [1.0, 1.0, 1.0])
        np.testing.assert_allclose(geo_mean(a, b, 0.5).entries,
                                   expected.entries, atol=1e-12)

    def test_geo_mean_symmetric_in_weight(self):
        np.testing.assert_allclose(geo_mean(self.a, self.b, 0.3).entries,
                                   geo_mean(self.b, self.a, 0.7).entries,
                                   atol=1e-10)

    def test_geo_mean_riccati(self):
        # G A^-1 G = B for v = 1/2
        g = geo_mean(self.a, self.b, 0.5)
        lhs = g.entries @ np.linalg.inv(self.a.entries) @ g.entries
        np.testing.assert_allclose(lhs, self.b.entries, atol=1e-10)

    def test_young_chain(self):
        for v in (0.1, 0.5, 0.9):
            harm = harm_mean(self.a, self.b, v)
            geo = geo_mean(self.a, self.b, v)
            arith = arith_mean(self.a, self.b, v)
            self.assertTrue(loewner_cmp(harm, geo).le)
            self.assertTrue(loewner_cmp(geo, arith).le)


class TestConstants(unittest.TestCase):
    """Test opineq.means.specht(), kantorovich() and the mu constants"""

    def test_specht_at_one(self):
        self.assertEqual(specht(1.0), 1.0)

    def test_specht_value(self):
        t = 4.0
        expected = t ** (1 / (t - 1)) / (math.e * math.log(t ** (1 / (t - 1))))
        self.assertAlmostEqual(specht(t), expected, places=13)

    def test_specht_inversion_symmetric(self):
        for t in (0.01, 0.3, 2.0, 50.0):
            self.assertAlmostEqual(specht(t), specht(1.0 / t), places=12)

    def test_specht_continuous_at_one(self):
        below = specht(1.0 + 0.99e-4)
        above = specht(1.0 + 1.01e-4)
        self.assertAlmostEqual(below, above, delta=1e-10)

    def test_specht_large_argument(self):
        for t in (1e18, 1e30):
            log_t = math.log(t)
            expected = (log_t / (t - 1) - 1 - math.log(log_t)
                        + math.log(t - 1))
            self.assertAlmostEqual(math.log(specht(t)), expected, places=10)
            self.assertAlmostEqual(math.log(specht(1.0 / t)), expected,
                                   places=10)

    def test_specht_large_argument_continuous(self):
        # ratio log(t)/(t - 1) crosses 1/2 between these
        below = specht(3.51)
        above = specht(3.52)
        self.assertAlmostEqual(below, above, delta=2e-3)
        self.assertLess(below, above)

    def test_specht_nonpositive(self):
        self.assertRaises(NonPositiveArgument, specht, 0.0)

    def test_kantorovich(self):
        self.assertEqual(kantorovich(1.0), 1.0)
        self.assertEqual(kantorovich(3.0), 16.0 / 12.0)
        self.assertRaises(NonPositiveArgument, kantorovich, -1.0)

    def test_mu(self):
        self.assertEqual(mu(0.5, 4.0), max(specht(0.5), specht(4.0)))
        self.assertEqual(mu(1.0, 1.0), 1.0)

    def test_mu_alt(self):
        self.assertEqual(mu_alt(0.5, 2.0, 0.25),
                         kantorovich(2.0) ** 0.75)

    def test_mu_combined(self):
        self.assertAlmostEqual(mu_combined(1.0, 0.2, 0.5),
                               specht(math.exp(0.5)) ** 2)
        self.assertRaises(ArgumentOutOfRange, mu_combined, 0.0, 0.2, 0.5)
        self.assertRaises(ArgumentOutOfRange, mu_combined, 0.5, 0.6, 0.5)

    def test_mu_combined_wide_bounds(self):
        value = mu_combined(1.0, 0.1, 45.0)
        self.assertTrue(math.isfinite(value))
        expected = 2.0 * (45.0 / math.expm1(45.0) - 1.0 - math.log(45.0)
                          + math.log(math.expm1(45.0)))
        self.assertAlmostEqual(math.log(value), expected, places=9)

    @seed(3)
    @settings(deadline=None)
    @given(st.floats(min_value=1e-3, max_value=1e3))
    def test_specht_at_least_one(self, t):
        self.assertGreaterEqual(specht(t), 1.0)


class TestConstantBundle(unittest.TestCase):
    """Test opineq.means.ConstantBundle"""

    def test_for_sandwich(self):
        bundle = ConstantBundle.for_sandwich(0.5, 2.0, 0.25)
        self.assertEqual(bundle.mu, mu(0.5, 2.0))
        self.assertEqual(bundle.variant('kantorovich'), bundle.mu_alt)
        self.assertEqual(bundle.R, 0.75)
        self.assertIsNone(bundle.M)
        self.assertFalse(bundle.log_scale)

    def test_for_olson(self):
        bundle = ConstantBundle.for_olson(0.1, 0.4, 0.5, r=0.5)
        self.assertAlmostEqual(bundle.N, mu(math.exp(0.1), math.exp(0.4)))
        self.assertAlmostEqual(
            bundle.M, mu(math.exp(0.05), math.exp(0.2)) ** 2.0)
        self.assertAlmostEqual(bundle.mu_combined,
                               mu_combined(0.5, 0.1, 0.4))
        self.assertTrue(bundle.log_scale)

    def test_unknown_variant(self):
        bundle = ConstantBundle.for_sandwich(1.0, 1.0, 0.5)
        self.assertRaises(ArgumentOutOfRange, bundle.variant, 'other')

    def test_dict(self):
        bundle = ConstantBundle.for_sandwich(0.5, 2.0, 0.5)
        self.assertEqual(ConstantBundle.from_dict(bundle.to_dict()), bundle)


if __name__ == '__main__':
    unittest.main()
