import unittest

import numpy
import scipy.stats

from swipt.core.cell_load import (association_distance_cdf, nonvoid_probability, pmf_truncation_index,
                                  user_count_pmf, user_count_pmf_table, void_probability)
from swipt.core.exceptions import SWIPTValueException


class TestUserCountPmf(unittest.TestCase):

    def setUp(self):
        self.loads = [0.01, 0.5, 2.0, 25.0, 400.0]

    def test_normalized_with_load_as_mean(self):
        for load in self.loads:
            with self.subTest(load=load):
                pmf = user_count_pmf_table(load)
                n = numpy.arange(pmf.size)
                self.assertGreater(pmf.sum(), 1.0 - 1e-10)
                self.assertLessEqual(pmf.sum(), 1.0 + 1e-12)
                numpy.testing.assert_allclose(numpy.sum(n * pmf), load, rtol=1e-8)

    def test_negative_binomial(self):
        # shape 7/2 and success probability 1/(1 + 2ℓ/7) in scipy's parametrization
        load = 3.0
        n = numpy.arange(40)
        expected = scipy.stats.nbinom.pmf(n, 3.5, 1.0 / (1.0 + load / 3.5))
        numpy.testing.assert_allclose(user_count_pmf(load, n), expected, rtol=1e-10)

    def test_nonvoid_probability(self):
        load = numpy.array(self.loads)
        numpy.testing.assert_allclose(nonvoid_probability(load), 1.0 - (1.0 + 2.0 * load / 7.0) ** -3.5, rtol=1e-12)
        self.assertEqual(nonvoid_probability(0.0), 0.0)
        self.assertTrue(numpy.all(numpy.diff(nonvoid_probability(load)) > 0))
        numpy.testing.assert_allclose(void_probability(load) + nonvoid_probability(load), 1.0)

    def test_large_counts(self):
        p = user_count_pmf(5.0, numpy.array([1000, 100000]))
        self.assertTrue(numpy.all(numpy.isfinite(p)))
        self.assertTrue(numpy.all(p >= 0.0))

    def test_invalid(self):
        self.assertRaises(SWIPTValueException, user_count_pmf, -1.0, 0)
        self.assertRaises(SWIPTValueException, user_count_pmf, 1.0, 1.5)
        self.assertRaises(SWIPTValueException, user_count_pmf, 1.0, -1)
        self.assertRaises(SWIPTValueException, pmf_truncation_index, 1.0, 0.0)


class TestTruncation(unittest.TestCase):

    def test_tail_below_target(self):
        for load in (0.3, 4.0, 60.0):
            for tail in (1e-6, 1e-12):
                with self.subTest(load=load, tail=tail):
                    index = pmf_truncation_index(load, tail_mass=tail)
                    self.assertGreater(index, load)
                    missed = scipy.stats.nbinom.sf(index - 1, 3.5, 1.0 / (1.0 + load / 3.5))
                    self.assertLess(missed, tail)

    def test_zero_load(self):
        self.assertEqual(pmf_truncation_index(0.0), 1)
        numpy.testing.assert_array_equal(user_count_pmf_table(0.0), [1.0])

    def test_monotone_in_load(self):
        indices = [pmf_truncation_index(load) for load in (0.5, 5.0, 50.0)]
        self.assertListEqual(indices, sorted(indices))


class TestAssociationDistance(unittest.TestCase):

    def test_cdf(self):
        theta = numpy.array([0.0, 1e3, 1e5])
        lambda_sigma = 2e-5
        numpy.testing.assert_allclose(association_distance_cdf(theta, lambda_sigma),
                                      1.0 - numpy.exp(-numpy.pi * lambda_sigma * theta))
        self.assertEqual(association_distance_cdf(0.0, 1.0), 0.0)

    def test_negative(self):
        self.assertRaises(SWIPTValueException, association_distance_cdf, -1.0, 1.0)
