import unittest

import numpy

from swipt.core.exceptions import SWIPTNumericsException, SWIPTValueException
from swipt.utils.quadrature import QuadSpec, quad_interval, quad_semi_infinite, quad_vec_semi_infinite


class TestQuadrature(unittest.TestCase):

    def test_interval(self):
        result = quad_interval(numpy.sin, 0.0, numpy.pi)
        self.assertAlmostEqual(result.value, 2.0, places=9)
        self.assertAlmostEqual(float(result), 2.0, places=9)

    def test_semi_infinite(self):
        self.assertAlmostEqual(quad_semi_infinite(lambda t: numpy.exp(-t)).value, 1.0, places=9)
        self.assertAlmostEqual(quad_semi_infinite(lambda t: 1.0 / (1.0 + t * t)).value, numpy.pi / 2.0, places=8)

    def test_vector(self):
        result = quad_vec_semi_infinite(lambda t: numpy.array([numpy.exp(-t), numpy.exp(-2.0 * t), t * numpy.exp(-t)]))
        numpy.testing.assert_allclose(result.value, [1.0, 0.5, 1.0], rtol=1e-7)

    def test_non_finite(self):
        with self.assertRaises(SWIPTNumericsException):
            quad_interval(lambda t: numpy.nan, 0.0, 1.0)

    def test_spec(self):
        self.assertRaises(SWIPTValueException, QuadSpec, abs_tol=0.0)
        self.assertRaises(SWIPTValueException, QuadSpec, max_subdivisions=2)
        self.assertAlmostEqual(QuadSpec(abs_tol=1e-6, rel_tol=1e-3).tolerance(10.0), 1e-2, places=15)

    def test_subdivision_limit(self):
        coarse = QuadSpec(max_subdivisions=8)
        with self.assertRaises(SWIPTNumericsException):
            quad_interval(lambda x: numpy.sin(1.0 / x) / x, 0.0, 1.0, spec=coarse)
        with self.assertRaises(SWIPTNumericsException):
            quad_vec_semi_infinite(lambda t: numpy.array([numpy.exp(-t), numpy.sin(t) / (1.0 + t)]), spec=coarse)

    def test_divergent(self):
        with self.assertRaises(SWIPTNumericsException):
            quad_interval(lambda x: 1.0 / x, 0.0, 1.0)
        with self.assertRaises(SWIPTNumericsException):
            quad_semi_infinite(lambda t: 1.0 / (1.0 + t))

    def test_vector_non_finite(self):
        with self.assertRaises(SWIPTNumericsException):
            quad_vec_semi_infinite(lambda t: numpy.array([numpy.exp(-t), numpy.nan]))
        with self.assertRaises(SWIPTNumericsException):
            quad_vec_semi_infinite(lambda t: numpy.array([numpy.exp(-t), numpy.inf if t > 1.0 else 0.0]))
