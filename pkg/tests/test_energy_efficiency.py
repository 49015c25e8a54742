import unittest

import numpy

import swipt
from swipt.core.energy_efficiency import (LinkRateModel, Optimizer, energy_efficiency, feasible_sets,
                                          fractional_slope_sign, optimize, power_consumption, ratio_threshold)
from swipt.core.exceptions import SWIPTInfeasibleException, SWIPTValueException
from swipt.models import EEBranch, RatePair


def linear_rates(d0, d1, u):
    return lambda rho: RatePair(d0 + d1 * rho, u)


def no_outage(rho):
    return 0.0


class TestEfficiency(unittest.TestCase):

    def setUp(self):
        self.p = swipt.load_params()
        self.transmit = numpy.dot(self.p.theta, self.p.powers)
        self.hardware = numpy.dot(self.p.theta, self.p.network.hardware_powers)

    def test_power_consumption(self):
        q = self.p.swipt.user_power
        self.assertAlmostEqual(power_consumption(0.75, self.p), 0.75 * self.transmit + self.hardware + 0.25 * q)

    def test_energy_efficiency(self):
        zeta = energy_efficiency(0.5, 0.75, self.p, rates=(2.0, 1.0))
        expected = (0.75 * 2.0 + 0.25 * 1.0) / (numpy.log(2.0) * power_consumption(0.75, self.p))
        self.assertAlmostEqual(zeta, expected, places=12)
        self.assertAlmostEqual(energy_efficiency(0.5, 0.75, self.p, rate_model=linear_rates(2.0, 0.0, 1.0)), zeta)

    def test_invalid(self):
        self.assertRaises(SWIPTValueException, energy_efficiency, 0.0, 0.5, self.p, rates=(1.0, 1.0))
        self.assertRaises(SWIPTValueException, energy_efficiency, 0.5, 1.5, self.p, rates=(1.0, 1.0))

    def test_ratio_threshold(self):
        q = self.p.swipt.user_power
        self.assertAlmostEqual(ratio_threshold(self.p), 1.0 + (self.transmit - q) / (self.hardware + q))

    def test_monotone_in_beta(self):
        # the slope in β has the sign of c_dl - T c_ul
        T = ratio_threshold(self.p)
        q = self.p.swipt.user_power
        rng = numpy.random.default_rng(11)
        for c_dl, c_ul in rng.uniform(0.1, 5.0, size=(20, 2)):
            sign = fractional_slope_sign(c_dl - c_ul, c_ul, self.transmit - q, self.hardware + q)
            self.assertEqual(sign, numpy.sign(c_dl - T * c_ul))
            zetas = [energy_efficiency(0.5, b, self.p, rates=(c_dl, c_ul)) for b in (0.3, 0.6, 0.9)]
            self.assertEqual(numpy.sign(zetas[2] - zetas[0]), sign)

    def test_fractional_slope_sign(self):
        self.assertEqual(fractional_slope_sign(1.0, 0.0, 0.0, 1.0), 1.0)
        self.assertEqual(fractional_slope_sign(0.0, 1.0, 1.0, 1.0), -1.0)
        self.assertEqual(fractional_slope_sign(2.0, 1.0, 2.0, 1.0), 0.0)


class TestFeasibleSets(unittest.TestCase):

    def setUp(self):
        self.p = swipt.load_params()

    def test_outage_bound(self):
        p = self.p.with_swipt(max_eh_outage=0.5)
        sets = feasible_sets(p, outage_model=lambda rho: rho)
        self.assertFalse(sets.empty)
        self.assertAlmostEqual(sets.rho_outage, 0.5, delta=1e-3)
        self.assertAlmostEqual(sets.rho_upper, min(0.5, sets.rho_sustain), delta=1e-3)
        self.assertEqual(sets.rho_lower, p.swipt.rho_min)

    def test_sustainability_bound(self):
        sets = feasible_sets(self.p, outage_model=no_outage)
        self.assertAlmostEqual(sets.rho_upper, sets.rho_sustain)
        # at ρ_sustain the mean harvested energy exactly covers the uplink at β_max
        self.assertAlmostEqual(sets.beta_min(sets.rho_sustain), sets.beta_max, places=10)

    def test_outage_at_lower_bound(self):
        sets = feasible_sets(self.p, outage_model=lambda rho: 1.0)
        self.assertTrue(sets.empty)
        self.assertIn('outage', sets.reason)

    def test_uplink_not_sustainable(self):
        sets = feasible_sets(self.p.with_swipt(user_power=1.0), outage_model=no_outage)
        self.assertTrue(sets.empty)
        self.assertIn('self-sustainability', sets.reason)


class TestOptimizer(unittest.TestCase):

    def setUp(self):
        self.p = swipt.load_params()
        self.T = ratio_threshold(self.p)

    def test_downlink_dominated(self):
        result = optimize(self.p, rate_model=linear_rates(10.0, 0.0, 0.01), outage_model=no_outage)
        sets = result.feasible_sets
        self.assertEqual(result.branch, EEBranch.OVERLINE_SET)
        self.assertEqual(result.beta_star, sets.beta_max)
        self.assertAlmostEqual(result.rho_star, sets.rho_upper)
        self.assertAlmostEqual(result.zeta_star, result.grid_max, places=12)

    def test_uplink_dominated(self):
        result = optimize(self.p, rate_model=linear_rates(0.01, 0.0, 10.0), outage_model=no_outage)
        sets = result.feasible_sets
        self.assertEqual(result.branch, EEBranch.UNDERLINE_SET)
        self.assertAlmostEqual(result.rho_star, sets.rho_lower)
        self.assertAlmostEqual(result.beta_star, sets.beta_lower)
        self.assertAlmostEqual(result.zeta_star, result.grid_max, places=12)

    def test_partition(self):
        optimizer = Optimizer(self.p, rate_model=linear_rates(0.5 * self.T, self.T, 1.0), outage_model=no_outage)
        sets = optimizer.feasible_sets()
        self.assertGreater(sets.rho_upper, 0.6)
        under, over = optimizer.partition(sets)
        self.assertAlmostEqual(under[0], sets.rho_lower)
        self.assertAlmostEqual(under[1], 0.5, delta=1e-3)
        self.assertAlmostEqual(over[0], under[1])
        self.assertAlmostEqual(over[1], sets.rho_upper)
        result = optimizer.optimize()
        self.assertEqual(result.branch, EEBranch.OVERLINE_SET)
        self.assertAlmostEqual(result.rho_star, sets.rho_upper)

    def test_balanced_rates(self):
        optimizer = Optimizer(self.p, rate_model=linear_rates(self.T, 0.0, 1.0), outage_model=no_outage)
        self.assertEqual(optimizer.partition(optimizer.feasible_sets()), (None, None))
        result = optimizer.optimize()
        self.assertEqual(result.branch, EEBranch.NEITHER_SET_NONEMPTY)

    def test_random_models_against_brute_force(self):
        rng = numpy.random.default_rng(2024)
        for trial in range(6):
            max_outage = rng.uniform(0.3, 0.95)
            d0, d1, u = rng.uniform(0.0, 3.0), rng.uniform(0.0, 6.0), rng.uniform(0.2, 4.0)
            p = self.p.with_swipt(max_eh_outage=max_outage)
            with self.subTest(trial=trial):
                rate_model = linear_rates(d0, d1, u)
                result = optimize(p, rate_model=rate_model, outage_model=lambda rho: rho ** 2)
                sets = result.feasible_sets
                self.assertTrue(sets.contains(result.rho_star, result.beta_star, tol=1e-6))
                self.assertAlmostEqual(result.zeta_star,
                                       energy_efficiency(result.rho_star, result.beta_star, p,
                                                         rates=rate_model(result.rho_star)), places=12)
                brute = -numpy.inf
                for rho in numpy.linspace(sets.rho_lower, sets.rho_upper, 101):
                    for beta in numpy.linspace(sets.beta_lower, sets.beta_max, 101):
                        if sets.contains(rho, beta):
                            brute = max(brute, energy_efficiency(rho, beta, p, rates=rate_model(rho)))
                self.assertGreaterEqual(result.zeta_star, brute - 1e-6 * max(1.0, abs(brute)))

    def test_infeasible(self):
        with self.assertRaises(SWIPTInfeasibleException):
            optimize(self.p, rate_model=linear_rates(1.0, 0.0, 1.0), outage_model=lambda rho: 1.0)
        result = optimize(self.p, rate_model=linear_rates(1.0, 0.0, 1.0), outage_model=lambda rho: 1.0,
                          raise_on_infeasible=False)
        self.assertEqual(result.branch, EEBranch.INFEASIBLE)
        self.assertTrue(numpy.isnan(result.zeta_star))
        self.assertEqual(result.to_dict()['branch'], 'infeasible')

    def test_surface(self):
        optimizer = Optimizer(self.p, rate_model=linear_rates(1.0, 1.0, 1.0))
        surface = optimizer.surface([0.2, 0.4, 0.6], [0.5, 0.9])
        self.assertEqual(surface.shape, (3, 2))
        self.assertAlmostEqual(surface[1, 0], energy_efficiency(0.4, 0.5, self.p, rates=(1.4, 1.0)))


class TestAnalyticalOptimum(unittest.TestCase):

    def test_bundled_network(self):
        p = swipt.load_params()
        rate_model = LinkRateModel(p)
        result = Optimizer(p, rate_model=rate_model, grid_points=8, scan_points=9).optimize()
        self.assertNotEqual(result.branch, EEBranch.INFEASIBLE)
        self.assertTrue(result.feasible_sets.contains(result.rho_star, result.beta_star, tol=1e-6))
        self.assertGreaterEqual(result.zeta_star, result.grid_max - 1e-6 * max(1.0, result.grid_max))
        self.assertGreater(result.c_dl, 0.0)
        # uplink rate does not depend on ρ
        self.assertAlmostEqual(rate_model(0.2).c_ul, rate_model(0.7).c_ul, places=6)

    def test_link_rate_model_against_brute_force(self):
        p = swipt.load_params()
        for interference in ('normalized', 'direct'):
            with self.subTest(interference=interference):
                rate_model = LinkRateModel(p, interference=interference)
                result = Optimizer(p, rate_model=rate_model, grid_points=8, scan_points=9).optimize()
                sets = result.feasible_sets
                brute = -numpy.inf
                for rho in numpy.linspace(sets.rho_lower, sets.rho_upper, 15):
                    for beta in numpy.linspace(sets.beta_lower, sets.beta_max, 15):
                        if sets.contains(rho, beta):
                            brute = max(brute, energy_efficiency(rho, beta, p, rates=rate_model(rho)))
                self.assertGreaterEqual(result.zeta_star, brute * (1.0 - 1e-4))

    def test_split_dependence_of_downlink(self):
        p = swipt.load_params(swipt.datasets.table1_alpha25_fname)
        normalized = LinkRateModel(p)
        direct = LinkRateModel(p, interference='direct')
        numpy.testing.assert_allclose(normalized(0.2).c_dl, normalized(0.8).c_dl, rtol=1e-3)
        self.assertGreater(direct(0.8).c_dl, direct(0.2).c_dl * (1.0 + 1e-2))
        self.assertAlmostEqual(direct(0.5).c_ul, normalized(0.5).c_ul, places=12)
