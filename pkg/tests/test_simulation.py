import unittest

import numpy

import swipt
from swipt.core.cell_load import association_distance_cdf
from swipt.core.exceptions import SWIPTSimulationException, SWIPTValueException
from swipt.core.harvest import harvested_power_cdf
from swipt.core.link_rates import link_rates
from swipt.core.network import HarvestParams, derive_stats
from swipt.core.shot_noise import MarkModel, shotnoise_laplace, shotnoise_mean
from swipt.core.simulation import (MonteCarloExperiment, associate, capped_rate, check_window,
                                   default_window_radius, far_field_interference, measure_uplink, run_experiment,
                                   run_trial, sample_cell_statistics, sample_realization, sample_shot_noise,
                                   schedule_uplink, trial_generator, void_fractions)
from swipt.utils.constants import CI_Z, MAX_WINDOW_GROWTH, WINDOW_SCALE
from swipt.utils.stats import ks_statistic, mean_confidence


class TestRandomStreams(unittest.TestCase):

    def test_trial_generator(self):
        a = trial_generator(7, 3).random(5)
        numpy.testing.assert_array_equal(a, trial_generator(7, 3).random(5))
        self.assertFalse(numpy.array_equal(a, trial_generator(7, 4).random(5)))
        self.assertFalse(numpy.array_equal(a, trial_generator(7, 3, key=(1,)).random(5)))

    def test_run_trial_is_deterministic(self):
        config = swipt.load_config()
        self.assertEqual(run_trial(config, 3, seed=5), run_trial(config, 3, seed=5))
        self.assertNotEqual(run_trial(config, 3, seed=5), run_trial(config, 4, seed=5))

    def test_independent_of_processes(self):
        config = swipt.load_config()
        single = MonteCarloExperiment(config, 12, seed=1, threads=1).run()
        pooled = MonteCarloExperiment(config, 12, seed=1, threads=3).run()
        self.assertListEqual(single, pooled)


class TestWindow(unittest.TestCase):

    def setUp(self):
        self.net = swipt.load_config().network

    def test_default_radius(self):
        r_typ = 1.0 / numpy.sqrt(numpy.pi * numpy.sum(self.net.intensities))
        # α = 4 needs r_typ/√0.005, which is below the base radius
        self.assertAlmostEqual(default_window_radius(self.net), WINDOW_SCALE * r_typ)
        net = swipt.load_config(swipt.datasets.table1_alpha25_fname).network
        self.assertAlmostEqual(default_window_radius(net), MAX_WINDOW_GROWTH * WINDOW_SCALE * r_typ)

    def test_small_window_rejected(self):
        self.assertRaises(SWIPTSimulationException, check_window, self.net, 10.0)
        self.assertRaises(SWIPTValueException, check_window, self.net, 0.0)
        with self.assertRaises(SWIPTSimulationException):
            MonteCarloExperiment(swipt.load_config(), 10, window_radius=10.0)

    def test_far_field(self):
        value = far_field_interference(numpy.array([1e-6, 2e-6]), numpy.array([10.0, 5.0]), 4.0, 100.0)
        self.assertAlmostEqual(value, 2e-5 * numpy.pi / 100.0 ** 2)


class TestRealization(unittest.TestCase):

    def setUp(self):
        self.net = swipt.load_config().network
        self.radius = default_window_radius(self.net)

    def test_poisson_counts(self):
        counts = numpy.array([numpy.bincount(sample_realization(self.net, self.radius, seed=trial_generator(0, i))
                                             .bs_tiers, minlength=2) for i in range(200)])
        expected = self.net.intensities * numpy.pi * self.radius ** 2
        for m in range(2):
            mean = numpy.mean(counts[:, m])
            self.assertLess(abs(mean - expected[m]), 4.0 * numpy.sqrt(expected[m] / 200.0))
            # Poisson counts have equal mean and variance
            self.assertAlmostEqual(numpy.var(counts[:, m], ddof=1) / expected[m], 1.0, delta=0.35)

    def test_association(self):
        r = sample_realization(self.net, self.radius, seed=3)
        self.assertTrue(numpy.array_equal(r.user_positions[0], [0.0, 0.0]))
        serving, scaled = associate(r.bs_positions, r.bs_tiers, r.user_positions, self.net)
        numpy.testing.assert_array_equal(serving, r.serving)
        # brute force over all base stations
        d2 = numpy.sum((r.user_positions[:50, None, :] - r.bs_positions[None, :, :]) ** 2, axis=2)
        weighted = d2 * (self.net.weights ** (-self.net.delta))[r.bs_tiers]
        numpy.testing.assert_array_equal(numpy.argmin(weighted, axis=1), serving[:50])
        numpy.testing.assert_allclose(numpy.min(weighted, axis=1), scaled[:50])

    def test_void_flags(self):
        r = sample_realization(self.net, self.radius, seed=4)
        numpy.testing.assert_array_equal(r.void_flags, r.users_per_bs == 0)
        self.assertFalse(r.void_flags[r.typical_bs])
        self.assertEqual(r.users_per_bs.sum(), len(r.user_positions))

    def test_uplink_schedule(self):
        r = sample_realization(self.net, self.radius, seed=5)
        scheduled = schedule_uplink(r, trial_generator(5, 0, key=(9,)))
        self.assertEqual(scheduled[0], 0)
        cells = r.serving[scheduled]
        self.assertEqual(len(numpy.unique(cells)), len(cells))
        self.assertEqual(len(cells), int(numpy.sum(~r.void_flags)))
        self.assertRaises(SWIPTValueException, measure_uplink, r, self.net, swipt.load_config().swipt,
                          trial_generator(0, 0), receive_gain='ideal')


class TestCellStatistics(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.net = swipt.load_config().network
        cls.stats = derive_stats(cls.net)
        cls.counts = sample_cell_statistics(cls.net, 60, seed=8)

    def test_users_per_bs(self):
        # the mean number of users of a tier-m base station is its cell load
        for m, c in enumerate(self.counts):
            with self.subTest(tier=m + 1):
                mean, ci = mean_confidence(c)
                self.assertLess(abs(mean - self.stats.cell_loads[m]), 1.5 * ci + 0.05 * self.stats.cell_loads[m])

    def test_void_fraction(self):
        df = void_fractions(self.counts)
        self.assertListEqual(list(df.columns), ['tier', 'void_fraction', 'standard_error', 'base_stations'])
        for m, row in df.iterrows():
            with self.subTest(tier=m + 1):
                expected = 1.0 - self.stats.nonvoid_probs[m]
                self.assertLess(abs(row['void_fraction'] - expected), 4.0 * row['standard_error'] + 0.05)


class TestTrials(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.config = swipt.load_config()
        cls.experiment = MonteCarloExperiment(cls.config, 300, seed=2)
        cls.experiment.run()

    def test_harvesting_identities(self):
        s = self.config.swipt
        kappa = s.conversion_efficiency * (1.0 - s.power_split)
        p_dl = self.experiment.column('p_dl')
        numpy.testing.assert_allclose(self.experiment.column('p_eh'), kappa * p_dl, rtol=1e-12)
        numpy.testing.assert_allclose(self.experiment.column('e_eh'),
                                      s.downlink_fraction * s.slot_duration * kappa * p_dl, rtol=1e-12)

    def test_association_distance(self):
        lambda_sigma = derive_stats(self.config.network).lambda_sigma
        _, pvalue = ks_statistic(self.experiment.column('association_distance'),
                                 lambda x: association_distance_cdf(numpy.maximum(x, 0.0), lambda_sigma))
        self.assertGreater(pvalue, 1e-3)

    def test_serving_tier(self):
        tiers = self.experiment.column('serving_tier')
        observed = numpy.mean(tiers == 1)
        expected = derive_stats(self.config.network).association_probs[1]
        self.assertLess(abs(observed - expected), 4.0 * numpy.sqrt(expected * (1.0 - expected) / 300))

    def test_summaries(self):
        thetas = numpy.logspace(-9, -3, 7)
        cdf, ci = self.experiment.harvested_power_cdf(thetas)
        self.assertTrue(numpy.all(numpy.diff(cdf) >= 0))
        self.assertTrue(numpy.all(ci >= 0))
        outage, _ = self.experiment.outage_energy_harvesting()
        self.assertTrue(0.0 <= outage <= 1.0)
        rates = self.experiment.ergodic_rates()
        for key in ('c_dl', 'c_dl_ci', 'c_dl_capped', 'c_ul', 'c_ul_ci', 'c_ul_capped'):
            self.assertIn(key, rates)
        self.assertGreater(rates['c_dl'], 0.0)
        df = self.experiment.to_dataframe()
        self.assertEqual(len(df), 300)
        self.assertIn('sir_ul', df.columns)

    def test_harvest_cdf_bound_below_empirical(self):
        p = HarvestParams.from_config(self.config)
        thetas = numpy.logspace(-8, -3, 11)
        bound = harvested_power_cdf(thetas, p)
        cdf, ci = self.experiment.harvested_power_cdf(thetas)
        self.assertTrue(numpy.all(bound <= cdf + 3.0 * ci / CI_Z + 1.0 / 300))

    def test_rate_bounds_below_empirical(self):
        pair = link_rates(HarvestParams.from_config(self.config))
        rates = self.experiment.ergodic_rates()
        for link in ('dl', 'ul'):
            with self.subTest(link=link):
                slack = 3.0 * rates[f'c_{link}_ci'] / CI_Z
                self.assertLessEqual(getattr(pair, f'c_{link}'), rates[f'c_{link}'] + slack)

    def test_invalid(self):
        self.assertRaises(SWIPTValueException, MonteCarloExperiment, self.config, 0)
        self.assertRaises(SWIPTValueException, MonteCarloExperiment, self.config, 10, threads=0)


class TestCappedRate(unittest.TestCase):

    def test_cap(self):
        rates, capped = capped_rate(numpy.array([0.0, numpy.e - 1.0, numpy.inf, 1e20]), ceiling=30.0)
        numpy.testing.assert_allclose(rates, [0.0, 1.0, 30.0, 30.0])
        self.assertEqual(capped, 0.5)


class TestEmpiricalCurves(unittest.TestCase):

    def setUp(self):
        self.config = swipt.load_config()

    def test_cdf_curve(self):
        table = run_experiment(self.config, 'harvested_power_cdf', 30, seed=1, abscissae=[1e-8, 1e-6, 1e-4])
        df = table.to_dataframe()
        self.assertListEqual(list(df.columns), ['theta', 'empirical', 'empirical_ci'])

    def test_sweep(self):
        table = run_experiment(self.config, 'outage_energy_harvesting', 20, seed=1, abscissa_name='rho',
                               abscissae=[0.2, 0.8])
        values = table['empirical'].values
        self.assertEqual(values.shape, (2,))
        self.assertTrue(numpy.all((values >= 0) & (values <= 1)))

    def test_invalid(self):
        self.assertRaises(SWIPTValueException, run_experiment, self.config, 'snr', 10, abscissae=[1.0])
        self.assertRaises(SWIPTValueException, run_experiment, self.config, 'harvested_power_cdf', 10,
                          abscissa_name='rho', abscissae=[0.5])
        self.assertRaises(SWIPTValueException, run_experiment, self.config, 'downlink_rate', 10, abscissae=[])


class TestShotNoiseSampling(unittest.TestCase):

    def test_mean(self):
        marks = MarkModel.exponential()
        for n in (1, 2):
            with self.subTest(n=n):
                samples = sample_shot_noise(n, 0.01, 4.0, marks, 5000, seed=trial_generator(0, n))
                mean, ci = mean_confidence(samples)
                self.assertLess(abs(mean - shotnoise_mean(n, 0.01, 4.0, marks)), 4.0 * ci / 1.96)

    def test_laplace(self):
        marks = MarkModel.exponential()
        for n in (1, 2):
            with self.subTest(n=n):
                samples = sample_shot_noise(n, 0.01, 4.0, marks, 5000, seed=trial_generator(1, n))
                s = 1.0 / shotnoise_mean(n, 0.01, 4.0, marks)
                value, ci = mean_confidence(numpy.exp(-s * samples))
                self.assertLess(abs(value - shotnoise_laplace(n, s, 0.01, 4.0, marks)), 4.0 * ci / CI_Z)

    def test_invalid(self):
        marks = MarkModel.exponential()
        self.assertRaises(SWIPTValueException, sample_shot_noise, 3, 0.01, 4.0, marks, 10, points=3)
        no_sampler = MarkModel(marks.laplace, marks.laplace_hat, 1.0, 1.0, marks.fractional_moment)
        self.assertRaises(SWIPTValueException, sample_shot_noise, 1, 0.01, 4.0, no_sampler, 10)
