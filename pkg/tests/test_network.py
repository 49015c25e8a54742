import unittest

import numpy

import swipt
from swipt.core.exceptions import SWIPTConfigException, SWIPTValueException
from swipt.core.network import (HarvestParams, apply_override, derive_stats, full_load_stats, sweep_fields,
                                user_intensity_for_load)
from swipt.utils.constants import KM2_TO_M2


class TestDeriveStats(unittest.TestCase):

    def setUp(self):
        self.config = swipt.load_config()
        self.net = self.config.network
        self.stats = derive_stats(self.net)

    def test_lambda_sigma(self):
        # MRPA at α = 4 weighs each tier with sqrt(P_m)
        expected = (numpy.sqrt(40.0) * 1.0 + numpy.sqrt(10.0) * 50.0) * KM2_TO_M2
        self.assertAlmostEqual(self.stats.lambda_sigma / expected, 1.0, places=12)

    def test_association_probabilities(self):
        self.assertAlmostEqual(self.stats.association_probs.sum(), 1.0, places=12)
        self.assertTrue(numpy.all(self.stats.association_probs > 0))

    def test_users_are_conserved(self):
        # every user is associated with exactly one base station
        mu = numpy.sum(self.stats.cell_loads * self.net.intensities)
        self.assertAlmostEqual(mu / self.net.user_intensity, 1.0, places=12)

    def test_loads(self):
        scaled = self.net.weights ** self.net.delta
        numpy.testing.assert_allclose(self.stats.cell_loads, scaled * self.net.user_intensity / self.stats.lambda_sigma)
        numpy.testing.assert_allclose(self.stats.nonvoid_probs, 1.0 - (1.0 + 2.0 * self.stats.cell_loads / 7.0) ** -3.5)

    def test_scheduled_users(self):
        scheduled = self.stats.scheduled_user_intensity
        self.assertLessEqual(scheduled, self.net.user_intensity)
        self.assertLessEqual(scheduled, self.net.intensities.sum())
        self.assertAlmostEqual(scheduled, float(numpy.sum(self.stats.nonvoid_probs * self.net.intensities)))

    def test_full_load(self):
        stats = full_load_stats(self.stats)
        numpy.testing.assert_array_equal(stats.nonvoid_probs, [1.0, 1.0])
        numpy.testing.assert_array_equal(stats.association_probs, self.stats.association_probs)

    def test_dataframe(self):
        df = self.stats.to_dataframe()
        self.assertListEqual(list(df['tier']), [1, 2])
        self.assertIn('nonvoid_prob', df.columns)

    def test_wrong_type(self):
        self.assertRaises(SWIPTValueException, derive_stats, self.config)


class TestOverrides(unittest.TestCase):

    def setUp(self):
        self.config = swipt.load_config()

    def test_load(self):
        for tier, load in ((1, 2.0), (2, 0.25)):
            with self.subTest(tier=tier):
                config = apply_override(self.config, f'load.{tier}', load)
                self.assertAlmostEqual(derive_stats(config.network).cell_loads[tier - 1], load, places=10)

    def test_user_intensity_for_load(self):
        mu = user_intensity_for_load(self.config.network, 0, 3.0)
        self.assertGreater(mu, 0.0)
        self.assertRaises(SWIPTValueException, user_intensity_for_load, self.config.network, 0, 0.0)

    def test_fields(self):
        config = apply_override(self.config, 'rho', 0.3)
        self.assertEqual(config.swipt.power_split, 0.3)
        config = apply_override(self.config, 'beta', 0.6)
        self.assertEqual(config.swipt.downlink_fraction, 0.6)
        config = apply_override(self.config, 'tiers.2.intensity', 10.0)
        self.assertAlmostEqual(config.network.tiers[1].intensity, 10.0 * KM2_TO_M2)
        config = apply_override(self.config, 'tiers.1.antennas', 4.0)
        self.assertEqual(config.network.tiers[0].antennas, 4)
        self.assertIsInstance(config.network.tiers[0].antennas, int)
        config = apply_override(self.config, 'network.user_intensity', 100.0)
        self.assertAlmostEqual(config.network.user_intensity, 100.0 * KM2_TO_M2)
        config = apply_override(self.config, 'network.pathloss_exponent', 3.0)
        self.assertEqual(config.network.pathloss_exponent, 3.0)
        # the base config is unchanged
        self.assertEqual(self.config.swipt.power_split, 0.5)

    def test_invalid(self):
        for name, value in (('rho', 1.5), ('tiers.3.intensity', 1.0), ('tiers.x.intensity', 1.0),
                            ('load.1', -1.0), ('network.pathloss_exponent', 2.0), ('swipt.colour', 1.0),
                            ('tiers.1.intensity', -5.0)):
            with self.subTest(name=name):
                self.assertRaises(SWIPTConfigException, apply_override, self.config, name, value)

    def test_sweep_fields(self):
        names = sweep_fields(self.config)
        for name in ('load.1', 'load.2', 'rho', 'beta', 'tiers.2.transmit_power', 'swipt.user_power',
                     'network.noise_power'):
            self.assertIn(name, names)
        self.assertNotIn('load.3', names)


class TestHarvestParams(unittest.TestCase):

    def setUp(self):
        self.p = swipt.load_params()

    def test_kappa(self):
        self.assertAlmostEqual(self.p.kappa, 0.85 * 0.5)
        self.assertAlmostEqual(self.p.with_swipt(power_split=0.2).kappa, 0.85 * 0.8)

    def test_full_load(self):
        p = swipt.load_params(full_load=True)
        self.assertTrue(p.full_load)
        numpy.testing.assert_array_equal(p.q, [1.0, 1.0])
        self.assertFalse(self.p.full_load)
        self.assertTrue(numpy.all(self.p.q < 1.0))

    def test_config(self):
        config = HarvestParams.from_config(swipt.load_config()).config
        self.assertEqual(config.network, self.p.network)
        self.assertEqual(config.swipt, self.p.swipt)
