import unittest

import numpy

import swipt
from swipt.core.exceptions import SWIPTValueException
from swipt.core.harvest import mean_harvested_energy
from swipt.core.link_rates import (_split_integral, downlink_rate, link_rates, rate_limits_infinite_antennas,
                                   uplink_rate)
from swipt.core.network import HarvestParams, apply_override
from swipt.utils.quadrature import DEFAULT_QUAD


class TestDownlinkRate(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.config = swipt.load_config()
        cls.p = HarvestParams.from_config(cls.config)
        cls.rate = downlink_rate(cls.p)
        cls.noiseless = HarvestParams.from_config(apply_override(cls.config, 'network.noise_power', 0.0))

    def test_positive(self):
        self.assertGreater(self.rate, 0.0)
        self.assertTrue(numpy.isfinite(self.rate))

    def test_erfcx_path_matches_general(self):
        general = downlink_rate(self.p, method='general')
        numpy.testing.assert_allclose(self.rate, general, rtol=1e-3)

    def test_noise_lowers_rate(self):
        self.assertGreater(downlink_rate(self.noiseless), self.rate)

    def test_independent_of_split_without_noise(self):
        low = self.noiseless.with_swipt(power_split=0.2)
        high = self.noiseless.with_swipt(power_split=0.8)
        numpy.testing.assert_allclose(downlink_rate(low, interference='normalized'),
                                      downlink_rate(high, interference='normalized'), rtol=1e-7)

    def test_decoding_share(self):
        # with noise, less power to the decoder lowers the rate
        self.assertLess(downlink_rate(self.p.with_swipt(power_split=0.1)),
                        downlink_rate(self.p.with_swipt(power_split=0.9)))

    def test_antennas(self):
        more = HarvestParams.from_config(apply_override(self.config, 'tiers.2.antennas', 16))
        self.assertGreater(downlink_rate(more), self.rate)
        self.assertGreater(downlink_rate(self.p, infinite_antennas=True), self.rate)

    def test_methods(self):
        self.assertRaises(SWIPTValueException, downlink_rate, self.p, method='noiseless')
        self.assertRaises(SWIPTValueException, downlink_rate, self.noiseless, method='alpha4')
        self.assertRaises(SWIPTValueException, downlink_rate, self.p, method='closed')
        p = swipt.load_params(swipt.datasets.table1_alpha25_fname)
        self.assertRaises(SWIPTValueException, downlink_rate, p, method='alpha4')


class TestUplinkRate(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.config = swipt.load_config()
        cls.p = HarvestParams.from_config(cls.config)
        cls.rate = uplink_rate(cls.p)

    def test_invariant_to_user_power(self):
        for power in (1e-5, 1e-1):
            with self.subTest(user_power=power):
                numpy.testing.assert_allclose(uplink_rate(self.p.with_swipt(user_power=power)), self.rate, rtol=1e-6)

    def test_invariant_to_split(self):
        numpy.testing.assert_allclose(uplink_rate(self.p.with_swipt(power_split=0.1)), self.rate, rtol=1e-6)

    def test_receive_gains_are_ordered(self):
        normalized = uplink_rate(self.p, receive_gain='normalized')
        infinite = uplink_rate(self.p, receive_gain='infinite')
        self.assertGreater(self.rate, normalized)
        self.assertGreater(infinite, normalized)

    def test_unknown_gain(self):
        self.assertRaises(SWIPTValueException, uplink_rate, self.p, receive_gain='ideal')


class TestRatePairs(unittest.TestCase):

    def setUp(self):
        self.p = swipt.load_params(swipt.datasets.table1_alpha25_fname)

    def test_link_rates(self):
        pair = link_rates(self.p)
        self.assertTrue(pair.lower_bound)
        self.assertGreater(pair.c_dl, 0.0)
        self.assertGreater(pair.c_ul, 0.0)
        self.assertAlmostEqual(pair.in_bits().c_dl * numpy.log(2.0), pair.c_dl)

    def test_infinite_antenna_limits(self):
        pair = link_rates(self.p)
        limits = rate_limits_infinite_antennas(self.p)
        self.assertFalse(limits.lower_bound)
        self.assertGreater(limits.c_dl, pair.c_dl)
        self.assertGreater(limits.c_ul, uplink_rate(self.p, receive_gain='normalized'))

    def test_limits_require_mrpa(self):
        config = apply_override(swipt.load_config(), 'tiers.2.association_weight', 1.0)
        self.assertRaises(SWIPTValueException, rate_limits_infinite_antennas, HarvestParams.from_config(config))


class TestSplitIntegral(unittest.TestCase):

    def test_power_law(self):
        # ∫_0^∞ s^(-1/2)/(1 + s) ds = π, with h(s) s decaying like e^(-t/2) in t = ln s
        h = lambda s: s ** -0.5 / (1.0 + s)
        for s_ref in (1e-3, 1.0, 1e4):
            with self.subTest(s_ref=s_ref):
                numpy.testing.assert_allclose(_split_integral(h, s_ref, 0.5, DEFAULT_QUAD), numpy.pi, rtol=1e-7)

    def test_no_overflow_in_tail(self):
        h = lambda s: 1.0 / (1.0 + s) ** 2
        with numpy.errstate(over='raise'):
            numpy.testing.assert_allclose(_split_integral(h, 1.0, 1.0, DEFAULT_QUAD), 1.0, rtol=1e-8)


class TestBundledConfigRates(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.config = swipt.load_config()
        cls.p = HarvestParams.from_config(cls.config)
        cls.noiseless = HarvestParams.from_config(apply_override(cls.config, 'network.noise_power', 0.0))

    def assertRate(self, value):
        self.assertTrue(numpy.isfinite(value))
        self.assertGreater(value, 0.0)
        self.assertLess(value, 30.0)

    def test_downlink_paths(self):
        closed = downlink_rate(self.p, method='alpha4')
        general = downlink_rate(self.p, method='general')
        self.assertRate(closed)
        self.assertRate(general)
        numpy.testing.assert_allclose(closed, general, rtol=1e-3)
        self.assertRate(downlink_rate(self.noiseless, method='noiseless'))

    def test_uplink_gains(self):
        for gain in ('unnormalized', 'normalized', 'infinite'):
            with self.subTest(receive_gain=gain):
                self.assertRate(uplink_rate(self.p, receive_gain=gain))

    def test_limits_and_pair(self):
        pair = link_rates(self.p)
        limits = rate_limits_infinite_antennas(self.p)
        for value in (pair.c_dl, pair.c_ul, limits.c_dl, limits.c_ul):
            self.assertRate(value)
        self.assertGreater(limits.c_dl, pair.c_dl)


class TestDownlinkInterference(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        config = apply_override(swipt.load_config(), 'network.noise_power', 0.0)
        cls.p = HarvestParams.from_config(config)

    def test_direct_form_grows_with_split(self):
        rates = [downlink_rate(self.p.with_swipt(power_split=rho), interference='direct') for rho in (0.2, 0.5, 0.8)]
        self.assertTrue(numpy.all(numpy.diff(rates) > 0))

    def test_direct_form_sees_less_interference(self):
        # η(1-ρ) < 1 shrinks the argument of Φ_k, and Φ_k increases with it
        for rho in (0.2, 0.8):
            p = self.p.with_swipt(power_split=rho)
            with self.subTest(rho=rho):
                self.assertGreater(downlink_rate(p, interference='direct'),
                                   downlink_rate(p, interference='normalized'))

    def test_forms_threaded_through_pairs(self):
        p = swipt.load_params(swipt.datasets.table1_alpha25_fname)
        direct = link_rates(p, interference='direct')
        self.assertAlmostEqual(direct.c_dl, downlink_rate(p, interference='direct'), places=12)
        self.assertAlmostEqual(direct.c_ul, link_rates(p).c_ul, places=12)
        limits = rate_limits_infinite_antennas(p, interference='direct')
        self.assertGreater(limits.c_dl, direct.c_dl)

    def test_unknown_form(self):
        self.assertRaises(SWIPTValueException, downlink_rate, self.p, interference='exact')


class TestLoadTrends(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        config = swipt.load_config()
        cls.params = [HarvestParams.from_config(apply_override(config, 'load.1', load)) for load in (0.5, 2.0, 8.0)]

    def test_energy_grows_and_rates_fall(self):
        energy = [mean_harvested_energy(p) for p in self.params]
        pairs = [link_rates(p) for p in self.params]
        self.assertTrue(numpy.all(numpy.diff(energy) > 0))
        self.assertTrue(numpy.all(numpy.diff([r.c_dl for r in pairs]) < 0))
        self.assertTrue(numpy.all(numpy.diff([r.c_ul for r in pairs]) < 0))
