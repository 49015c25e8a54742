"""
Lower bounds on the ergodic downlink and uplink rates of the typical user.

Both rates use E[ln(1 + S/(I + N))] = ∫_0^∞ (1 - E[e^(-zS)]) E[e^(-z(I + N))] dz/z. After scaling z with the serving
distance the signal term becomes the bracket 1 - (1 + s P_m/(w_m N_m))^(-N_m), which is computed as
-expm1(-N log1p(·)) to keep its relative accuracy for small s.
"""
import logging

import numpy

from swipt.core.exceptions import SWIPTValueException
from swipt.core.harvest import phi, phi_sum
from swipt.models import RatePair
from swipt.utils.quadrature import DEFAULT_QUAD, quad_interval, quad_semi_infinite
from swipt.utils.specfun import erfcx

log = logging.getLogger(__name__)

DOWNLINK_METHODS = ('auto', 'general', 'noiseless', 'alpha4')
INTERFERENCE_FORMS = ('normalized', 'direct')
RECEIVE_GAINS = ('unnormalized', 'normalized', 'infinite')

# the right piece of a split integral stops where its integrand, which decays like e^(-δt), is below e^(-LOG_TAIL)
LOG_TAIL = 50.0


def _gamma_bracket(x, n):
    """ 1 - (1 + x/n)^(-n) """
    return -numpy.expm1(-n * numpy.log1p(x / n))


def _split_integral(h, s_ref, decay, spec):
    """
    ∫_0^∞ h(s) ds split at s_ref. The right piece is taken in t = ln(s/s_ref) over [0, LOG_TAIL/decay], where
    decay is the exponential rate at which h(s_ref e^t) s_ref e^t vanishes.
    """
    left = quad_interval(h, 0.0, s_ref, spec=spec).value

    def g(t):
        s = s_ref * numpy.exp(t)
        return h(s) * s

    right = quad_interval(g, 0.0, LOG_TAIL / decay, spec=spec).value
    return left + right


def _downlink_method(p, method):
    if method not in DOWNLINK_METHODS:
        raise SWIPTValueException(f"unknown downlink method {method!r}")
    noise = p.network.noise_power
    if method == 'auto':
        if noise == 0:
            return 'noiseless'
        return 'alpha4' if p.alpha == 4 else 'general'
    if method == 'noiseless' and noise != 0:
        raise SWIPTValueException("the noiseless downlink path requires zero noise power")
    if method == 'alpha4' and (p.alpha != 4 or noise == 0):
        raise SWIPTValueException("the erfcx downlink path requires α = 4 and positive noise power")
    return method


def downlink_rate(p, method='auto', infinite_antennas=False, interference='normalized', spec=DEFAULT_QUAD):
    """
    Lower bound on the downlink rate in nats/Hz,

        Σ_m ϑ_m ∫_0^∞ ∫_0^∞ [1 - (1 + sP_m/(w_m N_m))^(-N_m)] πλ_Σ s^(-1)
                             exp(-πλ_Σ x [1 + Σ_k Φ_k(1, s/(η(1-ρ)))] - s (σ²/ρ) x^(α/2)) dx ds.

    The argument s/(η(1-ρ)) removes the harvesting scale from Φ_k, since the SINR does not involve it. The inner
    x-integral equals 1/A without noise and has an erfcx form for α = 4.

    Args:
        p (HarvestParams): parameters
        method (str): 'auto', 'general', 'noiseless' or 'alpha4'
        infinite_antennas (bool): use the limit bracket 1 - exp(-s P_m/w_m) of infinitely many antennas
        interference (str): 'normalized' for Φ_k(1, s/(η(1-ρ))), or 'direct' for Φ_k(1, s), which keeps the
            harvesting scale in the interference term and makes the rate grow with ρ

    Returns:
        float: rate in nats/Hz
    """
    method = _downlink_method(p, method)
    if interference not in INTERFERENCE_FORMS:
        raise SWIPTValueException(f"unknown downlink interference form {interference!r}")
    a = numpy.pi * p.lambda_sigma
    half = p.alpha / 2.0
    noise = p.network.noise_power / p.swipt.power_split
    gains = p.powers / p.weights
    interference_scale = 1.0 / p.kappa if interference == 'normalized' else 1.0

    def inner(s):
        factor = 1.0 + phi_sum(1.0, s * interference_scale, p)
        if method == 'noiseless':
            return 1.0 / factor
        c = s * noise
        if method == 'alpha4':
            root = 2.0 * numpy.sqrt(c)
            return a * numpy.sqrt(numpy.pi) / root * erfcx(a * factor / root)
        scale = a * factor
        return quad_semi_infinite(lambda y: numpy.exp(-y - c * (y / scale) ** half), spec=spec).value / factor

    def h(s):
        if infinite_antennas:
            bracket = -numpy.expm1(-s * gains)
        else:
            bracket = _gamma_bracket(s * gains, p.antennas)
        return numpy.dot(p.theta, bracket) / s * inner(s)

    value = _split_integral(h, float(numpy.min(1.0 / gains)), p.delta, spec)
    log.debug(f"downlink rate {value:.6f} nats/Hz with the {method} path and {interference} interference")
    return float(value)


def uplink_rate(p, receive_gain='unnormalized', spec=DEFAULT_QUAD):
    """
    Lower bound on the uplink rate in nats/Hz,

        Σ_m ϑ_m ∫_0^∞ s^(-1) [1 - L_G(s Q/w_m)] [1 + Σ_k w_k^(-2/α) Φ_k(1, sQw_k/(η(1-ρ)P_k))]^(-1) ds,

    where the scheduled users form a PPP of intensity Σ q_k λ_k. The rate depends on sQ only, so it does not change
    with the common user power Q.

    Args:
        p (HarvestParams): parameters
        receive_gain (str): law of the receive beamforming gain G: 'unnormalized' for Gamma(N_m, 1) with
            L_G(x) = (1 + x)^(-N_m), 'normalized' for Gamma(N_m, 1/N_m), 'infinite' for the N_m → ∞ limit of the
            normalized gain, L_G(x) = exp(-x)

    Returns:
        float: rate in nats/Hz
    """
    if receive_gain not in RECEIVE_GAINS:
        raise SWIPTValueException(f"unknown receive gain law {receive_gain!r}")
    user_power = p.swipt.user_power
    weights = p.weights
    antennas = p.antennas.astype(float)
    scaled = weights ** (-p.delta)

    def factor(s):
        total = 1.0
        for k in range(p.network.n_tiers):
            z = s * user_power * weights[k] / (p.kappa * p.powers[k])
            total += scaled[k] * phi(k, 1.0, z, p)
        return total

    def h(s):
        x = s * user_power / weights
        if receive_gain == 'unnormalized':
            bracket = -numpy.expm1(-antennas * numpy.log1p(x))
        elif receive_gain == 'normalized':
            bracket = _gamma_bracket(x, antennas)
        else:
            bracket = -numpy.expm1(-x)
        return numpy.dot(p.theta, bracket) / s / factor(s)

    value = _split_integral(h, float(numpy.min(weights / user_power)), p.delta, spec)
    log.debug(f"uplink rate {value:.6f} nats/Hz with {receive_gain} receive gain")
    return float(value)


def rate_limits_infinite_antennas(p, interference='normalized', spec=DEFAULT_QUAD):
    """
    Upper limits of both rates as the number of antennas grows, under MRPA. The uplink limit is taken for the
    per-antenna normalized receive gain, because the limit of the unnormalized gain is unbounded.

    Returns:
        RatePair: limits in nats/Hz
    """
    if not p.is_mrpa:
        raise SWIPTValueException("the infinite-antenna limits require MRPA association weights w_m = P_m")
    return RatePair(downlink_rate(p, infinite_antennas=True, interference=interference, spec=spec),
                    uplink_rate(p, receive_gain='infinite', spec=spec),
                    lower_bound=False)


def link_rates(p, method='auto', receive_gain='unnormalized', interference='normalized', spec=DEFAULT_QUAD):
    """
    Downlink and uplink rate bounds of the typical user.

    Returns:
        RatePair: rates in nats/Hz
    """
    return RatePair(downlink_rate(p, method=method, interference=interference, spec=spec),
                    uplink_rate(p, receive_gain=receive_gain, spec=spec))
