"""
Harvested-power statistics of the typical user: Laplace transform and CDF bounds with their load and antenna limits,
outage probabilities and the mean harvested energy.

Distances are association-scaled: a tier-m base station at squared distance |X|² is at x = w_m^(-2/α)|X|², so the
serving distance x of the typical user is exponential with rate πλ_Σ.
"""
import logging

import numpy

from swipt.core.exceptions import SWIPTValueException
from swipt.utils.laplace import euler_inverter
from swipt.utils.quadrature import CURVE_QUAD, quad_vec_semi_infinite
from swipt.utils.specfun import interference_tail, upper_incomplete_gamma

log = logging.getLogger(__name__)

KERNEL_TOLERANCE = 1e-6


def _as_grid(theta, name='theta'):
    theta = numpy.asarray(theta, dtype=float)
    scalar = theta.ndim == 0
    theta = numpy.atleast_1d(theta)
    if numpy.any(~(theta > 0)):
        raise SWIPTValueException(f"{name} must be positive")
    return theta, scalar


def _result(values, scalar):
    values = numpy.clip(values, 0.0, 1.0)
    if scalar:
        return float(values[0])
    return values


def phi(m, y, z, p):
    """
    Interference exponent of tier m,

        Φ_m(y, z) = ϑ_m q_m (η(1-ρ) z P_m/w_m)^(2/α) ∫_{y (w_m/(η(1-ρ) z P_m))^(2/α)}^∞ dt/(1 + t^(α/2)).

    Args:
        m (int): tier index (0-based)
        y (float or numpy.ndarray): association-scaled distance, y ≥ 0
        z (float or numpy.ndarray): transform variable, z > 0
        p (HarvestParams): parameters

    Returns:
        float or numpy.ndarray: Φ_m(y, z)
    """
    y = numpy.asarray(y, dtype=float)
    z = numpy.asarray(z, dtype=float)
    if numpy.any(y < 0):
        raise SWIPTValueException("phi requires y >= 0")
    if numpy.any(~(z > 0)):
        raise SWIPTValueException("phi requires z > 0")
    scale = (p.kappa * z * p.powers[m] / p.weights[m]) ** p.delta
    out = p.theta[m] * p.q[m] * scale * interference_tail(y / scale, p.alpha)
    if numpy.ndim(out) == 0:
        return float(out)
    return out


def phi_sum(y, z, p):
    """ Σ_k Φ_k(y, z) over all tiers. """
    return sum(phi(k, y, z, p) for k in range(p.network.n_tiers))


def _beamforming(p, ratio):
    # Σ_m ϑ_m (1 + c_m ratio)^(-N_m), c_m = η(1-ρ)P_m/(w_m N_m)
    c = p.kappa * p.powers / (p.weights * p.antennas)
    out = 0.0
    with numpy.errstate(over='ignore', divide='ignore'):
        for m in range(p.network.n_tiers):
            out = out + p.theta[m] * (1.0 + c[m] * ratio) ** (-float(p.antennas[m]))
    return out


def harvested_power_laplace(s, p, spec=CURVE_QUAD):
    """
    Lower bound on the Laplace transform E[exp(-s P_eh)] of the harvested power,

        Σ_m ϑ_m ∫_0^∞ πλ_Σ (1 + η(1-ρ)sP_m/(w_m N_m x^(α/2)))^(-N_m) exp(-πλ_Σ(Σ_k Φ_k(x, s) + x)) dx,

    evaluated in y = πλ_Σ x.

    Args:
        s (float or numpy.ndarray): transform variable(s), s > 0
        p (HarvestParams): parameters

    Returns:
        float or numpy.ndarray: transform values in (0, 1]
    """
    s, scalar = _as_grid(s, 's')
    a = numpy.pi * p.lambda_sigma
    half = p.alpha / 2.0

    def integrand(y):
        x = y / a
        with numpy.errstate(divide='ignore'):
            ratio = s / x ** half
        return _beamforming(p, ratio) * numpy.exp(-y - a * phi_sum(x, s, p))

    return _result(quad_vec_semi_infinite(integrand, spec=spec).value, scalar)


def _alpha4_exponent(v, theta, p):
    # (πλ_Σ/(2√θ)) Σ_k φ_k(v) + v with φ_k(v) = Φ_k(2√θ v/(πλ_Σ), 1) in arccot form
    a = numpy.pi * p.lambda_sigma
    x = 2.0 * numpy.sqrt(theta) * v / a
    total = 0.0
    for k in range(p.network.n_tiers):
        scale = numpy.sqrt(p.kappa * p.powers[k] / p.weights[k])
        total = total + p.theta[k] * p.q[k] * scale * numpy.arctan2(1.0, x / scale)
    return a / (2.0 * numpy.sqrt(theta)) * total + v


def _alpha4_cdf(theta, p, infinite_antennas=False, spec=CURVE_QUAD):
    if p.alpha != 4:
        raise SWIPTValueException(f"closed path requires α = 4, got {p.alpha}")
    a = numpy.pi * p.lambda_sigma
    c = p.kappa * p.powers / p.weights

    def integrand(v):
        with numpy.errstate(divide='ignore', over='ignore'):
            ratio = a ** 2 / (4.0 * theta * v ** 2)
            if infinite_antennas:
                bf = sum(p.theta[m] * numpy.exp(-c[m] * ratio) for m in range(p.network.n_tiers))
            else:
                bf = _beamforming(p, ratio)
        return 2.0 / numpy.sqrt(numpy.pi) * bf * numpy.exp(-_alpha4_exponent(v, theta, p) ** 2)

    return quad_vec_semi_infinite(integrand, spec=spec).value


def harvested_power_cdf_alpha4(theta, p, spec=CURVE_QUAD):
    """
    Lower bound on the CDF of the harvested power for α = 4,

        Σ_m (2ϑ_m/√π) ∫_0^∞ (1 + π²λ_Σ²η(1-ρ)P_m/(4w_m N_m θ v²))^(-N_m) exp(-((πλ_Σ/(2√θ)) Σ_k φ_k(v) + v)²) dv,

    with φ_k(v) = ϑ_k q_k (η(1-ρ)P_k/w_k)^(1/2) arccot(2√θ v (w_k/(η(1-ρ)P_k))^(1/2)/(πλ_Σ)).

    Args:
        theta (float or numpy.ndarray): power threshold(s) in watts, θ > 0
        p (HarvestParams): parameters with α = 4

    Returns:
        float or numpy.ndarray: CDF values
    """
    theta, scalar = _as_grid(theta)
    return _result(_alpha4_cdf(theta, p, spec=spec), scalar)


def _require_mrpa(p, what):
    if not p.is_mrpa:
        raise SWIPTValueException(f"{what} requires MRPA association weights w_m = P_m")


def harvested_power_cdf_limit_fullload(theta, p, spec=CURVE_QUAD):
    """
    CDF bound in the limit of infinite cell loads (every base station non-void), under MRPA and α = 4.
    """
    _require_mrpa(p, "the full-load limit")
    return harvested_power_cdf_alpha4(theta, p.with_full_load(), spec=spec)


def harvested_power_cdf_lowest_limit(theta, p, spec=CURVE_QUAD):
    """
    Lowest limit of the CDF: full load and infinitely many antennas, where the beamforming factor becomes
    exp(-π²λ_Σ²η(1-ρ)/(4θv²)). MRPA and α = 4.
    """
    _require_mrpa(p, "the lowest limit")
    theta, scalar = _as_grid(theta)
    return _result(_alpha4_cdf(theta, p.with_full_load(), infinite_antennas=True, spec=spec), scalar)


def harvested_power_cdf_heavy_tail(theta, p):
    """
    Approximation exp(-2πλ_Σ √(η(1-ρ)/θ)) of the lowest limit, valid when λ_Σ/√θ ≪ 1.
    """
    theta, scalar = _as_grid(theta)
    return _result(numpy.exp(-2.0 * numpy.pi * p.lambda_sigma * numpy.sqrt(p.kappa / theta)), scalar)


def stable_kernel(k, delta, terms=41):
    """
    g(k) = inverse Laplace transform of σ^(δ-1) exp(-k σ^δ) at t = 1, for an array of k ≥ 0.

    For δ = 1/2 this is exp(-k²/4)/√π.
    """
    k = numpy.asarray(k, dtype=float)
    inverter = euler_inverter(terms)

    def F(sigma):
        with numpy.errstate(under='ignore'):
            return sigma ** (delta - 1.0) * numpy.exp(-k[..., None] * sigma ** delta)

    return inverter(F, 1.0, tolerance=KERNEL_TOLERANCE)


def harvested_power_cdf_general(theta, p, terms=41, spec=CURVE_QUAD):
    """
    Lower bound on the CDF of the harvested power for any α > 2, obtained by inverting the Laplace bound in closed
    form up to the kernel Ψ(θ, u) = L^-1{s^(δ-1) exp(-πλ_Σ s^δ (Σ_k Φ_k(u, 1) + u))}(θ):

        Σ_m ϑ_m ∫_0^∞ πλ_Σ (1 + η(1-ρ)P_m/(w_m N_m u^(α/2)))^(-N_m) Ψ(θ, u) du.

    The kernel is evaluated as θ^(-δ) g(πλ_Σ θ^(-δ)(Σ_k Φ_k(u, 1) + u)) with :func:`stable_kernel`, and the integral is
    taken in y = πλ_Σ θ^(-δ) u on one adaptive grid shared by all θ.
    """
    theta, scalar = _as_grid(theta)
    a = numpy.pi * p.lambda_sigma
    delta = p.delta
    theta_delta = theta ** delta
    half = p.alpha / 2.0

    def integrand(y):
        u = theta_delta * y / a
        kernel = stable_kernel(y + a / theta_delta * phi_sum(u, 1.0, p), delta, terms=terms)
        with numpy.errstate(divide='ignore'):
            ratio = 1.0 / u ** half
        return _beamforming(p, ratio) * kernel

    return _result(quad_vec_semi_infinite(integrand, spec=spec).value, scalar)


def harvested_power_cdf(theta, p, method='auto', terms=41, spec=CURVE_QUAD):
    """
    Lower bound on the CDF P(P_eh ≤ θ) of the harvested power.

    Args:
        theta (float or numpy.ndarray): threshold(s) in watts
        p (HarvestParams): parameters
        method (str): 'auto' uses the closed α = 4 path when α = 4 and the general path otherwise; 'alpha4' and
            'general' force a path
        terms (int): number of terms of the Euler inversion of the general path

    Returns:
        float or numpy.ndarray: CDF values in [0, 1]
    """
    if method == 'auto':
        method = 'alpha4' if p.alpha == 4 else 'general'
    log.debug(f"harvested power CDF on {numpy.size(theta)} thresholds with the {method} path")
    if method == 'alpha4':
        return harvested_power_cdf_alpha4(theta, p, spec=spec)
    if method == 'general':
        return harvested_power_cdf_general(theta, p, terms=terms, spec=spec)
    raise SWIPTValueException(f"unknown CDF method {method!r}")


def outage_energy_harvesting(p, full_load=False, method='auto'):
    """
    Probability that the harvested power falls below the activation threshold P_eh,min.
    """
    params = p.with_full_load() if full_load else p
    return harvested_power_cdf(p.swipt.min_harvest_power, params, method=method)


def outage_self_powered(p, full_load=False, method='auto'):
    """
    Probability that the energy harvested in the downlink does not cover the uplink, P(P_eh ≤ (1-β)Q/β).
    """
    beta = p.swipt.downlink_fraction
    params = p.with_full_load() if full_load else p
    return harvested_power_cdf((1.0 - beta) * p.swipt.user_power / beta, params, method=method)


def mean_received_power(p):
    """
    Mean received power E[P_dl] in watts, with the near-field cutoff on the association-scaled distance,

        Σ_m ϑ_m (P_m/w_m) {(πλ_Σ)^(α/2) [Γ(1-α/2, πλ_Σ) - q_m ϑ_m^(α/2-1) Γ(1-α/2, πλ_Σϑ_m)]
                           + 2 q_m πλ_Σ e^(-πλ_Σϑ_m)/(α-2)}.
    """
    a = numpy.pi * p.lambda_sigma
    alpha = p.alpha
    serving = a ** (alpha / 2.0) * upper_incomplete_gamma(1.0 - alpha / 2.0, a)
    total = 0.0
    for m in range(p.network.n_tiers):
        t = p.theta[m]
        q = p.q[m]
        near = q * t ** (alpha / 2.0 - 1.0) * a ** (alpha / 2.0) * upper_incomplete_gamma(1.0 - alpha / 2.0, a * t)
        far = 2.0 * q * a * numpy.exp(-a * t) / (alpha - 2.0)
        total += t * p.powers[m] / p.weights[m] * (serving - near + far)
    return float(total)


def _energy_scale(p):
    return p.swipt.downlink_fraction * p.kappa * p.swipt.slot_duration


def mean_harvested_energy(p):
    """
    Mean energy βη(1-ρ)τ E[P_dl] harvested per slot in joules.
    """
    return _energy_scale(p) * mean_received_power(p)


def mean_harvested_energy_mrpa(p):
    """
    Mean harvested energy under MRPA, where P_m/w_m = 1 and ϑ_m = P_m^(2/α)λ_m/λ_Σ.
    """
    _require_mrpa(p, "the MRPA mean energy")
    a = numpy.pi * p.lambda_sigma
    alpha = p.alpha
    t = p.theta
    q = p.q
    gammas = numpy.array([upper_incomplete_gamma(1.0 - alpha / 2.0, a * tm) for tm in t])
    bracket = (a ** (alpha / 2.0) * (upper_incomplete_gamma(1.0 - alpha / 2.0, a) - q * t ** (alpha / 2.0 - 1.0) * gammas)
               + 2.0 * q * a * numpy.exp(-a * t) / (alpha - 2.0))
    return float(_energy_scale(p) * numpy.sum(t * bracket))


def mean_harvested_energy_sparse(p, load_aware=True):
    """
    Mean harvested energy of a sparse network (πλ_Σ ≪ 1), βη(1-ρ)τ (2π/(α-2)) λ_Σ Σ_m ϑ_m q_m P_m/w_m.

    The leading order of the exact expression does not depend on the non-void probabilities, since the nearest base
    station carries the near field; load_aware=False returns that leading order with q_m = 1. Both agree when every
    q_m is close to one.
    """
    q = p.q if load_aware else numpy.ones(p.network.n_tiers)
    total = numpy.sum(p.theta * q * p.powers / p.weights)
    return float(_energy_scale(p) * 2.0 * numpy.pi / (p.alpha - 2.0) * p.lambda_sigma * total)


def mean_harvested_energy_dense(p):
    """
    Mean harvested energy of an ultra-dense network, where the terms carrying q_m are dropped:
    βη(1-ρ)τ (πλ_Σ)^(α/2) Γ(1-α/2, πλ_Σ) Σ_m ϑ_m P_m/w_m.
    """
    a = numpy.pi * p.lambda_sigma
    serving = a ** (p.alpha / 2.0) * upper_incomplete_gamma(1.0 - p.alpha / 2.0, a)
    return float(_energy_scale(p) * serving * numpy.sum(p.theta * p.powers / p.weights))


def mean_harvested_energy_full_load(p):
    """ Mean harvested energy with every base station non-void, the largest value over all cell loads. """
    return mean_harvested_energy(p.with_full_load())


def self_sustainability_check(p):
    """
    Whether the mean harvested energy covers the uplink energy (1-β)τQ of the slot.

    Returns:
        tuple: (bool, margin in joules)
    """
    needed = (1.0 - p.swipt.downlink_fraction) * p.swipt.slot_duration * p.swipt.user_power
    margin = mean_harvested_energy(p) - needed
    return bool(margin >= 0.0), float(margin)


def full_load_gap(thetas, p, method='auto'):
    """
    Sup-norm distance between the finite-load CDF bound and its full-load limit on a θ grid.
    """
    finite = numpy.atleast_1d(harvested_power_cdf(thetas, p, method=method))
    full = numpy.atleast_1d(harvested_power_cdf(thetas, p.with_full_load(), method=method))
    return float(numpy.max(numpy.abs(finite - full)))
