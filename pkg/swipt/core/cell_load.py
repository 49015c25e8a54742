"""
User association statistics under the generalized association rule.

The number of users associated with a tier-m base station is approximately negative binomial with shape 7/2 and mean
ℓ_m, which follows from the Gamma approximation of the Voronoi cell size.
"""
import numpy
import scipy.special

from swipt.core.exceptions import SWIPTValueException
from swipt.utils.constants import CELL_SIZE_SHAPE

DEFAULT_TAIL_MASS = 1e-12


def _check_load(load):
    load = numpy.asarray(load, dtype=float)
    if numpy.any(load < 0) or numpy.any(numpy.isnan(load)):
        raise SWIPTValueException("cell load must be nonnegative")
    return load


def user_count_pmf(load, n):
    """
    Probability that a base station with cell load ℓ serves exactly n users,
    Γ(n + 7/2) / (n! Γ(7/2)) (2ℓ/7)^n (1 + 2ℓ/7)^(-(n + 7/2)).

    Evaluated in log space so that large n do not overflow. Both arguments broadcast.

    Args:
        load (float or numpy.ndarray): cell load ℓ ≥ 0
        n (int or numpy.ndarray): number of users n ≥ 0

    Returns:
        float or numpy.ndarray: probabilities
    """
    load = _check_load(load)
    n = numpy.asarray(n)
    if numpy.any(n < 0) or numpy.any(n != numpy.floor(n)):
        raise SWIPTValueException("number of users must be a nonnegative integer")
    r = CELL_SIZE_SHAPE
    a = load / r
    with numpy.errstate(divide='ignore'):
        log_p = (scipy.special.gammaln(n + r) - scipy.special.gammaln(n + 1.0) - scipy.special.gammaln(r)
                 + scipy.special.xlogy(n, a) - (n + r) * numpy.log1p(a))
    out = numpy.exp(log_p)
    if out.ndim == 0:
        return float(out)
    return out


def void_probability(load):
    """ Probability 1 - q that a base station serves nobody. """
    return user_count_pmf(load, 0)


def nonvoid_probability(load):
    """
    Non-void probability q = 1 - (1 + 2ℓ/7)^(-7/2). Computed from the user-count PMF at zero so that both agree exactly.
    """
    return 1.0 - void_probability(load)


def _log_tail_bound(k, load):
    # Chernoff bound on P(N >= k) for the negative binomial law, valid for k above the mean
    r = CELL_SIZE_SHAPE
    p = (load / r) / (1.0 + load / r)
    return r * numpy.log((1.0 - p) * (k + r) / r) + k * numpy.log(p * (k + r) / k)


def pmf_truncation_index(load, tail_mass=DEFAULT_TAIL_MASS):
    """
    Smallest n above the mean with P(N ≥ n) < tail_mass according to the Chernoff bound on the negative-binomial tail.

    Args:
        load (float): cell load ℓ
        tail_mass (float): tolerated tail probability

    Returns:
        int: truncation index; summing the PMF over 0..index-1 misses less than tail_mass
    """
    load = float(_check_load(load))
    if not 0 < tail_mass < 1:
        raise SWIPTValueException("tail mass must lie in (0, 1)")
    if load == 0:
        return 1
    log_target = numpy.log(tail_mass)
    lo = int(numpy.floor(load)) + 1
    hi = lo
    while _log_tail_bound(hi, load) >= log_target:
        lo = hi
        hi *= 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _log_tail_bound(mid, load) < log_target:
            hi = mid
        else:
            lo = mid
    return hi


def user_count_pmf_table(load, tail_mass=DEFAULT_TAIL_MASS):
    """
    PMF of the number of users for n = 0, 1, ..., up to the truncation index.
    """
    index = pmf_truncation_index(load, tail_mass=tail_mass)
    return user_count_pmf(load, numpy.arange(index))


def association_distance_cdf(theta, lambda_sigma):
    """
    CDF 1 - exp(-π λ_Σ θ) of the association-scaled squared distance w_*^(-2/α)|B_*|² of the typical user.
    """
    theta = numpy.asarray(theta, dtype=float)
    if numpy.any(theta < 0):
        raise SWIPTValueException("association distance is nonnegative")
    out = -numpy.expm1(-numpy.pi * lambda_sigma * theta)
    if out.ndim == 0:
        return float(out)
    return out
