"""
Numerical inversion of Laplace transforms of nonnegative random quantities.

Two independent inverters are provided: the Euler-summation Fourier-series method, which is the default, and the fixed
Talbot contour, which serves as a cross-check.
"""
import numpy
import scipy.stats

from swipt.core.exceptions import SWIPTNumericsException, SWIPTValueException


class LaplaceEvaluator:
    """
    Laplace transform L(s) = E[exp(-sZ)] of a nonnegative quantity Z.

    The wrapped function has to accept numpy arrays of complex arguments with positive real part, because both
    inverters sample the transform off the real axis.

    Args:
        func (callable): the transform
        name (str): label used in messages
        domain (tuple): interval of real s on which the transform is finite
        vectorized (bool): set to False if func only accepts scalars
    """
    def __init__(self, func, name='', domain=(0.0, numpy.inf), vectorized=True):
        self.func = func
        self.name = name
        self.domain = domain
        self.vectorized = vectorized

    def __call__(self, s):
        if self.vectorized or numpy.isscalar(s):
            return self.func(s)
        return numpy.vectorize(self.func, otypes=[complex])(s)

    def __repr__(self):
        return f'LaplaceEvaluator({self.name!r})'

    @classmethod
    def exponential(cls, mean=1.0):
        return cls(lambda s: 1.0 / (1.0 + mean * s), name=f'exponential(mean={mean})')

    @classmethod
    def gamma(cls, shape, scale):
        return cls(lambda s: (1.0 + scale * s) ** (-shape), name=f'gamma(shape={shape}, scale={scale})')

    @classmethod
    def point_mass(cls, location):
        return cls(lambda s: numpy.exp(-location * s), name=f'point_mass({location})')


class EulerInversion:
    """
    Euler-summation inversion of the Bromwich integral.

    The trapezoidal discretisation of the Bromwich integral gives an alternating series in Re F((A + iπk)/t). The last
    M + 1 partial sums are averaged with binomial weights. With 2M + 1 terms the discretisation error is about
    10^(-2M/3), while 10^(M/3) amplifies the round-off error. M = 20 balances the two in double precision.

    Args:
        terms (int): odd number of transform evaluations 2M + 1
    """
    def __init__(self, terms=41):
        if terms < 7 or terms % 2 == 0:
            raise SWIPTValueException(f"Euler inversion needs an odd number of terms >= 7, got {terms}")
        m = (terms - 1) // 2
        self.terms = terms
        self.shift = m * numpy.log(10.0) / 3.0
        k = numpy.arange(terms)
        self.nodes = self.shift + 1j * numpy.pi * k
        signs = numpy.where(k % 2 == 0, 1.0, -1.0)
        tail = numpy.arange(1, m + 1)
        # weight of term k in the binomial average of partial sums S_M, ..., S_2M
        xi = numpy.ones(terms)
        xi[0] = 0.5
        xi[m + 1:] = scipy.stats.binom.sf(tail - 1, m, 0.5)
        # the same average over one partial sum less, used to detect unsettled sums
        xi_coarse = numpy.ones(terms)
        xi_coarse[0] = 0.5
        xi_coarse[m + 1:2 * m] = scipy.stats.binom.sf(tail[:-1] - 1, m - 1, 0.5)
        xi_coarse[2 * m] = 0.0
        scale = numpy.exp(self.shift)
        self.weights = scale * signs * xi
        self.weights_coarse = scale * signs * xi_coarse

    def sample(self, F, t):
        """
        Real parts of F at the inversion nodes for time t, shape (..., terms).
        """
        return numpy.real(numpy.asarray(F(self.nodes / t)))

    def combine(self, values, t):
        return values @ self.weights / t

    def __call__(self, F, t, tolerance=None):
        """
        Inverts F at t > 0.

        Args:
            F (callable): Laplace-domain function accepting a complex array
            t (float): time argument
            tolerance (float): if given, the result must agree with the coarser average within this tolerance

        Returns:
            float: the inverse transform at t
        """
        t = float(t)
        if not t > 0:
            raise SWIPTValueException(f"inverse Laplace transform requires t > 0, got {t}")
        values = self.sample(F, t)
        estimate = self.combine(values, t)
        if tolerance is not None:
            coarse = values @ self.weights_coarse / t
            if not numpy.all(numpy.isfinite(estimate)) or numpy.any(numpy.abs(estimate - coarse) > tolerance):
                raise SWIPTNumericsException(
                    f"Euler summation did not settle at t={t}: estimates {estimate} and {coarse}"
                )
        return estimate


def talbot_inversion(F, t, degree=24):
    """
    Fixed Talbot inversion of F at t > 0, with the contour parameter r = 2M/5.

    The transform must be analytic to the left of the contour, which excludes delayed transforms such as exp(-s).
    """
    t = float(t)
    if not t > 0:
        raise SWIPTValueException(f"inverse Laplace transform requires t > 0, got {t}")
    r = 2.0 * degree / 5.0
    theta = numpy.pi * numpy.arange(1, degree) / degree
    cot = 1.0 / numpy.tan(theta)
    nodes = numpy.concatenate([[r / t], r * theta * (cot + 1j) / t])
    gammas = numpy.concatenate([[0.5 * numpy.exp(r)],
                                numpy.exp(t * nodes[1:]) * (1.0 + 1j * theta * (1.0 + cot ** 2) - 1j * cot)])
    values = numpy.asarray(F(nodes))
    return float(numpy.real(gammas * values).sum() * r / (degree * t))


_EULER = {}


def euler_inverter(terms=41):
    """
    Returns a cached :class:`EulerInversion` with the requested number of terms.
    """
    if terms not in _EULER:
        _EULER[terms] = EulerInversion(terms)
    return _EULER[terms]


def inverse_laplace_cdf(L, theta, terms=41, method='euler', tolerance=1e-6):
    """
    CDF P(Z ≤ θ) of a nonnegative quantity recovered from its Laplace transform by inverting L(s)/s.

    Args:
        L (LaplaceEvaluator or callable): Laplace transform of Z
        theta (float): evaluation point, θ > 0
        terms (int): number of terms of the Euler inversion
        method (str): 'euler' or 'talbot'
        tolerance (float): settling tolerance of the Euler sums, None disables the check

    Returns:
        float: CDF value clamped to [0, 1]
    """
    def F(s):
        return L(s) / s

    if method == 'euler':
        value = euler_inverter(terms)(F, theta, tolerance=tolerance)
    elif method == 'talbot':
        value = talbot_inversion(F, theta)
    else:
        raise SWIPTValueException(f"unknown inversion method {method!r}")
    return float(numpy.clip(value, 0.0, 1.0))
