"""
Special functions used by the analytical results.

The upper incomplete gamma function is needed for non-positive first arguments, which scipy does not cover, and the
interference integral appears in every interference Laplace exponent.
"""
import numpy
import scipy.special

from swipt.core.exceptions import SWIPTNumericsException, SWIPTValueException

_CF_MAX_ITER = 10000
_CF_EPS = 1e-16
_CF_TINY = 1e-300


def _gamma_continued_fraction(a, b):
    """
    Modified Lentz evaluation of the continued fraction for Γ(a, b). Valid for any real a when b > 0, converges fast for
    b ≳ 1.
    """
    bk = b + 1.0 - a
    c = 1.0 / _CF_TINY
    d = 1.0 / bk
    h = d
    for i in range(1, _CF_MAX_ITER + 1):
        an = -i * (i - a)
        bk += 2.0
        d = an * d + bk
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = bk + an / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _CF_EPS:
            return numpy.exp(-b + a * numpy.log(b)) * h
    raise SWIPTNumericsException(f"continued fraction for Γ({a}, {b}) did not converge after {_CF_MAX_ITER} terms")


def upper_incomplete_gamma(a, b):
    """
    Upper incomplete gamma function Γ(a, b) = ∫_b^∞ t^(a-1) exp(-t) dt for real a and b > 0.

    Positive a is delegated to scipy. For a ≤ 0 the continued fraction is used when b ≥ 1. For b < 1 the value is
    carried down from the first shifted parameter a + k > 0 with the recurrence Γ(a, b) = (Γ(a+1, b) - b^a e^(-b)) / a.

    Args:
        a (float): first parameter, any real number
        b (float): lower integration limit, must be positive

    Returns:
        float: Γ(a, b)
    """
    a = float(a)
    b = float(b)
    if not b > 0:
        raise SWIPTValueException(f"upper incomplete gamma requires b > 0, got b={b}")
    if a > 0:
        return float(scipy.special.gammaincc(a, b) * scipy.special.gamma(a))
    if b >= 1.0:
        return float(_gamma_continued_fraction(a, b))
    log_b = numpy.log(b)
    if a == numpy.round(a):
        # non-positive integers start from Γ(0, b) = E1(b)
        value = scipy.special.exp1(b)
        shifts = range(-1, int(a) - 1, -1)
    else:
        # shift up to the first positive parameter in (0, 1), then recur downwards
        k = int(numpy.floor(-a)) + 1
        value = scipy.special.gammaincc(a + k, b) * scipy.special.gamma(a + k)
        shifts = [a + j for j in range(k - 1, -1, -1)]
    for aj in shifts:
        value = (value - numpy.exp(aj * log_b - b)) / aj
    return float(value)


def erfcx(x):
    """
    Scaled complementary error function exp(x²) erfc(x) for x ≥ 0. Accepts scalars or arrays.
    """
    x = numpy.asarray(x, dtype=float)
    if numpy.any(x < 0):
        raise SWIPTValueException("erfcx is only used on x >= 0")
    out = scipy.special.erfcx(x)
    if out.ndim == 0:
        return float(out)
    return out


def interference_constant(alpha):
    """
    ∫_0^∞ dt / (1 + t^(α/2)) = (2π/α) / sin(2π/α).
    """
    _check_alpha(alpha)
    return (2.0 * numpy.pi / alpha) / numpy.sin(2.0 * numpy.pi / alpha)


def interference_tail(x, alpha):
    """
    Tail ∫_x^∞ dt / (1 + t^(α/2)) of the interference integral for x ≥ 0 (scalar or array, +inf allowed).

    The two hypergeometric representations used here both have arguments in [-1, 0], so no cancellation occurs.
    """
    _check_alpha(alpha)
    x = numpy.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = numpy.atleast_1d(x)
    half = alpha / 2.0
    out = numpy.empty_like(x)
    near = x <= 1.0
    far = ~near
    if numpy.any(near):
        xn = x[near]
        delta = 2.0 / alpha
        head = xn * scipy.special.hyp2f1(1.0, delta, 1.0 + delta, -xn ** half)
        out[near] = interference_constant(alpha) - head
    if numpy.any(far):
        xf = x[far]
        c = 1.0 - 2.0 / alpha
        with numpy.errstate(divide='ignore', over='ignore'):
            zf = -xf ** (-half)
            out[far] = xf ** (1.0 - half) / (half - 1.0) * scipy.special.hyp2f1(1.0, c, 1.0 + c, zf)
    out = numpy.maximum(out, 0.0)
    if scalar:
        return float(out[0])
    return out


def interference_integral(x, alpha):
    """
    ∫_0^x dt / (1 + t^(α/2)) for x ≥ 0 or x = +inf.

    Args:
        x (float or numpy.ndarray): upper limit
        alpha (float): path-loss exponent, α > 2

    Returns:
        float or numpy.ndarray: the integral, equal to (2π/α)/sin(2π/α) at x = inf
    """
    _check_alpha(alpha)
    x = numpy.asarray(x, dtype=float)
    if numpy.any(x < 0):
        raise SWIPTValueException("interference integral requires x >= 0")
    scalar = x.ndim == 0
    x = numpy.atleast_1d(x)
    half = alpha / 2.0
    delta = 2.0 / alpha
    out = numpy.empty_like(x)
    near = x <= 1.0
    out[near] = x[near] * scipy.special.hyp2f1(1.0, delta, 1.0 + delta, -x[near] ** half)
    if numpy.any(~near):
        out[~near] = interference_constant(alpha) - interference_tail(x[~near], alpha)
    if scalar:
        return float(out[0])
    return out


def _check_alpha(alpha):
    if not alpha > 2:
        raise SWIPTValueException(f"path-loss exponent must exceed 2, got {alpha}")
