import numpy
import scipy.stats

from swipt.core.exceptions import SWIPTValueException
from swipt.utils.constants import CI_Z


def ecdf(x):
    """
    Compute the ecdf of vector x. This does not contain zero, should be equal to 1 in the last value
    to satisfy F(x) == P(X ≤ x).

    Args:
        x (numpy.array): vector of values

    Returns:
        xs (numpy.array), ys (numpy.array)
    """
    xs = numpy.sort(x)
    ys = numpy.arange(1, len(x) + 1) / float(len(x))
    return xs, ys


def less_equal_ecdf(x, val, cdf=()):
    """
    Given val return P(x ≤ val). Accepts a scalar or an array of values.

    Args:
        x (numpy.array): set of values
        val (float or numpy.array): value(s)
        cdf (tuple): ecdf of x, should be tuple (sorted(x), ecdf(x))

    Returns:
        (float or numpy.array): probability that x ≤ val
    """
    x = numpy.asarray(x)
    if x.shape[0] == 0:
        return None
    if not cdf:
        ex, ey = ecdf(x)
    else:
        ex, ey = cdf
    idx = numpy.searchsorted(ex, val, side='right')
    out = numpy.where(idx > 0, ey[numpy.maximum(idx - 1, 0)], 0.0)
    if numpy.ndim(out) == 0:
        return float(out)
    return out


def binned_ecdf(x, vals):
    """
    returns the statement P(X ≤ x) for val in vals.
    vals must be monotonically increasing and unique.

    returns:
        tuple: vals, and ecdf computed at vals
    """
    if len(x) == 0:
        return None
    vals = numpy.asarray(vals, dtype=float)
    return vals, less_equal_ecdf(x, vals)


def mean_confidence(x, z=CI_Z):
    """
    Sample mean and the half-width of its normal-approximation confidence interval.

    Args:
        x (numpy.array): samples, must contain at least two values
        z (float): standard normal quantile of the interval

    Returns:
        tuple: mean, half-width
    """
    x = numpy.asarray(x, dtype=float)
    if x.size < 2:
        raise SWIPTValueException("need at least two samples for a confidence interval")
    return float(numpy.mean(x)), float(z * standard_error(x))


def standard_error(x):
    x = numpy.asarray(x, dtype=float)
    return float(numpy.std(x, ddof=1) / numpy.sqrt(x.size))


def ecdf_confidence(x, vals, z=CI_Z):
    """
    Empirical CDF at vals with binomial-proportion confidence half-widths.

    Returns:
        tuple: cdf values, half-widths
    """
    x = numpy.asarray(x, dtype=float)
    _, cdf = binned_ecdf(x, vals)
    halfwidth = z * numpy.sqrt(cdf * (1.0 - cdf) / x.size)
    return cdf, halfwidth


def ks_statistic(samples, cdf):
    """
    One-sample Kolmogorov-Smirnov statistic of samples against a continuous CDF.

    Args:
        samples (numpy.array): observed values
        cdf (callable): vectorized CDF of the reference distribution

    Returns:
        tuple: statistic, p-value
    """
    result = scipy.stats.kstest(numpy.asarray(samples, dtype=float), cdf)
    return float(result.statistic), float(result.pvalue)


def chi_square_pmf_test(observed, pmf, min_expected=5.0):
    """
    Pearson chi-square goodness of fit of integer counts against a probability mass function.

    Neighbouring cells with expected frequency below min_expected are pooled, and the last cell absorbs the upper tail of
    the reference distribution.

    Args:
        observed (numpy.array): nonnegative integer samples
        pmf (numpy.array): reference probabilities for 0, 1, ..., len(pmf) - 1
        min_expected (float): smallest expected frequency of a pooled cell

    Returns:
        tuple: statistic, p-value
    """
    observed = numpy.asarray(observed, dtype=int)
    pmf = numpy.asarray(pmf, dtype=float)
    if observed.size == 0:
        raise SWIPTValueException("chi-square test needs samples")
    n_max = max(len(pmf), observed.max() + 1)
    counts = numpy.bincount(observed, minlength=n_max).astype(float)
    probs = numpy.zeros(n_max)
    probs[:len(pmf)] = pmf
    probs[-1] += max(0.0, 1.0 - probs.sum())
    expected = probs * observed.size
    obs_cells, exp_cells = [], []
    obs_acc = exp_acc = 0.0
    for o, e in zip(counts, expected):
        obs_acc += o
        exp_acc += e
        if exp_acc >= min_expected:
            obs_cells.append(obs_acc)
            exp_cells.append(exp_acc)
            obs_acc = exp_acc = 0.0
    if exp_cells:
        obs_cells[-1] += obs_acc
        exp_cells[-1] += exp_acc
    if len(exp_cells) < 2:
        raise SWIPTValueException("too few samples for a chi-square test")
    obs_cells = numpy.array(obs_cells)
    exp_cells = numpy.array(exp_cells)
    # renormalise for the tail mass that was cut off
    exp_cells *= obs_cells.sum() / exp_cells.sum()
    result = scipy.stats.chisquare(obs_cells, exp_cells)
    return float(result.statistic), float(result.pvalue)
