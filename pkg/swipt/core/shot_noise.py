"""
Laplace transform and mean of the nth-incomplete shot-noise process

    I_(n) = Ŵ_n ‖X_n‖^(-α) + Σ_{k > n} W_k ‖X_k‖^(-α)

over a homogeneous PPP of intensity λ, where X_k is the kth nearest point, ‖X‖^(-α) = |X|^(-α) 1(|X| ≥ 1), the head mark
Ŵ_n may follow a law different from the i.i.d. marks W_k, and the n - 1 nearest points are excluded.

In squared distances the points form a PPP of intensity πλ on (0, ∞). Conditioned on |X_n|² = x the points beyond x
contribute exp(-πλ H(x)) to the transform, with H(x) = ∫_x^∞ (1 - L_W(s v^(-α/2))) dv.
"""
from dataclasses import dataclass

import numpy
import scipy.special
import scipy.stats

from swipt.core.exceptions import SWIPTValueException
from swipt.utils.quadrature import DEFAULT_QUAD, quad_interval
from swipt.utils.specfun import interference_tail, upper_incomplete_gamma


@dataclass(frozen=True)
class MarkModel:
    """
    Laws of the marks of a shot-noise process.

    Args:
        laplace (callable): Laplace transform of the i.i.d. marks W
        laplace_hat (callable): Laplace transform of the head mark Ŵ_n
        mean (float): E[W]
        mean_hat (float): E[Ŵ_n]
        fractional_moment (callable): δ -> E[W^δ]
        sample (callable): (rng, size) -> samples of W
        sample_hat (callable): (rng, size) -> samples of Ŵ_n
        exponential_scale (float): mean of W if W is exponential, which enables a closed form of H(x)
    """
    laplace: object
    laplace_hat: object
    mean: float
    mean_hat: float
    fractional_moment: object
    sample: object = None
    sample_hat: object = None
    exponential_scale: float = None

    def __post_init__(self):
        if not (self.mean >= 0 and self.mean_hat >= 0):
            raise SWIPTValueException("mark means must be nonnegative and finite")
        if not (numpy.isfinite(self.mean) and numpy.isfinite(self.mean_hat)):
            raise SWIPTValueException("mark means must be finite")

    def frac_moment(self, alpha):
        """ E[W^(2/α)] """
        return float(self.fractional_moment(2.0 / alpha))

    def scaled(self, factor):
        """ Marks multiplied by a positive constant. """
        if not factor > 0:
            raise SWIPTValueException("scale factor must be positive")
        return MarkModel(
            laplace=lambda s: self.laplace(factor * s),
            laplace_hat=lambda s: self.laplace_hat(factor * s),
            mean=factor * self.mean,
            mean_hat=factor * self.mean_hat,
            fractional_moment=lambda d: factor ** d * self.fractional_moment(d),
            sample=None if self.sample is None else lambda rng, size: factor * self.sample(rng, size),
            sample_hat=None if self.sample_hat is None else lambda rng, size: factor * self.sample_hat(rng, size),
            exponential_scale=None if self.exponential_scale is None else factor * self.exponential_scale
        )

    @classmethod
    def exponential(cls, mean=1.0, mean_hat=None):
        """
        Exponential marks, the law of Rayleigh-faded powers. The head mark is exponential with mean_hat.
        """
        mean_hat = mean if mean_hat is None else mean_hat
        return cls(
            laplace=lambda s: 1.0 / (1.0 + mean * s),
            laplace_hat=lambda s: 1.0 / (1.0 + mean_hat * s),
            mean=mean,
            mean_hat=mean_hat,
            fractional_moment=lambda d: mean ** d * scipy.special.gamma(1.0 + d),
            sample=lambda rng, size: rng.exponential(mean, size),
            sample_hat=lambda rng, size: rng.exponential(mean_hat, size),
            exponential_scale=mean
        )

    @classmethod
    def gamma(cls, shape, scale, shape_hat=None, scale_hat=None):
        """
        Gamma marks with the given shape and scale, e.g., the beamforming gain Gamma(N, 1/N).
        """
        shape_hat = shape if shape_hat is None else shape_hat
        scale_hat = scale if scale_hat is None else scale_hat
        return cls(
            laplace=lambda s: (1.0 + scale * s) ** (-shape),
            laplace_hat=lambda s: (1.0 + scale_hat * s) ** (-shape_hat),
            mean=shape * scale,
            mean_hat=shape_hat * scale_hat,
            fractional_moment=lambda d: scale ** d * numpy.exp(scipy.special.gammaln(shape + d)
                                                             - scipy.special.gammaln(shape)),
            sample=lambda rng, size: rng.gamma(shape, scale, size),
            sample_hat=lambda rng, size: rng.gamma(shape_hat, scale_hat, size),
            exponential_scale=scale if shape == 1 else None
        )

    @classmethod
    def with_head(cls, marks, head):
        """ Marks with the i.i.d. law of marks and the head law of head. """
        return cls(
            laplace=marks.laplace,
            laplace_hat=head.laplace_hat,
            mean=marks.mean,
            mean_hat=head.mean_hat,
            fractional_moment=marks.fractional_moment,
            sample=marks.sample,
            sample_hat=head.sample_hat,
            exponential_scale=marks.exponential_scale
        )


def _check_process(n, intensity, alpha):
    if int(n) != n or n < 1:
        raise SWIPTValueException(f"point index n must be a positive integer, got {n}")
    if not intensity > 0:
        raise SWIPTValueException(f"intensity must be positive, got {intensity}")
    if not alpha > 2:
        raise SWIPTValueException(f"path-loss exponent must exceed 2, got {alpha}")


def tail_exponent(x, s, alpha, marks, spec=DEFAULT_QUAD):
    """
    H(x) = ∫_x^∞ (1 - L_W(s v^(-α/2))) dv for x > 0.

    Exponential marks have H(x) = (E[W]s)^(2/α) ∫_{x (E[W]s)^(-2/α)}^∞ dt/(1 + t^(α/2)). Other laws are integrated
    numerically after the substitution z = s v^(-α/2).
    """
    delta = 2.0 / alpha
    if marks.exponential_scale is not None:
        scale = (marks.exponential_scale * s) ** delta
        return scale * interference_tail(x / scale, alpha)
    z_max = s * x ** (-alpha / 2.0)

    def integrand(z):
        return (1.0 - marks.laplace(z)) * z ** (-1.0 - delta)

    return delta * s ** delta * quad_interval(integrand, 0.0, z_max, spec=spec).value


def _distance_cutoff(n, intensity, spec):
    # Gamma(n, πλ) tail of the nth squared distance
    return scipy.stats.gamma.isf(spec.truncation_threshold, n, scale=1.0 / (numpy.pi * intensity))


def shotnoise_laplace(n, s, intensity, alpha, marks, include_inner_disk=True, spec=DEFAULT_QUAD):
    """
    Laplace transform E[exp(-s I_(n))].

    The nth squared distance x has the Gamma(n, πλ) density f_n(x). For x ≥ 1 the head point contributes
    L_Ŵ(s x^(-α/2)). With include_inner_disk the complementary event x < 1, where the head point is silenced and the
    tail starts at the unit circle, is added as P(x < 1) exp(-πλ H(1)), which makes the transform equal 1 at s = 0.

    Args:
        n (int): index of the head point, n ≥ 1
        s (float): transform variable, s > 0
        intensity (float): intensity λ of the PPP
        alpha (float): path-loss exponent α > 2
        marks (MarkModel): laws of the marks
        include_inner_disk (bool): add the event that the head point lies inside the unit disk
        spec (QuadSpec): quadrature tolerances

    Returns:
        float: transform value in (0, 1]
    """
    _check_process(n, intensity, alpha)
    if not s > 0:
        raise SWIPTValueException(f"transform variable must be positive, got {s}")
    a = numpy.pi * intensity
    x_max = _distance_cutoff(n, intensity, spec)
    log_norm = n * numpy.log(a) - scipy.special.gammaln(n)

    def integrand(x):
        head = marks.laplace_hat(s * x ** (-alpha / 2.0))
        log_density = log_norm + (n - 1) * numpy.log(x) - a * x
        return float(numpy.real(head)) * numpy.exp(log_density - a * tail_exponent(x, s, alpha, marks, spec))

    value = 0.0
    if x_max > 1.0:
        value = quad_interval(integrand, 1.0, x_max, spec=spec).value
    if include_inner_disk:
        value += scipy.special.gammainc(n, a) * numpy.exp(-a * tail_exponent(1.0, s, alpha, marks, spec))
    return float(min(max(value, 0.0), 1.0))


def shotnoise_mean(n, intensity, alpha, marks, include_inner_disk=True):
    """
    Mean E[I_(n)].

    Without the inner disk this is the closed form

        (πλ)^(α/2)/(n-1)! [(E[Ŵ_n] - (α-2n)E[W]/(α-2)) Γ(n-α/2, πλ) + 2E[W](πλ)^(n-α/2) e^(-πλ)/(α-2)],

    which counts the process only on the event that the head point lies outside the unit disk. The complete mean adds
    E[W] (2πλ/(α-2)) P(|X_n|² < 1). For n = 1 and equal marks it reduces to Campbell's 2πλE[W]/(α-2).
    """
    _check_process(n, intensity, alpha)
    a = numpy.pi * intensity
    log_scale = (alpha / 2.0) * numpy.log(a) - scipy.special.gammaln(n)
    head = marks.mean_hat - (alpha - 2.0 * n) * marks.mean / (alpha - 2.0)
    value = 0.0
    if head != 0.0:
        value += head * numpy.exp(log_scale) * upper_incomplete_gamma(n - alpha / 2.0, a)
    value += numpy.exp(log_scale + (n - alpha / 2.0) * numpy.log(a) - a) * 2.0 * marks.mean / (alpha - 2.0)
    if include_inner_disk:
        value += marks.mean * 2.0 * a / (alpha - 2.0) * scipy.special.gammainc(n, a)
    return float(value)


def shotnoise_laplace_alpha4_exponential(s, intensity, laplace_hat=None, include_inner_disk=True, spec=DEFAULT_QUAD):
    """
    E[exp(-s I_(1))] for α = 4 and unit-mean exponential marks, reduced to one integral with y = x/√s:

        πλ√s ∫_{1/√s}^∞ L_Ŵ(1/y²) exp(-πλ√s (y + arccot y)) dy

    plus (1 - e^(-πλ)) exp(-πλ√s arccot(1/√s)) for the inner disk.

    Args:
        s (float): transform variable, s > 0
        intensity (float): intensity λ
        laplace_hat (callable): Laplace transform of the head mark, unit-mean exponential by default
    """
    if not s > 0:
        raise SWIPTValueException(f"transform variable must be positive, got {s}")
    if not intensity > 0:
        raise SWIPTValueException(f"intensity must be positive, got {intensity}")
    if laplace_hat is None:
        laplace_hat = lambda z: 1.0 / (1.0 + z)
    b = numpy.pi * intensity * numpy.sqrt(s)
    lower = 1.0 / numpy.sqrt(s)

    def integrand(y):
        return float(numpy.real(laplace_hat(y ** -2.0))) * numpy.exp(-b * (y + numpy.arctan2(1.0, y)) + b * lower)

    upper = lower + scipy.stats.expon.isf(spec.truncation_threshold, scale=1.0 / b)
    # the integrand is scaled by exp(b/√s) to keep it O(1) near the lower limit
    value = b * numpy.exp(-b * lower) * quad_interval(integrand, lower, upper, spec=spec).value
    if include_inner_disk:
        value += -numpy.expm1(-numpy.pi * intensity) * numpy.exp(-b * numpy.arctan2(1.0, lower))
    return float(min(max(value, 0.0), 1.0))


def shotnoise_mean_alpha4_halved(intensity):
    """
    The mean (πλ/2) e^(-πλ) stated in closed form for n = 1, α = 4 and unit-mean exponential marks. It is half of the
    truncated mean returned by ``shotnoise_mean(..., include_inner_disk=False)`` and is kept for comparison only.
    """
    a = numpy.pi * intensity
    return 0.5 * a * numpy.exp(-a)
