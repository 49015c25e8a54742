"""
Monte Carlo simulation of the downlink and uplink of the typical user.

Each trial draws every tier as a PPP on a disk centered at the typical user, associates all users by the weighted
distance w_m^(-2/α)|B|², marks base stations without users as void and evaluates the received power, harvested energy
and link SINRs of the user at the center. Trials use counter-based random streams keyed by (seed, trial), so results do
not depend on the number of worker processes.
"""
import functools
import logging
import multiprocessing
import time
from dataclasses import dataclass

import numpy
import pandas
import scipy.spatial

from swipt.core.exceptions import SWIPTSimulationException, SWIPTValueException
from swipt.core.network import apply_override, derive_stats
from swipt.models import CurveKind, CurveTable, TrialOutcome
from swipt.utils.constants import (DEFAULT_RATE_CEILING, EDGE_TAIL_FRACTION, MAX_WINDOW_GROWTH, MIN_BS_PER_TIER,
                                   WINDOW_SCALE)
from swipt.utils.log import LoggingMixin, log_progress
from swipt.utils.stats import ecdf_confidence, mean_confidence

log = logging.getLogger(__name__)

RECEIVE_GAINS = ('unnormalized', 'normalized')
MAX_RESAMPLES = 100
EMPIRICAL_METRICS = ('harvested_power_cdf', 'outage_energy_harvesting', 'outage_self_powered',
                     'mean_harvested_energy', 'downlink_rate', 'uplink_rate')


class DegenerateRealization(SWIPTSimulationException):
    """ A draw without any base station in the window. """


def trial_generator(seed, trial, key=()):
    """
    Random generator of one trial, a Philox stream keyed by the experiment seed, an optional key and the trial index.
    """
    entropy = [int(seed), *[int(k) for k in key], int(trial)]
    return numpy.random.Generator(numpy.random.Philox(numpy.random.SeedSequence(entropy)))


def _as_generator(seed):
    if isinstance(seed, numpy.random.Generator):
        return seed
    return trial_generator(seed, 0)


def default_window_radius(net, tail_fraction=EDGE_TAIL_FRACTION):
    """
    Radius of the simulation disk in meters.

    The base radius is WINDOW_SCALE typical inter-site distances 1/√(πΣλ_m). The interference beyond r scales as
    r^(2-α), so keeping its share below tail_fraction needs r ≥ r_typ tail_fraction^(-1/(α-2)). The larger of the two
    is used, capped at MAX_WINDOW_GROWTH base radii.
    """
    r_typ = 1.0 / numpy.sqrt(numpy.pi * numpy.sum(net.intensities))
    base = WINDOW_SCALE * r_typ
    tail = r_typ * tail_fraction ** (-1.0 / (net.pathloss_exponent - 2.0))
    radius = min(max(base, tail), MAX_WINDOW_GROWTH * base)
    if tail > radius:
        log.debug(f"window radius capped at {radius:.1f} m, below the tail radius {tail:.1f} m")
    return float(radius)


def check_window(net, window_radius):
    """ Rejects windows whose expected number of base stations is below MIN_BS_PER_TIER per tier. """
    if not window_radius > 0:
        raise SWIPTValueException(f"window radius must be positive, got {window_radius}")
    expected = numpy.sum(net.intensities) * numpy.pi * window_radius ** 2
    if expected < MIN_BS_PER_TIER * net.n_tiers:
        raise SWIPTSimulationException(
            f"window of radius {window_radius:.1f} m holds {expected:.1f} base stations on average, "
            f"fewer than {MIN_BS_PER_TIER * net.n_tiers}"
        )


def far_field_interference(intensities, powers, alpha, window_radius):
    """ Campbell mean Σ λ_k P_k 2π r^(2-α)/(α-2) of unit-mean marks beyond radius r. """
    density = numpy.dot(intensities, powers)
    return float(density * 2.0 * numpy.pi * window_radius ** (2.0 - alpha) / (alpha - 2.0))


def _uniform_disk(rng, n, radius):
    r = radius * numpy.sqrt(rng.random(n))
    phi = 2.0 * numpy.pi * rng.random(n)
    return numpy.column_stack((r * numpy.cos(phi), r * numpy.sin(phi)))


def _path_gain(d2, alpha):
    # |x|^(-α) with the unit near-field cutoff
    with numpy.errstate(divide='ignore'):
        return numpy.where(d2 >= 1.0, d2 ** (-alpha / 2.0), 0.0)


@dataclass
class NetworkRealization:
    """
    One draw of the network on a disk.

    Args:
        bs_positions (numpy.ndarray): (B, 2) positions in meters of all base stations, tier by tier
        bs_tiers (numpy.ndarray): tier index of every base station
        user_positions (numpy.ndarray): (U, 2) positions, the typical user at the origin comes first
        serving (numpy.ndarray): index of the serving base station of every user
        void_flags (numpy.ndarray): True for base stations without users
        window_radius (float): radius of the disk
    """
    bs_positions: numpy.ndarray
    bs_tiers: numpy.ndarray
    user_positions: numpy.ndarray
    serving: numpy.ndarray
    void_flags: numpy.ndarray
    window_radius: float

    @property
    def typical_bs(self):
        return int(self.serving[0])

    @property
    def typical_tier(self):
        return int(self.bs_tiers[self.typical_bs])

    @property
    def users_per_bs(self):
        return numpy.bincount(self.serving, minlength=len(self.bs_tiers))

    def inner_mask(self, fraction=0.5):
        """ Base stations within fraction of the window radius, away from the edge. """
        d2 = numpy.sum(self.bs_positions ** 2, axis=1)
        return d2 <= (fraction * self.window_radius) ** 2


def associate(bs_positions, bs_tiers, users, net):
    """
    Serving base station of every user under the weighted rule argmin_m w_m^(-2/α)|B_m|².

    Empty tiers are skipped. Ties go to the lowest tier.

    Returns:
        tuple: serving base-station indices, association-scaled squared distances
    """
    scaled = numpy.full((net.n_tiers, len(users)), numpy.inf)
    index = numpy.zeros((net.n_tiers, len(users)), dtype=int)
    offsets = numpy.concatenate(([0], numpy.cumsum(numpy.bincount(bs_tiers, minlength=net.n_tiers))))
    weights = net.weights ** (-net.delta)
    for m in range(net.n_tiers):
        if offsets[m + 1] == offsets[m]:
            continue
        tree = scipy.spatial.cKDTree(bs_positions[offsets[m]:offsets[m + 1]])
        d, idx = tree.query(users)
        scaled[m] = weights[m] * d ** 2
        index[m] = offsets[m] + idx
    if numpy.all(numpy.isinf(scaled[:, 0])):
        raise DegenerateRealization("no base station in the window")
    tier = numpy.argmin(scaled, axis=0)
    cols = numpy.arange(len(users))
    return index[tier, cols], scaled[tier, cols]


def sample_realization(net, window_radius=None, seed=0):
    """
    Draws a network realization on a disk of the given radius.

    Args:
        net (NetworkConfig): network parameters
        window_radius (float): radius in meters, see :func:`default_window_radius`
        seed (int or numpy.random.Generator): seed or generator of the draw

    Returns:
        NetworkRealization: the draw
    """
    window_radius = default_window_radius(net) if window_radius is None else window_radius
    check_window(net, window_radius)
    rng = _as_generator(seed)
    area = numpy.pi * window_radius ** 2
    counts = rng.poisson(net.intensities * area)
    bs_positions = numpy.concatenate([_uniform_disk(rng, n, window_radius) for n in counts])
    bs_tiers = numpy.repeat(numpy.arange(net.n_tiers), counts)
    users = numpy.vstack(([[0.0, 0.0]], _uniform_disk(rng, rng.poisson(net.user_intensity * area), window_radius)))
    serving, _ = associate(bs_positions, bs_tiers, users, net)
    void_flags = numpy.bincount(serving, minlength=len(bs_tiers)) == 0
    return NetworkRealization(bs_positions, bs_tiers, users, serving, void_flags, float(window_radius))


def measure_downlink(r, net, swipt, rng, far_field=0.0):
    """
    Received power, harvested power and energy and downlink SINR of the typical user.

    The serving gain is Gamma(N_m, 1/N_m) and interfering non-void base stations have exp(1) fading.

    Args:
        r (NetworkRealization): realization
        net (NetworkConfig): network parameters
        swipt (SwiptConfig): receiver parameters
        rng (numpy.random.Generator): random stream
        far_field (float): mean interference power from beyond the window in watts

    Returns:
        dict: p_dl, p_eh, e_eh, sinr_dl and the association-scaled squared distance
    """
    b = r.typical_bs
    m = r.typical_tier
    d2 = numpy.sum(r.bs_positions ** 2, axis=1)
    gains = _path_gain(d2, net.pathloss_exponent)
    powers = net.powers[r.bs_tiers]
    antennas = net.antennas[m]
    signal = powers[b] * rng.gamma(antennas, 1.0 / antennas) * gains[b]
    active = ~r.void_flags
    active[b] = False
    fading = rng.exponential(1.0, active.sum())
    interference = float(numpy.dot(powers[active] * gains[active], fading)) + far_field
    p_dl = signal + interference
    kappa = swipt.conversion_efficiency * (1.0 - swipt.power_split)
    p_eh = kappa * p_dl
    denominator = interference + net.noise_power / swipt.power_split
    sinr = signal / denominator if denominator > 0 else numpy.inf
    return {
        'association_distance': float(net.weights[m] ** (-net.delta) * d2[b]),
        'p_dl': float(p_dl),
        'p_eh': float(p_eh),
        'e_eh': float(swipt.downlink_fraction * swipt.slot_duration * p_eh),
        'sinr_dl': float(sinr)
    }


def schedule_uplink(r, rng):
    """
    One uniformly chosen user per non-void base station; the typical user is scheduled at its own base station.

    Returns:
        numpy.ndarray: indices of the scheduled users, the typical user first
    """
    perm = rng.permutation(len(r.serving))
    _, first = numpy.unique(r.serving[perm], return_index=True)
    chosen = perm[first]
    others = chosen[r.serving[chosen] != r.typical_bs]
    return numpy.concatenate(([0], others))


def measure_uplink(r, net, swipt, rng, receive_gain='unnormalized', far_field=0.0):
    """
    Uplink SIR of the typical user at its serving base station.

    The receive beamforming gain is Gamma(N_m, 1) for 'unnormalized' and Gamma(N_m, 1/N_m) for 'normalized'.
    Interfering scheduled users have exp(1) fading. Without interference the SIR is inf.
    """
    if receive_gain not in RECEIVE_GAINS:
        raise SWIPTValueException(f"unknown receive gain law {receive_gain!r}")
    b = r.typical_bs
    n = net.antennas[r.typical_tier]
    scale = 1.0 if receive_gain == 'unnormalized' else 1.0 / n
    scheduled = schedule_uplink(r, rng)
    d2 = numpy.sum((r.user_positions[scheduled] - r.bs_positions[b]) ** 2, axis=1)
    gains = _path_gain(d2, net.pathloss_exponent)
    q = swipt.user_power
    signal = q * rng.gamma(n, scale) * gains[0]
    interference = q * float(numpy.dot(gains[1:], rng.exponential(1.0, len(scheduled) - 1))) + far_field
    if interference > 0:
        return float(signal / interference)
    return numpy.inf if signal > 0 else 0.0


@dataclass(frozen=True)
class TrialOptions:
    """
    Settings shared by all trials of an experiment.

    Args:
        window_radius (float): radius of the simulation disk in meters
        tail_completion (bool): add the mean interference from beyond the window
        receive_gain (str): law of the uplink receive beamforming gain
        max_resamples (int): number of degenerate realizations redrawn before giving up
    """
    window_radius: float
    tail_completion: bool = True
    receive_gain: str = 'unnormalized'
    max_resamples: int = MAX_RESAMPLES


def run_trial(config, trial, seed=0, options=None, key=()):
    """
    One Monte Carlo trial.

    Args:
        config (SystemConfig): parameters
        trial (int): trial index
        seed (int): experiment seed
        options (TrialOptions): trial settings, defaults derive the window from the network
        key (tuple): extra integers mixed into the random stream, e.g., a sweep point

    Returns:
        TrialOutcome: measurements of the typical user
    """
    net, swipt = config.network, config.swipt
    if options is None:
        options = TrialOptions(default_window_radius(net))
    rng = trial_generator(seed, trial, key)
    far_dl = far_ul = 0.0
    if options.tail_completion:
        stats = derive_stats(net)
        far_dl = far_field_interference(net.intensities * stats.nonvoid_probs, net.powers, net.pathloss_exponent,
                                        options.window_radius)
        far_ul = swipt.user_power * far_field_interference(stats.scheduled_user_intensity, 1.0,
                                                           net.pathloss_exponent, options.window_radius)
    for resamples in range(options.max_resamples + 1):
        try:
            r = sample_realization(net, options.window_radius, rng)
        except DegenerateRealization:
            continue
        down = measure_downlink(r, net, swipt, rng, far_field=far_dl)
        sir_ul = measure_uplink(r, net, swipt, rng, receive_gain=options.receive_gain, far_field=far_ul)
        return TrialOutcome(trial=int(trial), serving_tier=r.typical_tier, sir_ul=sir_ul, resamples=resamples,
                            **down)
    raise SWIPTSimulationException(f"trial {trial}: no serving base station in {options.max_resamples + 1} draws")


def capped_rate(sinr, ceiling=DEFAULT_RATE_CEILING):
    """
    ln(1 + SINR) capped at ceiling nats, which also maps infinite SINRs.

    Returns:
        tuple: rates, fraction of capped values
    """
    sinr = numpy.asarray(sinr, dtype=float)
    with numpy.errstate(over='ignore'):
        rates = numpy.log1p(sinr)
    capped = rates > ceiling
    return numpy.minimum(rates, ceiling), float(numpy.mean(capped)) if sinr.size else 0.0


class MonteCarloExperiment(LoggingMixin):
    """
    Runs independent trials of one configuration and summarizes them.

    Args:
        config (SystemConfig): parameters
        trials (int): number of trials
        seed (int): experiment seed
        threads (int): number of worker processes
        window_radius (float): simulation disk radius in meters, defaults to :func:`default_window_radius`
        tail_completion (bool): add the mean far-field interference
        receive_gain (str): uplink receive gain law
        rate_ceiling (float): cap of ln(1 + SINR) in nats
        key (tuple): extra integers mixed into the random streams
    """
    def __init__(self, config, trials, seed=0, threads=1, window_radius=None, tail_completion=True,
                 receive_gain='unnormalized', rate_ceiling=DEFAULT_RATE_CEILING, key=()):
        if int(trials) != trials or trials < 1:
            raise SWIPTValueException(f"number of trials must be a positive integer, got {trials}")
        if threads < 1:
            raise SWIPTValueException(f"number of threads must be positive, got {threads}")
        self.config = config
        self.trials = int(trials)
        self.seed = int(seed)
        self.threads = int(threads)
        self.rate_ceiling = rate_ceiling
        self.key = tuple(key)
        radius = default_window_radius(config.network) if window_radius is None else float(window_radius)
        check_window(config.network, radius)
        self.options = TrialOptions(radius, tail_completion=tail_completion, receive_gain=receive_gain)
        self.outcomes = None

    def run(self):
        """
        Returns:
            list: TrialOutcome of every trial, in trial order
        """
        worker = functools.partial(run_trial, self.config, seed=self.seed, options=self.options, key=self.key)
        t0 = time.time()
        outcomes = []
        self.log.info(f"running {self.trials} trials on a {self.options.window_radius:.1f} m window "
                      f"with {self.threads} process(es)")
        if self.threads == 1:
            for trial in range(self.trials):
                outcomes.append(worker(trial))
                log_progress(self.log, trial + 1, self.trials, t0)
        else:
            chunksize = max(1, self.trials // (4 * self.threads))
            with multiprocessing.Pool(self.threads) as pool:
                for outcome in pool.imap(worker, range(self.trials), chunksize=chunksize):
                    outcomes.append(outcome)
                    log_progress(self.log, len(outcomes), self.trials, t0)
        self.outcomes = outcomes
        resampled = sum(1 for o in outcomes if o.resamples > 0)
        if resampled:
            self.log.warning(f"{resampled / self.trials:.2%} of trials redrew a degenerate realization")
        return outcomes

    def _require(self):
        if self.outcomes is None:
            self.run()
        return self.outcomes

    def column(self, name):
        return numpy.array([getattr(o, name) for o in self._require()], dtype=float)

    def to_dataframe(self):
        """ One row per trial. """
        return pandas.DataFrame([o.to_dict() for o in self._require()])

    def harvested_power_cdf(self, thetas):
        """
        Empirical CDF of the harvested power at thetas in watts.

        Returns:
            tuple: cdf, confidence half-widths
        """
        return ecdf_confidence(self.column('p_eh'), thetas)

    def outage_energy_harvesting(self):
        """ Fraction of trials with harvested power below the activation threshold. """
        cdf, ci = ecdf_confidence(self.column('p_eh'), [self.config.swipt.min_harvest_power])
        return float(cdf[0]), float(ci[0])

    def outage_self_powered(self):
        """ Fraction of trials whose harvested energy does not cover the uplink energy (1-β)τQ. """
        s = self.config.swipt
        need = (1.0 - s.downlink_fraction) * s.slot_duration * s.user_power
        cdf, ci = ecdf_confidence(self.column('e_eh'), [need])
        return float(cdf[0]), float(ci[0])

    def mean_harvested_energy(self):
        """ Sample mean of the harvested energy in joules and its confidence half-width. """
        return mean_confidence(self.column('e_eh'))

    def ergodic_rates(self):
        """
        Sample means of the capped rates ln(1 + SINR) in nats/Hz with confidence half-widths.

        Returns:
            dict: c_dl, c_dl_ci, c_ul, c_ul_ci and the capped fractions
        """
        out = {}
        for link, name in (('dl', 'sinr_dl'), ('ul', 'sir_ul')):
            rates, capped = capped_rate(self.column(name), self.rate_ceiling)
            if capped > 0:
                self.log.warning(f"{capped:.2%} of {link} rates capped at {self.rate_ceiling} nats")
            out[f'c_{link}'], out[f'c_{link}_ci'] = mean_confidence(rates)
            out[f'c_{link}_capped'] = capped
        return out


def run_experiment(config, metric, trials, seed=0, abscissa_name='theta', abscissae=None, threads=1, **options):
    """
    Empirical curve of a metric over a grid.

    The harvested-power CDF is evaluated on a θ grid from one experiment. All other metrics sweep a config field named
    by abscissa_name, with one experiment per grid point and the point index mixed into the random streams.

    Args:
        config (SystemConfig): parameters
        metric (str): one of EMPIRICAL_METRICS
        trials (int): trials per experiment
        seed (int): experiment seed
        abscissa_name (str): 'theta' or a sweep field accepted by :func:`swipt.core.network.apply_override`
        abscissae (array-like): grid
        threads (int): worker processes
        **options: passed to :class:`MonteCarloExperiment`

    Returns:
        CurveTable: the empirical curve with confidence half-widths
    """
    if metric not in EMPIRICAL_METRICS:
        raise SWIPTValueException(f"unknown metric {metric!r}, choose from {', '.join(EMPIRICAL_METRICS)}")
    if abscissae is None or len(abscissae) == 0:
        raise SWIPTValueException("empirical curves need a nonempty grid")
    table = CurveTable(abscissa_name, abscissae, name=metric)
    if metric == 'harvested_power_cdf':
        if abscissa_name != 'theta':
            raise SWIPTValueException("the harvested-power CDF is tabulated over theta")
        experiment = MonteCarloExperiment(config, trials, seed=seed, threads=threads, **options)
        cdf, ci = experiment.harvested_power_cdf(table.abscissae)
        return table.add_curve('empirical', cdf, CurveKind.EMPIRICAL, ci_halfwidth=ci, cdf=True)
    values, halfwidths = empirical_sweep(config, abscissa_name, table.abscissae, [metric], trials, seed=seed,
                                         threads=threads, **options)[metric]
    return table.add_curve('empirical', values, CurveKind.EMPIRICAL, ci_halfwidth=halfwidths)


def empirical_sweep(config, abscissa_name, abscissae, metrics, trials, seed=0, threads=1, **options):
    """
    Scalar empirical metrics over a sweep of one config field, one experiment per grid point.

    Returns:
        dict: metric -> (values, confidence half-widths)
    """
    out = {metric: ([], []) for metric in metrics}
    for i, x in enumerate(abscissae):
        experiment = MonteCarloExperiment(apply_override(config, abscissa_name, x), trials, seed=seed,
                                          threads=threads, key=(i,), **options)
        for metric in metrics:
            value, ci = _empirical_metric(experiment, metric)
            out[metric][0].append(value)
            out[metric][1].append(ci)
    return {metric: (numpy.array(v), numpy.array(c)) for metric, (v, c) in out.items()}


def _empirical_metric(experiment, metric):
    if metric == 'outage_energy_harvesting':
        return experiment.outage_energy_harvesting()
    if metric == 'outage_self_powered':
        return experiment.outage_self_powered()
    if metric == 'mean_harvested_energy':
        return experiment.mean_harvested_energy()
    rates = experiment.ergodic_rates()
    link = 'dl' if metric == 'downlink_rate' else 'ul'
    return rates[f'c_{link}'], rates[f'c_{link}_ci']


def sample_shot_noise(n, intensity, alpha, marks, size, seed=0, points=1000, chunk=1000, tail_completion=True):
    """
    Samples of the nth-incomplete shot noise over a PPP of intensity λ with the unit near-field cutoff.

    The squared distances of the nearest points are partial sums of exponential variables with rate πλ. Beyond the
    last simulated point the process is replaced by its mean E[W] πλ 2 max(v_K, 1)^(1-α/2)/(α-2).

    Args:
        n (int): index of the head point
        intensity (float): intensity λ
        alpha (float): path-loss exponent
        marks (MarkModel): mark laws with samplers
        size (int): number of samples
        seed (int or numpy.random.Generator): random stream
        points (int): number of simulated points per sample
        chunk (int): samples drawn at once

    Returns:
        numpy.ndarray: samples
    """
    if marks.sample is None or marks.sample_hat is None:
        raise SWIPTValueException("shot-noise sampling needs mark samplers")
    if points <= n:
        raise SWIPTValueException(f"need more than {n} simulated points, got {points}")
    rng = _as_generator(seed)
    a = numpy.pi * intensity
    out = numpy.empty(size)
    for start in range(0, size, chunk):
        k = min(chunk, size - start)
        v = numpy.cumsum(rng.exponential(1.0 / a, (k, points)), axis=1)
        gains = _path_gain(v, alpha)
        head = marks.sample_hat(rng, k) * gains[:, n - 1]
        tail = numpy.sum(marks.sample(rng, (k, points - n)) * gains[:, n:], axis=1)
        out[start:start + k] = head + tail
        if tail_completion:
            out[start:start + k] += marks.mean * a * 2.0 * numpy.maximum(v[:, -1], 1.0) ** (1.0 - alpha / 2.0) \
                                    / (alpha - 2.0)
    return out


def sample_cell_statistics(net, realizations, seed=0, window_radius=None, inner_fraction=0.5):
    """
    Number of associated users of every base station away from the window edge, per tier.

    Args:
        net (NetworkConfig): network parameters
        realizations (int): number of network draws
        seed (int): seed of the draws
        window_radius (float): radius of the disk in meters
        inner_fraction (float): only base stations within this fraction of the radius are counted

    Returns:
        list: one integer array of user counts per tier
    """
    window_radius = default_window_radius(net) if window_radius is None else window_radius
    counts = [[] for _ in range(net.n_tiers)]
    t0 = time.time()
    for i in range(realizations):
        try:
            r = sample_realization(net, window_radius, trial_generator(seed, i))
        except DegenerateRealization:
            continue
        users = r.users_per_bs
        # the typical user is an extra point of the user process
        users[r.typical_bs] -= 1
        inner = r.inner_mask(inner_fraction)
        for m in range(net.n_tiers):
            counts[m].append(users[inner & (r.bs_tiers == m)])
        log_progress(log, i + 1, realizations, t0, what='realizations')
    return [numpy.concatenate(c) if c else numpy.array([], dtype=int) for c in counts]


def void_fractions(counts):
    """
    Fraction of void base stations per tier and its standard error.

    Returns:
        pandas.DataFrame: columns tier, void_fraction, standard_error, base_stations
    """
    rows = []
    for m, c in enumerate(counts):
        p = float(numpy.mean(c == 0)) if len(c) else numpy.nan
        se = float(numpy.sqrt(p * (1.0 - p) / len(c))) if len(c) else numpy.nan
        rows.append({'tier': m + 1, 'void_fraction': p, 'standard_error': se, 'base_stations': len(c)})
    return pandas.DataFrame(rows)
