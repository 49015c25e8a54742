"""
Command layer of the package: experiment descriptions, command handlers, figure presets and the validation suite.

Every command produces one or more tables and a run manifest. Tables are written as CSV (or JSON) next to a
manifest.json holding the resolved configuration, seed, version and wall time, which suffices to repeat the run with
:func:`replay`.
"""
import dataclasses
import logging
import os
import time
from dataclasses import dataclass

import numpy
import pandas
import scipy.special

from swipt.core import harvest
from swipt.core.cell_load import association_distance_cdf, nonvoid_probability, user_count_pmf_table
from swipt.core.energy_efficiency import Optimizer, feasible_sets, optimize
from swipt.core.exceptions import (SWIPTConfigException, SWIPTException, SWIPTValidationException,
                                   SWIPTValueException)
from swipt.core.link_rates import INTERFERENCE_FORMS, downlink_rate, link_rates, rate_limits_infinite_antennas
from swipt.core.network import HarvestParams, apply_override, derive_stats, sweep_fields
from swipt.core.repositories import OUTPUT_FORMATS, load_json, write_json, write_table
from swipt.core.shot_noise import MarkModel, shotnoise_laplace, shotnoise_mean
from swipt.core.simulation import (MonteCarloExperiment, empirical_sweep, sample_cell_statistics,
                                   sample_shot_noise, trial_generator)
from swipt.models import CurveKind, CurveTable, EEBranch, RunManifest, SystemConfig, ValidationCheck
from swipt.utils import datasets, version_string
from swipt.utils.calc import log_grid, make_grid
from swipt.utils.constants import CI_Z, SQUARE_METERS_PER_SQUARE_KM
from swipt.utils.laplace import LaplaceEvaluator, inverse_laplace_cdf
from swipt.utils.log import LoggingMixin
from swipt.utils.readers import read_config_file
from swipt.utils.specfun import erfcx, upper_incomplete_gamma
from swipt.utils.stats import chi_square_pmf_test, ks_statistic, mean_confidence

log = logging.getLogger(__name__)

COMMANDS = ('stats', 'harvest-cdf', 'outage', 'mean-energy', 'rates', 'ee-optimize', 'simulate', 'validate',
            'reproduce-figure')
FIGURES = ('2a', '2b', '3a', '3b', '4a', '4b', '5a', '5b')

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICS = 3
EXIT_VALIDATION = 4

# default abscissae
THETA_GRID = (1e-8, 1e-2, 5)
LOAD_GRID = (0.25, 32.0, 15)
RHO_GRID = (0.05, 0.95, 19)
FIGURE5_BETAS = (0.3, 0.4, 0.55)
FIGURE2_INTENSITIES = {'2a': 1.0, '2b': 5.0}


def load_config(filename=None):
    if filename is None:
        filename = datasets.table1_fname
    return SystemConfig.from_dict(read_config_file(filename))


@dataclass(frozen=True)
class ExperimentSpec:
    """
    Description of one command-line run.

    Args:
        command (str): one of COMMANDS
        config_path (str): config file, defaults to the bundled two-tier configuration
        figure (str): figure preset of 'reproduce-figure'
        sweep (tuple): (field, grid) replacing the default abscissa
        trials (int): Monte Carlo trials per experiment, 0 for analytical curves only
        seed (int): experiment seed
        out (str): output directory, None keeps the tables in memory
        fmt (str): 'csv' or 'json'
        threads (int): worker processes of the Monte Carlo runs
        interference (str): downlink interference form of the rates and ee-optimize commands
    """
    command: str
    config_path: str = None
    figure: str = None
    sweep: tuple = None
    trials: int = 0
    seed: int = 0
    out: str = None
    fmt: str = 'csv'
    threads: int = 1
    interference: str = 'normalized'

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise SWIPTConfigException(f"unknown command {self.command!r}, choose from {', '.join(COMMANDS)}")
        if self.command == 'reproduce-figure' and self.figure not in FIGURES:
            raise SWIPTConfigException(f"unknown figure {self.figure!r}, choose from {', '.join(FIGURES)}")
        if self.fmt not in OUTPUT_FORMATS:
            raise SWIPTConfigException(f"unknown output format {self.fmt!r}")
        if self.interference not in INTERFERENCE_FORMS:
            raise SWIPTConfigException(f"unknown downlink interference form {self.interference!r}")
        if int(self.trials) != self.trials or self.trials < 0:
            raise SWIPTConfigException(f"trials must be a nonnegative integer, got {self.trials}")
        if self.threads < 1:
            raise SWIPTConfigException(f"threads must be positive, got {self.threads}")
        if self.seed < 0:
            raise SWIPTConfigException(f"seed must be nonnegative, got {self.seed}")
        if self.sweep is not None:
            field, grid = self.sweep
            grid = numpy.asarray(grid, dtype=float)
            if grid.ndim != 1 or grid.size == 0:
                raise SWIPTConfigException(f"sweep grid of {field} is empty")
            if numpy.any(numpy.diff(grid) <= 0):
                raise SWIPTConfigException(f"sweep grid of {field} must be strictly increasing")
            object.__setattr__(self, 'sweep', (str(field), grid))

    def to_dict(self):
        adict = dataclasses.asdict(self)
        if self.sweep is not None:
            adict['sweep'] = {'field': self.sweep[0], 'grid': self.sweep[1].tolist()}
        return adict

    @classmethod
    def from_dict(cls, adict):
        adict = dict(adict)
        sweep = adict.pop('sweep', None)
        if sweep is not None:
            adict['sweep'] = (sweep['field'], sweep['grid'])
        return cls(**adict)


@dataclass
class RunResult:
    """ Exit status, tables and manifest of a run. """
    exit_code: int
    tables: dict = dataclasses.field(default_factory=dict)
    manifest: RunManifest = None
    message: str = ''


def _curve_values(fn, params):
    return numpy.array([fn(p) for p in params])


class ExperimentRunner(LoggingMixin):
    """
    Executes an :class:`ExperimentSpec`.

    Args:
        spec (ExperimentSpec): what to run
        config (SystemConfig): resolved configuration, loaded from spec.config_path if omitted
    """
    def __init__(self, spec, config=None):
        self.spec = spec
        if config is None:
            if spec.command == 'reproduce-figure' and spec.figure in ('5a', '5b') and spec.config_path is None:
                config = load_config(datasets.table1_alpha25_fname)
            else:
                config = load_config(spec.config_path)
        self.config = config
        self.tables = {}
        self.results = {}
        self.failed = False

    # helpers

    def _sweep(self, default_field, default_grid, allow_theta=False):
        if self.spec.sweep is None:
            return default_field, default_grid
        field, grid = self.spec.sweep
        allowed = sweep_fields(self.config) + (['theta'] if allow_theta else [])
        if field not in allowed:
            raise SWIPTConfigException(f"sweep field {field!r} is not available for {self.spec.command}; "
                                       f"valid fields are {', '.join(allowed)}")
        return field, grid

    def _params_over(self, field, grid, config=None):
        config = config or self.config
        return [HarvestParams.from_config(apply_override(config, field, x)) for x in grid]

    def _monte_carlo(self, config, **kwargs):
        return MonteCarloExperiment(config, self.spec.trials, seed=self.spec.seed, threads=self.spec.threads,
                                    **kwargs)

    def _add_empirical(self, table, field, metrics, config=None):
        if self.spec.trials == 0:
            return table
        found = empirical_sweep(config or self.config, field, table.abscissae, list(metrics), self.spec.trials,
                                seed=self.spec.seed, threads=self.spec.threads)
        for metric, name in metrics.items():
            values, ci = found[metric]
            table.add_curve(name, values, CurveKind.EMPIRICAL, ci_halfwidth=ci)
        return table

    # commands

    def stats(self):
        """ Cell loads, non-void and association probabilities per tier, or their values over a sweep. """
        to_km2 = SQUARE_METERS_PER_SQUARE_KM
        if self.spec.sweep is None:
            s = derive_stats(self.config.network)
            totals = {'lambda_sigma_per_km2': s.lambda_sigma * to_km2,
                      'scheduled_user_intensity_per_km2': s.scheduled_user_intensity * to_km2}
            self.tables['stats'] = s.to_dataframe().assign(**totals)
            self.results.update(totals)
            return
        field, grid = self._sweep(None, None)
        rows = []
        for x in grid:
            s = derive_stats(apply_override(self.config, field, x).network)
            row = {field: x, 'lambda_sigma_per_km2': s.lambda_sigma * to_km2,
                   'scheduled_user_intensity_per_km2': s.scheduled_user_intensity * to_km2}
            for m, t in enumerate(s.tiers, start=1):
                row.update({f'cell_load_{m}': t.cell_load, f'nonvoid_prob_{m}': t.nonvoid_prob,
                            f'association_prob_{m}': t.association_prob})
            rows.append(row)
        self.tables['stats'] = pandas.DataFrame(rows)

    def cdf_table(self, config, thetas, name='harvest_cdf'):
        """
        Harvested-power CDF bound, its full-load limit and, under MRPA with α = 4, the lowest limit and its heavy-tail
        approximation, plus the empirical CDF when trials are requested.
        """
        p = HarvestParams.from_config(config)
        table = CurveTable('theta', thetas, name=name)
        table.add_curve('cdf_bound', harvest.harvested_power_cdf(thetas, p), CurveKind.ANALYTICAL_LOWER_BOUND,
                        cdf=True)
        table.add_curve('cdf_bound_full_load', harvest.harvested_power_cdf(thetas, p.with_full_load()),
                        CurveKind.ANALYTICAL_LIMIT, cdf=True)
        if p.is_mrpa and p.alpha == 4:
            table.add_curve('cdf_lowest_limit', harvest.harvested_power_cdf_lowest_limit(thetas, p),
                            CurveKind.ANALYTICAL_LIMIT, cdf=True)
            table.add_curve('cdf_heavy_tail', harvest.harvested_power_cdf_heavy_tail(thetas, p),
                            CurveKind.ANALYTICAL, cdf=True)
        if self.spec.trials > 0:
            cdf, ci = self._monte_carlo(config).harvested_power_cdf(thetas)
            table.add_curve('empirical', cdf, CurveKind.EMPIRICAL, ci_halfwidth=ci, cdf=True)
        return table

    def harvest_cdf(self):
        field, grid = self._sweep('theta', log_grid(*THETA_GRID), allow_theta=True)
        if field != 'theta':
            raise SWIPTConfigException("harvest-cdf is tabulated over theta; use --sweep theta=start:stop:points:log")
        self.tables['harvest_cdf'] = self.cdf_table(self.config, grid)

    def outage_table(self, field, grid, name='outage'):
        params = self._params_over(field, grid)
        table = CurveTable(field, grid, name=name)
        table.add_curve('eps_eh', _curve_values(harvest.outage_energy_harvesting, params), CurveKind.ANALYTICAL)
        table.add_curve('eps_eh_full_load',
                        _curve_values(lambda p: harvest.outage_energy_harvesting(p, full_load=True), params),
                        CurveKind.ANALYTICAL_LIMIT)
        table.add_curve('eps_ps', _curve_values(harvest.outage_self_powered, params), CurveKind.ANALYTICAL)
        table.add_curve('eps_ps_full_load',
                        _curve_values(lambda p: harvest.outage_self_powered(p, full_load=True), params),
                        CurveKind.ANALYTICAL_LIMIT)
        return self._add_empirical(table, field, {'outage_energy_harvesting': 'eps_eh_empirical',
                                                  'outage_self_powered': 'eps_ps_empirical'})

    def outage(self):
        field, grid = self._sweep('load.1', make_grid(*LOAD_GRID, log=True))
        self.tables['outage'] = self.outage_table(field, grid)

    def _add_energy_curves(self, table, params):
        table.add_curve('mean_energy', _curve_values(harvest.mean_harvested_energy, params), CurveKind.ANALYTICAL)
        table.add_curve('mean_energy_sparse', _curve_values(harvest.mean_harvested_energy_sparse, params),
                        CurveKind.ANALYTICAL)
        table.add_curve('mean_energy_dense', _curve_values(harvest.mean_harvested_energy_dense, params),
                        CurveKind.ANALYTICAL)
        table.add_curve('mean_energy_full_load', _curve_values(harvest.mean_harvested_energy_full_load, params),
                        CurveKind.ANALYTICAL_LIMIT)
        return table

    def mean_energy(self):
        field, grid = self._sweep('load.1', make_grid(*LOAD_GRID, log=True))
        table = self._add_energy_curves(CurveTable(field, grid, name='mean_energy'), self._params_over(field, grid))
        metrics = {'mean_harvested_energy': 'mean_energy_empirical'}
        self.tables['mean_energy'] = self._add_empirical(table, field, metrics)

    def _add_rate_curves(self, table, params, links=('dl', 'ul')):
        interference = self.spec.interference
        pairs = [link_rates(p, interference=interference) for p in params]
        full = [link_rates(p.with_full_load(), interference=interference) for p in params]
        limits = None
        if params[0].is_mrpa:
            limits = [rate_limits_infinite_antennas(p, interference=interference) for p in params]
        for link in links:
            attr = f'c_{link}'
            table.add_curve(attr, [getattr(r, attr) for r in pairs], CurveKind.ANALYTICAL_LOWER_BOUND)
            table.add_curve(f'{attr}_full_load', [getattr(r, attr) for r in full], CurveKind.ANALYTICAL_LIMIT)
            if limits is not None:
                table.add_curve(f'{attr}_infinite_antennas', [getattr(r, attr) for r in limits],
                                CurveKind.ANALYTICAL_LIMIT)
        return table

    def rates(self):
        field, grid = self._sweep('load.1', make_grid(*LOAD_GRID, log=True))
        table = self._add_rate_curves(CurveTable(field, grid, name='rates'), self._params_over(field, grid))
        self.results['units'] = 'nats/Hz'
        self.tables['rates'] = self._add_empirical(table, field, {'downlink_rate': 'c_dl_empirical',
                                                                  'uplink_rate': 'c_ul_empirical'})

    def ee_optimize(self):
        if self.spec.sweep is None:
            result = optimize(HarvestParams.from_config(self.config), interference=self.spec.interference)
            self.results['optimum'] = result.to_dict()
            self.tables['ee_optimum'] = pandas.DataFrame([_optimum_row(result)])
            return
        field, grid = self._sweep(None, None)
        rows = []
        for x, p in zip(grid, self._params_over(field, grid)):
            result = optimize(p, raise_on_infeasible=False, interference=self.spec.interference)
            rows.append({field: x, **_optimum_row(result)})
        self.tables['ee_optimum'] = pandas.DataFrame(rows)

    def simulate(self):
        experiment = self._monte_carlo(self.config)
        experiment.run()
        energy, energy_ci = experiment.mean_harvested_energy()
        eps_eh, eps_eh_ci = experiment.outage_energy_harvesting()
        eps_ps, eps_ps_ci = experiment.outage_self_powered()
        summary = {'trials': self.spec.trials, 'window_radius': experiment.options.window_radius,
                   'mean_energy': energy, 'mean_energy_ci': energy_ci, 'eps_eh': eps_eh, 'eps_eh_ci': eps_eh_ci,
                   'eps_ps': eps_ps, 'eps_ps_ci': eps_ps_ci, **experiment.ergodic_rates()}
        self.results['summary'] = summary
        self.tables['trials'] = experiment.to_dataframe()
        self.tables['summary'] = pandas.DataFrame([summary])

    def validate(self):
        suite = ValidationSuite(self.config, trials=self.spec.trials, seed=self.spec.seed, threads=self.spec.threads)
        checks = suite.run()
        self.tables['validation'] = suite.to_dataframe(checks)
        failed = [c.name for c in checks if not c.passed]
        self.results['failed_checks'] = failed
        self.failed = bool(failed)

    def reproduce_figure(self):
        figure = self.spec.figure
        if figure in FIGURE2_INTENSITIES:
            config = apply_override(self.config, 'tiers.1.intensity', FIGURE2_INTENSITIES[figure])
            field, grid = self._sweep('theta', log_grid(*THETA_GRID), allow_theta=True)
            self.tables[f'figure_{figure}'] = self.cdf_table(config, grid, name=f'figure_{figure}')
        elif figure in ('3a', '3b'):
            field, grid = self._sweep('load.1' if figure == '3a' else 'load.2', make_grid(*LOAD_GRID, log=True))
            self.tables[f'figure_{figure}'] = self.outage_table(field, grid, name=f'figure_{figure}')
        elif figure in ('4a', '4b'):
            self.tables[f'figure_{figure}'] = self._figure4(figure)
        elif figure == '5a':
            self.tables['figure_5a'] = self._figure5a()
        else:
            self.tables['figure_5b'], self.tables['figure_5b_optimum'] = self._figure5b()

    def _figure4(self, figure):
        field, grid = self._sweep('load.1', make_grid(*LOAD_GRID, log=True))
        params = self._params_over(field, grid)
        table = self._add_energy_curves(CurveTable(field, grid, name=f'figure_{figure}'), params)
        link = 'dl' if figure == '4a' else 'ul'
        self._add_rate_curves(table, params, links=(link,))
        if figure == '4b':
            table.add_curve('cell_load_2', [p.stats.cell_loads[1] for p in params], CurveKind.ANALYTICAL)
        metrics = {'mean_harvested_energy': 'mean_energy_empirical',
                   'downlink_rate' if link == 'dl' else 'uplink_rate': f'c_{link}_empirical'}
        return self._add_empirical(table, field, metrics)

    def _figure5a(self):
        p = HarvestParams.from_config(self.config)
        rhos = make_grid(*RHO_GRID)
        table = CurveTable('rho', rhos, name='figure_5a')
        for interference in INTERFERENCE_FORMS:
            surface = Optimizer(p, interference=interference).surface(rhos, FIGURE5_BETAS)
            prefix = 'zeta' if interference == 'normalized' else f'zeta_{interference}'
            for j, beta in enumerate(FIGURE5_BETAS):
                table.add_curve(f'{prefix}_beta_{beta:g}', surface[:, j], CurveKind.ANALYTICAL)
        return table

    def _figure5b(self):
        p = HarvestParams.from_config(self.config)
        rhos = make_grid(*RHO_GRID)
        betas = make_grid(*RHO_GRID)
        sets = feasible_sets(p)
        rows, optima = [], []
        for interference in INTERFERENCE_FORMS:
            optimizer = Optimizer(p, interference=interference)
            surface = optimizer.surface(rhos, betas)
            rows.extend({'interference': interference, 'rho': r, 'beta': b, 'zeta': surface[i, j],
                         'feasible': bool(sets.contains(r, b))}
                        for i, r in enumerate(rhos) for j, b in enumerate(betas))
            result = optimizer.optimize(raise_on_infeasible=False)
            optima.append({'interference': interference, **_optimum_row(result)})
            key = 'optimum' if interference == 'normalized' else f'optimum_{interference}'
            self.results[key] = result.to_dict()
        return pandas.DataFrame(rows), pandas.DataFrame(optima)

    def execute(self):
        handlers = {
            'stats': self.stats,
            'harvest-cdf': self.harvest_cdf,
            'outage': self.outage,
            'mean-energy': self.mean_energy,
            'rates': self.rates,
            'ee-optimize': self.ee_optimize,
            'simulate': self.simulate,
            'validate': self.validate,
            'reproduce-figure': self.reproduce_figure
        }
        self.log.info(f"running {self.spec.command}" + (f" {self.spec.figure}" if self.spec.figure else ''))
        handlers[self.spec.command]()
        return self.tables

    def write(self, manifest):
        out = self.spec.out
        os.makedirs(out, exist_ok=True)
        for name, table in self.tables.items():
            write_table(table, os.path.join(out, f'{name}.{self.spec.fmt}'), fmt=self.spec.fmt)
        write_json(manifest, os.path.join(out, 'manifest.json'))


def _optimum_row(result):
    sets = result.feasible_sets
    return {'rho_star': result.rho_star, 'beta_star': result.beta_star, 'zeta_star': result.zeta_star,
            'branch': result.branch.value, 'c_dl': result.c_dl, 'c_ul': result.c_ul,
            'ratio_threshold': result.ratio_threshold, 'grid_max': result.grid_max,
            'rho_lower': sets.rho_lower, 'rho_upper': sets.rho_upper}


def run(spec, config=None):
    """
    Runs a command and writes its artifacts.

    Args:
        spec (ExperimentSpec): what to run
        config (SystemConfig): configuration, loaded from spec.config_path if omitted

    Returns:
        RunResult: exit code 0 on success, 2 for configuration errors, 3 for numerical failures and 4 for failed
        validation checks
    """
    t0 = time.time()
    try:
        runner = ExperimentRunner(spec, config=config)
        tables = runner.execute()
        manifest = RunManifest(command=spec.command, config=runner.config.to_dict(), seed=spec.seed,
                               version=version_string(), wall_time=time.time() - t0, options=spec.to_dict(),
                               results=runner.results)
        if spec.out is not None:
            runner.write(manifest)
    except (SWIPTConfigException, SWIPTValueException) as e:
        log.error(f"configuration error: {e}")
        return RunResult(EXIT_CONFIG, message=str(e))
    except SWIPTValidationException as e:
        log.error(f"validation failed: {e}")
        return RunResult(EXIT_VALIDATION, message=str(e))
    except SWIPTException as e:
        log.error(f"numerical failure: {e}")
        return RunResult(EXIT_NUMERICS, message=str(e))
    except OSError as e:
        log.error(f"unable to write output: {e}")
        return RunResult(EXIT_CONFIG, message=str(e))
    if runner.failed:
        return RunResult(EXIT_VALIDATION, tables, manifest, message='validation checks failed')
    return RunResult(EXIT_OK, tables, manifest)


def replay(manifest, out=None):
    """
    Repeats the run recorded in a manifest.

    Args:
        manifest (RunManifest or str): manifest or path to manifest.json
        out (str): output directory of the repeated run, None keeps the tables in memory

    Returns:
        RunResult: result of the repeated run
    """
    if isinstance(manifest, str):
        manifest = load_json(RunManifest, manifest)
    options = dict(manifest.options)
    options['out'] = out
    spec = ExperimentSpec.from_dict(options)
    return run(spec, config=SystemConfig.from_dict(manifest.config))


def _check(name, value, reference, tolerance, passed, detail=''):
    return ValidationCheck(name=name, passed=bool(passed), value=float(value), reference=float(reference),
                           tolerance=float(tolerance), detail=detail)


def _within_se(name, estimate, halfwidth, reference, detail=''):
    # halfwidths are reported at CI_Z standard errors
    slack = 3.0 * halfwidth / CI_Z
    return _check(name, estimate, reference, slack, abs(estimate - reference) <= slack, detail)


class ValidationSuite(LoggingMixin):
    """
    Invariant and consistency checks of the analytical modules and, with trials > 0, Monte Carlo checks against them.

    Args:
        config (SystemConfig): configuration checked by the config-dependent checks
        trials (int): Monte Carlo trials, 0 runs the analytical checks only
        seed (int): seed of all random draws
        threads (int): worker processes
        checks (list): names of the checks to run, all by default
    """
    ANALYTICAL_CHECKS = ('incomplete_gamma_recurrence', 'erfcx_series', 'inverse_laplace', 'cell_load_pmf',
                         'shot_noise_campbell', 'cdf_paths', 'downlink_paths', 'sparse_mean_energy',
                         'ee_optimizer')
    MONTE_CARLO_CHECKS = ('void_fraction', 'users_per_bs', 'association_distance', 'harvest_cdf_bracketing',
                          'mean_energy_nba', 'rate_bracketing', 'shot_noise_monte_carlo')

    def __init__(self, config, trials=0, seed=0, threads=1, checks=None):
        self.config = config
        self.trials = int(trials)
        self.seed = int(seed)
        self.threads = int(threads)
        names = self.ANALYTICAL_CHECKS + (self.MONTE_CARLO_CHECKS if self.trials > 0 else ())
        if checks is not None:
            unknown = set(checks) - set(self.ANALYTICAL_CHECKS + self.MONTE_CARLO_CHECKS)
            if unknown:
                raise SWIPTConfigException(f"unknown validation checks {sorted(unknown)}")
            names = [n for n in names if n in checks]
        self.names = list(names)
        self._experiment = None

    @property
    def params(self):
        return HarvestParams.from_config(self.config)

    def _alpha4_config(self):
        if self.config.network.pathloss_exponent == 4:
            return self.config
        return apply_override(self.config, 'network.pathloss_exponent', 4.0)

    def experiment(self):
        if self._experiment is None:
            self._experiment = MonteCarloExperiment(self.config, self.trials, seed=self.seed, threads=self.threads)
            self._experiment.run()
        return self._experiment

    def run(self):
        """
        Returns:
            list: ValidationCheck of every check, failures included
        """
        checks = []
        for name in self.names:
            try:
                found = getattr(self, f'check_{name}')()
            except SWIPTException as e:
                found = [_check(name, numpy.nan, numpy.nan, numpy.nan, False, detail=str(e))]
            for c in found:
                self.log.log(logging.INFO if c.passed else logging.WARNING,
                             f"{c.name}: {'passed' if c.passed else 'FAILED'} (value {c.value:.6g}, "
                             f"reference {c.reference:.6g}, tolerance {c.tolerance:.3g})")
            checks.extend(found)
        return checks

    @staticmethod
    def to_dataframe(checks):
        return pandas.DataFrame([c.to_dict() for c in checks])

    # analytical checks

    def check_incomplete_gamma_recurrence(self, points=1000):
        rng = trial_generator(self.seed, 0, key=(1,))
        a = rng.uniform(-5.0, 5.0, points)
        b = rng.uniform(0.01, 20.0, points)
        worst = 0.0
        for ai, bi in zip(a, b):
            lhs = upper_incomplete_gamma(ai + 1.0, bi)
            head = ai * upper_incomplete_gamma(ai, bi)
            tail = bi ** ai * numpy.exp(-bi)
            worst = max(worst, abs(lhs - head - tail) / max(abs(lhs), abs(head), abs(tail)))
        return [_check('incomplete_gamma_recurrence', worst, 0.0, 1e-9, worst <= 1e-9,
                       f'{points} random points with a in [-5, 5]')]

    def check_erfcx_series(self):
        small = numpy.linspace(0.0, 3.0, 61)
        reference = numpy.exp(small ** 2) * scipy.special.erfc(small)
        worst = numpy.max(numpy.abs(erfcx(small) / reference - 1.0))
        large = numpy.logspace(numpy.log10(20.0), 3.0, 40)
        series = numpy.zeros_like(large)
        term = numpy.ones_like(large)
        for n in range(12):
            series += term
            term = -term * (2 * n + 1) / (2.0 * large ** 2)
        series /= large * numpy.sqrt(numpy.pi)
        worst = max(worst, numpy.max(numpy.abs(erfcx(large) / series - 1.0)))
        return [_check('erfcx_series', worst, 0.0, 1e-12, worst <= 1e-12, 'direct form below 3, asymptotic above 20')]

    def check_inverse_laplace(self):
        thetas = numpy.array([0.1, 0.5, 1.0, 2.0, 5.0])
        cases = [(LaplaceEvaluator.exponential(1.0), -numpy.expm1(-thetas)),
                 (LaplaceEvaluator.gamma(2.5, 1.0), scipy.special.gammainc(2.5, thetas))]
        checks = []
        for L, exact in cases:
            found = numpy.array([inverse_laplace_cdf(L, t) for t in thetas])
            error = numpy.max(numpy.abs(found - exact))
            checks.append(_check(f'inverse_laplace[{L.name}]', error, 0.0, 1e-6, error <= 1e-6))
        return checks

    def check_cell_load_pmf(self):
        checks = []
        for load in (0.5, 2.0, 8.0):
            pmf = user_count_pmf_table(load)
            error = max(abs(pmf.sum() - 1.0), abs(1.0 - pmf[0] - nonvoid_probability(load)))
            checks.append(_check(f'cell_load_pmf[{load:g}]', error, 0.0, 1e-10, error <= 1e-10))
        return checks

    def check_shot_noise_campbell(self):
        intensity, alpha = 1e-4, 4.0
        marks = MarkModel.exponential()
        mean = shotnoise_mean(1, intensity, alpha, marks)
        campbell = 2.0 * numpy.pi * intensity / (alpha - 2.0)
        s = 1e-6
        slope = (1.0 - shotnoise_laplace(1, s, intensity, alpha, marks)) / s
        tol = 1e-10 * campbell
        return [_check('shot_noise_campbell', mean, campbell, tol, abs(mean - campbell) <= tol),
                _check('shot_noise_laplace_slope', slope, mean, 1e-3 * mean, abs(slope - mean) <= 1e-3 * mean)]

    def check_cdf_paths(self):
        p = HarvestParams.from_config(self._alpha4_config())
        thetas = log_grid(1e-7, 1e-3, 2)
        closed = harvest.harvested_power_cdf(thetas, p, method='alpha4')
        general = harvest.harvested_power_cdf(thetas, p, method='general')
        error = numpy.max(numpy.abs(closed - general))
        return [_check('cdf_paths', error, 0.0, 1e-4, error <= 1e-4, 'general inversion vs closed α = 4 path')]

    def check_downlink_paths(self):
        p = HarvestParams.from_config(self._alpha4_config())
        if p.network.noise_power == 0:
            p = HarvestParams.from_config(apply_override(p.config, 'network.noise_power', 1e-10))
        closed = downlink_rate(p, method='alpha4')
        general = downlink_rate(p, method='general')
        error = abs(closed / general - 1.0)
        return [_check('downlink_paths', error, 0.0, 1e-3, error <= 1e-3, 'erfcx vs general downlink rate')]

    def check_sparse_mean_energy(self):
        p = self.params
        scale = 1.0
        while numpy.pi * p.lambda_sigma * scale >= 1e-3:
            scale /= 10.0
        config = self.config
        for m in range(1, config.network.n_tiers + 1):
            tier = config.network.tiers[m - 1]
            per_km2 = tier.intensity * scale * SQUARE_METERS_PER_SQUARE_KM
            config = apply_override(config, f'tiers.{m}.intensity', per_km2)
        p = HarvestParams.from_config(config)
        exact = harvest.mean_harvested_energy(p)
        sparse = harvest.mean_harvested_energy_sparse(p, load_aware=False)
        error = abs(sparse / exact - 1.0)
        return [_check('sparse_mean_energy', sparse, exact, 0.05, error <= 0.05,
                       f'πλ_Σ = {numpy.pi * p.lambda_sigma:.3g}')]

    def check_ee_optimizer(self):
        config = self.config
        if config.network.pathloss_exponent == 4:
            config = load_config(datasets.table1_alpha25_fname)
        result = Optimizer(HarvestParams.from_config(config)).optimize(raise_on_infeasible=False)
        feasible = result.branch != EEBranch.INFEASIBLE
        return [_check('ee_optimizer', result.zeta_star, result.grid_max, 1e-6, feasible,
                       f'ρ* = {result.rho_star:.3f}, β* = {result.beta_star:.3f}, branch {result.branch.value}')]

    # Monte Carlo checks

    def check_void_fraction(self):
        counts = sample_cell_statistics(self.config.network, max(20, self.trials // 50), seed=self.seed)
        q = derive_stats(self.config.network).nonvoid_probs
        checks = []
        for m, c in enumerate(counts):
            if len(c) < 30:
                continue
            void = numpy.mean(c == 0)
            se = numpy.sqrt(max(void * (1.0 - void), 1.0 / len(c)) / len(c))
            checks.append(_check(f'void_fraction[tier {m + 1}]', void, 1.0 - q[m], 3.0 * se,
                                 abs(void - (1.0 - q[m])) <= 3.0 * se, f'{len(c)} base stations'))
        return checks

    def check_users_per_bs(self):
        counts = sample_cell_statistics(self.config.network, max(20, self.trials // 50), seed=self.seed)
        loads = derive_stats(self.config.network).cell_loads
        checks = []
        for m, c in enumerate(counts):
            if len(c) < 50:
                continue
            _, pvalue = chi_square_pmf_test(c, user_count_pmf_table(loads[m]))
            checks.append(_check(f'users_per_bs[tier {m + 1}]', pvalue, 0.01, 0.0, pvalue > 0.01, 'chi-square p-value'))
        return checks

    def check_association_distance(self):
        samples = self.experiment().column('association_distance')
        lambda_sigma = self.params.lambda_sigma
        statistic, pvalue = ks_statistic(samples, lambda x: association_distance_cdf(numpy.maximum(x, 0.0),
                                                                                      lambda_sigma))
        return [_check('association_distance', statistic, 0.0, pvalue, pvalue > 0.01,
                       'Kolmogorov-Smirnov statistic, p-value as tolerance')]

    def check_harvest_cdf_bracketing(self):
        p = self.params
        thetas = log_grid(1e-8, 1e-3, 4)
        bound = harvest.harvested_power_cdf(thetas, p)
        cdf, ci = self.experiment().harvested_power_cdf(thetas)
        slack = 3.0 * ci / CI_Z + 1.0 / self.trials
        excess = numpy.max(bound - cdf - slack)
        return [_check('harvest_cdf_bracketing', excess, 0.0, 0.0, excess <= 0.0,
                       'analytical bound minus empirical CDF beyond 3 SE')]

    def check_mean_energy_nba(self):
        config = self.config
        for m in range(1, config.network.n_tiers + 1):
            tiers = list(config.network.tiers)
            tiers[m - 1] = dataclasses.replace(tiers[m - 1], association_weight='NBA')
            config = dataclasses.replace(config, network=dataclasses.replace(config.network, tiers=tuple(tiers)))
        experiment = MonteCarloExperiment(config, self.trials, seed=self.seed, threads=self.threads, key=(2,))
        mean, ci = experiment.mean_harvested_energy()
        exact = harvest.mean_harvested_energy(HarvestParams.from_config(config))
        return [_within_se('mean_energy_nba', mean, ci, exact, 'nearest-BS association')]

    def check_rate_bracketing(self):
        pair = link_rates(self.params)
        rates = self.experiment().ergodic_rates()
        checks = []
        for link in ('dl', 'ul'):
            bound = getattr(pair, f'c_{link}')
            estimate = rates[f'c_{link}']
            slack = 3.0 * rates[f'c_{link}_ci'] / CI_Z
            checks.append(_check(f'rate_bracketing[{link}]', estimate, bound, slack, bound <= estimate + slack,
                                 'analytical lower bound against the empirical ergodic rate'))
        return checks

    def check_shot_noise_monte_carlo(self):
        intensity = 1e-4
        marks = MarkModel.exponential()
        checks = []
        for n in (1, 2):
            for alpha in (3.0, 4.0):
                samples = sample_shot_noise(n, intensity, alpha, marks, self.trials,
                                            seed=trial_generator(self.seed, n, key=(3, int(alpha))))
                mean, ci = mean_confidence(samples)
                checks.append(_within_se(f'shot_noise_mean[n={n}, α={alpha:g}]', mean, ci,
                                         shotnoise_mean(n, intensity, alpha, marks)))
                s = 1.0 / shotnoise_mean(n, intensity, alpha, marks)
                value, ci = mean_confidence(numpy.exp(-s * samples))
                checks.append(_within_se(f'shot_noise_laplace[n={n}, α={alpha:g}]', value, ci,
                                         shotnoise_laplace(n, s, intensity, alpha, marks)))
        return checks
