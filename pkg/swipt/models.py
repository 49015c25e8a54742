"""
Value types of the package: network and receiver parameters, derived network statistics, result tables and
simulation outcomes.

Configuration types are frozen and validated when they are constructed. Intensities are stored in SI units
(per square meter). The file interface uses per square kilometer and converts through :meth:`TierConfig.from_dict`.
"""
import dataclasses
import enum
import math
from dataclasses import dataclass, field

import numpy
import pandas

from swipt.core.exceptions import SWIPTConfigException, SWIPTValueException
from swipt.utils import keys_in_dict
from swipt.utils.constants import DEFAULT_BETA_MAX, DEFAULT_RHO_MIN, KM2_TO_M2, NATS_PER_BIT

ASSOCIATION_RULES = ('MRPA', 'NBA')


def _require(adict, key, where):
    try:
        return adict[key]
    except KeyError:
        raise SWIPTConfigException(f"missing required config field '{where}{key}'")


def _number(value, name, integer=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SWIPTConfigException(f"config field '{name}' must be a number, got {value!r}")
    if integer and int(value) != value:
        raise SWIPTConfigException(f"config field '{name}' must be an integer, got {value!r}")
    if not math.isfinite(value):
        raise SWIPTConfigException(f"config field '{name}' must be finite, got {value!r}")
    return int(value) if integer else float(value)


def _check_open_unit(value, name, closed_right=False):
    if not (0.0 < value < 1.0 or (closed_right and value == 1.0)):
        interval = '(0, 1]' if closed_right else '(0, 1)'
        raise SWIPTConfigException(f"config field '{name}' must lie in {interval}, got {value}")


@dataclass(frozen=True)
class TierConfig:
    """
    Parameters of one tier of base stations.

    Args:
        transmit_power (float): transmit power P_m in watts
        intensity (float): base-station intensity λ_m per square meter
        antennas (int): number of transmit antennas N_m
        association_weight (float or str): weight w_m of the association rule, or 'MRPA' (w_m = P_m) or 'NBA' (w_m = 1)
        hardware_power (float): hardware power consumption P_m,on in watts
        name (str): optional label
    """
    transmit_power: float
    intensity: float
    antennas: int
    association_weight: object = 'MRPA'
    hardware_power: float = 0.0
    name: str = ''

    def __post_init__(self):
        label = self.name or 'tier'
        if not self.transmit_power > 0:
            raise SWIPTConfigException(f"{label}: transmit_power must be positive, got {self.transmit_power}")
        if not self.intensity > 0:
            raise SWIPTConfigException(f"{label}: intensity must be positive, got {self.intensity}")
        if int(self.antennas) != self.antennas or self.antennas < 1:
            raise SWIPTConfigException(f"{label}: antennas must be an integer >= 1, got {self.antennas}")
        if isinstance(self.association_weight, str):
            if self.association_weight not in ASSOCIATION_RULES:
                raise SWIPTConfigException(
                    f"{label}: association_weight must be a positive number, 'MRPA' or 'NBA', "
                    f"got {self.association_weight!r}"
                )
        elif not self.association_weight > 0:
            raise SWIPTConfigException(f"{label}: association_weight must be positive, got {self.association_weight}")
        if not self.hardware_power >= 0:
            raise SWIPTConfigException(f"{label}: hardware_power must be nonnegative, got {self.hardware_power}")

    @property
    def weight(self):
        """ Numerical association weight w_m. """
        if self.association_weight == 'MRPA':
            return float(self.transmit_power)
        if self.association_weight == 'NBA':
            return 1.0
        return float(self.association_weight)

    def to_dict(self):
        return {
            'name': self.name,
            'transmit_power': self.transmit_power,
            'intensity_per_m2': self.intensity,
            'antennas': self.antennas,
            'association_weight': self.association_weight,
            'hardware_power': self.hardware_power
        }

    @classmethod
    def from_dict(cls, adict, where='tiers[0].'):
        """
        Builds a tier from a config table. The intensity is read from 'intensity' in BSs/km² or from 'intensity_per_m2'.
        """
        found = keys_in_dict(adict, ['intensity', 'intensity_per_m2'])
        if not found:
            raise SWIPTConfigException(f"missing required config field '{where}intensity'")
        if 'intensity_per_m2' in found:
            intensity = _number(adict['intensity_per_m2'], where + 'intensity_per_m2')
        else:
            intensity = _number(adict['intensity'], where + 'intensity') * KM2_TO_M2
        weight = adict.get('association_weight', 'MRPA')
        if isinstance(weight, str):
            weight = weight.upper()
        else:
            weight = _number(weight, where + 'association_weight')
        return cls(
            transmit_power=_number(_require(adict, 'transmit_power', where), where + 'transmit_power'),
            intensity=intensity,
            antennas=_number(_require(adict, 'antennas', where), where + 'antennas', integer=True),
            association_weight=weight,
            hardware_power=_number(adict.get('hardware_power', 0.0), where + 'hardware_power'),
            name=str(adict.get('name', ''))
        )


@dataclass(frozen=True)
class NetworkConfig:
    """
    Multi-tier network: tiers, user intensity μ per square meter, path-loss exponent α and noise power σ² in watts.
    """
    tiers: tuple
    user_intensity: float
    pathloss_exponent: float
    noise_power: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, 'tiers', tuple(self.tiers))
        if len(self.tiers) < 1:
            raise SWIPTConfigException("network needs at least one tier")
        if not self.user_intensity > 0:
            raise SWIPTConfigException(f"network.user_intensity must be positive, got {self.user_intensity}")
        if not self.pathloss_exponent > 2:
            raise SWIPTConfigException(f"network.pathloss_exponent must exceed 2, got {self.pathloss_exponent}")
        if not self.noise_power >= 0:
            raise SWIPTConfigException(f"network.noise_power must be nonnegative, got {self.noise_power}")

    @property
    def n_tiers(self):
        return len(self.tiers)

    @property
    def delta(self):
        """ 2/α """
        return 2.0 / self.pathloss_exponent

    @property
    def powers(self):
        return numpy.array([t.transmit_power for t in self.tiers])

    @property
    def intensities(self):
        return numpy.array([t.intensity for t in self.tiers])

    @property
    def antennas(self):
        return numpy.array([t.antennas for t in self.tiers])

    @property
    def weights(self):
        return numpy.array([t.weight for t in self.tiers])

    @property
    def hardware_powers(self):
        return numpy.array([t.hardware_power for t in self.tiers])

    @property
    def is_mrpa(self):
        return bool(numpy.allclose(self.weights, self.powers, rtol=1e-12, atol=0.0))

    def to_dict(self):
        return {
            'pathloss_exponent': self.pathloss_exponent,
            'user_intensity_per_m2': self.user_intensity,
            'noise_power': self.noise_power,
            'tiers': [t.to_dict() for t in self.tiers]
        }

    @classmethod
    def from_dict(cls, adict):
        where = 'network.'
        found = keys_in_dict(adict, ['user_intensity', 'user_intensity_per_m2'])
        if not found:
            raise SWIPTConfigException("missing required config field 'network.user_intensity'")
        if 'user_intensity_per_m2' in found:
            mu = _number(adict['user_intensity_per_m2'], where + 'user_intensity_per_m2')
        else:
            mu = _number(adict['user_intensity'], where + 'user_intensity') * KM2_TO_M2
        tiers = _require(adict, 'tiers', where)
        if not isinstance(tiers, list) or not tiers:
            raise SWIPTConfigException("config field 'network.tiers' must be a nonempty list of tables")
        return cls(
            tiers=tuple(TierConfig.from_dict(t, where=f'network.tiers[{i}].') for i, t in enumerate(tiers)),
            user_intensity=mu,
            pathloss_exponent=_number(_require(adict, 'pathloss_exponent', where), where + 'pathloss_exponent'),
            noise_power=_number(adict.get('noise_power', 0.0), where + 'noise_power')
        )


@dataclass(frozen=True)
class SwiptConfig:
    """
    Receiver-side parameters of the harvest-then-transmit protocol.

    Args:
        power_split (float): power splitting factor ρ, the fraction of received power used for decoding
        downlink_fraction (float): fraction β of the slot used for the downlink
        conversion_efficiency (float): RF-to-DC efficiency η
        slot_duration (float): slot duration τ in seconds
        user_power (float): uplink transmit power Q in watts
        min_harvest_power (float): circuit activation threshold of the harvester in watts
        max_eh_outage (float): largest tolerated outage probability of energy harvesting
        beta_max (float): upper bound of β in the optimization
        rho_min (float): lower bound of ρ in the optimization
    """
    power_split: float
    downlink_fraction: float
    conversion_efficiency: float
    slot_duration: float
    user_power: float
    min_harvest_power: float
    max_eh_outage: float
    beta_max: float = DEFAULT_BETA_MAX
    rho_min: float = DEFAULT_RHO_MIN

    def __post_init__(self):
        _check_open_unit(self.power_split, 'swipt.power_split')
        _check_open_unit(self.downlink_fraction, 'swipt.downlink_fraction')
        _check_open_unit(self.conversion_efficiency, 'swipt.conversion_efficiency')
        _check_open_unit(self.max_eh_outage, 'swipt.max_eh_outage')
        _check_open_unit(self.beta_max, 'swipt.beta_max', closed_right=True)
        _check_open_unit(self.rho_min, 'swipt.rho_min')
        for name in ('slot_duration', 'user_power', 'min_harvest_power'):
            if not getattr(self, name) > 0:
                raise SWIPTConfigException(f"config field 'swipt.{name}' must be positive, got {getattr(self, name)}")

    def to_dict(self):
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, adict):
        where = 'swipt.'
        required = ('power_split', 'downlink_fraction', 'conversion_efficiency', 'slot_duration', 'user_power',
                    'min_harvest_power', 'max_eh_outage')
        kwargs = {key: _number(_require(adict, key, where), where + key) for key in required}
        kwargs['beta_max'] = _number(adict.get('beta_max', DEFAULT_BETA_MAX), where + 'beta_max')
        kwargs['rho_min'] = _number(adict.get('rho_min', DEFAULT_RHO_MIN), where + 'rho_min')
        return cls(**kwargs)


@dataclass(frozen=True)
class SystemConfig:
    """ Complete parameter set: the network and the receiver. """
    network: NetworkConfig
    swipt: SwiptConfig
    name: str = ''

    def to_dict(self):
        return {'name': self.name, 'network': self.network.to_dict(), 'swipt': self.swipt.to_dict()}

    @classmethod
    def from_dict(cls, adict):
        return cls(network=NetworkConfig.from_dict(_require(adict, 'network', '')),
                   swipt=SwiptConfig.from_dict(_require(adict, 'swipt', '')),
                   name=str(adict.get('name', '')))


@dataclass(frozen=True)
class TierStats:
    """ Cell load ℓ_m, non-void probability q_m and association probability ϑ_m of one tier. """
    cell_load: float
    nonvoid_prob: float
    association_prob: float

    def to_dict(self):
        return dataclasses.asdict(self)


@dataclass(frozen=True)
class NetworkStats:
    """
    Derived statistics of a network. lambda_sigma is Σ w_m^(2/α) λ_m and scheduled_user_intensity is Σ q_m λ_m.
    """
    lambda_sigma: float
    scheduled_user_intensity: float
    tiers: tuple

    @property
    def cell_loads(self):
        return numpy.array([t.cell_load for t in self.tiers])

    @property
    def nonvoid_probs(self):
        return numpy.array([t.nonvoid_prob for t in self.tiers])

    @property
    def association_probs(self):
        return numpy.array([t.association_prob for t in self.tiers])

    def to_dict(self):
        return {
            'lambda_sigma': self.lambda_sigma,
            'scheduled_user_intensity': self.scheduled_user_intensity,
            'tiers': [t.to_dict() for t in self.tiers]
        }

    def to_dataframe(self):
        df = pandas.DataFrame([t.to_dict() for t in self.tiers])
        df.insert(0, 'tier', numpy.arange(1, len(self.tiers) + 1))
        return df


class CurveKind(str, enum.Enum):
    ANALYTICAL = 'analytical'
    ANALYTICAL_LOWER_BOUND = 'analytical_lower_bound'
    ANALYTICAL_LIMIT = 'analytical_limit'
    EMPIRICAL = 'empirical'


@dataclass
class Curve:
    name: str
    values: numpy.ndarray
    kind: CurveKind
    ci_halfwidth: numpy.ndarray = None


class CurveTable:
    """
    Grid of abscissae with any number of analytical or empirical curves evaluated on it.

    Args:
        abscissa_name (str): column name of the abscissa, e.g., 'theta'
        abscissae (array-like): strictly increasing grid
        name (str): label of the table
    """
    def __init__(self, abscissa_name, abscissae, name=''):
        abscissae = numpy.asarray(abscissae, dtype=float)
        if abscissae.ndim != 1 or abscissae.size == 0:
            raise SWIPTValueException("abscissae must be a nonempty one-dimensional array")
        if numpy.any(numpy.diff(abscissae) <= 0):
            raise SWIPTValueException("abscissae must be strictly increasing")
        self.abscissa_name = abscissa_name
        self.abscissae = abscissae
        self.name = name
        self.curves = []

    def __len__(self):
        return self.abscissae.size

    def __getitem__(self, name):
        for curve in self.curves:
            if curve.name == name:
                return curve
        raise KeyError(name)

    @property
    def curve_names(self):
        return [c.name for c in self.curves]

    def add_curve(self, name, values, kind, ci_halfwidth=None, cdf=False, tolerance=1e-6):
        """
        Adds a curve. CDF curves are checked to lie in [0, 1] and to be nondecreasing within tolerance.

        Returns:
            CurveTable: self, so calls can be chained
        """
        values = numpy.asarray(values, dtype=float)
        if values.shape != self.abscissae.shape:
            raise SWIPTValueException(f"curve {name} has {values.size} values for {self.abscissae.size} abscissae")
        if name in self.curve_names:
            raise SWIPTValueException(f"curve {name} already exists")
        if cdf:
            if numpy.any(values < -tolerance) or numpy.any(values > 1 + tolerance):
                raise SWIPTValueException(f"CDF curve {name} leaves [0, 1]")
            if numpy.any(numpy.diff(values) < -tolerance):
                raise SWIPTValueException(f"CDF curve {name} is not nondecreasing")
        if ci_halfwidth is not None:
            ci_halfwidth = numpy.asarray(ci_halfwidth, dtype=float)
            if ci_halfwidth.shape != values.shape or numpy.any(ci_halfwidth < 0):
                raise SWIPTValueException(f"invalid confidence half-widths for curve {name}")
        self.curves.append(Curve(name, values, CurveKind(kind), ci_halfwidth))
        return self

    def to_dataframe(self):
        """
        Tabular form with one row per abscissa, one column per curve and a '<name>_ci' column after each curve with
        confidence half-widths.
        """
        columns = {self.abscissa_name: self.abscissae}
        for curve in self.curves:
            columns[curve.name] = curve.values
            if curve.ci_halfwidth is not None:
                columns[f'{curve.name}_ci'] = curve.ci_halfwidth
        return pandas.DataFrame(columns)

    def to_dict(self):
        return {
            'name': self.name,
            'abscissa_name': self.abscissa_name,
            'abscissae': self.abscissae.tolist(),
            'curves': [{
                'name': c.name,
                'kind': c.kind.value,
                'values': c.values.tolist(),
                'ci_halfwidth': None if c.ci_halfwidth is None else c.ci_halfwidth.tolist()
            } for c in self.curves]
        }

    @classmethod
    def from_dict(cls, adict):
        new = cls(adict['abscissa_name'], adict['abscissae'], name=adict.get('name', ''))
        for c in adict['curves']:
            new.add_curve(c['name'], c['values'], c['kind'], ci_halfwidth=c['ci_halfwidth'])
        return new


@dataclass(frozen=True)
class RatePair:
    """
    Downlink and uplink ergodic rates, by default in nats/Hz.
    """
    c_dl: float
    c_ul: float
    units: str = 'nats'
    lower_bound: bool = True

    def __post_init__(self):
        if not (self.c_dl >= 0 and self.c_ul >= 0):
            raise SWIPTValueException(f"rates must be nonnegative, got {self.c_dl} and {self.c_ul}")

    def in_bits(self):
        if self.units == 'bits':
            return self
        return RatePair(self.c_dl / NATS_PER_BIT, self.c_ul / NATS_PER_BIT, units='bits', lower_bound=self.lower_bound)

    def to_dict(self):
        return dataclasses.asdict(self)


class EEBranch(str, enum.Enum):
    UNDERLINE_SET = 'underline_set'
    OVERLINE_SET = 'overline_set'
    INFEASIBLE = 'infeasible'
    NEITHER_SET_NONEMPTY = 'neither_set_nonempty'


@dataclass(frozen=True)
class FeasibleSets:
    """
    Feasible region of the energy-efficiency problem.

    ρ ranges over [rho_lower, rho_upper]. For a given ρ the downlink fraction ranges over [beta_min(ρ), beta_max],
    where beta_min(ρ) = Q/(Q + η(1-ρ)E[P_dl]) makes the mean harvested energy cover the uplink energy.

    Args:
        rho_lower (float): smallest feasible ρ
        rho_upper (float): largest feasible ρ
        beta_max (float): upper bound of β
        mean_received_power (float): ρ-free mean received power E[P_dl] in watts
        conversion_efficiency (float): η
        user_power (float): Q in watts
        rho_outage (float): largest ρ meeting the harvesting-outage constraint
        rho_sustain (float): largest ρ for which beta_min(ρ) ≤ beta_max
        reason (str): why the region is empty, if it is
    """
    rho_lower: float
    rho_upper: float
    beta_max: float
    mean_received_power: float
    conversion_efficiency: float
    user_power: float
    rho_outage: float = float('nan')
    rho_sustain: float = float('nan')
    reason: str = ''

    @property
    def empty(self):
        return bool(self.reason) or not self.rho_lower <= self.rho_upper

    def beta_min(self, rho):
        q = self.user_power
        return q / (q + self.conversion_efficiency * (1.0 - numpy.asarray(rho)) * self.mean_received_power)

    def rho_max(self, beta):
        beta = numpy.asarray(beta)
        return 1.0 - (1.0 - beta) * self.user_power / (self.conversion_efficiency * beta * self.mean_received_power)

    @property
    def beta_lower(self):
        return float(self.beta_min(self.rho_lower))

    def contains(self, rho, beta, tol=1e-9):
        if self.empty:
            return False
        return (self.rho_lower - tol <= rho <= self.rho_upper + tol
                and self.beta_min(rho) - tol <= beta <= self.beta_max + tol)

    def to_dict(self):
        adict = dataclasses.asdict(self)
        adict['beta_lower'] = None if self.empty else self.beta_lower
        return adict


@dataclass(frozen=True)
class EEResult:
    """
    Maximum energy efficiency and where it occurs.

    Args:
        rho_star (float): optimal power splitting factor
        beta_star (float): optimal downlink fraction
        zeta_star (float): energy efficiency at the optimum in bits/joule
        branch (EEBranch): subset of the feasible ρ values the optimum was taken from
        feasible_sets (FeasibleSets): feasible region
        c_dl (float): downlink rate at the optimum in nats/Hz
        c_ul (float): uplink rate at the optimum in nats/Hz
        ratio_threshold (float): threshold T separating the two subsets
        grid_max (float): largest energy efficiency found on the verification grid
    """
    rho_star: float
    beta_star: float
    zeta_star: float
    branch: EEBranch
    feasible_sets: FeasibleSets
    c_dl: float = float('nan')
    c_ul: float = float('nan')
    ratio_threshold: float = float('nan')
    grid_max: float = float('nan')

    def to_dict(self):
        return {
            'rho_star': self.rho_star,
            'beta_star': self.beta_star,
            'zeta_star': self.zeta_star,
            'branch': self.branch.value,
            'feasible_sets': self.feasible_sets.to_dict(),
            'c_dl': self.c_dl,
            'c_ul': self.c_ul,
            'ratio_threshold': self.ratio_threshold,
            'grid_max': self.grid_max
        }


@dataclass(frozen=True)
class TrialOutcome:
    """
    Measurements of the typical user in one network realization.

    Args:
        trial (int): trial index, which together with the experiment seed identifies the random stream
        serving_tier (int): tier index of the serving base station
        association_distance (float): association-scaled squared distance w_*^(-2/α)|B_*|² in m²
        p_dl (float): received power in watts
        p_eh (float): harvested power η(1-ρ)P_dl in watts
        e_eh (float): harvested energy βτP_eh in joules
        sinr_dl (float): downlink SINR, inf without interference and noise
        sir_ul (float): uplink SIR at the serving base station, inf without interference
        resamples (int): number of degenerate realizations that were redrawn
    """
    trial: int
    serving_tier: int
    association_distance: float
    p_dl: float
    p_eh: float
    e_eh: float
    sinr_dl: float
    sir_ul: float
    resamples: int = 0

    def to_dict(self):
        return dataclasses.asdict(self)


@dataclass(frozen=True)
class ValidationCheck:
    """ Outcome of one check of the validation suite. """
    name: str
    passed: bool
    value: float
    reference: float
    tolerance: float
    detail: str = ''

    def to_dict(self):
        return dataclasses.asdict(self)


@dataclass
class RunManifest:
    """
    Everything needed to re-execute a command-line run.
    """
    command: str
    config: dict
    seed: int
    version: str
    wall_time: float = 0.0
    options: dict = field(default_factory=dict)
    results: dict = field(default_factory=dict)

    def to_dict(self):
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, adict):
        return cls(**{k: adict[k] for k in ('command', 'config', 'seed', 'version')},
                   wall_time=adict.get('wall_time', 0.0), options=adict.get('options', {}),
                   results=adict.get('results', {}))
