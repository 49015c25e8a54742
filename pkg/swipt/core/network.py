"""
Derived network statistics and the parameter bundle shared by the analytical modules.
"""
import dataclasses
from dataclasses import dataclass

import numpy

from swipt.core.cell_load import nonvoid_probability
from swipt.core.exceptions import SWIPTConfigException, SWIPTValueException
from swipt.models import NetworkConfig, NetworkStats, SwiptConfig, SystemConfig, TierStats
from swipt.utils.constants import KM2_TO_M2


def derive_stats(net):
    """
    Cell loads, non-void probabilities and association probabilities of every tier.

    Args:
        net (NetworkConfig): network parameters

    Returns:
        NetworkStats: ℓ_m = w_m^(2/α) μ / λ_Σ, q_m = 1 - (1 + 2ℓ_m/7)^(-7/2), ϑ_m = w_m^(2/α) λ_m / λ_Σ
    """
    if not isinstance(net, NetworkConfig):
        raise SWIPTValueException("derive_stats expects a NetworkConfig")
    scaled = net.weights ** net.delta
    lambda_sigma = float(numpy.sum(scaled * net.intensities))
    loads = scaled * net.user_intensity / lambda_sigma
    probs = scaled * net.intensities / lambda_sigma
    q = nonvoid_probability(loads)
    tiers = tuple(TierStats(float(l), float(qm), float(t)) for l, qm, t in zip(loads, q, probs))
    return NetworkStats(lambda_sigma=lambda_sigma,
                        scheduled_user_intensity=float(numpy.sum(q * net.intensities)),
                        tiers=tiers)


def full_load_stats(stats):
    """
    Statistics in the limit of infinite cell loads, where every base station is non-void.
    """
    tiers = tuple(TierStats(numpy.inf, 1.0, t.association_prob) for t in stats.tiers)
    # with q_m = 1 every BS schedules a user
    return NetworkStats(lambda_sigma=stats.lambda_sigma,
                        scheduled_user_intensity=numpy.nan,
                        tiers=tiers)


def user_intensity_for_load(net, tier, load):
    """
    User intensity μ per square meter that gives the tier with index tier (0-based) the cell load ℓ.
    """
    if not load > 0:
        raise SWIPTValueException(f"cell load must be positive, got {load}")
    scaled = net.weights ** net.delta
    lambda_sigma = numpy.sum(scaled * net.intensities)
    return float(load * lambda_sigma / scaled[tier])


@dataclass(frozen=True)
class HarvestParams:
    """
    Network, receiver and derived statistics bundled for the analytical formulas.

    Args:
        network (NetworkConfig): network parameters
        swipt (SwiptConfig): receiver parameters
        stats (NetworkStats): derived statistics of network
        full_load (bool): True if stats are the infinite-load limit
    """
    network: NetworkConfig
    swipt: SwiptConfig
    stats: NetworkStats
    full_load: bool = False

    @classmethod
    def from_config(cls, config, full_load=False):
        params = cls(config.network, config.swipt, derive_stats(config.network))
        return params.with_full_load() if full_load else params

    @property
    def kappa(self):
        """ Harvesting scale η(1-ρ). """
        return self.swipt.conversion_efficiency * (1.0 - self.swipt.power_split)

    @property
    def alpha(self):
        return self.network.pathloss_exponent

    @property
    def delta(self):
        return self.network.delta

    @property
    def lambda_sigma(self):
        return self.stats.lambda_sigma

    @property
    def q(self):
        return self.stats.nonvoid_probs

    @property
    def theta(self):
        return self.stats.association_probs

    @property
    def powers(self):
        return self.network.powers

    @property
    def weights(self):
        return self.network.weights

    @property
    def antennas(self):
        return self.network.antennas

    @property
    def is_mrpa(self):
        return self.network.is_mrpa

    def with_full_load(self):
        return dataclasses.replace(self, stats=full_load_stats(self.stats), full_load=True)

    def with_swipt(self, **changes):
        """ Copy with some receiver parameters replaced, e.g., with_swipt(power_split=0.3). """
        return dataclasses.replace(self, swipt=dataclasses.replace(self.swipt, **changes))

    @property
    def config(self):
        return SystemConfig(self.network, self.swipt)


_NETWORK_FIELDS = {'pathloss_exponent': 1.0, 'user_intensity': KM2_TO_M2, 'noise_power': 1.0}
_TIER_FIELDS = {'transmit_power': 1.0, 'intensity': KM2_TO_M2, 'antennas': 1.0, 'association_weight': 1.0,
                'hardware_power': 1.0}
_ALIASES = {'rho': 'swipt.power_split', 'beta': 'swipt.downlink_fraction'}


def sweep_fields(config):
    """ All field names accepted by :func:`apply_override` for config. """
    names = [f'load.{m}' for m in range(1, config.network.n_tiers + 1)]
    names += [f'network.{f}' for f in _NETWORK_FIELDS]
    names += [f'tiers.{m}.{f}' for m in range(1, config.network.n_tiers + 1) for f in _TIER_FIELDS]
    names += [f'swipt.{f.name}' for f in dataclasses.fields(SwiptConfig)]
    return names + list(_ALIASES)


def apply_override(config, name, value):
    """
    Returns a copy of config with one field replaced. Intensities are given per square kilometer as in config files,
    and 'load.<m>' sets the user intensity so that tier m (1-based) carries the cell load value.

    Args:
        config (SystemConfig): base configuration
        name (str): sweep field, see :func:`sweep_fields`
        value (float): new value

    Returns:
        SystemConfig: validated copy
    """
    name = _ALIASES.get(name, name)
    parts = name.split('.')
    net = config.network
    try:
        if parts[0] == 'load' and len(parts) == 2:
            tier = _tier_index(parts[1], net)
            mu = user_intensity_for_load(net, tier, value)
            return dataclasses.replace(config, network=dataclasses.replace(net, user_intensity=mu))
        if parts[0] == 'network' and len(parts) == 2 and parts[1] in _NETWORK_FIELDS:
            new_net = dataclasses.replace(net, **{parts[1]: float(value) * _NETWORK_FIELDS[parts[1]]})
            return dataclasses.replace(config, network=new_net)
        if parts[0] == 'tiers' and len(parts) == 3 and parts[2] in _TIER_FIELDS:
            tier = _tier_index(parts[1], net)
            value = int(round(value)) if parts[2] == 'antennas' else float(value) * _TIER_FIELDS[parts[2]]
            tiers = list(net.tiers)
            tiers[tier] = dataclasses.replace(tiers[tier], **{parts[2]: value})
            return dataclasses.replace(config, network=dataclasses.replace(net, tiers=tuple(tiers)))
        if parts[0] == 'swipt' and len(parts) == 2 and parts[1] in {f.name for f in dataclasses.fields(SwiptConfig)}:
            return dataclasses.replace(config, swipt=dataclasses.replace(config.swipt, **{parts[1]: float(value)}))
    except SWIPTValueException as e:
        raise SWIPTConfigException(f"invalid value {value} for {name}: {e}")
    raise SWIPTConfigException(f"unknown sweep field {name!r}")


def _tier_index(text, net):
    try:
        tier = int(text) - 1
    except ValueError:
        raise SWIPTConfigException(f"tier index must be an integer, got {text!r}")
    if not 0 <= tier < net.n_tiers:
        raise SWIPTConfigException(f"tier index {text} out of range 1..{net.n_tiers}")
    return tier
