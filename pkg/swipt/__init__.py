from swipt._version import __version__

from swipt.core import cell_load
from swipt.core import energy_efficiency
from swipt.core import harvest
from swipt.core import link_rates
from swipt.core import shot_noise
from swipt.core import simulation
from swipt.core.network import HarvestParams, apply_override, derive_stats
from swipt.core.repositories import (
    load_json,
    write_json
)

from swipt.utils import datasets
from swipt.utils import readers

from swipt.models import (
    NetworkConfig,
    SwiptConfig,
    SystemConfig,
    TierConfig
)

# this defines what is imported on a `from swipt import *`
__all__ = [
    'load_json',
    'write_json',
    'cell_load',
    'datasets',
    'energy_efficiency',
    'harvest',
    'link_rates',
    'shot_noise',
    'simulation',
    'HarvestParams',
    'NetworkConfig',
    'SwiptConfig',
    'SystemConfig',
    'TierConfig',
    'apply_override',
    'derive_stats',
    'load_config',
    'load_params',
    '__version__'
]


def load_config(filename=None):
    """ Loads a network and receiver configuration from a TOML or JSON file.

    Args:
        filename (str): path to the file, defaults to the bundled two-tier configuration

    Returns:
        :class:`swipt.models.SystemConfig`
    """
    if filename is None:
        filename = datasets.table1_fname
    return SystemConfig.from_dict(readers.read_config_file(filename))


def load_params(filename=None, full_load=False):
    """ Loads a configuration and derives the statistics used by the analytical functions.

    Returns:
        :class:`swipt.core.network.HarvestParams`
    """
    return HarvestParams.from_config(load_config(filename), full_load=full_load)
