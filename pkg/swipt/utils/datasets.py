import os

# useful module level variables
_root_dir = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
_configuration_root = os.path.join(_root_dir, 'artifacts', 'Configurations')

# two-tier macro and small-cell network, alpha = 4 profile
table1_fname = os.path.join(_configuration_root, 'table1.toml')

# same network with alpha = 2.5
table1_alpha25_fname = os.path.join(_configuration_root, 'table1_alpha2.5.toml')
