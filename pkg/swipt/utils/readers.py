import json
import os
import sys

from swipt.core.exceptions import SWIPTConfigException

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib


def read_config_file(filename):
    """
    Reads a TOML or JSON configuration into a plain dictionary. The format is chosen by the file extension.

    Args:
        filename (str): path to a .toml or .json file

    Returns:
        dict: parsed contents
    """
    ext = os.path.splitext(filename)[1].lower()
    if not os.path.isfile(filename):
        raise SWIPTConfigException(f"config file {filename} does not exist")
    try:
        if ext == '.toml':
            with open(filename, 'rb') as f:
                return tomllib.load(f)
        if ext == '.json':
            with open(filename, 'r') as f:
                return json.load(f)
    except (tomllib.TOMLDecodeError, json.JSONDecodeError) as e:
        raise SWIPTConfigException(f"unable to parse {filename}: {e}")
    raise SWIPTConfigException(f"unsupported config format {ext!r}, use .toml or .json")
