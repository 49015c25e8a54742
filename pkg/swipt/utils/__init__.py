import os
import subprocess

from swipt._version import __version__


def current_git_hash(short=True):
    """
    Returns the commit hash of the source tree or None if the package is not running from a git checkout.
    """
    root_dir = os.path.dirname(os.path.abspath(__file__))
    cmd = ["git", "rev-parse", "--short", "HEAD"] if short else ["git", "rev-parse", "HEAD"]
    try:
        return subprocess.check_output(cmd, cwd=root_dir, stderr=subprocess.DEVNULL).decode().strip()
    except (OSError, subprocess.CalledProcessError):
        return None


def version_string():
    """
    git-describe-style version used in run manifests, e.g., '0.1.0+g1a2b3c4'.
    """
    githash = current_git_hash()
    if githash:
        return f'{__version__}+g{githash}'
    return __version__


def keys_in_dict(adict, keys):
    """
    Searches adict and returns vals in keys found in adict.keys()

    Args:
        adict (dict): dictionary
        keys (list): list of keys to search

    Returns:
        out (list): iterable of keys found
    """
    return [key for key in keys if key in adict.keys()]
