"""
Repository layer for run artifacts. Result tables are written as CSV or JSON and run manifests as JSON, so that any
run can be inspected and re-executed from its output directory.
"""
import datetime
import json
import os
import shutil

import numpy

from swipt.core.exceptions import SWIPTConfigException
from swipt.utils.log import LoggingMixin

# fixed float formatting keeps CSV output byte-identical between runs
CSV_FLOAT_FORMAT = '%.12g'
OUTPUT_FORMATS = ('csv', 'json')


def _default(obj):
    if isinstance(obj, numpy.generic):
        return obj.item()
    if isinstance(obj, numpy.ndarray):
        return obj.tolist()
    return str(obj)


class Repository(LoggingMixin):
    def __eq__(self, other):
        try:
            return self.to_dict() == other.to_dict()
        except AttributeError:
            return False

    def load(self, object):
        raise NotImplementedError

    def save(self, object):
        raise NotImplementedError

    def to_dict(self):
        raise NotImplementedError

    @classmethod
    def from_dict(cls, adict):
        raise NotImplementedError


class FileSystem(Repository):
    def __init__(self, url="", name='filesystem'):
        self.url = os.path.expandvars(os.path.expanduser(url))
        self.name = name

    def load(self, object):
        """
        Loads an object implementing from_dict() from the JSON file at url.
        """
        try:
            with open(self.url, 'r') as f:
                adict = json.load(f)
        except IOError:
            raise IOError(f"Unable to access file at {self.url}.")
        return object.from_dict(adict)

    def save(self, data, backup=False):
        """
        Saves JSON-serializable data to url, optionally keeping a time-stamped copy of an existing file.

        Returns:
            bool: True on success
        """
        if backup and os.path.isfile(self.url):
            time_str = datetime.datetime.now().strftime('%Y-%m-%dT%H:%M:%S:%f')
            fname = os.path.splitext(self.url)[0] + '_backup_' + time_str + '.json'
            shutil.copyfile(self.url, fname)
            self.log.info(f'Found file at {self.url} backing up to {fname}.')
        try:
            with open(self.url, 'w') as f:
                self.log.info(f'Writing file to {self.url}.')
                json.dump(data, f, indent=4, separators=(',', ': '), sort_keys=True, default=_default)
        except IOError:
            raise IOError(f"FileSystem Repository Error: saving file to {self.url}")
        return True

    def save_table(self, df, fmt='csv'):
        """
        Writes a pandas.DataFrame as CSV with a fixed float format, or as JSON records.
        """
        if fmt not in OUTPUT_FORMATS:
            raise SWIPTConfigException(f"output format must be one of {', '.join(OUTPUT_FORMATS)}, got {fmt!r}")
        self.log.info(f'Writing {len(df)} rows to {self.url}.')
        if fmt == 'csv':
            df.to_csv(self.url, index=False, float_format=CSV_FLOAT_FORMAT)
        else:
            self.save(df.to_dict(orient='list'))
        return True

    def to_dict(self):
        return {'name': self.name, 'url': self.url}

    @classmethod
    def from_dict(cls, adict):
        return cls(**adict)


def write_json(object, fname):
    """ Writes an object that implements to_dict() to a JSON file.

    Args:
        object (class): must implement a method called to_dict()
        fname (str): path of the file
    """
    FileSystem(url=fname).save(object.to_dict())


def load_json(object, fname):
    return FileSystem(url=fname).load(object)


def write_table(table, fname, fmt='csv'):
    """
    Writes a CurveTable or pandas.DataFrame.

    Args:
        table (CurveTable or pandas.DataFrame): data
        fname (str): output path
        fmt (str): 'csv' or 'json'
    """
    df = table.to_dataframe() if hasattr(table, 'to_dataframe') else table
    return FileSystem(url=fname).save_table(df, fmt=fmt)
