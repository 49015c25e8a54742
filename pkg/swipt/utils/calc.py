import numpy

from swipt.core.exceptions import SWIPTConfigException, SWIPTValueException
from swipt.utils.constants import POINTS_PER_DECADE


def log_grid(start, stop, points_per_decade=POINTS_PER_DECADE):
    """
    Logarithmic grid from start to stop (both included) with a fixed density of points per decade.

    Args:
        start (float): first abscissa, positive
        stop (float): last abscissa, larger than start
        points_per_decade (int): grid density

    Returns:
        numpy.ndarray: strictly increasing abscissae
    """
    if not 0 < start < stop:
        raise SWIPTValueException(f"log grid needs 0 < start < stop, got {start} and {stop}")
    decades = numpy.log10(stop / start)
    points = max(2, int(numpy.ceil(decades * points_per_decade)) + 1)
    return numpy.logspace(numpy.log10(start), numpy.log10(stop), points)


def make_grid(start, stop, points, log=False):
    """
    Linear or logarithmic grid with a fixed number of points, as used by parameter sweeps.
    """
    points = int(points)
    if points < 1:
        raise SWIPTValueException("grids need at least one point")
    if points == 1:
        return numpy.array([float(start)])
    if log:
        if not (start > 0 and stop > 0):
            raise SWIPTValueException("logarithmic grids need positive end points")
        grid = numpy.logspace(numpy.log10(start), numpy.log10(stop), points)
    else:
        grid = numpy.linspace(start, stop, points)
    if not numpy.all(numpy.diff(grid) > 0):
        raise SWIPTValueException("grids must be strictly increasing")
    return grid


def parse_sweep(text):
    """
    Parses a sweep description of the form FIELD=start:stop:points[:log].

    Args:
        text (str): sweep description

    Returns:
        tuple: field name (str) and grid (numpy.ndarray)
    """
    try:
        field, rhs = text.split('=', 1)
        parts = rhs.split(':')
        if len(parts) not in (3, 4):
            raise ValueError
        start, stop, points = float(parts[0]), float(parts[1]), int(parts[2])
        log = len(parts) == 4
        if log and parts[3] != 'log':
            raise ValueError
    except ValueError:
        raise SWIPTConfigException(f"sweep must read FIELD=start:stop:points[:log], got {text!r}")
    field = field.strip()
    if not field:
        raise SWIPTConfigException(f"sweep {text!r} does not name a field")
    try:
        return field, make_grid(start, stop, points, log=log)
    except SWIPTValueException as e:
        raise SWIPTConfigException(f"invalid sweep grid for {field}: {e}")
