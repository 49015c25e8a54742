import logging
import time

import numpy

LOG_FORMAT = '%(asctime)s %(levelname)s %(name)s: %(message)s'


class LoggingMixin:
    """
    Convenience super-class to have a logger configured with the class name
    """
    @property
    def log(self):
        try:
            return self._log
        except AttributeError:
            self._log = logging.root.getChild(
                self.__class__.__module__ + '.' + self.__class__.__name__
            )
            return self._log


def configure_logging(verbosity=0, stream=None):
    """
    Configures the root logger for command-line use. Library code only creates loggers and never
    attaches handlers, so this is called once by the entry point.

    Args:
        verbosity (int): 0 for warnings, 1 for info and 2 or more for debug messages
        stream: optional stream for the handler, defaults to stderr

    Returns:
        logging.Logger: the configured root logger
    """
    levels = {0: logging.WARNING, 1: logging.INFO}
    level = levels.get(verbosity, logging.DEBUG)
    root = logging.getLogger()
    for handler in list(root.handlers):
        root.removeHandler(handler)
    handler = logging.StreamHandler(stream)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    root.addHandler(handler)
    root.setLevel(level)
    return root


def log_progress(logger, done, total, t0, what='trials'):
    """
    Logs progress at round counts, e.g., after 1, 2, ..., 10, 20, ..., 100, 200, ... completed items and at the end.

    Args:
        logger (logging.Logger): target logger
        done (int): number of completed items
        total (int): total number of items
        t0 (float): start time from time.time()
        what (str): noun used in the message
    """
    if done <= 0:
        return
    tens_exp = numpy.floor(numpy.log10(done))
    if done % 10 ** tens_exp == 0 or done == total:
        logger.info(f'Processed {done} of {total} {what} in {time.time() - t0:.2f} seconds.')
