# coding=utf-8
import logging

VERBOSITY_LEVELS = {0: logging.WARNING, 1: logging.INFO}


def get_default_logger(name):
    """Get a logger from default logging manager. If no handler
    is associated, add a default NullHandler"""

    logger = logging.getLogger(name)
    if not logger.hasHandlers():
        # If logging is not configured in the embedding application,
        # discard records instead of reaching the lastResort handler
        logger.addHandler(logging.NullHandler())
    return logger


def configure_logging(verbosity=0, stream=None):
    """
    Configure the root logger for command line use.
    :param verbosity: 0 warning, 1 info, 2 or more debug
    :param stream: target stream, stderr when omitted
    :return: the effective level
    """
    level = VERBOSITY_LEVELS.get(verbosity, logging.DEBUG)
    logging.basicConfig(
        level=level,
        stream=stream,
        format="%(levelname)s %(name)s: %(message)s",
    )
    logging.getLogger("lvec").setLevel(level)
    return level
