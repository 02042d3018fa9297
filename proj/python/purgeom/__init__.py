"""Connections, metrics and holonomy on the standard purification bundle."""

from ._purgeom import *  # noqa: F401,F403
from ._purgeom import NumericalFailure, ValidationFailure

__version__ = "0.1.0"


def connection(name):
    """Catalog connection by name, e.g. "bures" or "power(0.3)"."""
    return connection_catalog(name)  # noqa: F405


def metric(name):
    return metric_catalog(name)  # noqa: F405
