"""Labor-market predator-prey dissimilarity dynamics toolkit."""

from ._workdyn import *  # noqa: F401,F403
from ._workdyn import __doc__  # noqa: F401

__version__ = "0.1.0"
