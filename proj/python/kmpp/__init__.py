from ._kmpp import *  # noqa: F401,F403
from ._kmpp import __doc__  # noqa: F401

__version__ = "0.1.0"
