"""Feature-based time-series characterization toolkit."""

from ._tskit import *  # noqa: F401,F403
from ._tskit import __version__  # noqa: F401
