"""GCC-PHAT grid-search sound source localization with an omni-drive simulation."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
