"""Operator-spreading and scrambling simulations for globally coupled spin models.

The compiled extension carries the full API; this package re-exports it so
`import scramblesim` works both from an installed wheel and from a build tree
placed on PYTHONPATH.
"""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
