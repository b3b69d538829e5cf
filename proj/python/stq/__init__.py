"""Spatiotemporal quantum states: pseudo-density matrices, two-time states,
process matrices, and the statistics-preserving mappings between them."""

from ._stq import *  # noqa: F401,F403
from ._stq import __doc__ as _core_doc

__version__ = "0.1.0"
__doc__ = _core_doc
