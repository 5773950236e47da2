"""Bounds and executable linear-code schemes for two-terminal modulo-two
sum reconstruction of a doubly symmetric binary source.

Subpackages stay import-light; pull in :mod:`sumrecon.service` (FastAPI app)
or :mod:`sumrecon.cli` only where the HTTP surface is actually needed.
"""

__version__ = "0.1.0"

from .errors import CapacityError, ConstructionError, InvalidParameterError, SumReconError

__all__ = [
    "CapacityError",
    "ConstructionError",
    "InvalidParameterError",
    "SumReconError",
    "__version__",
]
