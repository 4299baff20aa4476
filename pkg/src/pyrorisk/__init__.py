"""pyrorisk: wildfire danger assessment.

Daily Canadian FWI indices computed from station weather, a from-scratch
CNN forward-pass engine scoring burn evidence on tiled imagery, and a
fusion rule combining both into a 0-5 danger level per tile.
"""

from .errors import DomainError, NotFittedError, ProviderError, PyroriskError

__version__ = "0.1.0"

__all__ = [
    "PyroriskError",
    "DomainError",
    "NotFittedError",
    "ProviderError",
    "__version__",
]
