"""Matched interface and boundary solver for 2D elasticity interface problems."""
from .errors import MIBError

__version__ = "0.1.0"
__all__ = ["MIBError", "__version__"]
