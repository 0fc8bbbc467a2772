"""Exact stability analysis of self-selecting voting rules."""

from constlab.errors import CapacityError, ConstlabError, DimensionError, ParameterError

__version__ = "0.1.0"

__all__ = ["CapacityError", "ConstlabError", "DimensionError", "ParameterError", "__version__"]
