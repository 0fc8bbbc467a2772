"""Exception types raised across the package."""


class ConstlabError(Exception):
    """Base class for all package errors."""


class ParameterError(ConstlabError, ValueError):
    """A parameter is outside its documented range or malformed."""


class DimensionError(ConstlabError, ValueError):
    """Objects with different voter counts were combined."""


class CapacityError(ConstlabError):
    """The requested enumeration is too large for the chosen universe."""
