class MutascanError(Exception):
    """Base class for every error raised by this package on bad input or state."""
