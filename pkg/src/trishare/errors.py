"""Shared exception base for the package.

Every error raised by trishare derives from Error, so callers (and the
CLI) can catch one type and map it to a nonzero exit.
"""


class Error(Exception):
    """Base class for all trishare errors."""
