"""Shared exception base for the package.

Every module defines its own specific exceptions; they all derive from
SoccerForgeError so the CLI can surface any pipeline failure uniformly.
"""


class SoccerForgeError(Exception):
    """Base class for all errors raised by this package."""
