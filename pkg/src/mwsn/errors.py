"""Exception types raised across the package."""


class MWSNError(Exception):
    """Base class for all package errors."""


class ConfigError(MWSNError, ValueError):
    """Invalid scenario, grid or CLI configuration.

    ``key`` names the offending configuration key path when known.
    """

    def __init__(self, message, key=None):
        self.key = key
        if key is not None:
            message = f"{key}: {message}"
        super().__init__(message)


class ScenarioError(MWSNError):
    """A scenario that cannot be run (disconnected start, negative budget, ...)."""


class DisconnectedGraphError(MWSNError):
    """Raised when an operation needs a connected communication graph."""
