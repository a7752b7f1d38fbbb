"""Exception types shared across the package."""


class MimomeError(Exception):
    """Base class for all package-specific errors."""


class DomainError(MimomeError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class OutageCertainError(DomainError):
    """The target secrecy rate is at or above the alphabet cap.

    The main channel's mutual information can never reach the cap, so a
    secrecy outage is certain.  Reported distinctly from an ordinary domain
    error so callers can tell "nonsense input" from "certain outage".
    """


class ConfigError(MimomeError, ValueError):
    """A configuration object or sweep description is invalid."""


class UnsupportedSizeError(ConfigError):
    """The antenna product exceeds what the closed-form series supports."""
