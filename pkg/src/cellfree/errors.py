"""Exception types shared across the package."""


class CellfreeError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(CellfreeError, ValueError):
    """A configuration value or config file entry is invalid."""


class PlacementError(CellfreeError):
    """Node placement is degenerate (coincident transmitter/receiver)."""


class IngestError(CellfreeError):
    """A measurement file or instance cannot be used."""


class RankDeficient(CellfreeError):
    """The estimated channel matrix is too ill-conditioned to invert."""


class Infeasible(CellfreeError):
    """The requested SINR floors cannot all be met under the power cap."""


class InfeasibleTargetSE(Infeasible):
    """The spectral-efficiency floor is unreachable even at full power."""
