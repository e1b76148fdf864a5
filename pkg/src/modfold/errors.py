"""Exception types shared across the package."""


class ModfoldError(Exception):
    """Base class for all package errors."""


class SignalError(ModfoldError):
    """Malformed waveform input or configuration."""


class UnfoldingError(ModfoldError):
    """Modulo unfolding cannot proceed (oversampling violated or noise too large)."""


class ChannelEstimationError(ModfoldError):
    """Modulo-domain channel estimation failed."""


class ConfigError(ModfoldError):
    """Invalid experiment configuration."""
