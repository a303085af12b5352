"""Exception types raised across the package."""


class TpjcError(Exception):
    """Base class for all package errors."""


class TruncationTooSmall(TpjcError):
    """Amplitude about to leave the truncated Fock space is not negligible."""


class DimensionMismatch(TpjcError):
    """Two states or operators live on Fock spaces of different size."""


class AllMassRemoved(TpjcError):
    """Photon subtraction would remove (nearly) all probability mass."""


class ZeroMeanPhoton(TpjcError):
    """Statistic undefined for a state with zero mean photon number."""


class DiagonalizationFailure(TpjcError):
    """Dense Hermitian eigendecomposition did not converge."""


class ConfigInvalid(TpjcError):
    """Experiment configuration failed to parse or validate."""


class IoFailure(TpjcError):
    """Result file could not be written or read."""
