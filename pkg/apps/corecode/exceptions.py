class ReconError(Exception):
    """Base class for every error raised by the reconstruction pipeline."""


class DimensionError(ReconError, ValueError):
    """Spatial extents break a size rule (power of two, divisibility, minimum)."""


class ShapeError(ReconError, ValueError):
    """Array shapes or channel counts do not line up."""


class ConfigurationError(ReconError, ValueError):
    """A mask, training or recipe configuration is invalid."""


class DomainError(ReconError, ValueError):
    """A value lies outside the domain of the function it was passed to."""


class FormatError(ReconError, ValueError):
    """A file does not follow the TNS1, PGN1 or PGM layout."""


class DatasetError(ReconError):
    """A dataset on disk is incomplete or fails its checksums."""


class IncompatibleCheckpointError(ReconError):
    """A checkpoint does not match the architecture it is loaded into."""

    def __init__(self, message, name=None):
        super().__init__(message)
        self.name = name


class DivergenceError(ReconError, ArithmeticError):
    """Training produced a non-finite loss."""

    def __init__(self, message, epoch=None, step=None):
        super().__init__(message)
        self.epoch = epoch
        self.step = step
