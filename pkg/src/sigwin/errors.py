"""Exception types raised across the sigwin pipeline."""


class SigwinError(Exception):
    """Base class for all sigwin errors."""


class EmptyImageError(SigwinError):
    """An image has no foreground ink where at least one pixel is required."""


class EmptyFragmentError(SigwinError):
    """Feature extraction was asked for a fragment with no foreground pixels."""


class DimensionMismatchError(SigwinError):
    """Two fragments (or images) that must share a size do not."""


class NoFragmentsError(SigwinError):
    """A scoring operation received no fragments to score."""


class UnknownWriterError(SigwinError):
    """A claimed writer id is not present in the registry."""


class EmptyRegistryError(SigwinError):
    """Identification was attempted against a registry with no profiles."""


class EmptyScoresError(SigwinError):
    """FAR/FRR/EER computation needs nonempty genuine and forgery score lists."""


class FormatError(SigwinError):
    """A persisted file (codebook, manifest, PNM image) is malformed."""


class ConfigMismatchError(SigwinError):
    """An operation's pipeline configuration disagrees with a stored manifest."""


class LayoutError(SigwinError):
    """A dataset directory does not follow the expected writer/sample layout."""


class InsufficientSamplesError(SigwinError):
    """An evaluation protocol asks for more enrollment samples than exist."""
