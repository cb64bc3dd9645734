"""Exception hierarchy shared by all captchalab modules."""


class CaptchaLabError(Exception):
    """Base class for every error raised by this package."""


class CodecError(CaptchaLabError):
    """Malformed or unsupported image bytes (PGM encode/decode)."""


class PlacementError(CaptchaLabError):
    """A bitmap or line placement falls outside the target canvas."""


class AtlasError(CaptchaLabError):
    """Glyph atlas file is incomplete, malformed, or inconsistent."""


class RenderError(CaptchaLabError):
    """Text rendering failed (unknown character or out-of-bounds)."""


class SpecError(CaptchaLabError):
    """A challenge spec violates its own constraints."""


class TrainingError(CaptchaLabError):
    """Classifier training preconditions not met."""


class ModelError(CaptchaLabError):
    """Classifier model bytes do not match the expected format."""


class BreakError(CaptchaLabError):
    """The breaking pipeline could not produce an answer."""


class SegmentationError(BreakError):
    """No usable character segments were found."""


class GenerationError(CaptchaLabError):
    """Extended-challenge generation failed (placement exhaustion or bad inputs)."""


class StoreError(CaptchaLabError):
    """Trial store persistence or replay failure."""


class RequestError(CaptchaLabError):
    """A client request the trial store must reject (unknown id, duplicate, closed)."""
