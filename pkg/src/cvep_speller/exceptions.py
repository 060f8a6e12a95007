"""Exception hierarchy for the c-VEP speller."""


class CvepError(Exception):
    """Base class for every error raised by this package."""


class ZeroSeedError(CvepError, ValueError):
    pass


class NonMaximalPeriodError(CvepError, ValueError):
    """The LFSR state orbit closed before 2**order - 1 steps."""


class LagOutOfRangeError(CvepError, ValueError):
    pass


class LagCollisionError(CvepError, ValueError):
    """Two keyboard positions were assigned the same circular code lag."""


class InvalidBandError(CvepError, ValueError):
    pass


class SignalTooShortError(CvepError, ValueError):
    pass


class ZeroVarianceError(CvepError, ValueError):
    """A correlation input is constant, so Pearson's r is undefined."""


class ShapeMismatchError(CvepError, ValueError):
    pass


class PositionOutOfRangeError(CvepError, ValueError):
    pass


class EmptyInputError(CvepError, ValueError):
    pass


class UnknownCharacterError(CvepError, KeyError):
    pass


class WordNotInDictionaryError(CvepError, KeyError):
    pass


class DictionaryEmptyError(CvepError, ValueError):
    pass


class ConfigInvalidError(CvepError, ValueError):
    pass


class FormatError(CvepError, ValueError):
    """Malformed epoch file. The message carries the offending line number."""
